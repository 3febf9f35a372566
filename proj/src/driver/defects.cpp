#include "hydroweld/driver/defects.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace hydroweld {

namespace {

constexpr std::array<std::pair<DefectType, std::string_view>, 7> kNames{{
    {DefectType::Porosity, "porosity"},
    {DefectType::LackOfPenetration, "lack-of-penetration"},
    {DefectType::Imperfections, "imperfections"},
    {DefectType::LackOfFusionOuter, "lack-of-fusion-outer"},
    {DefectType::LackOfFusionInner, "lack-of-fusion-inner"},
    {DefectType::RootContraction, "root-contraction"},
    {DefectType::Undercut, "undercut"},
}};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void bound(bool ok, const DefectSpec& s, const std::string& what) {
  if (!ok && !s.override_bounds)
    throw std::invalid_argument(std::string(defect_name(s.type)) + ": " + what +
                                " (set override = true to exceed the standard bound)");
}

struct PolylinePoint {
  double distance;
  double arclength;
};

PolylinePoint project(const Mesh& mesh, const std::vector<int>& path, const Vec2& p) {
  PolylinePoint best{std::numeric_limits<double>::infinity(), 0.0};
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 a = mesh.nodes.col(path[i]), b = mesh.nodes.col(path[i + 1]);
    const Vec2 ab = b - a;
    const double len = ab.norm();
    const double t = std::clamp((p - a).dot(ab) / (len * len), 0.0, 1.0);
    const double d = (a + t * ab - p).norm();
    if (d < best.distance) best = {d, s + t * len};
    s += len;
  }
  return best;
}

double path_length(const Mesh& mesh, const std::vector<int>& path) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) s += (mesh.nodes.col(path[i + 1]) - mesh.nodes.col(path[i])).norm();
  return s;
}

bool in_groove(const PipeWeldGeometry& pipe, const RefinementSpec& ref, const Vec2& p) {
  return p.x() >= pipe.inner_radius && p.x() <= pipe.outer_radius() &&
         std::abs(p.y()) <= pipe.groove_half_width(p.x(), ref.root_gap);
}

}  // namespace

std::string_view defect_name(DefectType t) {
  for (const auto& [k, n] : kNames)
    if (k == t) return n;
  return "?";
}

DefectType defect_from_name(std::string_view s) {
  for (const auto& [k, n] : kNames)
    if (n == s) return k;
  throw std::invalid_argument("unknown defect type '" + std::string(s) + "'");
}

void validate_defect(const DefectSpec& s, const PipeWeldGeometry& pipe) {
  const double t = pipe.thickness;
  switch (s.type) {
    case DefectType::Porosity:
      if (!(s.fraction > 0.0 && s.fraction <= 1.0))
        throw std::invalid_argument("porosity: fraction must lie in (0, 100%]");
      bound(s.fraction <= 0.01 * (1.0 + 1e-12), s, "fraction " + fmt(100.0 * s.fraction) + "% exceeds the 1% bound");
      break;
    case DefectType::LackOfPenetration:
      if (!(s.depth > 0.0 && s.depth < t)) throw std::invalid_argument("lack-of-penetration: depth must lie in (0, t)");
      bound(s.depth <= 2.0 + 1e-12, s, "depth " + fmt(s.depth) + " mm exceeds the 2 mm bound");
      break;
    case DefectType::Imperfections: {
      if (s.sizes.empty()) throw std::invalid_argument("imperfections: at least one size is required");
      for (double h : s.sizes)
        if (!(h > 0.0)) throw std::invalid_argument("imperfections: sizes must be positive");
      if (!s.centres.empty() && s.centres.size() != s.sizes.size())
        throw std::invalid_argument("imperfections: one centre per size is required");
      const double sum = std::accumulate(s.sizes.begin(), s.sizes.end(), 0.0);
      bound(sum <= 0.2 * t * (1.0 + 1e-9), s,
            "sum of sizes " + fmt(sum) + " mm exceeds 20% of the wall thickness (" + fmt(0.2 * t) + " mm)");
      break;
    }
    case DefectType::LackOfFusionOuter:
    case DefectType::LackOfFusionInner:
      if (!(s.depth >= 0.0) || !(s.width > 0.0) || !(s.offset >= 0.0))
        throw std::invalid_argument(std::string(defect_name(s.type)) + ": invalid length, width or offset");
      bound(s.depth <= 4.0 + 1e-12, s, "length " + fmt(s.depth) + " mm exceeds the 4 mm bound");
      break;
    case DefectType::RootContraction:
      if (!(s.depth > 0.0)) throw std::invalid_argument("root-contraction: depth must be positive");
      bound(s.depth <= 0.5 + 1e-12, s, "size " + fmt(s.depth) + " mm exceeds the 0.5 mm bound");
      break;
    case DefectType::Undercut:
      if (!(s.depth > 0.0)) throw std::invalid_argument("undercut: depth must be positive");
      bound(s.depth <= 0.8 + 1e-12, s, "size " + fmt(s.depth) + " mm exceeds the 0.8 mm bound");
      break;
  }
}

std::vector<SeededDefect> seed_defects(const Mesh& mesh, const MeshGeometry& geom, const std::vector<DefectSpec>& specs,
                                       const PipeWeldGeometry& pipe, const RefinementSpec& ref, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index np = geom.num_points();
  const int nq = geom.points_per_element();
  std::vector<Index> wm;
  for (Index p = 0; p < np; ++p)
    if (mesh.regions[p / nq] == Region::WM) wm.push_back(p);

  std::vector<SeededDefect> out;
  for (const auto& s : specs) {
    validate_defect(s, pipe);
    SeededDefect d{s.type, {}, {}};
    std::ostringstream place;
    // Mark points matching a predicate; fall back to the point nearest to `anchor`.
    auto mark = [&](auto&& inside, const Vec2& anchor, bool wm_only) {
      const std::size_t before = d.points.size();
      Index nearest = -1;
      double dmin = std::numeric_limits<double>::infinity();
      for (Index p = 0; p < np; ++p) {
        if (wm_only && mesh.regions[p / nq] != Region::WM) continue;
        const Vec2 x = geom.position(p / nq, static_cast<int>(p % nq));
        if (inside(x)) d.points.push_back(p);
        const double dist = (x - anchor).norm();
        if (dist < dmin) {
          dmin = dist;
          nearest = p;
        }
      }
      if (d.points.size() == before && nearest >= 0) d.points.push_back(nearest);
    };
    const double ri = pipe.inner_radius, ro = pipe.outer_radius();
    switch (s.type) {
      case DefectType::Porosity: {
        const auto count = static_cast<std::size_t>(std::llround(s.fraction * static_cast<double>(wm.size())));
        std::vector<Index> pool = wm;
        // Partial Fisher-Yates shuffle.
        for (std::size_t i = 0; i < count; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
          std::swap(pool[i], pool[pick(rng)]);
        }
        d.points.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
        place << count << " of " << wm.size() << " WM points";
        break;
      }
      case DefectType::LackOfPenetration:
        mark([&](const Vec2& x) { return x.x() - ri <= s.depth; }, Vec2(ri, 0.0), true);
        place << "WM band 0 <= r - r_i <= " << s.depth << " mm";
        break;
      case DefectType::Imperfections: {
        for (std::size_t i = 0; i < s.sizes.size(); ++i) {
          const double h = s.sizes[i];
          Vec2 c;
          if (!s.centres.empty()) {
            c = s.centres[i];
            if (!in_groove(pipe, ref, c))
              throw std::invalid_argument("imperfections: centre (" + fmt(c.x()) + ", " + fmt(c.y()) +
                                          ") lies outside the weld metal");
          } else {
            std::uniform_real_distribution<double> rr(ri + h, ro - h), zz(-1.0, 1.0);
            c.x() = rr(rng);
            c.y() = zz(rng) * std::max(pipe.groove_half_width(c.x(), ref.root_gap) - 0.5 * h, 0.0);
          }
          mark([&](const Vec2& x) { return (x - c).norm() <= 0.5 * h; }, c, true);
          place << (i ? "; " : "") << "disc d=" << h << " at (" << c.x() << ", " << c.y() << ")";
        }
        break;
      }
      case DefectType::LackOfFusionInner:
      case DefectType::LackOfFusionOuter: {
        const auto& path = mesh.node_path("fusion_left");
        const double total = path_length(mesh, path);
        const bool outer = s.type == DefectType::LackOfFusionOuter;
        // Outer default: the height of the last bead measured along the fusion line.
        double length = s.depth;
        if (length <= 0.0) length = total / std::max(pipe.n_beads, 1);
        const double s0 = outer ? total - s.offset - length : s.offset;
        const double s1 = s0 + length;
        mark(
            [&](const Vec2& x) {
              const auto pp = project(mesh, path, x);
              return pp.distance <= 0.5 * s.width && pp.arclength >= s0 && pp.arclength <= s1;
            },
            mesh.nodes.col(path[outer ? path.size() - 1 : 0]), false);
        place << "band width " << s.width << " mm along fusion_left, arclength [" << s0 << ", " << s1 << "] mm";
        break;
      }
      case DefectType::RootContraction: {
        const double z = 0.5 * ref.root_gap;
        for (double sign : {-1.0, 1.0}) {
          const Vec2 c(ri, sign * z);
          mark([&](const Vec2& x) { return (x - c).norm() <= 0.5 * s.depth; }, c, false);
        }
        place << "half-discs d=" << s.depth << " mm at root toes z = +-" << z;
        break;
      }
      case DefectType::Undercut: {
        const Vec2 c(ro, -pipe.groove_half_width(ro, ref.root_gap));
        mark([&](const Vec2& x) { return (x - c).norm() <= s.depth; }, c, false);
        place << "half-disc r=" << s.depth << " mm at outer toe (" << c.x() << ", " << c.y() << ")";
        break;
      }
    }
    std::sort(d.points.begin(), d.points.end());
    d.points.erase(std::unique(d.points.begin(), d.points.end()), d.points.end());
    d.placement = place.str();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace hydroweld
