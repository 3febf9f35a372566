#include "hydroweld/driver/residual_state.hpp"

#include <cstring>
#include <fstream>

namespace hydroweld {

namespace {

constexpr char kMagic[8] = {'H', 'W', 'R', 'S', 'v', '0', '0', '1'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void get(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
  put(out, static_cast<std::int64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_vector(std::istream& in, Eigen::VectorXd& v) {
  std::int64_t n = 0;
  get(in, n);
  if (n < 0 || n > (std::int64_t{1} << 32)) throw std::runtime_error("residual state: corrupt vector length");
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
}

}  // namespace

ResidualState capture_residual_state(const Mesh& mesh, const FieldState& state, const Eigen::VectorXd& peak,
                                     int nq) {
  ResidualState r;
  r.mesh_fingerprint = mesh.fingerprint();
  r.points_per_element = nq;
  r.points = state.points;
  for (auto& p : r.points) {
    p.history = 0.0;
    p.pending_offset = false;
  }
  r.displacement = state.displacement;
  r.temperature = state.temperature;
  r.peak_temperature = peak;
  return r;
}

void save_residual_state(const ResidualState& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  put(out, s.mesh_fingerprint);
  put(out, static_cast<std::int32_t>(s.points_per_element));
  put(out, static_cast<std::int64_t>(s.points.size()));
  for (const auto& p : s.points) {
    out.write(reinterpret_cast<const char*>(p.plastic_strain.data()), 4 * sizeof(double));
    put(out, p.eq_plastic_strain);
    put(out, p.history);
    put(out, p.trap_density);
    out.write(reinterpret_cast<const char*>(p.stress.data()), 4 * sizeof(double));
    out.write(reinterpret_cast<const char*>(p.strain_offset.data()), 4 * sizeof(double));
  }
  put_vector(out, s.displacement);
  put_vector(out, s.temperature);
  put_vector(out, s.peak_temperature);
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

ResidualState load_residual_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open residual state '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("'" + path + "' is not a residual state file");
  ResidualState s;
  std::int32_t nq = 0;
  std::int64_t np = 0;
  get(in, s.mesh_fingerprint);
  get(in, nq);
  get(in, np);
  if (np < 0 || np > (std::int64_t{1} << 32)) throw std::runtime_error("residual state: corrupt point count");
  s.points_per_element = nq;
  s.points.resize(static_cast<std::size_t>(np));
  for (auto& p : s.points) {
    in.read(reinterpret_cast<char*>(p.plastic_strain.data()), 4 * sizeof(double));
    get(in, p.eq_plastic_strain);
    get(in, p.history);
    get(in, p.trap_density);
    in.read(reinterpret_cast<char*>(p.stress.data()), 4 * sizeof(double));
    in.read(reinterpret_cast<char*>(p.strain_offset.data()), 4 * sizeof(double));
  }
  get_vector(in, s.displacement);
  get_vector(in, s.temperature);
  get_vector(in, s.peak_temperature);
  if (!in) throw std::runtime_error("residual state '" + path + "' is truncated");
  return s;
}

FieldState transfer_state(const Mesh& mesh, const ResidualState& r, FieldState target) {
  if (r.mesh_fingerprint != mesh.fingerprint())
    throw FatalError("residual state was produced on a different mesh (fingerprint mismatch)");
  if (r.points.size() != target.points.size() || r.displacement.size() != target.displacement.size())
    throw FatalError("residual state does not match the target state layout");
  target.points = r.points;
  for (auto& p : target.points) p.pending_offset = false;
  target.displacement = r.displacement;
  target.temperature = r.temperature;
  std::fill(target.active.begin(), target.active.end(), char{1});
  return target;
}

}  // namespace hydroweld
