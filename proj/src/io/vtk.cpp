#include "hydroweld/io/vtk.hpp"

#include "hydroweld/hydrogen/transport.hpp"
#include "hydroweld/io/csv.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <ostream>

namespace hydroweld::io {

namespace {

// Lexicographic local numbering -> VTK corner/edge/centre order.
constexpr std::array<int, 4> kQuad{0, 1, 3, 2};
constexpr std::array<int, 9> kBiquad{0, 2, 8, 6, 1, 5, 7, 3, 4};

void check(Index got, Index expected, const std::string& name) {
  if (got != expected)
    throw std::invalid_argument("vtk field '" + name + "' has " + std::to_string(got) + " entries, expected " +
                                std::to_string(expected));
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields, const std::string& title) {
  const Index nn = mesh.num_nodes(), ne = mesh.num_elements();
  for (const auto& [name, v] : fields.point_scalars) check(v.size(), nn, name);
  for (const auto& [name, v] : fields.cell_scalars) check(v.size(), ne, name);
  for (const auto& [name, v] : fields.cell_tensors) check(v.cols(), ne, name);
  if (mesh.order != 1 && mesh.order != 2) throw std::invalid_argument("vtk: unsupported element order");

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nn << " double\n";
  for (Index n = 0; n < nn; ++n)
    out << format_number(mesh.nodes(0, n)) << ' ' << format_number(mesh.nodes(1, n)) << " 0\n";
  const int npe = mesh.nodes_per_element();
  out << "CELLS " << ne << ' ' << ne * (npe + 1) << '\n';
  for (Index e = 0; e < ne; ++e) {
    const auto nodes = mesh.element(e);
    out << npe;
    for (int k = 0; k < npe; ++k) out << ' ' << nodes[mesh.order == 1 ? kQuad[k] : kBiquad[k]];
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (Index e = 0; e < ne; ++e) out << (mesh.order == 1 ? 9 : 28) << '\n';

  if (!fields.point_scalars.empty()) {
    out << "POINT_DATA " << nn << '\n';
    for (const auto& [name, v] : fields.point_scalars) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (Index n = 0; n < nn; ++n) out << format_number(v(n)) << '\n';
    }
  }
  if (!fields.cell_scalars.empty() || !fields.cell_tensors.empty()) {
    out << "CELL_DATA " << ne << '\n';
    for (const auto& [name, v] : fields.cell_scalars) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (Index e = 0; e < ne; ++e) out << format_number(v(e)) << '\n';
    }
    for (const auto& [name, v] : fields.cell_tensors) {
      out << "TENSORS " << name << " double\n";
      for (Index e = 0; e < ne; ++e)
        for (int i = 0; i < 3; ++i)
          out << format_number(v(3 * i, e)) << ' ' << format_number(v(3 * i + 1, e)) << ' '
              << format_number(v(3 * i + 2, e)) << '\n';
    }
  }
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const VtkFields& fields,
               const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_vtk(out, mesh, fields, title);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

VtkFields state_fields(const Mesh& mesh, const MeshGeometry& geometry, const FieldState& state,
                       const MaterialSet& materials, const Eigen::VectorXd* peak_temperature) {
  VtkFields f;
  f.point_scalars.emplace_back("T", state.temperature);
  f.point_scalars.emplace_back("C_L", state.lattice_hydrogen);
  f.point_scalars.emplace_back("phase_field", state.phase_field);
  if (peak_temperature) f.point_scalars.emplace_back("peak_temperature", *peak_temperature);

  const Index ne = mesh.num_elements();
  const int nq = geometry.points_per_element();
  const TransportModel transport(mesh, geometry, materials, TransportOptions{});
  const auto trapping = transport.point_trapping(state);
  Eigen::Matrix<double, 9, Eigen::Dynamic> stress = Eigen::Matrix<double, 9, Eigen::Dynamic>::Zero(9, ne);
  Eigen::VectorXd ep = Eigen::VectorXd::Zero(ne), ct = Eigen::VectorXd::Zero(ne);
  for (Index e = 0; e < ne; ++e) {
    double vol = 0.0;
    Mandel s = Mandel::Zero();
    for (int q = 0; q < nq; ++q) {
      const double w = geometry.measure(e, q);
      const auto p = geometry.point_index(e, q);
      s += w * state.points[p].stress;
      ep(e) += w * state.points[p].eq_plastic_strain;
      ct(e) += w * trapping[p].total_trapped;
      vol += w;
    }
    s /= vol;
    ep(e) /= vol;
    ct(e) /= vol;
    const double shear = s(3) / std::sqrt(2.0);
    stress.col(e) << s(0), shear, 0.0, shear, s(1), 0.0, 0.0, 0.0, s(2);
  }
  f.cell_tensors.emplace_back("stress", std::move(stress));
  f.cell_scalars.emplace_back("eq_plastic_strain", std::move(ep));
  f.cell_scalars.emplace_back("C_T_total", std::move(ct));
  return f;
}

}  // namespace hydroweld::io
