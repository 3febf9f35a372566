#include "hydroweld/mesh/state.hpp"

#include <stdexcept>

namespace hydroweld {

FieldState FieldState::initial(const Mesh& mesh, int nq, double temperature, bool all_active) {
  FieldState s;
  const Index nn = mesh.num_nodes();
  s.displacement = Eigen::VectorXd::Zero(2 * nn);
  s.temperature = Eigen::VectorXd::Constant(nn, temperature);
  s.lattice_hydrogen = Eigen::VectorXd::Zero(nn);
  s.phase_field = Eigen::VectorXd::Zero(nn);
  s.points.assign(static_cast<std::size_t>(mesh.num_elements() * nq), PointHistory{});
  s.active.assign(mesh.num_elements(), 1);
  if (!all_active)
    for (int k = 1; k <= mesh.n_beads; ++k)
      for (int e : mesh.bead(k)) s.active[e] = 0;
  return s;
}

bool bead_active(const Mesh& mesh, const FieldState& state, int bead) {
  for (int e : mesh.bead(bead))
    if (!state.active[e]) return false;
  return true;
}

FieldState activate_bead(const Mesh& mesh, FieldState state, int bead, double T_init) {
  if (bead < 1 || bead > mesh.n_beads) throw std::out_of_range("activate_bead: no bead " + std::to_string(bead));
  const auto& elems = mesh.bead(bead);
  for (int e : elems)
    if (state.active[e]) throw std::logic_error("activate_bead: bead " + std::to_string(bead) + " is already active");
  const int nq = static_cast<int>(state.points.size() / static_cast<std::size_t>(mesh.num_elements()));
  for (int e : elems) {
    state.active[e] = 1;
    for (int n : mesh.element(e)) state.temperature(n) = T_init;
    for (int q = 0; q < nq; ++q) {
      auto& p = state.point(e, q, nq);
      p = PointHistory{};
      p.pending_offset = true;
    }
  }
  return state;
}

}  // namespace hydroweld
