#include "hydroweld/materials/constitutive.hpp"

#include <algorithm>
#include <cmath>

namespace hydroweld {

namespace mandel {

Mandel4 deviatoric_projector() {
  const Mandel m = identity();
  return Mandel4::Identity() - m * m.transpose() / 3.0;
}

double max_principal(const Mandel& s) {
  const double a = s(0), b = s(1), c = s(3) / std::sqrt(2.0);
  const double mid = 0.5 * (a + b);
  const double rad = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
  return std::max(mid + rad, s(2));
}

}  // namespace mandel

double yield_stress(const MaterialRegion& m, double T, double ep) {
  const double s0 = m.yield(T);
  return s0 * std::pow(1.0 + m.youngs(T) * ep / s0, m.hardening_exponent);
}

double hardening_modulus(const MaterialRegion& m, double T, double ep) {
  const double s0 = m.yield(T);
  const double E = m.youngs(T);
  const double N = m.hardening_exponent;
  return N * E * std::pow(1.0 + E * ep / s0, N - 1.0);
}

Mandel thermal_strain(const MaterialRegion& m, double T, double T0) {
  return m.expansion(T) * (T - T0) * mandel::identity();
}

ElasticModuli elastic_moduli(const MaterialRegion& m, double T) {
  const double E = m.youngs(T), nu = m.poisson;
  return {E / (3.0 * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

Mandel4 elasticity_tensor(const MaterialRegion& m, double T) {
  const auto [K, G] = elastic_moduli(m, T);
  const Mandel i = mandel::identity();
  return K * i * i.transpose() + 2.0 * G * mandel::deviatoric_projector();
}

std::pair<double, double> strain_energy_split(const MaterialRegion& m, const Mandel& e, double T) {
  const auto [K, G] = elastic_moduli(m, T);
  const double tr = mandel::trace(e);
  const Mandel dev = mandel::deviator(e);
  const double pos = std::max(tr, 0.0), neg = std::min(tr, 0.0);
  return {0.5 * K * pos * pos + G * dev.squaredNorm(), 0.5 * K * neg * neg};
}

double plastic_energy(const MaterialRegion& m, double ep, double T) {
  const double s0 = m.yield(T), E = m.youngs(T), N = m.hardening_exponent;
  return s0 * s0 / (E * (N + 1.0)) * (std::pow(1.0 + E * ep / s0, N + 1.0) - 1.0);
}

double gc_of_hydrogen(const MaterialRegion& m, double c) {
  const auto& d = m.degradation;
  const double cl = std::max(c, 0.0);
  return m.toughness * (d.xi + (1.0 - d.xi) * std::exp(-d.eta * std::pow(cl, d.b)));
}

double length_scale(const MaterialRegion& m, double toughness) {
  return 27.0 * m.youngs(21.0) * toughness / (256.0 * m.strength * m.strength);
}

double length_scale(const MaterialRegion& m) { return length_scale(m, m.toughness); }

PointHistory update_history(PointHistory h, double psi_plus, double psi_p, double beta) {
  h.history = std::max(h.history, psi_plus + beta * psi_p);
  return h;
}

StressUpdate stress_update(const MaterialRegion& m, const PointHistory& in, const Mandel& strain, double T, double phi,
                           const ConstitutiveOptions& opt) {
  StressUpdate out;
  out.history = in;
  const auto [K, G] = elastic_moduli(m, T);
  const Mandel one = mandel::identity();
  const Mandel4 pdev = mandel::deviatoric_projector();

  const Mandel trial = strain - in.strain_offset - in.plastic_strain - thermal_strain(m, T, opt.reference_temperature);
  const double tr = mandel::trace(trial);
  Mandel e_dev = mandel::deviator(trial);
  const Mandel s_trial = 2.0 * G * e_dev;
  const double q_trial = std::sqrt(1.5) * s_trial.norm();

  const double g = degradation_g(phi);
  const double gp = degradation_gp(phi, opt.beta);
  Mandel4 c_dev = 2.0 * G * pdev;
  double ep = in.eq_plastic_strain;

  if (opt.plasticity && g > 1e-12) {
    const double ratio = gp / g;
    const double f0 = q_trial - ratio * yield_stress(m, T, ep);
    if (f0 > opt.return_tolerance * ratio * yield_stress(m, T, ep)) {
      // Scalar return: q_trial - 3 G dg - ratio * sy(ep + dg) = 0, root in [0, q_trial / 3G].
      double lo = 0.0, hi = q_trial / (3.0 * G), dg = 0.0;
      bool ok = false;
      for (int it = 0; it < opt.max_return_iterations; ++it) {
        const double sy = yield_stress(m, T, ep + dg);
        const double f = q_trial - 3.0 * G * dg - ratio * sy;
        if (std::abs(f) <= opt.return_tolerance * ratio * sy) {
          ok = true;
          break;
        }
        if (f > 0.0) lo = dg; else hi = dg;
        double next = dg + f / (3.0 * G + ratio * hardening_modulus(m, T, ep + dg));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        dg = next;
      }
      if (!ok) throw SolverFailure("radial return did not converge");
      const Mandel n = s_trial / s_trial.norm();
      const double hp = ratio * hardening_modulus(m, T, ep + dg);
      out.history.plastic_strain += std::sqrt(1.5) * dg * n;
      out.history.eq_plastic_strain = ep + dg;
      e_dev -= std::sqrt(1.5) * dg * n;
      c_dev = 2.0 * G * (1.0 - 3.0 * G * dg / q_trial) * pdev +
              6.0 * G * G * (dg / q_trial - 1.0 / (3.0 * G + hp)) * n * n.transpose();
      out.plastic = true;
      ep += dg;
    }
  }

  const bool tension = tr >= 0.0;
  out.stress = g * 2.0 * G * e_dev + (tension ? g : 1.0) * K * tr * one;
  out.tangent = g * c_dev + (tension ? g : 1.0) * K * one * one.transpose();
  const double pos = std::max(tr, 0.0), neg = std::min(tr, 0.0);
  out.psi_plus = 0.5 * K * pos * pos + G * e_dev.squaredNorm();
  out.psi_minus = 0.5 * K * neg * neg;
  out.psi_p = plastic_energy(m, ep, T);
  out.history.stress = out.stress;
  out.history = update_history(out.history, out.psi_plus, out.psi_p, opt.beta);
  return out;
}

}  // namespace hydroweld
