#include "hydroweld/fem/reference_element.hpp"

#include <cmath>
#include <stdexcept>

namespace hydroweld::fem {

GaussRule1D gauss_legendre(int n_points) {
  switch (n_points) {
    case 1: return {{0.0}, {2.0}};
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      return {{-a, a}, {1.0, 1.0}};
    }
    case 3: {
      const double a = std::sqrt(0.6);
      return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      return {{-b, -a, a, b}, {wb, wa, wa, wb}};
    }
    default: throw std::invalid_argument("gauss_legendre: unsupported point count");
  }
}

void lagrange_1d(int order, double xi, Eigen::Ref<Eigen::VectorXd> v, Eigen::Ref<Eigen::VectorXd> d) {
  if (order == 1) {
    v << 0.5 * (1.0 - xi), 0.5 * (1.0 + xi);
    d << -0.5, 0.5;
  } else if (order == 2) {
    v << 0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0);
    d << xi - 0.5, -2.0 * xi, xi + 0.5;
  } else {
    throw std::invalid_argument("lagrange_1d: order must be 1 or 2");
  }
}

ReferenceQuad::ReferenceQuad(int order) : order_(order) {
  if (order != 1 && order != 2) throw std::invalid_argument("ReferenceQuad: order must be 1 or 2");
  const auto rule = gauss_legendre(order + 1);
  const int n1 = static_cast<int>(rule.points.size());
  const int npe = nodes_per_element();
  points_.resize(2, n1 * n1);
  weights_.resize(n1 * n1);
  values_.resize(npe, n1 * n1);
  gradients_.assign(n1 * n1, Eigen::Matrix2Xd(2, npe));
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n1; ++i) {
      const int q = i + n1 * j;
      points_.col(q) << rule.points[i], rule.points[j];
      weights_(q) = rule.weights[i] * rule.weights[j];
      Eigen::VectorXd vals(npe);
      Eigen::Matrix2Xd grads(2, npe);
      evaluate(points_.col(q), vals, grads);
      values_.col(q) = vals;
      gradients_[q] = grads;
    }
  }
}

void ReferenceQuad::evaluate(const Vec2& xi, Eigen::Ref<Eigen::VectorXd> values,
                             Eigen::Ref<Eigen::Matrix2Xd> grads) const {
  const int n = order_ + 1;
  Eigen::VectorXd vx(n), dx(n), vy(n), dy(n);
  lagrange_1d(order_, xi.x(), vx, dx);
  lagrange_1d(order_, xi.y(), vy, dy);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = i + n * j;
      values(a) = vx(i) * vy(j);
      grads(0, a) = dx(i) * vy(j);
      grads(1, a) = vx(i) * dy(j);
    }
  }
}

std::array<int, 4> ReferenceQuad::corners() const {
  const int n = order_ + 1;
  return {0, n - 1, n * n - 1, n * (n - 1)};
}

std::vector<int> ReferenceQuad::edge_nodes(int edge) const {
  const int n = order_ + 1;
  std::vector<int> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    switch (edge) {
      case 0: out.push_back(k); break;                        // eta = -1, xi increasing
      case 1: out.push_back((n - 1) + n * k); break;          // xi = +1, eta increasing
      case 2: out.push_back((n - 1 - k) + n * (n - 1)); break;  // eta = +1, xi decreasing
      case 3: out.push_back(n * (n - 1 - k)); break;          // xi = -1, eta decreasing
      default: throw std::invalid_argument("edge index out of range");
    }
  }
  return out;
}

Vec2 ReferenceQuad::node_coordinate(int a) const {
  const int n = order_ + 1;
  const int i = a % n, j = a / n;
  const double h = 2.0 / order_;
  return {-1.0 + h * i, -1.0 + h * j};
}

}  // namespace hydroweld::fem
