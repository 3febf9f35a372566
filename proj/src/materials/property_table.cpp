#include "hydroweld/materials/property_table.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hydroweld {

PropertyTable::PropertyTable(std::vector<double> temperatures, std::vector<double> values, bool positive)
    : t_(std::move(temperatures)), v_(std::move(values)) {
  if (t_.size() != v_.size()) throw std::invalid_argument("property table: column lengths differ");
  if (t_.size() < 2) throw std::invalid_argument("property table: at least two entries are required");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1])) throw std::invalid_argument("property table: temperatures must be strictly increasing");
  if (positive)
    for (double v : v_)
      if (!(v > 0.0)) throw std::invalid_argument("property table: values must be positive");
}

double PropertyTable::operator()(double T) const {
  if (T <= t_.front()) return v_.front();
  if (T >= t_.back()) return v_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), T);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  if (T == t_[i]) return v_[i];
  const double s = (T - t_[i]) / (t_[i + 1] - t_[i]);
  return v_[i] + s * (v_[i + 1] - v_[i]);
}

double PropertyTable::slope(double T) const {
  if (T < t_.front() || T >= t_.back()) return 0.0;
  const auto it = std::upper_bound(t_.begin(), t_.end(), T);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  return (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]);
}

double PropertyTable::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (a > b) return -integral(b, a);
  // Breakpoints within (a, b) split the integrand into linear pieces.
  std::vector<double> xs{a};
  for (double t : t_)
    if (t > a && t < b) xs.push_back(t);
  xs.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) sum += 0.5 * ((*this)(xs[i - 1]) + (*this)(xs[i])) * (xs[i] - xs[i - 1]);
  return sum;
}

PropertyTable PropertyTable::scaled(double f) const {
  PropertyTable out = *this;
  for (double& v : out.v_) v *= f;
  return out;
}

PropertyTable PropertyTable::read_csv(std::istream& in, bool positive) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("property CSV: missing header row");
  std::vector<double> t, v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) throw std::invalid_argument("property CSV: malformed row at line " + std::to_string(lineno));
    t.push_back(a);
    v.push_back(b);
  }
  return PropertyTable(std::move(t), std::move(v), positive);
}

PropertyTable PropertyTable::load_csv(const std::string& path, bool positive) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open property table '" + path + "'");
  return read_csv(in, positive);
}

void PropertyTable::write_csv(std::ostream& out, const std::string& header) const {
  out << header << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < t_.size(); ++i) out << t_[i] << ',' << v_[i] << '\n';
}

}  // namespace hydroweld
