#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hydroweld {

/// Piecewise-linear function of temperature, clamped to its end values.
class PropertyTable {
 public:
  PropertyTable() = default;
  /// Throws std::invalid_argument unless there are >= 2 strictly increasing
  /// abscissae and (when `positive`) all ordinates are > 0.
  PropertyTable(std::vector<double> temperatures, std::vector<double> values, bool positive = true);

  double operator()(double T) const;
  /// dvalue/dT (zero outside the table, right derivative at breakpoints).
  double slope(double T) const;
  /// Exact integral of the table from a to b.
  double integral(double a, double b) const;

  const std::vector<double>& temperatures() const { return t_; }
  const std::vector<double>& values() const { return v_; }
  bool empty() const { return t_.empty(); }
  /// Same abscissae, ordinates multiplied by f.
  PropertyTable scaled(double f) const;

  /// Two-column CSV (T, value) with one header row carrying the unit string.
  static PropertyTable read_csv(std::istream& in, bool positive = true);
  static PropertyTable load_csv(const std::string& path, bool positive = true);
  void write_csv(std::ostream& out, const std::string& header) const;

  friend bool operator==(const PropertyTable&, const PropertyTable&) = default;

 private:
  std::vector<double> t_, v_;
};

inline double lookup(const PropertyTable& table, double T) { return table(T); }

}  // namespace hydroweld
