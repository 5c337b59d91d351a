#include "d2dcov/harness/units.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace d2dcov {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool known_unit(const std::string& u) {
  return u == "db" || u == "linear" || u == "mw" || u == "w";
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0))
    throw std::invalid_argument("linear_to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

double convert_units(double value, std::string_view from, std::string_view to) {
  const std::string f = lower(from);
  const std::string t = lower(to);
  if (!known_unit(f) || !known_unit(t))
    throw std::invalid_argument("convert_units: unknown unit '" +
                                (known_unit(f) ? t : f) + "'");
  if (f == t) return value;
  if (f == "db" && t == "linear") return db_to_linear(value);
  if (f == "linear" && t == "db") return linear_to_db(value);
  if (f == "mw" && t == "w") return value * 1e-3;
  if (f == "w" && t == "mw") return value * 1e3;
  throw std::invalid_argument("convert_units: no conversion from '" + f +
                              "' to '" + t + "'");
}

}  // namespace d2dcov
