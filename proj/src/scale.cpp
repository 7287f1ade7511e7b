#include "netfloc/scale.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace netfloc {

long double pow5(int k) {
  assert(k >= 0);
  long double result = 1.0L;
  for (int i = 0; i < k; ++i) result *= 5.0L;
  return result;
}

bool scaled_reaches(double amount, int r, double target) {
  if (r >= 0) return static_cast<long double>(amount) * pow5(r) >= target;
  return amount >= static_cast<long double>(target) * pow5(-r);
}

bool within(double dist, double c, int r) {
  if (r >= 0) return dist <= static_cast<long double>(c) * pow5(r);
  return static_cast<long double>(dist) * pow5(-r) <= c;
}

int cround_ratio(double num, double den) {
  if (!(num > 0.0) || !(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) {
    throw std::invalid_argument("cround requires positive finite arguments");
  }
  int r = static_cast<int>(std::ceil(std::log(num / den) / std::log(5.0)));
  while (!scaled_reaches(den, r, num)) ++r;
  while (scaled_reaches(den, r - 1, num)) --r;
  return r;
}

int cround(double x) { return cround_ratio(x, 1.0); }

std::int64_t payment_units(int r, int base) {
  const int k = r - base;
  if (k < 0 || k > 27) throw std::out_of_range("payment exponent outside representable range");
  std::int64_t result = 1;
  for (int i = 0; i < k; ++i) result *= 5;
  return result;
}

double units_to_cost(std::int64_t units, int base) {
  const long double u = static_cast<long double>(units);
  if (base >= 0) return static_cast<double>(u * pow5(base));
  return static_cast<double>(u / pow5(-base));
}

}  // namespace netfloc
