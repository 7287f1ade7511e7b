#pragma once

#include <cstdint>

// Radius-scale arithmetic. Every comparison against c * 5^r goes through these
// helpers so that the engine and the reference oracle round identically. For
// negative r the power is moved to the other side of the inequality, so integer
// inputs compare exactly.

namespace netfloc {

namespace constants {
inline constexpr double c1 = 20;
inline constexpr double c2 = 35;
inline constexpr double cX = 2 * c2 + 2;
inline constexpr double c3 = cX + c2;
inline constexpr double cY = 2 * c3 + c2;
inline constexpr double c4 = cY + c2;

static_assert(cX == 72 && c3 == 107 && cY == 249 && c4 == 284);
static_assert(cY == 2 * cX + 3 * c2);

/// Payment-to-cost factor: assignment distance plus facility share.
inline constexpr double payment_factor = c2 + c3 + c4 + 1;
/// Overall approximation factor against the optimum.
inline constexpr double approximation_factor = 5 * payment_factor;

static_assert(payment_factor == 427 && approximation_factor == 2135);
}  // namespace constants

/// 5^k for k >= 0, exact up to k = 27 in long double.
long double pow5(int k);

/// True iff amount * 5^r >= target.
bool scaled_reaches(double amount, int r, double target);

/// dist <= c * 5^r
bool within(double dist, double c, int r);

/// Least integer r with 5^r >= x, for x > 0.
int cround(double x);

/// Least integer r with 5^r * den >= num, for num, den > 0.
int cround_ratio(double num, double den);

/// Abundance test: 5^r * clients >= fstar.
inline bool abundant(int r, std::uint64_t clients, double fstar) {
  return clients > 0 && scaled_reaches(static_cast<double>(clients), r, fstar);
}

/// 5^(r - base) as an integer count of base units. Requires r >= base.
std::int64_t payment_units(int r, int base);

/// Converts a unit count back to a real cost: units * 5^base.
double units_to_cost(std::int64_t units, int base);

}  // namespace netfloc
