#include "cbd/signed_sums.hpp"

#include "cbd/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace cbd {

namespace {

// Sign of the product via parity of strict negatives; avoids overflow and
// underflow of the literal product. Any zero entry zeroes both indicators.
double signed_sum_closed(std::span<const double> values, Parity parity) {
  if (values.empty()) {
    throw EmptyInput("signed sum of an empty sequence");
  }
  double sum_abs = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  bool has_zero = false;
  int negatives = 0;
  for (double a : values) {
    const double abs_a = std::abs(a);
    sum_abs += abs_a;
    min_abs = std::min(min_abs, abs_a);
    if (a == 0.0) {
      has_zero = true;
    } else if (a < 0.0) {
      ++negatives;
    }
  }
  const bool product_positive = !has_zero && negatives % 2 == 0;
  const bool product_negative = !has_zero && negatives % 2 == 1;
  const bool penalized =
      parity == Parity::Odd ? product_positive : product_negative;
  return penalized ? sum_abs - 2.0 * min_abs : sum_abs;
}

} // namespace

double s_odd(std::span<const double> values) {
  return signed_sum_closed(values, Parity::Odd);
}

double s_even(std::span<const double> values) {
  return signed_sum_closed(values, Parity::Even);
}

double s_parity_exhaustive(std::span<const double> values, Parity parity) {
  const std::size_t n = values.size();
  if (n == 0) {
    throw EmptyInput("signed sum of an empty sequence");
  }
  if (n > 24) {
    throw TooLong("exhaustive signed sum limited to 24 entries, got " +
                  std::to_string(n));
  }
  // Each mask bit k flips the sign of values[k]; the sum is rebuilt from
  // scratch per mask so no rounding drift accumulates across the sweep.
  const bool want_odd = parity == Parity::Odd;
  double best = -std::numeric_limits<double>::infinity();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if ((std::popcount(mask) % 2 == 1) != want_odd) {
      continue;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += ((mask >> k) & 1u) ? -values[k] : values[k];
    }
    best = std::max(best, sum);
  }
  return best;
}

} // namespace cbd
