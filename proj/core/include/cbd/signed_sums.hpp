#pragma once

#include <span>

namespace cbd {

enum class Parity { Even, Odd };

/// Maximum of sum(+/- a_i) over sign vectors with an odd number of minus
/// signs. Closed form: sum|a_i| - 2*[prod a_i > 0]*min|a_i|, where a zero
/// entry makes the indicator 0 (a zero absorbs the required minus for free).
/// Throws EmptyInput.
double s_odd(std::span<const double> values);

/// Same with an even number of minus signs; indicator is [prod a_i < 0].
double s_even(std::span<const double> values);

/// Brute-force maximum over all sign vectors of the requested parity.
/// Independent oracle for the closed forms. Throws EmptyInput, TooLong
/// (length capped at 24).
double s_parity_exhaustive(std::span<const double> values, Parity parity);

} // namespace cbd
