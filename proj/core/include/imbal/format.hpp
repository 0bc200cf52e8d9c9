#pragma once

#include <string>

namespace imbal {

/// Fixed text form for reals in every written file: 12 significant digits,
/// "inf", "-inf" or "nan" for non-finite values.
std::string format_real(double v);

/// v rounded to 12 significant digits (identity for non-finite values).
double round_real(double v);

}  // namespace imbal
