#pragma once

#include <vector>

namespace satmig {

/// Scales the pointed-to values proportionally so that their left-to-right
/// sum does not exceed `cap`. Leaves them untouched when already within it.
void fit_to_cap(const std::vector<double*>& values, double cap);

}  // namespace satmig
