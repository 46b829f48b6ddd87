#include "satmig/allocation.hpp"

#include <cmath>

namespace satmig {

namespace {

double ordered_sum(const std::vector<double*>& values) {
  double sum = 0.0;
  for (const double* v : values) sum += *v;
  return sum;
}

}  // namespace

void fit_to_cap(const std::vector<double*>& values, double cap) {
  const double sum = ordered_sum(values);
  if (sum <= cap) return;
  for (double* v : values) *v *= cap / sum;
  // Rounding can leave the sum a few ulps above the cap.
  while (ordered_sum(values) > cap)
    for (double* v : values) *v = std::nextafter(*v, 0.0);
}

}  // namespace satmig
