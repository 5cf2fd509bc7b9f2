#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace poropinn {

// Flat first-order gradient with respect to a flat parameter vector.
using GradientVector = std::vector<double>;

// One offending entry from a finite-difference comparison.
struct FdEntryReport {
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
};

struct FdCheckReport {
    double max_rel_error = 0.0;
    FdEntryReport worst;
    std::size_t checked = 0;
    bool pass(double tol) const { return max_rel_error < tol; }
};

// Central-difference check of an analytic gradient on a subset of entries.
// `loss` must be a pure function of the parameter vector.  The relative
// error denominator is floored at a small fraction of the largest sampled
// gradient magnitude so that entries near zero are judged against the
// gradient's scale rather than against floating-point noise.
FdCheckReport finite_difference_check(
    const std::function<double(const std::vector<double>&)>& loss,
    const std::vector<double>& theta,
    const GradientVector& analytic,
    const std::vector<std::size_t>& indices,
    double step = 1e-6);

}  // namespace poropinn
