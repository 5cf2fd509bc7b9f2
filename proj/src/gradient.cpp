#include "poropinn/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poropinn {

FdCheckReport finite_difference_check(
    const std::function<double(const std::vector<double>&)>& loss,
    const std::vector<double>& theta,
    const GradientVector& analytic,
    const std::vector<std::size_t>& indices,
    double step) {
    if (step <= 0.0) throw std::invalid_argument("finite_difference_check: step must be positive");
    if (analytic.size() != theta.size())
        throw std::invalid_argument("finite_difference_check: gradient/parameter size mismatch");

    double scale = 0.0;
    for (std::size_t idx : indices) {
        if (idx >= theta.size())
            throw std::out_of_range("finite_difference_check: index out of range");
        scale = std::max(scale, std::abs(analytic[idx]));
    }
    const double floor = std::max(1e-3 * scale, 1e-12);

    FdCheckReport report;
    std::vector<double> probe = theta;
    for (std::size_t idx : indices) {
        const double h = step * std::max(1.0, std::abs(theta[idx]));
        probe[idx] = theta[idx] + h;
        const double fp = loss(probe);
        probe[idx] = theta[idx] - h;
        const double fm = loss(probe);
        probe[idx] = theta[idx];
        const double numeric = (fp - fm) / (2.0 * h);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[idx]), floor});
        const double rel = std::abs(numeric - analytic[idx]) / denom;
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst = {idx, analytic[idx], numeric, rel};
        }
        ++report.checked;
    }
    return report;
}

}  // namespace poropinn
