#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "poropinn/gradient.hpp"

using namespace poropinn;

namespace {

// ring-coupled test objective with a hand-derived gradient
double objective(const std::vector<double>& th) {
    const std::size_t n = th.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::sin(th[i]) * th[(i + 1) % n] + 0.5 * th[i] * th[i];
    return s;
}

GradientVector objective_grad(const std::vector<double>& th) {
    const std::size_t n = th.size();
    GradientVector g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::cos(th[i]) * th[(i + 1) % n] + std::sin(th[(i + n - 1) % n]) + th[i];
    return g;
}

std::vector<double> test_point() {
    return {0.3, -1.2, 0.8, 2.1, -0.4, 0.05, 1.7, -0.9};
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

}  // namespace

TEST_CASE("correct analytic gradient passes the check") {
    const auto th = test_point();
    const auto rep = finite_difference_check(objective, th, objective_grad(th),
                                             all_indices(th.size()));
    CHECK(rep.checked == th.size());
    CHECK(rep.max_rel_error < 1e-7);
    CHECK(rep.pass(1e-6));
}

TEST_CASE("a corrupted gradient entry is flagged and located") {
    const auto th = test_point();
    auto g = objective_grad(th);
    g[3] += 0.5;
    const auto rep = finite_difference_check(objective, th, g, all_indices(th.size()));
    CHECK_FALSE(rep.pass(1e-6));
    CHECK(rep.worst.index == 3);
    CHECK(rep.worst.analytic == doctest::Approx(g[3]));
    CHECK(rep.max_rel_error > 1e-2);
}

TEST_CASE("a subset of indices limits what is checked") {
    const auto th = test_point();
    auto g = objective_grad(th);
    g[5] = 1e9;  // never inspected
    const auto rep = finite_difference_check(objective, th, g, {0, 2, 7});
    CHECK(rep.checked == 3);
    CHECK(rep.pass(1e-6));
}

TEST_CASE("invalid inputs are rejected") {
    const auto th = test_point();
    const auto g = objective_grad(th);
    CHECK_THROWS_AS(finite_difference_check(objective, th, g, {0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(finite_difference_check(objective, th, g, {th.size()}),
                    std::out_of_range);
    GradientVector short_grad(th.size() - 1, 0.0);
    CHECK_THROWS_AS(finite_difference_check(objective, th, short_grad, {0}),
                    std::invalid_argument);
}

TEST_CASE("empty index list is a vacuous pass") {
    const auto th = test_point();
    const auto rep = finite_difference_check(objective, th, objective_grad(th), {});
    CHECK(rep.checked == 0);
    CHECK(rep.max_rel_error == 0.0);
    CHECK(rep.pass(1e-12));
}
