#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "poropinn/physics.hpp"
#include "poropinn/sampling.hpp"

using namespace poropinn;

namespace {

ProblemSpec custom_with_zeta(double zeta) {
    PiecewiseCoefficients c;
    c.zeta = zeta;
    return make_custom_problem(c);
}

void check_interior_invariants(const SampleSet& s) {
    auto check_list = [&](const PointList& pl, bool left) {
        REQUIRE(pl.x.size() == pl.t.size());
        for (int i = 0; i < pl.size(); ++i) {
            CHECK(pl.x[i] > 0.0);
            CHECK(pl.x[i] < 1.0);
            CHECK(pl.x[i] != s.zeta);
            if (left)
                CHECK(pl.x[i] < s.zeta);
            else
                CHECK(pl.x[i] > s.zeta);
            CHECK(pl.t[i] > 0.0);
            CHECK(pl.t[i] <= s.t_final);
        }
    };
    check_list(s.interior1, true);
    check_list(s.interior2, false);
}

// Kolmogorov-Smirnov distance between the sample and P(t <= q) = q^(1/k).
double ks_distance(std::vector<double> ts, double k) {
    std::sort(ts.begin(), ts.end());
    const double n = static_cast<double>(ts.size());
    double d = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double f = std::pow(ts[i], 1.0 / k);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    return d;
}

std::vector<double> all_interior_t(const SampleSet& s) {
    std::vector<double> ts = s.interior1.t;
    ts.insert(ts.end(), s.interior2.t.begin(), s.interior2.t.end());
    return ts;
}

}  // namespace

TEST_CASE("structured default counts form the near-square midpoint grid") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    const SampleSet s = sample_structured(SampleCounts{}, prob);

    CHECK(s.zeta == prob.coeffs.zeta);
    CHECK(s.t_final == prob.t_final);
    CHECK(s.interior_total() == 4900);

    // 4900 factors as 70 x 70: every column holds one full set of t midpoints
    std::map<double, std::vector<double>> columns;
    for (int i = 0; i < s.interior1.size(); ++i)
        columns[s.interior1.x[i]].push_back(s.interior1.t[i]);
    for (int i = 0; i < s.interior2.size(); ++i)
        columns[s.interior2.x[i]].push_back(s.interior2.t[i]);
    REQUIRE(columns.size() == 70);

    int col = 0;
    for (auto& [x, ts] : columns) {
        CHECK(x == (col + 0.5) / 70.0);
        REQUIRE(ts.size() == 70);
        std::sort(ts.begin(), ts.end());
        for (int j = 0; j < 70; ++j) CHECK(ts[j] == (j + 0.5) / 70.0);
        ++col;
    }

    // zeta = 0.5 splits the 70 columns evenly
    CHECK(s.interior1.size() == 35 * 70);
    CHECK(s.interior2.size() == 35 * 70);

    REQUIRE(s.boundary_x0.size() == 100);
    REQUIRE(s.boundary_x1.size() == 100);
    for (int j = 0; j < 100; ++j) {
        CHECK(s.boundary_x0[j] == (j + 0.5) / 100.0);
        CHECK(s.boundary_x1[j] == (j + 0.5) / 100.0);
    }

    REQUIRE(s.ic.size() == 100);
    for (int i = 0; i < 100; ++i) CHECK(s.ic[i] == i / 99.0);
    CHECK(s.ic.front() == 0.0);
    CHECK(s.ic.back() == 1.0);

    REQUIRE(s.interface_t.size() == 100);
    for (int j = 0; j < 100; ++j) CHECK(s.interface_t[j] == (j + 0.5) / 100.0);

    check_interior_invariants(s);
}

TEST_CASE("structured interior avoids the interface even when the grid hits it") {
    // with 10 columns the third midpoint lands exactly on zeta = 0.25
    SampleCounts counts;
    counts.n_interior = 100;
    const SampleSet s = sample_structured(counts, custom_with_zeta(0.25));
    check_interior_invariants(s);

    std::vector<double> xs = s.interior1.x;
    xs.insert(xs.end(), s.interior2.x.begin(), s.interior2.x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    REQUIRE(xs.size() == 10);
    CHECK(std::count(xs.begin(), xs.end(), 0.25) == 0);
    // the coincident column moved a quarter cell to the right
    CHECK(std::count(xs.begin(), xs.end(), 0.25 + 0.25 / 10.0) == 1);

    // column split stays proportional to the subdomain widths within one column
    const double cols_left = static_cast<double>(s.interior1.size()) / 10.0;
    CHECK(std::abs(cols_left - 0.25 * 10.0) <= 1.0);
}

TEST_CASE("structured nudge stays interior at the last column") {
    // zeta = 0.95 coincides with the final midpoint of a 10-column grid; the
    // quarter-cell shift must not push the column out of the domain
    SampleCounts counts;
    counts.n_interior = 100;
    const SampleSet s = sample_structured(counts, custom_with_zeta(0.95));
    check_interior_invariants(s);

    std::vector<double> xs = s.interior1.x;
    xs.insert(xs.end(), s.interior2.x.begin(), s.interior2.x.end());
    for (double x : xs) {
        CHECK(x != 0.95);
        CHECK(x < 1.0);
    }
    CHECK(std::count(xs.begin(), xs.end(), 0.95 + 0.25 / 10.0) == 10);
}

TEST_CASE("structured handles awkward interior counts") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);

    SampleCounts one;
    one.n_interior = 1;
    one.n_boundary = 5;
    one.n_ic = 1;
    one.n_interface = 1;
    const SampleSet s1 = sample_structured(one, custom_with_zeta(0.3));
    CHECK(s1.interior_total() == 1);
    CHECK(s1.interior2.x[0] == 0.5);
    CHECK(s1.interior2.t[0] == 0.5);
    CHECK(s1.boundary_x0.size() == 2);
    CHECK(s1.boundary_x1.size() == 3);
    REQUIRE(s1.ic.size() == 1);
    CHECK(s1.ic[0] == 0.5);

    // for zeta = 0.5 the lone midpoint collides with the interface and rides
    // the quarter-cell nudge
    const SampleSet s1h = sample_structured(one, prob);
    CHECK(s1h.interior2.x[0] == 0.75);
    check_interior_invariants(s1h);

    // a prime count degenerates to a single column of t midpoints
    SampleCounts prime;
    prime.n_interior = 13;
    const SampleSet s13 = sample_structured(prime, custom_with_zeta(0.3));
    CHECK(s13.interior_total() == 13);
    for (int i = 0; i < s13.interior2.size(); ++i) CHECK(s13.interior2.x[i] == 0.5);
    CHECK(s13.interior1.size() == 0);

    // 72 = 8 x 9 keeps the column count at the square-root side
    SampleCounts c72;
    c72.n_interior = 72;
    const SampleSet s72 = sample_structured(c72, prob);
    std::vector<double> xs = s72.interior1.x;
    xs.insert(xs.end(), s72.interior2.x.begin(), s72.interior2.x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    CHECK(xs.size() == 8);
    CHECK(s72.interior_total() == 72);
}

TEST_CASE("structured respects a longer time horizon") {
    ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    prob.t_final = 2.0;
    SampleCounts counts;
    counts.n_interior = 16;
    counts.n_boundary = 4;
    counts.n_interface = 5;
    const SampleSet s = sample_structured(counts, prob);
    CHECK(s.t_final == 2.0);
    check_interior_invariants(s);
    // 16 interior points = 4 columns x 4 rows, t midpoints stretched to [0,2]
    for (int i = 0; i < s.interior1.size(); ++i)
        CHECK(s.interior1.t[i] == (i % 4 + 0.5) / 4.0 * 2.0);
    REQUIRE(s.boundary_x0.size() == 2);
    CHECK(s.boundary_x0[0] == (0.5 / 2.0) * 2.0);
    CHECK(s.interface_t[4] == (4.5 / 5.0) * 2.0);
}

TEST_CASE("counts below one are rejected") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    SampleCounts c;
    c.n_interior = 0;
    CHECK_THROWS_AS(sample_structured(c, prob), std::invalid_argument);
    CHECK_THROWS_AS(sample_biased(c, prob, 1), std::invalid_argument);
    c = SampleCounts{};
    c.n_boundary = 0;
    CHECK_THROWS_AS(sample_structured(c, prob), std::invalid_argument);
    c = SampleCounts{};
    c.n_ic = -3;
    CHECK_THROWS_AS(sample_structured(c, prob), std::invalid_argument);
    c = SampleCounts{};
    c.n_interface = 0;
    CHECK_THROWS_AS(sample_biased(c, prob, 1), std::invalid_argument);
}

TEST_CASE("biased sampling is deterministic in the seed") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Incompressible);
    SampleCounts counts;
    counts.n_interior = 500;
    counts.n_boundary = 40;
    counts.n_ic = 30;
    counts.n_interface = 20;

    const SampleSet a = sample_biased(counts, prob, 42);
    const SampleSet b = sample_biased(counts, prob, 42);
    CHECK(a.interior1.x == b.interior1.x);
    CHECK(a.interior1.t == b.interior1.t);
    CHECK(a.interior2.x == b.interior2.x);
    CHECK(a.interior2.t == b.interior2.t);
    CHECK(a.boundary_x0 == b.boundary_x0);
    CHECK(a.boundary_x1 == b.boundary_x1);
    CHECK(a.ic == b.ic);
    CHECK(a.interface_t == b.interface_t);

    const SampleSet c = sample_biased(counts, prob, 43);
    CHECK(a.interior1.x != c.interior1.x);

    check_interior_invariants(a);
    for (double t : a.boundary_x0) {
        CHECK(t > 0.0);
        CHECK(t <= 1.0);
    }
    for (double x : a.ic) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("biased t draws match the power-law distribution") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    SampleCounts counts;
    counts.n_interior = 100000;

    for (double k : {1.0, 2.0, 4.0}) {
        const SampleSet s = sample_biased(counts, prob, 7, k);
        const double d = ks_distance(all_interior_t(s), k);
        INFO("exponent ", k, " ks ", d);
        CHECK(d <= 0.02);
    }

    // exponent 2 concentrates points near t = 0: the median sits near 0.25
    const SampleSet s2 = sample_biased(counts, prob, 7, 2.0);
    std::vector<double> ts = all_interior_t(s2);
    std::nth_element(ts.begin(), ts.begin() + ts.size() / 2, ts.end());
    CHECK(ts[ts.size() / 2] == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("biased subdomain counts follow the interface split") {
    SampleCounts counts;
    counts.n_interior = 100;

    const SampleSet quarter = sample_biased(counts, custom_with_zeta(0.25), 5);
    CHECK(quarter.interior1.size() == 25);
    CHECK(quarter.interior2.size() == 75);
    check_interior_invariants(quarter);

    // extreme splits still leave at least one point per subdomain
    SampleCounts ten;
    ten.n_interior = 10;
    const SampleSet hi = sample_biased(ten, custom_with_zeta(0.999), 5);
    CHECK(hi.interior1.size() == 9);
    CHECK(hi.interior2.size() == 1);
    const SampleSet lo = sample_biased(ten, custom_with_zeta(0.001), 5);
    CHECK(lo.interior1.size() == 1);
    CHECK(lo.interior2.size() == 9);
}

TEST_CASE("biased exponent below one is rejected") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    CHECK_THROWS_AS(sample_biased(SampleCounts{}, prob, 1, 0.5), std::invalid_argument);
    CHECK_NOTHROW(sample_biased(SampleCounts{}, prob, 1, 1.0));
}

TEST_CASE("csv dump tags every point with its location") {
    SampleCounts counts;
    counts.n_interior = 4;
    counts.n_boundary = 3;
    counts.n_ic = 2;
    counts.n_interface = 2;
    const ProblemSpec prob = make_problem(BuiltinProblem::Compressible);
    const SampleSet s = sample_structured(counts, prob);

    std::ostringstream os;
    write_samples_csv(os, s);
    std::istringstream is(os.str());
    std::vector<std::string> lines;
    for (std::string line; std::getline(is, line);) lines.push_back(line);

    REQUIRE(lines.size() == 1u + 4 + 3 + 2 + 2);
    CHECK(lines[0] == "set_tag,x,t");

    int interior = 0, b0 = 0, b1 = 0, ic = 0, iface = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& l = lines[i];
        if (l.rfind("interior", 0) == 0) ++interior;
        if (l.rfind("boundary_x0,0,", 0) == 0) ++b0;
        if (l.rfind("boundary_x1,1,", 0) == 0) ++b1;
        if (l.rfind("ic,", 0) == 0) {
            ++ic;
            CHECK(l.substr(l.size() - 2) == ",0");
        }
        if (l.rfind("interface,", 0) == 0) ++iface;
    }
    CHECK(interior == 4);
    CHECK(b0 == 1);
    CHECK(b1 == 2);
    CHECK(ic == 2);
    CHECK(iface == 2);

    // values survive the round trip exactly (printed at max_digits10)
    const std::string first = lines[1];
    const auto c1 = first.find(','), c2 = first.find(',', first.find(',') + 1);
    const double x = std::stod(first.substr(c1 + 1, c2 - c1 - 1));
    const double t = std::stod(first.substr(c2 + 1));
    CHECK(x == s.interior1.x[0]);
    CHECK(t == s.interior1.t[0]);
}
