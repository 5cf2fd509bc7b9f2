#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "poropinn/evaluation.hpp"

using namespace poropinn;

namespace {

FieldFn exact_oracle(const ProblemSpec& prob) {
    return [&prob](double x, double t, Side s) { return prob.exact(x, t, s); };
}

FieldModel small_conn(EnforcementFlags enforce = {},
                      BuiltinProblem which = BuiltinProblem::Incompressible) {
    return build_model(ArchitectureKind::IpinnsConn, {6, 6}, Activation::Gelu,
                       Activation::Tanh, enforce, make_problem(which));
}

}  // namespace

TEST_CASE("the exact solution evaluates to zero error on every problem") {
    for (BuiltinProblem which : {BuiltinProblem::Incompressible, BuiltinProblem::Compressible,
                                 BuiltinProblem::Homogeneous}) {
        const ProblemSpec prob = make_problem(which);
        const auto rec = error_field_from(exact_oracle(prob), prob, {21, 21});
        for (const ErrorRecord& r : rec) {
            CHECK(r.abs_err_u == 0.0);
            CHECK(r.abs_err_p == 0.0);
        }
        const EvalReport rep = summarize_errors(rec);
        CHECK(rep.rmse_u == 0.0);
        CHECK(rep.rmse_p == 0.0);
        CHECK(rep.max_abs_err_u == 0.0);
        CHECK(rep.max_abs_err_p == 0.0);
    }
}

TEST_CASE("grids are row-major, corner-inclusive, and sized nx*nt") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    const auto rec = error_field_from(exact_oracle(prob), prob, {2, 2});
    REQUIRE(rec.size() == 4);
    CHECK(rec[0].x == 0.0);
    CHECK(rec[0].t == 0.0);
    CHECK(rec[1].x == 1.0);
    CHECK(rec[1].t == 0.0);
    CHECK(rec[2].x == 0.0);
    CHECK(rec[2].t == 1.0);
    CHECK(rec[3].x == 1.0);
    CHECK(rec[3].t == 1.0);

    const auto fine = error_field_from(exact_oracle(prob), prob, {});
    CHECK(fine.size() == 101 * 101);

    // reference columns come straight from the closed form
    const FieldJets f = prob.exact_at(1.0, 1.0);
    CHECK(rec[3].u_exact == f.u.val);
    CHECK(rec[3].p_exact == f.p.val);
}

TEST_CASE("evaluation rejects bad grids, custom problems, and short thetas") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Incompressible);
    CHECK_THROWS_AS(error_field_from(exact_oracle(prob), prob, {1, 5}), std::invalid_argument);

    PiecewiseCoefficients coeffs;
    const ProblemSpec custom = make_custom_problem(coeffs);
    const FieldModel m = build_model(ArchitectureKind::IpinnsConn, {4}, Activation::Gelu,
                                     Activation::Tanh, {}, custom);
    const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 1);
    CHECK_THROWS_AS(error_field(m, theta, {5, 5}), std::logic_error);

    const FieldModel ok = small_conn();
    std::vector<double> short_theta(ok.param_count() - 1, 0.0);
    CHECK_THROWS_AS(error_field(ok, short_theta, {5, 5}), std::invalid_argument);
}

TEST_CASE("the batched grid path agrees with pointwise prediction") {
    for (EnforcementFlags enforce : {EnforcementFlags{}, EnforcementFlags{true, true}}) {
        const FieldModel m = small_conn(enforce);
        const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 31);
        const auto rec = error_field(m, theta, {11, 7});
        REQUIRE(rec.size() == 77);
        for (const ErrorRecord& r : rec) {
            const FieldPrediction f = predict(m, theta, r.x, r.t);
            CHECK(r.u_pred == doctest::Approx(f.u.val).epsilon(1e-12));
            CHECK(r.p_pred == doctest::Approx(f.p.val).epsilon(1e-12));
        }
    }
}

TEST_CASE("snn channels land on the right fields") {
    const FieldModel m = build_model(ArchitectureKind::IpinnsSnn, {7}, Activation::Gelu,
                                     Activation::Tanh, {}, make_problem(BuiltinProblem::Compressible));
    const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 8);
    const auto rec = error_field(m, theta, {9, 5});
    for (const ErrorRecord& r : rec) {
        const FieldPrediction f = predict(m, theta, r.x, r.t);
        CHECK(r.u_pred == doctest::Approx(f.u.val).epsilon(1e-12));
        CHECK(r.p_pred == doctest::Approx(f.p.val).epsilon(1e-12));
    }
}

TEST_CASE("the interface column evaluates with the region-1 branch") {
    const FieldModel m = small_conn();
    const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 4);
    const double zeta = m.zeta();
    REQUIRE(zeta == 0.2);
    const auto rec = error_field(m, theta, {6, 3});  // x = 0.2 is column 1
    bool saw_interface = false;
    for (const ErrorRecord& r : rec) {
        if (r.x != zeta) continue;
        saw_interface = true;
        const FieldPrediction left = predict_side(m, theta, r.x, r.t, Side::Left);
        const FieldPrediction right = predict_side(m, theta, r.x, r.t, Side::Right);
        CHECK(r.u_pred == doctest::Approx(left.u.val).epsilon(1e-12));
        CHECK(r.u_pred != right.u.val);  // the two activations disagree generically
    }
    CHECK(saw_interface);
}

TEST_CASE("a constant offset oracle yields that offset as rmse and max") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Incompressible);
    const double du = 3e-3, dp = 7e-4;
    FieldFn shifted = [&](double x, double t, Side s) {
        FieldJets f = prob.exact(x, t, s);
        f.u.val += du;
        f.p.val -= dp;
        return f;
    };
    const EvalReport rep = summarize_errors(error_field_from(shifted, prob, {17, 13}));
    CHECK(rep.rmse_u == doctest::Approx(du).epsilon(1e-12));
    CHECK(rep.rmse_p == doctest::Approx(dp).epsilon(1e-12));
    CHECK(rep.max_abs_err_u == doctest::Approx(du).epsilon(1e-12));
    CHECK(rep.max_abs_err_p == doctest::Approx(dp).epsilon(1e-12));
    CHECK(rep.rmse_u <= rep.max_abs_err_u);
    CHECK(rep.rmse_p <= rep.max_abs_err_p);
}

TEST_CASE("max-error locations point at the worst grid point") {
    const FieldModel m = small_conn();
    const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 77);
    const auto rec = error_field(m, theta, {13, 9});
    const EvalReport rep = summarize_errors(rec);

    double best_u = -1.0, bx = 0.0, bt = 0.0;
    for (const ErrorRecord& r : rec)
        if (r.abs_err_u > best_u) {
            best_u = r.abs_err_u;
            bx = r.x;
            bt = r.t;
        }
    CHECK(rep.max_abs_err_u == best_u);
    CHECK(rep.max_err_u_x == bx);
    CHECK(rep.max_err_u_t == bt);
    CHECK(rep.rmse_u <= rep.max_abs_err_u);
    CHECK(rep.rmse_p <= rep.max_abs_err_p);
}

TEST_CASE("rmse is stable under record permutation") {
    const FieldModel m = small_conn();
    const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 5);
    auto rec = error_field(m, theta, {11, 11});
    const EvalReport before = summarize_errors(rec);
    std::mt19937 g(123);
    std::shuffle(rec.begin(), rec.end(), g);
    const EvalReport after = summarize_errors(rec);
    CHECK(after.rmse_u == doctest::Approx(before.rmse_u).epsilon(1e-13));
    CHECK(after.rmse_p == doctest::Approx(before.rmse_p).epsilon(1e-13));
    CHECK(after.max_abs_err_u == before.max_abs_err_u);
    CHECK(after.max_abs_err_p == before.max_abs_err_p);
}

TEST_CASE("refining the grid barely moves the rmse of a smooth model") {
    const FieldModel m = small_conn();
    const std::vector<double> theta = init_params(m, InitScheme::ScaledNormal, 19);
    const EvalReport coarse = evaluate_model(m, theta, {51, 51});
    const EvalReport fine = evaluate_model(m, theta, {101, 101});
    CHECK(std::abs(fine.rmse_u - coarse.rmse_u) < 0.05 * coarse.rmse_u);
    CHECK(std::abs(fine.rmse_p - coarse.rmse_p) < 0.05 * coarse.rmse_p);
}

TEST_CASE("a restricted sweep trains, reports finite errors, and keeps order") {
    SweepSettings s;
    s.depths = {2, 1};
    s.widths = {3, 5};
    s.counts.n_interior = 36;
    s.counts.n_boundary = 8;
    s.counts.n_ic = 5;
    s.counts.n_interface = 4;
    s.train.iterations = 150;
    s.train.log_every = 150;
    s.grid = {21, 21};

    int called = 0;
    const auto rows =
        architecture_sweep(make_problem(BuiltinProblem::Homogeneous), s,
                           [&](const SweepRow& row) {
                               ++called;
                               CHECK(std::isfinite(row.rmse_u));
                               CHECK(std::isfinite(row.rmse_p));
                           });
    REQUIRE(rows.size() == 4);
    CHECK(called == 4);
    CHECK(rows[0].depth == 2);
    CHECK(rows[0].width == 3);
    CHECK(rows[1].depth == 2);
    CHECK(rows[1].width == 5);
    CHECK(rows[2].depth == 1);
    CHECK(rows[3].width == 5);
    for (const SweepRow& r : rows) {
        CHECK(r.rmse_u > 0.0);
        CHECK(r.rmse_p > 0.0);
    }
}

TEST_CASE("sweep settings are validated") {
    const ProblemSpec prob = make_problem(BuiltinProblem::Homogeneous);
    SweepSettings s;
    s.widths = {};
    CHECK_THROWS_AS(architecture_sweep(prob, s), std::invalid_argument);
    s = SweepSettings{};
    s.depths = {0};
    CHECK_THROWS_AS(architecture_sweep(prob, s), std::invalid_argument);

    PiecewiseCoefficients coeffs;
    CHECK_THROWS_AS(architecture_sweep(make_custom_problem(coeffs), SweepSettings{}),
                    std::logic_error);
}
