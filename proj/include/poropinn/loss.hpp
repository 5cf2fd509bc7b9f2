#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "poropinn/architectures.hpp"
#include "poropinn/sampling.hpp"

namespace poropinn {

// One multiplier per mean-square term. The pde weight applies to both
// residual equations; the remaining groups follow the boundary /
// initial / interface split of the formulation.
struct LossWeights {
    double pde = 1.0;
    double bc_u = 500.0;
    double bc_t = 500.0;
    double bc_p = 500.0;
    double bc_f = 500.0;
    double ic_u = 300.0;
    double ic_p = 300.0;
    double int_u = 200.0;
    double int_sigma = 200.0;
    double int_p = 200.0;
    double int_q = 200.0;
};

// The usual way penalties are quoted: one number per condition group.
LossWeights weights_from_groups(double pde, double bc, double ic, double interface_w);

// Unweighted mean-square value of each term plus the weighted total.
struct LossBreakdown {
    double pde = 0.0;
    double bc_u = 0.0;
    double bc_t = 0.0;
    double bc_p = 0.0;
    double bc_f = 0.0;
    double ic_u = 0.0;
    double ic_p = 0.0;
    double int_u = 0.0;
    double int_sigma = 0.0;
    double int_p = 0.0;
    double int_q = 0.0;
    double total = 0.0;
};

// Fixed reporting order of the eleven terms (CSV columns, divergence
// diagnostics, ...).
inline constexpr std::array<std::string_view, 11> kLossTermNames = {
    "pde", "bc_u", "bc_t", "bc_p", "bc_f", "ic_u", "ic_p",
    "int_u", "int_sigma", "int_p", "int_q"};

std::array<double, 11> loss_terms(const LossBreakdown& b);
std::array<double, 11> weight_values(const LossWeights& w);

// Precomputes everything that is fixed across optimizer iterations — sample
// batches, hard-transform jets, boundary/initial targets, workspaces — and
// evaluates the full objective (and its parameter gradient) per call.
//
// Terms whose condition is hard-enforced by the model report exactly 0 and
// contribute nothing to the gradient.
class LossAssembler {
  public:
    LossAssembler(const FieldModel& model, const SampleSet& samples,
                  const LossWeights& weights);

    // Evaluates the breakdown at theta; when grad is non-null it is resized
    // to the parameter count and filled with d(total)/d(theta).
    LossBreakdown operator()(std::span<const double> theta, std::vector<double>* grad);

    const FieldModel& model() const { return model_; }

  private:
    enum class Kind { Interior, BoundaryX0, BoundaryX1, Initial, Interface };

    struct NetEval {
        int net = 0;  // index into model.specs
        int ns = 1;
        BatchWorkspace ws;
        const Eigen::MatrixXd* out = nullptr;  // forward result (owned by ws)
        Eigen::MatrixXd adj;
    };

    struct EvalSet {
        Kind kind;
        Side side;
        int npts = 0;
        std::vector<double> xs, ts;
        std::vector<NetEval> evals;
        // where each field lives: evals index + output row
        int eval_u = 0, unit_u = 0, eval_p = 0, unit_p = 0;
        // hard-transform jets per point; empty means identity
        std::vector<HardTransformJets> tf_u, tf_p;
        // per-point reference data, meaning depends on kind:
        //   Interior:   data0 = source f
        //   BoundaryX0: data0 = traction target, data1 = pressure target
        //   BoundaryX1: data0 = displacement target, data1 = flux target
        //   Initial:    data0 = u0, data1 = p0
        std::vector<double> data0, data1;
    };

    EvalSet make_set(Kind kind, Side side, std::vector<double> xs, std::vector<double> ts,
                     int ns_u, int ns_p);
    void forward_set(EvalSet& s, std::span<const double> theta);
    void backward_set(EvalSet& s, std::span<const double> theta, std::vector<double>& grad);
    Jet2 read_u(const EvalSet& s, int i) const;
    Jet2 read_p(const EvalSet& s, int i) const;
    static void seed_u(EvalSet& s, int i, const Jet2& adj);
    static void seed_p(EvalSet& s, int i, const Jet2& adj);

    FieldModel model_;
    LossWeights weights_;
    std::vector<EvalSet> sets_;
    // index pair of the interface sets inside sets_ (-1 when absent)
    int iface_left_ = -1, iface_right_ = -1;
    int n_interior_ = 0, n_b0_ = 0, n_b1_ = 0, n_ic_ = 0, n_iface_ = 0;
};

// One-shot convenience wrapper over LossAssembler.
LossBreakdown assemble_loss(const FieldModel& model, std::span<const double> theta,
                            const SampleSet& samples, const LossWeights& weights,
                            std::vector<double>* grad = nullptr);

// Same accounting over an arbitrary closed-form field instead of a network
// model; used to cross-check the batched path and to verify that an exact
// solution annihilates every term. All terms are evaluated softly.
using FieldFn = std::function<FieldJets(double x, double t, Side side)>;
LossBreakdown assemble_loss_field(const FieldFn& fields, const ProblemSpec& problem,
                                  const SampleSet& samples, const LossWeights& weights);

}  // namespace poropinn
