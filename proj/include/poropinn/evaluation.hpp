#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "poropinn/architectures.hpp"
#include "poropinn/loss.hpp"
#include "poropinn/sampling.hpp"
#include "poropinn/training.hpp"

namespace poropinn {

// Tensor-product grid over [0,1] x [0,t_final], both axes inclusive of the
// endpoints: x_i = i/(nx-1), t_j = t_final * j/(nt-1).
struct EvalGrid {
    int nx = 101;
    int nt = 101;
};

// One grid point compared against the closed-form solution.  The x = zeta
// column uses the region-1 branch for both the prediction and the reference,
// matching the membership rule everywhere else in the pipeline.
struct ErrorRecord {
    double x = 0.0, t = 0.0;
    double u_pred = 0.0, p_pred = 0.0;
    double u_exact = 0.0, p_exact = 0.0;
    double abs_err_u = 0.0, abs_err_p = 0.0;
};

struct EvalReport {
    double rmse_u = 0.0, rmse_p = 0.0;
    double max_abs_err_u = 0.0, max_abs_err_p = 0.0;
    double max_err_u_x = 0.0, max_err_u_t = 0.0;  // where the u maximum sits
    double max_err_p_x = 0.0, max_err_p_t = 0.0;
};

// Per-point comparison of a trained model against problem.exact, in row-major
// order (t outer, x inner).  Throws std::logic_error when the model's problem
// has no exact solution and std::invalid_argument for bad grids or a theta of
// the wrong length.
std::vector<ErrorRecord> error_field(const FieldModel& model, std::span<const double> theta,
                                     const EvalGrid& grid = {});

// Same comparison for an arbitrary field map (oracle injection, ablations).
std::vector<ErrorRecord> error_field_from(const FieldFn& fields, const ProblemSpec& problem,
                                          const EvalGrid& grid = {});

// RMSE over the records plus per-field maximum errors and their locations.
EvalReport summarize_errors(const std::vector<ErrorRecord>& records);

inline EvalReport evaluate_model(const FieldModel& model, std::span<const double> theta,
                                 const EvalGrid& grid = {}) {
    return summarize_errors(error_field(model, theta, grid));
}

// ---- architecture sensitivity sweep ---------------------------------------

// Trains one conjoined-network model per (depth, width) pair and tabulates
// both field RMSEs under a shared sampling/training budget.
struct SweepSettings {
    std::vector<int> depths = {1, 2, 3, 4};
    std::vector<int> widths = {5, 10, 20, 40, 80};
    Activation act1 = Activation::Gelu;
    Activation act2 = Activation::Tanh;
    EnforcementFlags enforce;
    SamplingMode sampling = SamplingMode::Structured;
    double bias_exponent = 2.0;
    SampleCounts counts;
    LossWeights weights;
    TrainConfig train;
    EvalGrid grid;
};

struct SweepRow {
    int depth = 0;
    int width = 0;
    double rmse_u = 0.0;
    double rmse_p = 0.0;
};

using SweepProgressFn = std::function<void(const SweepRow&)>;

// Rows come back depth-major in the order the settings list them.
std::vector<SweepRow> architecture_sweep(const ProblemSpec& problem,
                                         const SweepSettings& settings,
                                         const SweepProgressFn& on_row = {});

}  // namespace poropinn
