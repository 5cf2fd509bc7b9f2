#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "poropinn/architectures.hpp"
#include "poropinn/loss.hpp"

namespace poropinn {

struct AdamState {
    std::vector<double> m, v;  // first/second moment accumulators
    long step_count = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam_state(std::size_t n_params, double lr);

// One bias-corrected update in place:
//   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
//   theta <- theta - lr * m-hat / (sqrt(v-hat) + eps)
void adam_step(AdamState& state, std::vector<double>& theta, const std::vector<double>& grad);

struct TrainConfig {
    int iterations = 70000;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    InitScheme init_scheme = InitScheme::ScaledNormal;
    double init_scale = 0.1;  // used by the scaled-normal scheme only
    int log_every = 100;
    int checkpoint_every = 0;      // 0 disables periodic checkpoints
    std::string checkpoint_path;   // required when checkpoint_every > 0
};

struct LossHistoryEntry {
    int iteration = 0;
    LossBreakdown breakdown;
};

struct TrainReport {
    std::vector<double> final_params;
    std::vector<LossHistoryEntry> loss_history;
    double wall_time_s = 0.0;
};

using TrainLogFn = std::function<void(int iteration, const LossBreakdown&)>;

// Full-batch Adam over the assembled objective. The loss is recorded at
// every iteration divisible by log_every (before that step) plus once after
// the final step. Non-finite loss aborts with a diagnostic naming the first
// bad term and the iteration.
TrainReport train(const TrainConfig& config, const FieldModel& model,
                  const SampleSet& samples, const LossWeights& weights,
                  const TrainLogFn& on_log = {});

// ---- checkpoints --------------------------------------------------------------
//
// One ASCII header line
//   poropinn-checkpoint v1 arch=<name> act1=<a> act2=<a> nets=<n>
//       layers=<l0,l1,...>[;<...>] count=<total>
// followed by `count` raw little-endian float64 values.

struct CheckpointData {
    std::string arch;
    std::string act1, act2;
    std::vector<std::vector<int>> layers;  // per network
    std::vector<double> theta;
};

void save_checkpoint(const FieldModel& model, std::span<const double> theta,
                     const std::string& path);
CheckpointData load_checkpoint(const std::string& path);

// Throws when the checkpoint metadata does not describe `model`.
void require_checkpoint_match(const CheckpointData& ck, const FieldModel& model);

}  // namespace poropinn
