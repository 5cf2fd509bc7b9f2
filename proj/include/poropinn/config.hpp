#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poropinn/architectures.hpp"
#include "poropinn/loss.hpp"
#include "poropinn/sampling.hpp"
#include "poropinn/training.hpp"

namespace poropinn {

ConstantsVariant parse_constants_variant(const std::string& name);  // "corrected" | "as-printed"
std::string constants_variant_name(ConstantsVariant v);

// One experiment as described by a JSON config file.  Every key is optional;
// omitted keys keep the defaults below.  Parsing is strict: unknown keys and
// out-of-range values fail with the offending field's path.
struct RunConfig {
    std::string problem = "incompressible";
    ConstantsVariant constants = ConstantsVariant::Corrected;
    ArchitectureKind architecture = ArchitectureKind::IpinnsConn;
    std::vector<int> hidden = {40, 40, 40};
    Activation act1 = Activation::Gelu;
    Activation act2 = Activation::Tanh;
    InitScheme init = InitScheme::ScaledNormal;
    double init_scale = 0.1;
    EnforcementFlags enforce;
    SamplingMode sampling = SamplingMode::Biased;
    SampleCounts counts;
    double bias_exponent = 2.0;
    double w_pde = 1.0, w_bc = 500.0, w_ic = 300.0, w_interface = 200.0;
    int iterations = 70000;
    double lr = 1e-3;
    int log_every = 100;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::vector<int> sweep_depths = {1, 2, 3, 4};
    std::vector<int> sweep_widths = {5, 10, 20, 40, 80};

    ProblemSpec make_problem_spec() const;
    FieldModel make_model() const;
    LossWeights make_weights() const;
    TrainConfig make_train_config() const;
    SampleSet make_sample_set(const ProblemSpec& problem_spec) const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Serializes every field; parse_run_config(run_config_to_json(c)) restores c.
std::string run_config_to_json(const RunConfig& config);

}  // namespace poropinn
