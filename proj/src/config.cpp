#include "poropinn/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace poropinn {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& detail) {
    throw std::invalid_argument("config field '" + path + "': " + detail);
}

std::string join_path(const std::string& scope, const char* key) {
    return scope.empty() ? std::string(key) : scope + "." + key;
}

void check_keys(const ordered_json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) bad_field(join_path(scope, it.key().c_str()), "unknown key");
    }
}

template <typename T>
void read_field(const ordered_json& obj, const std::string& scope, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const ordered_json::exception& e) {
        bad_field(join_path(scope, key), e.what());
    }
}

// string-typed enum field: fetch then convert, attributing bad names to the field
template <typename T, typename Parser>
void read_named(const ordered_json& obj, const std::string& scope, const char* key,
                Parser parse, T& out) {
    std::string name;
    bool present = obj.contains(key);
    if (!present) return;
    read_field(obj, scope, key, name);
    try {
        out = parse(name);
    } catch (const std::invalid_argument& e) {
        bad_field(join_path(scope, key), e.what());
    }
}

void require_positive(int v, const std::string& path) {
    if (v < 1) bad_field(path, "must be >= 1, got " + std::to_string(v));
}

void require_positive(double v, const std::string& path) {
    if (!(v > 0.0)) bad_field(path, "must be > 0");
}

void require_nonnegative(double v, const std::string& path) {
    if (!(v >= 0.0)) bad_field(path, "must be >= 0");
}

void validate(const RunConfig& c) {
    if (c.hidden.empty()) bad_field("hidden", "needs at least one layer width");
    for (int w : c.hidden) require_positive(w, "hidden");
    require_positive(c.init_scale, "init_scale");
    require_positive(c.counts.n_interior, "samples.interior");
    require_positive(c.counts.n_boundary, "samples.boundary");
    require_positive(c.counts.n_ic, "samples.initial");
    require_positive(c.counts.n_interface, "samples.interface");
    if (!(c.bias_exponent >= 1.0)) bad_field("samples.bias_exponent", "must be >= 1");
    require_nonnegative(c.w_pde, "weights.pde");
    require_nonnegative(c.w_bc, "weights.bc");
    require_nonnegative(c.w_ic, "weights.ic");
    require_nonnegative(c.w_interface, "weights.interface");
    require_positive(c.iterations, "train.iterations");
    require_positive(c.lr, "train.lr");
    require_positive(c.log_every, "train.log_every");
    if (c.sweep_depths.empty()) bad_field("sweep.depths", "needs at least one entry");
    if (c.sweep_widths.empty()) bad_field("sweep.widths", "needs at least one entry");
    for (int d : c.sweep_depths) require_positive(d, "sweep.depths");
    for (int w : c.sweep_widths) require_positive(w, "sweep.widths");
    // resolve names eagerly so a bad problem fails at parse time, not mid-run
    try {
        make_problem(c.problem, c.constants);
    } catch (const std::invalid_argument& e) {
        bad_field("problem", e.what());
    }
}

}  // namespace

ConstantsVariant parse_constants_variant(const std::string& name) {
    if (name == "corrected") return ConstantsVariant::Corrected;
    if (name == "as-printed") return ConstantsVariant::AsPrinted;
    throw std::invalid_argument("unknown constants variant '" + name +
                                "' (expected corrected or as-printed)");
}

std::string constants_variant_name(ConstantsVariant v) {
    return v == ConstantsVariant::Corrected ? "corrected" : "as-printed";
}

RunConfig parse_run_config(const std::string& json_text) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config root must be a JSON object");

    RunConfig c;
    check_keys(root, "",
               {"problem", "constants", "architecture", "hidden", "activations", "init",
                "init_scale", "hard_ic", "hard_bc", "samples", "weights", "train", "seed",
                "out_dir", "sweep"});

    read_field(root, "", "problem", c.problem);
    read_named(root, "", "constants", parse_constants_variant, c.constants);
    read_named(root, "", "architecture", parse_architecture, c.architecture);
    read_field(root, "", "hidden", c.hidden);
    if (root.contains("activations")) {
        std::vector<std::string> names;
        read_field(root, "", "activations", names);
        if (names.size() != 2) bad_field("activations", "expected [act1, act2]");
        try {
            c.act1 = parse_activation(names[0]);
            c.act2 = parse_activation(names[1]);
        } catch (const std::invalid_argument& e) {
            bad_field("activations", e.what());
        }
    }
    read_named(root, "", "init", parse_init_scheme, c.init);
    read_field(root, "", "init_scale", c.init_scale);
    read_field(root, "", "hard_ic", c.enforce.hard_ic);
    read_field(root, "", "hard_bc", c.enforce.hard_bc);

    if (root.contains("samples")) {
        const ordered_json& s = root.at("samples");
        if (!s.is_object()) bad_field("samples", "must be an object");
        check_keys(s, "samples",
                   {"mode", "interior", "boundary", "interface", "initial", "bias_exponent"});
        read_named(s, "samples", "mode", parse_sampling_mode, c.sampling);
        read_field(s, "samples", "interior", c.counts.n_interior);
        read_field(s, "samples", "boundary", c.counts.n_boundary);
        read_field(s, "samples", "interface", c.counts.n_interface);
        read_field(s, "samples", "initial", c.counts.n_ic);
        read_field(s, "samples", "bias_exponent", c.bias_exponent);
    }
    if (root.contains("weights")) {
        const ordered_json& w = root.at("weights");
        if (!w.is_object()) bad_field("weights", "must be an object");
        check_keys(w, "weights", {"pde", "bc", "ic", "interface"});
        read_field(w, "weights", "pde", c.w_pde);
        read_field(w, "weights", "bc", c.w_bc);
        read_field(w, "weights", "ic", c.w_ic);
        read_field(w, "weights", "interface", c.w_interface);
    }
    if (root.contains("train")) {
        const ordered_json& t = root.at("train");
        if (!t.is_object()) bad_field("train", "must be an object");
        check_keys(t, "train", {"iterations", "lr", "log_every"});
        read_field(t, "train", "iterations", c.iterations);
        read_field(t, "train", "lr", c.lr);
        read_field(t, "train", "log_every", c.log_every);
    }
    read_field(root, "", "seed", c.seed);
    read_field(root, "", "out_dir", c.out_dir);
    if (root.contains("sweep")) {
        const ordered_json& s = root.at("sweep");
        if (!s.is_object()) bad_field("sweep", "must be an object");
        check_keys(s, "sweep", {"depths", "widths"});
        read_field(s, "sweep", "depths", c.sweep_depths);
        read_field(s, "sweep", "widths", c.sweep_widths);
    }

    validate(c);
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& c) {
    ordered_json root;
    root["problem"] = c.problem;
    root["constants"] = constants_variant_name(c.constants);
    root["architecture"] = architecture_name(c.architecture);
    root["hidden"] = c.hidden;
    root["activations"] = {std::string(to_string(c.act1)), std::string(to_string(c.act2))};
    root["init"] = init_scheme_name(c.init);
    root["init_scale"] = c.init_scale;
    root["hard_ic"] = c.enforce.hard_ic;
    root["hard_bc"] = c.enforce.hard_bc;
    root["samples"] = {{"mode", sampling_mode_name(c.sampling)},
                       {"interior", c.counts.n_interior},
                       {"boundary", c.counts.n_boundary},
                       {"interface", c.counts.n_interface},
                       {"initial", c.counts.n_ic},
                       {"bias_exponent", c.bias_exponent}};
    root["weights"] = {{"pde", c.w_pde},
                       {"bc", c.w_bc},
                       {"ic", c.w_ic},
                       {"interface", c.w_interface}};
    root["train"] = {{"iterations", c.iterations}, {"lr", c.lr}, {"log_every", c.log_every}};
    root["seed"] = c.seed;
    root["out_dir"] = c.out_dir;
    root["sweep"] = {{"depths", c.sweep_depths}, {"widths", c.sweep_widths}};
    return root.dump(2) + "\n";
}

ProblemSpec RunConfig::make_problem_spec() const { return make_problem(problem, constants); }

FieldModel RunConfig::make_model() const {
    return build_model(architecture, hidden, act1, act2, enforce, make_problem_spec());
}

LossWeights RunConfig::make_weights() const {
    return weights_from_groups(w_pde, w_bc, w_ic, w_interface);
}

TrainConfig RunConfig::make_train_config() const {
    TrainConfig t;
    t.iterations = iterations;
    t.lr = lr;
    t.log_every = log_every;
    t.seed = seed;
    t.init_scheme = init;
    t.init_scale = init_scale;
    return t;
}

SampleSet RunConfig::make_sample_set(const ProblemSpec& problem_spec) const {
    return make_samples(sampling, counts, problem_spec, seed, bias_exponent);
}

}  // namespace poropinn
