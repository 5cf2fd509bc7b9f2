#include "poropinn/training.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload assumes a little-endian host");

namespace poropinn {

AdamState make_adam_state(std::size_t n_params, double lr) {
    AdamState st;
    st.m.assign(n_params, 0.0);
    st.v.assign(n_params, 0.0);
    st.lr = lr;
    return st;
}

void adam_step(AdamState& state, std::vector<double>& theta, const std::vector<double>& grad) {
    const std::size_t n = theta.size();
    if (state.m.size() != n || state.v.size() != n || grad.size() != n)
        throw std::invalid_argument("adam_step: shape mismatch");
    if (!(state.beta1 >= 0.0 && state.beta1 < 1.0 && state.beta2 >= 0.0 &&
          state.beta2 < 1.0))
        throw std::invalid_argument("adam_step: betas must lie in [0, 1)");
    if (!(state.eps > 0.0)) throw std::invalid_argument("adam_step: eps must be positive");

    ++state.step_count;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        theta[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

namespace {

void throw_if_not_finite(const LossBreakdown& b, int iteration) {
    const auto terms = loss_terms(b);
    for (int i = 0; i < 11; ++i) {
        if (!std::isfinite(terms[i])) {
            std::ostringstream os;
            os << "training diverged at iteration " << iteration << ": term '"
               << kLossTermNames[i] << "' is not finite";
            throw std::runtime_error(os.str());
        }
    }
    if (!std::isfinite(b.total)) {
        std::ostringstream os;
        os << "training diverged at iteration " << iteration << ": total is not finite";
        throw std::runtime_error(os.str());
    }
}

}  // namespace

TrainReport train(const TrainConfig& config, const FieldModel& model,
                  const SampleSet& samples, const LossWeights& weights,
                  const TrainLogFn& on_log) {
    if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(config.lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (config.log_every < 1) throw std::invalid_argument("log_every must be >= 1");
    if (config.checkpoint_every > 0 && config.checkpoint_path.empty())
        throw std::invalid_argument("checkpoint_every needs a checkpoint path");

    const auto t_start = std::chrono::steady_clock::now();
    LossAssembler assemble(model, samples, weights);
    std::vector<double> theta =
        init_params(model, config.init_scheme, config.seed, config.init_scale);
    AdamState state = make_adam_state(theta.size(), config.lr);

    TrainReport report;
    std::vector<double> grad;
    for (int it = 0; it < config.iterations; ++it) {
        const LossBreakdown b = assemble(theta, &grad);
        throw_if_not_finite(b, it);
        if (it % config.log_every == 0) {
            report.loss_history.push_back({it, b});
            if (on_log) on_log(it, b);
        }
        adam_step(state, theta, grad);
        if (config.checkpoint_every > 0 && (it + 1) % config.checkpoint_every == 0)
            save_checkpoint(model, theta, config.checkpoint_path);
    }

    const LossBreakdown final_b = assemble(theta, nullptr);
    throw_if_not_finite(final_b, config.iterations);
    report.loss_history.push_back({config.iterations, final_b});
    if (on_log) on_log(config.iterations, final_b);
    if (!config.checkpoint_path.empty()) save_checkpoint(model, theta, config.checkpoint_path);

    report.final_params = std::move(theta);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

namespace {

std::string join_layers(const std::vector<MlpSpec>& specs) {
    std::string out;
    for (std::size_t n = 0; n < specs.size(); ++n) {
        if (n) out += ';';
        const auto& ls = specs[n].layer_sizes;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(ls[i]);
        }
    }
    return out;
}

[[noreturn]] void bad_checkpoint(const std::string& field, const std::string& detail) {
    throw std::runtime_error("checkpoint " + field + ": " + detail);
}

// "k1,k2,...;k1,k2,..." -> per-net layer size lists
std::vector<std::vector<int>> parse_layers(const std::string& text) {
    std::vector<std::vector<int>> nets;
    std::istringstream per_net(text);
    std::string net;
    while (std::getline(per_net, net, ';')) {
        std::vector<int> sizes;
        std::istringstream per_size(net);
        std::string tok;
        while (std::getline(per_size, tok, ',')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                bad_checkpoint("layers", "not a number: '" + tok + "'");
            }
            if (used != tok.size() || v < 1)
                bad_checkpoint("layers", "bad layer size: '" + tok + "'");
            sizes.push_back(v);
        }
        if (sizes.size() < 2) bad_checkpoint("layers", "network needs at least two layers");
        nets.push_back(std::move(sizes));
    }
    if (nets.empty()) bad_checkpoint("layers", "empty");
    return nets;
}

}  // namespace

void save_checkpoint(const FieldModel& model, std::span<const double> theta,
                     const std::string& path) {
    if (theta.size() != model.param_count())
        throw std::invalid_argument("checkpoint parameters do not match the model");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open checkpoint file for writing: " + path);
    os << "poropinn-checkpoint v1 arch=" << architecture_name(model.kind)
       << " act1=" << to_string(model.act1) << " act2=" << to_string(model.act2)
       << " nets=" << model.specs.size() << " layers=" << join_layers(model.specs)
       << " count=" << theta.size() << "\n";
    os.write(reinterpret_cast<const char*>(theta.data()),
             static_cast<std::streamsize>(theta.size() * sizeof(double)));
    if (!os) throw std::runtime_error("failed writing checkpoint payload: " + path);
}

CheckpointData load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint file: " + path);
    std::string header;
    if (!std::getline(is, header)) bad_checkpoint("header", "missing");

    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "poropinn-checkpoint") bad_checkpoint("header", "bad magic '" + magic + "'");
    if (version != "v1") bad_checkpoint("version", "unsupported '" + version + "'");

    CheckpointData ck;
    std::string nets_text, layers_text, count_text;
    std::string kv;
    while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) bad_checkpoint("header", "stray token '" + kv + "'");
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "arch")
            ck.arch = val;
        else if (key == "act1")
            ck.act1 = val;
        else if (key == "act2")
            ck.act2 = val;
        else if (key == "nets")
            nets_text = val;
        else if (key == "layers")
            layers_text = val;
        else if (key == "count")
            count_text = val;
        else
            bad_checkpoint("header", "unknown key '" + key + "'");
    }
    for (const auto& [name, value] :
         {std::pair<const char*, const std::string&>{"arch", ck.arch},
          {"act1", ck.act1},
          {"act2", ck.act2},
          {"nets", nets_text},
          {"layers", layers_text},
          {"count", count_text}})
        if (value.empty()) bad_checkpoint(name, "missing");

    ck.layers = parse_layers(layers_text);
    std::size_t nets = 0, count = 0;
    try {
        nets = std::stoul(nets_text);
        count = std::stoul(count_text);
    } catch (const std::exception&) {
        bad_checkpoint("nets/count", "not a number");
    }
    if (nets != ck.layers.size())
        bad_checkpoint("nets", "declared " + nets_text + " but layers describe " +
                                   std::to_string(ck.layers.size()));
    std::size_t expect = 0;
    for (const auto& ls : ck.layers) {
        MlpSpec spec;
        spec.layer_sizes = ls;
        expect += spec.param_count();
    }
    if (expect != count)
        bad_checkpoint("count", "declared " + count_text + " but layers imply " +
                                    std::to_string(expect));

    ck.theta.resize(count);
    is.read(reinterpret_cast<char*>(ck.theta.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
        bad_checkpoint("payload", "truncated: expected " +
                                      std::to_string(count * sizeof(double)) + " bytes, got " +
                                      std::to_string(is.gcount()));
    char extra;
    if (is.read(&extra, 1)) bad_checkpoint("payload", "trailing data after parameters");
    return ck;
}

void require_checkpoint_match(const CheckpointData& ck, const FieldModel& model) {
    auto fail = [](const std::string& field, const std::string& want,
                   const std::string& got) {
        throw std::runtime_error("checkpoint does not match the model: " + field +
                                 " is '" + got + "', expected '" + want + "'");
    };
    if (ck.arch != architecture_name(model.kind))
        fail("arch", architecture_name(model.kind), ck.arch);
    if (ck.act1 != to_string(model.act1)) fail("act1", std::string(to_string(model.act1)), ck.act1);
    if (ck.act2 != to_string(model.act2)) fail("act2", std::string(to_string(model.act2)), ck.act2);
    if (ck.layers.size() != model.specs.size())
        fail("nets", std::to_string(model.specs.size()), std::to_string(ck.layers.size()));
    for (std::size_t n = 0; n < ck.layers.size(); ++n)
        if (ck.layers[n] != model.specs[n].layer_sizes)
            throw std::runtime_error("checkpoint does not match the model: layer sizes of net " +
                                     std::to_string(n) + " differ");
    if (ck.theta.size() != model.param_count())
        fail("count", std::to_string(model.param_count()), std::to_string(ck.theta.size()));
}

}  // namespace poropinn
