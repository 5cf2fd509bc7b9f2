#include "poropinn/architectures.hpp"

#include <stdexcept>

#include "poropinn/rng.hpp"

namespace poropinn {

ArchitectureKind parse_architecture(const std::string& name) {
    if (name == "pinns") return ArchitectureKind::Conventional;
    if (name == "ipinns-snn") return ArchitectureKind::IpinnsSnn;
    if (name == "ipinns-conn") return ArchitectureKind::IpinnsConn;
    throw std::invalid_argument("unknown architecture: " + name);
}

std::string architecture_name(ArchitectureKind kind) {
    switch (kind) {
        case ArchitectureKind::Conventional: return "pinns";
        case ArchitectureKind::IpinnsSnn: return "ipinns-snn";
        case ArchitectureKind::IpinnsConn: return "ipinns-conn";
    }
    throw std::logic_error("bad ArchitectureKind");
}

InitScheme parse_init_scheme(const std::string& name) {
    if (name == "scaled-normal") return InitScheme::ScaledNormal;
    if (name == "glorot") return InitScheme::Glorot;
    throw std::invalid_argument("unknown init scheme: " + name);
}

std::string init_scheme_name(InitScheme scheme) {
    return scheme == InitScheme::ScaledNormal ? "scaled-normal" : "glorot";
}

std::size_t FieldModel::param_count() const {
    std::size_t n = 0;
    for (const MlpSpec& s : specs) n += s.param_count();
    return n;
}

std::size_t FieldModel::net_offset(int net) const {
    std::size_t off = 0;
    for (int i = 0; i < net; ++i) off += specs[i].param_count();
    return off;
}

std::span<const double> FieldModel::net_params(std::span<const double> theta,
                                               int net) const {
    if (theta.size() != param_count())
        throw std::invalid_argument("parameter vector size does not match the model");
    return theta.subspan(net_offset(net), specs[net].param_count());
}

FieldModel build_model(ArchitectureKind kind, const std::vector<int>& hidden,
                       Activation act1, Activation act2, EnforcementFlags enforce,
                       const ProblemSpec& problem) {
    if (hidden.empty()) throw std::invalid_argument("at least one hidden layer required");
    for (int w : hidden)
        if (w < 1) throw std::invalid_argument("hidden layer widths must be >= 1");

    FieldModel m;
    m.kind = kind;
    m.act1 = act1;
    m.act2 = kind == ArchitectureKind::Conventional ? act1 : act2;
    m.enforce = enforce;
    m.problem = problem;
    if (kind == ArchitectureKind::IpinnsSnn) {
        m.specs = {make_mlp_spec(2, hidden, 2)};
    } else {
        m.specs = {make_mlp_spec(2, hidden, 1), make_mlp_spec(2, hidden, 1)};
    }
    return m;
}

std::vector<double> init_params(const FieldModel& model, InitScheme scheme,
                                std::uint64_t seed, double scale) {
    Rng rng(mix_seed(seed, 0));
    std::vector<double> theta;
    theta.reserve(model.param_count());
    for (const MlpSpec& spec : model.specs) {
        std::vector<double> part = scheme == InitScheme::Glorot
                                       ? init_glorot(spec, rng)
                                       : init_scaled_normal(spec, rng, scale);
        theta.insert(theta.end(), part.begin(), part.end());
    }
    return theta;
}

HardTransformJets hard_transform(const FieldModel& model, FieldIndex field, double x,
                                 double t, Side side) {
    HardTransformJets h;
    const bool ic = model.enforce.hard_ic;
    const bool bc = model.enforce.hard_bc;
    if (!ic && !bc) return h;

    const bool is_u = field == FieldIndex::Displacement;
    const ProblemSpec& prob = model.problem;

    Jet2 u0;
    if (ic) {
        const FieldJets f0 = prob.initial(x, side);
        u0 = is_u ? f0.u : f0.p;
    }

    // u is pinned at x=1, p at x=0
    const double x_end = is_u ? 1.0 : 0.0;
    Jet2 g;
    double u0_end = 0.0;
    if (bc) {
        g = is_u ? prob.bc_u_x1(t) : prob.bc_p_x0(t);
        if (ic) {
            const FieldJets fe = prob.initial(x_end, is_u ? Side::Right : Side::Left);
            u0_end = is_u ? fe.u.val : fe.p.val;
        }
    }

    const Jet2 tj = {t, 0.0, 1.0, 0.0, 0.0, 0.0};
    const Jet2 lx = {x - x_end, 1.0, 0.0, 0.0, 0.0, 0.0};
    if (ic && bc) {
        h.mult = tj * lx;
        h.addend = u0 + (g - jet_const(u0_end));
    } else if (ic) {
        h.mult = tj;
        h.addend = u0;
    } else {
        h.mult = lx;
        h.addend = g;
    }
    return h;
}

FieldPrediction raw_outputs(const FieldModel& model, std::span<const double> theta,
                            double x, double t, Side side) {
    const Activation act = model.activation_for(side);
    const InputJets in = seed_input(x, t);
    FieldPrediction out;
    if (model.kind == ArchitectureKind::IpinnsSnn) {
        const std::vector<Jet2> ys =
            forward_jet(model.specs[0], model.net_params(theta, 0), act, in.x, in.t);
        out.u = ys[0];
        out.p = ys[1];
    } else {
        out.u = forward_jet(model.specs[0], model.net_params(theta, 0), act, in.x, in.t)[0];
        out.p = forward_jet(model.specs[1], model.net_params(theta, 1), act, in.x, in.t)[0];
    }
    return out;
}

FieldPrediction predict_side(const FieldModel& model, std::span<const double> theta,
                             double x, double t, Side side) {
    FieldPrediction out = raw_outputs(model, theta, x, t, side);
    if (model.enforce.hard_ic || model.enforce.hard_bc) {
        out.u = apply_hard_transform(
            hard_transform(model, FieldIndex::Displacement, x, t, side), out.u);
        out.p = apply_hard_transform(
            hard_transform(model, FieldIndex::Pressure, x, t, side), out.p);
    }
    return out;
}

FieldPrediction predict(const FieldModel& model, std::span<const double> theta,
                        double x, double t) {
    return predict_side(model, theta, x, t, side_of(model.problem.coeffs, x));
}

}  // namespace poropinn
