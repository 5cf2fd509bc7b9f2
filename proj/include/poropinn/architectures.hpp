#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "poropinn/network.hpp"
#include "poropinn/physics.hpp"

namespace poropinn {

// Three model families over the same network primitives:
//   Conventional — two single-output nets (u, p), one activation everywhere;
//   IpinnsSnn    — one two-output net, activation switched by subdomain;
//   IpinnsConn   — two single-output nets, activation switched by subdomain,
//                  parameters shared across subdomains per field.
enum class ArchitectureKind { Conventional, IpinnsSnn, IpinnsConn };

// Config-file names: "pinns" | "ipinns-snn" | "ipinns-conn".
ArchitectureKind parse_architecture(const std::string& name);
std::string architecture_name(ArchitectureKind kind);

// Which constraints are substituted into the ansatz rather than penalized.
// hard_bc covers only the Dirichlet ends (u at x=1, p at x=0); the traction
// and flux conditions at the opposite ends always stay soft.
struct EnforcementFlags {
    bool hard_ic = false;
    bool hard_bc = false;
};

enum class FieldIndex { Displacement, Pressure };

struct FieldModel {
    ArchitectureKind kind = ArchitectureKind::IpinnsConn;
    std::vector<MlpSpec> specs;          // u-net, p-net — or the single SNN net
    Activation act1 = Activation::Gelu;  // subdomain 1 (x <= zeta)
    Activation act2 = Activation::Tanh;  // subdomain 2
    EnforcementFlags enforce;
    ProblemSpec problem;  // carries zeta and the constraint data

    double zeta() const { return problem.coeffs.zeta; }
    Activation activation_for(Side side) const { return side == Side::Left ? act1 : act2; }

    std::size_t param_count() const;
    std::size_t net_offset(int net) const;
    // One network's slice of the flat parameter vector.
    std::span<const double> net_params(std::span<const double> theta, int net) const;
};

// hidden = widths of the hidden layers, shared by every network the kind
// needs. Conventional ignores act2 (one activation both subdomains).
FieldModel build_model(ArchitectureKind kind, const std::vector<int>& hidden,
                       Activation act1, Activation act2, EnforcementFlags enforce,
                       const ProblemSpec& problem);

enum class InitScheme { ScaledNormal, Glorot };

InitScheme parse_init_scheme(const std::string& name);  // "scaled-normal" | "glorot"
std::string init_scheme_name(InitScheme scheme);

// Draws every network's parameters, in spec order, from a single stream
// seeded by mix_seed(seed, 0).
std::vector<double> init_params(const FieldModel& model, InitScheme scheme,
                                std::uint64_t seed, double scale = 0.1);

// Hard-enforcement ansatz as an affine change of variables on the raw
// network output: transformed = mult * raw + addend (full jet product).
// Per field:
//   none    : mult = 1,            addend = 0
//   IC only : mult = t,            addend = u0(x)
//   BC only : mult = x - x_end,    addend = g(t)
//   both    : mult = t*(x - x_end), addend = u0(x) + (g(t) - u0(x_end))
// The combined form is exact at t=0 because g(0) and u0(x_end) come from the
// same trace evaluation, and exact at x_end up to one rounding of the sum.
struct HardTransformJets {
    Jet2 mult = jet_const(1.0);
    Jet2 addend = jet_const(0.0);
};

// side picks the subdomain whose t=0 profile feeds the IC addend; it matters
// only for derivative slots at x = zeta.
HardTransformJets hard_transform(const FieldModel& model, FieldIndex field, double x,
                                 double t, Side side);

inline Jet2 apply_hard_transform(const HardTransformJets& h, const Jet2& raw) {
    return h.mult * raw + h.addend;
}

struct FieldPrediction {
    Jet2 u, p;
};

// Network outputs before hard transforms, routed to side's activation.
FieldPrediction raw_outputs(const FieldModel& model, std::span<const double> theta,
                            double x, double t, Side side);

// Full prediction with transforms applied; side forces the subdomain routing
// (needed on the interface where membership alone is ambiguous).
FieldPrediction predict_side(const FieldModel& model, std::span<const double> theta,
                             double x, double t, Side side);

// Membership-routed prediction: x <= zeta evaluates subdomain 1.
FieldPrediction predict(const FieldModel& model, std::span<const double> theta,
                        double x, double t);

}  // namespace poropinn
