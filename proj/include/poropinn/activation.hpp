#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "poropinn/jet.hpp"

namespace poropinn {

enum class Activation { Tanh, Gelu };

inline std::string_view to_string(Activation a) {
    return a == Activation::Tanh ? "tanh" : "gelu";
}

inline Activation parse_activation(std::string_view tag) {
    if (tag == "tanh") return Activation::Tanh;
    if (tag == "gelu") return Activation::Gelu;
    throw std::invalid_argument("unknown activation tag: " + std::string(tag));
}

// Value and first three derivatives of the activation at z.  The third
// derivative is needed by the reverse pass: the loss depends on second
// x/t-derivatives of the network, so its parameter gradient touches one
// derivative order higher.
struct ActDerivs {
    double g0, g1, g2, g3;
};

inline ActDerivs tanh_derivs(double z) {
    const double s = std::tanh(z);
    const double g1 = 1.0 - s * s;
    const double g2 = -2.0 * s * g1;
    const double g3 = -2.0 * g1 * g1 - 2.0 * s * g2;
    return {s, g1, g2, g3};
}

// Exact GELU, gelu(z) = z * Phi(z) with Phi the standard normal CDF.
// Derivatives follow from Phi' = phi, phi' = -z phi:
//   gelu'   = Phi + z phi
//   gelu''  = (2 - z^2) phi
//   gelu''' = (z^3 - 4z) phi
inline ActDerivs gelu_derivs(double z) {
    const double Phi = 0.5 * (1.0 + std::erf(z * std::numbers::sqrt2 / 2.0));
    const double phi = std::exp(-0.5 * z * z) *
                       (0.5 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi);
    return {z * Phi, Phi + z * phi, (2.0 - z * z) * phi, (z * z * z - 4.0 * z) * phi};
}

inline ActDerivs activation_derivs(Activation a, double z) {
    return a == Activation::Tanh ? tanh_derivs(z) : gelu_derivs(z);
}

inline double activation_value(Activation a, double z) {
    if (a == Activation::Tanh) return std::tanh(z);
    // Same operation order as gelu_derivs so value paths agree bit for bit.
    const double Phi = 0.5 * (1.0 + std::erf(z * std::numbers::sqrt2 / 2.0));
    return z * Phi;
}

inline Jet2 activation_jet(Activation a, const Jet2& z) {
    const ActDerivs d = activation_derivs(a, z.val);
    return jet_compose(d.g0, d.g1, d.g2, z);
}

}  // namespace poropinn
