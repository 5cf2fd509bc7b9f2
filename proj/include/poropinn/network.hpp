#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "poropinn/activation.hpp"
#include "poropinn/jet.hpp"
#include "poropinn/rng.hpp"

namespace poropinn {

// Fully connected network shape: layer_sizes = [n_in, hidden..., n_out].
// Hidden layers apply the activation; the output layer is affine.
//
// Flat parameter layout (also the checkpoint order): for each layer,
// the weight matrix row by row (row i = incoming weights of output unit i),
// followed by that layer's biases.
struct MlpSpec {
    std::vector<int> layer_sizes;

    int n_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
    int n_in() const { return layer_sizes.front(); }
    int n_out() const { return layer_sizes.back(); }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (int l = 0; l < n_layers(); ++l)
            n += static_cast<std::size_t>(layer_sizes[l] + 1) * layer_sizes[l + 1];
        return n;
    }

    // Offset of layer l's weights in the flat vector; biases follow them.
    std::size_t weight_offset(int l) const {
        std::size_t off = 0;
        for (int k = 0; k < l; ++k)
            off += static_cast<std::size_t>(layer_sizes[k] + 1) * layer_sizes[k + 1];
        return off;
    }
    std::size_t bias_offset(int l) const {
        return weight_offset(l) +
               static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l + 1];
    }
};

MlpSpec make_mlp_spec(int n_in, const std::vector<int>& hidden, int n_out);

// Weights and biases all drawn from N(0, scale^2), in flat-layout order.
std::vector<double> init_scaled_normal(const MlpSpec& spec, Rng& rng, double scale = 0.1);

// Glorot: per layer, weights from N(0, 2/(fan_in+fan_out)); biases exactly 0
// (no draws consumed for biases).
std::vector<double> init_glorot(const MlpSpec& spec, Rng& rng);

// Reference single-point evaluation carrying full second-order jets.
// Output: one Jet2 per output unit.
std::vector<Jet2> forward_jet(const MlpSpec& spec, std::span<const double> theta,
                              Activation act, const Jet2& x, const Jet2& t);

// Plain scalar forward accumulating through the same fma sequence as
// forward_jet's value channel, so the two agree bit for bit.
std::vector<double> forward_value(const MlpSpec& spec, std::span<const double> theta,
                                  Activation act, double x, double t);

// ---- batched jet evaluation -------------------------------------------------
//
// A batch holds P points; every per-unit quantity is a matrix whose columns
// are grouped into `ns` slot blocks of width P in the fixed order
//   [val | dx | dt | dxx | dxt | dtt],
// truncated after ns slots.  The affine layers act identically on every slot
// (bias on the value block only), so one GEMM per layer covers all slots.
// ns is chosen per use: 2 suffices for boundary-type terms (value and x-slope),
// 4 covers the pressure residual slots, 5 adds the mixed derivative the
// displacement residual needs, 6 is the full jet.

inline constexpr int kSlotVal = 0;
inline constexpr int kSlotDx = 1;
inline constexpr int kSlotDt = 2;
inline constexpr int kSlotDxx = 3;
inline constexpr int kSlotDxt = 4;
inline constexpr int kSlotDtt = 5;

struct BatchWorkspace {
    // Per hidden/output layer: pre-activation Z and post-activation H.
    std::vector<Eigen::MatrixXd> Z, H;
    // Per hidden layer: activation derivative caches (n x P):
    // G1 = sigma', G2 = sigma'', EX = extra state for sigma'''
    // (tanh: sigma itself; gelu: the normal pdf at z).
    std::vector<Eigen::MatrixXd> G1, G2, EX;
    Eigen::MatrixXd X;             // input block (n_in x ns*P)
    Eigen::MatrixXd adj_a, adj_b;  // ping-pong adjoint buffers
    Eigen::MatrixXd S1, S2;        // elementwise scratch (n x P)
};

// Fills ws.X for a point list: value block carries (x_i, t_i), the dx block
// the seed (1, 0), the dt block (0, 1), higher blocks zero.
void set_batch_inputs(BatchWorkspace& ws, std::span<const double> xs,
                      std::span<const double> ts, int ns);

// Runs the jet forward pass; returns the output layer's block matrix
// (n_out x ns*P), owned by the workspace.
const Eigen::MatrixXd& mlp_forward_batch(const MlpSpec& spec, std::span<const double> theta,
                                         Activation act, int ns, int npts,
                                         BatchWorkspace& ws);

// Reverse pass from output adjoints (same shape as the forward output),
// accumulating d(loss)/d(theta) into `grad`.  Must be called after
// mlp_forward_batch with identical arguments; consumes the cached state.
void mlp_backward_batch(const MlpSpec& spec, std::span<const double> theta,
                        Activation act, int ns, int npts, BatchWorkspace& ws,
                        const Eigen::MatrixXd& out_adj, std::span<double> grad);

// Reads the jet of output unit `unit` for point `pt` out of a batched output
// matrix; slots beyond ns are zero.
Jet2 batch_output_jet(const Eigen::MatrixXd& out, int unit, int pt, int ns, int npts);

// Scatters a per-point output adjoint back into matrix form (helper for the
// loss assembly); slots beyond ns are ignored.
void add_output_adjoint(Eigen::MatrixXd& out_adj, int unit, int pt, int ns, int npts,
                        const Jet2& adj);

}  // namespace poropinn
