#include "poropinn/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#ifdef POROPINN_HAVE_MVEC_AVX512
#include <immintrin.h>
extern "C" {
__m512d _ZGVeN8v_tanh(__m512d);
__m512d _ZGVeN8v_erf(__m512d);
__m512d _ZGVeN8v_exp(__m512d);
}
#endif

namespace poropinn {

namespace {

using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeightMap = Eigen::Map<const RowMajorMat>;
using WeightMap = Eigen::Map<RowMajorMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

// Elementwise transcendentals over contiguous buffers.  The AVX-512 variants
// call glibc's vector math kernels; results differ from scalar libm only in
// the last ulps and are identical run to run.
#ifdef POROPINN_HAVE_MVEC_AVX512
void vec_tanh(double* dst, const double* src, std::ptrdiff_t n) {
    std::ptrdiff_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm512_storeu_pd(dst + i, _ZGVeN8v_tanh(_mm512_loadu_pd(src + i)));
    for (; i < n; ++i) dst[i] = std::tanh(src[i]);
}
void vec_erf(double* dst, const double* src, std::ptrdiff_t n) {
    std::ptrdiff_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm512_storeu_pd(dst + i, _ZGVeN8v_erf(_mm512_loadu_pd(src + i)));
    for (; i < n; ++i) dst[i] = std::erf(src[i]);
}
void vec_exp(double* dst, const double* src, std::ptrdiff_t n) {
    std::ptrdiff_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm512_storeu_pd(dst + i, _ZGVeN8v_exp(_mm512_loadu_pd(src + i)));
    for (; i < n; ++i) dst[i] = std::exp(src[i]);
}
#else
void vec_tanh(double* dst, const double* src, std::ptrdiff_t n) {
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = std::tanh(src[i]);
}
void vec_erf(double* dst, const double* src, std::ptrdiff_t n) {
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = std::erf(src[i]);
}
void vec_exp(double* dst, const double* src, std::ptrdiff_t n) {
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = std::exp(src[i]);
}
#endif

void check_theta_size(const MlpSpec& spec, std::span<const double> theta) {
    if (theta.size() != spec.param_count())
        throw std::invalid_argument("parameter vector size does not match network spec");
}

}  // namespace

MlpSpec make_mlp_spec(int n_in, const std::vector<int>& hidden, int n_out) {
    if (n_in < 1 || n_out < 1) throw std::invalid_argument("network needs >=1 input and output");
    if (hidden.empty()) throw std::invalid_argument("network needs at least one hidden layer");
    MlpSpec spec;
    spec.layer_sizes.reserve(hidden.size() + 2);
    spec.layer_sizes.push_back(n_in);
    for (int h : hidden) {
        if (h < 1) throw std::invalid_argument("hidden layer width must be >=1");
        spec.layer_sizes.push_back(h);
    }
    spec.layer_sizes.push_back(n_out);
    return spec;
}

std::vector<double> init_scaled_normal(const MlpSpec& spec, Rng& rng, double scale) {
    if (scale <= 0.0) throw std::invalid_argument("init scale must be positive");
    std::vector<double> theta(spec.param_count());
    for (double& v : theta) v = scale * rng.normal();
    return theta;
}

std::vector<double> init_glorot(const MlpSpec& spec, Rng& rng) {
    std::vector<double> theta(spec.param_count(), 0.0);
    for (int l = 0; l < spec.n_layers(); ++l) {
        const int fan_in = spec.layer_sizes[l];
        const int fan_out = spec.layer_sizes[l + 1];
        const double sigma = std::sqrt(2.0 / (fan_in + fan_out));
        double* w = theta.data() + spec.weight_offset(l);
        for (int i = 0; i < fan_in * fan_out; ++i) w[i] = sigma * rng.normal();
        // biases stay exactly zero
    }
    return theta;
}

std::vector<Jet2> forward_jet(const MlpSpec& spec, std::span<const double> theta,
                              Activation act, const Jet2& x, const Jet2& t) {
    check_theta_size(spec, theta);
    if (spec.n_in() != 2) throw std::invalid_argument("forward_jet expects a (x,t) network");
    std::vector<Jet2> h = {x, t};
    std::vector<Jet2> z;
    for (int l = 0; l < spec.n_layers(); ++l) {
        const int n_in = spec.layer_sizes[l];
        const int n_out = spec.layer_sizes[l + 1];
        const double* w = theta.data() + spec.weight_offset(l);
        const double* b = theta.data() + spec.bias_offset(l);
        z.assign(n_out, Jet2{});
        for (int i = 0; i < n_out; ++i) {
            Jet2 acc = jet_const(b[i]);
            // explicit fma keeps the value channel bitwise identical to
            // forward_value, which accumulates the same way
            for (int j = 0; j < n_in; ++j) {
                const double wij = w[i * n_in + j];
                acc.val = std::fma(wij, h[j].val, acc.val);
                acc.dx = std::fma(wij, h[j].dx, acc.dx);
                acc.dt = std::fma(wij, h[j].dt, acc.dt);
                acc.dxx = std::fma(wij, h[j].dxx, acc.dxx);
                acc.dxt = std::fma(wij, h[j].dxt, acc.dxt);
                acc.dtt = std::fma(wij, h[j].dtt, acc.dtt);
            }
            z[i] = (l + 1 < spec.n_layers()) ? activation_jet(act, acc) : acc;
        }
        h = z;
    }
    return h;
}

std::vector<double> forward_value(const MlpSpec& spec, std::span<const double> theta,
                                  Activation act, double x, double t) {
    check_theta_size(spec, theta);
    if (spec.n_in() != 2) throw std::invalid_argument("forward_value expects a (x,t) network");
    std::vector<double> h = {x, t};
    std::vector<double> z;
    for (int l = 0; l < spec.n_layers(); ++l) {
        const int n_in = spec.layer_sizes[l];
        const int n_out = spec.layer_sizes[l + 1];
        const double* w = theta.data() + spec.weight_offset(l);
        const double* b = theta.data() + spec.bias_offset(l);
        z.assign(n_out, 0.0);
        for (int i = 0; i < n_out; ++i) {
            double acc = b[i];
            for (int j = 0; j < n_in; ++j) acc = std::fma(w[i * n_in + j], h[j], acc);
            z[i] = (l + 1 < spec.n_layers()) ? activation_value(act, acc) : acc;
        }
        h = z;
    }
    return h;
}

void set_batch_inputs(BatchWorkspace& ws, std::span<const double> xs,
                      std::span<const double> ts, int ns) {
    const int P = static_cast<int>(xs.size());
    if (ts.size() != xs.size()) throw std::invalid_argument("x/t lists differ in length");
    ws.X.setZero(2, static_cast<Eigen::Index>(ns) * P);
    for (int p = 0; p < P; ++p) {
        ws.X(0, p) = xs[p];
        ws.X(1, p) = ts[p];
    }
    if (ns > kSlotDx)
        for (int p = 0; p < P; ++p) ws.X(0, kSlotDx * P + p) = 1.0;
    if (ns > kSlotDt)
        for (int p = 0; p < P; ++p) ws.X(1, kSlotDt * P + p) = 1.0;
}

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
constexpr double kInvSqrt2Pi = 0.5 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi;

// erf(z/sqrt2) and exp(-z^2/2) with the scaling folded into the
// transcendental pass; these feed the gelu kernels.
#ifdef POROPINN_HAVE_MVEC_AVX512
void vec_erf_scaled(double* dst, const double* z, std::ptrdiff_t n) {
    const __m512d c = _mm512_set1_pd(kInvSqrt2);
    std::ptrdiff_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm512_storeu_pd(dst + i, _ZGVeN8v_erf(_mm512_mul_pd(_mm512_loadu_pd(z + i), c)));
    for (; i < n; ++i) dst[i] = std::erf(z[i] * kInvSqrt2);
}
void vec_exp_neghalfsq(double* dst, const double* z, std::ptrdiff_t n) {
    const __m512d c = _mm512_set1_pd(-0.5);
    std::ptrdiff_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m512d v = _mm512_loadu_pd(z + i);
        _mm512_storeu_pd(dst + i, _ZGVeN8v_exp(_mm512_mul_pd(_mm512_mul_pd(v, v), c)));
    }
    for (; i < n; ++i) dst[i] = std::exp(-0.5 * z[i] * z[i]);
}
#else
void vec_erf_scaled(double* dst, const double* z, std::ptrdiff_t n) {
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = std::erf(z[i] * kInvSqrt2);
}
void vec_exp_neghalfsq(double* dst, const double* z, std::ptrdiff_t n) {
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = std::exp(-0.5 * z[i] * z[i]);
}
#endif

// Derivative-slot chain rule, one fused pass over the block columns.  The
// slot blocks of Z and H are contiguous runs of m = n*P doubles, aligned
// elementwise with the m-sized G1/G2 caches, so flat indexing covers them.
template <int NS>
void forward_slots(std::ptrdiff_t m, const double* z, const double* g1, const double* g2,
                   double* h) {
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double a = g1[i];
        [[maybe_unused]] const double b = g2[i];
        if constexpr (NS > kSlotDx) h[m + i] = a * z[m + i];
        if constexpr (NS > kSlotDt) h[2 * m + i] = a * z[2 * m + i];
        if constexpr (NS > kSlotDxx)
            h[3 * m + i] = b * z[m + i] * z[m + i] + a * z[3 * m + i];
        if constexpr (NS > kSlotDxt)
            h[4 * m + i] = b * z[m + i] * z[2 * m + i] + a * z[4 * m + i];
        if constexpr (NS > kSlotDtt)
            h[5 * m + i] = b * z[2 * m + i] * z[2 * m + i] + a * z[5 * m + i];
    }
}

// sigma applied slot-blockwise: the value block goes through sigma itself,
// derivative blocks through the second-order chain rule.  Caches G1, G2 and
// EX so the reverse pass can also form sigma'''.
void activation_forward_block(Activation act, int ns, int P, const Eigen::MatrixXd& Z,
                              Eigen::MatrixXd& H, Eigen::MatrixXd& G1, Eigen::MatrixXd& G2,
                              Eigen::MatrixXd& EX, Eigen::MatrixXd& S1, Eigen::MatrixXd& S2) {
    const std::ptrdiff_t m = Z.rows() * P;
    const double* z = Z.data();
    double* h = H.data();
    double* g1 = G1.data();
    double* g2 = G2.data();
    double* ex = EX.data();
    if (act == Activation::Tanh) {
        vec_tanh(ex, z, m);  // EX = tanh(z)
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            const double s = ex[i];
            const double a = 1.0 - s * s;
            h[i] = s;
            g1[i] = a;
            g2[i] = -2.0 * s * a;
        }
    } else {
        // gelu(z) = z Phi(z);  Phi = (1+erf(z/sqrt2))/2,  phi = exp(-z^2/2)/sqrt(2pi)
        vec_erf_scaled(S1.data(), z, m);
        vec_exp_neghalfsq(S2.data(), z, m);
        const double* erf_z = S1.data();
        const double* exp_z = S2.data();
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            const double zv = z[i];
            const double Phi = 0.5 * (1.0 + erf_z[i]);
            const double ph = kInvSqrt2Pi * exp_z[i];
            h[i] = zv * Phi;
            g1[i] = Phi + zv * ph;
            g2[i] = (2.0 - zv * zv) * ph;
            ex[i] = ph;
        }
    }
    switch (ns) {
        case 1: break;
        case 2: forward_slots<2>(m, z, g1, g2, h); break;
        case 3: forward_slots<3>(m, z, g1, g2, h); break;
        case 4: forward_slots<4>(m, z, g1, g2, h); break;
        case 5: forward_slots<5>(m, z, g1, g2, h); break;
        default: forward_slots<6>(m, z, g1, g2, h); break;
    }
}

// Adjoint of activation_forward_block: turns d(loss)/dH into d(loss)/dZ, in
// place, one fused pass.  Every element reads its inputs before any write,
// so the in-place slot rewrites are hazard-free.
template <int NS, bool IsTanh>
void backward_slots(std::ptrdiff_t m, const double* z, const double* g1, const double* g2,
                    const double* ex, double* adj) {
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double a1 = g1[i];
        const double a2 = g2[i];
        double av = adj[i];
        if constexpr (NS <= kSlotDx) {
            adj[i] = av * a1;
            continue;
        }
        const double zdx = z[m + i];
        const double adx = adj[m + i];
        if constexpr (NS <= kSlotDt) {
            adj[i] = av * a1 + a2 * zdx * adx;
            adj[m + i] = adx * a1;
            continue;
        }
        // sigma''' enters only through the second-order slots
        [[maybe_unused]] double g3 = 0.0;
        if constexpr (NS > kSlotDxx) {
            if constexpr (IsTanh) {
                g3 = -2.0 * a1 * a1 - 2.0 * ex[i] * a2;
            } else {
                const double zv = z[i];
                g3 = (zv * zv * zv - 4.0 * zv) * ex[i];
            }
        }
        const double zdt = z[2 * m + i];
        const double adt = adj[2 * m + i];
        av = av * a1 + a2 * (zdx * adx + zdt * adt);
        double ndx = adx * a1;
        double ndt = adt * a1;
        if constexpr (NS > kSlotDxx) {
            const double zdxx = z[3 * m + i];
            const double adxx = adj[3 * m + i];
            av += (g3 * zdx * zdx + a2 * zdxx) * adxx;
            ndx += 2.0 * a2 * zdx * adxx;
            adj[3 * m + i] = adxx * a1;
        }
        if constexpr (NS > kSlotDxt) {
            const double zdxt = z[4 * m + i];
            const double adxt = adj[4 * m + i];
            av += (g3 * zdx * zdt + a2 * zdxt) * adxt;
            ndx += a2 * zdt * adxt;
            ndt += a2 * zdx * adxt;
            adj[4 * m + i] = adxt * a1;
        }
        if constexpr (NS > kSlotDtt) {
            const double zdtt = z[5 * m + i];
            const double adtt = adj[5 * m + i];
            av += (g3 * zdt * zdt + a2 * zdtt) * adtt;
            ndt += 2.0 * a2 * zdt * adtt;
            adj[5 * m + i] = adtt * a1;
        }
        adj[i] = av;
        adj[m + i] = ndx;
        adj[2 * m + i] = ndt;
    }
}

void activation_backward_block(Activation act, int ns, int P, const Eigen::MatrixXd& Z,
                               const Eigen::MatrixXd& G1, const Eigen::MatrixXd& G2,
                               const Eigen::MatrixXd& EX, Eigen::MatrixXd& adj) {
    const std::ptrdiff_t m = Z.rows() * P;
    const double* z = Z.data();
    const double* g1 = G1.data();
    const double* g2 = G2.data();
    const double* ex = EX.data();
    double* a = adj.data();
    const bool is_tanh = act == Activation::Tanh;
    switch (ns) {
        case 1:
            is_tanh ? backward_slots<1, true>(m, z, g1, g2, ex, a)
                    : backward_slots<1, false>(m, z, g1, g2, ex, a);
            break;
        case 2:
            is_tanh ? backward_slots<2, true>(m, z, g1, g2, ex, a)
                    : backward_slots<2, false>(m, z, g1, g2, ex, a);
            break;
        case 3:
            is_tanh ? backward_slots<3, true>(m, z, g1, g2, ex, a)
                    : backward_slots<3, false>(m, z, g1, g2, ex, a);
            break;
        case 4:
            is_tanh ? backward_slots<4, true>(m, z, g1, g2, ex, a)
                    : backward_slots<4, false>(m, z, g1, g2, ex, a);
            break;
        case 5:
            is_tanh ? backward_slots<5, true>(m, z, g1, g2, ex, a)
                    : backward_slots<5, false>(m, z, g1, g2, ex, a);
            break;
        default:
            is_tanh ? backward_slots<6, true>(m, z, g1, g2, ex, a)
                    : backward_slots<6, false>(m, z, g1, g2, ex, a);
            break;
    }
}

}  // namespace

const Eigen::MatrixXd& mlp_forward_batch(const MlpSpec& spec, std::span<const double> theta,
                                         Activation act, int ns, int npts,
                                         BatchWorkspace& ws) {
    check_theta_size(spec, theta);
    const int L = spec.n_layers();
    const Eigen::Index cols = static_cast<Eigen::Index>(ns) * npts;
    if (ws.X.rows() != spec.n_in() || ws.X.cols() != cols)
        throw std::invalid_argument("batch inputs not prepared for this shape");

    ws.Z.resize(L);
    ws.H.resize(L);
    ws.G1.resize(L);
    ws.G2.resize(L);
    ws.EX.resize(L);
    const Eigen::MatrixXd* prev = &ws.X;
    for (int l = 0; l < L; ++l) {
        const int n_in = spec.layer_sizes[l];
        const int n_out = spec.layer_sizes[l + 1];
        ConstWeightMap W(theta.data() + spec.weight_offset(l), n_out, n_in);
        ConstVecMap b(theta.data() + spec.bias_offset(l), n_out);
        ws.Z[l].resize(n_out, cols);
        ws.Z[l].noalias() = W * (*prev);
        ws.Z[l].leftCols(npts).colwise() += b;
        if (l + 1 < L) {
            ws.H[l].resize(n_out, cols);
            ws.G1[l].resize(n_out, npts);
            ws.G2[l].resize(n_out, npts);
            ws.EX[l].resize(n_out, npts);
            ws.S1.resize(n_out, npts);
            ws.S2.resize(n_out, npts);
            activation_forward_block(act, ns, npts, ws.Z[l], ws.H[l], ws.G1[l], ws.G2[l],
                                     ws.EX[l], ws.S1, ws.S2);
            prev = &ws.H[l];
        }
    }
    return ws.Z[L - 1];
}

void mlp_backward_batch(const MlpSpec& spec, std::span<const double> theta, Activation act,
                        int ns, int npts, BatchWorkspace& ws, const Eigen::MatrixXd& out_adj,
                        std::span<double> grad) {
    check_theta_size(spec, theta);
    if (grad.size() != spec.param_count())
        throw std::invalid_argument("gradient buffer size does not match network spec");
    const int L = spec.n_layers();
    const Eigen::Index cols = static_cast<Eigen::Index>(ns) * npts;
    if (out_adj.rows() != spec.n_out() || out_adj.cols() != cols)
        throw std::invalid_argument("output adjoint has wrong shape");

    ws.adj_a = out_adj;
    for (int l = L - 1; l >= 0; --l) {
        const int n_in = spec.layer_sizes[l];
        const int n_out = spec.layer_sizes[l + 1];
        const Eigen::MatrixXd& prev = (l == 0) ? ws.X : ws.H[l - 1];
        WeightMap gW(grad.data() + spec.weight_offset(l), n_out, n_in);
        VecMap gb(grad.data() + spec.bias_offset(l), n_out);
        gW.noalias() += ws.adj_a * prev.transpose();
        gb.noalias() += ws.adj_a.leftCols(npts).rowwise().sum();
        if (l > 0) {
            ConstWeightMap W(theta.data() + spec.weight_offset(l), n_out, n_in);
            ws.adj_b.resize(n_in, cols);
            ws.adj_b.noalias() = W.transpose() * ws.adj_a;
            activation_backward_block(act, ns, npts, ws.Z[l - 1], ws.G1[l - 1], ws.G2[l - 1],
                                      ws.EX[l - 1], ws.adj_b);
            std::swap(ws.adj_a, ws.adj_b);
        }
    }
}

Jet2 batch_output_jet(const Eigen::MatrixXd& out, int unit, int pt, int ns, int npts) {
    Jet2 j;
    double* slots[6] = {&j.val, &j.dx, &j.dt, &j.dxx, &j.dxt, &j.dtt};
    for (int s = 0; s < ns; ++s) *slots[s] = out(unit, s * npts + pt);
    return j;
}

void add_output_adjoint(Eigen::MatrixXd& out_adj, int unit, int pt, int ns, int npts,
                        const Jet2& adj) {
    const double* slots[6] = {&adj.val, &adj.dx, &adj.dt, &adj.dxx, &adj.dxt, &adj.dtt};
    for (int s = 0; s < ns; ++s) out_adj(unit, s * npts + pt) += *slots[s];
}

}  // namespace poropinn
