#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace poropinn {

// Second-order forward-mode bundle carried through every field evaluation.
// A Jet2 holds the value of a quantity together with its first and second
// partial derivatives with respect to the two domain coordinates (x, t).
struct Jet2 {
    double val = 0.0;
    double dx = 0.0;
    double dt = 0.0;
    double dxx = 0.0;
    double dxt = 0.0;
    double dtt = 0.0;
};

// Jets for the coordinates themselves: d(x)/dx = 1, d(t)/dt = 1, all
// higher/mixed slots zero.
struct InputJets {
    Jet2 x;
    Jet2 t;
};

inline InputJets seed_input(double x, double t) {
    InputJets s;
    s.x = {x, 1.0, 0.0, 0.0, 0.0, 0.0};
    s.t = {t, 0.0, 1.0, 0.0, 0.0, 0.0};
    return s;
}

// A constant has no dependence on (x, t).
inline Jet2 jet_const(double c) { return {c, 0.0, 0.0, 0.0, 0.0, 0.0}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.val + b.val, a.dx + b.dx, a.dt + b.dt,
            a.dxx + b.dxx, a.dxt + b.dxt, a.dtt + b.dtt};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.val - b.val, a.dx - b.dx, a.dt - b.dt,
            a.dxx - b.dxx, a.dxt - b.dxt, a.dtt - b.dtt};
}

inline Jet2 operator-(const Jet2& a) {
    return {-a.val, -a.dx, -a.dt, -a.dxx, -a.dxt, -a.dtt};
}

// Leibniz rule through second order.
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 c;
    c.val = a.val * b.val;
    c.dx = a.dx * b.val + a.val * b.dx;
    c.dt = a.dt * b.val + a.val * b.dt;
    c.dxx = a.dxx * b.val + 2.0 * a.dx * b.dx + a.val * b.dxx;
    c.dxt = a.dxt * b.val + a.dx * b.dt + a.dt * b.dx + a.val * b.dxt;
    c.dtt = a.dtt * b.val + 2.0 * a.dt * b.dt + a.val * b.dtt;
    return c;
}

inline Jet2 operator*(double s, const Jet2& a) {
    return {s * a.val, s * a.dx, s * a.dt, s * a.dxx, s * a.dxt, s * a.dtt};
}

inline Jet2 operator*(const Jet2& a, double s) { return s * a; }

// Chain rule for a scalar function g applied to a jet, given g, g', g''
// evaluated at the jet's value.
inline Jet2 jet_compose(double g0, double g1, double g2, const Jet2& a) {
    Jet2 c;
    c.val = g0;
    c.dx = g1 * a.dx;
    c.dt = g1 * a.dt;
    c.dxx = g2 * a.dx * a.dx + g1 * a.dxx;
    c.dxt = g2 * a.dx * a.dt + g1 * a.dxt;
    c.dtt = g2 * a.dt * a.dt + g1 * a.dtt;
    return c;
}

inline Jet2 jet_exp(const Jet2& a) {
    const double e = std::exp(a.val);
    return jet_compose(e, e, e, a);
}

inline Jet2 jet_tanh(const Jet2& a) {
    const double s = std::tanh(a.val);
    const double s1 = 1.0 - s * s;
    return jet_compose(s, s1, -2.0 * s * s1, a);
}

inline Jet2 jet_erf(const Jet2& a) {
    // erf'(v) = 2/sqrt(pi) * exp(-v^2), erf''(v) = -2v * erf'(v)
    const double g1 = 2.0 * std::numbers::inv_sqrtpi * std::exp(-a.val * a.val);
    return jet_compose(std::erf(a.val), g1, -2.0 * a.val * g1, a);
}

inline Jet2 jet_sin(const Jet2& a) {
    const double s = std::sin(a.val);
    return jet_compose(s, std::cos(a.val), -s, a);
}

inline Jet2 jet_cos(const Jet2& a) {
    const double c = std::cos(a.val);
    return jet_compose(c, -std::sin(a.val), -c, a);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.val == 0.0) {
        throw std::domain_error("jet division by zero value");
    }
    const double inv = 1.0 / b.val;
    const Jet2 binv = jet_compose(inv, -inv * inv, 2.0 * inv * inv * inv, b);
    return a * binv;
}

// Adjoint of b -> a*b for fixed a: given dL/d(a*b) slot by slot, returns
// dL/db.  This is the transpose of the linear map the Leibniz rule applies
// to b's slots; used to pull loss adjoints back through the hard-constraint
// transforms, which are all of the form a*net + const.
inline Jet2 jet_mul_adjoint(const Jet2& a, const Jet2& g) {
    Jet2 r;
    r.val = a.val * g.val + a.dx * g.dx + a.dt * g.dt + a.dxx * g.dxx + a.dxt * g.dxt +
            a.dtt * g.dtt;
    r.dx = a.val * g.dx + 2.0 * a.dx * g.dxx + a.dt * g.dxt;
    r.dt = a.val * g.dt + a.dx * g.dxt + 2.0 * a.dt * g.dtt;
    r.dxx = a.val * g.dxx;
    r.dxt = a.val * g.dxt;
    r.dtt = a.val * g.dtt;
    return r;
}

// Elementary operation ids, mainly for table-driven tests and generic
// composition checks; the named functions above are the workhorses.
enum class JetOp { Add, Sub, Mul, Div, Neg, Scale, Exp, Tanh, Erf };

// Applies `op` to `args`. Scale multiplies args[0] by `scalar`; the other
// unary ops use args[0], binary ops args[0] and args[1].
inline Jet2 jet_arith(JetOp op, std::span<const Jet2> args, double scalar = 1.0) {
    auto need = [&](std::size_t n) {
        if (args.size() < n) throw std::invalid_argument("jet_arith: missing operand");
    };
    switch (op) {
        case JetOp::Add: need(2); return args[0] + args[1];
        case JetOp::Sub: need(2); return args[0] - args[1];
        case JetOp::Mul: need(2); return args[0] * args[1];
        case JetOp::Div: need(2); return args[0] / args[1];
        case JetOp::Neg: need(1); return -args[0];
        case JetOp::Scale: need(1); return scalar * args[0];
        case JetOp::Exp: need(1); return jet_exp(args[0]);
        case JetOp::Tanh: need(1); return jet_tanh(args[0]);
        case JetOp::Erf: need(1); return jet_erf(args[0]);
    }
    throw std::invalid_argument("jet_arith: unknown op");
}

}  // namespace poropinn
