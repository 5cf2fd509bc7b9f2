#include "poropinn/loss.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace poropinn {

LossWeights weights_from_groups(double pde, double bc, double ic, double interface_w) {
    LossWeights w;
    w.pde = pde;
    w.bc_u = w.bc_t = w.bc_p = w.bc_f = bc;
    w.ic_u = w.ic_p = ic;
    w.int_u = w.int_sigma = w.int_p = w.int_q = interface_w;
    return w;
}

std::array<double, 11> loss_terms(const LossBreakdown& b) {
    return {b.pde, b.bc_u, b.bc_t, b.bc_p, b.bc_f, b.ic_u,
            b.ic_p, b.int_u, b.int_sigma, b.int_p, b.int_q};
}

std::array<double, 11> weight_values(const LossWeights& w) {
    return {w.pde, w.bc_u, w.bc_t, w.bc_p, w.bc_f, w.ic_u,
            w.ic_p, w.int_u, w.int_sigma, w.int_p, w.int_q};
}

namespace {

double weighted_total(const LossWeights& w, const LossBreakdown& b) {
    const std::array<double, 11> lam = weight_values(w);
    const std::array<double, 11> term = loss_terms(b);
    double total = 0.0;
    for (int i = 0; i < 11; ++i) total += lam[i] * term[i];
    return total;
}

}  // namespace

LossAssembler::LossAssembler(const FieldModel& model, const SampleSet& samples,
                             const LossWeights& weights)
    : model_(model), weights_(weights) {
    for (double lam : weight_values(weights_))
        if (!(lam >= 0.0)) throw std::invalid_argument("loss weights must be nonnegative");
    if (samples.zeta != model_.zeta())
        throw std::invalid_argument("sample set interface does not match the model");

    n_interior_ = samples.interior_total();
    n_b0_ = static_cast<int>(samples.boundary_x0.size());
    n_b1_ = static_cast<int>(samples.boundary_x1.size());
    n_ic_ = static_cast<int>(samples.ic.size());
    n_iface_ = static_cast<int>(samples.interface_t.size());

    const bool hard_ic = model_.enforce.hard_ic;
    const bool hard_bc = model_.enforce.hard_bc;
    auto require = [](bool ok, const char* term, const char* what) {
        if (!ok)
            throw std::invalid_argument(std::string(term) +
                                        " term has nonzero weight but no " + what);
    };
    require(!(weights_.pde > 0.0 && n_interior_ == 0), "pde", "interior samples");
    require(!((weights_.bc_t > 0.0 || (weights_.bc_p > 0.0 && !hard_bc)) && n_b0_ == 0),
            "bc(x=0)", "boundary samples at x=0");
    require(!(((weights_.bc_u > 0.0 && !hard_bc) || weights_.bc_f > 0.0) && n_b1_ == 0),
            "bc(x=1)", "boundary samples at x=1");
    require(!(!hard_ic && (weights_.ic_u > 0.0 || weights_.ic_p > 0.0) && n_ic_ == 0),
            "ic", "initial-condition samples");
    const bool any_int = weights_.int_u > 0.0 || weights_.int_sigma > 0.0 ||
                         weights_.int_p > 0.0 || weights_.int_q > 0.0;
    require(!(any_int && n_iface_ == 0), "interface", "interface samples");

    const double zeta = model_.zeta();
    if (samples.interior1.size() > 0)
        sets_.push_back(make_set(Kind::Interior, Side::Left, samples.interior1.x,
                                 samples.interior1.t, 5, 4));
    if (samples.interior2.size() > 0)
        sets_.push_back(make_set(Kind::Interior, Side::Right, samples.interior2.x,
                                 samples.interior2.t, 5, 4));
    if (n_b0_ > 0)
        sets_.push_back(make_set(Kind::BoundaryX0, Side::Left,
                                 std::vector<double>(n_b0_, 0.0), samples.boundary_x0, 2, 1));
    if (n_b1_ > 0)
        sets_.push_back(make_set(Kind::BoundaryX1, Side::Right,
                                 std::vector<double>(n_b1_, 1.0), samples.boundary_x1, 1, 2));
    if (!hard_ic && n_ic_ > 0) {
        std::vector<double> x1, x2;
        for (double x : samples.ic) (x <= zeta ? x1 : x2).push_back(x);
        if (!x1.empty())
            sets_.push_back(make_set(Kind::Initial, Side::Left, x1,
                                     std::vector<double>(x1.size(), 0.0), 1, 1));
        if (!x2.empty())
            sets_.push_back(make_set(Kind::Initial, Side::Right, x2,
                                     std::vector<double>(x2.size(), 0.0), 1, 1));
    }
    if (n_iface_ > 0) {
        iface_left_ = static_cast<int>(sets_.size());
        sets_.push_back(make_set(Kind::Interface, Side::Left,
                                 std::vector<double>(n_iface_, zeta), samples.interface_t,
                                 2, 2));
        iface_right_ = static_cast<int>(sets_.size());
        sets_.push_back(make_set(Kind::Interface, Side::Right,
                                 std::vector<double>(n_iface_, zeta), samples.interface_t,
                                 2, 2));
    }
}

LossAssembler::EvalSet LossAssembler::make_set(Kind kind, Side side, std::vector<double> xs,
                                               std::vector<double> ts, int ns_u, int ns_p) {
    EvalSet s;
    s.kind = kind;
    s.side = side;
    s.xs = std::move(xs);
    s.ts = std::move(ts);
    s.npts = static_cast<int>(s.xs.size());

    if (model_.kind == ArchitectureKind::IpinnsSnn) {
        NetEval e;
        e.net = 0;
        e.ns = std::max(ns_u, ns_p);
        s.evals.push_back(std::move(e));
        s.eval_u = 0;
        s.unit_u = 0;
        s.eval_p = 0;
        s.unit_p = 1;
    } else {
        NetEval eu, ep;
        eu.net = 0;
        eu.ns = ns_u;
        ep.net = 1;
        ep.ns = ns_p;
        s.evals.push_back(std::move(eu));
        s.evals.push_back(std::move(ep));
        s.eval_u = 0;
        s.unit_u = 0;
        s.eval_p = 1;
        s.unit_p = 0;
    }

    if (model_.enforce.hard_ic || model_.enforce.hard_bc) {
        s.tf_u.reserve(s.npts);
        s.tf_p.reserve(s.npts);
        for (int i = 0; i < s.npts; ++i) {
            s.tf_u.push_back(
                hard_transform(model_, FieldIndex::Displacement, s.xs[i], s.ts[i], side));
            s.tf_p.push_back(
                hard_transform(model_, FieldIndex::Pressure, s.xs[i], s.ts[i], side));
        }
    }

    // the sample points never move, so the seeded input blocks can be built
    // once here instead of on every forward pass
    for (NetEval& e : s.evals) set_batch_inputs(e.ws, s.xs, s.ts, e.ns);

    const ProblemSpec& prob = model_.problem;
    s.data0.resize(s.npts);
    s.data1.assign(s.npts, 0.0);
    for (int i = 0; i < s.npts; ++i) {
        const double x = s.xs[i], t = s.ts[i];
        switch (kind) {
            case Kind::Interior: s.data0[i] = prob.source(x, t, side); break;
            case Kind::BoundaryX0:
                s.data0[i] = prob.bc_traction_x0(t);
                s.data1[i] = prob.bc_p_x0(t).val;
                break;
            case Kind::BoundaryX1:
                s.data0[i] = prob.bc_u_x1(t).val;
                s.data1[i] = prob.bc_flux_x1(t);
                break;
            case Kind::Initial: {
                const FieldJets f0 = prob.initial(x, side);
                s.data0[i] = f0.u.val;
                s.data1[i] = f0.p.val;
                break;
            }
            case Kind::Interface: break;  // jumps are driven to zero
        }
    }
    return s;
}

void LossAssembler::forward_set(EvalSet& s, std::span<const double> theta) {
    const Activation act = model_.activation_for(s.side);
    for (NetEval& e : s.evals) {
        e.out = &mlp_forward_batch(model_.specs[e.net], model_.net_params(theta, e.net),
                                   act, e.ns, s.npts, e.ws);
        e.adj.resize(e.out->rows(), e.out->cols());
        e.adj.setZero();
    }
}

void LossAssembler::backward_set(EvalSet& s, std::span<const double> theta,
                                 std::vector<double>& grad) {
    const Activation act = model_.activation_for(s.side);
    for (NetEval& e : s.evals) {
        const MlpSpec& spec = model_.specs[e.net];
        std::span<double> slice(grad.data() + model_.net_offset(e.net), spec.param_count());
        mlp_backward_batch(spec, model_.net_params(theta, e.net), act, e.ns, s.npts, e.ws,
                           e.adj, slice);
    }
}

Jet2 LossAssembler::read_u(const EvalSet& s, int i) const {
    const NetEval& e = s.evals[s.eval_u];
    Jet2 r = batch_output_jet(*e.out, s.unit_u, i, e.ns, s.npts);
    if (!s.tf_u.empty()) r = apply_hard_transform(s.tf_u[i], r);
    return r;
}

Jet2 LossAssembler::read_p(const EvalSet& s, int i) const {
    const NetEval& e = s.evals[s.eval_p];
    Jet2 r = batch_output_jet(*e.out, s.unit_p, i, e.ns, s.npts);
    if (!s.tf_p.empty()) r = apply_hard_transform(s.tf_p[i], r);
    return r;
}

void LossAssembler::seed_u(EvalSet& s, int i, const Jet2& adj) {
    NetEval& e = s.evals[s.eval_u];
    const Jet2 a = s.tf_u.empty() ? adj : jet_mul_adjoint(s.tf_u[i].mult, adj);
    add_output_adjoint(e.adj, s.unit_u, i, e.ns, s.npts, a);
}

void LossAssembler::seed_p(EvalSet& s, int i, const Jet2& adj) {
    NetEval& e = s.evals[s.eval_p];
    const Jet2 a = s.tf_p.empty() ? adj : jet_mul_adjoint(s.tf_p[i].mult, adj);
    add_output_adjoint(e.adj, s.unit_p, i, e.ns, s.npts, a);
}

LossBreakdown LossAssembler::operator()(std::span<const double> theta,
                                        std::vector<double>* grad) {
    if (theta.size() != model_.param_count())
        throw std::invalid_argument("parameter vector size does not match the model");
    const bool want_grad = grad != nullptr;
    if (want_grad) grad->assign(model_.param_count(), 0.0);

    for (EvalSet& s : sets_) forward_set(s, theta);

    const PiecewiseCoefficients& c = model_.problem.coeffs;
    const bool hard_ic = model_.enforce.hard_ic;
    const bool hard_bc = model_.enforce.hard_bc;
    double sum_pde = 0.0, sum_bc_u = 0.0, sum_bc_t = 0.0, sum_bc_p = 0.0, sum_bc_f = 0.0;
    double sum_ic_u = 0.0, sum_ic_p = 0.0;
    double sum_int_u = 0.0, sum_int_s = 0.0, sum_int_p = 0.0, sum_int_q = 0.0;

    for (EvalSet& s : sets_) {
        switch (s.kind) {
            case Kind::Interior: {
                const RegionCoefficients rc = coefficients_on(c, s.side);
                const double wm0 = 2.0 * weights_.pde / n_interior_;
                for (int i = 0; i < s.npts; ++i) {
                    const Jet2 u = read_u(s, i);
                    const Jet2 p = read_p(s, i);
                    const double rm = momentum_residual(rc, u, p);
                    const double rs = mass_residual(rc, u, p, s.data0[i]);
                    sum_pde += rm * rm + rs * rs;
                    if (!want_grad) continue;
                    const double wm = wm0 * rm, ws = wm0 * rs;
                    Jet2 au;
                    au.dxx = -rc.nu * wm;
                    au.dxt = ws;
                    Jet2 ap;
                    ap.dx = wm;
                    ap.dt = rc.a * ws;
                    ap.dxx = -rc.kappa * ws;
                    seed_u(s, i, au);
                    seed_p(s, i, ap);
                }
                break;
            }
            case Kind::BoundaryX0: {
                for (int i = 0; i < s.npts; ++i) {
                    const Jet2 u = read_u(s, i);
                    const double rt = c.nu1 * u.dx - s.data0[i];
                    sum_bc_t += rt * rt;
                    if (want_grad) {
                        Jet2 au;
                        au.dx = 2.0 * weights_.bc_t / n_b0_ * rt * c.nu1;
                        seed_u(s, i, au);
                    }
                    if (hard_bc) continue;
                    const Jet2 p = read_p(s, i);
                    const double rp = p.val - s.data1[i];
                    sum_bc_p += rp * rp;
                    if (want_grad) {
                        Jet2 ap;
                        ap.val = 2.0 * weights_.bc_p / n_b0_ * rp;
                        seed_p(s, i, ap);
                    }
                }
                break;
            }
            case Kind::BoundaryX1: {
                for (int i = 0; i < s.npts; ++i) {
                    const Jet2 p = read_p(s, i);
                    const double rf = c.kappa2 * p.dx - s.data1[i];
                    sum_bc_f += rf * rf;
                    if (want_grad) {
                        Jet2 ap;
                        ap.dx = 2.0 * weights_.bc_f / n_b1_ * rf * c.kappa2;
                        seed_p(s, i, ap);
                    }
                    if (hard_bc) continue;
                    const Jet2 u = read_u(s, i);
                    const double ru = u.val - s.data0[i];
                    sum_bc_u += ru * ru;
                    if (want_grad) {
                        Jet2 au;
                        au.val = 2.0 * weights_.bc_u / n_b1_ * ru;
                        seed_u(s, i, au);
                    }
                }
                break;
            }
            case Kind::Initial: {
                for (int i = 0; i < s.npts; ++i) {
                    const Jet2 u = read_u(s, i);
                    const Jet2 p = read_p(s, i);
                    const double ru = u.val - s.data0[i];
                    const double rp = p.val - s.data1[i];
                    sum_ic_u += ru * ru;
                    sum_ic_p += rp * rp;
                    if (!want_grad) continue;
                    Jet2 au;
                    au.val = 2.0 * weights_.ic_u / n_ic_ * ru;
                    Jet2 ap;
                    ap.val = 2.0 * weights_.ic_p / n_ic_ * rp;
                    seed_u(s, i, au);
                    seed_p(s, i, ap);
                }
                break;
            }
            case Kind::Interface: break;  // handled pairwise below
        }
    }

    if (iface_left_ >= 0) {
        EvalSet& L = sets_[iface_left_];
        EvalSet& R = sets_[iface_right_];
        for (int i = 0; i < n_iface_; ++i) {
            const FieldJets lf = {read_u(L, i), read_p(L, i)};
            const FieldJets rf = {read_u(R, i), read_p(R, i)};
            const InterfaceJumps j = interface_jumps(c, lf, rf);
            sum_int_u += j.du * j.du;
            sum_int_s += j.dtraction * j.dtraction;
            sum_int_p += j.dp * j.dp;
            sum_int_q += j.dflux * j.dflux;
            if (!want_grad) continue;
            const double wu = 2.0 * weights_.int_u / n_iface_ * j.du;
            const double wsg = 2.0 * weights_.int_sigma / n_iface_ * j.dtraction;
            const double wp = 2.0 * weights_.int_p / n_iface_ * j.dp;
            const double wq = 2.0 * weights_.int_q / n_iface_ * j.dflux;
            Jet2 auL, auR, apL, apR;
            auL.val = -wu;
            auR.val = wu;
            auL.dx = -c.nu1 * wsg;
            auR.dx = c.nu2 * wsg;
            apL.val = -wp;
            apR.val = wp;
            apL.dx = -c.kappa1 * wq;
            apR.dx = c.kappa2 * wq;
            seed_u(L, i, auL);
            seed_u(R, i, auR);
            seed_p(L, i, apL);
            seed_p(R, i, apR);
        }
    }

    LossBreakdown b;
    if (n_interior_ > 0) b.pde = sum_pde / n_interior_;
    if (n_b0_ > 0) {
        b.bc_t = sum_bc_t / n_b0_;
        if (!hard_bc) b.bc_p = sum_bc_p / n_b0_;
    }
    if (n_b1_ > 0) {
        b.bc_f = sum_bc_f / n_b1_;
        if (!hard_bc) b.bc_u = sum_bc_u / n_b1_;
    }
    if (!hard_ic && n_ic_ > 0) {
        b.ic_u = sum_ic_u / n_ic_;
        b.ic_p = sum_ic_p / n_ic_;
    }
    if (n_iface_ > 0) {
        b.int_u = sum_int_u / n_iface_;
        b.int_sigma = sum_int_s / n_iface_;
        b.int_p = sum_int_p / n_iface_;
        b.int_q = sum_int_q / n_iface_;
    }
    b.total = weighted_total(weights_, b);

    if (want_grad)
        for (EvalSet& s : sets_) backward_set(s, theta, *grad);
    return b;
}

LossBreakdown assemble_loss(const FieldModel& model, std::span<const double> theta,
                            const SampleSet& samples, const LossWeights& weights,
                            std::vector<double>* grad) {
    LossAssembler assembler(model, samples, weights);
    return assembler(theta, grad);
}

LossBreakdown assemble_loss_field(const FieldFn& fields, const ProblemSpec& problem,
                                  const SampleSet& samples, const LossWeights& weights) {
    const PiecewiseCoefficients& c = problem.coeffs;
    LossBreakdown b;

    const int n_int = samples.interior_total();
    if (n_int > 0) {
        double sum = 0.0;
        auto add_interior = [&](const PointList& pl, Side side) {
            const RegionCoefficients rc = coefficients_on(c, side);
            for (int i = 0; i < pl.size(); ++i) {
                const FieldJets f = fields(pl.x[i], pl.t[i], side);
                const double fsrc = problem.source(pl.x[i], pl.t[i], side);
                const double rm = momentum_residual(rc, f.u, f.p);
                const double rs = mass_residual(rc, f.u, f.p, fsrc);
                sum += rm * rm + rs * rs;
            }
        };
        add_interior(samples.interior1, Side::Left);
        add_interior(samples.interior2, Side::Right);
        b.pde = sum / n_int;
    }

    if (!samples.boundary_x0.empty()) {
        double st = 0.0, sp = 0.0;
        for (double t : samples.boundary_x0) {
            const FieldJets f = fields(0.0, t, Side::Left);
            const double rt = c.nu1 * f.u.dx - problem.bc_traction_x0(t);
            const double rp = f.p.val - problem.bc_p_x0(t).val;
            st += rt * rt;
            sp += rp * rp;
        }
        b.bc_t = st / samples.boundary_x0.size();
        b.bc_p = sp / samples.boundary_x0.size();
    }

    if (!samples.boundary_x1.empty()) {
        double su = 0.0, sf = 0.0;
        for (double t : samples.boundary_x1) {
            const FieldJets f = fields(1.0, t, Side::Right);
            const double ru = f.u.val - problem.bc_u_x1(t).val;
            const double rf = c.kappa2 * f.p.dx - problem.bc_flux_x1(t);
            su += ru * ru;
            sf += rf * rf;
        }
        b.bc_u = su / samples.boundary_x1.size();
        b.bc_f = sf / samples.boundary_x1.size();
    }

    if (!samples.ic.empty()) {
        double su = 0.0, sp = 0.0;
        for (double x : samples.ic) {
            const Side side = side_of(c, x);
            const FieldJets f = fields(x, 0.0, side);
            const FieldJets f0 = problem.initial(x, side);
            su += (f.u.val - f0.u.val) * (f.u.val - f0.u.val);
            sp += (f.p.val - f0.p.val) * (f.p.val - f0.p.val);
        }
        b.ic_u = su / samples.ic.size();
        b.ic_p = sp / samples.ic.size();
    }

    if (!samples.interface_t.empty()) {
        double su = 0.0, ss = 0.0, sp = 0.0, sq = 0.0;
        for (double t : samples.interface_t) {
            const InterfaceJumps j = interface_jumps(c, fields(samples.zeta, t, Side::Left),
                                                     fields(samples.zeta, t, Side::Right));
            su += j.du * j.du;
            ss += j.dtraction * j.dtraction;
            sp += j.dp * j.dp;
            sq += j.dflux * j.dflux;
        }
        b.int_u = su / samples.interface_t.size();
        b.int_sigma = ss / samples.interface_t.size();
        b.int_p = sp / samples.interface_t.size();
        b.int_q = sq / samples.interface_t.size();
    }

    b.total = weighted_total(weights, b);
    return b;
}

}  // namespace poropinn
