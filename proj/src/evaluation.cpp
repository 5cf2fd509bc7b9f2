#include "poropinn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "poropinn/network.hpp"

namespace poropinn {

namespace {

void validate_grid(const EvalGrid& grid) {
    if (grid.nx < 2 || grid.nt < 2)
        throw std::invalid_argument("evaluation grid needs nx, nt >= 2 to reach the corners");
}

void require_exact(const ProblemSpec& problem) {
    if (!problem.has_exact)
        throw std::logic_error("problem '" + problem.name +
                               "' has no closed-form solution to evaluate against");
}

// Grid points of one subdomain flattened into batch vectors, with each
// point's slot in the full record list.
struct SideBatch {
    std::vector<double> xs, ts;
    std::vector<int> where;
};

void fill_exact(std::vector<ErrorRecord>& rec, const ProblemSpec& problem,
                const EvalGrid& grid) {
    int k = 0;
    for (int j = 0; j < grid.nt; ++j) {
        const double t = problem.t_final * j / (grid.nt - 1);
        for (int i = 0; i < grid.nx; ++i, ++k) {
            const double x = static_cast<double>(i) / (grid.nx - 1);
            const FieldJets f = problem.exact_at(x, t);
            rec[k].x = x;
            rec[k].t = t;
            rec[k].u_exact = f.u.val;
            rec[k].p_exact = f.p.val;
        }
    }
}

void finish_errors(std::vector<ErrorRecord>& rec) {
    for (ErrorRecord& r : rec) {
        r.abs_err_u = std::abs(r.u_pred - r.u_exact);
        r.abs_err_p = std::abs(r.p_pred - r.p_exact);
    }
}

}  // namespace

std::vector<ErrorRecord> error_field(const FieldModel& model, std::span<const double> theta,
                                     const EvalGrid& grid) {
    validate_grid(grid);
    const ProblemSpec& prob = model.problem;
    require_exact(prob);
    if (theta.size() != static_cast<std::size_t>(model.param_count()))
        throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                    " entries, model expects " +
                                    std::to_string(model.param_count()));

    std::vector<ErrorRecord> rec(static_cast<std::size_t>(grid.nx) * grid.nt);
    fill_exact(rec, prob, grid);

    SideBatch batch[2];
    for (std::size_t k = 0; k < rec.size(); ++k) {
        SideBatch& b = batch[side_of(prob.coeffs, rec[k].x) == Side::Left ? 0 : 1];
        b.xs.push_back(rec[k].x);
        b.ts.push_back(rec[k].t);
        b.where.push_back(static_cast<int>(k));
    }

    // Values only: one forward pass per (side, net) with the minimal slot
    // count, then the hard transforms pointwise on the value channel.
    const bool transformed = model.enforce.hard_ic || model.enforce.hard_bc;
    BatchWorkspace ws;
    for (int s = 0; s < 2; ++s) {
        const SideBatch& b = batch[s];
        if (b.xs.empty()) continue;
        const Side side = s == 0 ? Side::Left : Side::Right;
        const Activation act = model.activation_for(side);
        const int npts = static_cast<int>(b.xs.size());

        const int n_nets = static_cast<int>(model.specs.size());
        for (int net = 0; net < n_nets; ++net) {
            set_batch_inputs(ws, b.xs, b.ts, 1);
            const Eigen::MatrixXd& out = mlp_forward_batch(
                model.specs[net], model.net_params(theta, net), act, 1, npts, ws);
            const bool snn = model.kind == ArchitectureKind::IpinnsSnn;
            for (int i = 0; i < npts; ++i) {
                ErrorRecord& r = rec[b.where[i]];
                auto value_of = [&](int unit, FieldIndex field) {
                    Jet2 j = batch_output_jet(out, unit, i, 1, npts);
                    if (transformed)
                        j = apply_hard_transform(hard_transform(model, field, r.x, r.t, side), j);
                    return j.val;
                };
                if (snn) {
                    r.u_pred = value_of(0, FieldIndex::Displacement);
                    r.p_pred = value_of(1, FieldIndex::Pressure);
                } else if (net == 0) {
                    r.u_pred = value_of(0, FieldIndex::Displacement);
                } else {
                    r.p_pred = value_of(0, FieldIndex::Pressure);
                }
            }
        }
    }

    finish_errors(rec);
    return rec;
}

std::vector<ErrorRecord> error_field_from(const FieldFn& fields, const ProblemSpec& problem,
                                          const EvalGrid& grid) {
    validate_grid(grid);
    require_exact(problem);

    std::vector<ErrorRecord> rec(static_cast<std::size_t>(grid.nx) * grid.nt);
    fill_exact(rec, problem, grid);
    for (ErrorRecord& r : rec) {
        const FieldJets f = fields(r.x, r.t, side_of(problem.coeffs, r.x));
        r.u_pred = f.u.val;
        r.p_pred = f.p.val;
    }
    finish_errors(rec);
    return rec;
}

EvalReport summarize_errors(const std::vector<ErrorRecord>& records) {
    if (records.empty()) throw std::invalid_argument("cannot summarize an empty error field");
    EvalReport rep;
    double su = 0.0, sp = 0.0;
    for (const ErrorRecord& r : records) {
        su += r.abs_err_u * r.abs_err_u;
        sp += r.abs_err_p * r.abs_err_p;
        if (r.abs_err_u > rep.max_abs_err_u) {
            rep.max_abs_err_u = r.abs_err_u;
            rep.max_err_u_x = r.x;
            rep.max_err_u_t = r.t;
        }
        if (r.abs_err_p > rep.max_abs_err_p) {
            rep.max_abs_err_p = r.abs_err_p;
            rep.max_err_p_x = r.x;
            rep.max_err_p_t = r.t;
        }
    }
    const double n = static_cast<double>(records.size());
    // the mean square never exceeds the max square, but the summation can
    // round the other way when every error is identical; keep the invariant
    rep.rmse_u = std::min(std::sqrt(su / n), rep.max_abs_err_u);
    rep.rmse_p = std::min(std::sqrt(sp / n), rep.max_abs_err_p);
    return rep;
}

std::vector<SweepRow> architecture_sweep(const ProblemSpec& problem,
                                         const SweepSettings& settings,
                                         const SweepProgressFn& on_row) {
    if (settings.depths.empty() || settings.widths.empty())
        throw std::invalid_argument("sweep needs at least one depth and one width");
    for (int d : settings.depths)
        if (d < 1) throw std::invalid_argument("sweep depths must be >= 1");
    for (int w : settings.widths)
        if (w < 1) throw std::invalid_argument("sweep widths must be >= 1");
    require_exact(problem);

    const SampleSet samples = make_samples(settings.sampling, settings.counts, problem,
                                           settings.train.seed, settings.bias_exponent);

    std::vector<SweepRow> rows;
    rows.reserve(settings.depths.size() * settings.widths.size());
    for (int depth : settings.depths) {
        for (int width : settings.widths) {
            const std::vector<int> hidden(static_cast<std::size_t>(depth), width);
            const FieldModel model =
                build_model(ArchitectureKind::IpinnsConn, hidden, settings.act1,
                            settings.act2, settings.enforce, problem);
            const TrainReport trained = train(settings.train, model, samples, settings.weights);
            const EvalReport rep = evaluate_model(model, trained.final_params, settings.grid);
            SweepRow row{depth, width, rep.rmse_u, rep.rmse_p};
            rows.push_back(row);
            if (on_row) on_row(row);
        }
    }
    return rows;
}

}  // namespace poropinn
