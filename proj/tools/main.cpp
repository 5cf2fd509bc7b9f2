#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "poropinn/artifacts.hpp"
#include "poropinn/config.hpp"
#include "poropinn/evaluation.hpp"
#include "poropinn/loss.hpp"
#include "poropinn/training.hpp"

namespace fs = std::filesystem;
using namespace poropinn;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> iterations;
    std::optional<std::string> out_dir;
    bool paper_constants = false;
    bool no_images = false;
};

RunConfig load_with_overrides(const Overrides& ov) {
    RunConfig c = load_run_config(ov.config_path);
    if (ov.seed) c.seed = *ov.seed;
    if (ov.iterations) c.iterations = *ov.iterations;
    if (ov.out_dir) c.out_dir = *ov.out_dir;
    if (ov.paper_constants) c.constants = ConstantsVariant::AsPrinted;
    if (c.iterations < 1) throw std::invalid_argument("--iterations must be >= 1");
    return c;
}

template <typename Body>
void write_file(const fs::path& path, Body&& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(os);
    os.flush();
    if (!os) throw std::runtime_error("failed while writing " + path.string());
}

void write_eval_outputs(const fs::path& dir, const std::vector<ErrorRecord>& records,
                        const EvalGrid& grid, double zeta, bool no_images) {
    write_file(dir / "error_field.csv",
               [&](std::ostream& os) { write_error_field_csv(os, records); });
    if (no_images) return;
    write_file(dir / "err_u.ppm", [&](std::ostream& os) {
        write_error_heatmap_ppm(os, records, grid, FieldIndex::Displacement, zeta);
    });
    write_file(dir / "err_p.ppm", [&](std::ostream& os) {
        write_error_heatmap_ppm(os, records, grid, FieldIndex::Pressure, zeta);
    });
}

void echo_rmse(const EvalReport& rep) {
    std::cout << "rmse_u=" << rep.rmse_u << " rmse_p=" << rep.rmse_p << "\n";
}

int cmd_train(const Overrides& ov) {
    const RunConfig cfg = load_with_overrides(ov);
    const FieldModel model = cfg.make_model();
    const SampleSet samples = cfg.make_sample_set(model.problem);
    const LossWeights weights = cfg.make_weights();

    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    TrainConfig tc = cfg.make_train_config();
    tc.checkpoint_path = (dir / "checkpoint.bin").string();
    if (tc.iterations > 5000) tc.checkpoint_every = 5000;

    std::cout << "training " << architecture_name(cfg.architecture) << " on '"
              << model.problem.name << "' (" << model.param_count() << " parameters, "
              << tc.iterations << " iterations)\n";

    const int print_stride = tc.log_every * 10;
    const TrainReport rep =
        train(tc, model, samples, weights, [&](int it, const LossBreakdown& b) {
            if (it % print_stride == 0 || it == tc.iterations)
                std::cout << "  it " << it << "  loss " << b.total << std::endl;
        });

    const EvalGrid grid;
    const auto records = error_field(model, rep.final_params, grid);
    const EvalReport eval = summarize_errors(records);

    RunMetrics m;
    m.rmse_u = eval.rmse_u;
    m.rmse_p = eval.rmse_p;
    m.max_abs_err_u = eval.max_abs_err_u;
    m.max_abs_err_p = eval.max_abs_err_p;
    m.final_loss = rep.loss_history.back().breakdown.total;
    m.wall_time_s = rep.wall_time_s;
    m.iterations = tc.iterations;
    m.seed = cfg.seed;

    write_file(dir / "loss_history.csv",
               [&](std::ostream& os) { write_loss_history_csv(os, rep.loss_history); });
    write_file(dir / "metrics.txt", [&](std::ostream& os) { write_metrics(os, m); });
    write_eval_outputs(dir, records, grid, model.zeta(), ov.no_images);

    echo_rmse(eval);
    return 0;
}

int cmd_evaluate(const Overrides& ov, const std::string& checkpoint_path, bool exact_oracle) {
    const RunConfig cfg = load_with_overrides(ov);
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const EvalGrid grid;

    std::vector<ErrorRecord> records;
    RunMetrics m;
    m.seed = cfg.seed;
    double zeta = 0.0;

    if (exact_oracle) {
        const ProblemSpec prob = cfg.make_problem_spec();
        zeta = prob.coeffs.zeta;
        records = error_field_from(
            [&prob](double x, double t, Side s) { return prob.exact(x, t, s); }, prob, grid);
    } else {
        if (checkpoint_path.empty())
            throw std::invalid_argument("evaluate needs --checkpoint or --exact-oracle");
        const FieldModel model = cfg.make_model();
        zeta = model.zeta();
        const CheckpointData ck = load_checkpoint(checkpoint_path);
        require_checkpoint_match(ck, model);
        records = error_field(model, ck.theta, grid);
        // final_loss recomputed on the config's sample set for parity with train
        const SampleSet samples = cfg.make_sample_set(model.problem);
        m.final_loss = assemble_loss(model, ck.theta, samples, cfg.make_weights()).total;
    }

    const EvalReport eval = summarize_errors(records);
    m.rmse_u = eval.rmse_u;
    m.rmse_p = eval.rmse_p;
    m.max_abs_err_u = eval.max_abs_err_u;
    m.max_abs_err_p = eval.max_abs_err_p;

    write_file(dir / "metrics.txt", [&](std::ostream& os) { write_metrics(os, m); });
    write_eval_outputs(dir, records, grid, zeta, ov.no_images);
    echo_rmse(eval);
    return 0;
}

int cmd_sweep(const Overrides& ov) {
    const RunConfig cfg = load_with_overrides(ov);
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    SweepSettings s;
    s.depths = cfg.sweep_depths;
    s.widths = cfg.sweep_widths;
    s.act1 = cfg.act1;
    s.act2 = cfg.act2;
    s.enforce = cfg.enforce;
    s.sampling = cfg.sampling;
    s.bias_exponent = cfg.bias_exponent;
    s.counts = cfg.counts;
    s.weights = cfg.make_weights();
    s.train = cfg.make_train_config();

    std::cout << "sweeping " << s.depths.size() * s.widths.size() << " architectures on '"
              << cfg.problem << "' (" << s.train.iterations << " iterations each)\n";
    const auto rows = architecture_sweep(cfg.make_problem_spec(), s, [](const SweepRow& r) {
        std::cout << "  " << r.depth << " x " << r.width << "  rmse_u " << r.rmse_u
                  << "  rmse_p " << r.rmse_p << std::endl;
    });

    write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, rows); });
    return 0;
}

int cmd_verify(const std::string& problem, double tol, bool paper_constants) {
    const ConstantsVariant variant =
        paper_constants ? ConstantsVariant::AsPrinted : ConstantsVariant::Corrected;
    std::vector<std::string> names;
    if (problem == "all")
        names = {"homogeneous", "incompressible", "compressible"};
    else
        names = {problem};

    bool all_ok = true;
    for (const std::string& name : names) {
        VerifyOptions opt;
        opt.tol = tol;
        const VerifyReport rep = verify_analytic(make_problem(name, variant), opt);
        std::cout << name << " (" << constants_variant_name(variant) << "): "
                  << (rep.pass ? "PASS" : "FAIL") << " at tol " << tol << "\n";
        for (const VerifyCheck& c : rep.checks)
            std::cout << "  " << c.name << "  max|residual| = " << c.max_abs
                      << (c.ok(tol) ? "" : "  <-- violated") << "\n";
        all_ok = all_ok && rep.pass;
    }
    return all_ok ? 0 : 1;
}

void add_common(CLI::App* sub, Overrides& ov, bool with_images) {
    sub->add_option("--config", ov.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", ov.seed, "override the config seed");
    sub->add_option("--iterations", ov.iterations, "override the training iterations");
    sub->add_option("--out-dir", ov.out_dir, "override the output directory");
    sub->add_flag("--paper-constants", ov.paper_constants,
                  "use the constants exactly as printed in the source tables");
    if (with_images)
        sub->add_flag("--no-images", ov.no_images, "skip the PPM error heatmaps");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"physics-informed solvers for heterogeneous Biot poroelasticity"};
    app.require_subcommand(1);

    Overrides train_ov, eval_ov, sweep_ov;
    std::string checkpoint_path;
    bool exact_oracle = false;
    std::string verify_problem = "all";
    double verify_tol = 1e-8;
    bool verify_paper = false;

    CLI::App* t = app.add_subcommand("train", "train a model and write run artifacts");
    add_common(t, train_ov, true);

    CLI::App* e = app.add_subcommand("evaluate", "score a checkpoint without training");
    add_common(e, eval_ov, true);
    e->add_option("--checkpoint", checkpoint_path, "checkpoint to evaluate")
        ->check(CLI::ExistingFile);
    e->add_flag("--exact-oracle", exact_oracle,
                "evaluate the closed-form solution instead of a checkpoint");

    CLI::App* s = app.add_subcommand("sweep", "train the architecture grid and tabulate RMSE");
    add_common(s, sweep_ov, false);

    CLI::App* v = app.add_subcommand("verify", "substitute the closed form into the equations");
    v->add_option("--problem", verify_problem,
                  "homogeneous | incompressible | compressible | all");
    v->add_option("--tol", verify_tol, "residual tolerance");
    v->add_flag("--paper-constants", verify_paper,
                "use the constants exactly as printed in the source tables");

    CLI11_PARSE(app, argc, argv);

    try {
        if (t->parsed()) return cmd_train(train_ov);
        if (e->parsed()) return cmd_evaluate(eval_ov, checkpoint_path, exact_oracle);
        if (s->parsed()) return cmd_sweep(sweep_ov);
        if (v->parsed()) return cmd_verify(verify_problem, verify_tol, verify_paper);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
