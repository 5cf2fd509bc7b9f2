#include "poropinn/artifacts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string_view>
#include <stdexcept>

#include "poropinn/loss.hpp"

namespace poropinn {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Rgb {
    int r, g, b;
};

// compact viridis-like ramp; endpoints are exact stops so the extremes of an
// image are stable reference colors
constexpr std::array<Rgb, 5> kStops = {
    Rgb{68, 1, 84}, Rgb{59, 82, 139}, Rgb{33, 145, 140}, Rgb{94, 201, 98}, Rgb{253, 231, 37}};

Rgb colormap(double v) {
    if (v <= 0.0) return kStops.front();
    if (v >= 1.0) return kStops.back();
    const double pos = v * (kStops.size() - 1);
    const int lo = static_cast<int>(pos);
    const double f = pos - lo;
    const Rgb& a = kStops[lo];
    const Rgb& b = kStops[lo + 1];
    auto mix = [f](int x, int y) { return static_cast<int>(std::lround(x + f * (y - x))); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

}  // namespace

void write_loss_history_csv(std::ostream& os, const std::vector<LossHistoryEntry>& history) {
    os << "iteration,total";
    for (std::string_view name : kLossTermNames) os << ',' << name;
    os << '\n';
    for (const LossHistoryEntry& e : history) {
        os << e.iteration << ',' << fmt(e.breakdown.total);
        for (double term : loss_terms(e.breakdown)) os << ',' << fmt(term);
        os << '\n';
    }
}

void write_error_field_csv(std::ostream& os, const std::vector<ErrorRecord>& records) {
    os << "x,t,u_pred,p_pred,u_exact,p_exact,abs_err_u,abs_err_p\n";
    for (const ErrorRecord& r : records) {
        os << fmt(r.x) << ',' << fmt(r.t) << ',' << fmt(r.u_pred) << ',' << fmt(r.p_pred)
           << ',' << fmt(r.u_exact) << ',' << fmt(r.p_exact) << ',' << fmt(r.abs_err_u)
           << ',' << fmt(r.abs_err_p) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "layers,width,rmse_u,rmse_p\n";
    for (const SweepRow& r : rows)
        os << r.depth << ',' << r.width << ',' << fmt(r.rmse_u) << ',' << fmt(r.rmse_p)
           << '\n';
}

void write_metrics(std::ostream& os, const RunMetrics& m) {
    os << "rmse_u=" << fmt(m.rmse_u) << '\n';
    os << "rmse_p=" << fmt(m.rmse_p) << '\n';
    os << "max_abs_err_u=" << fmt(m.max_abs_err_u) << '\n';
    os << "max_abs_err_p=" << fmt(m.max_abs_err_p) << '\n';
    os << "final_loss=" << fmt(m.final_loss) << '\n';
    os << "wall_time_s=" << fmt(m.wall_time_s) << '\n';
    os << "iterations=" << m.iterations << '\n';
    os << "seed=" << m.seed << '\n';
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("metrics line without '=': " + line);
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

void write_error_heatmap_ppm(std::ostream& os, const std::vector<ErrorRecord>& records,
                             const EvalGrid& grid, FieldIndex field, double zeta) {
    const int nx = grid.nx, nt = grid.nt;
    if (records.size() != static_cast<std::size_t>(nx) * nt)
        throw std::invalid_argument("heatmap: record count does not match the grid");

    const bool u = field == FieldIndex::Displacement;
    double vmax = 0.0;
    for (const ErrorRecord& r : records) vmax = std::max(vmax, u ? r.abs_err_u : r.abs_err_p);

    const int dash_col = static_cast<int>(std::lround(zeta * (nx - 1)));

    os << "P6\n" << nx << ' ' << nt << "\n255\n";
    for (int row = 0; row < nt; ++row) {
        const int j = nt - 1 - row;  // image top = latest time
        const bool dash_on = (row / 4) % 2 == 0;
        for (int i = 0; i < nx; ++i) {
            Rgb c;
            if (i == dash_col && dash_on) {
                c = {255, 255, 255};
            } else {
                const ErrorRecord& r = records[static_cast<std::size_t>(j) * nx + i];
                const double err = u ? r.abs_err_u : r.abs_err_p;
                c = colormap(vmax > 0.0 ? err / vmax : 0.0);
            }
            const char px[3] = {static_cast<char>(c.r), static_cast<char>(c.g),
                                static_cast<char>(c.b)};
            os.write(px, 3);
        }
    }
}

}  // namespace poropinn
