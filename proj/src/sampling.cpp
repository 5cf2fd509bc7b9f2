#include "poropinn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "poropinn/rng.hpp"

namespace poropinn {

namespace {

void validate_counts(const SampleCounts& c) {
    if (c.n_interior < 1 || c.n_boundary < 1 || c.n_ic < 1 || c.n_interface < 1)
        throw std::invalid_argument("all sample counts must be >= 1");
}

void push_interior(SampleSet& s, double x, double t) {
    PointList& dst = (x <= s.zeta) ? s.interior1 : s.interior2;
    dst.x.push_back(x);
    dst.t.push_back(t);
}

std::vector<double> equispaced_inclusive(int n) {
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = 0.5;
        return xs;
    }
    for (int i = 0; i < n; ++i) xs[i] = static_cast<double>(i) / (n - 1);
    return xs;
}

}  // namespace

SampleSet sample_structured(const SampleCounts& counts, const ProblemSpec& problem) {
    validate_counts(counts);
    SampleSet s;
    s.zeta = problem.coeffs.zeta;
    s.t_final = problem.t_final;

    // nearest-to-square exact factorization nx*nt = n_interior, nx <= nt
    int nx = static_cast<int>(std::floor(std::sqrt(static_cast<double>(counts.n_interior))));
    while (counts.n_interior % nx != 0) --nx;
    const int nt = counts.n_interior / nx;

    for (int i = 0; i < nx; ++i) {
        double x = (i + 0.5) / nx;
        if (x == s.zeta) {
            // shift the coincident column a quarter cell to the right; that
            // stays inside (0,1) for every nx and cannot land on another
            // column midpoint
            x += 0.25 / nx;
        }
        for (int j = 0; j < nt; ++j) push_interior(s, x, (j + 0.5) / nt * s.t_final);
    }

    const int n0 = counts.n_boundary / 2;
    const int n1 = counts.n_boundary - n0;
    s.boundary_x0.resize(n0);
    for (int j = 0; j < n0; ++j) s.boundary_x0[j] = (j + 0.5) / n0 * s.t_final;
    s.boundary_x1.resize(n1);
    for (int j = 0; j < n1; ++j) s.boundary_x1[j] = (j + 0.5) / n1 * s.t_final;

    s.ic = equispaced_inclusive(counts.n_ic);

    s.interface_t.resize(counts.n_interface);
    for (int j = 0; j < counts.n_interface; ++j)
        s.interface_t[j] = (j + 0.5) / counts.n_interface * s.t_final;
    return s;
}

SampleSet sample_biased(const SampleCounts& counts, const ProblemSpec& problem,
                        std::uint64_t seed, double bias_exponent) {
    validate_counts(counts);
    if (bias_exponent < 1.0)
        throw std::invalid_argument("bias exponent must be >= 1");
    SampleSet s;
    s.zeta = problem.coeffs.zeta;
    s.t_final = problem.t_final;

    Rng rng(mix_seed(seed, 1));
    auto biased_t = [&] { return std::pow(rng.uniform01_open_low(), bias_exponent) * s.t_final; };
    // strict open-interval draws; endpoint hits (probability ~2^-53 per draw,
    // possible through rounding) are rejected so the set invariants hold
    // unconditionally
    auto open_interval = [&](double lo, double hi) {
        double v;
        do {
            v = lo + (hi - lo) * rng.uniform01_open_low();
        } while (v <= lo || v >= hi);
        return v;
    };

    int n1 = static_cast<int>(std::lround(counts.n_interior * s.zeta));
    n1 = std::clamp(n1, 1, counts.n_interior - 1);
    for (int i = 0; i < n1; ++i) push_interior(s, open_interval(0.0, s.zeta), biased_t());
    for (int i = n1; i < counts.n_interior; ++i)
        push_interior(s, open_interval(s.zeta, 1.0), biased_t());

    const int n0 = counts.n_boundary / 2;
    for (int j = 0; j < n0; ++j) s.boundary_x0.push_back(biased_t());
    for (int j = n0; j < counts.n_boundary; ++j) s.boundary_x1.push_back(biased_t());

    s.ic.resize(counts.n_ic);
    for (double& x : s.ic) x = rng.uniform01();

    s.interface_t.resize(counts.n_interface);
    for (double& t : s.interface_t) t = biased_t();
    return s;
}

SamplingMode parse_sampling_mode(const std::string& name) {
    if (name == "structured") return SamplingMode::Structured;
    if (name == "biased") return SamplingMode::Biased;
    throw std::invalid_argument("unknown sampling mode '" + name +
                                "' (expected structured or biased)");
}

std::string sampling_mode_name(SamplingMode mode) {
    switch (mode) {
        case SamplingMode::Structured: return "structured";
        case SamplingMode::Biased: return "biased";
    }
    throw std::logic_error("unhandled sampling mode");
}

SampleSet make_samples(SamplingMode mode, const SampleCounts& counts,
                       const ProblemSpec& problem, std::uint64_t seed,
                       double bias_exponent) {
    if (mode == SamplingMode::Structured) return sample_structured(counts, problem);
    return sample_biased(counts, problem, seed, bias_exponent);
}

void write_samples_csv(std::ostream& os, const SampleSet& s) {
    const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
    os << "set_tag,x,t\n";
    auto dump = [&os](const char* tag, const PointList& pl) {
        for (int i = 0; i < pl.size(); ++i)
            os << tag << ',' << pl.x[i] << ',' << pl.t[i] << '\n';
    };
    dump("interior1", s.interior1);
    dump("interior2", s.interior2);
    for (double t : s.boundary_x0) os << "boundary_x0,0," << t << '\n';
    for (double t : s.boundary_x1) os << "boundary_x1,1," << t << '\n';
    for (double x : s.ic) os << "ic," << x << ",0\n";
    for (double t : s.interface_t) os << "interface," << s.zeta << ',' << t << '\n';
    os.precision(old_precision);
}

}  // namespace poropinn
