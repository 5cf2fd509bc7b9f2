#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "poropinn/physics.hpp"

namespace poropinn {

// Sizes of the four training-point families.  n_boundary is the total across
// both spatial ends (split evenly); each end's t-values serve both conditions
// imposed there.
struct SampleCounts {
    int n_interior = 4900;
    int n_boundary = 200;
    int n_ic = 100;
    int n_interface = 100;
};

struct PointList {
    std::vector<double> x, t;
    int size() const { return static_cast<int>(x.size()); }
};

// One static training set. Interior points are partitioned by subdomain
// membership so each batch can run under its side's activation; ic holds
// t=0 abscissae, boundary_* hold t-values at the fixed ends, interface the
// t-values at x=zeta.
struct SampleSet {
    PointList interior1, interior2;
    std::vector<double> boundary_x0, boundary_x1;
    std::vector<double> ic;
    std::vector<double> interface_t;
    double zeta = 0.5;  // recorded for self-describing dumps
    double t_final = 1.0;

    int interior_total() const { return interior1.size() + interior2.size(); }
};

// Tensor-product midpoint grid over (0,1)x(0,t_final]: n_interior factored
// nx*nt as near-square as possible, x_i=(i+0.5)/nx, t_j=(j+0.5)/nt*t_final.
// Columns that land exactly on zeta are nudged a quarter cell right (off the
// interface but still inside (0,1), so no interior point needs a side
// tiebreak). ic abscissae are equispaced inclusive of both ends;
// boundary/interface t-values are midpoint rows.
SampleSet sample_structured(const SampleCounts& counts, const ProblemSpec& problem);

// Random set biased toward early times: t = r^bias_exponent with r uniform
// on (0,1], applied to interior, boundary and interface draws alike; x
// uniform per subdomain with counts proportional to subdomain length; ic
// abscissae uniform on [0,1). Deterministic under seed.
SampleSet sample_biased(const SampleCounts& counts, const ProblemSpec& problem,
                        std::uint64_t seed, double bias_exponent = 2.0);

enum class SamplingMode { Structured, Biased };

SamplingMode parse_sampling_mode(const std::string& name);  // "structured" | "biased"
std::string sampling_mode_name(SamplingMode mode);

// Dispatches to sample_structured or sample_biased; seed and bias_exponent
// are ignored in structured mode.
SampleSet make_samples(SamplingMode mode, const SampleCounts& counts,
                       const ProblemSpec& problem, std::uint64_t seed,
                       double bias_exponent = 2.0);

// Plot-friendly dump, one row per point: set_tag,x,t
void write_samples_csv(std::ostream& os, const SampleSet& samples);

}  // namespace poropinn
