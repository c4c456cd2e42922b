// analysis.hpp — separation criteria for totally disconnected attractors,
// numerical factor-code verification, and finite-horizon dynamics probes.
// Probe classifications are finite-horizon evidence, never proofs.
#pragma once

#include <optional>
#include <vector>

#include "ifs/hutchinson.hpp"
#include "ifs/orbit.hpp"
#include "ifs/system.hpp"

namespace ifs {

struct RatioSumResult {
    double sum = 0.0;
    bool pass = false;  // sum < 1
};
RatioSumResult check_ratio_sum(const MapFamily& family);

enum class SeparationOutcome { Pass, Fail, Inconclusive };

struct SeparationLevel {
    int n = 0;
    SeparationOutcome outcome = SeparationOutcome::Fail;
    double min_gap = 0.0;  // smallest pairwise distance between word images
};

// Exact affine images of the box: interval overlap in 1D, separating-axis
// test on corner hulls in 2D, conservative bounding boxes in d >= 3 (where a
// bounding-box overlap is only Inconclusive).
SeparationLevel check_separation(const IfsSystem& sys, int n, std::size_t word_cap = 4096);

struct SeparationReport {
    double ratio_sum = 0.0;
    bool ratio_sum_pass = false;
    std::vector<SeparationLevel> levels;
    int first_passing_n = -1;
};
SeparationReport run_separation(const IfsSystem& sys, int n_from, int n_to,
                                std::size_t word_cap = 4096);

struct PairDisjointness {
    Symbol i = 0, j = 0;
    double distance = 0.0;
    bool pass = false;
};

struct ImageDisjointnessReport {
    std::vector<PairDisjointness> pairs;
    bool all_pass = false;
};

// Requires the system to be declared totally invariant.
ImageDisjointnessReport check_image_disjointness_on_s(const IfsSystem& sys, const PointCloud& S);

struct FactorCheckReport {
    double max_residual = 0.0;
    std::size_t windows = 0;
    std::size_t samples_per_window = 0;
    double attractor_image_dh = 0.0;
    double budget = 0.0;  // 2 * tol
    bool residual_pass = false;
    bool attractor_pass = false;
};

// Commutativity residual of phi2 . f_{w at memory position} against
// f'_{Phi(w)} . phi2 over admissible windows and sampled points, plus
// d_H(phi2(S), S').
FactorCheckReport verify_factoring(const IfsSystem& src, const IfsSystem& dst,
                                   const FactorCode& code, const AffineTransform& phi2,
                                   std::size_t samples_per_window, std::uint64_t rng_seed,
                                   const PointCloud& S_src, const PointCloud& S_dst, double tol);

struct ReturnBall {
    Eigen::VectorXd center;
    double radius = 0.0;
};

enum class ReturnClassification { Empty, Nonempty, ThickUpToHorizon, CofiniteUpToHorizon };

struct ReturnTimeReport {
    int horizon = 0;
    std::vector<int> hits;  // sorted levels n with some S-point of U mapped into V
    ReturnClassification classification = ReturnClassification::Empty;
    int longest_run = 0;
    int cofinite_from = -1;  // smallest M <= H/2 with [M, H] fully hit, else -1
};

// Classification rules: nonempty -> transitivity evidence; a run of length
// >= ceil(sqrt(H)) -> thick; complement of [M, H] empty for some M <= H/2 ->
// cofinite. The strongest applicable label wins.
ReturnClassification classify_return_times(const std::vector<int>& hits, int horizon);

// Level dynamics restricted to S: clouds are pruned to the 2*eps*sqrt(d)
// neighborhood of S each level, so only motion inside the attractor counts.
ReturnTimeReport return_time_probe(const IfsSystem& sys, const PointCloud& S,
                                   const ReturnBall& U, const ReturnBall& V, int horizon,
                                   int threads = 1);

struct PeriodicDensityReport {
    std::vector<Word> periods;      // canonical primitive period words found
    double coverage_excess = 0.0;   // one-sided excess of S beyond the cycle union
    bool no_cycles = false;
};

PeriodicDensityReport periodic_density_probe(const IfsSystem& sys, const PointCloud& S,
                                             int max_period, std::size_t word_cap = 65536);

}  // namespace ifs
