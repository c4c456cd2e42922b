// orbit.hpp — trajectories along admissible sequences, the induced skew-product
// step, finite cycles of eventually periodic sequences, and decomposition of
// the attractor into sequence limit sets.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ifs/cloud.hpp"
#include "ifs/system.hpp"

namespace ifs {

// Finite prefix of a point of the sub-shift; admissibility checked on build.
struct SequencePrefix {
    Word symbols;
    SequencePrefix(const Subshift& shift, Word w);
};

// sigma = transient . period^inf; transient may be empty, period may not.
// The invariant transient.period.period admissible is checked on build.
struct EventuallyPeriodicPoint {
    Word transient;
    Word period;
    EventuallyPeriodicPoint(const Subshift& shift, Word v, Word u);
    Word prefix(std::size_t len) const;  // first len symbols of sigma
};

struct Cycle {
    Word period;
    std::vector<Eigen::VectorXd> points;  // x0, f_{u_1}(x0), ..., deduplicated
};

// [x, f_{s1}(x), f_{s1 s2}(x), ...]: one more symbol applied per step.
std::vector<Eigen::VectorXd> trajectory(const IfsSystem& sys, const SequencePrefix& prefix,
                                        const Eigen::VectorXd& x);

// One step of T(sigma, x) = (shift sigma, f_{sigma_1}(x)).
std::pair<EventuallyPeriodicPoint, Eigen::VectorXd> skew_product_step(
    const IfsSystem& sys, const EventuallyPeriodicPoint& sigma, const Eigen::VectorXd& x);

// x0 = fixed point of f_u, then the orbit under successive prefixes of u.
// Points closer than dedupe_tol merge (degenerate cycles collapse).
Cycle periodic_cycle(const IfsSystem& sys, const EventuallyPeriodicPoint& p,
                     double dedupe_tol = 1e-10);

struct LimitSetResult {
    PointCloud cloud;
    bool converged = false;  // final image diameter fell below tol
};

// Cluster set of the image sequence f_{s1..sm}(A): snapshots over the window
// [m_max/2, m_max] are unioned after the transients die out.
LimitSetResult limit_set_along(const IfsSystem& sys, const Word& stream, const PointCloud& A,
                               int m_max, double tol);

// A word visiting every admissible word of lengths 1, 2, ... joined by
// shortest connectors; needs an irreducible presentation.
Word transitive_prefix(const Subshift& shift, int min_len);

struct CycleCheck {
    Word transient, period;
    double max_dist_to_attractor = 0.0;
    bool contained = false;
};

struct DecompositionReport {
    std::vector<CycleCheck> cycles;
    double coverage_excess = 0.0;  // one-sided excess of S beyond the cycle union
};

DecompositionReport decomposition_check(const IfsSystem& sys, const PointCloud& S,
                                        const std::vector<EventuallyPeriodicPoint>& samples,
                                        double tol);

}  // namespace ifs
