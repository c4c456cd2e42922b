// hutchinson.hpp — level dynamics of the generalized Hutchinson operator.
//
// H^n(A) = union over admissible words u of length n of f_u(A) is never formed
// by enumerating words. Instead each presentation vertex carries a cloud and
// one level step pushes every cloud across every edge:
//
//     C'_q = snap( union over edges p --a--> q of f_a(C_p) )
//
// so the union over vertices after n steps is H^n(A) up to one grid snap per
// level. This costs O(levels * edges * points) independent of |L_n|.
#pragma once

#include <vector>

#include "ifs/cloud.hpp"
#include "ifs/system.hpp"

namespace ifs {

struct LevelState {
    std::vector<PointCloud> per_vertex;  // empty clouds allowed per vertex
    PointCloud unioned() const;          // error when every vertex is empty
};

// Every vertex seeded with the same cloud.
LevelState seed_state(const SoficPresentation& pres, const PointCloud& seed);

LevelState hutchinson_level(const MapFamily& family, const SoficPresentation& pres,
                            const LevelState& state, int threads = 1);

struct AttractorReport {
    PointCloud attractor;
    bool converged = false;
    int levels = 0;               // level index of the reported cloud
    double eps = 0.0;
    double tol = 0.0;
    double seed_pitch = 0.0;      // grid pitch actually used for the seed
    std::vector<double> gaps;     // gaps[n] = d_H(level n, level n+1)
    int nesting_violations = 0;   // one-sided excess beyond 2*eps*sqrt(d)
    std::vector<std::string> warnings;
    std::vector<double> level_ms;
};

// Grid fill of the box at pitch eps (coarsened to stay under max_seed_points,
// corners always included).
PointCloud seed_box_cloud(const Box& box, double eps, std::size_t max_seed_points,
                          double* pitch_out = nullptr);

AttractorReport compute_attractor(const IfsSystem& sys, double eps, double tol, int n_max,
                                  int threads = 1,
                                  std::size_t max_seed_points = 1000000);

// Same iteration from a caller-supplied seed (seed-independence checks).
AttractorReport compute_attractor_from(const IfsSystem& sys, const PointCloud& seed,
                                       double eps, double tol, int n_max, int threads = 1);

struct DefectResult {
    double defect = 0.0;            // d_H(H^n(S), S)
    double excess_s_beyond = 0.0;   // sup_{x in S} dist(x, H^n(S))
    double excess_image_beyond = 0.0;  // sup_{y in H^n(S)} dist(y, S)
};

// Set-equation defect of order n, computed by the level dynamics seeded with S.
DefectResult self_similarity_defect(const IfsSystem& sys, const PointCloud& S, int n,
                                    int threads = 1);

struct ScanRow {
    int n = 0;
    double defect = 0.0;
    bool pass = false;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    // First n of the terminal run of passes, or -1 when the last row fails.
    int first_terminal_pass = -1;
};

ScanResult self_similarity_scan(const IfsSystem& sys, const PointCloud& S, int n_max,
                                double tol, int threads = 1);

}  // namespace ifs
