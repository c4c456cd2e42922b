// tests/helpers.hpp — shared fixtures: the worked example systems and a
// deterministic random-system generator for property tests.
#pragma once

#include <random>
#include <string>

#include "ifs/analysis.hpp"
#include "ifs/config.hpp"
#include "ifs/hutchinson.hpp"
#include "ifs/orbit.hpp"

namespace testutil {

using namespace ifs;

inline std::string config_path(const std::string& name) {
    return std::string(IFS_CONFIG_DIR) + "/" + name;
}

inline Box unit_box(int d) {
    return make_box(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d));
}

inline AffineMap scalar_map(double a, double b, const Box& box) {
    Eigen::MatrixXd A(1, 1);
    A(0, 0) = a;
    Eigen::VectorXd off(1);
    off[0] = b;
    return make_contraction(A, off, box);
}

inline MapFamily cantor_family() {
    MapFamily fam;
    fam.box = unit_box(1);
    fam.maps.push_back(scalar_map(1.0 / 3.0, 0.0, fam.box));
    fam.maps.push_back(scalar_map(1.0 / 3.0, 2.0 / 3.0, fam.box));
    return fam;
}

inline IfsSystem cantor_full_system() {
    return IfsSystem(cantor_family(), Subshift(FullShift{2}), true, true);
}

inline IfsSystem ex12_system() {
    return IfsSystem(cantor_family(), Subshift(OrbitClosureShift{2, {}, {1, 2}}), true, false);
}

inline IfsSystem golden_system() {
    return IfsSystem(cantor_family(), Subshift(FiniteTypeShift{2, {{2, 2}}}), true, true);
}

inline IfsSystem two_fixed_points_system() {
    return IfsSystem(cantor_family(), Subshift(FiniteTypeShift{2, {{1, 2}, {2, 1}}}), true, false);
}

inline MapFamily rooted_family() {
    MapFamily fam;
    fam.box = unit_box(1);
    fam.maps.push_back(scalar_map(0.25, 0.125, fam.box));
    fam.maps.push_back(scalar_map(1.0 / 3.0, 1.0 / 3.0, fam.box));
    fam.maps.push_back(scalar_map(1.0 / 3.0, 0.25, fam.box));
    return fam;
}

inline IfsSystem rooted_system() {
    return IfsSystem(rooted_family(), Subshift(CodedShift{3, {{1, 2}, {1, 2, 3}}}), true, false);
}

// Small random contractive system; deterministic per seed. Dimension
// alternates with the seed parity, alphabet size is 2 or 3.
inline IfsSystem random_system(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int d = (seed % 2 == 0) ? 1 : 2;
    const int k = 2 + static_cast<int>(rng() % 2);
    Box box = unit_box(d);
    MapFamily fam;
    fam.box = box;
    std::uniform_real_distribution<double> ratio(0.18, 0.40);
    std::uniform_real_distribution<double> center(0.15, 0.85);
    std::uniform_real_distribution<double> angle(0.0, 6.28318530717958648);
    while (static_cast<int>(fam.maps.size()) < k) {
        const double r = ratio(rng);
        Eigen::MatrixXd A(d, d);
        if (d == 1) {
            A(0, 0) = (rng() % 4 == 0) ? -r : r;
        } else {
            const double t = angle(rng);
            A << r * std::cos(t), -r * std::sin(t), r * std::sin(t), r * std::cos(t);
        }
        Eigen::VectorXd p(d);
        for (int i = 0; i < d; ++i) p[i] = center(rng);
        const Eigen::VectorXd b = p - A * p;  // fixed point p
        try {
            fam.maps.push_back(make_contraction(A, b, box));
        } catch (const Error&) {
            // image left the box: redraw
        }
    }
    SubshiftSpec spec;
    switch (rng() % 3) {
        case 0: spec = FullShift{k}; break;
        case 1: {
            Word f{1 + static_cast<Symbol>(rng() % k), 1 + static_cast<Symbol>(rng() % k)};
            spec = FiniteTypeShift{k, {f}};
            break;
        }
        default: {
            Word period;
            const int len = 2 + static_cast<int>(rng() % 2);
            for (int i = 0; i < len; ++i) period.push_back(1 + static_cast<Symbol>(rng() % k));
            spec = OrbitClosureShift{k, {}, period};
            break;
        }
    }
    try {
        return IfsSystem(fam, Subshift(spec));
    } catch (const Error&) {
        return IfsSystem(fam, Subshift(FullShift{k}));  // degenerate draw: fall back
    }
}

// union over u in L_n of f_u(A), enumerated word by word: the brute-force
// oracle the level dynamics must match.
inline PointCloud naive_level_union(const IfsSystem& sys, const PointCloud& A, int n) {
    std::vector<std::int64_t> cells;
    for (const auto& u : sys.shift.language(n)) {
        const AffineMap f = compose_word(sys.family, u);
        const Eigen::MatrixXd img = f.apply_all(A.coords());
        for (Eigen::Index j = 0; j < img.cols(); ++j)
            for (int i = 0; i < A.dim(); ++i)
                cells.push_back(std::llround(img(i, j) / A.eps()));
    }
    return PointCloud::from_cells(A.dim(), A.eps(), std::move(cells));
}

inline PointCloud singleton_cloud(const Eigen::VectorXd& x, double eps) {
    Eigen::MatrixXd m(x.size(), 1);
    m.col(0) = x;
    return PointCloud::snap(m, eps);
}

}  // namespace testutil
