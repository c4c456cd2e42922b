// affine.hpp — boxes, certified affine contractions, word compositions,
// and closed-form fixed points.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ifs/types.hpp"

namespace ifs {

struct Box {
    Eigen::VectorXd lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double diameter() const { return (hi - lo).norm(); }
    bool contains(const Eigen::VectorXd& x, double tol) const;
    // 2^d corner points, lexicographic in axis choices.
    std::vector<Eigen::VectorXd> corners() const;
};

Box make_box(Eigen::VectorXd lo, Eigen::VectorXd hi);

// Upper bound on the operator 2-norm: power iteration on A^T A to 1e-10
// relative convergence, inflated by a 1e-9 relative margin.
// Throws Contraction when the bound reaches 1.
double certify_ratio(const Eigen::MatrixXd& A);

class AffineMap {
public:
    AffineMap(Eigen::MatrixXd linear, Eigen::VectorXd offset, double ratio)
        : linear_(std::move(linear)), offset_(std::move(offset)), ratio_(ratio) {}

    int dim() const { return static_cast<int>(offset_.size()); }
    const Eigen::MatrixXd& linear() const { return linear_; }
    const Eigen::VectorXd& offset() const { return offset_; }
    double ratio() const { return ratio_; }
    bool invertible() const;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return linear_ * x + offset_; }
    // Column-wise application to a d x N stack of points.
    Eigen::MatrixXd apply_all(const Eigen::MatrixXd& pts) const {
        return (linear_ * pts).colwise() + offset_;
    }

private:
    Eigen::MatrixXd linear_;
    Eigen::VectorXd offset_;
    double ratio_;
};

// Certifies the ratio and checks that the map sends `box` into itself
// (affine images of a box are determined by its corners).
AffineMap make_contraction(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Box& box);

struct MapFamily {
    Box box;
    std::vector<AffineMap> maps;  // maps[a-1] belongs to symbol a

    int dim() const { return box.dim(); }
    int size() const { return static_cast<int>(maps.size()); }
    const AffineMap& map(Symbol a) const;
    double max_ratio() const;
    double ratio_sum() const;
};

// g after f: x -> g(f(x)).
AffineMap compose(const AffineMap& g, const AffineMap& f);

// f_u applying f_{u_1} first and f_{u_n} last; ratio certified as the
// product of component ratios. Empty words have no contraction: error.
AffineMap compose_word(const MapFamily& family, const Word& u);

// Unique x* with f(x*) = x*, solved from (I - A) x* = b.
Eigen::VectorXd fixed_point(const AffineMap& f);

// General affine transform between spaces of possibly different dimension
// (factor maps phi_2); not necessarily a contraction.
struct AffineTransform {
    Eigen::MatrixXd linear;  // d_out x d_in
    Eigen::VectorXd offset;  // d_out

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return linear * x + offset; }
    Eigen::MatrixXd apply_all(const Eigen::MatrixXd& pts) const {
        return (linear * pts).colwise() + offset;
    }
};

}  // namespace ifs
