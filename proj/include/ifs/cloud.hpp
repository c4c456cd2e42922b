// cloud.hpp — grid-snapped point clouds standing in for compact sets, and the
// Hausdorff metric computed on them.
//
// A cloud stores integer grid cells (coordinate = cell * eps) sorted
// lexicographically and deduplicated, so set operations and merges are exact
// and deterministic. Distances are evaluated on the reconstructed double
// coordinates; nearest-neighbor queries use a sorted sweep in 1D and bucket
// grids with expanding ring search in 2D/3D, falling back to the naive scan
// in higher dimension. Both paths share the same distance arithmetic, so the
// accelerated result matches the naive scan exactly.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "ifs/types.hpp"

namespace ifs {

class PointCloud {
public:
    PointCloud() = default;
    PointCloud(int dim, double eps) : dim_(dim), eps_(eps) {}

    static PointCloud snap(const Eigen::MatrixXd& pts, double eps);  // pts is d x N
    static PointCloud from_cells(int dim, double eps, std::vector<std::int64_t> cells);

    int dim() const { return dim_; }
    double eps() const { return eps_; }
    std::size_t size() const { return dim_ ? cells_.size() / dim_ : 0; }
    bool empty() const { return cells_.empty(); }
    const std::vector<std::int64_t>& cells() const { return cells_; }

    Eigen::VectorXd point(std::size_t i) const;
    Eigen::MatrixXd coords() const;  // d x N
    double bounding_diameter() const;
    // Exact maximal pairwise distance; O(N^2), for small clouds.
    double exact_diameter() const;

    friend bool operator==(const PointCloud& a, const PointCloud& b) = default;

private:
    int dim_ = 0;
    double eps_ = 0.0;
    std::vector<std::int64_t> cells_;  // N * dim, row-sorted, unique
};

PointCloud snap_points(std::span<const Eigen::VectorXd> pts, double eps);

// Sorted-unique union of clouds sharing dim and eps.
PointCloud merge_clouds(std::span<const PointCloud> clouds);

// sup_{a in A} dist(a, B): the one-sided (directed) Hausdorff distance.
double directed_hausdorff(const PointCloud& A, const PointCloud& B);

// max of the two directed distances.
double hausdorff_distance(const PointCloud& A, const PointCloud& B);

// min_{a in A} dist(a, B): separation between clouds.
double min_distance(const PointCloud& A, const PointCloud& B);

double distance_to_cloud(const Eigen::VectorXd& x, const PointCloud& B);

// Test oracle: the O(|A||B|) scan with the same arithmetic.
double directed_hausdorff_naive(const PointCloud& A, const PointCloud& B);

}  // namespace ifs
