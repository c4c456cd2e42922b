#include "ifs/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace ifs {

namespace {

void sort_unique_rows(std::vector<std::int64_t>& cells, int dim) {
    if (dim <= 0 || cells.empty()) return;
    const std::size_t n = cells.size() / dim;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto* pa = cells.data() + a * dim;
        const auto* pb = cells.data() + b * dim;
        return std::lexicographical_compare(pa, pa + dim, pb, pb + dim);
    });
    std::vector<std::int64_t> out;
    out.reserve(cells.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto* p = cells.data() + idx[i] * dim;
        if (!out.empty() && std::equal(p, p + dim, out.end() - dim)) continue;
        out.insert(out.end(), p, p + dim);
    }
    cells.swap(out);
}

double dist2_rowcells(const std::int64_t* a, const std::int64_t* b, int dim, double eps) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = (static_cast<double>(a[i]) - static_cast<double>(b[i])) * eps;
        s += d * d;
    }
    return s;
}

struct BucketGrid {
    const PointCloud* cloud;
    std::int64_t h;  // bucket side, in grid cells
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

    static std::uint64_t key(const std::int64_t* c, int dim) {
        std::uint64_t k = 1469598103934665603ull;
        for (int i = 0; i < dim; ++i) {
            std::uint64_t v = static_cast<std::uint64_t>(c[i]);
            for (int b = 0; b < 8; ++b) {
                k ^= (v >> (8 * b)) & 0xff;
                k *= 1099511628211ull;
            }
        }
        return k;
    }

    explicit BucketGrid(const PointCloud& B) : cloud(&B) {
        const int dim = B.dim();
        const std::size_t n = B.size();
        std::int64_t lo = std::numeric_limits<std::int64_t>::max();
        std::int64_t hi = std::numeric_limits<std::int64_t>::min();
        for (std::int64_t c : B.cells()) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        const double spread = static_cast<double>(hi - lo) + 1.0;
        const double per_axis = std::max(1.0, std::floor(std::pow(static_cast<double>(n), 1.0 / dim)));
        h = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(spread / per_axis)));
        std::vector<std::int64_t> bc(dim);
        for (std::size_t i = 0; i < n; ++i) {
            const auto* p = B.cells().data() + i * dim;
            for (int a = 0; a < dim; ++a) bc[a] = floor_div(p[a], h);
            buckets[key(bc.data(), dim)].push_back(i);
        }
    }

    static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }

    // Squared distance from a query cell row to its nearest cloud point.
    // Rings expand until points beyond them cannot beat the current best;
    // the seed from an arbitrary member bounds the walk.
    double nearest2(const std::int64_t* q, int dim) const {
        const auto& cells = cloud->cells();
        const double eps = cloud->eps();
        double best = dist2_rowcells(q, cells.data(), dim, eps);

        std::vector<std::int64_t> qb(dim);
        for (int a = 0; a < dim; ++a) qb[a] = floor_div(q[a], h);

        const double h_len = static_cast<double>(h) * eps;
        for (std::int64_t ring = 0;; ++ring) {
            if (ring > 0) {
                const double lower = (static_cast<double>(ring) - 1.0) * h_len;
                if (lower * lower > best) break;
            }
            scan_ring(qb, ring, dim, [&](const std::int64_t* bc) {
                auto it = buckets.find(key(bc, dim));
                if (it == buckets.end()) return;
                for (std::size_t i : it->second)
                    best = std::min(best, dist2_rowcells(q, cells.data() + i * dim, dim, eps));
            });
        }
        return best;
    }

    template <class F>
    void scan_ring(const std::vector<std::int64_t>& qb, std::int64_t ring, int dim, F&& fn) const {
        std::vector<std::int64_t> bc(dim);
        if (dim == 2) {
            for (std::int64_t dx = -ring; dx <= ring; ++dx)
                for (std::int64_t dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::llabs(dx), std::llabs(dy)) != ring) continue;
                    bc[0] = qb[0] + dx;
                    bc[1] = qb[1] + dy;
                    fn(bc.data());
                }
        } else {
            for (std::int64_t dx = -ring; dx <= ring; ++dx)
                for (std::int64_t dy = -ring; dy <= ring; ++dy)
                    for (std::int64_t dz = -ring; dz <= ring; ++dz) {
                        if (std::max({std::llabs(dx), std::llabs(dy), std::llabs(dz)}) != ring) continue;
                        bc[0] = qb[0] + dx;
                        bc[1] = qb[1] + dy;
                        bc[2] = qb[2] + dz;
                        fn(bc.data());
                    }
        }
    }
};

void check_pair(const PointCloud& A, const PointCloud& B) {
    if (A.empty() || B.empty()) throw Error(ErrorKind::Input, "distance on an empty cloud");
    if (A.dim() != B.dim()) throw Error(ErrorKind::Input, "cloud dimension mismatch");
}

// per-point nearest-neighbor squared distances from A into B
std::vector<double> nearest2_all(const PointCloud& A, const PointCloud& B) {
    check_pair(A, B);
    const int dim = A.dim();
    const std::size_t n = A.size();
    std::vector<double> out(n);
    const auto& ac = A.cells();
    const auto& bc = B.cells();
    if (dim == 1) {
        // both sorted ascending: sweep
        std::size_t j = 0;
        for (std::size_t i = 0; i < n; ++i) {
            while (j + 1 < B.size() && bc[j + 1] <= ac[i]) ++j;
            double best = dist2_rowcells(&ac[i], &bc[j], 1, A.eps());
            if (j + 1 < B.size())
                best = std::min(best, dist2_rowcells(&ac[i], &bc[j + 1], 1, A.eps()));
            out[i] = best;
        }
        return out;
    }
    if (dim <= 3 && A.size() * B.size() > 4096) {
        BucketGrid grid(B);
        for (std::size_t i = 0; i < n; ++i) out[i] = grid.nearest2(ac.data() + i * dim, dim);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < B.size(); ++j)
            best = std::min(best, dist2_rowcells(ac.data() + i * dim, bc.data() + j * dim, dim, A.eps()));
        out[i] = best;
    }
    return out;
}

}  // namespace

PointCloud PointCloud::from_cells(int dim, double eps, std::vector<std::int64_t> cells) {
    if (dim < 1) throw Error(ErrorKind::Input, "cloud dimension must be >= 1");
    if (!(eps > 0.0)) throw Error(ErrorKind::Input, "cloud grid size must be positive");
    if (cells.size() % dim != 0) throw Error(ErrorKind::Input, "cell payload not a multiple of dim");
    sort_unique_rows(cells, dim);
    PointCloud c(dim, eps);
    c.cells_ = std::move(cells);
    return c;
}

PointCloud PointCloud::snap(const Eigen::MatrixXd& pts, double eps) {
    if (pts.cols() == 0) throw Error(ErrorKind::Input, "cannot snap an empty point set");
    if (!(eps > 0.0)) throw Error(ErrorKind::Input, "snap grid size must be positive");
    const int dim = static_cast<int>(pts.rows());
    std::vector<std::int64_t> cells(static_cast<std::size_t>(pts.cols()) * dim);
    for (Eigen::Index j = 0; j < pts.cols(); ++j)
        for (int i = 0; i < dim; ++i)
            cells[static_cast<std::size_t>(j) * dim + i] = std::llround(pts(i, j) / eps);
    return from_cells(dim, eps, std::move(cells));
}

PointCloud snap_points(std::span<const Eigen::VectorXd> pts, double eps) {
    if (pts.empty()) throw Error(ErrorKind::Input, "cannot snap an empty point set");
    Eigen::MatrixXd m(pts[0].size(), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = pts[j];
    return PointCloud::snap(m, eps);
}

Eigen::VectorXd PointCloud::point(std::size_t i) const {
    Eigen::VectorXd x(dim_);
    for (int a = 0; a < dim_; ++a) x[a] = static_cast<double>(cells_[i * dim_ + a]) * eps_;
    return x;
}

Eigen::MatrixXd PointCloud::coords() const {
    Eigen::MatrixXd m(dim_, static_cast<Eigen::Index>(size()));
    for (std::size_t j = 0; j < size(); ++j)
        for (int a = 0; a < dim_; ++a)
            m(a, static_cast<Eigen::Index>(j)) = static_cast<double>(cells_[j * dim_ + a]) * eps_;
    return m;
}

double PointCloud::bounding_diameter() const {
    if (empty()) return 0.0;
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
        std::int64_t lo = cells_[a], hi = cells_[a];
        for (std::size_t j = 0; j < size(); ++j) {
            lo = std::min(lo, cells_[j * dim_ + a]);
            hi = std::max(hi, cells_[j * dim_ + a]);
        }
        const double side = static_cast<double>(hi - lo) * eps_;
        s += side * side;
    }
    return std::sqrt(s);
}

double PointCloud::exact_diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            best = std::max(best, dist2_rowcells(cells_.data() + i * dim_, cells_.data() + j * dim_,
                                                 dim_, eps_));
    return std::sqrt(best);
}

PointCloud merge_clouds(std::span<const PointCloud> clouds) {
    int dim = 0;
    double eps = 0.0;
    std::vector<std::int64_t> cells;
    for (const auto& c : clouds) {
        if (c.empty()) continue;
        if (dim == 0) {
            dim = c.dim();
            eps = c.eps();
        } else if (c.dim() != dim || c.eps() != eps) {
            throw Error(ErrorKind::Input, "merging clouds with mismatched grids");
        }
        cells.insert(cells.end(), c.cells().begin(), c.cells().end());
    }
    if (dim == 0) throw Error(ErrorKind::Input, "all clouds empty in merge");
    return PointCloud::from_cells(dim, eps, std::move(cells));
}

double directed_hausdorff(const PointCloud& A, const PointCloud& B) {
    const auto d2 = nearest2_all(A, B);
    double worst = 0.0;
    for (double v : d2) worst = std::max(worst, v);
    return std::sqrt(worst);
}

double hausdorff_distance(const PointCloud& A, const PointCloud& B) {
    return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

double min_distance(const PointCloud& A, const PointCloud& B) {
    const auto d2 = nearest2_all(A, B);
    double best = std::numeric_limits<double>::infinity();
    for (double v : d2) best = std::min(best, v);
    return std::sqrt(best);
}

double distance_to_cloud(const Eigen::VectorXd& x, const PointCloud& B) {
    if (B.empty()) throw Error(ErrorKind::Input, "distance to an empty cloud");
    if (x.size() != B.dim()) throw Error(ErrorKind::Input, "point dimension mismatch");
    const int dim = B.dim();
    const double eps = B.eps();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < B.size(); ++j) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double d = x[a] - static_cast<double>(B.cells()[j * dim + a]) * eps;
            s += d * d;
        }
        best = std::min(best, s);
    }
    return std::sqrt(best);
}

double directed_hausdorff_naive(const PointCloud& A, const PointCloud& B) {
    check_pair(A, B);
    const int dim = A.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < B.size(); ++j)
            best = std::min(best, dist2_rowcells(A.cells().data() + i * dim,
                                                 B.cells().data() + j * dim, dim, A.eps()));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace ifs
