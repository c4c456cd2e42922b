#include "ifs/affine.hpp"

#include <cmath>
#include <string>

namespace ifs {

bool Box::contains(const Eigen::VectorXd& x, double tol) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
}

std::vector<Eigen::VectorXd> Box::corners() const {
    const int d = dim();
    std::vector<Eigen::VectorXd> out;
    out.reserve(std::size_t{1} << d);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        Eigen::VectorXd c(d);
        for (int i = 0; i < d; ++i) c[i] = (mask >> i) & 1 ? hi[i] : lo[i];
        out.push_back(std::move(c));
    }
    return out;
}

Box make_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || lo.size() == 0)
        throw Error(ErrorKind::Config, "box bounds must share a positive dimension");
    for (int i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw Error(ErrorKind::Config, "box must have nonempty interior on every axis");
    return Box{std::move(lo), std::move(hi)};
}

double certify_ratio(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw Error(ErrorKind::Input, "contraction matrix must be square");
    if (!A.allFinite()) throw Error(ErrorKind::Input, "contraction matrix has non-finite entries");
    const int d = static_cast<int>(A.rows());
    const Eigen::MatrixXd G = A.transpose() * A;

    // Deterministic start with unequal components so no eigenspace is missed
    // by symmetry.
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = 1.0 + static_cast<double>(i) / (d + 1.0);
    v.normalize();

    double lambda = v.dot(G * v);
    for (int it = 0; it < 100 * d + 1000; ++it) {
        Eigen::VectorXd w = G * v;
        const double norm = w.norm();
        if (norm == 0.0) { lambda = 0.0; break; }
        v = w / norm;
        const double next = v.dot(G * v);
        if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    const double bound = std::sqrt(std::max(0.0, lambda)) * (1.0 + 1e-9);
    if (bound >= 1.0)
        throw Error(ErrorKind::Contraction,
                    "operator norm bound " + std::to_string(bound) + " is not a contraction");
    return bound;
}

bool AffineMap::invertible() const {
    if (linear_.size() == 0) return false;
    return std::abs(linear_.determinant()) > 1e-12;
}

AffineMap make_contraction(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Box& box) {
    if (A.rows() != box.dim() || b.size() != box.dim())
        throw Error(ErrorKind::Input, "map dimension does not match the box");
    const double ratio = certify_ratio(A);
    AffineMap f(A, b, ratio);
    const double scale = std::max(1.0, box.hi.cwiseAbs().maxCoeff());
    for (const auto& c : box.corners())
        if (!box.contains(f(c), 1e-12 * scale))
            throw Error(ErrorKind::Config, "map does not send the ambient box into itself");
    return f;
}

const AffineMap& MapFamily::map(Symbol a) const {
    if (a < 1 || a > size())
        throw Error(ErrorKind::Input, "symbol " + std::to_string(a) + " has no map");
    return maps[static_cast<std::size_t>(a - 1)];
}

double MapFamily::max_ratio() const {
    double r = 0.0;
    for (const auto& f : maps) r = std::max(r, f.ratio());
    return r;
}

double MapFamily::ratio_sum() const {
    double s = 0.0;
    for (const auto& f : maps) s += f.ratio();
    return s;
}

AffineMap compose(const AffineMap& g, const AffineMap& f) {
    return AffineMap(g.linear() * f.linear(), g.linear() * f.offset() + g.offset(),
                     g.ratio() * f.ratio());
}

AffineMap compose_word(const MapFamily& family, const Word& u) {
    if (u.empty())
        throw Error(ErrorKind::Input, "empty word composes to the identity, which is not a contraction");
    AffineMap acc = family.map(u.front());
    for (std::size_t i = 1; i < u.size(); ++i) acc = compose(family.map(u[i]), acc);
    return acc;
}

Eigen::VectorXd fixed_point(const AffineMap& f) {
    const int d = f.dim();
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(d, d) - f.linear();
    const Eigen::VectorXd x = M.partialPivLu().solve(f.offset());
    const double residual = (f(x) - x).norm();
    if (!x.allFinite() || residual > 1e-12 * std::max(1.0, x.norm() + f.offset().norm()))
        throw Error(ErrorKind::Numeric, "fixed point solve failed its residual check");
    return x;
}

}  // namespace ifs
