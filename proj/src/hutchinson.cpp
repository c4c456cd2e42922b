#include "ifs/hutchinson.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <thread>

namespace ifs {

namespace {

std::vector<std::int64_t> snapped_image_cells(const AffineMap& f, const PointCloud& src,
                                              double eps) {
    const Eigen::MatrixXd img = f.apply_all(src.coords());
    const int dim = src.dim();
    std::vector<std::int64_t> cells(static_cast<std::size_t>(img.cols()) * dim);
    for (Eigen::Index j = 0; j < img.cols(); ++j)
        for (int i = 0; i < dim; ++i)
            cells[static_cast<std::size_t>(j) * dim + i] = std::llround(img(i, j) / eps);
    return cells;
}

}  // namespace

PointCloud LevelState::unioned() const {
    bool any = false;
    for (const auto& c : per_vertex)
        if (!c.empty()) { any = true; break; }
    if (!any) throw Error(ErrorKind::EmptyShift, "every per-vertex cloud is empty");
    return merge_clouds(per_vertex);
}

LevelState seed_state(const SoficPresentation& pres, const PointCloud& seed) {
    LevelState st;
    st.per_vertex.assign(static_cast<std::size_t>(pres.vertex_count()), seed);
    return st;
}

LevelState hutchinson_level(const MapFamily& family, const SoficPresentation& pres,
                            const LevelState& state, int threads) {
    const int nv = pres.vertex_count();
    if (static_cast<int>(state.per_vertex.size()) != nv)
        throw Error(ErrorKind::Input, "level state does not match the presentation");
    double eps = 0.0;
    for (const auto& c : state.per_vertex)
        if (!c.empty()) { eps = c.eps(); break; }
    if (eps == 0.0) throw Error(ErrorKind::Input, "level state is entirely empty");

    // incoming edges per target, in deterministic (from, label) order
    std::vector<std::vector<LabeledEdge>> incoming(nv);
    for (const auto& e : pres.edges()) incoming[e.to].push_back(e);

    LevelState next;
    next.per_vertex.assign(nv, PointCloud(family.dim(), eps));

    auto build_vertex = [&](int q) {
        std::vector<std::int64_t> cells;
        for (const auto& e : incoming[q]) {
            const PointCloud& src = state.per_vertex[e.from];
            if (src.empty()) continue;
            auto part = snapped_image_cells(family.map(e.label), src, eps);
            cells.insert(cells.end(), part.begin(), part.end());
        }
        if (!cells.empty())
            next.per_vertex[q] = PointCloud::from_cells(family.dim(), eps, std::move(cells));
    };

    if (threads <= 1 || nv == 1) {
        for (int q = 0; q < nv; ++q) build_vertex(q);
    } else {
        // per-vertex results are independent, so the merge is deterministic
        std::vector<std::future<void>> jobs;
        std::atomic<int> counter{0};
        const int workers = std::min(threads, nv);
        for (int t = 0; t < workers; ++t)
            jobs.push_back(std::async(std::launch::async, [&] {
                for (int q = counter.fetch_add(1); q < nv; q = counter.fetch_add(1)) build_vertex(q);
            }));
        for (auto& j : jobs) j.get();
    }
    return next;
}

PointCloud seed_box_cloud(const Box& box, double eps, std::size_t max_seed_points,
                          double* pitch_out) {
    const int d = box.dim();
    double pitch = eps;
    auto count_at = [&](double p) {
        double total = 1;
        for (int i = 0; i < d; ++i)
            total *= std::floor((box.hi[i] - box.lo[i]) / p) + 2.0;
        return total;
    };
    while (count_at(pitch) > static_cast<double>(max_seed_points)) pitch *= 2.0;
    if (pitch_out) *pitch_out = pitch;

    std::vector<Eigen::VectorXd> axes(d ? 1 : 0);
    // per-axis sample values: lo + j*pitch, plus hi
    std::vector<std::vector<double>> vals(d);
    for (int i = 0; i < d; ++i) {
        for (double x = box.lo[i]; x < box.hi[i]; x += pitch) vals[i].push_back(x);
        vals[i].push_back(box.hi[i]);
    }
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= vals[i].size();
    Eigen::MatrixXd pts(d, static_cast<Eigen::Index>(total));
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t j = 0; j < total; ++j) {
        for (int i = 0; i < d; ++i) pts(i, static_cast<Eigen::Index>(j)) = vals[i][idx[i]];
        int axis = d - 1;
        while (axis >= 0 && ++idx[axis] == vals[axis].size()) idx[axis--] = 0;
    }
    return PointCloud::snap(pts, eps);
}

namespace {

AttractorReport iterate_levels(const IfsSystem& sys, const PointCloud& seed, double eps,
                               double tol, int n_max, int threads, double seed_pitch) {
    AttractorReport rep;
    rep.eps = eps;
    rep.tol = tol;
    rep.seed_pitch = seed_pitch;
    const double slack = 2.0 * eps * std::sqrt(static_cast<double>(sys.family.dim()));
    const double r_max = sys.family.max_ratio();

    const auto& pres = sys.shift.presentation();
    LevelState state = seed_state(pres, seed);
    PointCloud current = state.unioned();

    double prev_gap = -1.0;
    for (int n = 0; n < n_max; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        LevelState next = hutchinson_level(sys.family, pres, state, threads);
        PointCloud next_union = next.unioned();

        const double forward = directed_hausdorff(next_union, current);  // new beyond old
        const double backward = directed_hausdorff(current, next_union);
        const double gap = std::max(forward, backward);
        rep.gaps.push_back(gap);
        if (forward > slack) ++rep.nesting_violations;
        if (prev_gap >= 0.0 && gap > r_max * prev_gap + 2.0 * slack)
            rep.warnings.push_back("gap decay slower than ratio bound at level " +
                                   std::to_string(n + 1));
        prev_gap = gap;

        state = std::move(next);
        current = std::move(next_union);
        rep.levels = n + 1;
        rep.level_ms.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count());
        if (gap <= tol) {
            rep.converged = true;
            break;
        }
    }
    rep.attractor = std::move(current);
    return rep;
}

}  // namespace

AttractorReport compute_attractor(const IfsSystem& sys, double eps, double tol, int n_max,
                                  int threads, std::size_t max_seed_points) {
    const int d = sys.family.dim();
    if (!(eps > 0.0)) throw Error(ErrorKind::Config, "epsilon must be positive");
    if (tol < 2.0 * eps * std::sqrt(static_cast<double>(d)))
        throw Error(ErrorKind::Config, "tolerance below grid resolution (need tol >= 2*eps*sqrt(d))");
    if (n_max < 1) throw Error(ErrorKind::Config, "n_max must be >= 1");
    double pitch = eps;
    PointCloud seed = seed_box_cloud(sys.family.box, eps, max_seed_points, &pitch);
    return iterate_levels(sys, seed, eps, tol, n_max, threads, pitch);
}

AttractorReport compute_attractor_from(const IfsSystem& sys, const PointCloud& seed, double eps,
                                       double tol, int n_max, int threads) {
    if (seed.empty()) throw Error(ErrorKind::Input, "seed cloud is empty");
    if (seed.eps() != eps) throw Error(ErrorKind::Input, "seed grid does not match epsilon");
    return iterate_levels(sys, seed, eps, tol, n_max, threads, eps);
}

DefectResult self_similarity_defect(const IfsSystem& sys, const PointCloud& S, int n,
                                    int threads) {
    if (n < 1) throw Error(ErrorKind::Input, "self-similarity order must be >= 1");
    if (S.empty()) throw Error(ErrorKind::Input, "empty attractor cloud");
    const auto& pres = sys.shift.presentation();
    LevelState state = seed_state(pres, S);
    for (int i = 0; i < n; ++i) state = hutchinson_level(sys.family, pres, state, threads);
    const PointCloud image = state.unioned();
    DefectResult r;
    r.excess_s_beyond = directed_hausdorff(S, image);
    r.excess_image_beyond = directed_hausdorff(image, S);
    r.defect = std::max(r.excess_s_beyond, r.excess_image_beyond);
    return r;
}

ScanResult self_similarity_scan(const IfsSystem& sys, const PointCloud& S, int n_max, double tol,
                                int threads) {
    if (n_max < 1) throw Error(ErrorKind::Input, "scan horizon must be >= 1");
    ScanResult out;
    const auto& pres = sys.shift.presentation();
    LevelState state = seed_state(pres, S);
    for (int n = 1; n <= n_max; ++n) {
        state = hutchinson_level(sys.family, pres, state, threads);
        const PointCloud image = state.unioned();
        const double defect =
            std::max(directed_hausdorff(S, image), directed_hausdorff(image, S));
        out.rows.push_back({n, defect, defect <= tol});
    }
    out.first_terminal_pass = -1;
    for (int i = static_cast<int>(out.rows.size()) - 1; i >= 0 && out.rows[i].pass; --i)
        out.first_terminal_pass = out.rows[i].n;
    return out;
}

}  // namespace ifs
