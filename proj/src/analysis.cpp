#include "ifs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace ifs {

RatioSumResult check_ratio_sum(const MapFamily& family) {
    RatioSumResult r;
    r.sum = family.ratio_sum();
    r.pass = r.sum < 1.0;
    return r;
}

namespace {

// --- exact geometry of affine box images -------------------------------

struct Interval {
    double lo, hi;
};

Interval image_interval(const AffineMap& f, const Box& box) {
    const double a = f.linear()(0, 0);
    const double b = f.offset()[0];
    const double x0 = a * box.lo[0] + b;
    const double x1 = a * box.hi[0] + b;
    return {std::min(x0, x1), std::max(x0, x1)};
}

struct Polygon {
    std::vector<Eigen::Vector2d> verts;  // convex hull, counterclockwise
};

Polygon image_polygon(const AffineMap& f, const Box& box) {
    std::vector<Eigen::Vector2d> pts;
    for (const auto& c : box.corners()) {
        const Eigen::VectorXd y = f(c);
        pts.emplace_back(y[0], y[1]);
    }
    // monotone-chain hull; duplicates/degenerate shapes collapse naturally
    std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) {
        return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& p, const auto& q) { return p == q; }),
              pts.end());
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    if (pts.size() <= 2) return {pts};
    std::vector<Eigen::Vector2d> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return {hull};
}

double point_segment_dist(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

bool polygons_disjoint_sat(const Polygon& P, const Polygon& Q) {
    auto axes = [](const Polygon& poly, std::vector<Eigen::Vector2d>& out) {
        const auto& v = poly.verts;
        if (v.size() < 2) return;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Eigen::Vector2d e = v[(i + 1) % v.size()] - v[i];
            if (e.squaredNorm() > 0.0) out.emplace_back(-e.y(), e.x());
        }
    };
    std::vector<Eigen::Vector2d> candidate_axes;
    axes(P, candidate_axes);
    axes(Q, candidate_axes);
    if (candidate_axes.empty()) {
        // both degenerate to points
        return (P.verts[0] - Q.verts[0]).squaredNorm() > 0.0;
    }
    // segment-vs-segment needs the cross axis of the two directions too
    if (P.verts.size() == 2 && Q.verts.size() == 2) {
        candidate_axes.emplace_back((P.verts[1] - P.verts[0]).x(),
                                    (P.verts[1] - P.verts[0]).y());
        candidate_axes.emplace_back((Q.verts[1] - Q.verts[0]).x(),
                                    (Q.verts[1] - Q.verts[0]).y());
    }
    for (const auto& axis : candidate_axes) {
        double plo = std::numeric_limits<double>::infinity(), phi = -plo;
        double qlo = plo, qhi = -plo;
        for (const auto& v : P.verts) {
            const double t = axis.dot(v);
            plo = std::min(plo, t);
            phi = std::max(phi, t);
        }
        for (const auto& v : Q.verts) {
            const double t = axis.dot(v);
            qlo = std::min(qlo, t);
            qhi = std::max(qhi, t);
        }
        if (phi < qlo || qhi < plo) return true;
    }
    return false;
}

double polygons_distance(const Polygon& P, const Polygon& Q) {
    if (!polygons_disjoint_sat(P, Q)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    auto scan = [&](const Polygon& A, const Polygon& B) {
        for (const auto& p : A.verts) {
            if (B.verts.size() == 1) {
                best = std::min(best, (p - B.verts[0]).norm());
                continue;
            }
            for (std::size_t i = 0; i < B.verts.size(); ++i) {
                const auto& a = B.verts[i];
                const auto& b = B.verts[(i + 1) % B.verts.size()];
                best = std::min(best, point_segment_dist(p, a, b));
            }
        }
    };
    scan(P, Q);
    scan(Q, P);
    return best;
}

struct Aabb {
    Eigen::VectorXd lo, hi;
};

Aabb image_aabb(const AffineMap& f, const Box& box) {
    Aabb r;
    bool first = true;
    for (const auto& c : box.corners()) {
        const Eigen::VectorXd y = f(c);
        if (first) {
            r.lo = y;
            r.hi = y;
            first = false;
        } else {
            r.lo = r.lo.cwiseMin(y);
            r.hi = r.hi.cwiseMax(y);
        }
    }
    return r;
}

double aabb_gap(const Aabb& a, const Aabb& b) {
    double s = 0.0;
    bool overlap = true;
    for (int i = 0; i < a.lo.size(); ++i) {
        const double gap = std::max({0.0, b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]});
        if (gap > 0.0) overlap = false;
        s += gap * gap;
    }
    return overlap ? 0.0 : std::sqrt(s);
}

}  // namespace

SeparationLevel check_separation(const IfsSystem& sys, int n, std::size_t word_cap) {
    if (n < 1) throw Error(ErrorKind::Input, "separation order must be >= 1");
    const auto words = sys.shift.language(n);
    if (words.size() > word_cap)
        throw Error(ErrorKind::Cap,
                    "|L_n| = " + std::to_string(words.size()) + " exceeds the separation cap " +
                        std::to_string(word_cap) + "; probe a higher power shift chunk instead");
    const int d = sys.family.dim();
    SeparationLevel out;
    out.n = n;
    out.min_gap = std::numeric_limits<double>::infinity();
    bool any_overlap = false;
    bool any_inconclusive = false;

    if (d == 1) {
        std::vector<Interval> imgs;
        imgs.reserve(words.size());
        for (const auto& u : words) imgs.push_back(image_interval(compose_word(sys.family, u), sys.family.box));
        for (std::size_t i = 0; i < imgs.size(); ++i)
            for (std::size_t j = i + 1; j < imgs.size(); ++j) {
                const double gap = std::max({0.0, imgs[j].lo - imgs[i].hi, imgs[i].lo - imgs[j].hi});
                if (imgs[i].hi >= imgs[j].lo && imgs[j].hi >= imgs[i].lo) any_overlap = true;
                out.min_gap = std::min(out.min_gap, gap);
            }
    } else if (d == 2) {
        std::vector<Polygon> imgs;
        imgs.reserve(words.size());
        for (const auto& u : words) imgs.push_back(image_polygon(compose_word(sys.family, u), sys.family.box));
        for (std::size_t i = 0; i < imgs.size(); ++i)
            for (std::size_t j = i + 1; j < imgs.size(); ++j) {
                const double gap = polygons_distance(imgs[i], imgs[j]);
                if (gap == 0.0) any_overlap = true;
                out.min_gap = std::min(out.min_gap, gap);
            }
    } else {
        std::vector<Aabb> imgs;
        imgs.reserve(words.size());
        for (const auto& u : words) imgs.push_back(image_aabb(compose_word(sys.family, u), sys.family.box));
        for (std::size_t i = 0; i < imgs.size(); ++i)
            for (std::size_t j = i + 1; j < imgs.size(); ++j) {
                const double gap = aabb_gap(imgs[i], imgs[j]);
                if (gap == 0.0) any_inconclusive = true;  // boxes overlap: only inconclusive
                out.min_gap = std::min(out.min_gap, gap);
            }
    }
    if (words.size() < 2) out.min_gap = std::numeric_limits<double>::infinity();
    out.outcome = any_overlap      ? SeparationOutcome::Fail
                  : any_inconclusive ? SeparationOutcome::Inconclusive
                                     : SeparationOutcome::Pass;
    return out;
}

SeparationReport run_separation(const IfsSystem& sys, int n_from, int n_to,
                                std::size_t word_cap) {
    if (n_from < 1 || n_to < n_from) throw Error(ErrorKind::Input, "bad separation range");
    SeparationReport rep;
    const auto rs = check_ratio_sum(sys.family);
    rep.ratio_sum = rs.sum;
    rep.ratio_sum_pass = rs.pass;
    for (int n = n_from; n <= n_to; ++n) {
        rep.levels.push_back(check_separation(sys, n, word_cap));
        if (rep.first_passing_n < 0 && rep.levels.back().outcome == SeparationOutcome::Pass)
            rep.first_passing_n = n;
    }
    return rep;
}

ImageDisjointnessReport check_image_disjointness_on_s(const IfsSystem& sys, const PointCloud& S) {
    if (!sys.totally_invariant)
        throw Error(ErrorKind::Config,
                    "image disjointness on S requires the totally_invariant flag");
    if (S.empty()) throw Error(ErrorKind::Input, "empty attractor cloud");
    const double eps = S.eps();
    const double threshold = 2.0 * eps * std::sqrt(static_cast<double>(S.dim()));
    std::vector<PointCloud> images;
    for (const auto& f : sys.family.maps)
        images.push_back(PointCloud::snap(f.apply_all(S.coords()), eps));
    ImageDisjointnessReport rep;
    rep.all_pass = true;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            PairDisjointness pd;
            pd.i = static_cast<Symbol>(i + 1);
            pd.j = static_cast<Symbol>(j + 1);
            pd.distance = min_distance(images[i], images[j]);
            pd.pass = pd.distance > threshold;
            rep.all_pass = rep.all_pass && pd.pass;
            rep.pairs.push_back(pd);
        }
    return rep;
}

FactorCheckReport verify_factoring(const IfsSystem& src, const IfsSystem& dst,
                                   const FactorCode& code, const AffineTransform& phi2,
                                   std::size_t samples_per_window, std::uint64_t rng_seed,
                                   const PointCloud& S_src, const PointCloud& S_dst, double tol) {
    FactorCheckReport rep;
    rep.samples_per_window = samples_per_window;
    rep.budget = 2.0 * tol;

    const auto windows = src.shift.language(code.window_len());
    rep.windows = windows.size();
    std::mt19937_64 rng(rng_seed);
    const Box& box = src.family.box;
    std::vector<std::uniform_real_distribution<double>> axis;
    for (int i = 0; i < box.dim(); ++i) axis.emplace_back(box.lo[i], box.hi[i]);

    for (const auto& w : windows) {
        auto it = code.table.find(w);
        if (it == code.table.end())
            throw Error(ErrorKind::Domain,
                        "window " + word_to_string(w) + " not in block map domain");
        const Symbol present = w[static_cast<std::size_t>(code.memory)];
        const AffineMap& f = src.family.map(present);
        const AffineMap& g = dst.family.map(it->second);
        for (std::size_t s = 0; s < samples_per_window; ++s) {
            Eigen::VectorXd x(box.dim());
            for (int i = 0; i < box.dim(); ++i) x[i] = axis[i](rng);
            const double r = (phi2(f(x)) - g(phi2(x))).norm();
            rep.max_residual = std::max(rep.max_residual, r);
        }
    }

    const PointCloud mapped = PointCloud::snap(phi2.apply_all(S_src.coords()), S_dst.eps());
    rep.attractor_image_dh = hausdorff_distance(mapped, S_dst);
    rep.residual_pass = rep.max_residual <= 1e-10;
    rep.attractor_pass = rep.attractor_image_dh <= rep.budget;
    return rep;
}

ReturnClassification classify_return_times(const std::vector<int>& hits, int horizon) {
    if (hits.empty()) return ReturnClassification::Empty;
    std::vector<char> hit(static_cast<std::size_t>(horizon) + 1, 0);
    for (int n : hits)
        if (n >= 1 && n <= horizon) hit[static_cast<std::size_t>(n)] = 1;

    int cofinite_from = -1;
    for (int m = 1; m <= horizon / 2; ++m) {
        bool all = true;
        for (int n = m; n <= horizon; ++n)
            if (!hit[static_cast<std::size_t>(n)]) { all = false; break; }
        if (all) { cofinite_from = m; break; }
    }
    if (cofinite_from >= 0) return ReturnClassification::CofiniteUpToHorizon;

    int run = 0, best = 0;
    for (int n = 1; n <= horizon; ++n) {
        run = hit[static_cast<std::size_t>(n)] ? run + 1 : 0;
        best = std::max(best, run);
    }
    if (best >= static_cast<int>(std::ceil(std::sqrt(static_cast<double>(horizon)))))
        return ReturnClassification::ThickUpToHorizon;
    return ReturnClassification::Nonempty;
}

ReturnTimeReport return_time_probe(const IfsSystem& sys, const PointCloud& S, const ReturnBall& U,
                                   const ReturnBall& V, int horizon, int threads) {
    if (horizon < 1) throw Error(ErrorKind::Input, "probe horizon must be >= 1");
    if (S.empty()) throw Error(ErrorKind::Input, "empty attractor cloud");
    ReturnTimeReport rep;
    rep.horizon = horizon;

    const double eps = S.eps();
    const double slack = 2.0 * eps * std::sqrt(static_cast<double>(S.dim()));

    // S-points inside U
    std::vector<std::int64_t> seed_cells;
    for (std::size_t i = 0; i < S.size(); ++i) {
        const Eigen::VectorXd p = S.point(i);
        if ((p - U.center).norm() < U.radius)
            seed_cells.insert(seed_cells.end(), S.cells().begin() + i * S.dim(),
                              S.cells().begin() + (i + 1) * S.dim());
    }
    if (seed_cells.empty()) {
        rep.classification = ReturnClassification::Empty;
        return rep;
    }
    PointCloud seed = PointCloud::from_cells(S.dim(), eps, std::move(seed_cells));

    auto restrict_to_attractor = [&](const PointCloud& c) -> PointCloud {
        if (c.empty()) return c;
        std::vector<std::int64_t> kept;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (distance_to_cloud(c.point(i), S) <= slack)
                kept.insert(kept.end(), c.cells().begin() + i * c.dim(),
                            c.cells().begin() + (i + 1) * c.dim());
        }
        if (kept.empty()) return PointCloud(c.dim(), eps);
        return PointCloud::from_cells(c.dim(), eps, std::move(kept));
    };

    const auto& pres = sys.shift.presentation();
    LevelState state = seed_state(pres, seed);
    for (int n = 1; n <= horizon; ++n) {
        state = hutchinson_level(sys.family, pres, state, threads);
        for (auto& c : state.per_vertex) c = restrict_to_attractor(c);
        bool alive = false, hit = false;
        for (const auto& c : state.per_vertex) {
            if (c.empty()) continue;
            alive = true;
            for (std::size_t i = 0; i < c.size() && !hit; ++i)
                if ((c.point(i) - V.center).norm() < V.radius) hit = true;
            if (hit) break;
        }
        if (hit) rep.hits.push_back(n);
        if (!alive) break;  // restriction emptied every vertex: nothing more can return
    }
    rep.classification = classify_return_times(rep.hits, horizon);
    int run = 0;
    int prev = -10;
    for (int n : rep.hits) {
        run = (n == prev + 1) ? run + 1 : 1;
        rep.longest_run = std::max(rep.longest_run, run);
        prev = n;
    }
    for (int m = 1; m <= horizon / 2 && rep.cofinite_from < 0; ++m) {
        bool all = true;
        for (int n = m; n <= horizon && all; ++n)
            all = std::find(rep.hits.begin(), rep.hits.end(), n) != rep.hits.end();
        if (all) rep.cofinite_from = m;
    }
    return rep;
}

namespace {

Word canonical_rotation(const Word& u) {
    Word best = u;
    Word cur = u;
    for (std::size_t i = 1; i < u.size(); ++i) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

bool is_primitive(const Word& u) {
    for (std::size_t p = 1; p < u.size(); ++p) {
        if (u.size() % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < u.size() && periodic; ++i) periodic = u[i] == u[i - p];
        if (periodic) return false;
    }
    return true;
}

}  // namespace

PeriodicDensityReport periodic_density_probe(const IfsSystem& sys, const PointCloud& S,
                                             int max_period, std::size_t word_cap) {
    if (max_period < 1) throw Error(ErrorKind::Input, "max period must be >= 1");
    if (S.empty()) throw Error(ErrorKind::Input, "empty attractor cloud");
    PeriodicDensityReport rep;
    std::set<Word> canon;
    std::size_t scanned = 0;
    for (int p = 1; p <= max_period; ++p) {
        for (const auto& u : sys.shift.language(p)) {
            if (++scanned > word_cap)
                throw Error(ErrorKind::Cap, "periodic probe exceeded its word cap");
            if (!is_primitive(u)) continue;
            const Word c = canonical_rotation(u);
            if (canon.count(c)) continue;
            if (!sys.shift.period_word_admissible(u)) continue;
            canon.insert(c);
        }
    }
    if (canon.empty()) {
        rep.no_cycles = true;
        rep.coverage_excess = std::numeric_limits<double>::infinity();
        return rep;
    }
    std::vector<PointCloud> clouds;
    for (const auto& u : canon) {
        rep.periods.push_back(u);
        const AffineMap f_u = compose_word(sys.family, u);
        Eigen::VectorXd x = fixed_point(f_u);
        std::vector<Eigen::VectorXd> pts{x};
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            x = sys.family.map(u[i])(x);
            pts.push_back(x);
        }
        clouds.push_back(snap_points(pts, S.eps()));
    }
    rep.coverage_excess = directed_hausdorff(S, merge_clouds(clouds));
    return rep;
}

}  // namespace ifs
