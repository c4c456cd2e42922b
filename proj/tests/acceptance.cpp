// Acceptance suite: one test case per criterion, each printing PASS/FAIL
// lines for its clauses. Two clauses (01c and 04) encode an exact set
// equation H^n(S) = S that is provably false for those systems — the defect
// equals 3^-n / 2, see the frozen oracles in test_hutchinson.cpp — so they
// fail by design and are kept as stated rather than loosened.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "ifs/cli.hpp"

using namespace ifs;
using testutil::config_path;
using testutil::naive_level_union;
using testutil::singleton_cloud;

namespace {

void criterion(bool ok, const std::string& label) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", label.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, label);
}

IfsSystem load_system(const std::string& name) {
    return load_system_config(config_path(name)).build();
}

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd x(1);
    x[0] = v;
    return x;
}

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

struct Attractor {
    IfsSystem sys;
    AttractorReport rep;
};

Attractor attractor_of(const std::string& name) {
    const auto cfg = load_system_config(config_path(name));
    auto sys = cfg.build();
    auto rep = compute_attractor(sys, cfg.numeric.epsilon, cfg.numeric.tol, cfg.numeric.n_max, 1,
                                 cfg.numeric.seed_cap);
    return {std::move(sys), std::move(rep)};
}

}  // namespace

TEST_CASE("01a_ex12_attractor") {
    const auto [sys, rep] = attractor_of("ex12infty.json");
    criterion(rep.converged, "criterion 1a: period-two system converges");
    Eigen::MatrixXd target(1, 2);
    target << 0.25, 0.75;
    const double dh = hausdorff_distance(rep.attractor, PointCloud::snap(target, rep.eps));
    criterion(dh <= 1e-4, "criterion 1a: attractor within 1e-4 of {0.25, 0.75} (d_H = " +
                              format_double(dh) + ")");
}

TEST_CASE("01b_ex12_defect_order1") {
    const auto [sys, rep] = attractor_of("ex12infty.json");
    const auto d = self_similarity_defect(sys, rep.attractor, 1);
    criterion(std::abs(d.defect - 1.0 / 6.0) <= 1e-3,
              "criterion 1b: order-1 defect equals 1/6 +- 1e-3 (defect = " +
                  format_double(d.defect) + ")");
}

TEST_CASE("01c_ex12_even_order_defects") {
    // Known red: the order-n defect of this system is exactly 3^-n / 2
    // (5.6e-2, 6.2e-3, 6.9e-4 at n = 2, 4, 6), all above tol = 1e-4.
    const auto [sys, rep] = attractor_of("ex12infty.json");
    for (int n : {2, 4, 6}) {
        const auto d = self_similarity_defect(sys, rep.attractor, n);
        criterion(d.defect <= 1e-4, "criterion 1c: defect at n=" + std::to_string(n) +
                                        " <= tol (defect = " + format_double(d.defect) + ")");
    }
}

TEST_CASE("02_cantor_full") {
    const auto [sys, rep] = attractor_of("cantor-full.json");
    criterion(rep.converged, "criterion 2: full-shift system converges");
    bool spots = true;
    for (double v : {0.0, 1.0, 1.0 / 3.0, 2.0 / 3.0})
        spots = spots && distance_to_cloud(scalar(v), rep.attractor) <= rep.eps;
    criterion(spots, "criterion 2: 0, 1, 1/3, 2/3 all within eps*sqrt(d) of S");
    const auto scan = self_similarity_scan(sys, rep.attractor, 6, rep.tol);
    bool all = true;
    for (const auto& row : scan.rows) all = all && row.pass;
    criterion(all, "criterion 2: defects at n=1..6 all within tol");
}

TEST_CASE("03_koch") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto [sys, rep] = attractor_of("koch.json");
    criterion(rep.converged, "criterion 3: koch system converges");
    const bool ends = distance_to_cloud(vec2(0.0, 0.0), rep.attractor) <= 2.0 * rep.eps &&
                      distance_to_cloud(vec2(1.0, 0.0), rep.attractor) <= 2.0 * rep.eps;
    criterion(ends, "criterion 3: endpoints (0,0) and (1,0) within 2*eps of S");
    const auto scan = self_similarity_scan(sys, rep.attractor, 3, rep.tol);
    bool all = true;
    for (const auto& row : scan.rows) all = all && row.pass;
    criterion(all, "criterion 3: defects at n=1..3 within tol");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    criterion(secs <= 120.0, "criterion 3: runtime " + format_double(secs) + "s <= 120s");
}

TEST_CASE("04_golden_all_orders") {
    // Known red: the defect of the golden system is 3^-n / 2 (1/6 at n=1),
    // not zero; see the digit-expansion oracle in test_hutchinson.cpp.
    const auto [sys, rep] = attractor_of("golden.json");
    const auto scan = self_similarity_scan(sys, rep.attractor, 8, rep.tol);
    for (const auto& row : scan.rows)
        criterion(row.pass, "criterion 4: golden defect at n=" + std::to_string(row.n) +
                                " <= tol (defect = " + format_double(row.defect) + ")");
}

TEST_CASE("05_rooted_required") {
    const auto cfg = load_system_config(config_path("rooted-required.json"));
    const auto sys = cfg.build();

    const auto f12 = compose_word(sys.family, {1, 2});
    const auto x12 = fixed_point(f12);
    criterion(std::abs(x12[0] - 9.0 / 22.0) <= 1e-12 && (f12(x12) - x12).norm() <= 1e-12,
              "criterion 5: x_12 = 9/22 in closed form, residual <= 1e-12");
    const double escape = sys.family.map(2)(x12)[0];
    criterion(std::abs(escape - 31.0 / 66.0) <= 1e-12,
              "criterion 5: second map sends 9/22 to 31/66");

    const auto rep = compute_attractor(sys, cfg.numeric.epsilon, cfg.numeric.tol,
                                       cfg.numeric.n_max);
    const double dist = distance_to_cloud(scalar(31.0 / 66.0), rep.attractor);
    criterion(dist >= 0.01,
              "criterion 5: 31/66 stays at distance >= 0.01 from S (dist = " +
                  format_double(dist) + ")");
    const auto d1 = self_similarity_defect(sys, rep.attractor, 1);
    criterion(d1.defect >= 0.01, "criterion 5: order-1 defect >= 0.01 (defect = " +
                                     format_double(d1.defect) + ")");

    const std::vector<std::pair<Word, double>> chain = {
        {{1}, 1.0 / 6.0},        {{2, 3, 1}, 31.0 / 140.0}, {{2, 1}, 5.0 / 22.0},
        {{3}, 3.0 / 8.0},        {{1, 2, 3}, 27.0 / 70.0},  {{3, 1, 2}, 57.0 / 140.0},
        {{1, 2}, 9.0 / 22.0},    {{2}, 0.5},
    };
    bool ordered = true;
    double prev = 0.0;
    for (const auto& [word, expect] : chain) {
        const double x = fixed_point(compose_word(sys.family, word))[0];
        ordered = ordered && std::abs(x - expect) <= 1e-13 && x > prev && x < 1.0;
        prev = x;
    }
    criterion(ordered, "criterion 5: the eight fixed points reproduce the strict chain");
}

TEST_CASE("06_cycles") {
    const auto ex12 = load_system("ex12infty.json");
    const EventuallyPeriodicPoint p(ex12.shift, {}, {1, 2});
    const Cycle c = periodic_cycle(ex12, p);
    const auto f_u = compose_word(ex12.family, p.period);
    const bool two_points = c.points.size() == 2 &&
                            std::abs(c.points[0][0] - 0.75) <= 1e-10 &&
                            std::abs(c.points[1][0] - 0.25) <= 1e-10 &&
                            (f_u(c.points[0]) - c.points[0]).norm() <= 1e-10;
    criterion(two_points, "criterion 6: cycle of (empty, 12) is {3/4, 1/4}, residual <= 1e-10");

    const auto cantor = load_system("cantor-full.json");
    const EventuallyPeriodicPoint q(cantor.shift, {2}, {1});
    const Cycle c2 = periodic_cycle(cantor, q);
    criterion(c2.points.size() == 1 && std::abs(c2.points[0][0]) <= 1e-12,
              "criterion 6: transient variant (2, 1) returns {0}");
}

TEST_CASE("07_separation") {
    const auto eg = load_system("eg2egs-r04.json");
    const auto eg_rep = run_separation(eg, 1, 3);
    criterion(eg_rep.levels[0].outcome == SeparationOutcome::Pass &&
                  eg_rep.levels[0].min_gap >= 0.19,
              "criterion 7: ratio-0.4 squares pass at n=1 with gap >= 0.19 (gap = " +
                  format_double(eg_rep.levels[0].min_gap) + ")");
    criterion(!eg_rep.ratio_sum_pass && std::abs(eg_rep.ratio_sum - 1.2) <= 1e-9,
              "criterion 7: ratio sum 1.2 fails the sum test");

    const auto cantor = load_system("cantor-full.json");
    const auto cr = run_separation(cantor, 1, 3);
    criterion(cr.ratio_sum_pass && cr.levels[0].outcome == SeparationOutcome::Pass,
              "criterion 7: full-shift thirds pass both tests");

    const auto common = load_system("common-fixed-point.json");
    bool common_fails = true;
    for (int n = 1; n <= 4; ++n)
        common_fails =
            common_fails && check_separation(common, n).outcome == SeparationOutcome::Fail;
    criterion(common_fails, "criterion 7: common fixed point fails separation at n <= 4");

    bool propagation = true;
    for (const auto* name : {"eg2egs-r04.json", "cantor-full.json", "golden.json"}) {
        const auto sys = load_system(name);
        int first = -1;
        for (int n = 1; n <= 3; ++n) {
            const auto lv = check_separation(sys, n);
            if (lv.outcome == SeparationOutcome::Pass && first < 0) first = n;
            if (first >= 0) propagation = propagation && lv.outcome == SeparationOutcome::Pass;
        }
    }
    criterion(propagation, "criterion 7: separation propagates to n+1 and n+2 on all systems");
}

TEST_CASE("08a_dp_vs_naive") {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto sys = testutil::random_system(seed);
        const double eps = 1e-5;
        std::mt19937_64 rng(seed * 13);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<Eigen::VectorXd> pts;
        for (int i = 0; i < 30; ++i) {
            Eigen::VectorXd x(sys.family.dim());
            for (int a = 0; a < sys.family.dim(); ++a)
                x[a] = sys.family.box.lo[a] +
                       unit(rng) * (sys.family.box.hi[a] - sys.family.box.lo[a]);
            pts.push_back(x);
        }
        const PointCloud A = snap_points(pts, eps);
        auto state = seed_state(sys.shift.presentation(), A);
        for (int n = 1; n <= 6; ++n) {
            state = hutchinson_level(sys.family, sys.shift.presentation(), state);
            const double dev = hausdorff_distance(state.unioned(), naive_level_union(sys, A, n));
            ok = ok && dev <= 2.0 * n * eps;
        }
    }
    criterion(ok, "criterion 8a: level dynamics match word enumeration within 2n*eps");
}

TEST_CASE("08b_nesting") {
    bool ok = true;
    for (const auto* name :
         {"ex12infty.json", "cantor-full.json", "golden.json", "even-sofic.json", "koch.json",
          "rooted-required.json", "identical-attractor-G.json", "eg2egs-r04.json",
          "two-fixed-points.json", "common-fixed-point.json", "even-truncated.json"}) {
        const auto [sys, rep] = attractor_of(name);
        ok = ok && rep.nesting_violations == 0;
        if (rep.nesting_violations != 0)
            std::printf("  nesting violation in %s\n", name);
    }
    criterion(ok, "criterion 8b: monotone nesting holds on every example config");
}

TEST_CASE("08c_seed_independence") {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto sys = testutil::random_system(seed + 20);
        const double eps = 1e-4, tol = 1e-3;
        const auto a = compute_attractor(sys, eps, tol, 160);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd x0(sys.family.dim());
        for (int i = 0; i < sys.family.dim(); ++i)
            x0[i] = sys.family.box.lo[i] + unit(rng) * (sys.family.box.hi[i] - sys.family.box.lo[i]);
        const auto b = compute_attractor_from(sys, singleton_cloud(x0, eps), eps, tol, 160);
        ok = ok && a.converged && b.converged &&
             hausdorff_distance(a.attractor, b.attractor) <= 2.0 * tol;
    }
    criterion(ok, "criterion 8c: box seeds and point seeds agree within 2*tol");
}

TEST_CASE("08d_metric_axioms") {
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_cloud = [&](int dim, std::size_t n) {
        Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (int i = 0; i < dim; ++i) m(i, j) = unit(rng);
        return PointCloud::snap(m, 1e-3);
    };
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        const int dim = 1 + t % 2;
        const auto A = random_cloud(dim, 30), B = random_cloud(dim, 25), C = random_cloud(dim, 20);
        const double ab = hausdorff_distance(A, B);
        ok = ok && ab == hausdorff_distance(B, A);
        ok = ok && hausdorff_distance(A, A) == 0.0;
        ok = ok && ab <= hausdorff_distance(A, C) + hausdorff_distance(C, B) + 1e-9;
        if (!(A == B)) ok = ok && ab > 0.0;
    }
    criterion(ok, "criterion 8d: metric axioms hold on 100 random cloud triples");
}

TEST_CASE("08e_concatenation") {
    std::mt19937_64 rng(131);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        const auto sys = testutil::random_system(t % 9 + 1);
        const int k = sys.family.size();
        auto random_word = [&](std::size_t len) {
            Word w;
            for (std::size_t i = 0; i < len; ++i) w.push_back(1 + static_cast<Symbol>(rng() % k));
            return w;
        };
        const Word u = random_word(1 + rng() % 5), v = random_word(1 + rng() % 5);
        Eigen::VectorXd x(sys.family.dim());
        for (int i = 0; i < sys.family.dim(); ++i)
            x[i] = sys.family.box.lo[i] + unit(rng) * (sys.family.box.hi[i] - sys.family.box.lo[i]);
        const auto fu = compose_word(sys.family, u);
        const auto fv = compose_word(sys.family, v);
        const auto fuv = compose_word(sys.family, concat(u, v));
        ok = ok && (fuv(x) - fv(fu(x))).norm() <= 1e-12;
    }
    criterion(ok, "criterion 8e: concatenation law holds on 100 random word pairs");
}

TEST_CASE("08f_subsystem_monotonicity") {
    const auto full = attractor_of("cantor-full.json");
    const auto gold = attractor_of("golden.json");
    const double excess = directed_hausdorff(gold.rep.attractor, full.rep.attractor);
    criterion(excess <= 2.0 * full.rep.tol,
              "criterion 8f: golden attractor sits inside the full one (excess = " +
                  format_double(excess) + ")");
}

TEST_CASE("09_factor") {
    const auto pair = load_factor_pair_config(config_path("factor-golden-even.json"));
    const auto src = pair.source.build();
    const auto dst = pair.target.build();
    const auto s1 = compute_attractor(src, pair.source.numeric.epsilon, pair.source.numeric.tol,
                                      pair.source.numeric.n_max);
    const auto s2 = compute_attractor(dst, pair.target.numeric.epsilon, pair.target.numeric.tol,
                                      pair.target.numeric.n_max);
    const auto rep = verify_factoring(src, dst, pair.code, pair.phi2, 64, 1, s1.attractor,
                                      s2.attractor, pair.target.numeric.tol);
    criterion(rep.max_residual <= 1e-10,
              "criterion 9: declared pair residual <= 1e-10 (residual = " +
                  format_double(rep.max_residual) + ")");
    criterion(rep.attractor_image_dh <= rep.budget,
              "criterion 9: projected attractor within 2*tol of the target (d_H = " +
                  format_double(rep.attractor_image_dh) + ")");

    const auto mis = load_factor_pair_config(config_path("factor-cantor-swapped.json"));
    const auto msrc = mis.source.build();
    const auto mdst = mis.target.build();
    const auto m1 = compute_attractor(msrc, 1e-4, 1e-3, 80);
    const auto m2 = compute_attractor(mdst, 1e-4, 1e-3, 80);
    const auto mrep =
        verify_factoring(msrc, mdst, mis.code, mis.phi2, 64, 1, m1.attractor, m2.attractor, 1e-3);
    criterion(mrep.max_residual >= 0.1,
              "criterion 9: mispaired family residual >= 0.1 (residual = " +
                  format_double(mrep.max_residual) + ")");
}

TEST_CASE("10_probes") {
    const auto cantor = attractor_of("cantor-full.json");
    const ReturnBall U{scalar(0.0), 0.1}, V{scalar(1.0), 0.1};
    const auto r1 = return_time_probe(cantor.sys, cantor.rep.attractor, U, V, 20);
    criterion(r1.classification == ReturnClassification::CofiniteUpToHorizon,
              "criterion 10: full-shift probe classified cofinite-up-to-horizon at H=20");

    const auto twofix = attractor_of("two-fixed-points.json");
    const auto r2 = return_time_probe(twofix.sys, twofix.rep.attractor, U, V, 20);
    criterion(r2.classification == ReturnClassification::Empty && r2.hits.empty(),
              "criterion 10: reducible two-fixed-point probe classified empty");
}
