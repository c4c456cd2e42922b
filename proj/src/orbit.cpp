#include "ifs/orbit.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ifs {

SequencePrefix::SequencePrefix(const Subshift& shift, Word w) : symbols(std::move(w)) {
    if (!shift.is_admissible(symbols))
        throw Error(ErrorKind::Input, "prefix " + word_to_string(symbols) + " is not admissible");
}

EventuallyPeriodicPoint::EventuallyPeriodicPoint(const Subshift& shift, Word v, Word u)
    : transient(std::move(v)), period(std::move(u)) {
    if (period.empty()) throw Error(ErrorKind::Input, "period word must be nonempty");
    Word vuu = concat(concat(transient, period), period);
    if (!shift.is_admissible(vuu))
        throw Error(ErrorKind::Input,
                    "eventually periodic word " + word_to_string(vuu) + " is not admissible");
}

Word EventuallyPeriodicPoint::prefix(std::size_t len) const {
    Word w = transient;
    while (w.size() < len) w.insert(w.end(), period.begin(), period.end());
    w.resize(len);
    return w;
}

std::vector<Eigen::VectorXd> trajectory(const IfsSystem& sys, const SequencePrefix& prefix,
                                        const Eigen::VectorXd& x) {
    if (!sys.family.box.contains(x, 0.0))
        throw Error(ErrorKind::Input, "trajectory start outside the ambient box");
    std::vector<Eigen::VectorXd> out;
    out.reserve(prefix.symbols.size() + 1);
    out.push_back(x);
    Eigen::VectorXd cur = x;
    for (Symbol a : prefix.symbols) {
        cur = sys.family.map(a)(cur);
        out.push_back(cur);
    }
    return out;
}

std::pair<EventuallyPeriodicPoint, Eigen::VectorXd> skew_product_step(
    const IfsSystem& sys, const EventuallyPeriodicPoint& sigma, const Eigen::VectorXd& x) {
    Symbol head;
    Word v = sigma.transient;
    Word u = sigma.period;
    if (!v.empty()) {
        head = v.front();
        v.erase(v.begin());
    } else {
        head = u.front();
        std::rotate(u.begin(), u.begin() + 1, u.end());
    }
    return {EventuallyPeriodicPoint(sys.shift, std::move(v), std::move(u)),
            sys.family.map(head)(x)};
}

Cycle periodic_cycle(const IfsSystem& sys, const EventuallyPeriodicPoint& p, double dedupe_tol) {
    const AffineMap f_u = compose_word(sys.family, p.period);
    const Eigen::VectorXd x0 = fixed_point(f_u);
    Cycle c;
    c.period = p.period;
    Eigen::VectorXd cur = x0;
    c.points.push_back(cur);
    for (std::size_t i = 0; i + 1 < p.period.size(); ++i) {
        cur = sys.family.map(p.period[i])(cur);
        bool dup = false;
        for (const auto& q : c.points)
            if ((q - cur).norm() <= dedupe_tol) { dup = true; break; }
        if (!dup) c.points.push_back(cur);
    }
    return c;
}

LimitSetResult limit_set_along(const IfsSystem& sys, const Word& stream, const PointCloud& A,
                               int m_max, double tol) {
    if (m_max < 2) throw Error(ErrorKind::Input, "limit-set horizon must be >= 2");
    if (static_cast<int>(stream.size()) < m_max)
        throw Error(ErrorKind::Input, "stream shorter than the requested horizon");
    if (!sys.shift.is_admissible(Word(stream.begin(), stream.begin() + m_max)))
        throw Error(ErrorKind::Input, "stream prefix is not admissible");
    if (A.empty()) throw Error(ErrorKind::Input, "empty start cloud");

    const double eps = A.eps();
    PointCloud cur = A;
    std::vector<PointCloud> window;
    const int window_start = m_max / 2;
    for (int m = 1; m <= m_max; ++m) {
        const AffineMap& f = sys.family.map(stream[static_cast<std::size_t>(m - 1)]);
        cur = PointCloud::snap(f.apply_all(cur.coords()), eps);
        if (m >= window_start) window.push_back(cur);
    }
    LimitSetResult r;
    r.cloud = merge_clouds(window);
    const double diam = cur.size() <= 2048 ? cur.exact_diameter() : cur.bounding_diameter();
    r.converged = diam <= tol;
    return r;
}

namespace {

// Vertices from which `w` can be read to completion.
std::vector<char> readable_from(const SoficPresentation& pres, const Word& w) {
    const int nv = pres.vertex_count();
    std::vector<char> ok(nv, 0);
    for (int v = 0; v < nv; ++v) {
        std::vector<char> from(nv, 0);
        from[v] = 1;
        auto end = pres.run(w, from);
        for (char c : end)
            if (c) { ok[v] = 1; break; }
    }
    return ok;
}

// Shortest connector (lexicographically least among shortest) from vertex v
// to any vertex in `targets`; returns the label word and the landing vertex.
std::pair<Word, int> shortest_connector(const SoficPresentation& pres, int v,
                                        const std::vector<char>& targets) {
    if (targets[v]) return {Word{}, v};
    struct Node { int vertex; };
    std::vector<int> parent_vertex(pres.vertex_count(), -1);
    std::vector<Symbol> parent_label(pres.vertex_count(), 0);
    std::vector<char> seen(pres.vertex_count(), 0);
    std::deque<int> queue;
    seen[v] = 1;
    queue.push_back(v);
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (const auto& e : pres.out_edges(cur)) {  // sorted by (label, to): lex tie-break
            if (seen[e.to]) continue;
            seen[e.to] = 1;
            parent_vertex[e.to] = cur;
            parent_label[e.to] = e.label;
            if (targets[e.to]) {
                Word path;
                for (int q = e.to; q != v; q = parent_vertex[q]) path.push_back(parent_label[q]);
                std::reverse(path.begin(), path.end());
                return {path, e.to};
            }
            queue.push_back(e.to);
        }
    }
    throw Error(ErrorKind::Input, "presentation is not irreducible: no connecting path");
}

// Follows w from vertex v, choosing at each step the smallest next vertex
// that still completes w. Returns the landing vertex.
int follow_word(const SoficPresentation& pres, int v, const Word& w) {
    int cur = v;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Word rest(w.begin() + i + 1, w.end());
        const auto rest_ok = readable_from(pres, rest);
        int next = -1;
        for (const auto& e : pres.out_edges(cur)) {
            if (e.label != w[i] || !rest_ok[e.to]) continue;
            next = e.to;
            break;
        }
        if (next < 0) throw Error(ErrorKind::Input, "word not readable from chosen vertex");
        cur = next;
    }
    return cur;
}

}  // namespace

Word transitive_prefix(const Subshift& shift, int min_len) {
    const auto& pres = shift.presentation();
    Word stream;
    int vertex = 0;
    for (int n = 1; static_cast<int>(stream.size()) < min_len; ++n) {
        for (const auto& target : shift.language(n)) {
            auto mask = readable_from(pres, target);
            auto [connector, start] = shortest_connector(pres, vertex, mask);
            stream.insert(stream.end(), connector.begin(), connector.end());
            stream.insert(stream.end(), target.begin(), target.end());
            vertex = follow_word(pres, start, target);
            if (static_cast<int>(stream.size()) >= min_len) break;
        }
    }
    return stream;
}

DecompositionReport decomposition_check(const IfsSystem& sys, const PointCloud& S,
                                        const std::vector<EventuallyPeriodicPoint>& samples,
                                        double tol) {
    if (S.empty()) throw Error(ErrorKind::Input, "empty attractor cloud");
    DecompositionReport rep;
    std::vector<PointCloud> cycle_clouds;
    for (const auto& p : samples) {
        Cycle c = periodic_cycle(sys, p, S.eps());
        CycleCheck check;
        check.transient = p.transient;
        check.period = p.period;
        for (const auto& x : c.points)
            check.max_dist_to_attractor = std::max(check.max_dist_to_attractor,
                                                   distance_to_cloud(x, S));
        check.contained = check.max_dist_to_attractor <= tol;
        rep.cycles.push_back(std::move(check));
        cycle_clouds.push_back(snap_points(c.points, S.eps()));
    }
    if (!cycle_clouds.empty()) {
        const PointCloud all = merge_clouds(cycle_clouds);
        rep.coverage_excess = directed_hausdorff(S, all);
    } else {
        rep.coverage_excess = std::numeric_limits<double>::infinity();
    }
    return rep;
}

}  // namespace ifs
