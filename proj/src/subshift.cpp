#include "ifs/subshift.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>

namespace ifs {

namespace {

void require(bool ok, ErrorKind kind, const std::string& msg) {
    if (!ok) throw Error(kind, msg);
}

}  // namespace

SoficPresentation::SoficPresentation(int vertices, int alphabet, std::vector<LabeledEdge> edges)
    : vertices_(vertices), alphabet_(alphabet), edges_(std::move(edges)) {
    require(vertices_ >= 0, ErrorKind::Input, "negative vertex count");
    require(alphabet_ >= 1, ErrorKind::Input, "alphabet must be nonempty");
    for (const auto& e : edges_) {
        require(e.from >= 0 && e.from < vertices_ && e.to >= 0 && e.to < vertices_,
                ErrorKind::Input, "edge endpoint out of range");
        require(e.label >= 1 && e.label <= alphabet_, ErrorKind::Input,
                "edge label out of alphabet range");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    out_.assign(vertices_, {});
    for (const auto& e : edges_) out_[e.from].push_back(e);
}

SoficPresentation SoficPresentation::pruned() const {
    std::vector<char> alive(vertices_, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < vertices_; ++v) {
            if (!alive[v]) continue;
            bool has_out = false;
            for (const auto& e : out_[v])
                if (alive[e.to]) { has_out = true; break; }
            if (!has_out) {
                alive[v] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> remap(vertices_, -1);
    int next = 0;
    for (int v = 0; v < vertices_; ++v)
        if (alive[v]) remap[v] = next++;
    if (next == 0) throw Error(ErrorKind::EmptyShift, "presentation prunes to the empty shift");
    std::vector<LabeledEdge> kept;
    for (const auto& e : edges_)
        if (alive[e.from] && alive[e.to]) kept.push_back({remap[e.from], remap[e.to], e.label});
    return SoficPresentation(next, alphabet_, std::move(kept));
}

std::vector<char> SoficPresentation::run(const Word& w, const std::vector<char>& from) const {
    std::vector<char> cur = from.empty() ? all_vertices_mask() : from;
    for (Symbol a : w) {
        std::vector<char> next(vertices_, 0);
        bool any = false;
        for (int v = 0; v < vertices_; ++v) {
            if (!cur[v]) continue;
            for (const auto& e : out_[v])
                if (e.label == a) { next[e.to] = 1; any = true; }
        }
        if (!any) return std::vector<char>(vertices_, 0);
        cur.swap(next);
    }
    return cur;
}

bool SoficPresentation::accepts(const Word& w) const {
    auto end = run(w, {});
    for (char c : end)
        if (c) return true;
    return w.empty() && vertices_ > 0;
}

std::vector<Word> SoficPresentation::words_of_length(int n) const {
    std::vector<Word> out;
    Word prefix;
    // DFS over (prefix, reachable-set); symbols ascending gives lex order.
    auto rec = [&](auto&& self, const std::vector<char>& cur, int depth) -> void {
        if (depth == n) {
            out.push_back(prefix);
            return;
        }
        for (Symbol a = 1; a <= alphabet_; ++a) {
            std::vector<char> next(vertices_, 0);
            bool any = false;
            for (int v = 0; v < vertices_; ++v) {
                if (!cur[v]) continue;
                for (const auto& e : out_[v])
                    if (e.label == a) { next[e.to] = 1; any = true; }
            }
            if (!any) continue;
            prefix.push_back(a);
            self(self, next, depth + 1);
            prefix.pop_back();
        }
    };
    rec(rec, all_vertices_mask(), 0);
    return out;
}

bool SoficPresentation::has_label_cycle(const Word& u) const {
    if (u.empty()) return false;
    // reach[v] = vertices readable from v along label word u
    std::vector<std::vector<int>> reach(vertices_);
    for (int v = 0; v < vertices_; ++v) {
        std::vector<char> from(vertices_, 0);
        from[v] = 1;
        auto end = run(u, from);
        for (int q = 0; q < vertices_; ++q)
            if (end[q]) reach[v].push_back(q);
    }
    // u^inf exists iff the u-step digraph has a cycle.
    std::vector<int> color(vertices_, 0);
    auto dfs = [&](auto&& self, int v) -> bool {
        color[v] = 1;
        for (int q : reach[v]) {
            if (color[q] == 1) return true;
            if (color[q] == 0 && self(self, q)) return true;
        }
        color[v] = 2;
        return false;
    };
    for (int v = 0; v < vertices_; ++v)
        if (color[v] == 0 && dfs(dfs, v)) return true;
    return false;
}

std::vector<Word> TruncatedCodedShift::instantiate() const {
    std::vector<Word> gens;
    for (const auto& p : patterns) {
        Word w = concat(p.prefix, p.suffix);
        if (!w.empty() && static_cast<int>(w.size()) <= max_generator_len) gens.push_back(w);
        if (p.block.empty()) continue;
        Word grown = p.prefix;
        while (true) {
            grown = concat(grown, p.block);
            Word g = concat(grown, p.suffix);
            if (static_cast<int>(g.size()) > max_generator_len) break;
            gens.push_back(g);
        }
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return gens;
}

std::vector<Word> normalize_forbidden(const std::vector<Word>& forbidden, int alphabet) {
    for (const auto& f : forbidden) {
        require(f.size() >= 2, ErrorKind::Config, "forbidden words must have length >= 2");
        for (Symbol a : f)
            require(a >= 1 && a <= alphabet, ErrorKind::Config, "forbidden word symbol out of range");
    }
    std::vector<Word> sorted = forbidden;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Word> kept;
    for (const auto& f : sorted) {
        bool redundant = false;
        for (const auto& g : sorted) {
            if (g == f || g.size() >= f.size()) continue;
            if (contains_factor(f, g)) { redundant = true; break; }
        }
        if (!redundant) kept.push_back(f);
    }
    return kept;
}

namespace {

SoficPresentation compile_full(const FullShift& s) {
    require(s.alphabet >= 1, ErrorKind::Config, "alphabet size must be >= 1");
    std::vector<LabeledEdge> edges;
    for (Symbol a = 1; a <= s.alphabet; ++a) edges.push_back({0, 0, a});
    return SoficPresentation(1, s.alphabet, std::move(edges));
}

SoficPresentation compile_sft(const FiniteTypeShift& s, const std::vector<Word>& forbidden) {
    const int k = s.alphabet;
    std::size_t max_len = 2;
    for (const auto& f : forbidden) max_len = std::max(max_len, f.size());
    const int ctx = static_cast<int>(max_len) - 1;

    double count = 1;
    for (int i = 0; i < ctx; ++i) count *= k;
    require(count <= 1e6, ErrorKind::Config, "SFT context graph too large");

    auto clean = [&](const Word& w) {
        for (const auto& f : forbidden)
            if (contains_factor(w, f)) return false;
        return true;
    };

    // contexts = admissible words of length max_len - 1
    std::vector<Word> contexts;
    Word cur(ctx, 1);
    while (true) {
        if (clean(cur)) contexts.push_back(cur);
        int i = ctx - 1;
        while (i >= 0 && cur[i] == k) cur[i--] = 1;
        if (i < 0) break;
        ++cur[i];
    }
    require(!contexts.empty(), ErrorKind::EmptyShift, "forbidden set admits no context");

    std::map<Word, int> index;
    for (std::size_t i = 0; i < contexts.size(); ++i) index[contexts[i]] = static_cast<int>(i);

    std::vector<LabeledEdge> edges;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        for (Symbol a = 1; a <= k; ++a) {
            Word ext = contexts[i];
            ext.push_back(a);
            // contexts[i] is clean, so only factors touching the new symbol matter
            bool ok = true;
            for (const auto& f : forbidden) {
                if (f.size() > ext.size()) continue;
                bool suffix = true;
                for (std::size_t j = 0; j < f.size(); ++j)
                    if (ext[ext.size() - f.size() + j] != f[j]) { suffix = false; break; }
                if (suffix) { ok = false; break; }
            }
            if (!ok) continue;
            Word next(ext.end() - ctx, ext.end());
            auto it = index.find(next);
            if (it == index.end()) continue;
            edges.push_back({static_cast<int>(i), it->second, a});
        }
    }
    return SoficPresentation(static_cast<int>(contexts.size()), k, std::move(edges)).pruned();
}

SoficPresentation compile_flower(int alphabet, const std::vector<Word>& generators) {
    require(!generators.empty(), ErrorKind::Config, "coded shift needs at least one generator");
    std::vector<LabeledEdge> edges;
    int vertices = 1;  // 0 = hub
    for (const auto& g : generators) {
        require(!g.empty(), ErrorKind::Config, "empty generator word");
        int prev = 0;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            int mid = vertices++;
            edges.push_back({prev, mid, g[i]});
            prev = mid;
        }
        edges.push_back({prev, 0, g.back()});
    }
    return SoficPresentation(vertices, alphabet, std::move(edges)).pruned();
}

SoficPresentation compile_orbit_closure(const OrbitClosureShift& s) {
    require(!s.period.empty(), ErrorKind::Config, "orbit closure needs a nonempty period word");
    const int t = static_cast<int>(s.transient.size());
    const int p = static_cast<int>(s.period.size());
    std::vector<LabeledEdge> edges;
    for (int i = 0; i < t; ++i) edges.push_back({i, i + 1, s.transient[i]});
    for (int j = 0; j < p; ++j)
        edges.push_back({t + j, t + (j + 1) % p, s.period[j]});
    return SoficPresentation(t + p, s.alphabet, std::move(edges));
}

int spec_alphabet(const SubshiftSpec& spec) {
    return std::visit([](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SoficShift>)
            return s.alphabet;
        else
            return s.alphabet;
    }, spec);
}

}  // namespace

Subshift::Subshift(SubshiftSpec spec) : spec_(std::move(spec)) {
    alphabet_ = spec_alphabet(spec_);
    require(alphabet_ >= 1, ErrorKind::Config, "alphabet size must be >= 1");
    if (auto* f = std::get_if<FiniteTypeShift>(&spec_)) {
        f->forbidden = normalize_forbidden(f->forbidden, alphabet_);
        pres_ = compile_sft(*f, f->forbidden);
    } else if (const auto* full = std::get_if<FullShift>(&spec_)) {
        pres_ = compile_full(*full);
    } else if (const auto* g = std::get_if<SoficShift>(&spec_)) {
        pres_ = SoficPresentation(g->vertices, g->alphabet, g->edges).pruned();
    } else if (const auto* c = std::get_if<CodedShift>(&spec_)) {
        std::vector<Word> gens = c->generators;
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        for (const auto& w : gens) check_symbols(w);
        pres_ = compile_flower(alphabet_, gens);
    } else if (const auto* tc = std::get_if<TruncatedCodedShift>(&spec_)) {
        require(tc->max_generator_len >= 1, ErrorKind::Config, "truncation length must be >= 1");
        auto gens = tc->instantiate();
        require(!gens.empty(), ErrorKind::EmptyShift, "no generators under the truncation length");
        for (const auto& w : gens) check_symbols(w);
        pres_ = compile_flower(alphabet_, gens);
    } else if (const auto* oc = std::get_if<OrbitClosureShift>(&spec_)) {
        check_symbols(oc->transient);
        check_symbols(oc->period);
        pres_ = compile_orbit_closure(*oc);
    }
}

void Subshift::check_symbols(const Word& w) const {
    for (Symbol a : w)
        require(a >= 1 && a <= alphabet_, ErrorKind::Input,
                "symbol " + std::to_string(a) + " outside alphabet 1.." + std::to_string(alphabet_));
}

bool Subshift::is_admissible(const Word& w) const {
    check_symbols(w);
    if (w.empty()) return true;
    if (std::holds_alternative<FullShift>(spec_)) return true;
    if (const auto* f = std::get_if<FiniteTypeShift>(&spec_)) {
        for (const auto& fw : f->forbidden)
            if (contains_factor(w, fw)) return false;
        return true;
    }
    if (const auto* oc = std::get_if<OrbitClosureShift>(&spec_)) {
        // w is admissible iff it occurs in transient . period^inf
        Word text = oc->transient;
        const std::size_t need = oc->transient.size() + w.size() + 2 * oc->period.size();
        while (text.size() < need) text.insert(text.end(), oc->period.begin(), oc->period.end());
        return contains_factor(text, w);
    }
    return pres_.accepts(w);
}

std::vector<Word> Subshift::language(int n) const {
    if (n < 0) throw Error(ErrorKind::Input, "word length must be >= 0");
    if (n == 0) return {Word{}};
    return pres_.words_of_length(n);
}

std::vector<Word> Subshift::language_naive(int n) const {
    if (n < 0) throw Error(ErrorKind::Input, "word length must be >= 0");
    if (n == 0) return {Word{}};
    std::vector<Word> out;
    Word cur(n, 1);
    while (true) {
        if (is_admissible(cur)) out.push_back(cur);
        int i = n - 1;
        while (i >= 0 && cur[i] == alphabet_) cur[i--] = 1;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

bool Subshift::period_word_admissible(const Word& u) const {
    check_symbols(u);
    if (u.empty()) return false;
    return pres_.has_label_cycle(u);
}

PowerShift power_shift(const Subshift& s, int N) {
    if (N < 1) throw Error(ErrorKind::Input, "power must be >= 1");
    std::vector<Word> blocks = s.language(N);
    if (blocks.empty()) throw Error(ErrorKind::EmptyShift, "no admissible words at power length");
    std::map<Word, Symbol> index;
    for (std::size_t i = 0; i < blocks.size(); ++i) index[blocks[i]] = static_cast<Symbol>(i + 1);

    const auto& pres = s.presentation();
    std::vector<LabeledEdge> edges;
    // every length-N path becomes one edge labeled by its chunk symbol
    Word label;
    auto rec = [&](auto&& self, int start, int v, int depth) -> void {
        if (depth == N) {
            edges.push_back({start, v, index.at(label)});
            return;
        }
        for (const auto& e : pres.out_edges(v)) {
            label.push_back(e.label);
            self(self, start, e.to, depth + 1);
            label.pop_back();
        }
    };
    for (int v = 0; v < pres.vertex_count(); ++v) rec(rec, v, v, 0);

    SoficShift power_spec{pres.vertex_count(), static_cast<int>(blocks.size()), std::move(edges)};
    return PowerShift{Subshift(SubshiftSpec{std::move(power_spec)}), std::move(blocks)};
}

Word apply_block_map(const FactorCode& code, const Word& w) {
    const int win = code.window_len();
    if (static_cast<int>(w.size()) < win)
        throw Error(ErrorKind::Input, "word shorter than the code window");
    Word out;
    out.reserve(w.size() - win + 1);
    for (std::size_t i = 0; i + win <= w.size(); ++i) {
        Word window(w.begin() + i, w.begin() + i + win);
        auto it = code.table.find(window);
        if (it == code.table.end())
            throw Error(ErrorKind::Domain, "window " + word_to_string(window) + " not in block map domain");
        out.push_back(it->second);
    }
    return out;
}

}  // namespace ifs
