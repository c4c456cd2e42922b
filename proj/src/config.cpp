#include "ifs/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace ifs {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

Word json_word(const json& j) {
    if (!j.is_array()) bad("word must be an array of symbols");
    Word w;
    for (const auto& v : j) w.push_back(v.get<Symbol>());
    return w;
}

json word_json(const Word& w) {
    json a = json::array();
    for (Symbol s : w) a.push_back(s);
    return a;
}

SubshiftSpec parse_subshift(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "full") {
        return FullShift{j.at("alphabet").get<int>()};
    }
    if (kind == "sft") {
        FiniteTypeShift s;
        s.alphabet = j.at("alphabet").get<int>();
        for (const auto& f : j.at("forbidden")) s.forbidden.push_back(json_word(f));
        return s;
    }
    if (kind == "sofic") {
        SoficShift s;
        s.alphabet = j.at("alphabet").get<int>();
        s.vertices = j.at("vertices").get<int>();
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) bad("sofic edge must be [from, to, label]");
            s.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<Symbol>()});
        }
        return s;
    }
    if (kind == "coded") {
        CodedShift s;
        s.alphabet = j.at("alphabet").get<int>();
        for (const auto& g : j.at("generators")) s.generators.push_back(json_word(g));
        return s;
    }
    if (kind == "coded_truncated") {
        TruncatedCodedShift s;
        s.alphabet = j.at("alphabet").get<int>();
        s.max_generator_len = j.at("max_len").get<int>();
        for (const auto& p : j.at("patterns")) {
            GeneratorPattern gp;
            if (p.contains("prefix")) gp.prefix = json_word(p.at("prefix"));
            if (p.contains("block")) gp.block = json_word(p.at("block"));
            if (p.contains("suffix")) gp.suffix = json_word(p.at("suffix"));
            s.patterns.push_back(std::move(gp));
        }
        return s;
    }
    if (kind == "orbit_closure") {
        OrbitClosureShift s;
        s.alphabet = j.at("alphabet").get<int>();
        if (j.contains("transient")) s.transient = json_word(j.at("transient"));
        s.period = json_word(j.at("period"));
        return s;
    }
    bad("unknown subshift kind: " + kind);
}

json subshift_json(const SubshiftSpec& spec) {
    json j;
    if (const auto* s = std::get_if<FullShift>(&spec)) {
        j["kind"] = "full";
        j["alphabet"] = s->alphabet;
    } else if (const auto* s = std::get_if<FiniteTypeShift>(&spec)) {
        j["kind"] = "sft";
        j["alphabet"] = s->alphabet;
        j["forbidden"] = json::array();
        for (const auto& f : s->forbidden) j["forbidden"].push_back(word_json(f));
    } else if (const auto* s = std::get_if<SoficShift>(&spec)) {
        j["kind"] = "sofic";
        j["alphabet"] = s->alphabet;
        j["vertices"] = s->vertices;
        j["edges"] = json::array();
        for (const auto& e : s->edges) j["edges"].push_back(json::array({e.from, e.to, e.label}));
    } else if (const auto* s = std::get_if<CodedShift>(&spec)) {
        j["kind"] = "coded";
        j["alphabet"] = s->alphabet;
        j["generators"] = json::array();
        for (const auto& g : s->generators) j["generators"].push_back(word_json(g));
    } else if (const auto* s = std::get_if<TruncatedCodedShift>(&spec)) {
        j["kind"] = "coded_truncated";
        j["alphabet"] = s->alphabet;
        j["max_len"] = s->max_generator_len;
        j["patterns"] = json::array();
        for (const auto& p : s->patterns) {
            json pj;
            pj["prefix"] = word_json(p.prefix);
            pj["block"] = word_json(p.block);
            pj["suffix"] = word_json(p.suffix);
            j["patterns"].push_back(pj);
        }
    } else if (const auto* s = std::get_if<OrbitClosureShift>(&spec)) {
        j["kind"] = "orbit_closure";
        j["alphabet"] = s->alphabet;
        j["transient"] = word_json(s->transient);
        j["period"] = word_json(s->period);
    }
    return j;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> parse_map(const json& j, int dim) {
    if (j.contains("a")) {
        if (dim != 1) bad("scalar map shorthand only valid in dimension 1");
        Eigen::MatrixXd A(1, 1);
        A(0, 0) = j.at("a").get<double>();
        Eigen::VectorXd b(1);
        b[0] = j.at("b").get<double>();
        return {A, b};
    }
    const auto& rows = j.at("matrix");
    if (static_cast<int>(rows.size()) != dim) bad("map matrix row count must equal dimension");
    Eigen::MatrixXd A(dim, dim);
    for (int r = 0; r < dim; ++r) {
        if (static_cast<int>(rows[r].size()) != dim) bad("map matrix must be square");
        for (int c = 0; c < dim; ++c) A(r, c) = rows[r][c].get<double>();
    }
    const auto& off = j.at("offset");
    if (static_cast<int>(off.size()) != dim) bad("map offset length must equal dimension");
    Eigen::VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b[i] = off[i].get<double>();
    return {A, b};
}

AffineTransform parse_transform(const json& j) {
    const auto& rows = j.at("matrix");
    const int dout = static_cast<int>(rows.size());
    if (dout == 0) bad("transform matrix must be nonempty");
    const int din = static_cast<int>(rows[0].size());
    AffineTransform t;
    t.linear.resize(dout, din);
    for (int r = 0; r < dout; ++r) {
        if (static_cast<int>(rows[r].size()) != din) bad("ragged transform matrix");
        for (int c = 0; c < din; ++c) t.linear(r, c) = rows[r][c].get<double>();
    }
    const auto& off = j.at("offset");
    if (static_cast<int>(off.size()) != dout) bad("transform offset length mismatch");
    t.offset.resize(dout);
    for (int i = 0; i < dout; ++i) t.offset[i] = off[i].get<double>();
    return t;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        bad("config parse error in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

SystemConfig parse_system_config(const json& j) {
    SystemConfig c;
    const auto& jb = j.at("box");
    const auto& lo = jb.at("lo");
    const auto& hi = jb.at("hi");
    if (lo.size() != hi.size() || lo.empty()) bad("box bounds mismatch");
    Eigen::VectorXd vlo(lo.size()), vhi(hi.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        vlo[static_cast<int>(i)] = lo[i].get<double>();
        vhi[static_cast<int>(i)] = hi[i].get<double>();
    }
    c.box = make_box(vlo, vhi);

    for (const auto& m : j.at("maps")) c.map_records.push_back(parse_map(m, c.box.dim()));
    c.subshift = parse_subshift(j.at("subshift"));

    if (j.contains("flags")) {
        const auto& f = j.at("flags");
        c.totally_invariant = f.value("totally_invariant", false);
        c.rooted_in_fixed_point = f.value("rooted_in_fixed_point", false);
    }
    if (j.contains("numeric")) {
        const auto& n = j.at("numeric");
        c.numeric.epsilon = n.value("epsilon", c.numeric.epsilon);
        c.numeric.tol = n.value("tol", c.numeric.tol);
        c.numeric.n_max = n.value("n_max", c.numeric.n_max);
        c.numeric.horizon = n.value("horizon", c.numeric.horizon);
        c.numeric.language_cap = n.value("language_cap", c.numeric.language_cap);
        c.numeric.seed_cap = n.value("seed_cap", c.numeric.seed_cap);
    }
    return c;
}

SystemConfig load_system_config(const std::string& path) {
    return parse_system_config(load_json_file(path));
}

json system_config_to_json(const SystemConfig& c) {
    json j;
    j["box"]["lo"] = json::array();
    j["box"]["hi"] = json::array();
    for (int i = 0; i < c.box.dim(); ++i) {
        j["box"]["lo"].push_back(c.box.lo[i]);
        j["box"]["hi"].push_back(c.box.hi[i]);
    }
    j["maps"] = json::array();
    for (const auto& [A, b] : c.map_records) {
        json m;
        m["matrix"] = json::array();
        for (int r = 0; r < A.rows(); ++r) {
            json row = json::array();
            for (int col = 0; col < A.cols(); ++col) row.push_back(A(r, col));
            m["matrix"].push_back(row);
        }
        m["offset"] = json::array();
        for (int i = 0; i < b.size(); ++i) m["offset"].push_back(b[i]);
        j["maps"].push_back(m);
    }
    j["subshift"] = subshift_json(c.subshift);
    j["flags"]["totally_invariant"] = c.totally_invariant;
    j["flags"]["rooted_in_fixed_point"] = c.rooted_in_fixed_point;
    j["numeric"]["epsilon"] = c.numeric.epsilon;
    j["numeric"]["tol"] = c.numeric.tol;
    j["numeric"]["n_max"] = c.numeric.n_max;
    j["numeric"]["horizon"] = c.numeric.horizon;
    j["numeric"]["language_cap"] = c.numeric.language_cap;
    j["numeric"]["seed_cap"] = c.numeric.seed_cap;
    return j;
}

IfsSystem SystemConfig::build() const {
    const int d = box.dim();
    const double sqrt_d = std::sqrt(static_cast<double>(d));
    if (numeric.tol < 2.0 * numeric.epsilon * sqrt_d)
        bad("numeric block inconsistent: need tol >= 2*epsilon*sqrt(d)");
    MapFamily fam;
    fam.box = box;
    for (const auto& [A, b] : map_records) fam.maps.push_back(make_contraction(A, b, box));
    Subshift shift{subshift};
    if (static_cast<int>(fam.maps.size()) != shift.alphabet_size())
        bad("map count " + std::to_string(fam.maps.size()) + " must equal alphabet size " +
            std::to_string(shift.alphabet_size()));
    return IfsSystem(std::move(fam), std::move(shift), totally_invariant, rooted_in_fixed_point);
}

FactorPairConfig load_factor_pair_config(const std::string& path) {
    const json j = load_json_file(path);
    FactorPairConfig c;
    c.source = parse_system_config(j.at("source"));
    c.target = parse_system_config(j.at("target"));
    const auto& jc = j.at("code");
    c.code.memory = jc.at("memory").get<int>();
    c.code.anticipation = jc.at("anticipation").get<int>();
    for (const auto& entry : jc.at("map")) {
        const Word w = json_word(entry.at("window"));
        if (static_cast<int>(w.size()) != c.code.window_len())
            bad("block map window length does not match memory+anticipation+1");
        c.code.table[w] = entry.at("to").get<Symbol>();
    }
    c.code.target_alphabet = 0;
    for (const auto& [w, s] : c.code.table) c.code.target_alphabet = std::max(c.code.target_alphabet, s);
    c.phi2 = parse_transform(j.at("phi2"));
    return c;
}

std::string config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace ifs
