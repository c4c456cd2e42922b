// subshift.hpp — sub-shifts over finite alphabets: presentations, admissibility,
// language enumeration, higher power shifts, and sliding block codes.
//
// Every sub-shift variant compiles to a labeled directed graph (SoficPresentation)
// whose label-path language is the shift's language. Full shifts compile to one
// vertex with k loops, finite-type shifts to a De Bruijn context graph, coded
// generator sets to a flower automaton, and orbit closures v·u^inf to a path
// feeding a cycle. All values are immutable after construction.
#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "ifs/types.hpp"

namespace ifs {

struct LabeledEdge {
    int from = 0;
    int to = 0;
    Symbol label = 0;
    friend bool operator<(const LabeledEdge& a, const LabeledEdge& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.label != b.label) return a.label < b.label;
        return a.to < b.to;
    }
    friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
};

class SoficPresentation {
public:
    SoficPresentation() = default;
    SoficPresentation(int vertices, int alphabet, std::vector<LabeledEdge> edges);

    int vertex_count() const { return vertices_; }
    int alphabet_size() const { return alphabet_; }
    const std::vector<LabeledEdge>& edges() const { return edges_; }
    const std::vector<LabeledEdge>& out_edges(int v) const { return out_[v]; }

    // Iteratively removes vertices that cannot start an infinite path.
    // Throws EmptyShift when nothing survives.
    SoficPresentation pruned() const;

    bool accepts(const Word& w) const;            // some path carries label w
    std::vector<Word> words_of_length(int n) const;  // lexicographic
    // Vertex sets {q : w readable ending at q} after reading w from `from`
    // (all vertices when `from` is empty).
    std::vector<char> run(const Word& w, const std::vector<char>& from) const;
    std::vector<char> all_vertices_mask() const { return std::vector<char>(vertices_, 1); }
    // True when u can be read along a closed loop somewhere in the graph,
    // i.e. u^inf is a point of the shift.
    bool has_label_cycle(const Word& u) const;

private:
    int vertices_ = 0;
    int alphabet_ = 0;
    std::vector<LabeledEdge> edges_;
    std::vector<std::vector<LabeledEdge>> out_;  // per-vertex, sorted by (label, to)
};

struct FullShift {
    int alphabet = 0;
};

struct FiniteTypeShift {
    int alphabet = 0;
    std::vector<Word> forbidden;  // each length >= 2; normalized on construction
};

struct SoficShift {
    int vertices = 0;
    int alphabet = 0;
    std::vector<LabeledEdge> edges;
};

struct CodedShift {
    int alphabet = 0;
    std::vector<Word> generators;
};

// One family row instantiates prefix + block^j + suffix for j = 0, 1, ...
struct GeneratorPattern {
    Word prefix, block, suffix;
};

struct TruncatedCodedShift {
    int alphabet = 0;
    std::vector<GeneratorPattern> patterns;
    int max_generator_len = 0;
    std::vector<Word> instantiate() const;
};

struct OrbitClosureShift {
    int alphabet = 0;
    Word transient;  // may be empty
    Word period;     // nonempty
};

using SubshiftSpec = std::variant<FullShift, FiniteTypeShift, SoficShift, CodedShift,
                                  TruncatedCodedShift, OrbitClosureShift>;

// Removes forbidden words that contain another forbidden word as a factor,
// deduplicates, sorts. Throws on words shorter than 2 or out-of-range symbols.
std::vector<Word> normalize_forbidden(const std::vector<Word>& forbidden, int alphabet);

class Subshift {
public:
    explicit Subshift(SubshiftSpec spec);

    int alphabet_size() const { return alphabet_; }
    const SubshiftSpec& spec() const { return spec_; }
    const SoficPresentation& presentation() const { return pres_; }

    bool is_admissible(const Word& w) const;
    // Admissible words of length n in lexicographic order (path enumeration).
    std::vector<Word> language(int n) const;
    // Brute-force k^n filter through is_admissible; test oracle and small-n path.
    std::vector<Word> language_naive(int n) const;
    bool period_word_admissible(const Word& u) const;  // u^inf in the shift

private:
    void check_symbols(const Word& w) const;

    SubshiftSpec spec_;
    int alphabet_ = 0;
    SoficPresentation pres_;
};

// The N-th higher power shift: alphabet re-indexed over L_N (lexicographic),
// with the chunk table mapping each new symbol to its length-N word.
struct PowerShift {
    Subshift shift;
    std::vector<Word> blocks;  // blocks[i] = word for symbol i+1
};
PowerShift power_shift(const Subshift& s, int N);

// Sliding block code with memory m and anticipation n over windows of
// length m+n+1.
struct FactorCode {
    int memory = 0;
    int anticipation = 0;
    int target_alphabet = 0;
    std::map<Word, Symbol> table;

    int window_len() const { return memory + anticipation + 1; }
};

// Slides the block map across w; output has length |w| - m - n.
Word apply_block_map(const FactorCode& code, const Word& w);

}  // namespace ifs
