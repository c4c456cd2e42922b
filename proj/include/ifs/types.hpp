// types.hpp — shared vocabulary types and the error model.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifs {

// Symbols are 1-based: an alphabet of size k uses {1, ..., k}.
using Symbol = int;
using Word = std::vector<Symbol>;

enum class ErrorKind {
    Config,       // malformed or inconsistent configuration
    Input,        // bad argument to an operation
    Numeric,      // numerical guard tripped
    Contraction,  // certified ratio bound >= 1
    EmptyShift,   // presentation pruned to nothing
    Domain,       // block-map window outside the code's domain
    Cap,          // configured enumeration cap exceeded
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i && w[i - 1] > 9) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

// Parses "1213" digit-wise, or "1,2,13" as comma-separated symbols.
inline Word parse_word(const std::string& s) {
    Word w;
    if (s.find(',') != std::string::npos) {
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t next = s.find(',', pos);
            if (next == std::string::npos) next = s.size();
            w.push_back(std::stoi(s.substr(pos, next - pos)));
            pos = next + 1;
        }
    } else {
        for (char c : s) {
            if (c < '1' || c > '9') throw Error(ErrorKind::Input, "bad word literal: " + s);
            w.push_back(c - '0');
        }
    }
    return w;
}

inline Word concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

inline bool contains_factor(const Word& w, const Word& f) {
    if (f.empty()) return true;
    if (f.size() > w.size()) return false;
    for (std::size_t i = 0; i + f.size() <= w.size(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < f.size(); ++j)
            if (w[i + j] != f[j]) { hit = false; break; }
        if (hit) return true;
    }
    return false;
}

}  // namespace ifs
