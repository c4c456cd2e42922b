// system.hpp — the triple (box, map family, sub-shift) plus declared flags.
#pragma once

#include "ifs/affine.hpp"
#include "ifs/subshift.hpp"

namespace ifs {

struct IfsSystem {
    MapFamily family;
    Subshift shift;
    bool totally_invariant = false;
    bool rooted_in_fixed_point = false;

    IfsSystem(MapFamily fam, Subshift sh, bool tot_inv = false, bool rooted = false)
        : family(std::move(fam)), shift(std::move(sh)),
          totally_invariant(tot_inv), rooted_in_fixed_point(rooted) {
        if (family.size() != shift.alphabet_size())
            throw Error(ErrorKind::Config, "map count must equal the alphabet size");
    }
};

// Chunk maps f_u over L_N with the N-th higher power shift.
IfsSystem power_system(const IfsSystem& sys, int N);

}  // namespace ifs
