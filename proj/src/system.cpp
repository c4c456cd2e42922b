#include "ifs/system.hpp"

namespace ifs {

IfsSystem power_system(const IfsSystem& sys, int N) {
    PowerShift ps = power_shift(sys.shift, N);
    MapFamily fam;
    fam.box = sys.family.box;
    fam.maps.reserve(ps.blocks.size());
    for (const auto& block : ps.blocks) fam.maps.push_back(compose_word(sys.family, block));
    return IfsSystem(std::move(fam), std::move(ps.shift), sys.totally_invariant,
                     sys.rooted_in_fixed_point);
}

}  // namespace ifs
