#pragma once

#include <cstdint>
#include <set>

#include "qtopos/context.hpp"

namespace qtopos {

// Per-context block selections are stored as bitmasks; block counts stay
// far below 32 at the dimensions this library targets.
using BlockMask = std::uint32_t;

std::vector<std::size_t> mask_to_indices(BlockMask m);
BlockMask indices_to_mask(const std::vector<std::size_t>& idx);

// The dictionary between projections in a context and subsets of its
// spectrum: alpha maps a block set to the sum of those blocks, alpha_inv
// recovers the block set of a projection lying in the context.
Projection alpha(const Context& v, BlockMask selection);
BlockMask alpha_inv(const Context& v, const Projection& p,
                    const Tolerances& tol = default_tolerances());

// A clopen subobject of the spectral presheaf over a fixed finite family:
// one block selection per context, stable under restriction (the image of a
// selected block's character at any coarser family member is selected).
class ClopenSubobject {
public:
    static ClopenSubobject from_components(FamilyPtr fam, std::vector<BlockMask> comps,
                                           const Tolerances& tol = default_tolerances());
    static ClopenSubobject top(FamilyPtr fam);
    static ClopenSubobject bottom(FamilyPtr fam);

    const FamilyPtr& family() const { return family_; }
    const std::vector<BlockMask>& components() const { return components_; }
    BlockMask component(std::size_t ctx) const { return components_[ctx]; }
    bool selected(std::size_t ctx, std::size_t block) const {
        return components_[ctx] & (BlockMask{1} << block);
    }
    // sum of the selected blocks of that context
    Projection component_projection(std::size_t ctx) const;

    friend bool operator==(const ClopenSubobject& a, const ClopenSubobject& b);

private:
    ClopenSubobject(FamilyPtr fam, std::vector<BlockMask> comps)
        : family_(std::move(fam)), components_(std::move(comps)) {}
    FamilyPtr family_;
    std::vector<BlockMask> components_;
};

// restriction condition at every order pair, without constructing anything
bool is_subobject(const ContextFamily& fam, const std::vector<BlockMask>& comps);

// smallest subobject containing the given selections (downward-closure repair)
ClopenSubobject smallest_subobject_containing(FamilyPtr fam,
                                              std::vector<BlockMask> comps);

// Outer daseinisation: per context the smallest projection of the context
// dominating p, i.e. the blocks overlapping p. Restriction acts on the result
// with equality, and p is reproduced in any context containing it.
ClopenSubobject outer_daseinisation(const Projection& p, FamilyPtr fam,
                                    const Tolerances& tol = default_tolerances());

ClopenSubobject sub_meet(const ClopenSubobject& s, const ClopenSubobject& t);
ClopenSubobject sub_join(const ClopenSubobject& s, const ClopenSubobject& t);
bool sub_leq(const ClopenSubobject& s, const ClopenSubobject& t);

// Heyting implication: largest r with r meet s <= t.
ClopenSubobject heyting_implies(const ClopenSubobject& s, const ClopenSubobject& t);
// co-Heyting subtraction: least r with s <= t join r.
ClopenSubobject coheyting_subtract(const ClopenSubobject& s, const ClopenSubobject& t);

// All clopen subobjects of a small family (guarded; intended for families
// whose component count keeps the enumeration in the thousands).
std::vector<ClopenSubobject> enumerate_subobjects(FamilyPtr fam,
                                                  std::size_t limit = 1u << 20);

}  // namespace qtopos
