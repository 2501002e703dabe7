#include "qtopos/subobject.hpp"

#include <algorithm>

namespace qtopos {

std::vector<std::size_t> mask_to_indices(BlockMask m) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; m != 0; ++k, m >>= 1)
        if (m & 1u) out.push_back(k);
    return out;
}

BlockMask indices_to_mask(const std::vector<std::size_t>& idx) {
    BlockMask m = 0;
    for (std::size_t k : idx) m |= (BlockMask{1} << k);
    return m;
}

Projection alpha(const Context& v, BlockMask selection) {
    ComplexMatrix sum(v.dim());
    for (std::size_t k = 0; k < v.block_count(); ++k)
        if (selection & (BlockMask{1} << k)) sum += v.block(k).matrix();
    return Projection(std::move(sum));
}

BlockMask alpha_inv(const Context& v, const Projection& p, const Tolerances& tol) {
    if (v.dim() != p.dim()) throw DimensionMismatch("alpha_inv: dimensions differ");
    BlockMask m = 0;
    ComplexMatrix sum(v.dim());
    for (std::size_t k = 0; k < v.block_count(); ++k)
        if ((v.block(k).matrix() * p.matrix()).frobenius_norm() > tol.overlap) {
            m |= (BlockMask{1} << k);
            sum += v.block(k).matrix();
        }
    if (distance(sum, p.matrix()) > tol.validation)
        throw NotInContext("alpha_inv: projection is not a block sum of the context");
    return m;
}

bool is_subobject(const ContextFamily& fam, const std::vector<BlockMask>& comps) {
    if (comps.size() != fam.size()) return false;
    for (const auto& [coarse, fine] : fam.order_pairs())
        for (std::size_t k = 0; k < fam.at(fine).block_count(); ++k)
            if ((comps[fine] >> k) & 1u)
                if (!((comps[coarse] >> fam.restrict_block(fine, coarse, k)) & 1u))
                    return false;
    return true;
}

ClopenSubobject ClopenSubobject::from_components(FamilyPtr fam,
                                                 std::vector<BlockMask> comps,
                                                 const Tolerances&) {
    if (comps.size() != fam->size())
        throw FamilyMismatch("subobject components do not match the family");
    for (std::size_t i = 0; i < fam->size(); ++i)
        if (comps[i] >> fam->at(i).block_count())
            throw ValidationError("subobject component selects a nonexistent block");
    if (!is_subobject(*fam, comps))
        throw ValidationError("components violate the restriction condition");
    return ClopenSubobject(std::move(fam), std::move(comps));
}

ClopenSubobject ClopenSubobject::top(FamilyPtr fam) {
    std::vector<BlockMask> comps(fam->size());
    for (std::size_t i = 0; i < fam->size(); ++i)
        comps[i] = (BlockMask{1} << fam->at(i).block_count()) - 1u;
    return ClopenSubobject(std::move(fam), std::move(comps));
}

ClopenSubobject ClopenSubobject::bottom(FamilyPtr fam) {
    std::vector<BlockMask> comps(fam->size(), 0u);
    return ClopenSubobject(std::move(fam), std::move(comps));
}

Projection ClopenSubobject::component_projection(std::size_t ctx) const {
    return alpha(family_->at(ctx), components_[ctx]);
}

bool operator==(const ClopenSubobject& a, const ClopenSubobject& b) {
    return a.family_->same_contexts(*b.family_) && a.components_ == b.components_;
}

ClopenSubobject smallest_subobject_containing(FamilyPtr fam,
                                              std::vector<BlockMask> comps) {
    if (comps.size() != fam->size())
        throw FamilyMismatch("components do not match the family");
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [coarse, fine] : fam->order_pairs())
            for (std::size_t k = 0; k < fam->at(fine).block_count(); ++k)
                if ((comps[fine] >> k) & 1u) {
                    const BlockMask bit =
                        BlockMask{1} << fam->restrict_block(fine, coarse, k);
                    if (!(comps[coarse] & bit)) {
                        comps[coarse] |= bit;
                        changed = true;
                    }
                }
    }
    return ClopenSubobject::from_components(std::move(fam), std::move(comps));
}

ClopenSubobject outer_daseinisation(const Projection& p, FamilyPtr fam,
                                    const Tolerances& tol) {
    if (p.dim() != fam->dim())
        throw DimensionMismatch("outer_daseinisation: dimensions differ");
    std::vector<BlockMask> comps(fam->size(), 0u);
    for (std::size_t i = 0; i < fam->size(); ++i) {
        const Context& v = fam->at(i);
        for (std::size_t k = 0; k < v.block_count(); ++k)
            if ((v.block(k).matrix() * p.matrix()).frobenius_norm() > tol.overlap)
                comps[i] |= (BlockMask{1} << k);
    }
    return ClopenSubobject::from_components(std::move(fam), std::move(comps), tol);
}

namespace {

void require_same_family(const ClopenSubobject& s, const ClopenSubobject& t) {
    if (!s.family()->same_contexts(*t.family()))
        throw FamilyMismatch("subobjects live on different families");
}

}  // namespace

ClopenSubobject sub_meet(const ClopenSubobject& s, const ClopenSubobject& t) {
    require_same_family(s, t);
    std::vector<BlockMask> comps(s.components().size());
    for (std::size_t i = 0; i < comps.size(); ++i)
        comps[i] = s.component(i) & t.component(i);
    return ClopenSubobject::from_components(s.family(), std::move(comps));
}

ClopenSubobject sub_join(const ClopenSubobject& s, const ClopenSubobject& t) {
    require_same_family(s, t);
    std::vector<BlockMask> comps(s.components().size());
    for (std::size_t i = 0; i < comps.size(); ++i)
        comps[i] = s.component(i) | t.component(i);
    return ClopenSubobject::from_components(s.family(), std::move(comps));
}

bool sub_leq(const ClopenSubobject& s, const ClopenSubobject& t) {
    require_same_family(s, t);
    for (std::size_t i = 0; i < s.components().size(); ++i)
        if (s.component(i) & ~t.component(i)) return false;
    return true;
}

// (s => t)_V = { characters whose restriction to every family member below V
// lands in t wherever it lands in s }
ClopenSubobject heyting_implies(const ClopenSubobject& s, const ClopenSubobject& t) {
    require_same_family(s, t);
    const ContextFamily& fam = *s.family();
    std::vector<BlockMask> comps(fam.size(), 0u);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t k = 0; k < fam.at(i).block_count(); ++k) {
            bool keep = true;
            for (std::size_t j = 0; j < fam.size() && keep; ++j) {
                if (!fam.leq(j, i)) continue;
                const std::size_t kj = (j == i) ? k : fam.restrict_block(i, j, k);
                if (s.selected(j, kj) && !t.selected(j, kj)) keep = false;
            }
            if (keep) comps[i] |= (BlockMask{1} << k);
        }
    }
    return ClopenSubobject::from_components(s.family(), std::move(comps));
}

ClopenSubobject coheyting_subtract(const ClopenSubobject& s, const ClopenSubobject& t) {
    require_same_family(s, t);
    std::vector<BlockMask> diff(s.components().size());
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff[i] = s.component(i) & ~t.component(i);
    return smallest_subobject_containing(s.family(), std::move(diff));
}

std::vector<ClopenSubobject> enumerate_subobjects(FamilyPtr fam, std::size_t limit) {
    std::size_t total_bits = 0;
    for (std::size_t i = 0; i < fam->size(); ++i) total_bits += fam->at(i).block_count();
    if (total_bits >= 8 * sizeof(std::size_t) || (std::size_t{1} << total_bits) > limit)
        throw ValidationError("family too large to enumerate subobjects");

    std::vector<ClopenSubobject> out;
    const std::size_t n = fam->size();
    std::vector<BlockMask> comps(n);
    for (std::size_t code = 0; code < (std::size_t{1} << total_bits); ++code) {
        std::size_t shift = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bc = fam->at(i).block_count();
            comps[i] = static_cast<BlockMask>((code >> shift) & ((1u << bc) - 1u));
            shift += bc;
        }
        if (is_subobject(*fam, comps))
            out.push_back(ClopenSubobject::from_components(fam, comps));
    }
    return out;
}

}  // namespace qtopos
