#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qtopos/matrix.hpp"

namespace qtopos {

// Canonical identity of a context: a byte string derived from the block
// entries rounded to the id grid. Equal keys are always re-verified against
// the matrices; a collision of keys for genuinely different contexts raises
// CanonicalizationClash instead of silently merging.
class ContextId {
public:
    ContextId() = default;
    explicit ContextId(std::string key) : key_(std::move(key)) {}
    const std::string& key() const { return key_; }

    friend bool operator==(const ContextId& a, const ContextId& b) { return a.key_ == b.key_; }
    friend auto operator<=>(const ContextId& a, const ContextId& b) { return a.key_ <=> b.key_; }

private:
    std::string key_;
};

// A context: a resolution of the identity into >= 2 minimal pairwise
// orthogonal projections, i.e. a non-trivial abelian subalgebra given by its
// atoms. Blocks are kept in canonical order (rank ascending, then entry
// sequence descending on the rounded grid) so equal contexts get equal ids.
class Context {
public:
    static Context from_blocks(std::vector<Projection> blocks,
                               const Tolerances& tol = default_tolerances());

    std::size_t dim() const { return dim_; }
    std::size_t block_count() const { return blocks_.size(); }
    const Projection& block(std::size_t i) const { return blocks_[i]; }
    const std::vector<Projection>& blocks() const { return blocks_; }
    const ContextId& id() const { return id_; }

private:
    Context() = default;
    std::vector<Projection> blocks_;
    std::size_t dim_ = 0;
    ContextId id_;
};

// Joint refinement of the spectral decompositions of pairwise commuting
// operators; the blocks are the minimal common eigenprojections.
Context context_from_operators(const std::vector<HermitianOperator>& ops,
                               const Tolerances& tol = default_tolerances());

// coarse <= fine: every block of `coarse` is a sum of blocks of `fine`.
bool context_leq(const Context& coarse, const Context& fine,
                 const Tolerances& tol = default_tolerances());

// Intersection of the two abelian algebras, computed by merging overlapping
// blocks; absent when the intersection is the scalars (a trivial context).
std::optional<Context> context_meet(const Context& v, const Context& w,
                                    const Tolerances& tol = default_tolerances());

Context conjugate_context(const UnitaryOperator& u, const Context& v,
                          const Tolerances& tol = default_tolerances());

// A finite closed fragment of the context poset: a set of contexts closed
// under pairwise (non-trivial) meets, with the full refinement order and the
// block restriction maps precomputed. Contexts are indexed in ContextId order,
// which fixes every iteration order downstream.
class ContextFamily {
public:
    static std::shared_ptr<const ContextFamily> close(
        std::vector<Context> seed, const Tolerances& tol = default_tolerances());

    std::size_t size() const { return contexts_.size(); }
    std::size_t dim() const { return dim_; }
    const Context& at(std::size_t i) const { return contexts_[i]; }
    std::optional<std::size_t> find(const ContextId& id) const;

    // order: leq(i, j) means contexts_[i] <= contexts_[j] (i is coarser)
    bool leq(std::size_t i, std::size_t j) const { return leq_[i][j]; }

    // block restriction along fine -> coarse, defined whenever leq(coarse, fine)
    std::size_t restrict_block(std::size_t fine, std::size_t coarse,
                               std::size_t block) const;

    // all ordered pairs (coarse, fine), coarse != fine
    const std::vector<std::pair<std::size_t, std::size_t>>& order_pairs() const {
        return order_pairs_;
    }
    // covering pairs only (transitive reduction), for Hasse diagrams
    std::vector<std::pair<std::size_t, std::size_t>> covering_pairs() const;

    bool same_contexts(const ContextFamily& other) const;

private:
    ContextFamily() = default;
    std::vector<Context> contexts_;
    std::size_t dim_ = 0;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::pair<std::size_t, std::size_t>> order_pairs_;
    // restriction_[fine][coarse][block], empty vector when not comparable
    std::vector<std::vector<std::vector<std::size_t>>> restriction_;
};

using FamilyPtr = std::shared_ptr<const ContextFamily>;

}  // namespace qtopos
