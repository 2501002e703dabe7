#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "qtopos/context.hpp"

namespace qtopos {

// A character of a context: the algebra morphism sending one minimal
// projection (the block at block_index) to 1 and the orthogonal ones to 0.
struct Character {
    ContextId context;
    std::size_t block_index = 0;

    friend bool operator==(const Character&, const Character&) = default;
};

// One character per block, in canonical block order.
std::vector<Character> spectrum(const Context& v);

// lam restricted to the coarser context: the unique block of `coarse`
// dominating lam's block. Throws NotComparable when coarse is not below fine.
Character restrict_character(const Character& lam, const Context& fine,
                             const Context& coarse,
                             const Tolerances& tol = default_tolerances());

// A compatible choice of one character per family member.
struct GlobalSection {
    std::map<ContextId, std::size_t> assignment;
};

// exhaustive consistency re-check against every order pair
bool is_global_section(const ContextFamily& fam, const GlobalSection& s);

struct SectionSearchResult {
    enum class Status { Found, Absent, Exhausted };
    Status status = Status::Absent;
    std::optional<GlobalSection> section;
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

// Backtracking over contexts in decreasing block count (ties by ContextId),
// values in canonical block order, pruning on any restriction conflict.
// Deterministic: returns the first witness in that order, Absent after
// exhausting the tree, or Exhausted once `node_budget` assignments were tried.
SectionSearchResult find_global_section(const ContextFamily& fam,
                                        std::uint64_t node_budget = 10'000'000);

}  // namespace qtopos
