#include "qtopos/presheaf.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace qtopos {

std::vector<Character> spectrum(const Context& v) {
    std::vector<Character> out;
    out.reserve(v.block_count());
    for (std::size_t k = 0; k < v.block_count(); ++k)
        out.push_back(Character{v.id(), k});
    return out;
}

Character restrict_character(const Character& lam, const Context& fine,
                             const Context& coarse, const Tolerances& tol) {
    if (!(lam.context == fine.id()))
        throw NotComparable("restrict_character: character does not live on the fine context");
    if (!context_leq(coarse, fine, tol))
        throw NotComparable("restrict_character: contexts are not comparable");
    const Projection& p = fine.block(lam.block_index);
    for (std::size_t q = 0; q < coarse.block_count(); ++q)
        if (projection_leq(p, coarse.block(q), tol)) return Character{coarse.id(), q};
    throw NotComparable("restrict_character: no dominating block found");
}

bool is_global_section(const ContextFamily& fam, const GlobalSection& s) {
    if (s.assignment.size() != fam.size()) return false;
    std::vector<std::size_t> value(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        auto it = s.assignment.find(fam.at(i).id());
        if (it == s.assignment.end() || it->second >= fam.at(i).block_count())
            return false;
        value[i] = it->second;
    }
    for (const auto& [coarse, fine] : fam.order_pairs())
        if (fam.restrict_block(fine, coarse, value[fine]) != value[coarse]) return false;
    return true;
}

SectionSearchResult find_global_section(const ContextFamily& fam,
                                        std::uint64_t node_budget) {
    const auto t0 = std::chrono::steady_clock::now();
    SectionSearchResult res;
    const std::size_t n = fam.size();

    // most blocks first, ties broken by canonical id order (= family index)
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fam.at(a).block_count() > fam.at(b).block_count();
    });

    // for each search position, the earlier positions related to it
    struct Constraint {
        std::size_t pos;      // earlier search position
        bool earlier_is_fine; // direction of the restriction map
    };
    std::vector<std::vector<Constraint>> constraints(n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t e = 0; e < s; ++e) {
            const std::size_t cs = order[s], ce = order[e];
            if (fam.leq(cs, ce)) constraints[s].push_back({e, true});
            else if (fam.leq(ce, cs)) constraints[s].push_back({e, false});
        }

    std::vector<std::size_t> chosen(n, 0);
    std::uint64_t nodes = 0;
    bool exhausted_budget = false;

    // iterative depth-first search
    std::size_t pos = 0;
    std::vector<std::size_t> next(n, 0);
    bool found = false;
    while (true) {
        if (pos == n) { found = true; break; }
        const std::size_t ctx = order[pos];
        bool advanced = false;
        while (next[pos] < fam.at(ctx).block_count()) {
            const std::size_t v = next[pos]++;
            if (++nodes > node_budget) { exhausted_budget = true; break; }
            bool ok = true;
            for (const Constraint& c : constraints[pos]) {
                const std::size_t ectx = order[c.pos];
                if (c.earlier_is_fine) {
                    if (fam.restrict_block(ectx, ctx, chosen[c.pos]) != v) { ok = false; break; }
                } else {
                    if (fam.restrict_block(ctx, ectx, v) != chosen[c.pos]) { ok = false; break; }
                }
            }
            if (ok) {
                chosen[pos] = v;
                ++pos;
                if (pos < n) next[pos] = 0;
                advanced = true;
                break;
            }
        }
        if (exhausted_budget) break;
        if (!advanced) {
            if (pos == 0) break;  // tree exhausted
            --pos;
        }
    }

    res.nodes = nodes;
    if (found) {
        GlobalSection sec;
        for (std::size_t s = 0; s < n; ++s)
            sec.assignment[fam.at(order[s]).id()] = chosen[s];
        if (!is_global_section(fam, sec))
            throw ValidationError("search produced an inconsistent section");
        res.status = SectionSearchResult::Status::Found;
        res.section = std::move(sec);
    } else {
        res.status = exhausted_budget ? SectionSearchResult::Status::Exhausted
                                      : SectionSearchResult::Status::Absent;
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace qtopos
