#include "qtopos/context.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qtopos {

namespace {

std::vector<long long> rounded_entries(const ComplexMatrix& m, double grid) {
    std::vector<long long> r;
    r.reserve(2 * m.entries().size());
    for (const Complex& z : m.entries()) {
        r.push_back(std::llround(z.real() / grid));
        r.push_back(std::llround(z.imag() / grid));
    }
    return r;
}

// canonical block order: rank ascending, then rounded entry sequence
// descending (puts e.g. diag(1,0,0) before diag(0,1,0))
bool canonical_before(const Projection& a, const std::vector<long long>& ra,
                      const Projection& b, const std::vector<long long>& rb) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    return ra > rb;
}

}  // namespace

Context Context::from_blocks(std::vector<Projection> blocks, const Tolerances& tol) {
    if (blocks.size() < 2)
        throw TrivialContext("context needs at least two blocks");
    const std::size_t d = blocks.front().dim();
    ComplexMatrix sum(d);
    for (const Projection& p : blocks) {
        if (p.dim() != d) throw DimensionMismatch("context blocks: dimensions differ");
        if (p.rank() < 1) throw ValidationError("context block of rank zero");
        sum += p.matrix();
    }
    if (distance(sum, ComplexMatrix::identity(d)) > tol.validation)
        throw ValidationError("context blocks do not resolve the identity");
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            if ((blocks[i].matrix() * blocks[j].matrix()).frobenius_norm() > tol.validation)
                throw ValidationError("context blocks are not pairwise orthogonal");

    std::vector<std::vector<long long>> keys;
    keys.reserve(blocks.size());
    for (const Projection& p : blocks) keys.push_back(rounded_entries(p.matrix(), tol.id_grid));

    std::vector<std::size_t> perm(blocks.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
        return canonical_before(blocks[x], keys[x], blocks[y], keys[y]);
    });

    Context v;
    v.dim_ = d;
    std::string key = "d" + std::to_string(d);
    for (std::size_t k : perm) {
        v.blocks_.push_back(blocks[k]);
        key += "|r" + std::to_string(blocks[k].rank()) + ":";
        for (long long e : keys[k]) key += std::to_string(e) + ",";
    }
    v.id_ = ContextId(std::move(key));
    return v;
}

namespace {

using Basis = std::vector<std::vector<Complex>>;  // list of orthonormal columns

// Refine one subspace basis against an operator: diagonalise the compression
// Q* H Q and split the columns along the eigenvalue clusters.
std::vector<Basis> split_basis(const Basis& q, const HermitianOperator& h,
                               const Tolerances& tol) {
    const std::size_t k = q.size();
    const std::size_t d = q.front().size();
    ComplexMatrix comp(k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            Complex s{0.0, 0.0};
            for (std::size_t i = 0; i < d; ++i) {
                Complex hv{0.0, 0.0};
                for (std::size_t j = 0; j < d; ++j) hv += h.matrix().at(i, j) * q[b][j];
                s += std::conj(q[a][i]) * hv;
            }
            comp.at(a, b) = s;
        }

    std::vector<double> w;
    ComplexMatrix vec(k);
    jacobi_eigh(comp, w, vec);

    std::vector<Basis> out;
    std::size_t c = 0;
    while (c < k) {
        std::size_t e = c + 1;
        while (e < k && w[e] - w[e - 1] <= tol.cluster) ++e;
        Basis part;
        for (std::size_t col = c; col < e; ++col) {
            std::vector<Complex> nv(d, Complex{0.0, 0.0});
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t a = 0; a < k; ++a) nv[i] += q[a][i] * vec.at(a, col);
            part.push_back(std::move(nv));
        }
        out.push_back(std::move(part));
        c = e;
    }
    return out;
}

Projection basis_projection(const Basis& q, const Tolerances& tol) {
    const std::size_t d = q.front().size();
    ComplexMatrix p(d);
    for (const auto& col : q)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) p.at(i, j) += col[i] * std::conj(col[j]);
    // symmetrise away accumulation noise
    ComplexMatrix h(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            h.at(i, j) = 0.5 * (p.at(i, j) + std::conj(p.at(j, i)));
    return Projection(std::move(h), tol);
}

}  // namespace

Context context_from_operators(const std::vector<HermitianOperator>& ops,
                               const Tolerances& tol) {
    if (ops.empty()) throw EmptySeed("context_from_operators: no operators");
    const std::size_t d = ops.front().dim();
    for (const HermitianOperator& h : ops)
        if (h.dim() != d) throw DimensionMismatch("context operators: dimensions differ");
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = a + 1; b < ops.size(); ++b)
            if (commutator_norm(ops[a].matrix(), ops[b].matrix()) > tol.comparison)
                throw NonCommuting("context operators do not commute");

    Basis full;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Complex> e(d, Complex{0.0, 0.0});
        e[i] = 1.0;
        full.push_back(std::move(e));
    }
    std::vector<Basis> parts{full};
    for (const HermitianOperator& h : ops) {
        std::vector<Basis> next;
        for (const Basis& q : parts)
            for (Basis& piece : split_basis(q, h, tol)) next.push_back(std::move(piece));
        parts = std::move(next);
    }
    if (parts.size() < 2)
        throw TrivialContext("operators generate only the scalars");

    std::vector<Projection> blocks;
    blocks.reserve(parts.size());
    for (const Basis& q : parts) blocks.push_back(basis_projection(q, tol));
    return Context::from_blocks(std::move(blocks), tol);
}

bool context_leq(const Context& coarse, const Context& fine, const Tolerances& tol) {
    if (coarse.dim() != fine.dim())
        throw DimensionMismatch("context_leq: dimensions differ");
    for (const Projection& p : coarse.blocks()) {
        ComplexMatrix sum(coarse.dim());
        for (const Projection& b : fine.blocks())
            if ((p.matrix() * b.matrix()).frobenius_norm() > tol.overlap)
                sum += b.matrix();
        if (distance(sum, p.matrix()) > tol.comparison) return false;
    }
    return true;
}

std::optional<Context> context_meet(const Context& v, const Context& w,
                                    const Tolerances& tol) {
    if (v.dim() != w.dim()) throw DimensionMismatch("context_meet: dimensions differ");
    const std::size_t nv = v.block_count(), nw = w.block_count();

    // union-find over the blocks of both contexts; blocks are linked when
    // they overlap, and the component sums are the meet's blocks
    std::vector<std::size_t> parent(nv + nw);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nw; ++j)
            if ((v.block(i).matrix() * w.block(j).matrix()).frobenius_norm() > tol.overlap)
                unite(i, nv + j);

    std::map<std::size_t, ComplexMatrix> sums;
    for (std::size_t i = 0; i < nv; ++i)
        sums.try_emplace(find(i), v.dim()).first->second += v.block(i).matrix();
    if (sums.size() < 2) return std::nullopt;

    std::vector<Projection> blocks;
    for (auto& [root, m] : sums) blocks.push_back(Projection(std::move(m), tol));
    return Context::from_blocks(std::move(blocks), tol);
}

Context conjugate_context(const UnitaryOperator& u, const Context& v,
                          const Tolerances& tol) {
    if (u.dim() != v.dim())
        throw DimensionMismatch("conjugate_context: dimensions differ");
    std::vector<Projection> blocks;
    blocks.reserve(v.block_count());
    for (const Projection& p : v.blocks()) blocks.push_back(conjugate(u, p, tol));
    return Context::from_blocks(std::move(blocks), tol);
}

namespace {

// true when the two contexts agree block-by-block within tol.comparison
bool contexts_close(const Context& a, const Context& b, const Tolerances& tol) {
    if (a.dim() != b.dim() || a.block_count() != b.block_count()) return false;
    for (std::size_t k = 0; k < a.block_count(); ++k)
        if (distance(a.block(k).matrix(), b.block(k).matrix()) > tol.comparison)
            return false;
    return true;
}

}  // namespace

std::shared_ptr<const ContextFamily> ContextFamily::close(std::vector<Context> seed,
                                                          const Tolerances& tol) {
    if (seed.empty()) throw EmptySeed("close_family: empty seed");
    const std::size_t d = seed.front().dim();

    std::vector<Context> all;
    auto insert = [&](const Context& c) {
        if (c.dim() != d) throw DimensionMismatch("close_family: dimensions differ");
        for (const Context& e : all) {
            if (e.id() == c.id()) {
                if (!contexts_close(e, c, tol))
                    throw CanonicalizationClash("distinct contexts share a canonical key");
                return false;
            }
        }
        all.push_back(c);
        return true;
    };
    for (const Context& c : seed) insert(c);

    // pairwise meet closure; newly added contexts are paired with all earlier ones
    for (std::size_t i = 1; i < all.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (auto m = context_meet(all[i], all[j], tol)) insert(*m);

    auto fam = std::shared_ptr<ContextFamily>(new ContextFamily());
    fam->dim_ = d;
    std::sort(all.begin(), all.end(),
              [](const Context& a, const Context& b) { return a.id() < b.id(); });
    fam->contexts_ = std::move(all);

    const std::size_t n = fam->contexts_.size();
    fam->leq_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            fam->leq_[i][j] =
                (i == j) || context_leq(fam->contexts_[i], fam->contexts_[j], tol);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (fam->leq_[i][j] && fam->leq_[j][i])
                throw CanonicalizationClash(
                    "two family members are mutually comparable but not identified");
            for (std::size_t k = 0; k < n; ++k)
                if (fam->leq_[i][j] && fam->leq_[j][k] && !fam->leq_[i][k])
                    throw ValidationError("family order is not transitive");
        }

    fam->restriction_.assign(n, std::vector<std::vector<std::size_t>>(n));
    for (std::size_t fine = 0; fine < n; ++fine)
        for (std::size_t coarse = 0; coarse < n; ++coarse) {
            if (!fam->leq_[coarse][fine]) continue;
            const Context& cf = fam->contexts_[fine];
            const Context& cc = fam->contexts_[coarse];
            std::vector<std::size_t> table(cf.block_count());
            for (std::size_t k = 0; k < cf.block_count(); ++k) {
                std::size_t hits = 0, dominating = 0;
                for (std::size_t q = 0; q < cc.block_count(); ++q)
                    if ((cc.block(q).matrix() * cf.block(k).matrix()).frobenius_norm() >
                        tol.overlap) {
                        ++hits;
                        dominating = q;
                    }
                if (hits != 1)
                    throw ValidationError("restriction map is not single-valued");
                table[k] = dominating;
            }
            fam->restriction_[fine][coarse] = std::move(table);
        }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && fam->leq_[i][j]) fam->order_pairs_.emplace_back(i, j);

    return fam;
}

std::optional<std::size_t> ContextFamily::find(const ContextId& id) const {
    for (std::size_t i = 0; i < contexts_.size(); ++i)
        if (contexts_[i].id() == id) return i;
    return std::nullopt;
}

std::size_t ContextFamily::restrict_block(std::size_t fine, std::size_t coarse,
                                          std::size_t block) const {
    const auto& table = restriction_[fine][coarse];
    if (table.empty()) throw NotComparable("restrict_block: contexts are not comparable");
    return table[block];
}

std::vector<std::pair<std::size_t, std::size_t>> ContextFamily::covering_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = contexts_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !leq_[i][j]) continue;
            bool covering = true;
            for (std::size_t k = 0; k < n && covering; ++k)
                if (k != i && k != j && leq_[i][k] && leq_[k][j]) covering = false;
            if (covering) out.emplace_back(i, j);
        }
    return out;
}

bool ContextFamily::same_contexts(const ContextFamily& other) const {
    if (contexts_.size() != other.contexts_.size()) return false;
    for (std::size_t i = 0; i < contexts_.size(); ++i)
        if (!(contexts_[i].id() == other.contexts_[i].id())) return false;
    return true;
}

}  // namespace qtopos
