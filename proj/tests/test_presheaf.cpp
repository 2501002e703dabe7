#include <doctest.h>

#include "qtopos/presheaf.hpp"
#include "support.hpp"

using namespace qtopos;

namespace {

Context diagonal_context(std::size_t d) {
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = static_cast<double>(i + 1);
    return context_from_operators({HermitianOperator(std::move(m))});
}

Projection basis_projection(std::size_t d, std::initializer_list<std::size_t> axes) {
    ComplexMatrix m(d);
    for (std::size_t a : axes) m.at(a, a) = 1.0;
    return Projection(std::move(m));
}

// the 18-vector / 9-tetrad Kochen-Specker set in d = 4
std::vector<Context> cabello_contexts() {
    using V = std::vector<double>;
    const std::vector<std::vector<V>> tetrads = {
        {{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}, {1, -1, 0, 0}},
        {{0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, -1, 0}},
        {{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}},
        {{1, -1, 1, -1}, {1, 1, 1, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}},
        {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}},
        {{1, -1, -1, 1}, {1, 1, 1, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}},
        {{1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, 0, 0}, {0, 0, 1, 1}},
        {{1, 1, -1, 1}, {-1, 1, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, -1}},
        {{1, 1, 1, -1}, {-1, 1, 1, 1}, {1, 0, 0, 1}, {0, 1, -1, 0}},
    };
    std::vector<Context> out;
    for (const auto& tetrad : tetrads) {
        std::vector<Projection> blocks;
        for (const V& v : tetrad) {
            std::vector<Complex> kv(v.begin(), v.end());
            blocks.emplace_back(ts::ket_projector(kv));
        }
        out.push_back(Context::from_blocks(std::move(blocks)));
    }
    return out;
}

}  // namespace

TEST_CASE("spectrum yields one character per block") {
    CHECK(spectrum(diagonal_context(2)).size() == 2);
    CHECK(spectrum(diagonal_context(3)).size() == 3);
    CHECK(spectrum(diagonal_context(5)).size() == 5);
}

TEST_CASE("restrict_character: identity and dominating block") {
    Context fine = diagonal_context(3);
    Context coarse = Context::from_blocks(
        {basis_projection(3, {0}), basis_projection(3, {1, 2})});

    for (const Character& lam : spectrum(fine)) {
        CHECK(restrict_character(lam, fine, fine) == lam);
    }

    // e2's character lands on the e2+e3 block, e1's on e1
    auto block_of = [&](const Projection& p) {
        for (std::size_t k = 0; k < fine.block_count(); ++k)
            if (approx_equal(fine.block(k).matrix(), p.matrix(), 1e-9)) return k;
        FAIL("block not found");
        return std::size_t{0};
    };
    const Character lam_e2{fine.id(), block_of(basis_projection(3, {1}))};
    const Character r2 = restrict_character(lam_e2, fine, coarse);
    CHECK(approx_equal(coarse.block(r2.block_index).matrix(),
                       basis_projection(3, {1, 2}).matrix(), 1e-9));

    const Character lam_e1{fine.id(), block_of(basis_projection(3, {0}))};
    const Character r1 = restrict_character(lam_e1, fine, coarse);
    CHECK(approx_equal(coarse.block(r1.block_index).matrix(),
                       basis_projection(3, {0}).matrix(), 1e-9));

    CHECK_THROWS_AS(restrict_character(r1, coarse, fine), NotComparable);
}

TEST_CASE("restrict_character composes along chains") {
    Context fine = diagonal_context(4);
    Context mid = Context::from_blocks({basis_projection(4, {0, 1}),
                                        basis_projection(4, {2}),
                                        basis_projection(4, {3})});
    Context coarse = Context::from_blocks(
        {basis_projection(4, {0, 1}), basis_projection(4, {2, 3})});
    REQUIRE(context_leq(coarse, mid));
    REQUIRE(context_leq(mid, fine));

    for (const Character& lam : spectrum(fine)) {
        const Character two_step =
            restrict_character(restrict_character(lam, fine, mid), mid, coarse);
        const Character one_step = restrict_character(lam, fine, coarse);
        CHECK(two_step == one_step);
    }
}

TEST_CASE("find_global_section: single context returns the first character") {
    FamilyPtr fam = ContextFamily::close({diagonal_context(3)});
    auto res = find_global_section(*fam);
    REQUIRE(res.status == SectionSearchResult::Status::Found);
    CHECK(res.section->assignment.at(fam->at(0).id()) == 0);
}

TEST_CASE("find_global_section: incomparable contexts impose no constraints") {
    Context xctx = context_from_operators({HermitianOperator(ts::pauli_x())});
    FamilyPtr fam = ContextFamily::close({diagonal_context(2), xctx});
    auto res = find_global_section(*fam);
    CHECK(res.status == SectionSearchResult::Status::Found);
    CHECK(is_global_section(*fam, *res.section));
}

TEST_CASE("find_global_section respects the node budget") {
    FamilyPtr fam = ContextFamily::close(cabello_contexts());
    auto res = find_global_section(*fam, 10);
    CHECK(res.status == SectionSearchResult::Status::Exhausted);
    CHECK(res.nodes == 11);
}

TEST_CASE("kochen-specker: the cabello family admits no global section") {
    FamilyPtr fam = ContextFamily::close(cabello_contexts());
    // 9 tetrads plus one 2-block meet per shared ray
    CHECK(fam->size() == 27);
    auto res = find_global_section(*fam);
    CHECK(res.status == SectionSearchResult::Status::Absent);
}

TEST_CASE("kochen-specker obstruction is monotone under family extension") {
    std::vector<Context> seed = cabello_contexts();
    // one extra maximal context with rays not in the KS set: rotate the
    // standard basis by an irrational angle in the (0,1) plane
    ComplexMatrix m(4);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 2.0;
    m.at(2, 2) = 3.0;
    m.at(3, 3) = 4.0;
    const double ang = 0.7;
    ComplexMatrix rot = ComplexMatrix::identity(4);
    rot.at(0, 0) = std::cos(ang); rot.at(0, 1) = std::sin(ang);
    rot.at(1, 0) = std::sin(ang); rot.at(1, 1) = -std::cos(ang);
    UnitaryOperator u(std::move(rot));
    seed.push_back(conjugate_context(u, context_from_operators({HermitianOperator(m)})));

    FamilyPtr fam = ContextFamily::close(seed);
    CHECK(fam->size() > 27);
    CHECK(find_global_section(*fam).status == SectionSearchResult::Status::Absent);
}

TEST_CASE("d = 2 families always admit a section") {
    std::mt19937_64 rng(9301);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Context> seed;
        for (int k = 0; k < 5; ++k) {
            Projection p = ts::random_proper_projection(rng, 2);
            seed.push_back(Context::from_blocks({p, projection_complement(p)}));
        }
        FamilyPtr fam = ContextFamily::close(seed);
        auto res = find_global_section(*fam);
        CHECK(res.status == SectionSearchResult::Status::Found);
        CHECK(is_global_section(*fam, *res.section));
    }
}
