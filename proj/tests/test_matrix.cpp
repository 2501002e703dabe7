#include <doctest.h>

#include <cmath>

#include "qtopos/matrix.hpp"
#include "support.hpp"

using namespace qtopos;
using ts::mat;

namespace {

// Independent 2x2 eigensolve: roots of the characteristic polynomial.
// Used as the oracle for the Pauli-x decomposition below.
std::pair<double, double> char_poly_eigenvalues_2x2(const ComplexMatrix& m) {
    const double tr = m.trace().real();
    const double det = (m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)).real();
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

}  // namespace

TEST_CASE("spectral_decompose: diagonal input") {
    HermitianOperator h(ts::diag({0, 0, 1}));
    auto eigs = spectral_decompose(h);
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eigs[1].value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(approx_equal(eigs[0].projection.matrix(), ts::diag({1, 1, 0}), 1e-10));
    CHECK(approx_equal(eigs[1].projection.matrix(), ts::diag({0, 0, 1}), 1e-10));
}

TEST_CASE("spectral_decompose: degenerate spectrum clusters") {
    HermitianOperator h(ComplexMatrix::identity(2));
    auto eigs = spectral_decompose(h);
    REQUIRE(eigs.size() == 1);
    CHECK(eigs[0].value == doctest::Approx(1.0));
    CHECK(eigs[0].projection.rank() == 2);
}

TEST_CASE("spectral_decompose: pauli-x versus characteristic polynomial") {
    HermitianOperator h(ts::pauli_x());
    auto [lo, hi] = char_poly_eigenvalues_2x2(ts::pauli_x());
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(1.0));

    auto eigs = spectral_decompose(h);
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].value == doctest::Approx(lo).epsilon(1e-12));
    CHECK(eigs[1].value == doctest::Approx(hi).epsilon(1e-12));
    const ComplexMatrix minus = ts::ket_projector({1.0, -1.0});
    const ComplexMatrix plus = ts::ket_projector({1.0, 1.0});
    CHECK(approx_equal(eigs[0].projection.matrix(), minus, 1e-10));
    CHECK(approx_equal(eigs[1].projection.matrix(), plus, 1e-10));
}

TEST_CASE("spectral_decompose: reconstruction, orthogonality, invariance") {
    std::mt19937_64 rng(7101);
    for (std::size_t d = 2; d <= 8; ++d) {
        for (int rep = 0; rep < 8; ++rep) {
            HermitianOperator h = ts::random_hermitian(rng, d);
            auto eigs = spectral_decompose(h);

            ComplexMatrix sum_lp(d), sum_p(d);
            for (const auto& ep : eigs) {
                sum_lp += Complex{ep.value, 0.0} * ep.projection.matrix();
                sum_p += ep.projection.matrix();
            }
            CHECK(distance(sum_lp, h.matrix()) <= 1e-8 * h.matrix().frobenius_norm());
            CHECK(distance(sum_p, ComplexMatrix::identity(d)) <= 1e-9);

            for (std::size_t a = 0; a < eigs.size(); ++a) {
                CHECK(distance(h.matrix() * eigs[a].projection.matrix(),
                               eigs[a].projection.matrix() * h.matrix()) <= 1e-9);
                for (std::size_t b = a + 1; b < eigs.size(); ++b) {
                    CHECK((eigs[a].projection.matrix() * eigs[b].projection.matrix())
                              .frobenius_norm() <= 1e-9);
                }
                if (a > 0) CHECK(eigs[a].value > eigs[a - 1].value + 1e-8);
            }
        }
    }
}

TEST_CASE("spectral_decompose rejects non-hermitian input") {
    CHECK_THROWS_AS(HermitianOperator(mat(2, {0, 1, 0, 0})), NonHermitian);
}

TEST_CASE("unitary_exp: t = 0 is the identity") {
    std::mt19937_64 rng(7102);
    HermitianOperator h = ts::random_hermitian(rng, 3);
    UnitaryOperator u = unitary_exp(h, 0.0);
    CHECK(distance(u.matrix(), ComplexMatrix::identity(3)) <= 1e-12);
}

TEST_CASE("unitary_exp: pauli-z at t = pi gives -I") {
    UnitaryOperator u = unitary_exp(HermitianOperator(ts::pauli_z()), M_PI);
    CHECK(approx_equal(u.matrix(), Complex{-1.0, 0.0} * ComplexMatrix::identity(2), 1e-12));
}

TEST_CASE("unitary_exp: pauli-x at t = pi/2 gives i*sigma_x") {
    UnitaryOperator u = unitary_exp(HermitianOperator(ts::pauli_x()), M_PI / 2.0);
    CHECK(approx_equal(u.matrix(), Complex{0.0, 1.0} * ts::pauli_x(), 1e-12));
}

TEST_CASE("unitary_exp: group law and unitarity") {
    std::mt19937_64 rng(7103);
    std::uniform_real_distribution<double> time(-8.0, 8.0);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = 2 + rep % 3;
        HermitianOperator h = ts::random_hermitian(rng, d);
        const double s = time(rng), t = time(rng);
        UnitaryOperator us = unitary_exp(h, s);
        UnitaryOperator ut = unitary_exp(h, t);
        UnitaryOperator ust = unitary_exp(h, s + t);
        CHECK(distance(us.matrix() * ut.matrix(), ust.matrix()) <= 1e-9);
        CHECK(distance(us.matrix() * us.matrix().adjoint(),
                       ComplexMatrix::identity(d)) <= 1e-9);
    }
}

TEST_CASE("conjugate: identity, swap, rank preservation") {
    CHECK(approx_equal(conjugate(UnitaryOperator::identity(2), ts::pauli_x()),
                       ts::pauli_x(), 1e-12));
    CHECK(approx_equal(conjugate(UnitaryOperator(ts::pauli_x()), ts::diag({1, 0})),
                       ts::diag({0, 1}), 1e-12));

    std::mt19937_64 rng(7104);
    for (int rep = 0; rep < 10; ++rep) {
        UnitaryOperator u = ts::random_unitary(rng, 4);
        Projection p = ts::random_projection(rng, 4);
        Projection q = conjugate(u, p);
        CHECK(q.rank() == p.rank());
    }
}

TEST_CASE("conjugate is a *-automorphism") {
    std::mt19937_64 rng(7105);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t d = 3;
        UnitaryOperator u = ts::random_unitary(rng, d);
        ComplexMatrix a = ts::random_complex(rng, d);
        ComplexMatrix b = ts::random_complex(rng, d);
        CHECK(distance(conjugate(u, a * b), conjugate(u, a) * conjugate(u, b)) <= 1e-9);
        CHECK(distance(conjugate(u, a.adjoint()), conjugate(u, a).adjoint()) <= 1e-9);
        CHECK(std::abs((conjugate(u, a).trace() - a.trace()).real()) <= 1e-9);
    }
}

TEST_CASE("conjugate rejects mismatched dimensions") {
    CHECK_THROWS_AS(conjugate(UnitaryOperator::identity(2), ComplexMatrix(3)),
                    DimensionMismatch);
}

TEST_CASE("projection_leq: bounds, reflexivity, counterexample") {
    Projection p(ts::ket_projector({1.0, 1.0}));
    Projection e0(ts::diag({1, 0}));
    CHECK(projection_leq(p, p));
    CHECK(projection_leq(Projection::zero(2), p));
    CHECK(projection_leq(p, Projection::identity(2)));
    // || e0 p - p || = 1/sqrt(2), far from zero
    CHECK_FALSE(projection_leq(p, e0));
    CHECK(distance(e0.matrix() * p.matrix(), p.matrix()) ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("projection_leq is a partial order on random projection sets") {
    std::mt19937_64 rng(7106);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<Projection> ps;
        for (int i = 0; i < 6; ++i) ps.push_back(ts::random_projection(rng, 3));
        for (const auto& a : ps) CHECK(projection_leq(a, a));
        for (const auto& a : ps)
            for (const auto& b : ps) {
                if (projection_leq(a, b) && projection_leq(b, a))
                    CHECK(distance(a.matrix(), b.matrix()) <= 1e-9);
                for (const auto& c : ps)
                    if (projection_leq(a, b) && projection_leq(b, c))
                        CHECK(projection_leq(a, c));
            }
    }
}

TEST_CASE("projection_join covers both ranges") {
    std::mt19937_64 rng(7107);
    for (int rep = 0; rep < 10; ++rep) {
        Projection p = ts::random_projection(rng, 4);
        Projection q = ts::random_projection(rng, 4);
        Projection j = projection_join(p, q);
        CHECK(projection_leq(p, j));
        CHECK(projection_leq(q, j));
        CHECK(j.rank() <= p.rank() + q.rank());
    }
}

TEST_CASE("validated types reject malformed input") {
    CHECK_THROWS_AS(Projection(mat(2, {0.5, 0, 0, 0})), ValidationError);
    CHECK_THROWS_AS(UnitaryOperator(ts::diag({2, 1})), ValidationError);
    CHECK_THROWS_AS(DensityState(ts::diag({0.8, 0.8})), ValidationError);
    CHECK_THROWS_AS(DensityState(ts::diag({1.5, -0.5})), ValidationError);
    CHECK_THROWS_AS(ComplexMatrix(2, std::vector<Complex>(3)), ValidationError);
}

TEST_CASE("density states accept mixtures and pure states") {
    std::mt19937_64 rng(7108);
    for (int rep = 0; rep < 6; ++rep) {
        DensityState rho = ts::random_density(rng, 4);
        CHECK(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
    }
}
