#pragma once

// Shared helpers for the test suites: deterministic random operators and a
// few frequently used fixed matrices.

#include <random>
#include <vector>

#include "qtopos/matrix.hpp"

namespace ts {

using qtopos::Complex;
using qtopos::ComplexMatrix;

inline ComplexMatrix mat(std::size_t d, std::initializer_list<Complex> entries) {
    return ComplexMatrix(d, std::vector<Complex>(entries));
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
    ComplexMatrix m(values.size());
    std::size_t i = 0;
    for (double v : values) m.at(i, i) = v, ++i;
    return m;
}

inline ComplexMatrix pauli_x() { return mat(2, {0, 1, 1, 0}); }
inline ComplexMatrix pauli_y() {
    return mat(2, {0, Complex{0, -1}, Complex{0, 1}, 0});
}
inline ComplexMatrix pauli_z() { return mat(2, {1, 0, 0, -1}); }

// |v><v| / <v|v>
inline ComplexMatrix ket_projector(const std::vector<Complex>& v) {
    const std::size_t d = v.size();
    double n2 = 0.0;
    for (const Complex& z : v) n2 += std::norm(z);
    ComplexMatrix p(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p.at(i, j) = v[i] * std::conj(v[j]) / n2;
    return p;
}

inline ComplexMatrix random_complex(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m.at(i, j) = Complex{g(rng), g(rng)};
    return m;
}

inline qtopos::HermitianOperator random_hermitian(std::mt19937_64& rng, std::size_t d) {
    ComplexMatrix g = random_complex(rng, d);
    ComplexMatrix h(d);
    const ComplexMatrix ga = g.adjoint();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) h.at(i, j) = 0.5 * (g.at(i, j) + ga.at(i, j));
    return qtopos::HermitianOperator(std::move(h));
}

// Gram-Schmidt on a random complex matrix; independent of unitary_exp.
inline qtopos::UnitaryOperator random_unitary(std::mt19937_64& rng, std::size_t d) {
    ComplexMatrix g = random_complex(rng, d);
    std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(d));
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < d; ++i) cols[c][i] = g.at(i, c);
        for (std::size_t p = 0; p < c; ++p) {
            Complex ip{0, 0};
            for (std::size_t i = 0; i < d; ++i) ip += std::conj(cols[p][i]) * cols[c][i];
            for (std::size_t i = 0; i < d; ++i) cols[c][i] -= ip * cols[p][i];
        }
        double n2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) n2 += std::norm(cols[c][i]);
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < d; ++i) cols[c][i] *= inv;
    }
    ComplexMatrix u(d);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t i = 0; i < d; ++i) u.at(i, c) = cols[c][i];
    return qtopos::UnitaryOperator(std::move(u));
}

inline qtopos::DensityState random_density(std::mt19937_64& rng, std::size_t d) {
    ComplexMatrix g = random_complex(rng, d);
    ComplexMatrix m = g * g.adjoint();
    const double tr = m.trace().real();
    ComplexMatrix rho(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            rho.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i))) / tr;
    return qtopos::DensityState(std::move(rho));
}

// random sum of eigenprojections of a random hermitian (possibly 0 or I)
inline qtopos::Projection random_projection(std::mt19937_64& rng, std::size_t d) {
    const auto eigs = qtopos::spectral_decompose(random_hermitian(rng, d));
    std::uniform_int_distribution<int> coin(0, 1);
    ComplexMatrix p(d);
    for (const auto& ep : eigs)
        if (coin(rng)) p += ep.projection.matrix();
    return qtopos::Projection(std::move(p));
}

// random non-scalar projection (rank in [1, d-1])
inline qtopos::Projection random_proper_projection(std::mt19937_64& rng, std::size_t d) {
    for (;;) {
        qtopos::Projection p = random_projection(rng, d);
        if (p.rank() >= 1 && p.rank() < d) return p;
    }
}

}  // namespace ts
