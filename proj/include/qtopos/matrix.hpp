#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qtopos/errors.hpp"
#include "qtopos/tolerances.hpp"

namespace qtopos {

using Complex = std::complex<double>;

// Dense row-major complex square matrix. Dimensions stay small (a few to ~16),
// so every kernel is a plain O(d^3) loop; no attempt at sparsity or blocking.
class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t dim)
        : dim_(dim), a_(dim * dim, Complex{0.0, 0.0}) {}
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    Complex& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    const std::vector<Complex>& entries() const { return a_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_;
    std::vector<Complex> a_;
};

// Frobenius distance ||a - b||.
double distance(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

// Validated operator types. Construction throws if the defining bound fails;
// afterwards values are immutable and safe to share across threads.

class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m,
                               const Tolerances& tol = default_tolerances());
    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }

private:
    ComplexMatrix m_;
};

class Projection {
public:
    explicit Projection(ComplexMatrix m, const Tolerances& tol = default_tolerances());
    static Projection zero(std::size_t dim);
    static Projection identity(std::size_t dim);

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }
    std::size_t rank() const { return rank_; }

private:
    ComplexMatrix m_;
    std::size_t rank_;
};

class UnitaryOperator {
public:
    explicit UnitaryOperator(ComplexMatrix m,
                             const Tolerances& tol = default_tolerances());
    static UnitaryOperator identity(std::size_t dim);

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }
    UnitaryOperator adjoint() const;

private:
    ComplexMatrix m_;
};

class DensityState {
public:
    explicit DensityState(ComplexMatrix m, const Tolerances& tol = default_tolerances());

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }

private:
    ComplexMatrix m_;
};

// Low-level cyclic-Jacobi eigensolver for Hermitian input (the matrix is
// symmetrised internally). Eigenvalues come back ascending, eigenvectors as
// the matching columns of `vectors`.
void jacobi_eigh(const ComplexMatrix& m, std::vector<double>& values,
                 ComplexMatrix& vectors);

struct Eigenpair {
    double value;
    Projection projection;
};

// Spectral decomposition with eigenvalue clustering: eigenvalues closer than
// tol.cluster are merged into a single eigenprojection, so the list is
// strictly increasing and the projections resolve the identity.
std::vector<Eigenpair> spectral_decompose(const HermitianOperator& h,
                                          const Tolerances& tol = default_tolerances());

// exp(i t H), assembled from the spectral decomposition of H so the
// one-parameter group law holds by construction.
UnitaryOperator unitary_exp(const HermitianOperator& h, double t,
                            const Tolerances& tol = default_tolerances());

// U A U*
ComplexMatrix conjugate(const UnitaryOperator& u, const ComplexMatrix& a);
Projection conjugate(const UnitaryOperator& u, const Projection& p,
                     const Tolerances& tol = default_tolerances());
DensityState conjugate(const UnitaryOperator& u, const DensityState& rho,
                       const Tolerances& tol = default_tolerances());

// range(p) contained in range(q), decided by ||q p - p|| <= tol.overlap.
bool projection_leq(const Projection& p, const Projection& q,
                    const Tolerances& tol = default_tolerances());

Projection projection_complement(const Projection& p,
                                 const Tolerances& tol = default_tolerances());
// projection onto range(p) + range(q)
Projection projection_join(const Projection& p, const Projection& q,
                           const Tolerances& tol = default_tolerances());
// projection onto the range of a positive semidefinite matrix
Projection support_projection(const ComplexMatrix& psd,
                              const Tolerances& tol = default_tolerances());

}  // namespace qtopos
