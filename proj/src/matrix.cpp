#include "qtopos/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qtopos {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != dim_ * dim_)
        throw ValidationError("matrix entry count does not match dimension");
    if (!all_finite())
        throw ValidationError("matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

Complex ComplexMatrix::trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw DimensionMismatch("matrix addition: dimensions differ");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw DimensionMismatch("matrix subtraction: dimensions differ");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (Complex& z : a_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("matrix product: dimensions differ");
    const std::size_t d = a.dim();
    ComplexMatrix r(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const Complex aik = a.at(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < d; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("distance: dimensions differ");
    double s = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        s += std::norm(a.entries()[k] - b.entries()[k]);
    return std::sqrt(s);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return distance(a, b) <= tol;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
    return distance(a * b, b * a);
}

namespace {

ComplexMatrix hermitize(const ComplexMatrix& m) {
    ComplexMatrix h = m;
    const ComplexMatrix adj = m.adjoint();
    for (std::size_t k = 0; k < h.entries().size(); ++k) {
        const std::size_t i = k / m.dim(), j = k % m.dim();
        h.at(i, j) = 0.5 * (m.at(i, j) + adj.at(i, j));
    }
    return h;
}

double hermiticity_defect(const ComplexMatrix& m) {
    return distance(m, m.adjoint());
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m, const Tolerances& tol)
    : m_(std::move(m)) {
    if (!m_.all_finite()) throw ValidationError("hermitian operator: non-finite entries");
    if (hermiticity_defect(m_) > tol.hermitian * static_cast<double>(m_.dim()))
        throw NonHermitian("operator is not hermitian within tolerance");
}

Projection::Projection(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (!m_.all_finite()) throw ValidationError("projection: non-finite entries");
    if (hermiticity_defect(m_) > tol.hermitian * static_cast<double>(m_.dim()))
        throw NonHermitian("projection is not hermitian within tolerance");
    if (distance(m_ * m_, m_) > tol.validation)
        throw ValidationError("projection is not idempotent within tolerance");
    const double tr = m_.trace().real();
    const double r = std::round(tr);
    if (std::abs(tr - r) > tol.validation || r < 0.0)
        throw ValidationError("projection trace is not a non-negative integer");
    rank_ = static_cast<std::size_t>(r);
}

Projection Projection::zero(std::size_t dim) { return Projection(ComplexMatrix(dim)); }

Projection Projection::identity(std::size_t dim) {
    return Projection(ComplexMatrix::identity(dim));
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m, const Tolerances& tol)
    : m_(std::move(m)) {
    if (!m_.all_finite()) throw ValidationError("unitary: non-finite entries");
    if (distance(m_ * m_.adjoint(), ComplexMatrix::identity(m_.dim())) > tol.validation)
        throw ValidationError("operator is not unitary within tolerance");
}

UnitaryOperator UnitaryOperator::identity(std::size_t dim) {
    return UnitaryOperator(ComplexMatrix::identity(dim));
}

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(m_.adjoint()); }

DensityState::DensityState(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (!m_.all_finite()) throw ValidationError("density state: non-finite entries");
    if (hermiticity_defect(m_) > tol.hermitian * static_cast<double>(m_.dim()))
        throw NonHermitian("density state is not hermitian within tolerance");
    if (std::abs(m_.trace().real() - 1.0) > tol.validation ||
        std::abs(m_.trace().imag()) > tol.validation)
        throw ValidationError("density state trace differs from 1");
    std::vector<double> w;
    ComplexMatrix v(m_.dim());
    jacobi_eigh(m_, w, v);
    if (!w.empty() && w.front() < -1e-10)
        throw ValidationError("density state has a negative eigenvalue");
}

// Cyclic Jacobi sweeps with complex plane rotations. Each rotation zeroes one
// off-diagonal pair; convergence at these sizes takes a handful of sweeps.
void jacobi_eigh(const ComplexMatrix& m, std::vector<double>& values,
                 ComplexMatrix& vectors) {
    const std::size_t d = m.dim();
    ComplexMatrix a = hermitize(m);
    vectors = ComplexMatrix::identity(d);
    values.assign(d, 0.0);
    if (d == 0) return;

    const double scale = std::max(a.frobenius_norm(), 1.0);
    const double stop = 1e-15 * scale;
    const int max_sweeps = 80;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) off += std::norm(a.at(i, j));
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const Complex apq = a.at(p, q);
                const double r = std::abs(apq);
                if (r <= stop / static_cast<double>(d * d)) continue;

                // Factor out the phase so the 2x2 block becomes real symmetric,
                // then pick the classical rotation angle.
                const Complex phase = apq / r;  // e^{i theta}
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;  // avoid overflow in theta^2
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex ph_conj = std::conj(phase);

                // columns: A <- A G, with G(p,p)=c, G(p,q)=s,
                // G(q,p)=-s*conj(phase), G(q,q)=c*conj(phase)
                for (std::size_t i = 0; i < d; ++i) {
                    const Complex aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * ph_conj * aiq;
                    a.at(i, q) = s * aip + c * ph_conj * aiq;
                }
                // rows: A <- G* A
                for (std::size_t j = 0; j < d; ++j) {
                    const Complex apj = a.at(p, j), aqj = a.at(q, j);
                    a.at(p, j) = c * apj - s * phase * aqj;
                    a.at(q, j) = s * apj + c * phase * aqj;
                }
                // accumulate eigenvectors: V <- V G
                for (std::size_t i = 0; i < d; ++i) {
                    const Complex vip = vectors.at(i, p), viq = vectors.at(i, q);
                    vectors.at(i, p) = c * vip - s * ph_conj * viq;
                    vectors.at(i, q) = s * vip + c * ph_conj * viq;
                }
            }
        }
    }

    for (std::size_t i = 0; i < d; ++i) values[i] = a.at(i, i).real();

    // sort ascending, permuting eigenvector columns along
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
    std::vector<double> w(d);
    ComplexMatrix v(d);
    for (std::size_t k = 0; k < d; ++k) {
        w[k] = values[perm[k]];
        for (std::size_t i = 0; i < d; ++i) v.at(i, k) = vectors.at(i, perm[k]);
    }
    values = std::move(w);
    vectors = std::move(v);
}

std::vector<Eigenpair> spectral_decompose(const HermitianOperator& h,
                                          const Tolerances& tol) {
    const std::size_t d = h.dim();
    std::vector<double> w;
    ComplexMatrix v(d);
    jacobi_eigh(h.matrix(), w, v);

    std::vector<Eigenpair> out;
    std::size_t k = 0;
    while (k < d) {
        std::size_t e = k + 1;
        while (e < d && w[e] - w[e - 1] <= tol.cluster) ++e;

        ComplexMatrix p(d);
        double sum = 0.0;
        for (std::size_t c = k; c < e; ++c) {
            sum += w[c];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    p.at(i, j) += v.at(i, c) * std::conj(v.at(j, c));
        }
        out.push_back(Eigenpair{sum / static_cast<double>(e - k),
                                Projection(hermitize(p), tol)});
        k = e;
    }
    return out;
}

UnitaryOperator unitary_exp(const HermitianOperator& h, double t, const Tolerances& tol) {
    const std::size_t d = h.dim();
    ComplexMatrix u(d);
    for (const Eigenpair& ep : spectral_decompose(h, tol)) {
        const Complex phase = std::exp(Complex{0.0, t * ep.value});
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                u.at(i, j) += phase * ep.projection.matrix().at(i, j);
    }
    return UnitaryOperator(std::move(u), tol);
}

ComplexMatrix conjugate(const UnitaryOperator& u, const ComplexMatrix& a) {
    if (u.dim() != a.dim()) throw DimensionMismatch("conjugate: dimensions differ");
    return u.matrix() * a * u.matrix().adjoint();
}

Projection conjugate(const UnitaryOperator& u, const Projection& p, const Tolerances& tol) {
    return Projection(hermitize(conjugate(u, p.matrix())), tol);
}

DensityState conjugate(const UnitaryOperator& u, const DensityState& rho,
                       const Tolerances& tol) {
    return DensityState(hermitize(conjugate(u, rho.matrix())), tol);
}

bool projection_leq(const Projection& p, const Projection& q, const Tolerances& tol) {
    if (p.dim() != q.dim()) throw DimensionMismatch("projection_leq: dimensions differ");
    return distance(q.matrix() * p.matrix(), p.matrix()) <= tol.overlap;
}

Projection projection_complement(const Projection& p, const Tolerances& tol) {
    ComplexMatrix c = ComplexMatrix::identity(p.dim());
    c -= p.matrix();
    return Projection(std::move(c), tol);
}

Projection support_projection(const ComplexMatrix& psd, const Tolerances& tol) {
    std::vector<double> w;
    ComplexMatrix v(psd.dim());
    jacobi_eigh(psd, w, v);
    const std::size_t d = psd.dim();
    ComplexMatrix p(d);
    for (std::size_t c = 0; c < d; ++c) {
        if (w[c] <= tol.overlap) continue;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) p.at(i, j) += v.at(i, c) * std::conj(v.at(j, c));
    }
    return Projection(hermitize(p), tol);
}

Projection projection_join(const Projection& p, const Projection& q, const Tolerances& tol) {
    if (p.dim() != q.dim()) throw DimensionMismatch("projection_join: dimensions differ");
    return support_projection(p.matrix() + q.matrix(), tol);
}

}  // namespace qtopos
