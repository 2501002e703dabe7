#pragma once

namespace qtopos {

// Every numerical threshold used by the library, in one record so callers
// (and tests) can tighten or relax them coherently.
struct Tolerances {
    // operator validation: idempotency, unitarity, trace normalisation
    double validation = 1e-9;
    // hermiticity bound, scaled by dimension: ||M - M*|| <= hermitian * d
    double hermitian = 1e-10;
    // matrix comparison / refinement checks
    double comparison = 1e-8;
    // eigenvalue clustering: eigenvalues closer than this share an eigenprojection
    double cluster = 1e-8;
    // block overlap threshold for daseinisation, meets and restriction maps
    double overlap = 1e-9;
    // rounding grid for canonical context keys (entries rounded to this step)
    double id_grid = 1e-6;
    // slack absorbed when clamping probabilities into [0,1]
    double clamp = 1e-12;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace qtopos
