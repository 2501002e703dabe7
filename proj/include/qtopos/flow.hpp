#pragma once

#include <map>
#include <string>

#include "qtopos/measure.hpp"

namespace qtopos {

// The image of a closed family under conjugation by a unitary, with the
// context and block correspondences. Conjugation preserves meets and the
// order, so the image is closed again.
struct FamilyConjugation {
    FamilyPtr source;
    FamilyPtr image;
    std::vector<std::size_t> context_image;             // source index -> image index
    std::vector<std::vector<std::size_t>> block_image;  // per source context
};

FamilyConjugation conjugate_family(const UnitaryOperator& u, FamilyPtr fam,
                                   const Tolerances& tol = default_tolerances());

// Action of a unitary on clopen subobjects: the component projection of the
// result at V is U P U* where P is the input's component projection at the
// conjugated context U*VU. The result lives on the conjugated family.
ClopenSubobject act_on_subobject(const UnitaryOperator& u, const ClopenSubobject& s,
                                 const Tolerances& tol = default_tolerances());

// An automorphism of the spectral presheaf induced by a unitary: the base map
// transports contexts, act() is the induced map on clopen subobjects.
class SpectralAutomorphism {
public:
    explicit SpectralAutomorphism(UnitaryOperator u) : u_(std::move(u)) {}
    const UnitaryOperator& unitary() const { return u_; }
    Context base_map(const Context& v, const Tolerances& tol = default_tolerances()) const {
        return conjugate_context(u_, v, tol);
    }
    ClopenSubobject act(const ClopenSubobject& s,
                        const Tolerances& tol = default_tolerances()) const {
        return act_on_subobject(u_, s, tol);
    }
    SpectralAutomorphism inverse() const { return SpectralAutomorphism(u_.adjoint()); }

private:
    UnitaryOperator u_;
};

// One-parameter unitary group t -> exp(itH) and the flows it induces.
class UnitaryFlow {
public:
    explicit UnitaryFlow(HermitianOperator h, const Tolerances& tol = default_tolerances())
        : h_(std::move(h)), tol_(tol) {}
    const HermitianOperator& hamiltonian() const { return h_; }
    UnitaryOperator at(double t) const { return unitary_exp(h_, t, tol_); }

private:
    HermitianOperator h_;
    Tolerances tol_;
};

// Heisenberg picture: propositions move, states stay. Evolving a daseinised
// projection agrees with daseinising the conjugated projection U_{-t} P U_t.
ClopenSubobject heisenberg_evolve(const UnitaryFlow& flow, double t,
                                  const ClopenSubobject& s0,
                                  const Tolerances& tol = default_tolerances());

// Schroedinger picture on states and on CP sections.
DensityState schrodinger_evolve_state(const UnitaryFlow& flow, double t,
                                      const DensityState& rho0,
                                      const Tolerances& tol = default_tolerances());
CPGlobalSection schrodinger_evolve_section(const UnitaryFlow& flow, double t,
                                           const CPGlobalSection& m,
                                           const Tolerances& tol = default_tolerances());

// Base family together with its conjugates at the requested times, merged
// into one closed family; images record where each base context moves.
struct TransportedFamily {
    FamilyPtr base;
    FamilyPtr extended;
    // time tag -> (base context index -> extended family index of the image)
    std::map<std::string, std::vector<std::size_t>> images;

    static std::string time_tag(double t);
};

TransportedFamily transport(const UnitaryFlow& flow, const std::vector<double>& times,
                            FamilyPtr base, const Tolerances& tol = default_tolerances());

// Per-context comparison of a two-sided identity; `image_context` indexes the
// conjugated family the right-hand side lives on.
struct CheckReport {
    struct Row {
        std::size_t base_context;
        std::size_t image_context;
        double lhs;
        double rhs;
        double discrepancy;
    };
    std::vector<Row> rows;
    double max_discrepancy = 0.0;
    bool passed(double bound) const { return max_discrepancy <= bound; }
};

// (m_{rho_t}(S_0))_V versus (m_{rho_0}(S_t)) at the context U_{-t} V U_t.
CheckReport check_compatibility(const DensityState& rho0, const ClopenSubobject& s0,
                                const UnitaryFlow& flow, double t,
                                const Tolerances& tol = default_tolerances());

// (m_{rho_0}(S_0))_V versus (m_{rho_t}(S_{-t})) at the context U_t V U_{-t}.
CheckReport check_covariance(const DensityState& rho0, const ClopenSubobject& s0,
                             const UnitaryFlow& flow, double t,
                             const Tolerances& tol = default_tolerances());

// Block-exact comparison of the evolved daseinisation with the daseinised
// evolved projection, context by context on the conjugated family.
struct FlowIdentityReport {
    struct Row {
        std::size_t image_context;
        BlockMask evolved;
        BlockMask daseinised;
    };
    std::vector<Row> rows;
    bool all_match = true;
};

FlowIdentityReport check_delta_flow(const Projection& p0, const UnitaryFlow& flow,
                                    double t, FamilyPtr fam,
                                    const Tolerances& tol = default_tolerances());

}  // namespace qtopos
