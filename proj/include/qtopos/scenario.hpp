#pragma once

#include <optional>
#include <string>

#include "qtopos/flow.hpp"

namespace qtopos {

// A self-contained experiment description, loaded from a single versioned
// JSON document. Matrix entries use the shared literal format: two-element
// [re, im] arrays, row-major.
struct Proposition {
    std::string name;
    std::string observable;
    double lo = 0.0;
    double hi = 0.0;
};

struct Scenario {
    std::size_t dimension = 0;
    std::map<std::string, HermitianOperator> observables;
    std::optional<std::string> hamiltonian;
    std::optional<DensityState> state;
    std::vector<Proposition> propositions;
    std::vector<std::vector<std::string>> context_seeds;
    // bases of pairwise orthogonal vectors, normalised at load; each basis
    // seeds one context of rank-1 blocks
    std::vector<std::vector<std::vector<Complex>>> vector_contexts;
    std::vector<double> times{0.0};
    // raw per-context probability vectors, validated only structurally
    std::optional<std::vector<std::vector<double>>> section_fixture;

    const Proposition& select_proposition(const std::string& name) const;
    UnitaryFlow flow(const Tolerances& tol = default_tolerances()) const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

FamilyPtr build_family(const Scenario& sc, const Tolerances& tol = default_tolerances());

// spectral projection of the named observable onto the closed window
// [lo - tol.overlap, hi + tol.overlap]; empty windows give the zero projection
Projection window_projection(const Scenario& sc, const Proposition& prop,
                             const Tolerances& tol = default_tolerances());

// Matrix literal text: row-major nested arrays of [re, im] pairs, written at
// 17 significant digits so values survive the round-trip exactly.
std::string matrix_literal(const ComplexMatrix& m);
ComplexMatrix matrix_from_literal(const std::string& text);

// fixed 12-significant-digit formatting used for all CSV output
std::string format_value(double x);
// FNV-1a hash of a byte string, for input digests in run reports
std::string fnv1a_hex(const std::string& bytes);

// Hasse diagram of the family (covering edges only), standard digraph text.
std::string family_dot(const ContextFamily& fam);
// context table: index, block count, ranks
std::string family_csv(const ContextFamily& fam);
// explicit order pairs (coarse, fine)
std::string order_csv(const ContextFamily& fam);

}  // namespace qtopos
