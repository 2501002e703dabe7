#pragma once

#include <random>

#include "qtopos/subobject.hpp"

namespace qtopos {

// A map from family members to [0,1], decreasing along refinement
// (coarser context, larger value).
class AntitoneFunction {
public:
    AntitoneFunction(FamilyPtr fam, std::vector<double> values);

    const FamilyPtr& family() const { return family_; }
    const std::vector<double>& values() const { return values_; }
    double at(std::size_t ctx) const { return values_[ctx]; }

    // largest increase along any order pair; 0 means genuinely antitone
    double antitone_violation() const;
    double min_value() const;
    std::vector<std::size_t> argmin(double slack = 1e-12) const;

private:
    FamilyPtr family_;
    std::vector<double> values_;
};

// A global section of the presheaf of classical probability measures: one
// probability vector over the blocks of each context, compatible under
// pushforward (a coarse block's weight is the sum over the fine blocks it
// dominates).
class CPGlobalSection {
public:
    struct Violations {
        double normalization = 0.0;  // max |sum - 1|
        double compatibility = 0.0;  // max pushforward defect over order pairs
        double max() const { return normalization > compatibility ? normalization : compatibility; }
    };

    static CPGlobalSection from_values(FamilyPtr fam,
                                       std::vector<std::vector<double>> values,
                                       const Tolerances& tol = default_tolerances());
    // no validation; for fixtures that are deliberately broken
    static CPGlobalSection unchecked(FamilyPtr fam,
                                     std::vector<std::vector<double>> values);

    const FamilyPtr& family() const { return family_; }
    const std::vector<std::vector<double>>& values() const { return values_; }
    double value(std::size_t ctx, std::size_t block) const { return values_[ctx][block]; }

    Violations check() const;

private:
    CPGlobalSection(FamilyPtr fam, std::vector<std::vector<double>> values)
        : family_(std::move(fam)), values_(std::move(values)) {}
    FamilyPtr family_;
    std::vector<std::vector<double>> values_;
};

// m_{rho;V}(block) = tr(rho * block); affine in rho.
CPGlobalSection section_from_state(const DensityState& rho, FamilyPtr fam,
                                   const Tolerances& tol = default_tolerances());

// state-proposition pairing: per context, the section's weight of the
// subobject's component. Antitone by construction for genuine sections.
AntitoneFunction pairing(const CPGlobalSection& m, const ClopenSubobject& s);

struct MeasureAxiomsReport {
    double normalization = 0.0;  // max |mu(top)(V) - 1|
    double modularity = 0.0;     // max |mu(S)+mu(T)-mu(SvT)-mu(S^T)| stagewise
    double max() const { return normalization > modularity ? normalization : modularity; }
};

// Checks the two probability-measure axioms over a subobject sample; with an
// empty sample, a deterministic seeded one is generated from the family.
MeasureAxiomsReport measure_axioms_check(
    const CPGlobalSection& m,
    std::vector<std::pair<ClopenSubobject, ClopenSubobject>> sample = {},
    std::uint64_t seed = 2718);

// deterministic random subobject (downward-closure of a random selection)
ClopenSubobject random_subobject(FamilyPtr fam, std::mt19937_64& rng);

// The finitely additive measure on all projections that occur as block sums
// in the family, with cross-context well-definedness enforced.
class ProjectionFAPM {
public:
    struct Entry {
        Projection projection;
        double value;
    };
    explicit ProjectionFAPM(std::vector<Entry> entries) : entries_(std::move(entries)) {}
    const std::vector<Entry>& entries() const { return entries_; }
    std::optional<double> lookup(const Projection& p,
                                 const Tolerances& tol = default_tolerances()) const;

private:
    std::vector<Entry> entries_;
};

// Throws WellDefinednessViolation when two contexts give the same projection
// different weights beyond tol.validation (i.e. the input is not a section).
ProjectionFAPM projection_fapm(const CPGlobalSection& m,
                               const Tolerances& tol = default_tolerances());

// min over contexts of the pairing of rho's section with the outer
// daseinisation of p; equals tr(rho p), attained in any context containing p.
double born_probability(const DensityState& rho, const Projection& p, FamilyPtr fam,
                        const Tolerances& tol = default_tolerances());

// A probability measure on clopen subobjects, realised by a section.
class PresheafMeasure {
public:
    explicit PresheafMeasure(CPGlobalSection section) : section_(std::move(section)) {}
    const CPGlobalSection& section() const { return section_; }
    AntitoneFunction operator()(const ClopenSubobject& s) const {
        return pairing(section_, s);
    }

private:
    CPGlobalSection section_;
};

PresheafMeasure measure_from_section(const CPGlobalSection& m);
// inverse: evaluate the measure on single-block subobjects completed minimally
CPGlobalSection section_from_measure(const PresheafMeasure& mu, FamilyPtr fam,
                                     const Tolerances& tol = default_tolerances());

}  // namespace qtopos
