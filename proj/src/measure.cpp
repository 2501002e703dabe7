#include "qtopos/measure.hpp"

#include <algorithm>
#include <cmath>

namespace qtopos {

AntitoneFunction::AntitoneFunction(FamilyPtr fam, std::vector<double> values)
    : family_(std::move(fam)), values_(std::move(values)) {
    if (values_.size() != family_->size())
        throw FamilyMismatch("antitone function does not match the family");
}

double AntitoneFunction::antitone_violation() const {
    double v = 0.0;
    for (const auto& [coarse, fine] : family_->order_pairs())
        v = std::max(v, values_[fine] - values_[coarse]);
    return v;
}

double AntitoneFunction::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

std::vector<std::size_t> AntitoneFunction::argmin(double slack) const {
    const double m = min_value();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] <= m + slack) out.push_back(i);
    return out;
}

namespace {

double clamp_probability(double x, const Tolerances& tol) {
    if (x < -tol.validation || x > 1.0 + tol.validation)
        throw ValidationError("probability escapes [0,1] beyond tolerance");
    if (std::abs(x) <= tol.clamp) return 0.0;
    if (std::abs(x - 1.0) <= tol.clamp) return 1.0;
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

CPGlobalSection CPGlobalSection::from_values(FamilyPtr fam,
                                             std::vector<std::vector<double>> values,
                                             const Tolerances& tol) {
    if (values.size() != fam->size())
        throw FamilyMismatch("section values do not match the family");
    for (std::size_t i = 0; i < fam->size(); ++i)
        if (values[i].size() != fam->at(i).block_count())
            throw FamilyMismatch("section vector does not match the block count");
    CPGlobalSection m(std::move(fam), std::move(values));
    const Violations v = m.check();
    if (v.max() > tol.validation)
        throw ValidationError("values do not form a global section of CP");
    return m;
}

CPGlobalSection CPGlobalSection::unchecked(FamilyPtr fam,
                                           std::vector<std::vector<double>> values) {
    return CPGlobalSection(std::move(fam), std::move(values));
}

CPGlobalSection::Violations CPGlobalSection::check() const {
    Violations v;
    for (std::size_t i = 0; i < family_->size(); ++i) {
        double sum = 0.0;
        for (double x : values_[i]) sum += x;
        v.normalization = std::max(v.normalization, std::abs(sum - 1.0));
    }
    for (const auto& [coarse, fine] : family_->order_pairs()) {
        const std::size_t nb = family_->at(coarse).block_count();
        std::vector<double> pushed(nb, 0.0);
        for (std::size_t k = 0; k < family_->at(fine).block_count(); ++k)
            pushed[family_->restrict_block(fine, coarse, k)] += values_[fine][k];
        for (std::size_t q = 0; q < nb; ++q)
            v.compatibility =
                std::max(v.compatibility, std::abs(pushed[q] - values_[coarse][q]));
    }
    return v;
}

CPGlobalSection section_from_state(const DensityState& rho, FamilyPtr fam,
                                   const Tolerances& tol) {
    if (rho.dim() != fam->dim())
        throw DimensionMismatch("section_from_state: dimensions differ");
    std::vector<std::vector<double>> values(fam->size());
    for (std::size_t i = 0; i < fam->size(); ++i) {
        const Context& v = fam->at(i);
        values[i].resize(v.block_count());
        for (std::size_t k = 0; k < v.block_count(); ++k)
            values[i][k] =
                clamp_probability((rho.matrix() * v.block(k).matrix()).trace().real(), tol);
    }
    return CPGlobalSection::from_values(std::move(fam), std::move(values), tol);
}

AntitoneFunction pairing(const CPGlobalSection& m, const ClopenSubobject& s) {
    if (!m.family()->same_contexts(*s.family()))
        throw FamilyMismatch("pairing: section and subobject live on different families");
    std::vector<double> values(m.family()->size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t k : mask_to_indices(s.component(i))) values[i] += m.value(i, k);
    return AntitoneFunction(m.family(), std::move(values));
}

ClopenSubobject random_subobject(FamilyPtr fam, std::mt19937_64& rng) {
    std::vector<BlockMask> comps(fam->size());
    for (std::size_t i = 0; i < fam->size(); ++i) {
        std::uniform_int_distribution<BlockMask> mask(
            0, (BlockMask{1} << fam->at(i).block_count()) - 1u);
        comps[i] = mask(rng);
    }
    return smallest_subobject_containing(std::move(fam), std::move(comps));
}

MeasureAxiomsReport measure_axioms_check(
    const CPGlobalSection& m, std::vector<std::pair<ClopenSubobject, ClopenSubobject>> sample,
    std::uint64_t seed) {
    MeasureAxiomsReport rep;
    const FamilyPtr& fam = m.family();

    const AntitoneFunction one = pairing(m, ClopenSubobject::top(fam));
    for (double x : one.values())
        rep.normalization = std::max(rep.normalization, std::abs(x - 1.0));

    if (sample.empty()) {
        std::mt19937_64 rng(seed);
        for (int k = 0; k < 20; ++k)
            sample.emplace_back(random_subobject(fam, rng), random_subobject(fam, rng));
    }
    for (const auto& [s, t] : sample) {
        const AntitoneFunction ls = pairing(m, s);
        const AntitoneFunction lt = pairing(m, t);
        const AntitoneFunction lj = pairing(m, sub_join(s, t));
        const AntitoneFunction lm = pairing(m, sub_meet(s, t));
        for (std::size_t i = 0; i < fam->size(); ++i)
            rep.modularity = std::max(
                rep.modularity, std::abs(ls.at(i) + lt.at(i) - lj.at(i) - lm.at(i)));
    }
    return rep;
}

std::optional<double> ProjectionFAPM::lookup(const Projection& p,
                                             const Tolerances& tol) const {
    for (const Entry& e : entries_)
        if (e.projection.dim() == p.dim() &&
            distance(e.projection.matrix(), p.matrix()) <= tol.comparison)
            return e.value;
    return std::nullopt;
}

ProjectionFAPM projection_fapm(const CPGlobalSection& m, const Tolerances& tol) {
    std::vector<ProjectionFAPM::Entry> entries;
    const FamilyPtr& fam = m.family();
    for (std::size_t i = 0; i < fam->size(); ++i) {
        const Context& v = fam->at(i);
        const BlockMask full = (BlockMask{1} << v.block_count()) - 1u;
        for (BlockMask sel = 0; sel <= full; ++sel) {
            double value = 0.0;
            for (std::size_t k : mask_to_indices(sel)) value += m.value(i, k);
            const Projection p = alpha(v, sel);
            bool fresh = true;
            for (const ProjectionFAPM::Entry& e : entries) {
                if (distance(e.projection.matrix(), p.matrix()) <= tol.comparison) {
                    if (std::abs(e.value - value) > tol.validation)
                        throw WellDefinednessViolation(
                            "projection weight differs between contexts");
                    fresh = false;
                    break;
                }
            }
            if (fresh) entries.push_back({p, value});
        }
    }
    return ProjectionFAPM(std::move(entries));
}

double born_probability(const DensityState& rho, const Projection& p, FamilyPtr fam,
                        const Tolerances& tol) {
    if (rho.dim() != fam->dim() || p.dim() != fam->dim())
        throw DimensionMismatch("born_probability: dimensions differ");
    bool contained = false;
    for (std::size_t i = 0; i < fam->size() && !contained; ++i) {
        try {
            alpha_inv(fam->at(i), p, tol);
            contained = true;
        } catch (const NotInContext&) {
        }
    }
    if (!contained)
        throw MissingContext("born_probability: no family member contains the projection");
    const AntitoneFunction a =
        pairing(section_from_state(rho, fam, tol), outer_daseinisation(p, fam, tol));
    return a.min_value();
}

PresheafMeasure measure_from_section(const CPGlobalSection& m) {
    return PresheafMeasure(m);
}

CPGlobalSection section_from_measure(const PresheafMeasure& mu, FamilyPtr fam,
                                     const Tolerances& tol) {
    if (!mu.section().family()->same_contexts(*fam))
        throw FamilyMismatch("section_from_measure: family differs from the measure's");
    std::vector<std::vector<double>> values(fam->size());
    for (std::size_t i = 0; i < fam->size(); ++i) {
        const std::size_t nb = fam->at(i).block_count();
        values[i].resize(nb);
        for (std::size_t k = 0; k < nb; ++k) {
            // evaluate on a subobject whose component at this context is the
            // single block; the minimal completion prescribes exactly that
            std::vector<BlockMask> comps(fam->size(), 0u);
            comps[i] = BlockMask{1} << k;
            const ClopenSubobject s = smallest_subobject_containing(fam, comps);
            values[i][k] = mu(s).at(i);
        }
    }
    return CPGlobalSection::from_values(std::move(fam), std::move(values), tol);
}

}  // namespace qtopos
