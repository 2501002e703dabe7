#include "qtopos/flow.hpp"

#include <cmath>
#include <cstdio>

namespace qtopos {

FamilyConjugation conjugate_family(const UnitaryOperator& u, FamilyPtr fam,
                                   const Tolerances& tol) {
    if (u.dim() != fam->dim())
        throw DimensionMismatch("conjugate_family: dimensions differ");
    FamilyConjugation out;
    out.source = fam;

    std::vector<Context> images;
    images.reserve(fam->size());
    for (std::size_t i = 0; i < fam->size(); ++i)
        images.push_back(conjugate_context(u, fam->at(i), tol));
    out.image = ContextFamily::close(images, tol);
    if (out.image->size() != fam->size())
        throw ValidationError("conjugated family closure changed size");

    out.context_image.resize(fam->size());
    out.block_image.resize(fam->size());
    for (std::size_t i = 0; i < fam->size(); ++i) {
        const auto idx = out.image->find(images[i].id());
        if (!idx) throw ValidationError("conjugated context lost during closure");
        out.context_image[i] = *idx;
        const Context& src = fam->at(i);
        const Context& img = out.image->at(*idx);
        out.block_image[i].resize(src.block_count());
        for (std::size_t k = 0; k < src.block_count(); ++k) {
            const Projection moved = conjugate(u, src.block(k), tol);
            bool found = false;
            for (std::size_t q = 0; q < img.block_count(); ++q)
                if (distance(img.block(q).matrix(), moved.matrix()) <= tol.comparison) {
                    out.block_image[i][k] = q;
                    found = true;
                    break;
                }
            if (!found) throw ValidationError("conjugated block not found in image context");
        }
    }
    return out;
}

ClopenSubobject act_on_subobject(const UnitaryOperator& u, const ClopenSubobject& s,
                                 const Tolerances& tol) {
    const FamilyConjugation cj = conjugate_family(u, s.family(), tol);
    std::vector<BlockMask> comps(cj.image->size(), 0u);
    for (std::size_t i = 0; i < s.family()->size(); ++i)
        for (std::size_t k : mask_to_indices(s.component(i)))
            comps[cj.context_image[i]] |= (BlockMask{1} << cj.block_image[i][k]);
    return ClopenSubobject::from_components(cj.image, std::move(comps), tol);
}

ClopenSubobject heisenberg_evolve(const UnitaryFlow& flow, double t,
                                  const ClopenSubobject& s0, const Tolerances& tol) {
    return act_on_subobject(flow.at(-t), s0, tol);
}

DensityState schrodinger_evolve_state(const UnitaryFlow& flow, double t,
                                      const DensityState& rho0, const Tolerances& tol) {
    return conjugate(flow.at(t), rho0, tol);
}

CPGlobalSection schrodinger_evolve_section(const UnitaryFlow& flow, double t,
                                           const CPGlobalSection& m,
                                           const Tolerances& tol) {
    const FamilyConjugation cj = conjugate_family(flow.at(t), m.family(), tol);
    std::vector<std::vector<double>> values(cj.image->size());
    for (std::size_t i = 0; i < cj.image->size(); ++i)
        values[i].resize(cj.image->at(i).block_count(), 0.0);
    for (std::size_t i = 0; i < m.family()->size(); ++i)
        for (std::size_t k = 0; k < m.family()->at(i).block_count(); ++k)
            values[cj.context_image[i]][cj.block_image[i][k]] = m.value(i, k);
    return CPGlobalSection::from_values(cj.image, std::move(values), tol);
}

std::string TransportedFamily::time_tag(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

TransportedFamily transport(const UnitaryFlow& flow, const std::vector<double>& times,
                            FamilyPtr base, const Tolerances& tol) {
    TransportedFamily out;
    out.base = base;

    std::vector<Context> seed;
    for (std::size_t i = 0; i < base->size(); ++i) seed.push_back(base->at(i));
    std::map<std::string, std::vector<ContextId>> image_ids;
    for (double t : times) {
        const UnitaryOperator u = flow.at(t);
        std::vector<ContextId>& ids = image_ids[TransportedFamily::time_tag(t)];
        for (std::size_t i = 0; i < base->size(); ++i) {
            Context img = conjugate_context(u, base->at(i), tol);
            ids.push_back(img.id());
            seed.push_back(std::move(img));
        }
    }
    out.extended = ContextFamily::close(std::move(seed), tol);
    for (auto& [tag, ids] : image_ids) {
        std::vector<std::size_t>& idx = out.images[tag];
        idx.reserve(ids.size());
        for (const ContextId& id : ids) {
            const auto found = out.extended->find(id);
            if (!found) throw ValidationError("transported context lost during closure");
            idx.push_back(*found);
        }
    }
    return out;
}

namespace {

CheckReport make_report(const AntitoneFunction& lhs, const AntitoneFunction& rhs,
                        const std::vector<std::size_t>& image_of) {
    CheckReport rep;
    for (std::size_t i = 0; i < image_of.size(); ++i) {
        CheckReport::Row row;
        row.base_context = i;
        row.image_context = image_of[i];
        row.lhs = lhs.at(i);
        row.rhs = rhs.at(image_of[i]);
        row.discrepancy = std::abs(row.lhs - row.rhs);
        rep.max_discrepancy = std::max(rep.max_discrepancy, row.discrepancy);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace

CheckReport check_compatibility(const DensityState& rho0, const ClopenSubobject& s0,
                                const UnitaryFlow& flow, double t, const Tolerances& tol) {
    const UnitaryOperator ut = flow.at(t);
    const DensityState rho_t = conjugate(ut, rho0, tol);
    const AntitoneFunction lhs =
        pairing(section_from_state(rho_t, s0.family(), tol), s0);

    const ClopenSubobject s_t = act_on_subobject(ut.adjoint(), s0, tol);
    const FamilyConjugation cj = conjugate_family(ut.adjoint(), s0.family(), tol);
    const AntitoneFunction rhs = pairing(section_from_state(rho0, cj.image, tol), s_t);
    return make_report(lhs, rhs, cj.context_image);
}

CheckReport check_covariance(const DensityState& rho0, const ClopenSubobject& s0,
                             const UnitaryFlow& flow, double t, const Tolerances& tol) {
    const UnitaryOperator ut = flow.at(t);
    const AntitoneFunction lhs = pairing(section_from_state(rho0, s0.family(), tol), s0);

    const DensityState rho_t = conjugate(ut, rho0, tol);
    const ClopenSubobject s_minus_t = act_on_subobject(ut, s0, tol);
    const FamilyConjugation cj = conjugate_family(ut, s0.family(), tol);
    const AntitoneFunction rhs = pairing(section_from_state(rho_t, cj.image, tol), s_minus_t);
    return make_report(lhs, rhs, cj.context_image);
}

FlowIdentityReport check_delta_flow(const Projection& p0, const UnitaryFlow& flow,
                                    double t, FamilyPtr fam, const Tolerances& tol) {
    const ClopenSubobject evolved =
        heisenberg_evolve(flow, t, outer_daseinisation(p0, fam, tol), tol);
    const UnitaryOperator u_minus_t = flow.at(-t);
    const Projection p_t = conjugate(u_minus_t, p0, tol);
    const ClopenSubobject target = outer_daseinisation(p_t, evolved.family(), tol);

    FlowIdentityReport rep;
    for (std::size_t i = 0; i < evolved.family()->size(); ++i) {
        FlowIdentityReport::Row row{i, evolved.component(i), target.component(i)};
        if (row.evolved != row.daseinised) rep.all_match = false;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace qtopos
