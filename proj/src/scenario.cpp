#include "qtopos/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qtopos {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError("scenario." + path + ": " + what);
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

Complex entry_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        fail(path, "complex entries are two-element [re, im] arrays");
    return Complex{number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

ComplexMatrix matrix_at(const json& j, const std::string& path, std::size_t dim) {
    if (!j.is_array() || j.size() != dim)
        fail(path, "expected " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const json& row = j[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != dim)
            fail(rp, "expected " + std::to_string(dim) + " entries");
        for (std::size_t k = 0; k < dim; ++k)
            m.at(i, k) = entry_at(row[k], rp + "[" + std::to_string(k) + "]");
    }
    return m;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ScenarioError("scenario: top level must be an object");
    if (j.value("schema", "") != "qtopos-scenario/1")
        fail("schema", "expected \"qtopos-scenario/1\"");

    Scenario sc;
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
        fail("dimension", "expected a positive integer");
    sc.dimension = j["dimension"].get<std::size_t>();
    if (sc.dimension < 1 || sc.dimension > 16)
        fail("dimension", "supported range is 1..16");

    if (j.contains("observables")) {
        const json& obs = j["observables"];
        if (!obs.is_object()) fail("observables", "expected an object");
        for (const auto& [name, body] : obs.items()) {
            try {
                sc.observables.emplace(
                    name, HermitianOperator(
                              matrix_at(body, "observables." + name, sc.dimension)));
            } catch (const NonHermitian&) {
                fail("observables." + name, "matrix is not hermitian");
            }
        }
    }

    if (j.contains("hamiltonian")) {
        if (!j["hamiltonian"].is_string()) fail("hamiltonian", "expected an observable name");
        sc.hamiltonian = j["hamiltonian"].get<std::string>();
        if (!sc.observables.count(*sc.hamiltonian))
            fail("hamiltonian", "unknown observable '" + *sc.hamiltonian + "'");
    }

    if (j.contains("state")) {
        try {
            sc.state = DensityState(matrix_at(j["state"], "state", sc.dimension));
        } catch (const Error& e) {
            fail("state", e.what());
        }
    }

    if (j.contains("propositions")) {
        const json& props = j["propositions"];
        if (!props.is_array()) fail("propositions", "expected an array");
        for (std::size_t i = 0; i < props.size(); ++i) {
            const std::string pp = "propositions[" + std::to_string(i) + "]";
            const json& p = props[i];
            if (!p.is_object()) fail(pp, "expected an object");
            Proposition prop;
            prop.observable = p.value("observable", "");
            if (!sc.observables.count(prop.observable))
                fail(pp + ".observable", "unknown observable '" + prop.observable + "'");
            if (!p.contains("window") || !p["window"].is_array() || p["window"].size() != 2)
                fail(pp + ".window", "expected [lo, hi]");
            prop.lo = number_at(p["window"][0], pp + ".window[0]");
            prop.hi = number_at(p["window"][1], pp + ".window[1]");
            if (prop.lo > prop.hi) fail(pp + ".window", "window is empty (lo > hi)");
            prop.name = p.value("name", prop.observable + "[" + format_value(prop.lo) +
                                            "," + format_value(prop.hi) + "]");
            sc.propositions.push_back(std::move(prop));
        }
    }

    if (j.contains("context_seeds")) {
        const json& seeds = j["context_seeds"];
        if (!seeds.is_array()) fail("context_seeds", "expected an array of name groups");
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const std::string sp = "context_seeds[" + std::to_string(i) + "]";
            if (!seeds[i].is_array() || seeds[i].empty()) fail(sp, "expected a non-empty array");
            std::vector<std::string> group;
            for (std::size_t k = 0; k < seeds[i].size(); ++k) {
                if (!seeds[i][k].is_string())
                    fail(sp + "[" + std::to_string(k) + "]", "expected an observable name");
                const std::string name = seeds[i][k].get<std::string>();
                if (!sc.observables.count(name))
                    fail(sp + "[" + std::to_string(k) + "]",
                         "unknown observable '" + name + "'");
                group.push_back(name);
            }
            sc.context_seeds.push_back(std::move(group));
        }
    }

    if (j.contains("vector_contexts")) {
        const json& vcs = j["vector_contexts"];
        if (!vcs.is_array()) fail("vector_contexts", "expected an array of bases");
        for (std::size_t i = 0; i < vcs.size(); ++i) {
            const std::string vp = "vector_contexts[" + std::to_string(i) + "]";
            if (!vcs[i].is_array() || vcs[i].size() < 2)
                fail(vp, "expected at least two vectors");
            std::vector<std::vector<Complex>> basis;
            for (std::size_t v = 0; v < vcs[i].size(); ++v) {
                const std::string ep = vp + "[" + std::to_string(v) + "]";
                if (!vcs[i][v].is_array() || vcs[i][v].size() != sc.dimension)
                    fail(ep, "expected " + std::to_string(sc.dimension) + " entries");
                std::vector<Complex> vec;
                double n2 = 0.0;
                for (std::size_t k = 0; k < sc.dimension; ++k) {
                    vec.push_back(entry_at(vcs[i][v][k], ep + "[" + std::to_string(k) + "]"));
                    n2 += std::norm(vec.back());
                }
                if (n2 <= 0.0) fail(ep, "zero vector");
                basis.push_back(std::move(vec));
            }
            sc.vector_contexts.push_back(std::move(basis));
        }
    }

    if (j.contains("times")) {
        if (!j["times"].is_array() || j["times"].empty())
            fail("times", "expected a non-empty array of reals");
        sc.times.clear();
        for (std::size_t i = 0; i < j["times"].size(); ++i)
            sc.times.push_back(number_at(j["times"][i], "times[" + std::to_string(i) + "]"));
    }

    if (j.contains("section_fixture")) {
        const json& fx = j["section_fixture"];
        if (!fx.is_array()) fail("section_fixture", "expected an array of probability vectors");
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < fx.size(); ++i) {
            const std::string fp = "section_fixture[" + std::to_string(i) + "]";
            if (!fx[i].is_array()) fail(fp, "expected an array of numbers");
            std::vector<double> row;
            for (std::size_t k = 0; k < fx[i].size(); ++k)
                row.push_back(number_at(fx[i][k], fp + "[" + std::to_string(k) + "]"));
            rows.push_back(std::move(row));
        }
        sc.section_fixture = std::move(rows);
    }

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

const Proposition& Scenario::select_proposition(const std::string& name) const {
    if (propositions.empty())
        throw ScenarioError("scenario has no propositions");
    if (name.empty()) return propositions.front();
    for (const Proposition& p : propositions)
        if (p.name == name) return p;
    throw ScenarioError("unknown proposition '" + name + "'");
}

UnitaryFlow Scenario::flow(const Tolerances& tol) const {
    if (!hamiltonian)
        throw ScenarioError("scenario has no hamiltonian");
    return UnitaryFlow(observables.at(*hamiltonian), tol);
}

FamilyPtr build_family(const Scenario& sc, const Tolerances& tol) {
    std::vector<Context> seed;
    for (const auto& group : sc.context_seeds) {
        std::vector<HermitianOperator> ops;
        for (const std::string& name : group) ops.push_back(sc.observables.at(name));
        seed.push_back(context_from_operators(ops, tol));
    }
    for (const auto& basis : sc.vector_contexts) {
        std::vector<Projection> blocks;
        for (const auto& vec : basis) {
            double n2 = 0.0;
            for (const Complex& z : vec) n2 += std::norm(z);
            ComplexMatrix p(sc.dimension);
            for (std::size_t i = 0; i < sc.dimension; ++i)
                for (std::size_t k = 0; k < sc.dimension; ++k)
                    p.at(i, k) = vec[i] * std::conj(vec[k]) / n2;
            blocks.emplace_back(std::move(p), tol);
        }
        seed.push_back(Context::from_blocks(std::move(blocks), tol));
    }
    if (seed.empty()) throw EmptySeed("scenario provides no context seeds");
    return ContextFamily::close(std::move(seed), tol);
}

Projection window_projection(const Scenario& sc, const Proposition& prop,
                             const Tolerances& tol) {
    const HermitianOperator& a = sc.observables.at(prop.observable);
    ComplexMatrix sum(sc.dimension);
    for (const Eigenpair& ep : spectral_decompose(a, tol))
        if (ep.value >= prop.lo - tol.overlap && ep.value <= prop.hi + tol.overlap)
            sum += ep.projection.matrix();
    return Projection(std::move(sum), tol);
}

std::string matrix_literal(const ComplexMatrix& m) {
    char buf[64];
    std::string out = "[";
    for (std::size_t i = 0; i < m.dim(); ++i) {
        out += (i ? ",[" : "[");
        for (std::size_t k = 0; k < m.dim(); ++k) {
            const Complex& z = m.at(i, k);
            std::snprintf(buf, sizeof buf, "%s[%.17g,%.17g]", k ? "," : "", z.real(),
                          z.imag());
            out += buf;
        }
        out += "]";
    }
    out += "]";
    return out;
}

ComplexMatrix matrix_from_literal(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("matrix literal: invalid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw ScenarioError("matrix literal: expected rows");
    return matrix_at(j, "literal", j.size());
}

std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string family_dot(const ContextFamily& fam) {
    std::ostringstream out;
    out << "digraph contexts {\n";
    for (std::size_t i = 0; i < fam.size(); ++i) {
        out << "  c" << i << " [label=\"C" << i << " (";
        for (std::size_t k = 0; k < fam.at(i).block_count(); ++k) {
            if (k) out << "+";
            out << fam.at(i).block(k).rank();
        }
        out << ")\"];\n";
    }
    for (const auto& [coarse, fine] : fam.covering_pairs())
        out << "  c" << coarse << " -> c" << fine << ";\n";
    out << "}\n";
    return out.str();
}

std::string family_csv(const ContextFamily& fam) {
    std::ostringstream out;
    out << "context,blocks,ranks\n";
    for (std::size_t i = 0; i < fam.size(); ++i) {
        out << i << "," << fam.at(i).block_count() << ",";
        for (std::size_t k = 0; k < fam.at(i).block_count(); ++k) {
            if (k) out << "+";
            out << fam.at(i).block(k).rank();
        }
        out << "\n";
    }
    return out.str();
}

std::string order_csv(const ContextFamily& fam) {
    std::ostringstream out;
    out << "coarse,fine\n";
    for (const auto& [coarse, fine] : fam.order_pairs())
        out << coarse << "," << fine << "\n";
    return out.str();
}

}  // namespace qtopos
