// Command-line front end: builds context families from a scenario file,
// daseinises propositions, evolves states/propositions, runs the identity
// checks and the global-section search, and writes CSV/DOT tables.
//
// Exit status: 0 pass/found, 1 mathematical failure (identity violated or
// no section), 2 input error, 3 search budget exhausted.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qtopos/presheaf.hpp"
#include "qtopos/scenario.hpp"

using namespace qtopos;

namespace {

struct Options {
    std::string scenario_path;
    std::string out_dir;
    double tol = 1e-9;
    std::uint64_t budget = 10'000'000;
    std::string check_kind = "compat";
    std::string proposition;
};

double default_tol_from_env() {
    if (const char* env = std::getenv("QTOPOS_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0.0) return v;
    }
    return 1e-9;
}

void emit(const Options& opt, const std::string& name, const std::string& content) {
    if (opt.out_dir.empty()) {
        std::cout << "== " << name << " ==\n" << content;
        return;
    }
    std::filesystem::create_directories(opt.out_dir);
    const std::string path = opt.out_dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write output file: " + path);
    out << content;
}

std::string scenario_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

std::string selection_string(BlockMask m, std::size_t block_count) {
    if (m == 0) return "-";
    if (m == (BlockMask{1} << block_count) - 1u) return "all";
    std::string out;
    for (std::size_t k : mask_to_indices(m)) {
        if (!out.empty()) out += "+";
        out += std::to_string(k);
    }
    return out;
}

int cmd_contexts(const Options& opt, const Scenario& sc) {
    FamilyPtr fam = build_family(sc);
    emit(opt, "contexts.csv", family_csv(*fam));
    emit(opt, "order.csv", order_csv(*fam));
    emit(opt, "contexts.dot", family_dot(*fam));
    return 0;
}

int cmd_daseinise(const Options& opt, const Scenario& sc) {
    FamilyPtr fam = build_family(sc);
    const Proposition& prop = sc.select_proposition(opt.proposition);
    const Projection p = window_projection(sc, prop);
    const ClopenSubobject s = outer_daseinisation(p, fam);
    std::ostringstream csv;
    csv << "context,selected,rank\n";
    for (std::size_t i = 0; i < fam->size(); ++i)
        csv << i << "," << selection_string(s.component(i), fam->at(i).block_count())
            << "," << s.component_projection(i).rank() << "\n";
    emit(opt, "daseinise.csv", csv.str());
    return 0;
}

int cmd_evolve(const Options& opt, const Scenario& sc) {
    if (!sc.hamiltonian) throw ScenarioError("evolve needs a hamiltonian");
    if (!sc.state) throw ScenarioError("evolve needs a state");
    FamilyPtr fam = build_family(sc);
    const Proposition& prop = sc.select_proposition(opt.proposition);
    const ClopenSubobject s0 = outer_daseinisation(window_projection(sc, prop), fam);
    const UnitaryFlow flow = sc.flow();

    std::ostringstream csv;
    csv << "t,context,schrodinger,heisenberg,min_schrodinger,min_heisenberg\n";
    for (double t : sc.times) {
        const CheckReport rep = check_compatibility(*sc.state, s0, flow, t);
        double min_l = 1.0, min_r = 1.0;
        for (const auto& row : rep.rows) {
            min_l = std::min(min_l, row.lhs);
            min_r = std::min(min_r, row.rhs);
        }
        for (const auto& row : rep.rows)
            csv << format_value(t) << "," << row.base_context << ","
                << format_value(row.lhs) << "," << format_value(row.rhs) << ","
                << format_value(min_l) << "," << format_value(min_r) << "\n";
    }
    emit(opt, "evolve.csv", csv.str());
    return 0;
}

int cmd_check(const Options& opt, const Scenario& sc) {
    FamilyPtr fam = build_family(sc);
    std::ostringstream csv;
    bool pass = true;

    if (opt.check_kind == "compat" || opt.check_kind == "covariance") {
        if (!sc.hamiltonian) throw ScenarioError("check needs a hamiltonian");
        if (!sc.state) throw ScenarioError("check needs a state");
        const Proposition& prop = sc.select_proposition(opt.proposition);
        const ClopenSubobject s0 = outer_daseinisation(window_projection(sc, prop), fam);
        const UnitaryFlow flow = sc.flow();
        std::ostringstream detail;
        detail << "t,context,image_context,lhs,rhs,discrepancy\n";
        csv << "t,max_discrepancy,status\n";
        for (double t : sc.times) {
            const CheckReport rep = (opt.check_kind == "compat")
                                        ? check_compatibility(*sc.state, s0, flow, t)
                                        : check_covariance(*sc.state, s0, flow, t);
            for (const auto& row : rep.rows)
                detail << format_value(t) << "," << row.base_context << ","
                       << row.image_context << "," << format_value(row.lhs) << ","
                       << format_value(row.rhs) << "," << format_value(row.discrepancy)
                       << "\n";
            const bool ok = rep.passed(opt.tol);
            pass = pass && ok;
            csv << format_value(t) << "," << format_value(rep.max_discrepancy) << ","
                << (ok ? "pass" : "FAIL") << "\n";
        }
        emit(opt, "check_detail.csv", detail.str());
    } else if (opt.check_kind == "axioms") {
        CPGlobalSection m = [&] {
            if (sc.section_fixture) {
                if (sc.section_fixture->size() != fam->size())
                    throw ScenarioError("section_fixture size differs from the family");
                for (std::size_t i = 0; i < fam->size(); ++i)
                    if ((*sc.section_fixture)[i].size() != fam->at(i).block_count())
                        throw ScenarioError("section_fixture vector length mismatch");
                return CPGlobalSection::unchecked(fam, *sc.section_fixture);
            }
            if (!sc.state) throw ScenarioError("axioms check needs a state or a fixture");
            return section_from_state(*sc.state, fam);
        }();
        const MeasureAxiomsReport rep = measure_axioms_check(m);
        const CPGlobalSection::Violations v = m.check();
        csv << "quantity,violation,status\n";
        auto line = [&](const char* name, double value) {
            const bool ok = value <= opt.tol;
            pass = pass && ok;
            csv << name << "," << format_value(value) << "," << (ok ? "pass" : "FAIL")
                << "\n";
        };
        line("normalization", rep.normalization);
        line("modularity", rep.modularity);
        line("compatibility", v.compatibility);
    } else if (opt.check_kind == "flow-identity") {
        if (!sc.hamiltonian) throw ScenarioError("check needs a hamiltonian");
        const Proposition& prop = sc.select_proposition(opt.proposition);
        const Projection p0 = window_projection(sc, prop);
        const UnitaryFlow flow = sc.flow();
        csv << "t,mismatched_contexts,status\n";
        for (double t : sc.times) {
            const FlowIdentityReport rep = check_delta_flow(p0, flow, t, fam);
            std::size_t bad = 0;
            for (const auto& row : rep.rows)
                if (row.evolved != row.daseinised) ++bad;
            pass = pass && rep.all_match;
            csv << format_value(t) << "," << bad << ","
                << (rep.all_match ? "pass" : "FAIL") << "\n";
        }
    } else {
        throw ScenarioError("unknown check kind '" + opt.check_kind + "'");
    }

    emit(opt, "check.csv", csv.str());
    return pass ? 0 : 1;
}

int cmd_ks(const Options& opt, const Scenario& sc) {
    FamilyPtr fam = build_family(sc);
    const SectionSearchResult res = find_global_section(*fam, opt.budget);
    std::ostringstream csv;
    switch (res.status) {
        case SectionSearchResult::Status::Found: {
            csv << "status,nodes\nSECTION," << res.nodes << "\n";
            csv << "context,block\n";
            for (std::size_t i = 0; i < fam->size(); ++i)
                csv << i << "," << res.section->assignment.at(fam->at(i).id()) << "\n";
            emit(opt, "ks.csv", csv.str());
            std::cerr << "section search: witness found, " << res.nodes << " nodes, "
                      << res.seconds << "s\n";
            return 0;
        }
        case SectionSearchResult::Status::Absent:
            csv << "status,nodes\nNO-SECTION," << res.nodes << "\n";
            emit(opt, "ks.csv", csv.str());
            std::cerr << "section search: no global section, " << res.nodes
                      << " nodes, " << res.seconds << "s\n";
            return 1;
        case SectionSearchResult::Status::Exhausted:
        default:
            csv << "status,nodes\nBUDGET-EXHAUSTED," << res.nodes << "\n";
            emit(opt, "ks.csv", csv.str());
            std::cerr << "section search: budget exhausted after " << res.nodes
                      << " nodes\n";
            return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral presheaf toolkit"};
    app.require_subcommand(1);

    Options opt;
    opt.tol = default_tol_from_env();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opt.scenario_path, "scenario JSON file")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory (default: stdout)");
        sub->add_option("--tol", opt.tol, "pass/fail tolerance");
        sub->add_option("--proposition", opt.proposition, "proposition name");
        sub->add_option("--budget", opt.budget, "search node budget");
    };

    CLI::App* contexts = app.add_subcommand("contexts", "list the context family");
    add_common(contexts);
    CLI::App* daseinise =
        app.add_subcommand("daseinise", "outer daseinisation of a proposition");
    add_common(daseinise);
    CLI::App* evolve = app.add_subcommand("evolve", "t-sweep of the two pictures");
    add_common(evolve);
    CLI::App* check = app.add_subcommand("check", "run an identity check");
    add_common(check);
    check->add_option("--check", opt.check_kind, "which identity to check")
        ->check(CLI::IsMember({"compat", "covariance", "axioms", "flow-identity"}));
    CLI::App* ks = app.add_subcommand("ks", "global-section search");
    add_common(ks);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int status = 2;
    try {
        const Scenario sc = load_scenario(opt.scenario_path);
        std::cerr << "scenario digest " << scenario_digest(opt.scenario_path) << "\n";
        if (contexts->parsed()) status = cmd_contexts(opt, sc);
        else if (daseinise->parsed()) status = cmd_daseinise(opt, sc);
        else if (evolve->parsed()) status = cmd_evolve(opt, sc);
        else if (check->parsed()) status = cmd_check(opt, sc);
        else if (ks->parsed()) status = cmd_ks(opt, sc);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "wall time "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
              << "s\n";
    return status;
}
