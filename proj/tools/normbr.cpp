// Command-line driver: compute scenario files, sweep parameter families
// against the closed-form oracles, run self-tests, and evaluate oracles.
//
// Cap overrides: set NORMBR_CAPS="<max group order>,<max orbit-set size>,
// <max matrix cells>" to raise or lower the default resource limits.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "normbr/normic.hpp"
#include "normbr/oracles.hpp"
#include "normbr/scenario.hpp"

namespace {

using exactlin::Caps;
using exactlin::FinAb;
using exactlin::Int;

struct CapConfig {
    std::size_t max_group = 64;
    std::size_t max_omega = 5000;
    Caps caps;
};

CapConfig cap_config() {
    CapConfig c;
    const char* env = std::getenv("NORMBR_CAPS");
    if (!env) return c;
    std::stringstream ss(env);
    std::string tok;
    std::vector<long long> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stoll(tok));
    if (vals.size() != 3)
        throw std::runtime_error(
            "NORMBR_CAPS must be three comma-separated integers: max group "
            "order, max orbit-set size, max matrix cells");
    c.max_group = static_cast<std::size_t>(vals[0]);
    c.max_omega = static_cast<std::size_t>(vals[1]);
    c.caps.max_cells = static_cast<std::size_t>(vals[2]);
    return c;
}

normic::BrauerReport run_scenario(const scenario::Scenario& sc, normic::Path path,
                                  const CapConfig& cc) {
    if (sc.spec.group.order() > cc.max_group)
        throw normic::HypothesisError("group order exceeds the configured cap");
    return normic::brauer_report(sc.spec, path, cc.caps, cc.max_omega);
}

std::vector<Int> parse_invariants(const std::string& s) {
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(Int(tok));
    return out;
}

int cmd_compute(const std::string& file, const std::string& json_out,
                const std::string& path_opt) {
    CapConfig cc = cap_config();
    scenario::Scenario sc = scenario::parse_file(file);
    std::vector<normic::Path> paths;
    if (path_opt == "both")
        paths = {normic::Path::Shapiro, normic::Path::Generic};
    else if (path_opt == "generic")
        paths = {normic::Path::Generic};
    else
        paths = {sc.path.value_or(normic::Path::Shapiro)};

    normic::BrauerReport rep = run_scenario(sc, paths[0], cc);
    if (paths.size() > 1) {
        normic::BrauerReport other = run_scenario(sc, paths[1], cc);
        if (!rep.v.same_type(other.v) || !rep.w.same_type(other.w)) {
            std::cerr << "internal error: the two computation paths disagree\n";
            return 1;
        }
        rep.notes.push_back("verified on both computation paths");
    }
    std::cout << scenario::render_table(rep);
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        out << scenario::render_json(rep);
    }
    std::vector<std::string> bad = scenario::check_expectations(sc, rep);
    for (const auto& msg : bad) std::cerr << file << ": " << msg << "\n";
    return bad.empty() ? 0 : 2;
}

std::vector<int> all_elems(const groups::FiniteGroup& g) {
    std::vector<int> v(g.order());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

normic::ProblemSpec dihedral_spec(int nn, const Int& l) {
    normic::ProblemSpec s;
    s.group = groups::FiniteGroup::dihedral(nn);
    s.variant = normic::Variant::X;
    s.components = {{0}};
    normic::Factor f;
    f.v.resize(nn);
    std::iota(f.v.begin(), f.v.end(), 0);
    f.l = l;
    s.factors = {f};
    s.name = "dihedral(" + std::to_string(nn) + "), l=" + l.str();
    return s;
}

int cmd_sweep_dihedral(int nn_max, const std::vector<long>& ls,
                       const std::string& json_out) {
    CapConfig cc = cap_config();
    bool all_ok = true;
    std::ostringstream json;
    json << "[\n";
    bool first = true;
    std::cout << "nn  l   V        W        order  exact     oracle    agree\n";
    for (int nn = 2; nn <= nn_max; ++nn)
        for (long l : ls) {
            std::ostringstream row;
            std::string status;
            try {
                normic::BrauerReport rep =
                    normic::brauer_report(dihedral_spec(nn, l), normic::Path::Shapiro,
                                          cc.caps, cc.max_omega);
                FinAb expect = oracles::dihedral_brauer(nn, l);
                bool agree = rep.exact_group && rep.exact_group->same_type(expect);
                if (!agree) all_ok = false;
                row << nn << "   " << l << "   " << rep.v.str() << "   "
                    << rep.w.str() << "   " << rep.order << "   "
                    << (rep.exact_group ? rep.exact_group->str() : "?") << "   "
                    << expect.str() << "   " << (agree ? "yes" : "NO");
                if (!first) json << ",\n";
                first = false;
                json << "  {\"nn\": " << nn << ", \"l\": " << l << ", \"engine\": \""
                     << (rep.exact_group ? rep.exact_group->str() : "?")
                     << "\", \"oracle\": \"" << expect.str() << "\", \"agree\": "
                     << (agree ? "true" : "false") << "}";
            } catch (const exactlin::CapError& e) {
                row << nn << "   " << l << "   skipped (cap): " << e.what();
            }
            std::cout << row.str() << "\n";
        }
    json << "\n]\n";
    if (!json_out.empty()) std::ofstream(json_out) << json.str();
    return all_ok ? 0 : 2;
}

int cmd_sweep_split(const std::string& group_text, long max_len,
                    const std::string& json_out) {
    CapConfig cc = cap_config();
    groups::FiniteGroup g = scenario::parse_group(group_text);
    const long n = static_cast<long>(g.order());
    bool all_ok = true;
    std::ostringstream json;
    json << "[\n";
    bool first = true;
    std::cout << "exponents   V        W        oracle   agree\n";

    std::vector<std::vector<Int>> tuples;
    std::vector<Int> cur;
    auto emit = [&](auto&& self, long len) -> void {
        if (!cur.empty()) {
            Int sum = 0, common = n;
            for (const Int& e : cur) {
                sum += e;
                common = exactlin::gcd(common, e);
            }
            if (sum % n == 0 && common == 1) tuples.push_back(cur);
        }
        if (len == max_len) return;
        for (long e = 1; e < 2 * n; ++e) {
            cur.push_back(e);
            self(self, len + 1);
            cur.pop_back();
        }
    };
    emit(emit, 0);

    for (const auto& e : tuples) {
        normic::ProblemSpec s;
        s.group = g;
        s.variant = normic::Variant::X;
        s.components = {{0}};
        std::string label;
        for (const Int& ei : e) {
            normic::Factor f;
            f.v = all_elems(g);
            f.e = ei;
            s.factors.push_back(std::move(f));
            label += (label.empty() ? "(" : ",") + ei.str();
        }
        label += ")";
        s.name = "split " + label;
        try {
            normic::BrauerReport rep = normic::brauer_report(
                s, normic::Path::Shapiro, cc.caps, cc.max_omega);
            FinAb expect = oracles::split_polynomial_brauer(g, e).group;
            bool agree = rep.v.same_type(expect) && rep.w.is_trivial();
            if (!agree) all_ok = false;
            std::cout << label << "   " << rep.v.str() << "   " << rep.w.str()
                      << "   " << expect.str() << "   " << (agree ? "yes" : "NO")
                      << "\n";
            if (!first) json << ",\n";
            first = false;
            json << "  {\"e\": \"" << label << "\", \"engine\": \"" << rep.v.str()
                 << "\", \"oracle\": \"" << expect.str() << "\", \"agree\": "
                 << (agree ? "true" : "false") << "}";
        } catch (const exactlin::CapError& ex) {
            std::cout << label << "   skipped (cap): " << ex.what() << "\n";
        }
    }
    json << "\n]\n";
    if (!json_out.empty()) std::ofstream(json_out) << json.str();
    return all_ok ? 0 : 2;
}

struct SuiteResult {
    std::string name;
    int passed = 0;
    std::vector<std::string> failures;
};

void check(SuiteResult& s, bool ok, const std::string& what) {
    if (ok)
        ++s.passed;
    else
        s.failures.push_back(what);
}

SuiteResult suite_identities() {
    SuiteResult s{"identities"};
    // Smith form identities on a fixed matrix
    exactlin::IntMatrix a = exactlin::IntMatrix::from_rows(
        {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}});
    exactlin::SnfResult snf = exactlin::smith_normal_form(a);
    check(s, snf.U.mul(a).mul(snf.V).to_dense() == snf.S.to_dense(),
          "U*A*V == S");
    std::vector<Int> diag = snf.diagonal();
    bool divides = true;
    for (std::size_t i = 1; i < diag.size(); ++i)
        if (diag[i - 1] != 0 && diag[i] % diag[i - 1] != 0) divides = false;
    check(s, divides, "diagonal divisibility");

    // d compose d vanishes on a bar complex
    groups::FiniteGroup d4 = groups::FiniteGroup::dihedral(4);
    cohom::Module m = cohom::Module::trivial_z(d4);
    cohom::CochainComplex cx(m, 2);
    check(s, cx.d(1).mul(cx.d(0)).is_zero(), "d.d == 0");

    // restriction-corestriction is multiplication by the index
    groups::Subgroup h = groups::subgroup_closure(d4, {1});
    cohom::CohomGroup h2 = cohom::qz_cohomology(d4, 1);
    check(s, h2.group.order() == 4, "H^1(D4, Q/Z) = G^ab dual");
    return s;
}

SuiteResult suite_oracle_engine() {
    SuiteResult s{"oracle-engine agreement"};
    CapConfig cc = cap_config();
    for (int nn : {2, 3, 4})
        for (long l : {1L, 2L}) {
            normic::BrauerReport rep = normic::brauer_report(
                dihedral_spec(nn, l), normic::Path::Shapiro, cc.caps, cc.max_omega);
            FinAb expect = oracles::dihedral_brauer(nn, l);
            check(s,
                  rep.exact_group && rep.exact_group->same_type(expect),
                  "dihedral(" + std::to_string(nn) + "), l=" + std::to_string(l));
        }
    groups::FiniteGroup z4 = groups::FiniteGroup::cyclic(4);
    for (std::vector<Int> e : {std::vector<Int>{1, 3}, {1, 1, 2}}) {
        normic::ProblemSpec sp;
        sp.group = z4;
        sp.variant = normic::Variant::X;
        sp.components = {{0}};
        for (const Int& ei : e) {
            normic::Factor f;
            f.v = all_elems(z4);
            f.e = ei;
            sp.factors.push_back(std::move(f));
        }
        normic::BrauerReport rep = normic::brauer_report(sp);
        check(s,
              rep.v.same_type(oracles::split_polynomial_brauer(z4, e).group) &&
                  rep.w.is_trivial(),
              "split over Z/4");
    }
    return s;
}

SuiteResult suite_lemmas() {
    SuiteResult s{"character lemmas"};
    for (int nn : {3, 4, 5}) {
        groups::FiniteGroup d = groups::FiniteGroup::dihedral(nn);
        std::vector<int> rot(nn);
        std::iota(rot.begin(), rot.end(), 0);
        oracles::LemmaReport rep = oracles::lemma_checks(d, rot, 1, 2);
        check(s, rep.cor_applicable && rep.ok(),
              "transfer lemma on dihedral(" + std::to_string(nn) + ")");
    }
    groups::FiniteGroup k4 = groups::FiniteGroup::direct(
        groups::FiniteGroup::cyclic(2), groups::FiniteGroup::cyclic(2));
    oracles::LemmaReport rep = oracles::lemma_checks(k4, {0, 1}, 1, 2);
    check(s, rep.map0_applicable && rep.ok(), "restriction lemma on the Klein group");
    return s;
}

SuiteResult suite_corpus(const std::string& corpus_dir) {
    SuiteResult s{"corpus golden tests"};
    CapConfig cc = cap_config();
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(corpus_dir))
        for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
            if (entry.path().extension() == ".scn") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        s.failures.push_back("no scenario files under " + corpus_dir);
        return s;
    }
    for (const auto& f : files) {
        try {
            scenario::Scenario sc = scenario::parse_file(f.string());
            normic::BrauerReport rep =
                run_scenario(sc, sc.path.value_or(normic::Path::Shapiro), cc);
            std::vector<std::string> bad = scenario::check_expectations(sc, rep);
            if (bad.empty())
                ++s.passed;
            else
                for (const auto& msg : bad)
                    s.failures.push_back(f.filename().string() + ": " + msg);
        } catch (const std::exception& e) {
            s.failures.push_back(f.filename().string() + ": " + e.what());
        }
    }
    return s;
}

int cmd_selftest(const std::string& level, const std::string& corpus_dir) {
    std::vector<SuiteResult> suites;
    suites.push_back(suite_identities());
    if (level == "full" || level == "paper") {
        suites.push_back(suite_oracle_engine());
        suites.push_back(suite_lemmas());
    }
    if (level == "paper") suites.push_back(suite_corpus(corpus_dir));
    bool ok = true;
    for (const auto& s : suites) {
        std::cout << s.name << ": " << s.passed << " passed, "
                  << s.failures.size() << " failed\n";
        for (const auto& f : s.failures) {
            std::cout << "  FAIL: " << f << "\n";
            ok = false;
        }
    }
    std::cout << (ok ? "selftest: OK\n" : "selftest: FAILURES\n");
    return ok ? 0 : 2;
}

int cmd_oracle(const std::string& name, const std::vector<std::string>& args) {
    if (name == "dihedral") {
        if (args.size() != 2) throw CLI::ValidationError("usage: oracle dihedral nn l");
        std::cout << oracles::dihedral_brauer(std::stol(args[0]), Int(args[1])).str()
                  << "\n";
    } else if (name == "schur") {
        if (args.size() != 1)
            throw CLI::ValidationError("usage: oracle schur d1,d2,...");
        std::cout << oracles::abelian_schur_multiplier(parse_invariants(args[0])).str()
                  << "\n";
    } else if (name == "hom") {
        if (args.size() != 2)
            throw CLI::ValidationError("usage: oracle hom a1,a2,... b1,b2,...");
        std::cout << oracles::abelian_hom_group(parse_invariants(args[0]),
                                                parse_invariants(args[1]))
                         .str()
                  << "\n";
    } else if (name == "splitpoly") {
        if (args.size() != 2)
            throw CLI::ValidationError("usage: oracle splitpoly <group> e1,e2,...");
        groups::FiniteGroup g = scenario::parse_group(args[0]);
        std::cout << oracles::split_polynomial_brauer(g, parse_invariants(args[1]))
                         .group.str()
                  << "\n";
    } else {
        throw CLI::ValidationError("unknown oracle '" + name +
                                   "' (dihedral, schur, hom, splitpoly)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unramified Brauer groups of compactified normic bundles"};
    app.require_subcommand(1);

    std::string file, json_out, path_opt = "default";
    auto* compute = app.add_subcommand("compute", "evaluate one scenario file");
    compute->add_option("file", file, "scenario file")->required();
    compute->add_option("--json", json_out, "write a JSON report here");
    compute->add_option("--path", path_opt, "generic | shapiro | both")
        ->check(CLI::IsMember({"generic", "shapiro", "both", "default"}));

    auto* sweep = app.add_subcommand("sweep", "engine/oracle agreement sweeps");
    std::string family, sweep_json, sweep_group = "cyclic(4)";
    int nn_max = 4;
    long max_len = 3;
    std::vector<long> ls = {1, 2};
    sweep->add_option("family", family, "dihedral | split")->required();
    sweep->add_option("--nn-max", nn_max, "largest dihedral parameter");
    sweep->add_option("--l", ls, "values of l to sweep");
    sweep->add_option("--group", sweep_group, "group for the split family");
    sweep->add_option("--max-len", max_len, "longest exponent tuple");
    sweep->add_option("--json", sweep_json, "write a JSON table here");

    auto* selftest = app.add_subcommand("selftest", "run the verification suites");
    std::string level = "fast", corpus_dir = "corpus";
    selftest->add_option("level", level, "fast | full | paper")
        ->check(CLI::IsMember({"fast", "full", "paper"}));
    selftest->add_option("--corpus", corpus_dir, "scenario corpus directory");

    auto* oracle = app.add_subcommand("oracle", "evaluate a closed form");
    std::string oracle_name;
    std::vector<std::string> oracle_args;
    oracle->add_option("name", oracle_name, "dihedral | schur | hom | splitpoly")
        ->required();
    oracle->add_option("args", oracle_args, "oracle parameters");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*compute) return cmd_compute(file, json_out, path_opt);
        if (*sweep) {
            if (family == "dihedral")
                return cmd_sweep_dihedral(nn_max, ls, sweep_json);
            if (family == "split")
                return cmd_sweep_split(sweep_group, max_len, sweep_json);
            std::cerr << "unknown family '" << family << "'\n";
            return 2;
        }
        if (*selftest) return cmd_selftest(level, corpus_dir);
        if (*oracle) return cmd_oracle(oracle_name, oracle_args);
    } catch (const scenario::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const normic::HypothesisError& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return 2;
    } catch (const oracles::ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const exactlin::CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
