#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "dehn/suite.hpp"

using namespace dehn;
using io::json;

namespace {

struct Common {
    std::string group = "SL2";
    std::vector<int> genus;
    std::uint64_t seed = 0;
    double tol = Tolerance{}.eq_tol;
    int max_order = 200;
    int workers = 1;
    std::string out;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InvalidArgument("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void line(const json& j) { stream() << j.dump() << '\n'; }

private:
    std::unique_ptr<std::ofstream> file_;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

RunConfig make_config(const Common& c, std::vector<int> default_genus) {
    RunConfig cfg;
    cfg.group = GroupContext::parse(c.group);
    cfg.genera = c.genus.empty() ? std::move(default_genus) : c.genus;
    cfg.seed = c.seed;
    cfg.tol.eq_tol = c.tol;
    cfg.max_order = c.max_order;
    cfg.workers = c.workers;
    cfg.validate();
    return cfg;
}

cplx parse_complex(const std::string& text) {
    std::string s = text;
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    if (!(in >> re)) throw InvalidArgument("cannot parse complex number '" + text + "'");
    in >> im;
    return {re, im};
}

int run_verify(const Common& c) {
    RunConfig cfg = make_config(c, {1, 2, 3});
    const SuiteResult result = verify_suite(cfg);
    Output out(c.out);
    for (const auto& rec : result.records) out.line(rec);
    for (const auto& rec : result.records)
        if (!rec.value("pass", true)) std::cerr << "FAIL " << rec.dump() << '\n';
    for (const auto& rec : result.records)
        if (rec["check"] == "convention_audit") {
            const auto& p = rec["params"];
            std::cerr << "convention n=" << p["n"] << ": t^2=1/s "
                      << (rec["t_squared_inverse_s"]["holds"].get<bool>() ? "holds" : "fails") << ", t^2=s "
                      << (rec["t_squared_s"]["holds"].get<bool>() ? "holds" : "fails") << '\n';
        }
    std::cerr << "verify " << cfg.group.name() << ": " << result.passed << " passed, " << result.failed << " failed\n";
    return result.exit_code();
}

int run_search(const Common& c, int samples, bool force_identity, bool central, int lambda_max_order) {
    RunConfig cfg = make_config(c, {2});
    cfg.samples = samples;
    cfg.force_identity = force_identity;
    cfg.central_lambda = central;
    Output out(c.out);
    int code = 0;
    for (int p : cfg.genera) {
        const SearchResult result = search_exceptional(cfg, p, lambda_max_order);
        for (const auto& rec : result.records) out.line(rec);
        out.line(result.summary);
        std::cerr << "search " << cfg.group.name() << " p=" << p << ": " << result.summary["exceptional"] << "/"
                  << samples << " exceptional, " << result.mismatches << " mismatches\n";
        code = std::max(code, result.exit_code());
    }
    return code;
}

int run_conjecture(const Common& c, const std::vector<std::string>& families, int perturb_samples) {
    RunConfig cfg = make_config(c, {1, 2, 3});
    cfg.families = families;
    cfg.perturb_samples = perturb_samples;
    const ScanResult result = conjecture_scan(cfg);
    Output out(c.out);
    for (const auto& rec : result.records) out.line(rec);
    if (!result.records.empty()) out.line(result.summary);
    std::cerr << "conjecture " << cfg.group.name() << ": " << result.records.size() << " records, "
              << result.violations << " violation candidates, " << result.errors << " errors\n";
    return result.exit_code();
}

int run_twist(const Common& c, const std::string& rep_path, const std::string& tau_path) {
    Tolerance tol;
    tol.eq_tol = c.tol;
    tol.validate();
    const Representation rho = io::representation_from_json(read_json(rep_path), tol);
    const PseudoDegeneration tau = io::pseudo_degeneration_from_json(read_json(tau_path));
    const Representation moved = apply_pseudo_degeneration(rho, tau);
    const auto report = exceptional_certificate(rho, tau, tol, c.max_order);
    Output out(c.out);
    out.line({{"representation", io::to_json(moved)},
              {"relation_defect", relation_defect(moved)},
              {"report", io::to_json(report)}});
    std::cerr << "twist: verdict " << verdict_name(report.verdict) << '\n';
    return 0;
}

int run_solve(const Common& c, const std::string& target_path, const std::string& centralizer_path) {
    Tolerance tol;
    tol.eq_tol = c.tol;
    tol.validate();
    const GroupContext ctx = GroupContext::parse(c.group);
    GroupElement target = GroupElement::identity(ctx);
    if (target_path.empty()) {
        Rng rng(c.seed);
        target = haar_unitary(ctx, rng);
    } else {
        target = io::element_from_json(read_json(target_path));
    }
    std::optional<GroupElement> constraint;
    if (!centralizer_path.empty()) constraint = io::element_from_json(read_json(centralizer_path));
    Output out(c.out);
    try {
        const auto sol = solve_commutator(target.context(), target, constraint, c.seed, tol);
        out.line({{"target", io::to_json(target)},
                  {"a", io::to_json(sol.a)},
                  {"b", io::to_json(sol.b)},
                  {"residual", sol.residual}});
        return 0;
    } catch (const SolverFailed& e) {
        out.line({{"target", io::to_json(target)}, {"error", e.what()}, {"best_residual", e.best_residual()}});
        return 1;
    }
}

int run_dims(const Common& c, const std::string& rep_path, const std::vector<int>& fix_gen,
             const std::vector<int>& fix_comm) {
    Tolerance tol;
    tol.eq_tol = c.tol;
    tol.validate();
    const GroupContext ctx = GroupContext::parse(c.group);
    const int p = c.genus.empty() ? 2 : c.genus.front();
    const Representation rho = rep_path.empty() ? random_representation(ctx, p, c.seed, false, tol)
                                                : io::representation_from_json(read_json(rep_path), tol);
    std::vector<TangentConstraint> constraints;
    for (int i : fix_gen) constraints.push_back(FixGenerator{i});
    for (int h : fix_comm) {
        if (h < 1 || h > rho.genus()) throw InvalidArgument("commutator handle out of range");
        constraints.push_back(FixCommutator{h, commutator(rho.image(h), rho.image(h + rho.genus()))});
    }
    const auto& g = rho.context();
    Output out(c.out);
    out.line({{"group", g.name()},
              {"genus", rho.genus()},
              {"d", g.dimension()},
              {"r", g.rank()},
              {"z", g.center_dimension()},
              {"relation_defect", relation_defect(rho)},
              {"centralizer_dimension", lie_centralizer_dimension(rho, tol)},
              {"irreducible", is_irreducible(rho, tol)},
              {"tangent_dimension", tangent_dimension(rho, {}, tol)},
              {"constrained_tangent_dimension", tangent_dimension(rho, constraints, tol)}});
    return 0;
}

int run_construct(const Common& c, const std::string& family, int order, const std::string& s_text) {
    RunConfig cfg = make_config(c, {2});
    const int p = cfg.genera.front();
    Built b = [&]() -> Built {
        if (family == "thm4") return build_thm4(cfg.group, p, order, c.seed, cfg.tol);
        if (family == "thm5_simple") return build_thm5_simple(cfg.group, p, order, c.seed, cfg.tol);
        if (family == "thm5_separating") return build_thm5_separating(cfg.group, p, c.seed, cfg.tol);
        if (family == "thm5_dense") return build_thm5_dense(cfg.group, p, c.seed, cfg.tol);
        if (family == "sec6") return build_sec6(p, parse_complex(s_text), cfg.tol);
        throw InvalidArgument("unknown family '" + family + "'");
    }();
    const auto report = exceptional_certificate(b.rho, b.tau, cfg.tol, cfg.max_order);
    Output out(c.out);
    out.line({{"representation", io::to_json(b.rho)},
              {"pseudo_degeneration", io::to_json(b.tau)},
              {"report", io::to_json(report)}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dehn twist actions on surface group representations"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--group", c.group, "SL2, SL3, PGL2, GLn, ...");
    app.add_option("--genus", c.genus, "genus (repeatable for sweeps)");
    app.add_option("--seed", c.seed);
    app.add_option("--tol", c.tol, "element equality tolerance");
    app.add_option("--max-order", c.max_order, "torsion search bound");
    app.add_option("--workers", c.workers);
    app.add_option("--out", c.out, "write JSON lines here instead of stdout");

    auto* verify = app.add_subcommand("verify", "check every construction against its predicted verdict");

    auto* search = app.add_subcommand("search", "random torsion-anchored families");
    int samples = 1000;
    bool force_identity = false, central = false;
    int lambda_max_order = 12;
    search->add_option("--samples", samples);
    search->add_flag("--force-identity", force_identity, "use lambda = e");
    search->add_flag("--central-lambda", central, "draw lambda from the center");
    search->add_option("--lambda-max-order", lambda_max_order);

    auto* conjecture = app.add_subcommand("conjecture", "conjecture check over constructions and perturbations");
    std::vector<std::string> families;
    int perturb_samples = 8;
    conjecture->add_option("--families", families, "subset of families, or 'none'");
    conjecture->add_option("--perturb-samples", perturb_samples);

    auto* twist = app.add_subcommand("twist", "apply a pseudo-degeneration to a representation file");
    std::string rep_path, tau_path;
    twist->add_option("--rep", rep_path)->required();
    twist->add_option("--tau", tau_path)->required();

    auto* solve = app.add_subcommand("solve-commutator", "solve C(a, b) = target in the compact form");
    std::string target_path, centralizer_path;
    solve->add_option("--target", target_path, "element JSON; Haar sample from --seed if omitted");
    solve->add_option("--centralizer", centralizer_path, "restrict b to the torus of this element");

    auto* dims = app.add_subcommand("dims", "tangent dimension report");
    std::string dims_rep;
    std::vector<int> fix_gen, fix_comm;
    dims->add_option("--rep", dims_rep, "representation JSON; random if omitted");
    dims->add_option("--fix-generator", fix_gen);
    dims->add_option("--fix-commutator", fix_comm);

    auto* construct = app.add_subcommand("construct", "emit one constructed family member");
    std::string family;
    int order = 2;
    std::string s_text = "3";
    construct->add_option("family", family, "thm4, thm5_simple, thm5_separating, thm5_dense, sec6")->required();
    construct->add_option("--order", order, "torsion order of lambda, or Weyl order n");
    construct->add_option("--s", s_text, "sec6 parameter as 're' or 're,im'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) return run_verify(c);
        if (*search) return run_search(c, samples, force_identity, central, lambda_max_order);
        if (*conjecture) return run_conjecture(c, families, perturb_samples);
        if (*twist) return run_twist(c, rep_path, tau_path);
        if (*solve) return run_solve(c, target_path, centralizer_path);
        if (*dims) return run_dims(c, dims_rep, fix_gen, fix_comm);
        if (*construct) return run_construct(c, family, order, s_text);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ContextMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DefectTooLarge& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
