// maasslab: verification suites and small evaluation commands.
//
// Exit codes: 0 success, 1 numerical failure (some report row failed),
// 2 configuration error.

#include "CLI11.hpp"
#include "descriptors.hpp"
#include "report.hpp"
#include "suites.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace maasslab;
using namespace maasslab::cli;

unsigned seed_from_env() {
    const char* s = std::getenv("MAASSLAB_SEED");
    if (!s || !*s) return 42;
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(s, &used);
        if (used != std::string(s).size()) throw std::invalid_argument(s);
        return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
        throw ConfigError(std::string("MAASSLAB_SEED must be a non-negative integer, got '") + s + "'");
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

struct Options {
    std::optional<long> level;
    std::string kind = "Gamma0";
    std::string multiplier_path;
    std::string nu, k;
    std::optional<double> R;
    double h = 1e-3;
    std::optional<double> tol;
    std::string out;
    std::string format = "csv";
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool timing = false;
    std::string mutation;
    std::vector<std::string> operator_suites;
};

CongruenceSubgroup group_of(const Options& o, long fallback_level = 1) {
    try {
        return {parse_kind(o.kind), o.level.value_or(fallback_level)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SuiteConfig suite_config(const Options& o) {
    SuiteConfig c;
    c.level = o.level;
    try {
        c.kind = parse_kind(o.kind);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!o.multiplier_path.empty()) c.multiplier = load_multiplier(o.multiplier_path);
    if (!o.nu.empty()) c.nu = parse_complex(o.nu);
    if (!o.k.empty()) c.k = parse_complex(o.k);
    c.R = o.R;
    c.h = o.h;
    c.tol = o.tol;
    c.seed = seed_from_env();
    c.mutation = o.mutation;
    if (!o.mutation.empty()) {
        const auto& known = BasisRules::mutations();
        if (std::find(known.begin(), known.end(), o.mutation) == known.end())
            throw ConfigError("unknown mutation '" + o.mutation + "'");
    }
    if (!o.operator_suites.empty()) c.operator_suites = o.operator_suites;
    return c;
}

void emit(const Options& o, const std::vector<ReportRow>& rows) {
    auto write = [&](std::ostream& os) {
        if (o.format == "json")
            write_json(os, rows, o.timing);
        else
            write_csv(os, rows, o.timing);
    };
    if (o.out.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw ConfigError("cannot write " + o.out);
    write(f);
}

int report_exit(const std::vector<ReportRow>& rows) {
    int failed = 0;
    for (const auto& r : rows) {
        if (r.pass) continue;
        ++failed;
        std::cerr << "FAIL " << r.suite << "/" << r.id << ": residual " << format_double(r.residual) << " > tolerance "
                  << format_double(r.tolerance) << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
    }
    if (failed) std::cerr << failed << " of " << rows.size() << " rows failed\n";
    return failed ? 1 : 0;
}

void add_common(CLI::App* app, Options& o) {
    app->add_option("--level", o.level, "congruence level N")->check(CLI::PositiveNumber);
    app->add_option("--kind", o.kind, "Gamma0 | Gamma1 | Gamma");
    app->add_option("--multiplier", o.multiplier_path, "multiplier descriptor (JSON)");
    app->add_option("--nu", o.nu, "spectral parameter, e.g. 0.5+1.2i");
    app->add_option("--k", o.k, "weight");
    app->add_option("--R", o.R, "lattice cutoff")->check(CLI::PositiveNumber);
    app->add_option("--h", o.h, "finite-difference step")->check(CLI::PositiveNumber);
    app->add_option("--tol", o.tol, "tolerance for agreement and identity rows")->check(CLI::PositiveNumber);
    app->add_option("--out", o.out, "output file (default stdout)");
    app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_flag("--timing", o.timing, "add a wall-time column");
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- commands

int cmd_verify(const std::string& suite, const Options& o) {
    const SuiteConfig cfg = suite_config(o);
    const auto rows = run_cases(suite_cases(suite, cfg), o.jobs);
    emit(o, rows);
    return report_exit(rows);
}

int cmd_subgroup_info(const Options& o) {
    const CongruenceSubgroup G = group_of(o);
    json cs = json::array();
    for (const auto& q : cusps(G)) cs.push_back({{"cusp", q.q.to_string()}, {"width", q.width}});
    const Presentation pres(G);
    json homs = json::array();
    for (const auto& phi : pres.homomorphisms_to_z()) {
        json m = json::object();
        for (std::size_t i = 0; i < phi.size(); ++i)
            if (phi[i] != 0) m[std::to_string(i)] = phi[i];
        homs.push_back(m);
    }
    print_json({{"group", G.name()},
                {"index", G.index()},
                {"cosets", coset_reps(G).index()},
                {"cusps", cs},
                {"generators", pres.size()},
                {"relators", pres.relators().size()},
                {"homomorphisms_to_z", homs}});
    return 0;
}

int cmd_whittaker_eval(const Options& o, double y, bool normalized, const std::string& which) {
    if (o.k.empty() || o.nu.empty()) throw ConfigError("whittaker eval needs --k and --nu");
    if (!(y > 0.0)) throw ConfigError("--y must be positive");
    const WhittakerParams p{parse_complex(o.k), parse_complex(o.nu)};
    EvalResult r;
    if (which == "W")
        r = normalized ? normalized_W(p, y) : whittaker_W(p, y);
    else
        r = normalized ? normalized_M(p, y) : whittaker_M(p, y);
    print_json({{"function", (normalized ? "normalized " : "") + which},
                {"value", complex_json(r.value)},
                {"error", r.abs_error},
                {"method", method_name(r.method)}});
    return 0;
}

GeneralizedMaassForm form_from_spec(const ExpansionSpec& s, const Options& o) {
    const MultiplierSystem v = o.multiplier_path.empty() ? trivial_multiplier(s.group, s.expansion.k)
                                                         : load_multiplier(o.multiplier_path);
    if (v.group() != s.group) throw ConfigError("multiplier group " + v.group().name() + " differs from " + s.group.name());
    return form_from_expansion(s.expansion, s.group, v);
}

int cmd_form_eval(const Options& o, const std::string& spec, const std::string& zs) {
    const ExpansionSpec s = load_expansion(spec, group_of(o));
    const ExpansionValue v = eval_expansion(s.expansion, parse_point(zs));
    print_json({{"value", complex_json(v.value)}, {"error", v.error}});
    return 0;
}

int cmd_form_eisenstein(const Options& o, const std::string& zs) {
    const CongruenceSubgroup G = group_of(o);
    const MultiplierSystem v = o.multiplier_path.empty() ? trivial_multiplier(G) : load_multiplier(o.multiplier_path);
    const SeriesSpec s{Seed::power, o.nu.empty() ? Complex(1.5) : parse_complex(o.nu), 0.0, v, o.R.value_or(100.0)};
    const SeriesValue r = eisenstein_truncated(s, parse_point(zs));
    print_json({{"value", complex_json(r.value)}, {"tail_bound", r.tail_bound}, {"rounding", r.rounding}, {"terms", r.terms}});
    return 0;
}

int cmd_form_verify(const Options& o, const std::string& spec, const std::string& which) {
    const ExpansionSpec s = load_expansion(spec, group_of(o));
    const GeneralizedMaassForm u = form_from_spec(s, o);
    auto g = sampling::rng(seed_from_env() * 7919u + 900);
    Case c{"form", which, spec, 0.0, nullptr};
    if (which == "transformation") {
        c.tolerance = o.tol.value_or(1e-6);
        c.measure = [&] {
            return Measurement{verify_transformation(u, member_samples(g, coset_reps(s.group), 10, 0.5, 1.0, 0.5)),
                               "10 samples, Im z and Im gamma z >= 0.5"};
        };
    } else if (which == "eigen") {
        c.tolerance = o.tol.value_or(1e-6);
        c.measure = [&] {
            return Measurement{eigen_residual(u, sample_points(g, 10, 0.5, 2.0), o.h), "h=" + fmt(o.h)};
        };
    } else {
        // growth check: |u| e^{-c y} eventually non-increasing with c = M + 1/2
        c.tolerance = 0.0;
        c.measure = [&] {
            std::vector<double> grid;
            for (double y = 1.0; y <= 40.0; y += 1.0) grid.push_back(y);
            const bool ok = verify_growth(u, s.expansion.cusp, s.expansion.M + 0.5, grid);
            return Measurement{ok ? 0.0 : 1.0, ok ? "bounded" : "grows faster than e^{(M+1/2) y}"};
        };
    }
    const std::vector<ReportRow> rows{run_case(c)};
    emit(o, rows);
    return report_exit(rows);
}

int cmd_vv_induce(const Options& o, const std::string& word, const std::string& zs) {
    const CongruenceSubgroup G = group_of(o, 2);
    const MultiplierSystem v = o.multiplier_path.empty() ? trivial_multiplier(G) : load_multiplier(o.multiplier_path);
    if (v.group() != G) throw ConfigError("multiplier group " + v.group().name() + " differs from " + G.name());
    GroupElement h;
    try {
        h = parse_word(word);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const CosetTable t = coset_reps(G);
    const Matrix m = induced_weight_matrix(v, v.weight(), G, t)(h, parse_point(zs));
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    print_json({{"group", G.name()}, {"element", h.to_string()}, {"dimension", m.rows()}, {"matrix", rows}});
    return 0;
}

int cmd_vv_roundtrip(const Options& o, const std::string& spec) {
    const ExpansionSpec s = load_expansion(spec, group_of(o));
    const GeneralizedMaassForm u = form_from_spec(s, o);
    const CosetTable t = coset_reps(s.group);
    Case c{"vv", "roundtrip-" + s.group.name(), spec, o.tol.value_or(1e-12), [&] {
               auto g = sampling::rng(seed_from_env() * 7919u + 901);
               const auto pts = sample_points(g, 50, 0.9, 2.0);
               const auto vu = lift_Pi(u, t);
               const auto back = project_pi(vu, s.group, t);
               double worst = 0.0;
               for (const auto& z : pts) worst = std::max(worst, std::abs(back(z) - u(z)));
               worst = std::max(worst, vv_distance(lift_Pi(back, t), vu, pts));
               return Measurement{worst, "pi(Pi u) = u and Pi(pi Pi u) = Pi u on 50 points"};
           }};
    const std::vector<ReportRow> rows{run_case(c)};
    emit(o, rows);
    return report_exit(rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for generalized Maass forms"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    Options o;
    std::function<int()> action;

    auto* verify = app.add_subcommand("verify", "run verification suites and write a report");
    std::string suite = "all";
    verify->add_option("target", suite, "all | whittaker | operators | multiplier | forms | vvforms")
        ->check(CLI::IsMember({"all", "whittaker", "operators", "multiplier", "forms", "vvforms"}));
    verify->add_option("--suite", o.operator_suites, "operator sub-suites: basis, factorization, commutation")
        ->check(CLI::IsMember({"basis", "factorization", "commutation"}));
    verify->add_option("--mutate", o.mutation, "swap a basis-rule constant (harness self-test)");
    add_common(verify, o);
    verify->callback([&] { action = [&] { return cmd_verify(suite, o); }; });

    auto* subgroup = app.add_subcommand("subgroup", "coset and cusp data");
    subgroup->require_subcommand(1);
    auto* info = subgroup->add_subcommand("info", "index and cusps with widths");
    add_common(info, o);
    info->callback([&] { action = [&] { return cmd_subgroup_info(o); }; });

    auto* whit = app.add_subcommand("whittaker", "Whittaker functions");
    whit->require_subcommand(1);
    auto* weval = whit->add_subcommand("eval", "evaluate W or M at one point");
    double y = 0.0;
    bool normalized = false;
    std::string which = "W";
    weval->add_option("--y", y, "argument")->required();
    weval->add_flag("--normalized", normalized, "use the Gamma-normalized functions");
    weval->add_option("--function", which, "W | M")->check(CLI::IsMember({"W", "M"}));
    add_common(weval, o);
    weval->callback([&] { action = [&] { return cmd_whittaker_eval(o, y, normalized, which); }; });

    auto* form = app.add_subcommand("form", "scalar forms");
    form->require_subcommand(1);
    std::string spec, zs, check = "transformation";
    auto* feval = form->add_subcommand("eval-expansion", "evaluate an expansion descriptor");
    feval->add_option("--spec", spec, "expansion descriptor (JSON)")->required();
    feval->add_option("--z", zs, "point x,y")->required();
    add_common(feval, o);
    feval->callback([&] { action = [&] { return cmd_form_eval(o, spec, zs); }; });
    auto* feis = form->add_subcommand("eisenstein", "truncated Eisenstein series with tail bound");
    feis->add_option("--z", zs, "point x,y")->required();
    add_common(feis, o);
    feis->callback([&] { action = [&] { return cmd_form_eisenstein(o, zs); }; });
    auto* fver = form->add_subcommand("verify", "check one property of an expansion descriptor");
    fver->add_option("--spec", spec, "expansion descriptor (JSON)")->required();
    fver->add_option("--which", check, "transformation | growth | eigen")
        ->check(CLI::IsMember({"transformation", "growth", "eigen"}));
    add_common(fver, o);
    fver->callback([&] { action = [&] { return cmd_form_verify(o, spec, check); }; });

    auto* vv = app.add_subcommand("vv", "vector-valued forms");
    vv->require_subcommand(1);
    std::string word;
    auto* induce = vv->add_subcommand("induce", "induced weight matrix at one (h, z)");
    induce->add_option("--element", word, "word in S and T, e.g. \"S T^-2 S\"")->required();
    induce->add_option("--z", zs, "point x,y")->required();
    add_common(induce, o);
    induce->callback([&] { action = [&] { return cmd_vv_induce(o, word, zs); }; });
    auto* rt = vv->add_subcommand("roundtrip", "pi(Pi u) = u for an expansion descriptor");
    rt->add_option("--spec", spec, "expansion descriptor (JSON)")->required();
    add_common(rt, o);
    rt->callback([&] { action = [&] { return cmd_vv_roundtrip(o, spec); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return action();
    } catch (const ConfigError& e) {
        std::cerr << "maasslab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "maasslab: " << e.what() << "\n";
        return 1;
    }
}
