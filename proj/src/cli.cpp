#include "blaschke/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "blaschke/canonical_products.hpp"
#include "blaschke/circle_geometry.hpp"
#include "blaschke/errors.hpp"
#include "blaschke/growth_analysis.hpp"
#include "blaschke/io.hpp"
#include "blaschke/lune_local.hpp"
#include "blaschke/prime_factors.hpp"

namespace blaschke {

namespace {

namespace fs = std::filesystem;
using Options = std::map<std::string, std::string>;

struct OptionSpec {
    const char* name;
    const char* help;
    bool flag = false;
};

// Options accepted by each subcommand. Inputs named "set" and "zeros" are
// files whose content hash goes into the manifest.
const std::map<std::string, std::vector<OptionSpec>>& command_table() {
    static const std::map<std::string, std::vector<OptionSpec>> table = {
        {"set",
         {{"set", "set description (JSON file)"},
          {"kind", "points|arcs|geometric_tail|power_tail|log_tail|cantor|circle"},
          {"angles", "comma-separated angles (points)"},
          {"omega", "Cantor ratio"},
          {"depth", "truncation depth"},
          {"gamma", "power-tail exponent"},
          {"metric", "chord|arc"},
          {"beta", "print the type", true}}},
        {"factor",
         {{"z", "re,im of z (Weierstrass factor)"},
          {"w", "re,im of w (Nevanlinna factor)"},
          {"omega", "re,im of omega (Nevanlinna factor)"},
          {"p", "factor order"}}},
        {"product",
         {{"kind", "golubev|nevanlinna|blaschke"},
          {"rho", "growth parameter rho > 0"},
          {"set", "singular set (JSON file)"},
          {"zeros", "zero list (CSV re,im,multiplicity)"},
          {"grid", "n_radial,n_angular,d_min,d_max"},
          {"tolerance", "tail tolerance"}}},
        {"verify",
         {{"zeros", "zero list (CSV)"},
          {"set", "singular set (JSON file)"},
          {"q", "exponent of the Blaschke-type sum"},
          {"rho", "growth order; uses q = (rho - beta(E) + epsilon)_+"},
          {"epsilon", "epsilon for --rho (default 0.1)"},
          {"report", "report CSV path (default <out>/verify.csv)"}}},
        {"local",
         {{"set", "singular set (JSON file)"},
          {"zeros", "zero list (CSV)"},
          {"t", "angle of the lune centre"},
          {"tau", "lune radius in (0,1)"},
          {"rho", "growth order"},
          {"epsilon", "epsilon > 0"}}},
        {"example", {{"name", "example name (zone)"}, {"rho", "rho > 0"}, {"n", "number of zeros"}}},
    };
    return table;
}

class Args {
public:
    explicit Args(const Options& o) : o_(o) {}
    bool has(const std::string& k) const { return o_.count(k) > 0; }
    std::string str(const std::string& k) const {
        if (!has(k)) throw ParameterError("missing option --" + k);
        return o_.at(k);
    }
    std::string str(const std::string& k, const std::string& dflt) const { return has(k) ? o_.at(k) : dflt; }
    double num(const std::string& k) const { return to_double(str(k), k); }
    double num(const std::string& k, double dflt) const { return has(k) ? num(k) : dflt; }
    long integer(const std::string& k, long dflt) const {
        if (!has(k)) return dflt;
        const double v = num(k);
        if (v != std::floor(v)) throw ParameterError("--" + k + " must be an integer");
        return static_cast<long>(v);
    }
    std::vector<double> list(const std::string& k) const {
        std::vector<double> out;
        std::stringstream ss(str(k));
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(to_double(cell, k));
        return out;
    }
    std::complex<double> complex(const std::string& k) const {
        const auto v = list(k);
        if (v.size() != 2) throw ParameterError("--" + k + " expects re,im");
        return {v[0], v[1]};
    }

private:
    static double to_double(const std::string& s, const std::string& k) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw ParameterError("--" + k + ": not a number: '" + s + "'");
    }
    const Options& o_;
};

std::string fmt(double x) { return format_double(x); }

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Converges: return kExitOk;
        case Verdict::Diverges: return kExitViolated;
        case Verdict::Indeterminate: return kExitBadInput;
    }
    return kExitBadInput;
}

ClosedCircularSet set_from_args(const Args& a) {
    if (a.has("set")) return load_set(a.str("set"));
    nlohmann::json j;
    j["kind"] = a.str("kind");
    if (a.has("angles")) j["angles"] = a.list("angles");
    if (a.has("omega")) j["omega"] = a.num("omega");
    if (a.has("depth")) j["depth"] = a.integer("depth", 0);
    if (a.has("gamma")) j["gamma"] = a.num("gamma");
    if (a.has("metric")) j["metric"] = a.str("metric");
    return parse_set_json(j.dump());
}

int cmd_set(const Args& a, const fs::path& out_dir, std::ostream& out) {
    const ClosedCircularSet E = set_from_args(a);
    const TypeEstimate fit = type_beta(E, TypeMethod::LogLogFit);
    std::string analytic = "nan";
    if (E.generator()) analytic = fmt(type_beta(E, TypeMethod::Analytic).beta);
    CsvWriter summary({"kind", "arcs", "direct_measure", "truncation_measure", "resolution", "beta_analytic",
                       "beta_fit", "fit_x_min", "fit_x_max", "fit_residual"});
    summary.row({E.generator() ? generator_name(*E.generator()) : "union", std::to_string(E.point_count()),
                 fmt(E.direct_measure()), fmt(E.truncation_measure()), fmt(E.resolution()), analytic, fmt(fit.beta),
                 fmt(fit.fit_window.first), fmt(fit.fit_window.second), fmt(fit.residual)});
    summary.save(out_dir / "set.csv");
    CsvWriter nb({"x", "measure"});
    for (int k = 0; k <= 30; ++k) {
        const double x = std::ldexp(2.0, -k);
        nb.row({fmt(x), fmt(neighborhood_measure(E, x))});
    }
    nb.save(out_dir / "neighborhood.csv");
    if (a.has("beta")) out << "beta_fit=" << fmt(fit.beta) << " beta_analytic=" << analytic << "\n";
    return kExitOk;
}

int cmd_factor(const Args& a, const fs::path& out_dir, std::ostream& out) {
    const int p = static_cast<int>(a.integer("p", 1));
    CsvWriter csv({"item", "re", "im", "lhs", "rhs", "satisfied"});
    bool ok = true;
    auto add_reports = [&](const std::vector<BoundReport>& reports) {
        for (const auto& r : reports) {
            csv.row({to_string(r.bound_id), "", "", fmt(r.lhs), fmt(r.rhs), r.satisfied ? "1" : "0"});
            ok = ok && r.satisfied;
        }
    };
    bool any = false;
    if (a.has("z")) {
        const auto z = a.complex("z");
        const auto w = weierstrass_factor(z, p);
        csv.row({"W", fmt(w.real()), fmt(w.imag()), "", "", ""});
        add_reports(check_weierstrass_bounds(z, p));
        any = true;
    }
    if (a.has("w") || a.has("omega")) {
        const auto w = a.complex("w");
        const auto om = a.complex("omega");
        const auto n = nevanlinna_factor(w, om, p);
        csv.row({"N", fmt(n.real()), fmt(n.imag()), "", "", ""});
        add_reports(check_nevanlinna_bounds(w, om, p));
        any = true;
    }
    if (!any) throw ParameterError("factor: give --z or --w/--omega");
    csv.save(out_dir / "factor.csv");
    out << csv.str();
    return ok ? kExitOk : kExitViolated;
}

int cmd_product(const Args& a, const fs::path& out_dir, std::ostream& out) {
    const ClosedCircularSet E = load_set(a.str("set"));
    auto zeros = load_zeros(a.str("zeros"));
    const std::string kind = a.str("kind", "nevanlinna");
    const double rho = a.num("rho", 1.0);
    ProductOptions opt;
    opt.tolerance = a.num("tolerance", opt.tolerance);
    const CanonicalProduct f = kind == "golubev"      ? CanonicalProduct::golubev(zeros, E, rho, opt)
                               : kind == "nevanlinna" ? CanonicalProduct::nevanlinna(zeros, E, rho, opt)
                               : kind == "blaschke"   ? CanonicalProduct::blaschke(zeros, E)
                                                      : throw ParameterError("unknown product kind '" + kind + "'");
    GridSpec grid;
    if (a.has("grid")) {
        const auto g = a.list("grid");
        if (g.size() != 4) throw ParameterError("--grid expects n_radial,n_angular,d_min,d_max");
        grid = {g[2], g[3], static_cast<int>(g[0]), static_cast<int>(g[1])};
    }
    const auto pts = disk_grid(grid, E);
    CsvWriter csv({"re", "im", "log_abs", "d", "tail_bound"});
    for (const auto& z : pts) {
        const CertifiedValue v = f.evaluate(z);
        csv.row({fmt(z.real()), fmt(z.imag()), fmt(v.log_abs()), fmt(f.distance_to_singular_set(z)),
                 fmt(v.tail_bound)});
    }
    csv.save(out_dir / "product.csv");
    const GrowthCertificate cert = growth_certificate(f, rho + 1.0, grid);
    CsvWriter c({"kind", "exponent", "fitted_constant", "points", "max_violation", "delta", "rotation"});
    c.row({to_string(f.kind()), fmt(cert.exponent), fmt(cert.fitted_constant), std::to_string(cert.points),
           fmt(cert.max_violation), fmt(f.delta()), fmt(f.rotation())});
    c.save(out_dir / "certificate.csv");
    out << c.str();
    return cert.max_violation <= 0.0 ? kExitOk : kExitViolated;
}

int cmd_verify(const Args& a, const fs::path& out_dir, std::ostream& out) {
    const ClosedCircularSet E = load_set(a.str("set"));
    const auto zeros = load_zeros(a.str("zeros"));
    double q = 0.0;
    if (a.has("q")) {
        q = a.num("q");
    } else if (a.has("rho")) {
        const double beta = type_beta(E, TypeMethod::LogLogFit).beta;
        q = std::max(0.0, a.num("rho") - beta + a.num("epsilon", 0.1));
    } else {
        throw ParameterError("verify: give --q or --rho");
    }
    const BlaschkeSum s = blaschke_type_sum(zeros, E, q);
    CsvWriter report({"n", "partial_sum"});
    for (std::size_t i = 0; i < s.partial_sums.size(); ++i) report.row({std::to_string(i + 1), fmt(s.partial_sums[i])});
    report.save(a.has("report") ? fs::path(a.str("report")) : out_dir / "verify.csv");
    CsvWriter summary({"q", "terms", "sum", "verdict", "finite", "slope"});
    const double total = s.partial_sums.empty() ? 0.0 : s.partial_sums.back();
    summary.row({fmt(q), std::to_string(s.partial_sums.size()), fmt(total), to_string(s.fit.verdict),
                 s.fit.finite ? "1" : "0", fmt(s.fit.slope)});
    summary.save(out_dir / "verify_summary.csv");
    out << summary.str();
    return verdict_exit(s.fit.verdict);
}

int cmd_local(const Args& a, const fs::path& out_dir, std::ostream& out) {
    const ClosedCircularSet E = load_set(a.str("set"));
    const auto zeros = load_zeros(a.str("zeros"));
    const LocalSum s = local_blaschke_sum(zeros, E, CirclePoint(a.num("t", 0.0)), a.num("tau", 0.5),
                                          a.num("rho", 1.0), a.num("epsilon", 0.1));
    CsvWriter csv({"delta", "eta", "beta_t", "exponent", "zeros_in_lune", "sum", "verdict"});
    csv.row({fmt(s.delta), fmt(s.eta), fmt(s.beta_t), fmt(s.exponent), std::to_string(s.zeros_in_lune),
             fmt(s.partial_sums.empty() ? 0.0 : s.partial_sums.back()), to_string(s.fit.verdict)});
    csv.save(out_dir / "local.csv");
    CsvWriter sums({"n", "partial_sum"});
    for (std::size_t i = 0; i < s.partial_sums.size(); ++i) sums.row({std::to_string(i + 1), fmt(s.partial_sums[i])});
    sums.save(out_dir / "local_partial_sums.csv");
    out << csv.str();
    return verdict_exit(s.fit.verdict);
}

int cmd_example(const Args& a, const fs::path& out_dir, std::ostream& out) {
    const std::string name = a.str("name", "zone");
    if (name != "zone") throw ParameterError("unknown example '" + name + "'");
    const double rho = a.num("rho", 1.0);
    const long n = a.integer("n", 1000);
    if (n < 1) throw ParameterError("--n must be >= 1");
    const auto zeros = example_zero_set(rho, static_cast<std::size_t>(n));
    CsvWriter zcsv({"re", "im", "multiplicity"});
    for (const auto& z : zeros) zcsv.row({fmt(z.point.real()), fmt(z.point.imag()), std::to_string(z.multiplicity)});
    zcsv.save(out_dir / "zeros.csv");

    // box table for r = i/101 while the boxes stay inside the generated range
    const double c = std::exp2(rho + 1.0);
    CsvWriter boxes({"r", "k", "l_k", "box_count", "lower", "upper", "holds"});
    bool all = true;
    for (int i = 1; i <= 100; ++i) {
        const double r = i / 101.0;
        const BoxIndices b = example_box_indices(rho, r);
        if (b.k + b.l > static_cast<std::size_t>(n)) break;
        const std::size_t count = box_count(zeros, r, 0.0);
        const double lower = (c - 1.0) * b.k, upper = (c - 1.0) * b.k + c + 1.0;
        const bool holds = lower <= b.l && b.l < upper && count == b.l;
        all = all && holds;
        boxes.row({fmt(r), std::to_string(b.k), std::to_string(b.l), std::to_string(count), fmt(lower), fmt(upper),
                   holds ? "1" : "0"});
    }
    boxes.save(out_dir / "boxes.csv");
    out << "zeros=" << zeros.size() << " boxes_hold=" << (all ? 1 : 0) << "\n";
    return kExitOk;
}

Manifest make_manifest(const ExperimentConfig& config) {
    Manifest m;
    m.entries["command"] = config.command;
    m.entries["out"] = config.out_dir.string();
    for (const auto& [k, v] : config.options) {
        m.entries["option." + k] = v;
        if (k == "set" || k == "zeros") m.entries["input." + k + ".sha1"] = git_blob_sha1(read_file(v));
    }
    return m;
}

ExperimentConfig config_from_manifest(const Manifest& m) {
    ExperimentConfig c;
    if (!m.entries.count("command")) throw ParameterError("manifest has no command");
    c.command = m.entries.at("command");
    if (m.entries.count("out")) c.out_dir = m.entries.at("out");
    for (const auto& [k, v] : m.entries) {
        if (k.rfind("option.", 0) == 0) c.options[k.substr(7)] = v;
    }
    // inputs must not have changed since the recorded run
    for (const auto& [k, v] : m.entries) {
        if (k.rfind("input.", 0) != 0) continue;
        const std::string key = k.substr(6, k.size() - 6 - 5);
        if (!c.options.count(key) || git_blob_sha1(read_file(c.options.at(key))) != v)
            throw ParameterError("manifest input '" + key + "' does not match its recorded hash");
    }
    return c;
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& out) {
    const auto& table = command_table();
    if (!table.count(config.command)) throw ParameterError("unknown command '" + config.command + "'");
    fs::create_directories(config.out_dir);
    const Args a(config.options);
    int code = kExitOk;
    if (config.command == "set") code = cmd_set(a, config.out_dir, out);
    else if (config.command == "factor") code = cmd_factor(a, config.out_dir, out);
    else if (config.command == "product") code = cmd_product(a, config.out_dir, out);
    else if (config.command == "verify") code = cmd_verify(a, config.out_dir, out);
    else if (config.command == "local") code = cmd_local(a, config.out_dir, out);
    else code = cmd_example(a, config.out_dir, out);
    write_file(config.out_dir / "manifest.txt", make_manifest(config).str());
    return code;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Canonical products and Blaschke-type conditions in the unit disk"};
    app.require_subcommand(0, 1);
    std::string out_dir, manifest;
    app.add_option("--out", out_dir, "output directory (default blaschke_out)");
    app.add_option("--manifest", manifest, "replay the run recorded in this manifest");

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::map<std::string, bool>> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [cmd, specs] : command_table()) {
        static const std::map<std::string, std::string> about = {
            {"set", "neighbourhood measures and type of a closed set E"},
            {"factor", "Weierstrass and Nevanlinna prime factors with their bounds"},
            {"product", "evaluate a canonical product on a grid and fit a growth certificate"},
            {"verify", "Blaschke-type sum of a zero set and its convergence verdict"},
            {"local", "local Blaschke-type sum over a lune at t"},
            {"example", "zone example zero set and its box counts"},
        };
        CLI::App* sub = app.add_subcommand(cmd, about.at(cmd));
        subs[cmd] = sub;
        sub->add_option("--out", out_dir, "output directory");
        for (const auto& s : specs) {
            if (s.flag) sub->add_flag(std::string("--") + s.name, flags[cmd][s.name], s.help);
            else sub->add_option(std::string("--") + s.name, values[cmd][s.name], s.help);
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        ExperimentConfig config;
        if (!manifest.empty()) {
            config = config_from_manifest(Manifest::parse(read_file(manifest)));
        } else {
            for (const auto& [cmd, sub] : subs) {
                if (!sub->parsed()) continue;
                config.command = cmd;
                for (const auto& s : command_table().at(cmd)) {
                    const std::string opt = std::string("--") + s.name;
                    if (sub->count(opt) == 0) continue;
                    config.options[s.name] = s.flag ? "1" : values[cmd][s.name];
                }
            }
            if (config.command.empty()) {
                err << app.help();
                return kExitBadInput;
            }
        }
        if (!out_dir.empty()) config.out_dir = out_dir;
        return run(config, out);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << "\n";
    } catch (const PoleError& e) {
        err << "pole: " << e.what() << "\n";
    } catch (const BudgetError& e) {
        err << "budget: " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        err << "file error: " << e.what() << "\n";
    }
    return kExitBadInput;
}

}  // namespace blaschke
