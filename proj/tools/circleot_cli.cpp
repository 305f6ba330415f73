// circleot: command-line front end. One subcommand per experiment, measure
// and field literals, deterministic seeding, JSON/CSV report emission, and a
// verify mode that re-checks a stored report's verdict from its samples.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "circleot/dynamics.hpp"
#include "circleot/experiments.hpp"
#include "circleot/field.hpp"
#include "circleot/json_io.hpp"
#include "circleot/measure.hpp"
#include "circleot/operators.hpp"
#include "circleot/transport.hpp"

namespace {

using circleot::CircleMeasure;
using circleot::ExpandingMap;
using circleot::TangentField;
using circleot::TrigPoly;
using json = circleot::json;

struct MapSpec {
    int degree = 2;
    double epsilon = 0.0;
};

// --map d=2,eps=0.3
MapSpec parse_map(const std::string& s) {
    MapSpec spec;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--map", "expected key=value: " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "d")
            spec.degree = std::stoi(val);
        else if (key == "eps")
            spec.epsilon = std::stod(val);
        else
            throw CLI::ValidationError("--map", "unknown key '" + key + "' (use d=, eps=)");
    }
    return spec;
}

// "1e-1:1e-4" -> half-decade log-spaced grid from the larger to the smaller.
std::vector<double> log_halves(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--t", "expected hi:lo, e.g. 1e-1:1e-4");
    double a = std::stod(s.substr(0, colon)), b = std::stod(s.substr(colon + 1));
    if (!(a > 0.0) || !(b > 0.0)) throw CLI::ValidationError("--t", "endpoints must be positive");
    double hi = std::max(a, b), lo = std::min(a, b);
    int steps = static_cast<int>(std::lround(2.0 * std::log10(hi / lo)));
    std::vector<double> out;
    for (int i = 0; i <= steps; ++i) out.push_back(hi * std::pow(10.0, -0.5 * i));
    return out;
}

// A single field term: [coef*]cos:k | sin:k | cantor:m | ramp.
TangentField parse_field_term(const std::string& term, int field_N) {
    double coef = 1.0;
    std::string body = term;
    auto star = term.find('*');
    if (star != std::string::npos) {
        coef = std::stod(term.substr(0, star));
        body = term.substr(star + 1);
    }
    TangentField f;
    if (body == "ramp") {
        Eigen::ArrayXd v(field_N);
        for (int i = 0; i < field_N; ++i) v[i] = 0.5 - static_cast<double>(i) / field_N;
        f = TangentField::from_samples(std::move(v));
    } else {
        auto colon = body.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--field",
                                       "expected cos:k, sin:k, cantor:m, or ramp: " + body);
        std::string kind = body.substr(0, colon);
        int arg = std::stoi(body.substr(colon + 1));
        if (kind == "cos")
            f = TangentField::from_trig(TrigPoly::cosine(arg), field_N);
        else if (kind == "sin")
            f = TangentField::from_trig(TrigPoly::sine(arg), field_N);
        else if (kind == "cantor")
            f = circleot::cantor_field(arg);
        else
            throw CLI::ValidationError("--field", "unknown field kind '" + kind + "'");
    }
    if (coef != 1.0) f = circleot::linear_combination({coef}, {f});
    return f;
}

// Comma-separated sum of terms as one field.
TangentField parse_field(const std::string& s, int field_N) {
    std::stringstream ss(s);
    std::string term;
    std::vector<TangentField> parts;
    while (std::getline(ss, term, ',')) parts.push_back(parse_field_term(term, field_N));
    if (parts.empty()) throw CLI::ValidationError("--field", "empty field spec");
    return circleot::linear_combination(std::vector<double>(parts.size(), 1.0), parts);
}

// Comma-separated list of terms as separate fields.
std::vector<TangentField> parse_field_list(const std::string& s, int field_N) {
    std::stringstream ss(s);
    std::string term;
    std::vector<TangentField> out;
    while (std::getline(ss, term, ',')) out.push_back(parse_field_term(term, field_N));
    if (out.empty()) throw CLI::ValidationError("--fields", "empty field list");
    return out;
}

std::vector<double> parse_weights(const std::string& s) {
    std::stringstream ss(s);
    std::string tok;
    std::vector<double> out;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

// uniform | dirac:<x> | mix:<w>*<m>+... | file:<path>
CircleMeasure parse_measure(const std::string& s) {
    if (s == "uniform") return CircleMeasure::uniform();
    if (s.rfind("dirac:", 0) == 0) return CircleMeasure::dirac(std::stod(s.substr(6)));
    if (s.rfind("file:", 0) == 0) {
        std::ifstream in(s.substr(5));
        if (!in) throw CLI::ValidationError("measure", "cannot open " + s.substr(5));
        json j;
        in >> j;
        return circleot::measure_from_json(j);
    }
    if (s.rfind("mix:", 0) == 0) {
        std::stringstream ss(s.substr(4));
        std::string term;
        std::vector<std::pair<double, CircleMeasure>> terms;
        while (std::getline(ss, term, '+')) {
            auto star = term.find('*');
            if (star == std::string::npos)
                throw CLI::ValidationError("measure", "mix terms are w*measure: " + term);
            terms.emplace_back(std::stod(term.substr(0, star)),
                               parse_measure(term.substr(star + 1)));
        }
        return circleot::convex_sum(terms);
    }
    throw CLI::ValidationError("measure",
                               "expected uniform, dirac:<x>, mix:<w>*<m>+..., file:<path>: " + s);
}

void write_report(const json& report, const std::string& out_path, const std::string& format) {
    if (out_path.empty()) return;
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    if (format == "csv")
        out << circleot::report_to_csv(report);
    else
        out << report.dump(2) << "\n";
}

int finish(const json& report, const std::string& out_path, const std::string& format,
           const std::string& line) {
    write_report(report, out_path, format);
    std::cout << "[" << report.at("verdict").get<std::string>() << "] " << line << "\n";
    return circleot::report_verdict(report) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L^p transport geometry of expanding circle maps"};
    app.require_subcommand(1);

    int default_N = 4096;
    if (const char* env = std::getenv("CIRCLE_OT_N")) default_N = std::atoi(env);

    std::string map_str = "d=2,eps=0";
    int N = default_N;
    std::uint64_t seed = 1;
    std::string out_path, format = "json";
    int field_N = 65536;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--map", map_str, "map spec, e.g. d=2,eps=0.3");
        sub->add_option("--N", N, "quantization resolution")->capture_default_str();
        sub->add_option("--seed", seed, "seed for stochastic subsampling");
        sub->add_option("--out", out_path, "report output path");
        sub->add_option("--format", format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--field-N", field_N, "field sample grid")->capture_default_str();
    };

    // wasserstein
    auto* cw = app.add_subcommand("wasserstein", "W_p distance between two measures");
    std::string mu_str = "uniform", nu_str = "uniform";
    double p = 2.0;
    cw->add_option("--mu", mu_str, "first measure literal");
    cw->add_option("--nu", nu_str, "second measure literal");
    cw->add_option("--p", p, "exponent p >= 1")->capture_default_str();
    add_common(cw);

    // derivative-check
    auto* cd = app.add_subcommand("derivative-check",
                                  "pushforward derivative slope certificate");
    std::string field_str, t_str = "1e-1:1e-4";
    cd->add_option("--field", field_str, "tangent field, e.g. cos:2")->required();
    cd->add_option("--t", t_str, "t grid hi:lo, half-decade steps")->capture_default_str();
    add_common(cd);

    // convex-split
    auto* cc = app.add_subcommand("convex-split",
                                  "displacement of a sum vs convex sum of displacements");
    std::string fields_str, weights_str;
    cc->add_option("--fields", fields_str, "comma list of fields")->required();
    cc->add_option("--weights", weights_str, "comma list of convex weights")->required();
    cc->add_option("--t", t_str, "t grid hi:lo")->capture_default_str();
    add_common(cc);

    // counterexample
    auto* cx = app.add_subcommand("counterexample",
                                  "sawtooth non-differentiability certificate");
    int k = 4;
    cx->add_option("--k", k, "number of teeth")->capture_default_str();
    add_common(cx);

    // nearly-invariant
    auto* cn = app.add_subcommand("nearly-invariant",
                                  "nearly invariant family along eigenfields");
    int n_fields = 2, K = 3;
    double eta = 0.05;
    std::string a_str = "1e-1:1e-3";
    cn->add_option("--n", n_fields, "number of eigenfields")->capture_default_str();
    cn->add_option("--eta", eta, "chart radius")->capture_default_str();
    cn->add_option("--a", a_str, "|a| grid hi:lo")->capture_default_str();
    cn->add_option("--K", K, "drift table depth")->capture_default_str();
    add_common(cn);

    // mdim
    auto* cm = app.add_subcommand("mdim", "separated sets of atomic measures");
    int md = 2, mk = 2, mn = 1;
    double malpha = 1.0, mp = 1.0;
    cm->add_option("--d", md, "degree")->capture_default_str();
    cm->add_option("--k", mk, "scale exponent")->capture_default_str();
    cm->add_option("--alpha", malpha, "Holder exponent")->capture_default_str();
    cm->add_option("--p", mp, "transport exponent")->capture_default_str();
    cm->add_option("--n", mn, "recursion depth")->capture_default_str();
    add_common(cm);

    // atoms
    auto* ca = app.add_subcommand("atoms", "atom scan of displaced measures");
    std::string amu_str = "uniform", afield_str = "cantor:6";
    double tmax = 1.0, width_tol = 1e-9;
    int count = 200;
    ca->add_option("--mu", amu_str, "atomless base measure literal");
    ca->add_option("--field", afield_str, "displacement field");
    ca->add_option("--tmax", tmax, "largest t")->capture_default_str();
    ca->add_option("--count", count, "number of t samples")->capture_default_str();
    ca->add_option("--width-tol", width_tol, "atom width tolerance")->capture_default_str();
    add_common(ca);

    // cantor
    auto* cf = app.add_subcommand("cantor", "four-corner least-y selection field");
    int depth = 6;
    cf->add_option("--depth", depth, "construction depth")->capture_default_str();
    add_common(cf);

    // spectrum
    auto* cs = app.add_subcommand("spectrum",
                                  "invariant density, growth rate, eigenfield residuals");
    int rg_n = 8, eigen_count = 2;
    cs->add_option("--n", rg_n, "growth-rate iterate depth")->capture_default_str();
    cs->add_option("--eigen-count", eigen_count, "eigenfields to extract")
        ->capture_default_str();
    add_common(cs);

    // bilipschitz
    auto* cb = app.add_subcommand("bilipschitz", "empirical bi-Lipschitz chart certificate");
    std::string bmu_str = "uniform", bfields_str = "cos:1,sin:1";
    double beta = 1e-2;
    int pairs = 20;
    cb->add_option("--mu", bmu_str, "base measure literal");
    cb->add_option("--fields", bfields_str, "comma list of chart fields");
    cb->add_option("--eta", beta, "chart ball radius")->capture_default_str();
    cb->add_option("--pairs", pairs, "random pairs to test")->capture_default_str();
    add_common(cb);

    // verify
    auto* cv = app.add_subcommand("verify", "re-check a stored report's verdict");
    std::string report_path;
    cv->add_option("report", report_path, "path to a JSON report")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nrun with --help for usage\n";
        return 1;
    }

    try {
        if (cv->parsed()) {
            std::ifstream in(report_path);
            if (!in) throw std::runtime_error("cannot open " + report_path);
            json report;
            in >> report;
            bool stored = circleot::report_verdict(report);
            bool recomputed = circleot::reverify_report(report);
            bool consistent = stored == recomputed;
            std::cout << "[" << (consistent ? "ok" : "mismatch") << "] "
                      << report.at("name").get<std::string>() << " stored="
                      << (stored ? "pass" : "fail") << " recomputed="
                      << (recomputed ? "pass" : "fail") << "\n";
            return consistent && stored ? 0 : 2;
        }

        MapSpec ms = parse_map(map_str);
        json params{{"map", json{{"degree", ms.degree}, {"epsilon", ms.epsilon}}},
                    {"N", N},
                    {"seed", seed}};

        if (cw->parsed()) {
            params["mu"] = mu_str;
            params["nu"] = nu_str;
            params["p"] = p;
            auto r = circleot::wasserstein(parse_measure(mu_str), parse_measure(nu_str), p, N);
            json report = circleot::wasserstein_report_json(r, params);
            write_report(report, out_path, format);
            std::printf("%.17g\n", r.cost);
            return 0;
        }
        if (cd->parsed()) {
            params["field"] = field_str;
            params["t"] = t_str;
            params["field_N"] = field_N;
            ExpandingMap map(ms.degree, ms.epsilon);
            auto rho = circleot::invariant_density(map, 2048, 1e-10);
            auto rep = circleot::derivative_slope_check(map, rho, parse_field(field_str, field_N),
                                                        log_halves(t_str), N);
            json report = circleot::slope_report_json("derivative-check", rep, params);
            std::ostringstream line;
            line << "derivative-check slope=" << rep.fitted_slope
                 << (rep.main_at_floor ? " (at floor)" : "")
                 << " control=" << rep.control_slope;
            return finish(report, out_path, format, line.str());
        }
        if (cc->parsed()) {
            params["fields"] = fields_str;
            params["weights"] = weights_str;
            params["t"] = t_str;
            params["field_N"] = field_N;
            ExpandingMap map(ms.degree, ms.epsilon);
            auto rho = circleot::invariant_density(map, 2048, 1e-10);
            auto rep = circleot::convex_split_check(rho, parse_field_list(fields_str, field_N),
                                                    parse_weights(weights_str),
                                                    log_halves(t_str), N);
            json report = circleot::slope_report_json("convex-split", rep, params);
            std::ostringstream line;
            line << "convex-split slope=" << rep.fitted_slope
                 << (rep.main_at_floor ? " (at floor)" : "");
            return finish(report, out_path, format, line.str());
        }
        if (cx->parsed()) {
            params["k"] = k;
            auto rep = circleot::non_frechet_counterexample(k);
            json report = circleot::counterexample_report_json(rep, params);
            std::ostringstream line;
            line << "counterexample k=" << k << " W=" << rep.w_lambda_mu
                 << " bound=" << rep.lower_bound << " ratio=" << rep.ratio;
            return finish(report, out_path, format, line.str());
        }
        if (cn->parsed()) {
            params["n"] = n_fields;
            params["eta"] = eta;
            params["a"] = a_str;
            params["K"] = K;
            ExpandingMap map(ms.degree, ms.epsilon);
            auto rep = circleot::nearly_invariant_family(map, n_fields, eta, log_halves(a_str),
                                                         K, 0.05, N);
            json report = circleot::nearly_invariant_report_json(rep, params);
            std::ostringstream line;
            line << "nearly-invariant slope=" << rep.slope.fitted_slope
                 << " decay=" << rep.ratio_decay << " r*=" << rep.r_star;
            return finish(report, out_path, format, line.str());
        }
        if (cm->parsed()) {
            params["d"] = md;
            params["k"] = mk;
            params["alpha"] = malpha;
            params["p"] = mp;
            params["n"] = mn;
            auto rep = circleot::mdim_separated_sets(md, mk, malpha, mp, mn, seed);
            json report = circleot::mdim_report_json(rep, params);
            std::ostringstream line;
            line << "mdim size=" << rep.set_size << " eps=" << rep.eps
                 << " min_bowen=" << rep.min_pairwise_bowen;
            return finish(report, out_path, format, line.str());
        }
        if (ca->parsed()) {
            params["mu"] = amu_str;
            params["field"] = afield_str;
            params["tmax"] = tmax;
            params["count"] = count;
            params["width_tol"] = width_tol;
            params["field_N"] = field_N;
            std::vector<double> ts;
            for (int i = 1; i <= count; ++i) ts.push_back(tmax * i / count);
            auto rep = circleot::atomless_scan(parse_measure(amu_str),
                                               parse_field(afield_str, field_N), ts, N,
                                               width_tol);
            json report = circleot::atoms_report_json(rep, params);
            std::ostringstream line;
            line << "atoms fraction=" << rep.fraction << " threshold=" << rep.detect_threshold;
            return finish(report, out_path, format, line.str());
        }
        if (cf->parsed()) {
            auto field = circleot::cantor_field(depth);
            json report = circleot::cantor_report_json(field, depth);
            std::ostringstream line;
            line << "cantor depth=" << depth << " samples=" << field.n()
                 << " min=" << field.samples.minCoeff();
            return finish(report, out_path, format, line.str());
        }
        if (cs->parsed()) {
            params["n"] = rg_n;
            params["eigen_count"] = eigen_count;
            ExpandingMap map(ms.degree, ms.epsilon);
            auto rho = circleot::invariant_density(map, 2048,
                                                   ms.epsilon == 0.0 ? 1e-12 : 1e-8);
            double rg = circleot::estimate_Rg(map, rho, rg_n);
            auto ef = circleot::general_eigenfunctions(map, rho, 65536, eigen_count);
            json report = circleot::spectrum_report_json(rg, rg_n, map, rho.residual,
                                                         ef.residuals, params);
            std::ostringstream line;
            line << "spectrum R_g=" << rg << " min_deriv=" << map.min_deriv()
                 << " density_residual=" << rho.residual;
            return finish(report, out_path, format, line.str());
        }
        if (cb->parsed()) {
            params["mu"] = bmu_str;
            params["fields"] = bfields_str;
            params["eta"] = beta;
            params["pairs"] = pairs;
            params["field_N"] = field_N;
            auto rep = circleot::bilipschitz_check(parse_measure(bmu_str),
                                                   parse_field_list(bfields_str, field_N), beta,
                                                   pairs, seed, 8192, N);
            json report = circleot::bilipschitz_report_json(rep, params);
            std::ostringstream line;
            line << "bilipschitz c=" << rep.c_emp << " C=" << rep.C_emp
                 << " sigma_min=" << rep.sigma_min;
            return finish(report, out_path, format, line.str());
        }
        std::cerr << "no subcommand executed\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
