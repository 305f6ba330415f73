#include "circleot/json_io.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace circleot {

namespace {

json slope_rows(const std::vector<SlopeSample>& ss) {
    json rows = json::array();
    for (const auto& s : ss)
        rows.push_back(json{{"t", s.t}, {"distance", s.distance}, {"floor", s.floor}});
    return rows;
}

struct SlopeFit {
    double slope = 0.0;
    std::size_t cleared = 0;
    bool at_floor = false;
};

// Identical decision rule to the experiment layer: fit only samples that
// clear ten quantization floors.
SlopeFit fit_rows(const json& rows) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
        double d = r.at("distance").get<double>();
        double fl = r.at("floor").get<double>();
        if (d > 10.0 * fl) pts.emplace_back(r.at("t").get<double>(), d);
    }
    SlopeFit fit;
    fit.cleared = pts.size();
    fit.at_floor = pts.empty();
    if (pts.size() >= 2) fit.slope = loglog_slope(pts);
    return fit;
}

bool reverify_slope_main(const json& rep, bool with_control) {
    double threshold = rep.at("params").at("threshold").get<double>();
    SlopeFit main = fit_rows(rep.at("samples"));
    bool main_ok = main.at_floor || (main.cleared >= 2 && main.slope >= threshold);
    if (!with_control) return main_ok;
    SlopeFit ctrl = fit_rows(rep.at("derived").at("control"));
    bool control_ok = ctrl.cleared >= 2 && ctrl.slope >= 0.9 && ctrl.slope <= 1.1;
    return main_ok && control_ok;
}

bool reverify_nearly_invariant(const json& rep) {
    const json& params = rep.at("params");
    const json& derived = rep.at("derived");
    double threshold = params.at("threshold").get<double>();
    SlopeFit main = fit_rows(rep.at("samples"));
    bool slope_ok = main.at_floor || (main.cleared >= 2 && main.slope >= threshold);

    // Rows with a = 0 are informational (F(0) is exactly the reference
    // measure) and take no part in the decision, mirroring the experiment.
    std::vector<const json*> rows;
    for (const auto& row : derived.at("drift_rows"))
        if (row.at("a").get<double>() > 0.0) rows.push_back(&row);
    if (rows.empty()) return false;
    auto first_ratio = [](const json& row) {
        return row.at("drift").at(0).get<double>() / row.at("a").get<double>();
    };
    double decay = first_ratio(*rows.front()) / std::max(first_ratio(*rows.back()), 1e-300);
    bool decay_ok = decay >= 3.0;

    double lip = derived.at("lip").get<double>();
    double fl = rep.at("samples").at(0).at("floor").get<double>();
    bool drift_ok = true;
    for (const json* row_ptr : rows) {
        const json& row = *row_ptr;
        double d1 = row.at("drift").at(0).get<double>();
        for (std::size_t j = 1; j <= row.at("drift").size(); ++j) {
            double factor = (std::pow(lip, double(j)) - 1.0) / (lip - 1.0);
            if (row.at("drift").at(j - 1).get<double>() > factor * d1 * 1.01 + 10.0 * fl)
                drift_ok = false;
        }
    }
    return slope_ok && decay_ok && drift_ok;
}

bool reverify_counterexample(const json& rep) {
    const json& d = rep.at("derived");
    return std::fabs(d.at("norm_v").get<double>() - d.at("norm_expected").get<double>()) <=
               1e-12 &&
           d.at("fourier_residual").get<double>() <= 1e-8 &&
           d.at("pushforward_mismatch").get<double>() <= 1e-6 &&
           d.at("w_lambda_mu").get<double>() >= d.at("lower_bound").get<double>() &&
           d.at("ratio").get<double>() >= std::sqrt(3.0) / 4.0 * (1.0 - 1e-9);
}

bool reverify_mdim(const json& rep) {
    const json& d = rep.at("derived");
    int n = rep.at("params").at("n").get<int>();
    bool separated =
        n == 0 || d.at("min_pairwise_bowen").get<double>() >= d.at("eps").get<double>();
    return separated && d.at("a_k_membership").get<bool>() &&
           d.at("full_size").get<std::size_t>() >= d.at("bound_size").get<std::size_t>();
}

bool reverify_atoms(const json& rep) {
    double threshold = rep.at("derived").at("detect_threshold").get<double>();
    const json& rows = rep.at("samples");
    if (rows.empty()) return false;
    std::size_t detected = 0;
    for (const auto& r : rows)
        if (r.at("max_mass").get<double>() >= threshold) ++detected;
    return static_cast<double>(detected) / static_cast<double>(rows.size()) <= 0.05 + 1e-12;
}

bool reverify_cantor(const json& rep) {
    const json& d = rep.at("derived");
    long expect = 1L << (2 * d.at("depth").get<int>());
    return std::fabs(d.at("mean").get<double>()) <= 1e-12 &&
           d.at("n_samples").get<long>() == expect;
}

bool reverify_spectrum(const json& rep) {
    const json& d = rep.at("derived");
    double rg = d.at("R_g").get<double>();
    double eps = d.at("epsilon").get<double>();
    bool ok = rg >= d.at("min_deriv").get<double>() - 0.05;
    if (eps == 0.0) ok = ok && std::fabs(rg - d.at("degree").get<double>()) <= 1e-6;
    ok = ok && d.at("density_residual").get<double>() <= (eps == 0.0 ? 1e-12 : 1e-8);
    for (const auto& r : d.at("eigen_residuals")) ok = ok && r.get<double>() <= 1e-4;
    return ok;
}

bool reverify_bilipschitz(const json& rep) {
    const json& d = rep.at("derived");
    return d.at("c_emp").get<double>() >= d.at("c_bar").get<double>() &&
           d.at("C_emp").get<double>() <= d.at("C_bar").get<double>();
}

}  // namespace

json measure_to_json(const CircleMeasure& mu) {
    json atoms = json::array();
    for (std::size_t i = 0; i < mu.atomic.size(); ++i)
        atoms.push_back(json::array({mu.atomic.pos[i], mu.atomic.mass[i]}));
    return json{{"atoms", std::move(atoms)},
                {"breakpoints", mu.density.bp},
                {"values", mu.density.val}};
}

CircleMeasure measure_from_json(const json& j) {
    CircleMeasure mu;
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    mu.atomic = make_atomic(std::move(atoms));
    std::vector<double> bp = j.at("breakpoints").get<std::vector<double>>();
    std::vector<double> val = j.at("values").get<std::vector<double>>();
    if (bp.size() != val.size())
        throw std::domain_error("measure_from_json: breakpoints/values size mismatch");
    if (bp.empty()) {
        mu.density = StepDensity::zero();
    } else {
        mu.density.bp = std::move(bp);
        mu.density.val = std::move(val);
    }
    mu.validate();
    return mu;
}

json transport_to_json(const TransportResult& r) {
    return json{{"cost", r.cost}, {"p", r.p}, {"shift", r.shift}, {"N", r.N}};
}

json map_to_json(const ExpandingMap& m) {
    return json{{"degree", m.degree}, {"epsilon", m.epsilon}};
}

json trig_to_json(const TrigPoly& p) {
    if (p.a0 != 0.0) throw std::domain_error("trig_to_json: constant term must be zero");
    return json{{"cos", p.ca}, {"sin", p.sb}};
}

TrigPoly trig_from_json(const json& j) {
    TrigPoly p;
    p.ca = j.at("cos").get<std::vector<double>>();
    p.sb = j.at("sin").get<std::vector<double>>();
    return p;
}

json report_envelope(const std::string& name, json params, json samples, json derived,
                     bool pass) {
    return json{{"schema", 1},
                {"name", name},
                {"params", std::move(params)},
                {"samples", std::move(samples)},
                {"derived", std::move(derived)},
                {"verdict", pass ? "pass" : "fail"}};
}

json slope_report_json(const std::string& name, const SlopeReport& rep, json params) {
    params["threshold"] = rep.threshold;
    json derived{{"fitted_slope", rep.fitted_slope}, {"main_at_floor", rep.main_at_floor}};
    if (!rep.control.empty()) {
        derived["control_slope"] = rep.control_slope;
        derived["control"] = slope_rows(rep.control);
    }
    return report_envelope(name, std::move(params), slope_rows(rep.samples), std::move(derived),
                           rep.pass);
}

json counterexample_report_json(const CounterexampleReport& rep, json params) {
    json derived{{"norm_v", rep.norm_v},
                 {"norm_expected", rep.norm_expected},
                 {"fourier_residual", rep.fourier_residual},
                 {"pushforward_mismatch", rep.pushforward_mismatch},
                 {"w_lambda_mu", rep.w_lambda_mu},
                 {"lower_bound", rep.lower_bound},
                 {"ratio", rep.ratio}};
    return report_envelope("counterexample", std::move(params), json::array(),
                           std::move(derived), rep.pass);
}

json nearly_invariant_report_json(const NearlyInvariantReport& rep, json params) {
    params["threshold"] = rep.slope.threshold;
    json rows = json::array();
    for (const auto& row : rep.rows)
        rows.push_back(
            json{{"a", row.a_mag}, {"drift", row.drift}, {"max_ratio", row.max_ratio}});
    json derived{{"fitted_slope", rep.slope.fitted_slope},
                 {"main_at_floor", rep.slope.main_at_floor},
                 {"ratio_decay", rep.ratio_decay},
                 {"lip", rep.lip},
                 {"r_star", rep.r_star},
                 {"eps_drift", rep.eps_drift},
                 {"max_residual", rep.max_residual},
                 {"n_fields", rep.n_fields},
                 {"drift_rows", std::move(rows)}};
    return report_envelope("nearly-invariant", std::move(params), slope_rows(rep.slope.samples),
                           std::move(derived), rep.pass);
}

json mdim_report_json(const SeparatedSetReport& rep, json params) {
    json derived{{"eps", rep.eps},
                 {"branching", rep.branching},
                 {"set_size", rep.set_size},
                 {"full_size", rep.full_size},
                 {"bound_size", rep.bound_size},
                 {"verified_count", rep.verified_count},
                 {"subsampled", rep.subsampled},
                 {"quant_N", rep.quant_N},
                 {"min_pairwise_bowen", rep.min_pairwise_bowen},
                 {"closest_i", rep.closest_i},
                 {"closest_j", rep.closest_j},
                 {"a_k_membership", rep.a_k_membership},
                 {"separated", rep.separated}};
    return report_envelope("mdim", std::move(params), json::array(), std::move(derived),
                           rep.pass);
}

json atoms_report_json(const AtomlessReport& rep, json params) {
    json rows = json::array();
    for (const auto& s : rep.samples)
        rows.push_back(json{{"t", s.t},
                            {"max_mass", s.max_mass},
                            {"position", s.position},
                            {"detected", s.detected}});
    json derived{{"detect_threshold", rep.detect_threshold}, {"fraction", rep.fraction}};
    return report_envelope("atoms", std::move(params), std::move(rows), std::move(derived),
                           rep.pass);
}

json cantor_report_json(const TangentField& field, int depth) {
    json params{{"depth", depth}};
    json derived{{"depth", depth},
                 {"n_samples", static_cast<long>(field.n())},
                 {"mean", field.lambda_mean},
                 {"min", field.samples.minCoeff()},
                 {"max", field.samples.maxCoeff()},
                 {"l2_grid_norm", field.l2_grid_norm()}};
    bool pass = std::fabs(field.lambda_mean) <= 1e-12;
    return report_envelope("cantor", std::move(params), json::array(), std::move(derived), pass);
}

json spectrum_report_json(double rg, int n, const ExpandingMap& map, double density_residual,
                          const std::vector<double>& eigen_residuals, json params) {
    bool ok = rg >= map.min_deriv() - 0.05;
    if (map.epsilon == 0.0) ok = ok && std::fabs(rg - map.degree) <= 1e-6;
    ok = ok && density_residual <= (map.epsilon == 0.0 ? 1e-12 : 1e-8);
    for (double r : eigen_residuals) ok = ok && r <= 1e-4;
    json derived{{"R_g", rg},
                 {"n", n},
                 {"degree", map.degree},
                 {"epsilon", map.epsilon},
                 {"min_deriv", map.min_deriv()},
                 {"density_residual", density_residual},
                 {"eigen_residuals", eigen_residuals}};
    return report_envelope("spectrum", std::move(params), json::array(), std::move(derived), ok);
}

json bilipschitz_report_json(const BilipschitzReport& rep, json params) {
    std::vector<std::vector<double>> gram;
    for (int i = 0; i < rep.gram.rows(); ++i) {
        std::vector<double> row;
        for (int j = 0; j < rep.gram.cols(); ++j) row.push_back(rep.gram(i, j));
        gram.push_back(std::move(row));
    }
    json derived{{"gram", gram},
                 {"sigma_min", rep.sigma_min},
                 {"c_emp", rep.c_emp},
                 {"c_bar", rep.c_bar},
                 {"C_emp", rep.C_emp},
                 {"C_bar", rep.C_bar},
                 {"pairs", rep.pairs}};
    return report_envelope("bilipschitz", std::move(params), json::array(), std::move(derived),
                           rep.pass);
}

json wasserstein_report_json(const TransportResult& r, json params) {
    bool ok = std::isfinite(r.cost) && r.cost >= 0.0;
    return report_envelope("wasserstein", std::move(params), json::array(),
                           transport_to_json(r), ok);
}

std::string report_to_csv(const json& report) {
    std::ostringstream out;
    const json& samples = report.at("samples");
    if (samples.is_array() && !samples.empty() && samples.front().is_object()) {
        bool first = true;
        for (auto it = samples.front().begin(); it != samples.front().end(); ++it) {
            if (!first) out << ",";
            out << it.key();
            first = false;
        }
        out << "\n";
        for (const auto& row : samples) {
            first = true;
            for (auto it = row.begin(); it != row.end(); ++it) {
                if (!first) out << ",";
                out << it.value().dump();
                first = false;
            }
            out << "\n";
        }
        return out.str();
    }
    out << "key,value\n";
    for (auto it = report.at("derived").begin(); it != report.at("derived").end(); ++it)
        if (it.value().is_number() || it.value().is_boolean())
            out << it.key() << "," << it.value().dump() << "\n";
    return out.str();
}

bool report_verdict(const json& report) {
    return report.at("verdict").get<std::string>() == "pass";
}

bool reverify_report(const json& report) {
    if (report.at("schema").get<int>() != 1)
        throw std::domain_error("reverify_report: unsupported schema");
    const std::string name = report.at("name").get<std::string>();
    if (name == "wasserstein") {
        double c = report.at("derived").at("cost").get<double>();
        return std::isfinite(c) && c >= 0.0;
    }
    if (name == "derivative-check") return reverify_slope_main(report, true);
    if (name == "convex-split") return reverify_slope_main(report, false);
    if (name == "counterexample") return reverify_counterexample(report);
    if (name == "nearly-invariant") return reverify_nearly_invariant(report);
    if (name == "mdim") return reverify_mdim(report);
    if (name == "atoms") return reverify_atoms(report);
    if (name == "cantor") return reverify_cantor(report);
    if (name == "spectrum") return reverify_spectrum(report);
    if (name == "bilipschitz") return reverify_bilipschitz(report);
    throw std::domain_error("reverify_report: unknown report name '" + name + "'");
}

}  // namespace circleot
