#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "circleot/dynamics.hpp"
#include "circleot/experiments.hpp"
#include "circleot/field.hpp"
#include "circleot/json_io.hpp"
#include "circleot/measure.hpp"
#include "circleot/transport.hpp"

using namespace circleot;

namespace {

SlopeReport synthetic_slope(double main_power, double control_power) {
    SlopeReport rep;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
        rep.samples.push_back({t, std::pow(t, main_power), 1e-13});
        rep.control.push_back({t, 0.7 * std::pow(t, control_power), 1e-13});
    }
    rep.fitted_slope = main_power;
    rep.control_slope = control_power;
    rep.main_at_floor = false;
    rep.pass = true;
    return rep;
}

}  // namespace

TEST_CASE("measures survive a serialization round trip exactly") {
    CircleMeasure mu = convex_sum({{0.25, CircleMeasure::dirac(1.0 / 3.0)},
                                   {0.25, CircleMeasure::dirac(0.99)},
                                   {0.5, CircleMeasure::uniform()}});
    json j = json::parse(measure_to_json(mu).dump());
    CircleMeasure back = measure_from_json(j);
    REQUIRE(back.atomic.size() == mu.atomic.size());
    for (std::size_t i = 0; i < mu.atomic.size(); ++i) {
        CHECK(back.atomic.pos[i] == mu.atomic.pos[i]);
        CHECK(back.atomic.mass[i] == mu.atomic.mass[i]);
    }
    REQUIRE(back.density.cells() == mu.density.cells());
    for (std::size_t i = 0; i < mu.density.cells(); ++i) {
        CHECK(back.density.bp[i] == mu.density.bp[i]);
        CHECK(back.density.val[i] == mu.density.val[i]);
    }
}

TEST_CASE("trig polynomials round trip and reject constant terms") {
    TrigPoly p;
    p.ca = {0.25, 0.0, 0.125};
    p.sb = {0.0, 0.5};
    TrigPoly back = trig_from_json(json::parse(trig_to_json(p).dump()));
    REQUIRE(back.ca.size() == p.ca.size());
    REQUIRE(back.sb.size() == p.sb.size());
    for (std::size_t i = 0; i < p.ca.size(); ++i) CHECK(back.ca[i] == p.ca[i]);
    for (std::size_t i = 0; i < p.sb.size(); ++i) CHECK(back.sb[i] == p.sb[i]);
    CHECK(back.a0 == 0.0);
    TrigPoly biased = TrigPoly::cosine(1);
    biased.a0 = 0.1;
    CHECK_THROWS_AS(trig_to_json(biased), std::domain_error);
}

TEST_CASE("scalar serializers expose the documented keys") {
    TransportResult r = wasserstein(CircleMeasure::uniform(), CircleMeasure::dirac(0.0), 2.0, 256);
    json tj = transport_to_json(r);
    CHECK(tj.at("cost").get<double>() == r.cost);
    CHECK(tj.at("p").get<double>() == 2.0);
    CHECK(tj.at("N").get<int>() == 256);
    CHECK(tj.contains("shift"));
    json mj = map_to_json(ExpandingMap(2, 0.25));
    CHECK(mj.at("degree").get<int>() == 2);
    CHECK(mj.at("epsilon").get<double>() == 0.25);
}

TEST_CASE("the report envelope is versioned and ordered") {
    json rep = cantor_report_json(cantor_field(2), 2);
    std::string s = rep.dump();
    CHECK(s.rfind("{\"schema\":1,\"name\":\"cantor\"", 0) == 0);
    CHECK(rep.at("verdict").get<std::string>() == "pass");
    CHECK(report_verdict(rep));
    json failing = report_envelope("cantor", json::object(), json::array(),
                                   rep.at("derived"), false);
    CHECK_FALSE(report_verdict(failing));
    CHECK(failing.at("verdict").get<std::string>() == "fail");
}

TEST_CASE("derivative-check reports reverify from their own rows") {
    json rep = slope_report_json("derivative-check", synthetic_slope(2.0, 1.0), json::object());
    CHECK(rep.at("params").at("threshold").get<double>() == 1.3);
    CHECK(reverify_report(rep));
    // Tampered: linear main distances contradict the stored pass verdict.
    for (auto& row : rep["samples"]) row["distance"] = row["t"].get<double>();
    CHECK(report_verdict(rep));
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("convex-split reverification has no control series") {
    SlopeReport bad_control = synthetic_slope(2.0, 5.0);  // control far from slope 1
    CHECK_FALSE(reverify_report(slope_report_json("derivative-check", bad_control, json::object())));
    CHECK(reverify_report(slope_report_json("convex-split", bad_control, json::object())));
}

TEST_CASE("an at-floor main series reverifies as a pass") {
    SlopeReport rep;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
        rep.samples.push_back({t, 5e-13, 1e-12});
        rep.control.push_back({t, 0.7 * t, 1e-12});
    }
    rep.main_at_floor = true;
    rep.pass = true;
    CHECK(reverify_report(slope_report_json("derivative-check", rep, json::object())));
}

TEST_CASE("counterexample reports reverify and detect tampering") {
    CounterexampleReport ce = non_frechet_counterexample(4);
    json rep = counterexample_report_json(ce, json{{"k", 4}});
    CHECK(report_verdict(rep));
    CHECK(reverify_report(rep));
    rep["derived"]["ratio"] = 0.1;
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("nearly-invariant reports tolerate informational zero rows") {
    NearlyInvariantReport nrep;
    nrep.slope = synthetic_slope(2.0, 1.0);
    nrep.slope.control.clear();
    nrep.slope.threshold = 1.2;
    nrep.rows.push_back({1e-1, {1e-3, 2e-3, 3e-3}, 3e-2});
    nrep.rows.push_back({1e-2, {1e-5, 2e-5, 3e-5}, 3e-3});
    nrep.rows.push_back({0.0, {1e-14, 1e-14, 1e-14}, 0.0});
    nrep.ratio_decay = 10.0;
    nrep.lip = 2.0;
    nrep.r_star = 0.1;
    nrep.max_residual = 1e-5;
    nrep.n_fields = 2;
    nrep.pass = true;
    json rep = nearly_invariant_report_json(nrep, json::object());
    CHECK(reverify_report(rep));
    rep["derived"]["drift_rows"][0]["drift"][2] = 1.0;  // breaks the geometric budget
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("mdim reports reverify from the stored separation data") {
    SeparatedSetReport sep = mdim_separated_sets(2, 2, 1.0, 2.0, 1);
    json rep = mdim_report_json(
        sep, json{{"d", 2}, {"k", 2}, {"alpha", 1.0}, {"p", 2.0}, {"n", 1}});
    CHECK(reverify_report(rep));
    rep["derived"]["min_pairwise_bowen"] = 0.0;
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("atom-scan reports recount detections from the mass column") {
    AtomlessReport arep;
    arep.detect_threshold = 2.999 / 4096.0;
    for (int i = 1; i <= 10; ++i)
        arep.samples.push_back({i / 10.0, 1e-4, 0.0, false});
    arep.fraction = 0.0;
    arep.pass = true;
    json rep = atoms_report_json(arep, json::object());
    CHECK(reverify_report(rep));
    rep["samples"][0]["max_mass"] = 0.5;  // one detection in ten samples
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("cantor reports pin the exact mean and sample count") {
    json rep = cantor_report_json(cantor_field(3), 3);
    CHECK(report_verdict(rep));
    CHECK(reverify_report(rep));
    rep["derived"]["mean"] = 1e-3;
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("spectrum reports reverify the model identity") {
    json rep = spectrum_report_json(2.0, 6, ExpandingMap(2, 0.0), 1e-13, {2e-5, 3e-5},
                                    json{{"n", 6}});
    CHECK(report_verdict(rep));
    CHECK(reverify_report(rep));
    rep["derived"]["R_g"] = 1.5;
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("bilipschitz reports reverify the frame bounds") {
    BilipschitzReport brep;
    brep.gram = Eigen::MatrixXd::Identity(2, 2) * 0.5;
    brep.sigma_min = 0.5;
    brep.c_emp = 0.70;
    brep.c_bar = 0.05;
    brep.C_emp = 0.72;
    brep.C_bar = 1.42;
    brep.pairs = 20;
    brep.pass = true;
    json rep = bilipschitz_report_json(brep, json::object());
    CHECK(reverify_report(rep));
    rep["derived"]["c_emp"] = 0.01;
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("wasserstein reports reverify on a finite nonnegative cost") {
    TransportResult r = wasserstein(CircleMeasure::uniform(), CircleMeasure::dirac(0.5), 2.0, 512);
    json rep = wasserstein_report_json(r, json{{"p", 2.0}});
    std::string s = rep.dump();
    CHECK(s.rfind("{\"schema\":1,\"name\":\"wasserstein\"", 0) == 0);
    CHECK(reverify_report(rep));
    rep["derived"]["cost"] = -1.0;
    CHECK_FALSE(reverify_report(rep));
}

TEST_CASE("sample tables export as CSV with a header row") {
    json rep = slope_report_json("convex-split", synthetic_slope(2.0, 1.0), json::object());
    std::string csv = report_to_csv(rep);
    CHECK(csv.rfind("t,distance,floor\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + four rows
    std::string kv = report_to_csv(counterexample_report_json(non_frechet_counterexample(2),
                                                              json{{"k", 2}}));
    CHECK(kv.rfind("key,value\n", 0) == 0);
    CHECK(kv.find("\nratio,") != std::string::npos);
}

TEST_CASE("reverification rejects unknown names and schemas") {
    json rep = report_envelope("mystery", json::object(), json::array(), json::object(), true);
    CHECK_THROWS_AS(reverify_report(rep), std::domain_error);
    json wrong = cantor_report_json(cantor_field(1), 1);
    wrong["schema"] = 2;
    CHECK_THROWS_AS(reverify_report(wrong), std::domain_error);
}
