// JSON serialization of the core types and the versioned experiment report
// envelope {schema, name, params, samples, derived, verdict}, plus the
// re-verification of a stored report's verdict from its own samples.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "circleot/dynamics.hpp"
#include "circleot/experiments.hpp"
#include "circleot/field.hpp"
#include "circleot/measure.hpp"
#include "circleot/transport.hpp"

namespace circleot {

using json = nlohmann::ordered_json;

// {atoms: [[pos, mass], ...], breakpoints: [...], values: [...]}. Doubles are
// emitted in shortest round-trip form, so every position survives re-parsing.
json measure_to_json(const CircleMeasure& mu);
CircleMeasure measure_from_json(const json& j);

// {cost, p, shift, N}
json transport_to_json(const TransportResult& r);

// {degree, epsilon}
json map_to_json(const ExpandingMap& m);

// {cos: [...], sin: [...]}; the constant term must be zero both ways.
json trig_to_json(const TrigPoly& p);
TrigPoly trig_from_json(const json& j);

// The common report envelope. verdict is "pass" or "fail".
json report_envelope(const std::string& name, json params, json samples, json derived,
                     bool pass);

// Per-experiment report builders. Every distance row carries its
// quantization floor; fitted quantities live under "derived".
json slope_report_json(const std::string& name, const SlopeReport& rep, json params);
json counterexample_report_json(const CounterexampleReport& rep, json params);
json nearly_invariant_report_json(const NearlyInvariantReport& rep, json params);
json mdim_report_json(const SeparatedSetReport& rep, json params);
json atoms_report_json(const AtomlessReport& rep, json params);
json cantor_report_json(const TangentField& field, int depth);
json spectrum_report_json(double rg, int n, const ExpandingMap& map, double density_residual,
                          const std::vector<double>& eigen_residuals, json params);
json bilipschitz_report_json(const BilipschitzReport& rep, json params);
json wasserstein_report_json(const TransportResult& r, json params);

// Samples (or, failing that, derived scalars) as CSV for external plotting.
std::string report_to_csv(const json& report);

bool report_verdict(const json& report);

// Recomputes the verdict from the stored samples/derived values using the
// same decision rules the experiment applied, without re-running it. Returns
// the recomputed verdict; throws on an unknown report name or schema.
bool reverify_report(const json& report);

}  // namespace circleot
