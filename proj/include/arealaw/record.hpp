#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "arealaw/bounds.hpp"
#include "arealaw/certificate.hpp"
#include "arealaw/entangle.hpp"
#include "arealaw/thermo.hpp"

namespace arealaw {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "arealaw";
inline constexpr const char* kToolVersion = "1.0.0";

/// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double v);
double number_from(const Json& j);

Json to_json(const InequalityCheck& c);
Json to_json(const HypothesisCheck& h);
Json to_json(const CouplingStrength& h);
Json to_json(const EnergyBudget& b);
Json to_json(const HeatCapFit& f);
Json to_json(const BoundCertificate& c);
Json to_json(const PepoBoundParams& p);
Json to_json(const Lemma2Result& r);
Json to_json(const ThermalCurve& curve);
Json to_json(std::span<const ScanRow> rows);

HeatCapFit fit_from_json(const Json& j);

}  // namespace arealaw
