#include "arealaw/certificate.hpp"

#include "arealaw/common.hpp"

namespace arealaw {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::hypothesis_not_met:
      return "hypothesis-not-met";
    case Verdict::fails:
      return "fails";
  }
  return "fails";
}

InequalityCheck make_check(std::string name, double lhs, double rhs, double tol, bool gated) {
  InequalityCheck c{std::move(name), lhs, rhs, rhs - lhs, Verdict::holds};
  if (gated) {
    c.verdict = Verdict::hypothesis_not_met;
  } else if (!(lhs <= rhs + tol)) {
    c.verdict = Verdict::fails;
  }
  return c;
}

std::string to_string(CouplingMode m) { return m == CouplingMode::operator_norm ? "operator-norm" : "covariance"; }

std::string to_string(HMode m) {
  switch (m) {
    case HMode::min:
      return "min";
    case HMode::operator_norm:
      return "operator-norm";
    case HMode::covariance:
      return "covariance";
  }
  return "min";
}

HMode h_mode_from_string(const std::string& s) {
  if (s == "min") return HMode::min;
  if (s == "operator-norm" || s == "operator_norm") return HMode::operator_norm;
  if (s == "covariance") return HMode::covariance;
  throw ValidationError("unknown h mode '" + s + "' (expected min | operator-norm | covariance)");
}

std::string to_string(FitRegime r) { return r == FitRegime::exponential ? "exponential" : "polynomial"; }

FitRegime fit_regime_from_string(const std::string& s) {
  if (s == "exponential") return FitRegime::exponential;
  if (s == "polynomial") return FitRegime::polynomial;
  throw ValidationError("unknown fit regime '" + s + "' (expected exponential | polynomial)");
}

Verdict BoundCertificate::overall() const {
  bool pending = false;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::fails) return Verdict::fails;
    if (c.verdict == Verdict::hypothesis_not_met) pending = true;
  }
  return pending ? Verdict::hypothesis_not_met : Verdict::holds;
}

}  // namespace arealaw
