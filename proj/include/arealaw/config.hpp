#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arealaw/certificate.hpp"
#include "arealaw/lattice.hpp"
#include "arealaw/models.hpp"
#include "arealaw/thermo.hpp"

namespace arealaw {

struct CustomTerm {
  int owner = 0;
  TermRole role = TermRole::coupling;
  std::vector<int> sites;
  Matrix matrix;
};

struct ModelConfig {
  std::string name;  // tfim | xxz | bose_hubbard | custom
  std::map<std::string, double> params;
  LatticeSpec lattice;
  int n_max = 3;     // bose_hubbard
  int local_dim = 2; // custom
  int r = 1;         // custom
  bool translation_invariant = false;  // custom
  std::vector<CustomTerm> terms;       // custom
  std::optional<double> degeneracy_tol;
};

struct GridConfig {
  GridSpacing spacing = GridSpacing::log;
  double min = 0.05;
  double max = 10.0;
  int points = 60;
};

struct CertifyConfig {
  bool lemma2 = true;
  bool prop1 = true;
  bool pepo = false;
  std::optional<double> C;
  HMode h_mode = HMode::min;
  std::vector<double> deltas{0.5, 1.0};
  bool monotone_shortcut = false;
  int refinement = 40;
  double refinement_ratio = 1000.0;
  bool waive_translation_invariance = false;
};

struct FitConfig {
  FitRegime regime = FitRegime::exponential;
  std::optional<double> t_min;
  std::optional<double> t_max;
  double delta = 1.0;  // polynomial energy scale
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json", "svg", "txt"};
  bool wants(const std::string& f) const;
};

/// Parsed and validated run configuration.
struct RunConfig {
  ModelConfig model;
  GridConfig grid;
  std::vector<int> edges;  // regions.l
  CertifyConfig certify;
  FitConfig fit;
  OutputConfig output;
};

/// Parses YAML text; every error names `source`, the line, and the offending key.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const RunConfig& c);

HamiltonianSpec build_model(const ModelConfig& m);

}  // namespace arealaw
