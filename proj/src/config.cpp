#include "arealaw/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace arealaw {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    const int line = node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw ValidationError(source_ + ":" + std::to_string(line) + ": " + what);
  }

  void expect_map(const YAML::Node& node, const std::string& path) const {
    if (!node.IsMap()) fail(node, path + " must be a mapping");
  }

  void only_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> keys) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        fail(kv.first, "unknown key '" + join(path, key) + "'");
      }
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& path, const char* kind) const {
    if (!node.IsScalar()) fail(node, path + " must be " + kind);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, path + " must be " + kind + " (got '" + node.Scalar() + "')");
    }
  }

  double number(const YAML::Node& n, const std::string& p) const { return scalar<double>(n, p, "a number"); }
  int integer(const YAML::Node& n, const std::string& p) const { return scalar<int>(n, p, "an integer"); }
  bool boolean(const YAML::Node& n, const std::string& p) const { return scalar<bool>(n, p, "true or false"); }
  std::string text(const YAML::Node& n, const std::string& p) const { return scalar<std::string>(n, p, "a string"); }

  int positive(const YAML::Node& n, const std::string& p) const {
    const int v = integer(n, p);
    if (v < 1) fail(n, p + " must be a positive integer");
    return v;
  }

  template <class F>
  auto guarded(const YAML::Node& n, F&& f) const {
    try {
      return f();
    } catch (const ValidationError& e) {
      if (std::string(e.what()).rfind(source_ + ":", 0) == 0) throw;
      fail(n, e.what());
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::string source_;
};

void parse_lattice(const Reader& rd, const YAML::Node& node, LatticeSpec& lat) {
  rd.expect_map(node, "model.lattice");
  rd.only_keys(node, "model.lattice", {"d", "n", "boundary"});
  int d = 1, n = 1;
  Boundary b = Boundary::periodic;
  if (node["d"]) d = rd.positive(node["d"], "model.lattice.d");
  if (!node["n"]) rd.fail(node, "model.lattice.n is required");
  n = rd.positive(node["n"], "model.lattice.n");
  if (node["boundary"]) {
    b = rd.guarded(node["boundary"], [&] { return boundary_from_string(rd.text(node["boundary"], "model.lattice.boundary")); });
  }
  lat = LatticeSpec::make(d, n, b);
}

CustomTerm parse_term(const Reader& rd, const YAML::Node& node, const std::string& path, int q) {
  rd.expect_map(node, path);
  rd.only_keys(node, path, {"owner", "kind", "sites", "matrix"});
  CustomTerm t;
  if (!node["owner"]) rd.fail(node, path + ".owner is required");
  t.owner = rd.integer(node["owner"], path + ".owner");
  if (node["kind"]) {
    const std::string kind = rd.text(node["kind"], path + ".kind");
    if (kind == "onsite") {
      t.role = TermRole::onsite;
    } else if (kind == "coupling") {
      t.role = TermRole::coupling;
    } else {
      rd.fail(node["kind"], path + ".kind must be onsite or coupling");
    }
  }
  const YAML::Node sites = node["sites"];
  if (!sites || !sites.IsSequence() || sites.size() == 0) rd.fail(node, path + ".sites must be a nonempty list");
  for (std::size_t i = 0; i < sites.size(); ++i) t.sites.push_back(rd.integer(sites[i], path + ".sites"));
  const YAML::Node mat = node["matrix"];
  const auto dim = static_cast<Index>(hilbert_dimension(t.sites.size(), q));
  if (!mat || !mat.IsSequence() || static_cast<Index>(mat.size()) != dim) {
    rd.fail(mat ? mat : node, path + ".matrix must be a list of " + std::to_string(dim) + " rows");
  }
  t.matrix.resize(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const YAML::Node row = mat[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Index>(row.size()) != dim) {
      rd.fail(row, path + ".matrix row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    }
    for (Index j = 0; j < dim; ++j) t.matrix(i, j) = rd.number(row[static_cast<std::size_t>(j)], path + ".matrix");
  }
  return t;
}

void parse_model(const Reader& rd, const YAML::Node& node, ModelConfig& m) {
  rd.expect_map(node, "model");
  rd.only_keys(node, "model",
               {"name", "params", "lattice", "n_max", "local_dim", "r", "translation_invariant", "terms",
                "degeneracy_tol"});
  if (!node["name"]) rd.fail(node, "model.name is required");
  m.name = rd.text(node["name"], "model.name");
  std::vector<const char*> allowed;
  if (m.name == "tfim") {
    m.params = {{"J", 1.0}, {"g", 1.0}};
    allowed = {"J", "g"};
  } else if (m.name == "xxz") {
    m.params = {{"J", 1.0}, {"Jz", 1.0}};
    allowed = {"J", "Jz"};
  } else if (m.name == "bose_hubbard") {
    m.params = {{"J", 1.0}, {"U", 1.0}, {"mu", 0.0}};
    allowed = {"J", "U", "mu"};
  } else if (m.name != "custom") {
    rd.fail(node["name"], "model.name must be tfim, xxz, bose_hubbard or custom (got '" + m.name + "')");
  }
  if (const YAML::Node p = node["params"]) {
    rd.expect_map(p, "model.params");
    for (const auto& kv : p) {
      const auto key = kv.first.as<std::string>();
      if (m.name != "custom" && std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        rd.fail(kv.first, "unknown key 'model.params." + key + "' for model " + m.name);
      }
      m.params[key] = rd.number(kv.second, "model.params." + key);
    }
  }
  if (!node["lattice"]) rd.fail(node, "model.lattice is required");
  parse_lattice(rd, node["lattice"], m.lattice);
  if (node["n_max"]) {
    if (m.name != "bose_hubbard") rd.fail(node["n_max"], "model.n_max applies only to bose_hubbard");
    m.n_max = rd.positive(node["n_max"], "model.n_max");
  }
  if (node["degeneracy_tol"]) {
    m.degeneracy_tol = rd.number(node["degeneracy_tol"], "model.degeneracy_tol");
    if (!(*m.degeneracy_tol >= 0.0)) rd.fail(node["degeneracy_tol"], "model.degeneracy_tol must be nonnegative");
  }
  const bool custom = m.name == "custom";
  for (const char* key : {"local_dim", "r", "translation_invariant", "terms"}) {
    if (node[key] && !custom) rd.fail(node[key], std::string("model.") + key + " applies only to custom models");
  }
  if (!custom) return;
  if (node["local_dim"]) m.local_dim = rd.integer(node["local_dim"], "model.local_dim");
  if (m.local_dim < 2) rd.fail(node["local_dim"], "model.local_dim must be at least 2");
  if (node["r"]) m.r = rd.positive(node["r"], "model.r");
  if (node["translation_invariant"]) {
    m.translation_invariant = rd.boolean(node["translation_invariant"], "model.translation_invariant");
  }
  const YAML::Node terms = node["terms"];
  if (!terms || !terms.IsSequence() || terms.size() == 0) rd.fail(node, "model.terms must be a nonempty list");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    m.terms.push_back(parse_term(rd, terms[i], "model.terms[" + std::to_string(i) + "]", m.local_dim));
  }
  rd.guarded(terms, [&] {
    build_model(m);
    return 0;
  });
}

void parse_grid(const Reader& rd, const YAML::Node& node, GridConfig& g) {
  rd.expect_map(node, "grid");
  rd.only_keys(node, "grid", {"spacing", "min", "max", "points"});
  if (node["spacing"]) {
    g.spacing = rd.guarded(node["spacing"], [&] { return grid_spacing_from_string(rd.text(node["spacing"], "grid.spacing")); });
  }
  if (node["min"]) g.min = rd.number(node["min"], "grid.min");
  if (node["max"]) g.max = rd.number(node["max"], "grid.max");
  if (node["points"]) g.points = rd.positive(node["points"], "grid.points");
  if (!(g.min > 0.0)) rd.fail(node["min"] ? node["min"] : node, "grid.min must be positive");
  if (!(g.max > g.min) && g.points > 1) rd.fail(node["max"] ? node["max"] : node, "grid.max must exceed grid.min");
}

std::vector<double> number_list(const Reader& rd, const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) rd.fail(node, path + " must be a list");
  std::vector<double> v;
  for (std::size_t i = 0; i < node.size(); ++i) v.push_back(rd.number(node[i], path));
  return v;
}

void parse_certify(const Reader& rd, const YAML::Node& node, CertifyConfig& c) {
  rd.expect_map(node, "certify");
  rd.only_keys(node, "certify",
               {"lemma2", "prop1", "pepo", "C", "h_mode", "deltas", "monotone_shortcut", "refinement",
                "refinement_ratio", "waive_translation_invariance"});
  if (node["lemma2"]) c.lemma2 = rd.boolean(node["lemma2"], "certify.lemma2");
  if (node["prop1"]) c.prop1 = rd.boolean(node["prop1"], "certify.prop1");
  if (node["pepo"]) c.pepo = rd.boolean(node["pepo"], "certify.pepo");
  if (node["C"]) {
    c.C = rd.number(node["C"], "certify.C");
    if (*c.C < 1.0) rd.fail(node["C"], "certify.C must be at least 1");
  }
  if (node["h_mode"]) {
    c.h_mode = rd.guarded(node["h_mode"], [&] { return h_mode_from_string(rd.text(node["h_mode"], "certify.h_mode")); });
  }
  if (node["deltas"]) {
    c.deltas = number_list(rd, node["deltas"], "certify.deltas");
    for (double d : c.deltas) {
      if (!(d > 0.0) || d > 1.0) rd.fail(node["deltas"], "certify.deltas entries must lie in (0, 1]");
    }
  }
  if (node["monotone_shortcut"]) c.monotone_shortcut = rd.boolean(node["monotone_shortcut"], "certify.monotone_shortcut");
  if (node["refinement"]) c.refinement = rd.positive(node["refinement"], "certify.refinement");
  if (node["refinement_ratio"]) {
    c.refinement_ratio = rd.number(node["refinement_ratio"], "certify.refinement_ratio");
    if (!(c.refinement_ratio > 1.0)) rd.fail(node["refinement_ratio"], "certify.refinement_ratio must exceed 1");
  }
  if (node["waive_translation_invariance"]) {
    c.waive_translation_invariance = rd.boolean(node["waive_translation_invariance"], "certify.waive_translation_invariance");
  }
}

void parse_fit(const Reader& rd, const YAML::Node& node, FitConfig& f) {
  rd.expect_map(node, "fit");
  rd.only_keys(node, "fit", {"regime", "window", "delta"});
  if (node["regime"]) {
    f.regime = rd.guarded(node["regime"], [&] { return fit_regime_from_string(rd.text(node["regime"], "fit.regime")); });
  }
  if (const YAML::Node w = node["window"]) {
    const auto v = number_list(rd, w, "fit.window");
    if (v.size() != 2 || !(v[0] > 0.0) || !(v[1] > v[0])) rd.fail(w, "fit.window must be [T_min, T_max] with 0 < T_min < T_max");
    f.t_min = v[0];
    f.t_max = v[1];
  }
  if (node["delta"]) {
    f.delta = rd.number(node["delta"], "fit.delta");
    if (!(f.delta > 0.0)) rd.fail(node["delta"], "fit.delta must be positive");
  }
}

void parse_output(const Reader& rd, const YAML::Node& node, OutputConfig& o) {
  rd.expect_map(node, "output");
  rd.only_keys(node, "output", {"directory", "formats"});
  if (node["directory"]) o.directory = rd.text(node["directory"], "output.directory");
  if (const YAML::Node f = node["formats"]) {
    if (!f.IsSequence()) rd.fail(f, "output.formats must be a list");
    o.formats.clear();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string s = rd.text(f[i], "output.formats");
      if (s != "csv" && s != "json" && s != "svg" && s != "txt") {
        rd.fail(f[i], "output.formats entries must be csv, json, svg or txt (got '" + s + "')");
      }
      o.formats.push_back(s);
    }
  }
}

}  // namespace

bool OutputConfig::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ValidationError(source + ":1: configuration must be a mapping");
  rd.only_keys(root, "", {"model", "grid", "regions", "certify", "fit", "output"});

  RunConfig c;
  if (!root["model"]) throw ValidationError(source + ":1: exactly one 'model' block is required");
  parse_model(rd, root["model"], c.model);
  if (root["grid"]) parse_grid(rd, root["grid"], c.grid);
  if (const YAML::Node reg = root["regions"]) {
    rd.expect_map(reg, "regions");
    rd.only_keys(reg, "regions", {"l"});
    if (const YAML::Node l = reg["l"]) {
      if (!l.IsSequence()) rd.fail(l, "regions.l must be a list");
      for (std::size_t i = 0; i < l.size(); ++i) {
        const int edge = rd.positive(l[i], "regions.l");
        if (edge > c.model.lattice.n || c.model.lattice.n % edge != 0) {
          rd.fail(l[i], "regions.l entry " + std::to_string(edge) + " does not divide n = " +
                            std::to_string(c.model.lattice.n));
        }
        c.edges.push_back(edge);
      }
    }
  }
  if (root["certify"]) parse_certify(rd, root["certify"], c.certify);
  if (root["fit"]) parse_fit(rd, root["fit"], c.fit);
  if (root["output"]) parse_output(rd, root["output"], c.output);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

HamiltonianSpec build_model(const ModelConfig& m) {
  const auto p = [&](const char* key) { return m.params.at(key); };
  if (m.name == "tfim") return build_tfim(m.lattice, p("J"), p("g"));
  if (m.name == "xxz") return build_xxz(m.lattice, p("J"), p("Jz"));
  if (m.name == "bose_hubbard") return build_bose_hubbard(m.lattice, p("J"), p("U"), p("mu"), m.n_max);
  if (m.name == "custom") {
    std::vector<LocalTerm> terms;
    for (const auto& t : m.terms) {
      std::vector<int> sorted = t.sites;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("custom term lists a site twice");
      }
      for (int s : t.sites) {
        if (!m.lattice.contains(s)) throw ValidationError("custom term site " + std::to_string(s) + " outside lattice");
      }
      terms.push_back(LocalTerm::dense(t.owner, t.role, t.sites, t.matrix, m.local_dim));
    }
    SiteSpace space{SiteKind::qubit, m.local_dim};
    if (m.local_dim != 2) space.kind = SiteKind::boson;
    HamiltonianSpec spec = build_custom(m.lattice, space, std::move(terms), m.r, m.translation_invariant);
    spec.params = m.params;
    return spec;
  }
  throw ValidationError("unknown model '" + m.name + "'");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  auto& m = j["model"];
  m["name"] = c.model.name;
  m["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.model.params) m["params"][k] = v;
  m["lattice"] = {{"d", c.model.lattice.d}, {"n", c.model.lattice.n}, {"boundary", to_string(c.model.lattice.boundary)}};
  if (c.model.name == "bose_hubbard") m["n_max"] = c.model.n_max;
  if (c.model.degeneracy_tol) m["degeneracy_tol"] = *c.model.degeneracy_tol;
  if (c.model.name == "custom") {
    m["local_dim"] = c.model.local_dim;
    m["r"] = c.model.r;
    m["translation_invariant"] = c.model.translation_invariant;
    auto& terms = m["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : c.model.terms) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (Index i = 0; i < t.matrix.rows(); ++i) {
        std::vector<double> row(t.matrix.cols());
        for (Index k = 0; k < t.matrix.cols(); ++k) row[k] = t.matrix(i, k);
        rows.push_back(row);
      }
      terms.push_back({{"owner", t.owner},
                       {"kind", t.role == TermRole::onsite ? "onsite" : "coupling"},
                       {"sites", t.sites},
                       {"matrix", rows}});
    }
  }
  j["grid"] = {{"spacing", c.grid.spacing == GridSpacing::log ? "log" : "linear"},
               {"min", c.grid.min},
               {"max", c.grid.max},
               {"points", c.grid.points}};
  j["regions"] = {{"l", c.edges}};
  auto& cert = j["certify"];
  cert["lemma2"] = c.certify.lemma2;
  cert["prop1"] = c.certify.prop1;
  cert["pepo"] = c.certify.pepo;
  cert["C"] = c.certify.C ? nlohmann::ordered_json(*c.certify.C) : nlohmann::ordered_json(nullptr);
  cert["h_mode"] = to_string(c.certify.h_mode);
  cert["deltas"] = c.certify.deltas;
  cert["monotone_shortcut"] = c.certify.monotone_shortcut;
  cert["refinement"] = c.certify.refinement;
  cert["refinement_ratio"] = c.certify.refinement_ratio;
  cert["waive_translation_invariance"] = c.certify.waive_translation_invariance;
  auto& fit = j["fit"];
  fit["regime"] = to_string(c.fit.regime);
  if (c.fit.t_min) fit["window"] = {*c.fit.t_min, *c.fit.t_max};
  fit["delta"] = c.fit.delta;
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return j;
}

}  // namespace arealaw
