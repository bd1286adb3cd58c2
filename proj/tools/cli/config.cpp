#include "cli/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace ggmlab::cli {

namespace {

using KeySet = std::set<std::string>;

const std::map<std::string, KeySet>& schema() {
  static const std::map<std::string, KeySet> sections = {
      {"graph", {"topology", "height", "width", "n", "p", "epsilon"}},
      {"sampling", {"n1", "m", "center"}},
      {"summary", {"base", "sigma_l", "snr", "renoise_per_run"}},
      {"evaluation",
       {"runs", "seed", "tau", "resample_partition", "record_wall_time",
        "holdout_runs"}},
      {"sensitivity", {"mode"}},
      {"solvers", {"admm", "glasso", "lvggm", "dilat"}},
  };
  return sections;
}

const KeySet kAdmmKeys = {"max_iter", "eps_abs", "eps_rel", "rho",
                          "penalize_diagonal", "adaptive_rho"};
const KeySet kGridKeys = {"alpha", "beta"};
const KeySet kDilatKeys = {"alpha",        "beta",      "init",
                           "max_outer",    "ccp_tol",   "gamma_t",
                           "mu",           "mu_w",      "max_iter",
                           "eps_abs",      "eps_rel",   "adaptive_mu",
                           "descent_slack", "init_seed", "init_delta",
                           "init_lvggm_beta"};

void check_keys(const toml::table& t, const KeySet& allowed,
                const std::string& where) {
  for (const auto& [k, v] : t) {
    if (!allowed.count(std::string(k.str()))) {
      throw ConfigError("unknown key '" + where + std::string(k.str()) + "'");
    }
  }
}

class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  const toml::table* section(const std::string& name) const {
    const toml::node* n = root_.get(name);
    if (n == nullptr) return nullptr;
    const toml::table* t = n->as_table();
    if (t == nullptr) throw ConfigError("'" + name + "' must be a table");
    return t;
  }

  template <typename T>
  std::optional<T> get(const toml::table* t, const std::string& key,
                       const std::string& where) const {
    if (t == nullptr) return std::nullopt;
    const toml::node* n = t->get(key);
    if (n == nullptr) return std::nullopt;
    std::optional<T> v = n->value<T>();
    if (!v) throw ConfigError("key '" + where + key + "' has the wrong type");
    return v;
  }

  template <typename T>
  T require(const toml::table* t, const std::string& key,
            const std::string& where) const {
    auto v = get<T>(t, key, where);
    if (!v) throw ConfigError("missing required key '" + where + key + "'");
    return *v;
  }

  std::vector<double> numbers(const toml::table* t, const std::string& key,
                              const std::string& where) const {
    std::vector<double> out;
    if (t == nullptr) return out;
    const toml::node* n = t->get(key);
    if (n == nullptr) return out;
    if (auto scalar = n->value<double>()) return {*scalar};
    const toml::array* arr = n->as_array();
    if (arr == nullptr) {
      throw ConfigError("key '" + where + key + "' must be a number or array");
    }
    for (const auto& e : *arr) {
      auto v = e.value<double>();
      if (!v) throw ConfigError("key '" + where + key + "' must hold numbers");
      out.push_back(*v);
    }
    return out;
  }

 private:
  const toml::table& root_;
};

GraphSpec read_graph(const Reader& r, const toml::table* g) {
  if (g == nullptr) throw ConfigError("missing required section [graph]");
  const auto topo = r.require<std::string>(g, "topology", "graph.");
  if (topo == "binary_tree" || topo == "tree") {
    return GraphSpec::binary_tree(
        static_cast<int>(r.require<int64_t>(g, "height", "graph.")));
  }
  if (topo == "grid") {
    return GraphSpec::grid(static_cast<int>(r.require<int64_t>(g, "width", "graph.")),
                           static_cast<int>(r.require<int64_t>(g, "height", "graph.")));
  }
  if (topo == "erdos_renyi" || topo == "er") {
    return GraphSpec::erdos_renyi(
        static_cast<int>(r.require<int64_t>(g, "n", "graph.")),
        r.require<double>(g, "p", "graph."));
  }
  throw ConfigError("unknown graph.topology '" + topo + "'");
}

void read_admm(const Reader& r, const toml::table* t, const std::string& where,
               SolverOptions& o) {
  if (auto v = r.get<int64_t>(t, "max_iter", where)) o.max_iter = static_cast<int>(*v);
  if (auto v = r.get<double>(t, "eps_abs", where)) o.eps_abs = *v;
  if (auto v = r.get<double>(t, "eps_rel", where)) o.eps_rel = *v;
  if (auto v = r.get<double>(t, "rho", where)) o.rho = *v;
  if (auto v = r.get<bool>(t, "penalize_diagonal", where)) o.penalize_diagonal = *v;
  if (auto v = r.get<bool>(t, "adaptive_rho", where)) o.adaptive_rho = *v;
}

const toml::table* subtable(const toml::table* parent, const std::string& key,
                            const std::string& where) {
  if (parent == nullptr) return nullptr;
  const toml::node* n = parent->get(key);
  if (n == nullptr) return nullptr;
  const toml::table* t = n->as_table();
  if (t == nullptr) throw ConfigError("'" + where + key + "' must be a table");
  return t;
}

LoadedConfig build(toml::table& root, const ConfigOverrides& overrides) {
  for (const auto& [k, v] : root) {
    if (!schema().count(std::string(k.str()))) {
      throw ConfigError("unknown section '" + std::string(k.str()) + "'");
    }
  }
  if (overrides.seed) {
    if (root.get("evaluation") == nullptr) root.insert("evaluation", toml::table{});
    toml::table* ev = root.get("evaluation")->as_table();
    if (ev == nullptr) throw ConfigError("'evaluation' must be a table");
    ev->insert_or_assign("seed", static_cast<int64_t>(*overrides.seed));
  }

  const Reader r(root);
  for (const auto& [name, keys] : schema()) {
    if (const toml::table* t = r.section(name)) check_keys(*t, keys, name + ".");
  }

  LoadedConfig out;
  ExperimentConfig& cfg = out.experiment;

  const toml::table* g = r.section("graph");
  cfg.graph = read_graph(r, g);
  cfg.epsilon = r.require<double>(g, "epsilon", "graph.");

  const toml::table* s = r.section("sampling");
  cfg.n1 = static_cast<int>(r.require<int64_t>(s, "n1", "sampling."));
  if (auto v = r.get<int64_t>(s, "m", "sampling.")) cfg.m = static_cast<int>(*v);
  if (auto v = r.get<bool>(s, "center", "sampling.")) cfg.center = *v;

  const toml::table* sum = r.section("summary");
  if (auto v = r.get<std::string>(sum, "base", "summary.")) {
    if (*v == "precision_block") {
      cfg.summary_base = SummaryBase::kPrecisionBlock;
    } else if (*v == "marginal_precision") {
      cfg.summary_base = SummaryBase::kMarginalPrecision;
    } else {
      throw ConfigError("unknown summary.base '" + *v + "'");
    }
  }
  if (auto v = r.numbers(sum, "sigma_l", "summary."); !v.empty()) cfg.sigma_l = v;
  cfg.snr = r.numbers(sum, "snr", "summary.");
  if (auto v = r.get<bool>(sum, "renoise_per_run", "summary.")) cfg.renoise_per_run = *v;

  const toml::table* ev = r.section("evaluation");
  if (auto v = r.get<int64_t>(ev, "runs", "evaluation.")) cfg.runs = static_cast<int>(*v);
  if (auto v = r.get<int64_t>(ev, "seed", "evaluation.")) {
    cfg.master_seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.get<double>(ev, "tau", "evaluation.")) cfg.tau = *v;
  if (auto v = r.get<bool>(ev, "resample_partition", "evaluation.")) {
    cfg.resample_partition = *v;
  }
  if (auto v = r.get<bool>(ev, "record_wall_time", "evaluation.")) {
    cfg.record_wall_time = *v;
  }
  if (auto v = r.get<int64_t>(ev, "holdout_runs", "evaluation.")) {
    out.holdout_runs = static_cast<int>(*v);
  }

  if (auto v = r.get<std::string>(r.section("sensitivity"), "mode", "sensitivity.")) {
    out.sweep_mode = sweep_mode_from_string(*v);
  }

  const toml::table* solvers = r.section("solvers");
  if (const toml::table* admm = subtable(solvers, "admm", "solvers.")) {
    check_keys(*admm, kAdmmKeys, "solvers.admm.");
    read_admm(r, admm, "solvers.admm.", cfg.solver_options);
    cfg.dilat_options.init_options.solver = cfg.solver_options;
  }
  for (const char* name : {"glasso", "lvggm", "dilat"}) {
    const std::string where = std::string("solvers.") + name + ".";
    const toml::table* t = subtable(solvers, name, "solvers.");
    if (t == nullptr) continue;
    const SolverKind kind = solver_from_string(name);
    check_keys(*t, kind == SolverKind::kDilat ? kDilatKeys : kGridKeys, where);
    SolverGrid grid;
    grid.kind = kind;
    grid.alpha = r.numbers(t, "alpha", where);
    if (grid.alpha.empty()) throw ConfigError("missing required key '" + where + "alpha'");
    if (kind != SolverKind::kGlasso) {
      grid.beta = r.numbers(t, "beta", where);
      if (grid.beta.empty()) throw ConfigError("missing required key '" + where + "beta'");
    }
    if (kind == SolverKind::kDilat) {
      DilatOptions& d = cfg.dilat_options;
      if (auto v = r.get<std::string>(t, "init", where)) d.init = init_mode_from_string(*v);
      if (auto v = r.get<int64_t>(t, "max_outer", where)) d.max_outer = static_cast<int>(*v);
      if (auto v = r.get<double>(t, "ccp_tol", where)) d.ccp_tol = *v;
      if (auto v = r.get<double>(t, "gamma_t", where)) d.gamma_t = *v;
      if (auto v = r.get<double>(t, "mu", where)) d.mu = *v;
      if (auto v = r.get<double>(t, "mu_w", where)) d.mu_w = *v;
      if (auto v = r.get<double>(t, "descent_slack", where)) d.descent_slack = *v;
      if (auto v = r.get<int64_t>(t, "max_iter", where)) d.inner.max_iter = static_cast<int>(*v);
      if (auto v = r.get<double>(t, "eps_abs", where)) d.inner.eps_abs = *v;
      if (auto v = r.get<double>(t, "eps_rel", where)) d.inner.eps_rel = *v;
      if (auto v = r.get<bool>(t, "adaptive_mu", where)) d.inner.adaptive_rho = *v;
      if (auto v = r.get<int64_t>(t, "init_seed", where)) {
        d.init_options.seed = static_cast<std::uint64_t>(*v);
      }
      if (auto v = r.get<double>(t, "init_delta", where)) d.init_options.delta = *v;
      if (auto v = r.get<double>(t, "init_lvggm_beta", where)) d.init_options.lvggm_beta = *v;
    }
    cfg.solvers.push_back(std::move(grid));
  }
  if (cfg.solvers.empty()) throw ConfigError("no solvers configured under [solvers.*]");

  cfg.validate();

  std::ostringstream os;
  os << root << '\n';
  out.snapshot = os.str();
  return out;
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const ConfigOverrides& overrides) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config parse error: " << e.description() << " (line "
       << e.source().begin.line << ")";
    throw ConfigError(os.str());
  }
  return build(root, overrides);
}

LoadedConfig load_config(const std::filesystem::path& path,
                         const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace ggmlab::cli
