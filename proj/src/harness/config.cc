#include "spex/harness/config.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>

namespace spex::harness {
namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

models::SvrHyperparams svr_from(const json& j, models::SvrHyperparams h, const char* where) {
  check_keys(j, where, {"name", "type", "kernel", "degree", "gamma", "coef0", "c", "epsilon", "max_iter", "tol",
                        "standardize_inputs"});
  if (j.contains("kernel")) h.kernel.kind = models::parse_kernel(j.at("kernel").get<std::string>());
  read(j, "degree", h.kernel.degree);
  read(j, "gamma", h.kernel.gamma);
  read(j, "coef0", h.kernel.coef0);
  read(j, "c", h.c);
  read(j, "epsilon", h.epsilon);
  read(j, "max_iter", h.max_iter);
  read(j, "tol", h.tol);
  read(j, "standardize_inputs", h.standardize_inputs);
  return h;
}

json svr_to(const models::SvrHyperparams& h) {
  return {{"kernel", models::kernel_name(h.kernel.kind)},
          {"degree", h.kernel.degree},
          {"gamma", h.kernel.gamma},
          {"coef0", h.kernel.coef0},
          {"c", h.c},
          {"epsilon", h.epsilon},
          {"max_iter", h.max_iter},
          {"tol", h.tol},
          {"standardize_inputs", h.standardize_inputs}};
}

models::RfHyperparams rf_from(const json& j, models::RfHyperparams h, const char* where) {
  check_keys(j, where, {"name", "type", "n_trees", "max_features", "min_leaf", "max_depth", "bootstrap", "seed"});
  read(j, "n_trees", h.n_trees);
  read(j, "max_features", h.max_features);
  read(j, "min_leaf", h.min_leaf);
  read(j, "max_depth", h.max_depth);
  read(j, "bootstrap", h.bootstrap);
  read(j, "seed", h.seed);
  return h;
}

json rf_to(const models::RfHyperparams& h) {
  return {{"n_trees", h.n_trees}, {"max_features", h.max_features}, {"min_leaf", h.min_leaf},
          {"max_depth", h.max_depth}, {"bootstrap", h.bootstrap}, {"seed", h.seed}};
}

ModelEntry model_from(const json& j) {
  ModelEntry e;
  if (!j.contains("type")) throw ConfigError("models: every entry needs a 'type'");
  e.type = parse_model_type(j.at("type").get<std::string>());
  e.name = j.value("name", std::string(model_type_name(e.type)));
  switch (e.type) {
    case ModelType::kSvr:
      e.svr = svr_from(j, models::SvrHyperparams::bo_default(), "models[svr]");
      break;
    case ModelType::kMlp: {
      check_keys(j, "models[mlp]", {"name", "type", "hidden", "architecture", "hidden_activation",
                                    "output_activation", "optimizer", "learning_rate", "batch_size", "epochs",
                                    "l2", "weight_init", "init_seed", "shuffle_seed", "standardize_inputs"});
      read(j, "hidden", e.mlp_hidden);
      if (j.contains("architecture")) {
        const auto& a = j.at("architecture");
        check_keys(a, "models[mlp].architecture", {"pattern", "depth", "base_width", "max_width", "seed", "turn"});
        if (a.contains("pattern")) e.mlp_arch.pattern = models::parse_arch_pattern(a.at("pattern").get<std::string>());
        read(a, "depth", e.mlp_arch.depth);
        read(a, "base_width", e.mlp_arch.base_width);
        read(a, "max_width", e.mlp_arch.max_width);
        read(a, "seed", e.mlp_arch.seed);
        if (a.contains("turn")) e.mlp_arch.turn = a.at("turn").get<std::size_t>();
      }
      if (j.contains("hidden_activation")) {
        e.mlp_hidden_activation = models::parse_activation(j.at("hidden_activation").get<std::string>());
      }
      if (j.contains("output_activation")) {
        e.mlp_output_activation = models::parse_activation(j.at("output_activation").get<std::string>());
      }
      if (j.contains("optimizer")) e.mlp.optimizer = models::parse_optimizer(j.at("optimizer").get<std::string>());
      read(j, "learning_rate", e.mlp.learning_rate);
      read(j, "batch_size", e.mlp.batch_size);
      read(j, "epochs", e.mlp.epochs);
      read(j, "l2", e.mlp.l2_penalty);
      if (j.contains("weight_init")) {
        e.mlp.weight_init = models::parse_weight_init(j.at("weight_init").get<std::string>());
      }
      read(j, "init_seed", e.mlp.init_seed);
      read(j, "shuffle_seed", e.mlp.shuffle_seed);
      read(j, "standardize_inputs", e.mlp.standardize_inputs);
      break;
    }
    case ModelType::kLinear:
      check_keys(j, "models[linear]", {"name", "type"});
      break;
    case ModelType::kRidge:
      check_keys(j, "models[ridge]", {"name", "type", "alpha"});
      read(j, "alpha", e.ridge_alpha);
      break;
    case ModelType::kForest:
      e.rf = rf_from(j, models::RfHyperparams{}, "models[forest]");
      break;
  }
  return e;
}

json model_to(const ModelEntry& e) {
  json j = {{"name", e.name}, {"type", model_type_name(e.type)}};
  switch (e.type) {
    case ModelType::kSvr:
      j.update(svr_to(e.svr));
      break;
    case ModelType::kMlp:
      if (!e.mlp_hidden.empty()) j["hidden"] = e.mlp_hidden;
      j["architecture"] = {{"pattern", models::arch_pattern_name(e.mlp_arch.pattern)},
                           {"depth", e.mlp_arch.depth},
                           {"base_width", e.mlp_arch.base_width},
                           {"max_width", e.mlp_arch.max_width},
                           {"seed", e.mlp_arch.seed}};
      if (e.mlp_arch.turn) j["architecture"]["turn"] = *e.mlp_arch.turn;
      j["hidden_activation"] = models::activation_name(e.mlp_hidden_activation);
      j["output_activation"] = models::activation_name(e.mlp_output_activation);
      j["optimizer"] = models::optimizer_name(e.mlp.optimizer);
      j["learning_rate"] = e.mlp.learning_rate;
      j["batch_size"] = e.mlp.batch_size;
      j["epochs"] = e.mlp.epochs;
      j["l2"] = e.mlp.l2_penalty;
      j["weight_init"] = models::weight_init_name(e.mlp.weight_init);
      j["init_seed"] = e.mlp.init_seed;
      j["shuffle_seed"] = e.mlp.shuffle_seed;
      j["standardize_inputs"] = e.mlp.standardize_inputs;
      break;
    case ModelType::kLinear:
      break;
    case ModelType::kRidge:
      j["alpha"] = e.ridge_alpha;
      break;
    case ModelType::kForest:
      j.update(rf_to(e.rf));
      break;
  }
  return j;
}

selectors::SelectionRule rule_from(const json& j) {
  check_keys(j, "selector.rule", {"kind", "k", "q"});
  const auto kind = j.value("kind", std::string("count"));
  if (kind == "count") return selectors::SelectionRule::count(j.value("k", std::size_t{120}));
  if (kind == "cumulative") return selectors::SelectionRule::cumulative(j.value("q", 0.8));
  throw ConfigError("selector.rule.kind must be 'count' or 'cumulative'");
}

json rule_to(const selectors::SelectionRule& r) {
  if (r.kind == selectors::SelectionRule::Kind::kCount) return {{"kind", "count"}, {"k", r.k}};
  return {{"kind", "cumulative"}, {"q", r.q}};
}

}  // namespace

const char* model_type_name(ModelType t) {
  switch (t) {
    case ModelType::kSvr: return "svr";
    case ModelType::kMlp: return "mlp";
    case ModelType::kLinear: return "linear";
    case ModelType::kRidge: return "ridge";
    case ModelType::kForest: return "forest";
  }
  return "?";
}

ModelType parse_model_type(const std::string& s) {
  if (s == "svr") return ModelType::kSvr;
  if (s == "mlp" || s == "nn") return ModelType::kMlp;
  if (s == "linear" || s == "ols") return ModelType::kLinear;
  if (s == "ridge") return ModelType::kRidge;
  if (s == "forest" || s == "rf") return ModelType::kForest;
  throw ConfigError("unknown model type '" + s + "'");
}

bool is_ranking_method(const std::string& name) {
  static const std::set<std::string> kRanking{"pca", "pls", "rf", "ridge", "shap", "gs", "lime"};
  return kRanking.count(name) > 0;
}

bool is_known_selection(const std::string& name) {
  return name == "full" || name == "expert" || is_ranking_method(name) ||
         (name.rfind("subset:", 0) == 0 && name.size() > 7);
}

std::vector<ModelEntry> default_models() {
  ModelEntry bo;
  bo.name = "svr_bo";
  bo.svr = models::SvrHyperparams::bo_default();
  ModelEntry ft;
  ft.name = "svr_ft";
  ft.svr = models::SvrHyperparams::fine_tuned();
  return {bo, ft};
}

void ExperimentConfig::validate() const {
  if (n_repeats < 1) throw ConfigError("n_repeats must be >= 1");
  if (scenarios.empty()) throw ConfigError("at least one scenario is required");
  if (models.empty()) throw ConfigError("at least one model is required");
  if (selections.empty()) throw ConfigError("at least one selection method is required");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (m.name.empty()) throw ConfigError("model names must be nonempty");
    if (!names.insert(m.name).second) throw ConfigError("duplicate model name '" + m.name + "'");
    try {
      if (m.type == ModelType::kSvr) m.svr.validate();
      if (m.type == ModelType::kMlp) m.mlp.validate();
      if (m.type == ModelType::kForest) m.rf.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("model '" + m.name + "': " + e.what());
    }
    if (m.type == ModelType::kRidge && !(m.ridge_alpha >= 0)) throw ConfigError("ridge alpha must be >= 0");
  }
  std::set<std::string> sel;
  for (const auto& s : selections) {
    if (!is_known_selection(s)) throw ConfigError("unknown selection method '" + s + "'");
    if (!sel.insert(s).second) throw ConfigError("duplicate selection method '" + s + "'");
  }
  if (data.kind == DataSource::Kind::kFiles) {
    if (data.old_path.empty()) throw ConfigError("data.old is required for file sources");
    for (auto k : scenarios) {
      if (k != spectra::ScenarioKind::kControl && data.new_path.empty()) {
        throw ConfigError(std::string("scenario '") + spectra::scenario_name(k) + "' needs data.new");
      }
    }
    if (sel.count("expert") && data.expert_path.empty()) throw ConfigError("selection 'expert' needs data.expert");
  } else {
    try {
      data.synth.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("data.synth: ") + e.what());
    }
  }
  if (selector.rule.kind == selectors::SelectionRule::Kind::kCount && selector.rule.k < 1) {
    throw ConfigError("selector.rule.k must be >= 1");
  }
  if (selector.rule.kind == selectors::SelectionRule::Kind::kCumulative &&
      !(selector.rule.q > 0 && selector.rule.q <= 1)) {
    throw ConfigError("selector.rule.q must lie in (0, 1]");
  }
  if (selector.pca_max_p < 2 || selector.pls_max_p < 2) throw ConfigError("pca/pls max_p must be >= 2");
  if (selector.explain_rows < 1 || selector.background_rows < 1) {
    throw ConfigError("explain_rows and background_rows must be >= 1");
  }
  if (correctness.ks.empty()) throw ConfigError("correctness.ks must be nonempty");
  if (correctness.bin_width && !(*correctness.bin_width > 0)) throw ConfigError("correctness.bin_width must be > 0");
  if (!tradeoff.model.empty() && !names.count(tradeoff.model)) {
    throw ConfigError("tradeoff.model '" + tradeoff.model + "' is not in the roster");
  }
  if (!tradeoff.scenario.empty()) {
    const auto k = spectra::parse_scenario(tradeoff.scenario);
    if (std::find(scenarios.begin(), scenarios.end(), k) == scenarios.end()) {
      throw ConfigError("tradeoff.scenario '" + tradeoff.scenario + "' is not evaluated");
    }
  }
}

spectra::SynthConfig synth_from_json(const json& j) {
  check_keys(j, "data.synth", {"m_features", "axis_lo", "axis_hi", "resolution", "peaks", "active_peaks",
                               "response_weights", "response_intercept", "nonlinearity", "amplitude_sd",
                               "noise_sd", "response_noise_sd", "baseline", "batch_shift", "n_old", "n_new",
                               "replicates"});
  auto c = spectra::SynthConfig::defaults();
  read(j, "m_features", c.m_features);
  read(j, "axis_lo", c.axis_lo);
  read(j, "axis_hi", c.axis_hi);
  read(j, "resolution", c.resolution);
  if (j.contains("peaks")) {
    c.peaks.clear();
    for (const auto& p : j.at("peaks")) {
      c.peaks.push_back({p.at("center").get<double>(), p.at("width").get<double>(), p.at("amplitude").get<double>()});
    }
  }
  read(j, "active_peaks", c.active_peaks);
  read(j, "response_weights", c.response_weights);
  read(j, "response_intercept", c.response_intercept);
  if (j.contains("nonlinearity")) {
    c.nonlinearity.clear();
    for (const auto& t : j.at("nonlinearity")) {
      c.nonlinearity.push_back({t.at("a").get<std::size_t>(), t.at("b").get<std::size_t>(), t.at("weight").get<double>()});
    }
  }
  read(j, "amplitude_sd", c.amplitude_sd);
  read(j, "noise_sd", c.noise_sd);
  read(j, "response_noise_sd", c.response_noise_sd);
  read(j, "baseline", c.baseline);
  if (j.contains("batch_shift")) {
    const auto& b = j.at("batch_shift");
    check_keys(b, "data.synth.batch_shift", {"baseline", "noise_inflation", "gain"});
    read(b, "baseline", c.batch_shift.baseline);
    read(b, "noise_inflation", c.batch_shift.noise_inflation);
    read(b, "gain", c.batch_shift.gain);
  }
  read(j, "n_old", c.n_old);
  read(j, "n_new", c.n_new);
  read(j, "replicates", c.replicates);
  return c;
}

json synth_to_json(const spectra::SynthConfig& c) {
  json peaks = json::array();
  for (const auto& p : c.peaks) peaks.push_back({{"center", p.center}, {"width", p.width}, {"amplitude", p.amplitude}});
  json inter = json::array();
  for (const auto& t : c.nonlinearity) inter.push_back({{"a", t.a}, {"b", t.b}, {"weight", t.weight}});
  return {{"m_features", c.m_features},
          {"axis_lo", c.axis_lo},
          {"axis_hi", c.axis_hi},
          {"resolution", c.resolution},
          {"peaks", peaks},
          {"active_peaks", c.active_peaks},
          {"response_weights", c.response_weights},
          {"response_intercept", c.response_intercept},
          {"nonlinearity", inter},
          {"amplitude_sd", c.amplitude_sd},
          {"noise_sd", c.noise_sd},
          {"response_noise_sd", c.response_noise_sd},
          {"baseline", c.baseline},
          {"batch_shift",
           {{"baseline", c.batch_shift.baseline},
            {"noise_inflation", c.batch_shift.noise_inflation},
            {"gain", c.batch_shift.gain}}},
          {"n_old", c.n_old},
          {"n_new", c.n_new},
          {"replicates", c.replicates}};
}

ExperimentConfig config_from_json(const json& j) {
  try {
    check_keys(j, "config", {"data", "scenarios", "models", "selections", "selector", "correctness", "tradeoff",
                             "n_repeats", "base_seed", "threads"});
    ExperimentConfig cfg;
    if (j.contains("data")) {
      const auto& d = j.at("data");
      check_keys(d, "data", {"source", "synth", "seed", "old", "new", "expert", "trim"});
      const auto source = d.value("source", std::string("synthetic"));
      if (source == "synthetic") {
        cfg.data.kind = DataSource::Kind::kSynthetic;
        if (d.contains("synth")) cfg.data.synth = synth_from_json(d.at("synth"));
        read(d, "seed", cfg.data.synth_seed);
      } else if (source == "files") {
        cfg.data.kind = DataSource::Kind::kFiles;
        cfg.data.old_path = d.value("old", std::string());
        cfg.data.new_path = d.value("new", std::string());
        cfg.data.expert_path = d.value("expert", std::string());
      } else {
        throw ConfigError("data.source must be 'synthetic' or 'files'");
      }
      if (d.contains("trim")) {
        const auto t = d.at("trim").get<std::vector<double>>();
        if (t.size() != 2) throw ConfigError("data.trim must be [lo, hi]");
        cfg.data.trim = std::make_pair(t[0], t[1]);
      }
    }
    if (j.contains("scenarios")) {
      cfg.scenarios.clear();
      for (const auto& s : j.at("scenarios")) cfg.scenarios.push_back(spectra::parse_scenario(s.get<std::string>()));
    }
    if (j.contains("models")) {
      for (const auto& m : j.at("models")) cfg.models.push_back(model_from(m));
    } else {
      cfg.models = default_models();
    }
    read(j, "selections", cfg.selections);
    if (j.contains("selector")) {
      const auto& s = j.at("selector");
      check_keys(s, "selector", {"rule", "ridge_alpha", "rf", "pca_max_p", "pls_max_p", "explainer", "explain_rows",
                                 "background_rows", "background_strata", "shap_permutations",
                                 "lime_perturbations", "lime_kernel_width", "lime_ridge", "lime_top_k",
                                 "surrogate_ridge"});
      auto& out = cfg.selector;
      if (s.contains("rule")) out.rule = rule_from(s.at("rule"));
      read(s, "ridge_alpha", out.ridge_alpha);
      if (s.contains("rf")) out.rf = rf_from(s.at("rf"), out.rf, "selector.rf");
      read(s, "pca_max_p", out.pca_max_p);
      read(s, "pls_max_p", out.pls_max_p);
      if (s.contains("explainer")) out.explainer = svr_from(s.at("explainer"), out.explainer, "selector.explainer");
      read(s, "explain_rows", out.explain_rows);
      read(s, "background_rows", out.background_rows);
      read(s, "background_strata", out.background_strata);
      read(s, "shap_permutations", out.shap_permutations);
      read(s, "lime_perturbations", out.lime_perturbations);
      read(s, "lime_kernel_width", out.lime_kernel_width);
      read(s, "lime_ridge", out.lime_ridge);
      read(s, "lime_top_k", out.lime_top_k);
      read(s, "surrogate_ridge", out.surrogate_ridge);
    }
    if (j.contains("correctness")) {
      const auto& c = j.at("correctness");
      check_keys(c, "correctness", {"bin_width", "k", "ks"});
      if (c.contains("bin_width")) cfg.correctness.bin_width = c.at("bin_width").get<double>();
      read(c, "k", cfg.correctness.k);
      read(c, "ks", cfg.correctness.ks);
    }
    if (j.contains("tradeoff")) {
      const auto& t = j.at("tradeoff");
      check_keys(t, "tradeoff", {"scenario", "model"});
      read(t, "scenario", cfg.tradeoff.scenario);
      read(t, "model", cfg.tradeoff.model);
    }
    read(j, "n_repeats", cfg.n_repeats);
    read(j, "base_seed", cfg.base_seed);
    read(j, "threads", cfg.threads);
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json data;
  if (cfg.data.kind == DataSource::Kind::kSynthetic) {
    data = {{"source", "synthetic"}, {"seed", cfg.data.synth_seed}, {"synth", synth_to_json(cfg.data.synth)}};
  } else {
    data = {{"source", "files"},
            {"old", cfg.data.old_path.string()},
            {"new", cfg.data.new_path.string()},
            {"expert", cfg.data.expert_path.string()}};
  }
  if (cfg.data.trim) data["trim"] = {cfg.data.trim->first, cfg.data.trim->second};
  json scen = json::array();
  for (auto k : cfg.scenarios) scen.push_back(spectra::scenario_name(k));
  json models = json::array();
  for (const auto& m : cfg.models) models.push_back(model_to(m));
  const auto& s = cfg.selector;
  json selector = {{"rule", rule_to(s.rule)},
                   {"ridge_alpha", s.ridge_alpha},
                   {"rf", rf_to(s.rf)},
                   {"pca_max_p", s.pca_max_p},
                   {"pls_max_p", s.pls_max_p},
                   {"explainer", svr_to(s.explainer)},
                   {"explain_rows", s.explain_rows},
                   {"background_rows", s.background_rows},
                   {"background_strata", s.background_strata},
                   {"shap_permutations", s.shap_permutations},
                   {"lime_perturbations", s.lime_perturbations},
                   {"lime_kernel_width", s.lime_kernel_width},
                   {"lime_ridge", s.lime_ridge},
                   {"lime_top_k", s.lime_top_k},
                   {"surrogate_ridge", s.surrogate_ridge}};
  json corr = {{"k", cfg.correctness.k}, {"ks", cfg.correctness.ks}};
  if (cfg.correctness.bin_width) corr["bin_width"] = *cfg.correctness.bin_width;
  return {{"data", data},
          {"scenarios", scen},
          {"models", models},
          {"selections", cfg.selections},
          {"selector", selector},
          {"correctness", corr},
          {"tradeoff", {{"scenario", cfg.tradeoff.scenario}, {"model", cfg.tradeoff.model}}},
          {"n_repeats", cfg.n_repeats},
          {"base_seed", cfg.base_seed},
          {"threads", cfg.threads}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }
  auto cfg = config_from_json(j);
  if (cfg.data.kind == DataSource::Kind::kFiles) {
    // Relative data paths resolve against the config file's directory.
    const auto base = path.parent_path();
    auto fix = [&](std::filesystem::path& p) {
      if (!p.empty() && p.is_relative()) p = base / p;
    };
    fix(cfg.data.old_path);
    fix(cfg.data.new_path);
    fix(cfg.data.expert_path);
  }
  for (auto& s : cfg.selections) {
    if (s.rfind("subset:", 0) == 0) {
      std::filesystem::path p = s.substr(7);
      if (p.is_relative()) s = "subset:" + (path.parent_path() / p).string();
    }
  }
  return cfg;
}

}  // namespace spex::harness
