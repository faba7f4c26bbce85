#include "spex/models/tuner.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spex/common/random.h"
#include "spex/models/architecture.h"

namespace spex::models {
namespace {

ParamValue sample(const ParamRange& r, Rng& rng) {
  switch (r.kind) {
    case ParamRange::Kind::kContinuous: {
      if (r.log_scale) {
        const double v = std::exp(rng.uniform(std::log(r.lo), std::log(r.hi)));
        return std::clamp(v, r.lo, r.hi);
      }
      return rng.uniform(r.lo, r.hi);
    }
    case ParamRange::Kind::kInteger: {
      const auto lo = static_cast<long long>(r.lo);
      const auto hi = static_cast<long long>(r.hi);
      return lo + r.step * rng.integer(0, (hi - lo) / r.step);
    }
    case ParamRange::Kind::kCategorical:
      return r.choices[static_cast<std::size_t>(rng.below(r.choices.size()))];
  }
  return 0.0;
}

std::vector<ParamValue> grid_values(const ParamRange& r) {
  if (!r.choices.empty()) return r.choices;
  if (r.kind == ParamRange::Kind::kInteger) {
    std::vector<ParamValue> out;
    for (auto v = static_cast<long long>(r.lo); v <= static_cast<long long>(r.hi); v += r.step) {
      out.emplace_back(v);
    }
    return out;
  }
  throw std::invalid_argument("grid search: continuous range '" + r.name + "' needs explicit grid points");
}

void validate(const TunerSpec& spec) {
  if (spec.budget < 1) throw std::invalid_argument("tune: budget must be >= 1");
  for (const auto& r : spec.space) {
    if (r.kind == ParamRange::Kind::kCategorical && r.choices.empty()) {
      throw std::invalid_argument("tune: categorical range '" + r.name + "' has no choices");
    }
    if (r.kind != ParamRange::Kind::kCategorical) {
      if (!(r.lo <= r.hi)) throw std::invalid_argument("tune: range '" + r.name + "' has lo > hi");
      if (r.log_scale && !(r.lo > 0)) throw std::invalid_argument("tune: log range '" + r.name + "' must be positive");
      if (r.kind == ParamRange::Kind::kInteger && r.step < 1) {
        throw std::invalid_argument("tune: integer range '" + r.name + "' needs step >= 1");
      }
    }
  }
}

const ParamValue& lookup(const ParamSet& p, const std::string& name) {
  auto it = p.find(name);
  if (it == p.end()) throw std::invalid_argument("missing hyperparameter '" + name + "'");
  return it->second;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string param_to_string(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream os;
    os.precision(17);
    os << *d;
    return os.str();
  }
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

double param_as_double(const ParamSet& p, const std::string& name) {
  const auto& v = lookup(p, name);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<long long>(&v)) return static_cast<double>(*i);
  throw std::invalid_argument("hyperparameter '" + name + "' is not numeric");
}

long long param_as_int(const ParamSet& p, const std::string& name) {
  const auto& v = lookup(p, name);
  if (const auto* i = std::get_if<long long>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return std::llround(*d);
  throw std::invalid_argument("hyperparameter '" + name + "' is not numeric");
}

const std::string& param_as_string(const ParamSet& p, const std::string& name) {
  const auto& v = lookup(p, name);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw std::invalid_argument("hyperparameter '" + name + "' is not a string");
}

ParamRange ParamRange::continuous(std::string name, double lo, double hi, bool log_scale) {
  ParamRange r;
  r.name = std::move(name);
  r.kind = Kind::kContinuous;
  r.lo = lo;
  r.hi = hi;
  r.log_scale = log_scale;
  return r;
}

ParamRange ParamRange::integer(std::string name, long long lo, long long hi, long long step) {
  ParamRange r;
  r.name = std::move(name);
  r.kind = Kind::kInteger;
  r.lo = static_cast<double>(lo);
  r.hi = static_cast<double>(hi);
  r.step = step;
  return r;
}

ParamRange ParamRange::categorical(std::string name, std::vector<ParamValue> choices) {
  ParamRange r;
  r.name = std::move(name);
  r.kind = Kind::kCategorical;
  r.choices = std::move(choices);
  return r;
}

bool ParamRange::contains(const ParamValue& v) const {
  if (!choices.empty() && kind == Kind::kCategorical) {
    return std::find(choices.begin(), choices.end(), v) != choices.end();
  }
  if (kind == Kind::kInteger) {
    const auto* i = std::get_if<long long>(&v);
    if (!i) return false;
    const auto lo_i = static_cast<long long>(lo);
    return *i >= lo_i && *i <= static_cast<long long>(hi) && (*i - lo_i) % step == 0;
  }
  const auto* d = std::get_if<double>(&v);
  return d && *d >= lo && *d <= hi;
}

std::vector<ParamSet> enumerate_trials(const TunerSpec& spec) {
  validate(spec);
  std::vector<ParamSet> out;
  if (spec.strategy == SearchStrategy::kRandom) {
    for (std::size_t t = 0; t < spec.budget; ++t) {
      Rng rng(derive_seed(spec.seed, t));
      ParamSet p;
      for (const auto& r : spec.space) p[r.name] = sample(r, rng);
      out.push_back(std::move(p));
    }
    return out;
  }
  std::vector<std::vector<ParamValue>> axes;
  for (const auto& r : spec.space) axes.push_back(grid_values(r));
  std::vector<std::size_t> counter(axes.size(), 0);
  while (out.size() < spec.budget) {
    ParamSet p;
    for (std::size_t k = 0; k < axes.size(); ++k) p[spec.space[k].name] = axes[k][counter[k]];
    out.push_back(std::move(p));
    // Odometer increment, last range fastest.
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++counter[k] < axes[k].size()) break;
      counter[k] = 0;
      if (k == 0) return out;
    }
    if (axes.empty()) break;
  }
  return out;
}

TuneResult tune(const Trainer& trainer, const TunerSpec& spec, const Eigen::MatrixXd& x_train,
                const Eigen::VectorXd& y_train, const Eigen::MatrixXd& x_val,
                const Eigen::VectorXd& y_val) {
  if (x_val.rows() < 1) throw std::invalid_argument("tune: empty validation set");
  TuneResult result;
  result.best_val_mse = std::numeric_limits<double>::infinity();
  bool any_ok = false;
  const auto configs = enumerate_trials(spec);
  for (std::size_t t = 0; t < configs.size(); ++t) {
    TrialRecord rec;
    rec.index = t;
    rec.params = configs[t];
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto model = trainer(rec.params, x_train, y_train);
      const Eigen::VectorXd pred = model->predict_rows(x_val);
      rec.val_mse = (pred - y_val).squaredNorm() / static_cast<double>(y_val.size());
      rec.ok = std::isfinite(rec.val_mse);
      if (!rec.ok) rec.error = "non-finite validation MSE";
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rec.ok && rec.val_mse < result.best_val_mse) {
      result.best_val_mse = rec.val_mse;
      result.best_index = t;
      result.best_params = rec.params;
      any_ok = true;
    }
    result.trials.push_back(std::move(rec));
  }
  if (!any_ok) throw std::runtime_error("tune: every trial failed");
  return result;
}

void write_trial_log(const TuneResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trial log '" + path + "'");
  std::vector<std::string> names;
  if (!result.trials.empty()) {
    for (const auto& [k, v] : result.trials.front().params) names.push_back(k);
  }
  out << "trial,status,val_mse,seconds";
  for (const auto& n : names) out << ',' << n;
  out << ",error\n";
  out.precision(17);
  for (const auto& t : result.trials) {
    out << t.index << ',' << (t.ok ? "ok" : "failed") << ',' << t.val_mse << ',' << t.seconds;
    for (const auto& n : names) {
      auto it = t.params.find(n);
      out << ',' << (it == t.params.end() ? "" : csv_escape(param_to_string(it->second)));
    }
    out << ',' << csv_escape(t.error) << '\n';
  }
}

std::vector<ParamRange> svr_search_space() {
  return {
      ParamRange::categorical("kernel", {std::string("poly"), std::string("rbf"), std::string("sigmoid"),
                                         std::string("linear")}),
      ParamRange::integer("degree", 1, 4),
      ParamRange::continuous("gamma", 1e-4, 1.0, true),
      ParamRange::continuous("coef0", 0.01, 10.0, true),
      ParamRange::continuous("c", 0.1, 1000.0, true),
      ParamRange::continuous("epsilon", 0.01, 10.0, true),
  };
}

std::vector<ParamRange> mlp_search_space() {
  return {
      ParamRange::categorical("hidden_activation", {std::string("relu"), std::string("sigmoid")}),
      ParamRange::integer("hidden_layers", 1, 10),
      ParamRange::integer("hidden_units", 32, 8000, 32),
      ParamRange::categorical("output_activation", {std::string("linear"), std::string("sigmoid")}),
      ParamRange::categorical("optimizer", {std::string("adam"), std::string("sgd"), std::string("rmsprop")}),
      ParamRange::continuous("learning_rate", 1e-4, 1.0, true),
      ParamRange::continuous("l2", 1e-4, 1e-2, true),
      ParamRange::categorical("weight_init", {std::string("random_normal"), std::string("glorot_uniform"),
                                              std::string("he_normal")}),
      ParamRange::integer("batch_size", 32, 100),
      ParamRange::integer("epochs", 100, 1000),
      ParamRange::categorical("architecture", {std::string("up"), std::string("down"), std::string("up-down"),
                                               std::string("down-up"), std::string("random")}),
  };
}

SvrHyperparams svr_from_params(const ParamSet& p, const SvrHyperparams& base) {
  SvrHyperparams h = base;
  if (p.count("kernel")) h.kernel.kind = parse_kernel(param_as_string(p, "kernel"));
  if (p.count("degree")) h.kernel.degree = static_cast<int>(param_as_int(p, "degree"));
  if (p.count("gamma")) h.kernel.gamma = param_as_double(p, "gamma");
  if (p.count("coef0")) h.kernel.coef0 = param_as_double(p, "coef0");
  if (p.count("c")) h.c = param_as_double(p, "c");
  if (p.count("epsilon")) h.epsilon = param_as_double(p, "epsilon");
  h.validate();
  return h;
}

MlpHyperparams mlp_from_params(const ParamSet& p, std::size_t input_width, MlpArchitecture& arch,
                               const MlpHyperparams& base) {
  MlpHyperparams h = base;
  if (p.count("optimizer")) h.optimizer = parse_optimizer(param_as_string(p, "optimizer"));
  if (p.count("learning_rate")) h.learning_rate = param_as_double(p, "learning_rate");
  if (p.count("l2")) h.l2_penalty = param_as_double(p, "l2");
  if (p.count("weight_init")) h.weight_init = parse_weight_init(param_as_string(p, "weight_init"));
  if (p.count("batch_size")) h.batch_size = static_cast<std::size_t>(param_as_int(p, "batch_size"));
  if (p.count("epochs")) h.epochs = static_cast<std::size_t>(param_as_int(p, "epochs"));
  h.validate();

  ArchitectureRequest req;
  req.pattern = p.count("architecture") ? parse_arch_pattern(param_as_string(p, "architecture"))
                                        : ArchPattern::kDown;
  req.depth = p.count("hidden_layers") ? static_cast<std::size_t>(param_as_int(p, "hidden_layers")) : 1;
  req.base_width = p.count("hidden_units") ? static_cast<std::size_t>(param_as_int(p, "hidden_units")) : 64;
  req.seed = h.init_seed;
  const auto hidden_act = p.count("hidden_activation") ? parse_activation(param_as_string(p, "hidden_activation"))
                                                       : Activation::kRelu;
  const auto output_act = p.count("output_activation") ? parse_activation(param_as_string(p, "output_activation"))
                                                       : Activation::kLinear;
  arch = make_architecture(input_width, gen_architecture(req), hidden_act, output_act);
  return h;
}

Trainer svr_trainer(const SvrHyperparams& base) {
  return [base](const ParamSet& p, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    return std::make_unique<SvrModel>(svr_fit(x, y, svr_from_params(p, base)));
  };
}

Trainer mlp_trainer(const MlpHyperparams& base) {
  return [base](const ParamSet& p, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    MlpArchitecture arch;
    const MlpHyperparams h = mlp_from_params(p, static_cast<std::size_t>(x.cols()), arch, base);
    return std::make_unique<MlpModel>(mlp_fit(x, y, arch, h));
  };
}

}  // namespace spex::models
