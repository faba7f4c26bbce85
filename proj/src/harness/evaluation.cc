#include "spex/harness/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "spex/common/parallel.h"
#include "spex/common/random.h"
#include "spex/explainers/lime.h"
#include "spex/explainers/shapley.h"
#include "spex/explainers/surrogate.h"
#include "spex/models/architecture.h"
#include "spex/models/forest.h"
#include "spex/models/linear.h"
#include "spex/models/mlp.h"
#include "spex/models/svr.h"
#include "spex/selectors/importance.h"
#include "spex/spectra/io.h"
#include "spex/spectra/standardize.h"

namespace spex::harness {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Seeded subsample of at most n rows, in ascending order.
std::vector<std::size_t> sample_rows(std::size_t total, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  auto perm = rng.permutation(total);
  perm.resize(std::min(n, total));
  std::sort(perm.begin(), perm.end());
  return perm;
}

Eigen::Index pls_components(const TrainingView& v, const SelectorSettings& s, std::uint64_t seed) {
  const auto max_p = static_cast<Eigen::Index>(s.pls_max_p);
  if (v.x_val.rows() > 0) {
    return selectors::choose_components(selectors::ComponentMethod::kPls, v.x_train, v.y_train, max_p, v.x_val,
                                        v.y_val)
        .p;
  }
  // No validation rows: hold out a seeded 20% of the training rows.
  const auto n = static_cast<std::size_t>(v.x_train.rows());
  Rng rng(seed);
  const auto perm = rng.permutation(n);
  const std::size_t n_val = std::max<std::size_t>(1, n / 5);
  const std::vector<std::size_t> val(perm.begin(), perm.begin() + static_cast<long>(n_val));
  const std::vector<std::size_t> train(perm.begin() + static_cast<long>(n_val), perm.end());
  return selectors::choose_components(selectors::ComponentMethod::kPls, spectra::select_rows(v.x_train, train),
                                      spectra::select_rows(v.y_train, train), max_p,
                                      spectra::select_rows(v.x_train, val), spectra::select_rows(v.y_train, val))
      .p;
}

struct CellRun {
  bool ok = false;
  double train_mse = 0.0;
  double test_mse = 0.0;
  double seconds = 0.0;
  double complexity = 0.0;
  double subset_size = 0.0;
  std::string error;
};

struct RepeatResult {
  std::vector<CellRun> cells;        // [scenario][method][model]
  std::vector<double> select_times;  // [scenario][method]
};

}  // namespace

LoadedData load_data(const DataSource& source) {
  LoadedData out;
  if (source.kind == DataSource::Kind::kSynthetic) {
    auto syn = spectra::generate_synthetic(source.synth, source.synth_seed);
    out.old_data = std::move(syn.old_data);
    out.new_data = std::move(syn.new_data);
    out.expert = metrics::ExpertFeatureSet{std::move(syn.expert_wavenumbers), "synthetic ground truth"};
  } else {
    out.old_data = spectra::load_dataset(source.old_path);
    if (!source.new_path.empty()) out.new_data = spectra::load_dataset(source.new_path);
    if (!source.expert_path.empty()) out.expert = metrics::load_expert_features(source.expert_path);
  }
  if (source.trim) {
    out.old_data = spectra::trim_axis(out.old_data, source.trim->first, source.trim->second);
    if (!out.new_data.empty()) {
      out.new_data = spectra::trim_axis(out.new_data, source.trim->first, source.trim->second);
    }
  }
  return out;
}

selectors::FeatureRanking compute_ranking(const std::string& method, const TrainingView& v,
                                          const SelectorSettings& s, std::uint64_t seed, std::size_t threads) {
  if (method == "pca") {
    const auto p = selectors::choose_components(selectors::ComponentMethod::kPca, v.x_train, v.y_train,
                                                static_cast<Eigen::Index>(s.pca_max_p), v.x_val, v.y_val)
                       .p;
    return selectors::component_feature_scores(selectors::pca_fit(v.x_train, p));
  }
  if (method == "pls") {
    const auto p = pls_components(v, s, derive_seed(seed, 0x91));
    return selectors::component_feature_scores(selectors::pls_fit(v.x_train, v.y_train, p));
  }
  if (method == "rf") {
    auto h = s.rf;
    h.seed = derive_seed(seed, h.seed);
    h.threads = threads;
    return selectors::rf_rank(models::rf_fit(v.x_train, v.y_train, h));
  }
  if (method == "ridge") return selectors::ridge_rank_fit(v.x_train, v.y_train, s.ridge_alpha);

  if (method != "shap" && method != "gs" && method != "lime") {
    throw std::invalid_argument("'" + method + "' is not a ranking method");
  }
  const auto black_box = models::svr_fit(v.x_train, v.y_train, s.explainer);
  if (method == "gs") {
    auto sur = explainers::surrogate_fit(black_box, v.x_train, s.surrogate_ridge);
    return explainers::surrogate_rank(sur);
  }
  const auto n = static_cast<std::size_t>(v.x_train.rows());
  const Eigen::MatrixXd x_explain =
      spectra::select_rows(v.x_train, sample_rows(n, s.explain_rows, derive_seed(seed, 0xe1)));
  if (method == "shap") {
    explainers::ShapConfig cfg;
    const auto bg = explainers::stratified_background(v.x_train, black_box, std::min(s.background_rows, n),
                                                      derive_seed(seed, 0xb9), s.background_strata);
    cfg.background = spectra::select_rows(v.x_train, bg);
    cfg.n_permutations = s.shap_permutations;
    cfg.seed = derive_seed(seed, 0x5a);
    cfg.threads = threads;
    return explainers::shap_rank(black_box, x_explain, cfg);
  }
  explainers::LimeConfig cfg;
  cfg.n_perturbations = s.lime_perturbations;
  cfg.kernel_width = s.lime_kernel_width;
  cfg.ridge_penalty = s.lime_ridge;
  cfg.train_stats = spectra::standardize_fit(v.x_train);
  cfg.seed = derive_seed(seed, 0x11);
  cfg.threads = threads;
  return explainers::lime_rank(black_box, x_explain, cfg, s.lime_top_k).ranking;
}

selectors::FeatureSubset compute_subset(const std::string& method, const TrainingView& v,
                                        const spectra::WavenumberAxis& axis, const SelectorSettings& s,
                                        const std::optional<metrics::ExpertFeatureSet>& expert,
                                        std::uint64_t seed, std::size_t threads) {
  if (method == "full") {
    std::vector<std::size_t> all(axis.size());
    std::iota(all.begin(), all.end(), 0);
    return selectors::subset_from_indices(std::move(all), axis);
  }
  if (method == "expert") {
    if (!expert) throw std::invalid_argument("selection 'expert' needs an expert feature set");
    std::vector<double> inside;
    for (double w : expert->wavenumbers) {
      if (w >= axis.front() && w <= axis.back()) inside.push_back(w);
    }
    if (inside.empty()) throw std::invalid_argument("no expert wavenumber lies on the axis");
    return selectors::subset_from_wavenumbers(inside, axis);
  }
  if (method.rfind("subset:", 0) == 0) return selectors::load_subset(method.substr(7), axis);
  return selectors::select_top(compute_ranking(method, v, s, seed, threads), s.rule, axis);
}

std::unique_ptr<models::Regressor> fit_model(const ModelEntry& e, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                             std::uint64_t seed) {
  switch (e.type) {
    case ModelType::kSvr:
      return std::make_unique<models::SvrModel>(models::svr_fit(x, y, e.svr));
    case ModelType::kMlp: {
      auto req = e.mlp_arch;
      req.seed = derive_seed(seed, req.seed);
      const auto hidden = e.mlp_hidden.empty() ? models::gen_architecture(req) : e.mlp_hidden;
      const auto arch = models::make_architecture(static_cast<std::size_t>(x.cols()), hidden,
                                                  e.mlp_hidden_activation, e.mlp_output_activation);
      auto h = e.mlp;
      h.init_seed = derive_seed(seed, e.mlp.init_seed);
      h.shuffle_seed = derive_seed(seed ^ 0x5bd1e995ULL, e.mlp.shuffle_seed);
      return std::make_unique<models::MlpModel>(models::mlp_fit(x, y, arch, h));
    }
    case ModelType::kLinear:
      return std::make_unique<models::LinearModel>(models::ols_fit(x, y));
    case ModelType::kRidge:
      return std::make_unique<models::LinearModel>(models::ridge_fit(x, y, e.ridge_alpha));
    case ModelType::kForest: {
      auto h = e.rf;
      h.seed = derive_seed(seed, e.rf.seed);
      return std::make_unique<models::RfModel>(models::rf_fit(x, y, h));
    }
  }
  throw std::invalid_argument("unknown model type");
}

Stat summarize(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

std::size_t EvalReport::failed_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const EvalCell& c) { return c.status != "ok"; }));
}

EvalReport run_evaluation(const ExperimentConfig& cfg) {
  cfg.validate();
  const LoadedData data = load_data(cfg.data);
  const auto& axis = data.old_data.axis;

  const std::size_t n_scen = cfg.scenarios.size();
  const std::size_t n_meth = cfg.selections.size();
  const std::size_t n_model = cfg.models.size();
  auto cell_index = [&](std::size_t s, std::size_t m, std::size_t k) { return (s * n_meth + m) * n_model + k; };

  const std::size_t outer = std::min(resolve_threads(cfg.threads), cfg.n_repeats);
  const std::size_t inner = outer > 1 ? 1 : cfg.threads;

  std::vector<RepeatResult> repeats(cfg.n_repeats);
  parallel_for(cfg.n_repeats, outer, [&](std::size_t r) {
    const std::uint64_t seed = cfg.base_seed + r;
    RepeatResult& out = repeats[r];
    out.cells.assign(n_scen * n_meth * n_model, CellRun{});
    out.select_times.assign(n_scen * n_meth, 0.0);
    for (std::size_t s = 0; s < n_scen; ++s) {
      spectra::ScenarioSplit split;
      try {
        split = spectra::make_scenario(data.old_data, data.new_data,
                                       spectra::ScenarioSpec::defaults(cfg.scenarios[s], seed));
      } catch (const std::exception& e) {
        for (std::size_t m = 0; m < n_meth; ++m) {
          for (std::size_t k = 0; k < n_model; ++k) out.cells[cell_index(s, m, k)].error = e.what();
        }
        continue;
      }
      const TrainingView view{split.train.intensities, split.train.response, split.val.intensities,
                              split.val.response};
      const std::uint64_t scen_seed = derive_seed(seed, s);
      for (std::size_t m = 0; m < n_meth; ++m) {
        selectors::FeatureSubset subset;
        const auto t0 = Clock::now();
        try {
          subset = compute_subset(cfg.selections[m], view, axis, cfg.selector, data.expert,
                                  derive_seed(scen_seed, 1000 + m), inner);
        } catch (const std::exception& e) {
          for (std::size_t k = 0; k < n_model; ++k) {
            out.cells[cell_index(s, m, k)].error = std::string("selection: ") + e.what();
          }
          continue;
        }
        out.select_times[s * n_meth + m] = seconds_since(t0);
        const Eigen::MatrixXd x_train = spectra::select_columns(split.train.intensities, subset.indices);
        const Eigen::MatrixXd x_test = spectra::select_columns(split.test.intensities, subset.indices);
        for (std::size_t k = 0; k < n_model; ++k) {
          CellRun& run = out.cells[cell_index(s, m, k)];
          run.subset_size = static_cast<double>(subset.size());
          const auto t1 = Clock::now();
          try {
            const auto model = fit_model(cfg.models[k], x_train, split.train.response, derive_seed(scen_seed, k));
            run.train_mse = metrics::mse(split.train.response, model->predict_rows(x_train));
            run.test_mse = metrics::mse(split.test.response, model->predict_rows(x_test));
            run.complexity = static_cast<double>(model->complexity());
            run.ok = std::isfinite(run.train_mse) && std::isfinite(run.test_mse);
            if (!run.ok) run.error = "non-finite MSE";
          } catch (const std::exception& e) {
            run.error = e.what();
          }
          run.seconds = seconds_since(t1);
        }
      }
    }
  });

  EvalReport rep;
  rep.config = config_to_json(cfg);
  for (std::size_t s = 0; s < n_scen; ++s) {
    for (std::size_t m = 0; m < n_meth; ++m) {
      SelectionTiming t{spectra::scenario_name(cfg.scenarios[s]), cfg.selections[m], 0.0};
      for (const auto& r : repeats) t.wall_time += r.select_times[s * n_meth + m];
      rep.selection_timing.push_back(t);
      for (std::size_t k = 0; k < n_model; ++k) {
        EvalCell cell;
        cell.scenario = spectra::scenario_name(cfg.scenarios[s]);
        cell.method = cfg.selections[m];
        cell.model = cfg.models[k].name;
        cell.n_repeats = cfg.n_repeats;
        std::vector<double> train, test;
        double complexity = 0.0, size = 0.0;
        for (std::size_t r = 0; r < repeats.size(); ++r) {
          const CellRun& run = repeats[r].cells[cell_index(s, m, k)];
          cell.wall_time += run.seconds;
          if (run.ok) {
            train.push_back(run.train_mse);
            test.push_back(run.test_mse);
            complexity += run.complexity;
            size += run.subset_size;
          } else {
            cell.errors.push_back("repeat " + std::to_string(r) + ": " + run.error);
          }
        }
        cell.n_ok = train.size();
        cell.train_mse = summarize(train);
        cell.test_mse = summarize(test);
        if (cell.n_ok > 0) {
          cell.complexity = complexity / static_cast<double>(cell.n_ok);
          cell.subset_size = size / static_cast<double>(cell.n_ok);
        }
        cell.wall_time_per_fit = cell.wall_time / static_cast<double>(cfg.n_repeats);
        cell.status = cell.n_ok == cfg.n_repeats ? "ok" : (cell.n_ok == 0 ? "failed" : "partial");
        rep.cells.push_back(std::move(cell));
      }
    }
  }

  // Correctness: one ranking per method on the whole old pool.
  if (data.expert) {
    metrics::BinScheme scheme = metrics::BinScheme::for_axis(axis);
    if (cfg.correctness.bin_width) scheme.width = *cfg.correctness.bin_width;
    std::vector<std::size_t> ks;
    for (auto k : cfg.correctness.ks) {
      if (k <= axis.size()) ks.push_back(k);
    }
    const Eigen::MatrixXd empty_x(0, data.old_data.intensities.cols());
    const Eigen::VectorXd empty_y(0);
    const TrainingView pool{data.old_data.intensities, data.old_data.response, empty_x, empty_y};
    for (std::size_t m = 0; m < n_meth; ++m) {
      const auto& method = cfg.selections[m];
      if (!is_ranking_method(method)) continue;
      try {
        const auto ranking = compute_ranking(method, pool, cfg.selector, derive_seed(cfg.base_seed, 2000 + m),
                                             cfg.threads);
        CorrectnessEntry entry;
        entry.method = method;
        entry.at_k = metrics::correctness(ranking, *data.expert, std::min(cfg.correctness.k, axis.size()), scheme,
                                          axis);
        if (!ks.empty()) entry.curve = metrics::correctness_curve(ranking, *data.expert, ks, scheme, axis);
        for (auto& c : entry.curve) c.method = method;
        entry.at_k.method = method;
        rep.correctness.push_back(std::move(entry));
      } catch (const std::exception& e) {
        rep.warnings.push_back("correctness for '" + method + "' failed: " + e.what());
      }
    }
    const std::string scen = cfg.tradeoff.scenario.empty()
                                 ? spectra::scenario_name(cfg.scenarios.front())
                                 : spectra::scenario_name(spectra::parse_scenario(cfg.tradeoff.scenario));
    const std::string model = cfg.tradeoff.model.empty() ? cfg.models.front().name : cfg.tradeoff.model;
    std::vector<metrics::TradeoffRow> rows;
    for (const auto& c : rep.correctness) {
      for (const auto& cell : rep.cells) {
        if (cell.scenario == scen && cell.model == model && cell.method == c.method) {
          rows.push_back({c.method, c.at_k.jaccard, cell.test_mse.mean, cell.test_mse.sd});
        }
      }
    }
    if (!rows.empty()) rep.tradeoff = metrics::tradeoff(std::move(rows));
  } else {
    rep.warnings.push_back("no expert feature set; correctness skipped");
  }
  return rep;
}

}  // namespace spex::harness
