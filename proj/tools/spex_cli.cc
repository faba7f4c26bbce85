#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spex/common/random.h"
#include "spex/explainers/attribution.h"
#include "spex/explainers/lime.h"
#include "spex/explainers/shapley.h"
#include "spex/explainers/surrogate.h"
#include "spex/harness/config.h"
#include "spex/harness/evaluation.h"
#include "spex/harness/report.h"
#include "spex/metrics/metrics.h"
#include "spex/models/serialize.h"
#include "spex/selectors/ranking.h"
#include "spex/spectra/io.h"
#include "spex/spectra/standardize.h"

namespace fs = std::filesystem;
using namespace spex;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kPartialFailure = 3 };

// Option errors that survive CLI11 validation are reported as config errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

// Seeded subset of rows, ascending; all rows when n covers them.
std::vector<std::size_t> pick_rows(std::size_t total, std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  if (n == 0 || n >= total) return idx;
  Rng rng(seed);
  rng.shuffle(idx);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

metrics::BinScheme bin_scheme(const harness::CorrectnessSettings& c, const spectra::WavenumberAxis& axis) {
  auto scheme = metrics::BinScheme::for_axis(axis);
  if (c.bin_width) scheme.width = *c.bin_width;
  return scheme;
}

struct SynthArgs {
  std::string config, out;
};

int run_synth(const SynthArgs& a) {
  auto cfg = harness::load_config(a.config);
  if (cfg.data.kind != harness::DataSource::Kind::kSynthetic) {
    throw harness::ConfigError("synth needs a synthetic data source");
  }
  const auto data = harness::load_data(cfg.data);
  const fs::path out(a.out);
  ensure_dir(out);
  spectra::save_dataset(out / "old.csv", data.old_data);
  spectra::save_dataset(out / "new.csv", data.new_data);
  if (data.expert) metrics::save_expert_features(out / "expert.txt", *data.expert);
  std::cout << "wrote " << data.old_data.n_samples() << " old and " << data.new_data.n_samples()
            << " new spectra with " << data.old_data.n_features() << " features to " << out.string() << '\n';
  return kOk;
}

struct EvaluateArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads, repeats;
  std::vector<std::string> formats{"json", "csv"};
};

int run_evaluate(const EvaluateArgs& a) {
  auto cfg = harness::load_config(a.config);
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (a.repeats) cfg.n_repeats = *a.repeats;
  cfg.validate();
  const auto rep = harness::run_evaluation(cfg);
  harness::emit_report(rep, a.out, {a.formats.begin(), a.formats.end()});
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  const std::size_t failed = rep.failed_cells();
  std::cout << rep.cells.size() << " cells evaluated, " << failed << " not fully ok; report in " << a.out << '\n';
  return failed > 0 ? kPartialFailure : kOk;
}

struct SelectArgs {
  std::string data, method, out, expert, ranking_out, config;
  std::size_t k = 120;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

int run_select(const SelectArgs& a) {
  if (!harness::is_ranking_method(a.method)) throw UsageError("unknown ranking method '" + a.method + "'");
  harness::SelectorSettings settings;
  harness::CorrectnessSettings corr;
  if (!a.config.empty()) {
    const auto cfg = harness::load_config(a.config);
    settings = cfg.selector;
    corr = cfg.correctness;
  }
  settings.rule = selectors::SelectionRule::count(a.k);
  const auto ds = spectra::load_dataset(a.data);
  const Eigen::MatrixXd none_x(0, ds.intensities.cols());
  const Eigen::VectorXd none_y(0);
  const harness::TrainingView view{ds.intensities, ds.response, none_x, none_y};
  const auto ranking = harness::compute_ranking(a.method, view, settings, a.seed, a.threads);
  const auto subset = selectors::select_top(ranking, settings.rule, ds.axis);
  selectors::save_subset(a.out, subset);
  if (!a.ranking_out.empty()) selectors::save_ranking(a.ranking_out, ranking, ds.axis);
  std::cout << a.method << ": kept " << subset.size() << " of " << ds.n_features() << " features\n";
  if (!a.expert.empty()) {
    const auto expert = metrics::load_expert_features(a.expert);
    const auto r = metrics::correctness(ranking, expert, a.k, bin_scheme(corr, ds.axis), ds.axis);
    std::cout << "correctness@" << a.k << ": " << spectra::format_double(r.percent) << "%\n";
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  }
  return kOk;
}

struct ExplainArgs {
  std::string model, data, method, out;
  std::size_t rows = 20, background = 10, strata = 5, permutations = 100, perturbations = 1000, top_k = 50;
  double kernel_width = 0.0, ridge = -1.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

int run_explain(const ExplainArgs& a) {
  const auto model = models::load_model(a.model);
  const auto ds = spectra::load_dataset(a.data);
  if (static_cast<Eigen::Index>(ds.n_features()) != model->input_width()) {
    throw spectra::LoadError(spectra::LoadErrorKind::kRowWidthMismatch,
                             "data has " + std::to_string(ds.n_features()) + " features, model expects " +
                                 std::to_string(model->input_width()));
  }
  const fs::path out(a.out);
  ensure_dir(out);
  nlohmann::json summary = {{"method", a.method}, {"model", a.model}, {"data", a.data}, {"seed", a.seed}};
  selectors::FeatureRanking ranking;

  if (a.method == "surrogate") {
    const double ridge = a.ridge < 0 ? explainers::kSurrogateRidge : a.ridge;
    const auto s = explainers::surrogate_fit(*model, ds.intensities, ridge);
    ranking = explainers::surrogate_rank(s);
    summary["fidelity_r2"] = s.fidelity;
    summary["ridge"] = ridge;
  } else {
    const auto rows = pick_rows(ds.n_samples(), a.rows, derive_seed(a.seed, 1));
    const Eigen::MatrixXd x_explain = spectra::select_rows(ds.intensities, rows);
    std::vector<explainers::Attribution> attrs;
    if (a.method == "shap") {
      explainers::ShapConfig cfg;
      const auto bg = explainers::stratified_background(ds.intensities, *model, a.background,
                                                        derive_seed(a.seed, 2), a.strata);
      cfg.background = spectra::select_rows(ds.intensities, bg);
      cfg.n_permutations = a.permutations;
      cfg.seed = derive_seed(a.seed, 3);
      cfg.threads = a.threads;
      attrs = explainers::shapley_batch(*model, x_explain, cfg);
      ranking = explainers::shap_rank(attrs);
      summary["background_rows"] = bg;
      summary["permutations"] = a.permutations;
    } else if (a.method == "lime") {
      explainers::LimeConfig cfg;
      cfg.n_perturbations = a.perturbations;
      cfg.kernel_width = a.kernel_width;
      if (a.ridge >= 0) cfg.ridge_penalty = a.ridge;
      cfg.train_stats = spectra::standardize_fit(ds.intensities);
      cfg.seed = derive_seed(a.seed, 3);
      cfg.threads = a.threads;
      attrs = explainers::lime_batch(*model, x_explain, cfg);
      ranking = explainers::lime_rank(attrs, a.top_k).ranking;
      std::vector<double> r2;
      for (const auto& at : attrs) r2.push_back(at.local_r2);
      summary["local_r2"] = r2;
      summary["top_k"] = a.top_k;
    } else {
      throw UsageError("unknown explain method '" + a.method + "'");
    }
    for (auto& at : attrs) at.instance_id = rows[at.instance_id];
    explainers::write_attributions(out / "attributions.csv", attrs, ds.axis);
    summary["explained_rows"] = rows;
    std::vector<std::string> warnings;
    for (const auto& at : attrs) warnings.insert(warnings.end(), at.warnings.begin(), at.warnings.end());
    summary["warnings"] = warnings;
  }
  selectors::save_ranking(out / "ranking.csv", ranking, ds.axis);
  write_json(out / "summary.json", summary);
  std::cout << a.method << ": wrote ranking over " << ranking.size() << " features to " << out.string() << '\n';
  return kOk;
}

struct ReportArgs {
  std::string in, out;
  std::vector<std::string> formats{"csv"};
};

int run_report(const ReportArgs& a) {
  const fs::path in(a.in);
  const fs::path src = fs::is_directory(in) ? in / "report.json" : in;
  const auto rep = harness::load_report(src);
  const fs::path out = a.out.empty() ? src.parent_path() : fs::path(a.out);
  harness::emit_report(rep, out, {a.formats.begin(), a.formats.end()});
  std::cout << "wrote " << rep.cells.size() << " cells to " << out.string() << '\n';
  return rep.failed_cells() > 0 ? kPartialFailure : kOk;
}

struct FitArgs {
  std::string config, model, data, out;
  std::uint64_t seed = 0;
};

int run_fit(const FitArgs& a) {
  const auto cfg = harness::load_config(a.config);
  const auto it = std::find_if(cfg.models.begin(), cfg.models.end(),
                               [&](const harness::ModelEntry& m) { return m.name == a.model; });
  if (it == cfg.models.end()) throw harness::ConfigError("config has no model named '" + a.model + "'");
  spectra::SpectraDataset ds;
  if (a.data.empty()) {
    ds = harness::load_data(cfg.data).old_data;
  } else {
    ds = spectra::load_dataset(a.data);
  }
  const auto model = harness::fit_model(*it, ds.intensities, ds.response, a.seed);
  models::save_model(*model, a.out);
  std::cout << "fitted " << it->name << " (" << model->kind() << ", complexity " << model->complexity() << ") on "
            << ds.n_samples() << " rows\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral regression with explainable feature selection"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write synthetic old/new spectra and expert features");
  c_synth->add_option("--config", synth.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  c_synth->add_option("--out", synth.out, "Output directory")->required();

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Run the repeated-split scenario evaluation");
  c_eval->add_option("--config", eval.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--out", eval.out, "Output directory")->required();
  c_eval->add_option("--seed", eval.seed, "Override base_seed");
  c_eval->add_option("--threads", eval.threads, "Override threads");
  c_eval->add_option("--repeats", eval.repeats, "Override n_repeats");
  c_eval->add_option("--format", eval.formats, "Output formats")->check(CLI::IsMember({"json", "csv"}));

  SelectArgs sel;
  auto* c_sel = app.add_subcommand("select", "Rank features and keep the top k");
  c_sel->add_option("--data", sel.data, "Spectra CSV")->required()->check(CLI::ExistingFile);
  c_sel->add_option("--method", sel.method, "pca, pls, rf, ridge, shap, gs or lime")->required();
  c_sel->add_option("--k", sel.k, "Features to keep")->check(CLI::PositiveNumber);
  c_sel->add_option("--out", sel.out, "Subset file (one wavenumber per line)")->required();
  c_sel->add_option("--ranking", sel.ranking_out, "Also write the full ranking here");
  c_sel->add_option("--expert", sel.expert, "Expert wavenumbers; prints correctness")->check(CLI::ExistingFile);
  c_sel->add_option("--config", sel.config, "Take selector settings from this config")->check(CLI::ExistingFile);
  c_sel->add_option("--seed", sel.seed, "Seed");
  c_sel->add_option("--threads", sel.threads, "Worker threads");

  ExplainArgs ex;
  auto* c_ex = app.add_subcommand("explain", "Attribute a saved model's predictions to features");
  c_ex->add_option("--model", ex.model, "Model JSON")->required()->check(CLI::ExistingFile);
  c_ex->add_option("--data", ex.data, "Spectra CSV")->required()->check(CLI::ExistingFile);
  c_ex->add_option("--method", ex.method, "Explainer")->required()->check(CLI::IsMember({"shap", "lime", "surrogate"}));
  c_ex->add_option("--out", ex.out, "Output directory")->required();
  c_ex->add_option("--rows", ex.rows, "Rows to explain (0 = all)");
  c_ex->add_option("--background", ex.background, "Shapley background rows");
  c_ex->add_option("--strata", ex.strata, "Background strata");
  c_ex->add_option("--permutations", ex.permutations, "Shapley permutations");
  c_ex->add_option("--perturbations", ex.perturbations, "LIME perturbations");
  c_ex->add_option("--kernel-width", ex.kernel_width, "LIME kernel width (0 = 0.75 sqrt(M))");
  c_ex->add_option("--top-k", ex.top_k, "LIME per-instance top k");
  c_ex->add_option("--ridge", ex.ridge, "Ridge penalty for LIME or surrogate");
  c_ex->add_option("--seed", ex.seed, "Seed");
  c_ex->add_option("--threads", ex.threads, "Worker threads");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Re-emit tables from a saved report");
  c_rep->add_option("--in", rep.in, "Report directory or report.json")->required()->check(CLI::ExistingPath);
  c_rep->add_option("--format", rep.formats, "json and/or csv")->check(CLI::IsMember({"json", "csv"}));
  c_rep->add_option("--out", rep.out, "Output directory (default: alongside the input)");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit one configured model and save it");
  c_fit->add_option("--config", fit.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  c_fit->add_option("--model", fit.model, "Model name from the config")->required();
  c_fit->add_option("--data", fit.data, "Training CSV (default: the config's old pool)")->check(CLI::ExistingFile);
  c_fit->add_option("--out", fit.out, "Model JSON")->required();
  c_fit->add_option("--seed", fit.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (c_synth->parsed()) return run_synth(synth);
    if (c_eval->parsed()) return run_evaluate(eval);
    if (c_sel->parsed()) return run_select(sel);
    if (c_ex->parsed()) return run_explain(ex);
    if (c_rep->parsed()) return run_report(rep);
    if (c_fit->parsed()) return run_fit(fit);
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const spectra::LoadError& e) {
    std::cerr << "data error (" << spectra::load_error_name(e.kind()) << "): " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}
