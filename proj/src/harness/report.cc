#include "spex/harness/report.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "spex/spectra/io.h"

namespace spex::harness {
namespace {

using nlohmann::json;

json stat_json(const Stat& s) { return {{"mean", s.mean}, {"sd", s.sd}}; }
Stat json_stat(const json& j) { return {j.at("mean").get<double>(), j.at("sd").get<double>()}; }

json result_json(const metrics::CorrectnessResult& r) {
  return {{"method", r.method}, {"k", r.k}, {"jaccard", r.jaccard}, {"percent", r.percent}, {"warnings", r.warnings}};
}

metrics::CorrectnessResult json_result(const json& j) {
  metrics::CorrectnessResult r;
  r.method = j.at("method").get<std::string>();
  r.k = j.at("k").get<std::size_t>();
  r.jaccard = j.at("jaccard").get<double>();
  r.percent = j.at("percent").get<double>();
  r.warnings = j.value("warnings", std::vector<std::string>{});
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

json report_to_json(const EvalReport& rep, bool include_runtime) {
  json cells = json::array();
  for (const auto& c : rep.cells) {
    json j = {{"scenario", c.scenario},       {"model", c.model},         {"method", c.method},
              {"train_mse", stat_json(c.train_mse)}, {"test_mse", stat_json(c.test_mse)},
              {"complexity", c.complexity},   {"subset_size", c.subset_size}, {"n_ok", c.n_ok},
              {"n_repeats", c.n_repeats},     {"status", c.status},       {"errors", c.errors}};
    if (include_runtime) {
      j["wall_time"] = c.wall_time;
      j["wall_time_per_fit"] = c.wall_time_per_fit;
    }
    cells.push_back(std::move(j));
  }
  json timing = json::array();
  if (include_runtime) {
    for (const auto& t : rep.selection_timing) {
      timing.push_back({{"scenario", t.scenario}, {"method", t.method}, {"wall_time", t.wall_time}});
    }
  }
  json corr = json::array();
  for (const auto& c : rep.correctness) {
    json curve = json::array();
    for (const auto& r : c.curve) curve.push_back(result_json(r));
    corr.push_back({{"method", c.method}, {"at_k", result_json(c.at_k)}, {"curve", curve}});
  }
  json trade = json::array();
  for (const auto& t : rep.tradeoff) {
    trade.push_back({{"method", t.method},
                     {"correctness", t.correctness},
                     {"test_mse_mean", t.test_mse_mean},
                     {"test_mse_sd", t.test_mse_sd}});
  }
  json config = rep.config;
  if (!include_runtime && config.is_object()) config.erase("threads");
  return {{"format", "spex-report"},
          {"version", kReportFormatVersion},
          {"artifact_version", rep.artifact_version},
          {"config", config},
          {"cells", cells},
          {"selection_timing", timing},
          {"correctness", corr},
          {"tradeoff", trade},
          {"warnings", rep.warnings}};
}

EvalReport report_from_json(const json& doc) {
  if (doc.value("format", "") != "spex-report") throw std::runtime_error("not a spex-report document");
  if (doc.at("version").get<int>() != kReportFormatVersion) throw std::runtime_error("unsupported report version");
  EvalReport rep;
  rep.artifact_version = doc.at("artifact_version").get<std::string>();
  rep.config = doc.at("config");
  for (const auto& j : doc.at("cells")) {
    EvalCell c;
    c.scenario = j.at("scenario").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.method = j.at("method").get<std::string>();
    c.train_mse = json_stat(j.at("train_mse"));
    c.test_mse = json_stat(j.at("test_mse"));
    c.complexity = j.at("complexity").get<double>();
    c.subset_size = j.at("subset_size").get<double>();
    c.n_ok = j.at("n_ok").get<std::size_t>();
    c.n_repeats = j.at("n_repeats").get<std::size_t>();
    c.status = j.at("status").get<std::string>();
    c.errors = j.at("errors").get<std::vector<std::string>>();
    c.wall_time = j.value("wall_time", 0.0);
    c.wall_time_per_fit = j.value("wall_time_per_fit", 0.0);
    rep.cells.push_back(std::move(c));
  }
  for (const auto& j : doc.at("selection_timing")) {
    rep.selection_timing.push_back(
        {j.at("scenario").get<std::string>(), j.at("method").get<std::string>(), j.at("wall_time").get<double>()});
  }
  for (const auto& j : doc.at("correctness")) {
    CorrectnessEntry e;
    e.method = j.at("method").get<std::string>();
    e.at_k = json_result(j.at("at_k"));
    for (const auto& r : j.at("curve")) e.curve.push_back(json_result(r));
    rep.correctness.push_back(std::move(e));
  }
  for (const auto& j : doc.at("tradeoff")) {
    rep.tradeoff.push_back({j.at("method").get<std::string>(), j.at("correctness").get<double>(),
                            j.at("test_mse_mean").get<double>(), j.at("test_mse_sd").get<double>()});
  }
  rep.warnings = doc.at("warnings").get<std::vector<std::string>>();
  return rep;
}

std::string performance_csv(const EvalReport& rep) {
  std::vector<std::string> scenarios, rows;
  std::map<std::pair<std::string, std::string>, const EvalCell*> cell;
  for (const auto& c : rep.cells) {
    if (std::find(scenarios.begin(), scenarios.end(), c.scenario) == scenarios.end()) scenarios.push_back(c.scenario);
    const std::string row = c.model + '\x1f' + c.method;
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    cell[{row, c.scenario}] = &c;
  }
  std::ostringstream out;
  out << "model,method";
  for (const auto& s : scenarios) {
    out << ',' << s << "_train_mean," << s << "_train_sd," << s << "_test_mean," << s << "_test_sd," << s
        << "_time," << s << "_complexity," << s << "_status";
  }
  out << '\n';
  using spectra::format_double;
  for (const auto& row : rows) {
    const auto sep = row.find('\x1f');
    out << row.substr(0, sep) << ',' << row.substr(sep + 1);
    for (const auto& s : scenarios) {
      auto it = cell.find({row, s});
      if (it == cell.end()) {
        out << ",,,,,,,";
        continue;
      }
      const EvalCell& c = *it->second;
      out << ',' << format_double(c.train_mse.mean) << ',' << format_double(c.train_mse.sd) << ','
          << format_double(c.test_mse.mean) << ',' << format_double(c.test_mse.sd) << ','
          << format_double(c.wall_time) << ',' << format_double(c.complexity) << ',' << c.status;
    }
    out << '\n';
  }
  return out.str();
}

void emit_report(const EvalReport& rep, const std::filesystem::path& dir, const std::set<std::string>& formats) {
  for (const auto& f : formats) {
    if (f != "json" && f != "csv") throw std::invalid_argument("unknown report format '" + f + "'");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
  if (formats.count("json")) write_text(dir / "report.json", report_to_json(rep).dump(2) + "\n");
  if (formats.count("csv")) {
    write_text(dir / "performance.csv", performance_csv(rep));
    std::vector<metrics::CorrectnessResult> curve;
    for (const auto& c : rep.correctness) curve.insert(curve.end(), c.curve.begin(), c.curve.end());
    metrics::write_curve_csv(dir / "correctness_curve.csv", curve);
    metrics::write_tradeoff_csv(dir / "tradeoff.csv", rep.tradeoff);
  }
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report '" + path.string() + "'");
  try {
    return report_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error("report '" + path.string() + "': " + e.what());
  }
}

}  // namespace spex::harness
