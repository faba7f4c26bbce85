#include "spex/models/serialize.h"

#include <fstream>
#include <stdexcept>

#include "spex/models/forest.h"
#include "spex/models/linear.h"
#include "spex/models/mlp.h"
#include "spex/models/svr.h"

namespace spex::models {
namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd json_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd json_mat(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw std::runtime_error("model file: matrix row count");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = json_vec(data[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw std::runtime_error("model file: matrix column count");
    m.row(r) = row.transpose();
  }
  return m;
}

json scaling_json(const std::optional<spectra::StandardizationParams>& s) {
  if (!s) return nullptr;
  return {{"means", vec_json(s->means)}, {"stds", vec_json(s->stds)}};
}

std::optional<spectra::StandardizationParams> json_scaling(const json& j) {
  if (j.is_null()) return std::nullopt;
  return spectra::StandardizationParams{json_vec(j.at("means")), json_vec(j.at("stds"))};
}

json kernel_json(const KernelSpec& k) {
  return {{"kind", kernel_name(k.kind)}, {"gamma", k.gamma}, {"coef0", k.coef0}, {"degree", k.degree}};
}

KernelSpec json_kernel(const json& j) {
  KernelSpec k;
  k.kind = parse_kernel(j.at("kind").get<std::string>());
  k.gamma = j.at("gamma").get<double>();
  k.coef0 = j.at("coef0").get<double>();
  k.degree = j.at("degree").get<int>();
  return k;
}

json header(const char* type) {
  return {{"format", "spex-model"}, {"version", kModelFormatVersion}, {"type", type}};
}

}  // namespace

json model_to_json(const Regressor& model) {
  if (const auto* m = dynamic_cast<const LinearModel*>(&model)) {
    json doc = header("linear");
    doc["weights"] = vec_json(m->weights());
    doc["intercept"] = m->intercept();
    doc["alpha"] = m->alpha();
    doc["method"] = m->method();
    return doc;
  }
  if (const auto* m = dynamic_cast<const SvrModel*>(&model)) {
    json doc = header("svr");
    doc["kernel"] = kernel_json(m->kernel());
    doc["input_width"] = m->input_width();
    doc["support_vectors"] = mat_json(m->support_vectors());
    doc["dual_coefs"] = vec_json(m->dual_coefs());
    doc["bias"] = m->bias();
    doc["support_indices"] = m->support_indices();
    doc["scaling"] = scaling_json(m->scaling());
    const auto& s = m->status();
    doc["status"] = {{"iterations", s.iterations}, {"converged", s.converged},
                     {"kkt_gap", s.kkt_gap}, {"dual_objective", s.dual_objective}};
    return doc;
  }
  if (const auto* m = dynamic_cast<const MlpModel*>(&model)) {
    json doc = header("mlp");
    const auto& arch = m->architecture();
    doc["layer_sizes"] = arch.layer_sizes;
    doc["hidden_activation"] = activation_name(arch.hidden);
    doc["output_activation"] = activation_name(arch.output);
    json layers = json::array();
    for (std::size_t l = 0; l < m->n_layers(); ++l) {
      layers.push_back({{"weights", mat_json(m->weights()[l])}, {"biases", vec_json(m->biases()[l])}});
    }
    doc["layers"] = std::move(layers);
    doc["loss_history"] = m->loss_history();
    doc["scaling"] = scaling_json(m->scaling());
    return doc;
  }
  if (const auto* m = dynamic_cast<const RfModel*>(&model)) {
    json doc = header("forest");
    doc["input_width"] = m->input_width();
    json trees = json::array();
    for (const auto& t : m->trees()) {
      json f = json::array(), th = json::array(), l = json::array(), r = json::array(),
           v = json::array(), imp = json::array(), n = json::array(), dec = json::array();
      for (const auto& node : t.nodes) {
        f.push_back(node.feature);
        th.push_back(node.threshold);
        l.push_back(node.left);
        r.push_back(node.right);
        v.push_back(node.value);
        imp.push_back(node.impurity);
        n.push_back(node.n_samples);
        dec.push_back(node.weighted_decrease);
      }
      trees.push_back({{"feature", f}, {"threshold", th}, {"left", l}, {"right", r}, {"value", v},
                       {"impurity", imp}, {"n_samples", n}, {"weighted_decrease", dec}});
    }
    doc["trees"] = std::move(trees);
    return doc;
  }
  throw std::invalid_argument("model_to_json: unsupported model kind '" + model.kind() + "'");
}

std::unique_ptr<Regressor> model_from_json(const json& doc) {
  if (doc.value("format", "") != "spex-model") throw std::runtime_error("not a spex-model document");
  const int version = doc.at("version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::runtime_error("unsupported model format version " + std::to_string(version));
  }
  const auto type = doc.at("type").get<std::string>();
  if (type == "linear") {
    return std::make_unique<LinearModel>(json_vec(doc.at("weights")), doc.at("intercept").get<double>(),
                                         doc.at("alpha").get<double>(), doc.at("method").get<std::string>());
  }
  if (type == "svr") {
    const auto& s = doc.at("status");
    SvrFitStatus status{s.at("iterations").get<long>(), s.at("converged").get<bool>(),
                        s.at("kkt_gap").get<double>(), s.at("dual_objective").get<double>()};
    auto m = std::make_unique<SvrModel>(json_kernel(doc.at("kernel")), json_mat(doc.at("support_vectors")),
                                        json_vec(doc.at("dual_coefs")), doc.at("bias").get<double>(),
                                        doc.at("support_indices").get<std::vector<std::size_t>>(),
                                        json_scaling(doc.at("scaling")), status);
    m->set_input_width(doc.at("input_width").get<Eigen::Index>());
    return m;
  }
  if (type == "mlp") {
    MlpArchitecture arch;
    arch.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
    arch.hidden = parse_activation(doc.at("hidden_activation").get<std::string>());
    arch.output = parse_activation(doc.at("output_activation").get<std::string>());
    auto m = std::make_unique<MlpModel>(arch);
    const auto& layers = doc.at("layers");
    if (layers.size() != m->n_layers()) throw std::runtime_error("model file: mlp layer count");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      Eigen::MatrixXd w = json_mat(layers[l].at("weights"));
      Eigen::VectorXd b = json_vec(layers[l].at("biases"));
      if (w.rows() != m->weights()[l].rows() || w.cols() != m->weights()[l].cols() ||
          b.size() != m->biases()[l].size()) {
        throw std::runtime_error("model file: mlp layer shape");
      }
      m->weights()[l] = std::move(w);
      m->biases()[l] = std::move(b);
    }
    m->loss_history() = doc.at("loss_history").get<std::vector<double>>();
    m->scaling() = json_scaling(doc.at("scaling"));
    return m;
  }
  if (type == "forest") {
    std::vector<RegressionTree> trees;
    for (const auto& t : doc.at("trees")) {
      const auto f = t.at("feature").get<std::vector<int>>();
      const auto th = t.at("threshold").get<std::vector<double>>();
      const auto l = t.at("left").get<std::vector<int>>();
      const auto r = t.at("right").get<std::vector<int>>();
      const auto v = t.at("value").get<std::vector<double>>();
      const auto imp = t.at("impurity").get<std::vector<double>>();
      const auto n = t.at("n_samples").get<std::vector<std::size_t>>();
      const auto dec = t.at("weighted_decrease").get<std::vector<double>>();
      RegressionTree tree;
      tree.nodes.resize(f.size());
      for (std::size_t k = 0; k < f.size(); ++k) {
        tree.nodes[k] = TreeNode{f[k], th[k], l[k], r[k], v[k], imp[k], n[k], dec[k]};
      }
      trees.push_back(std::move(tree));
    }
    return std::make_unique<RfModel>(std::move(trees), doc.at("input_width").get<Eigen::Index>());
  }
  throw std::runtime_error("unknown model type '" + type + "'");
}

void save_model(const Regressor& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out << model_to_json(model).dump() << '\n';
  if (!out) throw std::runtime_error("failed writing model file '" + path + "'");
}

std::unique_ptr<Regressor> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  try {
    return model_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error("model file '" + path + "': " + e.what());
  }
}

}  // namespace spex::models
