#include "srca/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace srca {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) arr.push_back(M(i, j));
  }
  return arr;
}

Eigen::MatrixXd matrix_from_json(const json& arr, Eigen::Index rows,
                                 Eigen::Index cols) {
  if (static_cast<Eigen::Index>(arr.size()) != rows * cols) {
    throw std::runtime_error("model JSON: matrix size mismatch");
  }
  Eigen::MatrixXd M(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = arr[k++].get<double>();
  }
  return M;
}

}  // namespace

std::string model_to_json(const SphereModel& model) {
  json doc;
  doc["kind"] = "sphere";
  doc["mean"] = vector_to_json(model.mean);
  doc["rotation"] = matrix_to_json(model.rotation.values);
  json idx = json::array();
  for (int j : model.index_set.members()) idx.push_back(j + 1);  // 1-based
  doc["index_set"] = idx;
  doc["center"] = vector_to_json(model.params.center);
  doc["radius"] = model.params.radius;
  if (model.weight_is_identity) {
    doc["weight"] = "identity";
  } else {
    doc["weight"] = matrix_to_json(model.weight);
  }
  doc["final_loss"] = model.final_loss;
  doc["converged"] = model.converged;
  doc["config"] = model.config_digest;
  return doc.dump(2);
}

SphereModel model_from_json(const std::string& text) {
  json doc = json::parse(text);
  if (doc.value("kind", "") != "sphere") {
    throw std::runtime_error("model JSON: unexpected kind");
  }
  SphereModel model;
  model.mean = vector_from_json(doc.at("mean"));
  const Eigen::Index d = model.mean.size();
  model.rotation.values = matrix_from_json(doc.at("rotation"), d, d);
  std::vector<int> members;
  for (const auto& j : doc.at("index_set")) {
    members.push_back(j.get<int>() - 1);
  }
  model.index_set = IndexSet(members, static_cast<int>(d));
  model.params.center = vector_from_json(doc.at("center"));
  model.params.radius = doc.at("radius").get<double>();
  if (doc.at("weight").is_string()) {
    if (doc.at("weight").get<std::string>() != "identity") {
      throw std::runtime_error("model JSON: unknown weight tag");
    }
    model.weight_is_identity = true;
  } else {
    model.weight_is_identity = false;
    model.weight = matrix_from_json(doc.at("weight"), d, d);
  }
  model.final_loss = doc.at("final_loss").get<double>();
  model.converged = doc.at("converged").get<bool>();
  model.config_digest = doc.value("config", "");
  return model;
}

void save_model(const SphereModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw std::runtime_error("write failure: " + path);
}

SphereModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string report_to_json(const EvaluationReport& report) {
  json doc;
  doc["mse"] = report.mse;
  doc["oos_mse"] = report.oos_mse ? json(*report.oos_mse) : json(nullptr);
  doc["sc"] = report.sc ? json(*report.sc) : json(nullptr);
  doc["chi"] = report.chi ? json(*report.chi) : json(nullptr);
  doc["dbi"] = report.dbi ? json(*report.dbi) : json(nullptr);
  doc["cc"] = report.cc;
  doc["auc"] = report.auc;
  doc["wauc"] = report.wauc;
  // Conventions recorded so the numbers are reproducible elsewhere.
  doc["auc_convention"] = "unweighted mean of R_NX over K";
  doc["wauc_convention"] = "1/K-weighted mean of R_NX";
  return doc.dump(2);
}

std::string report_to_csv(const EvaluationReport& report) {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  auto opt = [&](const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
  };
  std::string out = "mse,oos_mse,sc,chi,dbi,cc,auc,wauc\n";
  out += fmt(report.mse) + ',' + opt(report.oos_mse) + ',' + opt(report.sc) +
         ',' + opt(report.chi) + ',' + opt(report.dbi) + ',' + fmt(report.cc) +
         ',' + fmt(report.auc) + ',' + fmt(report.wauc) + '\n';
  return out;
}

}  // namespace srca
