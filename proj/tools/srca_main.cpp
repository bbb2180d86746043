// Command line front end for the sphere-fitting dimension reduction toolkit:
// generate synthetic datasets, fit models, transform data, evaluate
// reductions, and run benchmark grids.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srca/baselines.hpp"
#include "srca/data.hpp"
#include "srca/metrics.hpp"
#include "srca/model_io.hpp"
#include "srca/solver.hpp"
#include "srca/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

/// Distinguishes bad input files/shapes (exit 2) from numerical failures
/// (exit 3).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

srca::DataMatrix load_input(const std::string& path, bool has_header,
                            std::optional<int> label_column) {
  try {
    return srca::load_csv(path, has_header, label_column);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
}

std::vector<int> load_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file: " + path);
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      labels.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw DataError("label file " + path + ": bad line '" + line + "'");
    }
  }
  if (labels.empty()) throw DataError("label file is empty: " + path);
  return labels;
}

void write_svg_scatter(const std::string& path, const Eigen::MatrixXd& orig,
                       const Eigen::MatrixXd& reduced) {
  const double lo_x = std::min(orig.col(0).minCoeff(), reduced.col(0).minCoeff());
  const double hi_x = std::max(orig.col(0).maxCoeff(), reduced.col(0).maxCoeff());
  const double lo_y = std::min(orig.col(1).minCoeff(), reduced.col(1).minCoeff());
  const double hi_y = std::max(orig.col(1).maxCoeff(), reduced.col(1).maxCoeff());
  const double span_x = hi_x > lo_x ? hi_x - lo_x : 1.0;
  const double span_y = hi_y > lo_y ? hi_y - lo_y : 1.0;
  const double W = 640.0, H = 640.0, pad = 40.0;
  auto sx = [&](double v) { return pad + (v - lo_x) / span_x * (W - 2 * pad); };
  auto sy = [&](double v) { return H - pad - (v - lo_y) / span_y * (H - 2 * pad); };

  std::ofstream out(path);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "  <g id=\"original\" fill=\"#3465a4\" fill-opacity=\"0.6\">\n";
  for (Eigen::Index i = 0; i < orig.rows(); ++i) {
    out << "    <circle cx=\"" << sx(orig(i, 0)) << "\" cy=\"" << sy(orig(i, 1))
        << "\" r=\"3\"/>\n";
  }
  out << "  </g>\n  <g id=\"reduced\" fill=\"#cc0000\" fill-opacity=\"0.6\">\n";
  for (Eigen::Index i = 0; i < reduced.rows(); ++i) {
    out << "    <circle cx=\"" << sx(reduced(i, 0)) << "\" cy=\""
        << sy(reduced(i, 1)) << "\" r=\"3\"/>\n";
  }
  out << "  </g>\n</svg>\n";
}

struct FitFlags {
  std::string data;
  std::string out = "model.json";
  int dprime = 2;
  std::string rotation = "pca";
  std::string strategy = "auto";
  double lambda = 0.0;
  std::string weight;  // optional CSV path with a d x d matrix
  double tol = 1e-8;
  int restarts = 1;
  std::uint64_t seed = 0;
  std::optional<int> label_column;
  bool header = false;
};

srca::FitConfig make_config(const FitFlags& f, int d) {
  srca::FitConfig cfg;
  cfg.retained_dim = f.dprime;
  cfg.rotation.kind = srca::rotation_kind_from_string(f.rotation);
  cfg.strategy = srca::search_strategy_from_string(f.strategy);
  cfg.penalty_lambda = f.lambda;
  cfg.tol = f.tol;
  cfg.restarts = f.restarts;
  cfg.seed = f.seed;
  if (!f.weight.empty() && f.weight != "identity") {
    srca::DataMatrix Wm = load_input(f.weight, false, std::nullopt);
    if (Wm.rows() != d || Wm.cols() != d) {
      throw DataError("weight matrix must be " + std::to_string(d) + "x" +
                      std::to_string(d));
    }
    cfg.weight = Wm.values;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// benchmark plan

struct PlanDataset {
  std::string name;
  std::optional<srca::GeneratorSpec> generator;
  std::string csv;
  std::optional<int> label_column;
  bool header = false;
};

struct BenchmarkPlan {
  std::vector<PlanDataset> datasets;
  std::vector<std::string> methods;
  std::vector<int> d_prime_list;
  std::vector<std::string> rotations;
  std::string output_dir = ".";
};

BenchmarkPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open plan file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw DataError(std::string("plan parse failure: ") + e.what());
  }
  BenchmarkPlan plan;
  for (const auto& jd : doc.at("datasets")) {
    PlanDataset ds;
    ds.name = jd.at("name").get<std::string>();
    if (jd.contains("generator")) {
      const auto& jg = jd.at("generator");
      srca::GeneratorSpec spec;
      spec.kind = srca::generator_kind_from_string(jg.at("kind").get<std::string>());
      spec.n = jg.value("n", 500);
      spec.seed = jg.value("seed", std::uint64_t{0});
      spec.noise_var = jg.value("noise_var", 0.0);
      spec.R1 = jg.value("R1", 0.5);
      spec.R2 = jg.value("R2", 1.0 / 3.0);
      ds.generator = spec;
    } else {
      ds.csv = jd.at("csv").get<std::string>();
      if (jd.contains("label_column")) {
        ds.label_column = jd.at("label_column").get<int>();
      }
      ds.header = jd.value("header", false);
    }
    plan.datasets.push_back(std::move(ds));
  }
  plan.methods = doc.at("methods").get<std::vector<std::string>>();
  plan.d_prime_list = doc.at("d_prime").get<std::vector<int>>();
  plan.rotations = doc.value("rotation", std::vector<std::string>{"pca"});
  plan.output_dir = doc.value("output_dir", std::string("."));
  if (plan.datasets.empty() || plan.methods.empty() ||
      plan.d_prime_list.empty() || plan.rotations.empty()) {
    throw DataError("plan must list at least one dataset, method, d' and rotation");
  }
  for (const auto& m : plan.methods) {
    if (m != "pca" && m != "spca" && m != "srca") {
      throw DataError("unknown method in plan: " + m);
    }
  }
  return plan;
}

struct Cell {
  std::size_t dataset = 0;
  std::size_t rotation = 0;
  std::size_t method = 0;
  std::size_t dprime = 0;
};

struct CellResult {
  bool ok = false;
  double mse = 0.0;
  double oos_mse = 0.0;
  std::string error;
};

int run_benchmark(const std::string& plan_path, bool holdout, int jobs) {
  BenchmarkPlan plan = load_plan(plan_path);

  // Materialize datasets up front (cells share them read-only).
  std::vector<srca::DataMatrix> train(plan.datasets.size());
  std::vector<srca::DataMatrix> test(plan.datasets.size());
  for (std::size_t i = 0; i < plan.datasets.size(); ++i) {
    const auto& ds = plan.datasets[i];
    srca::DataMatrix X = ds.generator
                             ? srca::generate(*ds.generator)
                             : load_input(ds.csv, ds.header, ds.label_column);
    if (holdout) {
      std::tie(train[i], test[i]) = srca::split_train_test(X, 0.2, 42);
    } else {
      train[i] = std::move(X);
    }
  }

  std::vector<Cell> cells;
  for (std::size_t di = 0; di < plan.datasets.size(); ++di) {
    for (std::size_t ri = 0; ri < plan.rotations.size(); ++ri) {
      for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
        for (std::size_t pi = 0; pi < plan.d_prime_list.size(); ++pi) {
          cells.push_back({di, ri, mi, pi});
        }
      }
    }
  }
  std::vector<CellResult> results(cells.size());

  auto run_cell = [&](const Cell& c) {
    CellResult res;
    try {
      const auto& X = train[c.dataset];
      const auto& Xt = test[c.dataset];
      const std::string& method = plan.methods[c.method];
      const int dp = plan.d_prime_list[c.dprime];
      if (method == "pca") {
        auto [model, reduced] = srca::pca_fit_reduce(X, dp);
        res.mse = srca::mse(X, reduced);
        if (holdout) res.oos_mse = srca::mse(Xt, srca::pca_transform(model, Xt));
      } else if (method == "spca") {
        srca::SpcaModel model = srca::spca_fit(X, dp);
        res.mse = srca::mse(X, srca::spca_transform(model, X));
        if (holdout) res.oos_mse = srca::mse(Xt, srca::spca_transform(model, Xt));
      } else {
        srca::FitConfig cfg;
        cfg.retained_dim = dp;
        cfg.rotation.kind =
            srca::rotation_kind_from_string(plan.rotations[c.rotation]);
        cfg.restarts = 3;
        srca::SphereModel model = srca::fit(X, cfg);
        res.mse = srca::mse(X, srca::transform(model, X));
        if (holdout) res.oos_mse = srca::mse(Xt, srca::transform(model, Xt));
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
    return res;
  };

  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      results[k] = run_cell(cells[k]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // One CSV table per dataset x rotation, rows = methods, columns = d'.
  for (std::size_t di = 0; di < plan.datasets.size(); ++di) {
    for (std::size_t ri = 0; ri < plan.rotations.size(); ++ri) {
      std::string name = plan.output_dir + "/" + plan.datasets[di].name;
      if (plan.rotations.size() > 1) name += "_" + plan.rotations[ri];
      name += "_mse.csv";
      std::ofstream out(name);
      if (!out) throw DataError("cannot open file for writing: " + name);
      out << "method";
      for (int dp : plan.d_prime_list) {
        out << ",dprime=" << dp;
        if (holdout) out << ",dprime=" << dp << "_oos";
      }
      out << '\n';
      for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
        out << plan.methods[mi];
        for (std::size_t pi = 0; pi < plan.d_prime_list.size(); ++pi) {
          // Locate the cell in plan order.
          std::size_t idx = 0;
          for (std::size_t k = 0; k < cells.size(); ++k) {
            const Cell& c = cells[k];
            if (c.dataset == di && c.rotation == ri && c.method == mi &&
                c.dprime == pi) {
              idx = k;
              break;
            }
          }
          const CellResult& r = results[idx];
          char buf[64];
          if (r.ok) {
            std::snprintf(buf, sizeof(buf), "%.17g", r.mse);
            out << ',' << buf;
            if (holdout) {
              std::snprintf(buf, sizeof(buf), "%.17g", r.oos_mse);
              out << ',' << buf;
            }
          } else {
            out << ",error";
            if (holdout) out << ",error";
          }
        }
        out << '\n';
      }
      std::cout << "wrote " << name << '\n';
    }
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!results[k].ok) {
      std::cerr << "cell " << plan.datasets[cells[k].dataset].name << "/"
                << plan.methods[cells[k].method] << "/d'="
                << plan.d_prime_list[cells[k].dprime]
                << " failed: " << results[k].error << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphere-fitting dimension reduction toolkit"};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset CSV");
  std::string g_kind = "sphere", g_out = "data.csv";
  int g_n = 500;
  std::uint64_t g_seed = 0;
  double g_noise = 0.0, g_r1 = 0.5, g_r2 = 1.0 / 3.0;
  bool g_labels = false;
  gen->add_option("--kind", g_kind,
                  "plane|torus|sphere|gem|orthogonal_loops");
  gen->add_option("--n", g_n, "sample count")->check(CLI::PositiveNumber);
  gen->add_option("--seed", g_seed, "RNG seed");
  gen->add_option("--noise", g_noise, "per-coordinate Gaussian noise variance");
  gen->add_option("--out", g_out, "output CSV path");
  gen->add_option("--r1", g_r1, "torus major radius");
  gen->add_option("--r2", g_r2, "torus minor radius");
  gen->add_flag("--with-labels", g_labels,
                "append the batch/loop id as a last column");

  // fit ---------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Fit a sphere model to a CSV");
  FitFlags ff;
  int f_label_col = -1;
  fit_cmd->add_option("--data", ff.data, "input CSV")->required();
  fit_cmd->add_option("--out", ff.out, "output model JSON path");
  fit_cmd->add_option("--dprime", ff.dprime, "retained dimension d'")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--rotation", ff.rotation,
                      "identity|pca|varimax|quartimax|equamax|parsimax");
  fit_cmd->add_option("--strategy", ff.strategy, "exhaustive|l1_relaxed|auto");
  fit_cmd->add_option("--lambda", ff.lambda, "l1 center-deviation penalty");
  fit_cmd->add_option("--weight", ff.weight,
                      "CSV path of a d x d weight matrix, or 'identity'");
  fit_cmd->add_option("--tol", ff.tol, "convergence tolerance");
  fit_cmd->add_option("--restarts", ff.restarts, "random center restarts");
  fit_cmd->add_option("--seed", ff.seed, "RNG seed for restarts");
  fit_cmd->add_option("--label-column", f_label_col,
                      "0-based label column to exclude from features");
  fit_cmd->add_flag("--header", ff.header, "input CSV has a header row");

  // transform ----------------------------------------------------------------
  auto* tr = app.add_subcommand("transform", "Project a CSV through a model");
  std::string t_model, t_data, t_out = "reduced.csv", t_svg;
  int t_label_col = -1;
  bool t_header = false;
  tr->add_option("--model", t_model, "model JSON")->required();
  tr->add_option("--data", t_data, "input CSV")->required();
  tr->add_option("--out", t_out, "output CSV path");
  tr->add_option("--svg", t_svg, "write an original-vs-reduced scatter SVG");
  tr->add_option("--label-column", t_label_col, "0-based label column");
  tr->add_flag("--header", t_header, "input CSV has a header row");

  // evaluate -------------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "Score a reduction");
  std::string e_data, e_reduced, e_labels, e_out, e_csv;
  int e_label_col = -1;
  bool e_header = false;
  ev->add_option("--data", e_data, "original CSV")->required();
  ev->add_option("--reduced", e_reduced, "reduced CSV")->required();
  ev->add_option("--labels", e_labels, "label file, one integer per row");
  ev->add_option("--label-column", e_label_col,
                 "0-based label column inside --data");
  ev->add_option("--out", e_out, "report JSON path (default: stdout)");
  ev->add_option("--csv", e_csv, "also write the one-row CSV report here");
  ev->add_flag("--header", e_header, "input CSVs have a header row");

  // benchmark ------------------------------------------------------------
  auto* bm = app.add_subcommand("benchmark", "Run a benchmark plan");
  std::string b_plan;
  bool b_holdout = false;
  int b_jobs = 1;
  bm->add_option("--plan", b_plan, "plan JSON path")->required();
  bm->add_flag("--holdout", b_holdout, "also report 80/20 out-of-sample MSE");
  bm->add_option("--jobs", b_jobs, "worker threads (SRCA_JOBS overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      srca::GeneratorSpec spec;
      try {
        spec.kind = srca::generator_kind_from_string(g_kind);
      } catch (const std::exception& e) {
        std::cerr << e.what() << "\nusage: srca generate --kind "
                     "plane|torus|sphere|gem|orthogonal_loops\n";
        return kExitUsage;
      }
      spec.n = g_n;
      spec.seed = g_seed;
      spec.noise_var = g_noise;
      spec.R1 = g_r1;
      spec.R2 = g_r2;
      srca::DataMatrix X = srca::generate(spec);
      srca::write_csv(X, g_out, g_labels);
      std::cout << "wrote " << g_out << " (" << X.rows() << "x" << X.cols()
                << (g_labels && X.labels ? ", labeled" : "") << ")\n";
      return kExitOk;
    }

    if (*fit_cmd) {
      if (f_label_col >= 0) ff.label_column = f_label_col;
      srca::DataMatrix X = load_input(ff.data, ff.header, ff.label_column);
      srca::FitConfig cfg = make_config(ff, static_cast<int>(X.cols()));
      if (cfg.strategy == srca::SearchStrategy::auto_select) {
        const auto chosen = srca::select_strategy(
            static_cast<int>(X.cols()), cfg.retained_dim);
        std::cout << "strategy auto -> " << srca::to_string(chosen) << '\n';
      }
      srca::SphereModel model = srca::fit(X, cfg);
      srca::save_model(model, ff.out);
      std::cout << "final loss: " << model.final_loss << "\nindex set:";
      for (int j : model.index_set.members()) std::cout << ' ' << (j + 1);
      std::cout << "\nwrote " << ff.out << '\n';
      return kExitOk;
    }

    if (*tr) {
      std::optional<int> lc;
      if (t_label_col >= 0) lc = t_label_col;
      srca::SphereModel model;
      try {
        model = srca::load_model(t_model);
      } catch (const std::exception& e) {
        throw DataError(e.what());
      }
      srca::DataMatrix X = load_input(t_data, t_header, lc);
      if (X.cols() != model.mean.size()) {
        throw DataError("model dimension " + std::to_string(model.mean.size()) +
                        " does not match data dimension " +
                        std::to_string(X.cols()));
      }
      srca::DataMatrix R = srca::transform(model, X);
      srca::write_csv(R, t_out, false);
      std::cout << "wrote " << t_out << '\n';
      if (!t_svg.empty()) {
        // Scatter in the first two retained coordinates of the rotated,
        // centered frame.
        auto to_rot = [&](const srca::DataMatrix& M) {
          Eigen::MatrixXd C = M.values.rowwise() - model.mean.transpose();
          Eigen::MatrixXd rot = C * model.rotation.values;
          Eigen::MatrixXd out(rot.rows(), 2);
          out.col(0) = rot.col(model.index_set.members()[0]);
          out.col(1) = rot.col(model.index_set.members()[1]);
          return out;
        };
        write_svg_scatter(t_svg, to_rot(X), to_rot(R));
        std::cout << "wrote " << t_svg << '\n';
      }
      return kExitOk;
    }

    if (*ev) {
      std::optional<int> lc;
      if (e_label_col >= 0) lc = e_label_col;
      srca::DataMatrix X = load_input(e_data, e_header, lc);
      srca::DataMatrix R = load_input(e_reduced, e_header, std::nullopt);
      if (X.rows() != R.rows() || X.cols() != R.cols()) {
        throw DataError("original and reduced shapes differ");
      }
      std::vector<int> labels;
      const std::vector<int>* labels_ptr = nullptr;
      if (!e_labels.empty()) {
        labels = load_label_file(e_labels);
        if (static_cast<Eigen::Index>(labels.size()) != X.rows()) {
          throw DataError("label count does not match row count");
        }
        labels_ptr = &labels;
      } else if (X.labels) {
        labels = *X.labels;
        labels_ptr = &labels;
      } else {
        std::cerr << "no labels given; sc/chi/dbi reported as null\n";
      }
      srca::EvaluationReport rep = srca::evaluate(X, R, labels_ptr);
      const std::string json = srca::report_to_json(rep);
      if (e_out.empty()) {
        std::cout << json << '\n';
      } else {
        std::ofstream out(e_out);
        if (!out) throw DataError("cannot open file for writing: " + e_out);
        out << json << '\n';
        std::cout << "wrote " << e_out << '\n';
      }
      if (!e_csv.empty()) {
        std::ofstream out(e_csv);
        if (!out) throw DataError("cannot open file for writing: " + e_csv);
        out << srca::report_to_csv(rep);
      }
      return kExitOk;
    }

    if (*bm) {
      int jobs = b_jobs;
      if (const char* env = std::getenv("SRCA_JOBS")) {
        jobs = std::atoi(env);
        if (jobs < 1) jobs = 1;
      }
      return run_benchmark(b_plan, b_holdout, jobs);
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
