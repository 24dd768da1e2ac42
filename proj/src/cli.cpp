#include "featnet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include "featnet/common.hpp"
#include "featnet/estimators.hpp"
#include "featnet/eval.hpp"
#include "featnet/io.hpp"
#include "featnet/synthgen.hpp"

namespace featnet {

namespace {

struct DatasetArgs {
  std::string edges;
  std::string features;
  std::string nodes;
  std::string feature_dict;

  void attach(CLI::App* cmd) {
    cmd->add_option("--edges", edges, "arc list, src<TAB>dst")->required();
    cmd->add_option("--features", features, "node-feature incidences, node<TAB>feature")->required();
    cmd->add_option("--nodes", nodes, "node dictionary (fixes dense order)");
    cmd->add_option("--feature-dict", feature_dict, "feature dictionary (fixes dense order)");
  }

  DatasetPaths paths() const {
    DatasetPaths p{edges, features, std::nullopt, std::nullopt};
    if (!nodes.empty()) p.nodes = nodes;
    if (!feature_dict.empty()) p.feature_dict = feature_dict;
    return p;
  }
};

// Estimator and evaluation knobs shared by fit / evaluate / explain.
struct RunConfig {
  std::string estimator = "llama";
  std::string smoothing = "floor";
  double floor = -50.0;
  double kappa = 1.5;
  double lambda = 1.0;
  std::string normalization = "none";
  std::string ordering = "random";
  bool symmetric = false;
  std::uint64_t seed = 0;
  std::size_t folds = 10;
  std::string negatives = "test-induced";

  void attach_estimator(CLI::App* cmd, bool choose_estimator) {
    if (choose_estimator) {
      cmd->add_option("--estimator", estimator, "naive | llama | perceptron")
          ->check(CLI::IsMember({"naive", "llama", "perceptron"}))
          ->capture_default_str();
      cmd->add_option("--smoothing", smoothing, "naive zero-count rule: floor | add-one")
          ->check(CLI::IsMember({"floor", "add-one"}))
          ->capture_default_str();
      cmd->add_option("--floor", floor, "floor value for --smoothing floor")->capture_default_str();
      cmd->add_option("--lambda", lambda, "perceptron learning rate in (0, 1]")->capture_default_str();
    }
    cmd->add_option("--kappa", kappa, "passive-aggressive aggressiveness")->capture_default_str();
    cmd->add_option("--normalization", normalization, "none | row-l2")
        ->check(CLI::IsMember({"none", "row-l2"}))
        ->capture_default_str();
    cmd->add_option("--ordering", ordering, "node enumeration: random | natural")
        ->check(CLI::IsMember({"random", "natural"}))
        ->capture_default_str();
    cmd->add_flag("--symmetric", symmetric, "mirror every update (undirected graphs)");
    cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  }

  void attach_evaluation(CLI::App* cmd) {
    cmd->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
    cmd->add_option("--negatives", negatives, "negative pair domain: test-induced | global")
        ->check(CLI::IsMember({"test-induced", "global"}))
        ->capture_default_str();
  }

  NodeOrdering node_ordering() const {
    return ordering == "natural" ? NodeOrdering::given() : NodeOrdering::random();
  }

  LlamaConfig llama() const {
    LlamaConfig c;
    c.kappa = kappa;
    c.normalization = normalization == "row-l2" ? Normalization::RowL2 : Normalization::None;
    c.ordering = node_ordering();
    c.seed = seed;
    c.symmetric = symmetric;
    return c;
  }

  EstimatorConfig estimator_config() const {
    if (estimator == "naive") {
      NaiveConfig c;
      if (smoothing == "add-one") {
        c.smoothing = AddOneSmoothing{};
      } else {
        c.smoothing = FloorSmoothing{floor};
      }
      return c;
    }
    if (estimator == "perceptron") return PerceptronConfig{lambda, node_ordering(), seed};
    return llama();
  }

  NegativeDomain negative_domain() const {
    return negatives == "global" ? NegativeDomain::Global : NegativeDomain::TestInduced;
  }
};

struct GenerateArgs {
  std::string family = "sigmoid-bernoulli";
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::string out = "graph";
  IbpParams ibp;
};

Dataset load_with_warnings(const DatasetArgs& args, std::ostream& err) {
  Dataset ds = load_dataset(args.paths());
  if (ds.duplicate_arcs > 0) err << "warning: " << ds.duplicate_arcs << " duplicate arc(s) ignored\n";
  if (ds.duplicate_incidences > 0) {
    err << "warning: " << ds.duplicate_incidences << " duplicate feature incidence(s) ignored\n";
  }
  return ds;
}

int run_generate(const GenerateArgs& args, std::ostream& out) {
  GraphFamilySpec spec = family_preset(args.family, args.n, args.seed);
  spec.ibp = args.ibp;
  if (args.count == 0) throw std::domain_error("--count must be at least 1");
  for (std::size_t r = 0; r < args.count; ++r) {
    const GeneratedGraph gen = generate_replicate(spec, r);
    const std::string prefix = args.count == 1 ? args.out : args.out + "-" + std::to_string(r);
    write_dataset(gen.graph, gen.z, prefix);
    save_matrix(gen.w, prefix + ".w.tsv");
    out << prefix << "\tnodes=" << gen.graph.num_nodes() << "\tfeatures=" << gen.z.num_features()
        << "\tarcs=" << gen.graph.num_arcs() << '\n';
  }
  return kExitOk;
}

int run_fit(const DatasetArgs& data, const RunConfig& cfg, const std::string& out_path,
            const std::string& diag_path, std::ostream& out, std::ostream& err) {
  const Dataset ds = load_with_warnings(data, err);
  const auto start = std::chrono::steady_clock::now();
  nlohmann::ordered_json diag;
  diag["estimator"] = cfg.estimator;
  InteractionMatrix w;
  std::optional<FitDiagnostics> fit_diag;
  if (cfg.estimator == "naive") {
    w = fit_estimator(ds.graph, ds.features, cfg.estimator_config(), cfg.seed);
  } else if (cfg.estimator == "perceptron") {
    FitResult fit = perceptron_fit(ds.graph, ds.features, {cfg.lambda, cfg.node_ordering(), cfg.seed});
    w = std::move(fit.w);
    fit_diag = fit.diagnostics;
  } else {
    FitResult fit = llama_fit(ds.graph, ds.features, cfg.llama());
    w = std::move(fit.w);
    fit_diag = fit.diagnostics;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  save_matrix(w, out_path);
  write_id_map(ds.node_ids, out_path + ".nodes.tsv");
  write_id_map(ds.feature_ids, out_path + ".feature-ids.tsv");

  diag["nodes"] = ds.graph.num_nodes();
  diag["arcs"] = ds.graph.num_arcs();
  diag["features"] = ds.features.num_features();
  if (fit_diag) {
    diag["mistakes"] = fit_diag->mistakes;
    diag["radius_sq"] = fit_diag->radius_sq;
    diag["examples_seen"] = fit_diag->examples_seen;
    diag["skipped"] = fit_diag->skipped;
  }
  diag["wall_time_s"] = seconds;
  const std::string text = diag.dump(2) + "\n";
  if (diag_path.empty()) {
    out << text;
  } else {
    std::ofstream f(diag_path, std::ios::binary);
    f << text;
    if (!f) throw DataError("cannot write " + diag_path);
  }
  return kExitOk;
}

EvalReport run_cross_validation(const DatasetArgs& data, const RunConfig& cfg,
                                const EstimatorConfig& est, const std::string& report_path,
                                const std::string& curves_dir, std::ostream& out,
                                std::ostream& err) {
  const Dataset ds = load_with_warnings(data, err);
  EvalReport report = cross_validate(ds.graph, ds.features, est, cfg.folds, cfg.seed,
                                     cfg.negative_domain());
  if (!report_path.empty()) write_report_csv(report, report_path);
  if (!curves_dir.empty()) {
    std::filesystem::create_directories(curves_dir);
    for (std::size_t i = 0; i < report.folds.size(); ++i) {
      write_curve_csv(report.curves[i], std::filesystem::path(curves_dir) /
                                            ("fold-" + std::to_string(report.folds[i]) + ".csv"));
    }
  }
  for (std::size_t f : report.skipped_folds) {
    err << "warning: fold " << f << " skipped (no usable test pairs)\n";
  }
  if (report_path.empty()) {
    out << "fold,aupr\n";
    for (std::size_t i = 0; i < report.folds.size(); ++i) {
      out << report.folds[i] << ',' << format_double(report.per_fold_aupr[i]) << '\n';
    }
    out << "mean,std\n" << format_double(report.mean) << ',' << format_double(report.std) << '\n';
  }
  return report;
}

int run_curve(const std::string& scores, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const auto pairs = load_scored_pairs(scores);
  const PrCurve curve = pr_curve(pairs);
  const double area = aupr(curve);
  if (out_path.empty()) {
    out << "recall,precision\n";
    for (const auto& p : curve.points) {
      out << format_double(p.recall) << ',' << format_double(p.precision) << '\n';
    }
    err << "aupr\t" << format_double(area) << '\n';
  } else {
    write_curve_csv(curve, out_path);
    out << "aupr\t" << format_double(area) << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"featnet: latent feature-feature matrices of feature-rich graphs"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample a synthetic feature-rich graph family");
  generate->add_option("--family", gen.family,
                       "<sigmoid|step|exp>-<bernoulli|normal> (aliases s, chi, b, n)")
      ->capture_default_str();
  generate->add_option("--n", gen.n, "node count")->capture_default_str();
  generate->add_option("--seed", gen.seed, "master seed")->capture_default_str();
  generate->add_option("--count", gen.count, "number of independent graphs")->capture_default_str();
  generate->add_option("--out", gen.out, "output prefix")->capture_default_str();
  generate->add_option("--alpha", gen.ibp.alpha, "IBP mass")->capture_default_str();
  generate->add_option("--beta", gen.ibp.beta, "IBP stability")->capture_default_str();
  generate->add_option("--c", gen.ibp.c, "IBP concentration")->capture_default_str();

  DatasetArgs fit_data;
  RunConfig fit_cfg;
  std::string fit_out;
  std::string fit_diag;
  auto* fit = app.add_subcommand("fit", "estimate W from a dataset");
  fit_data.attach(fit);
  fit_cfg.attach_estimator(fit, true);
  fit->add_option("--out", fit_out, "matrix output path")->required();
  fit->add_option("--diagnostics", fit_diag, "diagnostics JSON path (default: stdout)");

  DatasetArgs eval_data;
  RunConfig eval_cfg;
  std::string eval_report;
  std::string eval_curves;
  auto* evaluate = app.add_subcommand("evaluate", "cross-validated precision-recall evaluation");
  eval_data.attach(evaluate);
  eval_cfg.attach_estimator(evaluate, true);
  eval_cfg.attach_evaluation(evaluate);
  evaluate->add_option("--report", eval_report, "report CSV path (default: stdout)");
  evaluate->add_option("--curves-dir", eval_curves, "directory for per-fold curve CSVs");

  DatasetArgs expl_data;
  RunConfig expl_cfg;
  std::string expl_report;
  std::string expl_curves;
  auto* explain = app.add_subcommand("explain", "explainability of a feature set (llama AUPR)");
  expl_data.attach(explain);
  expl_cfg.attach_estimator(explain, false);
  expl_cfg.attach_evaluation(explain);
  explain->add_option("--report", expl_report, "report CSV path");
  explain->add_option("--curves-dir", expl_curves, "directory for per-fold curve CSVs");

  std::string curve_scores;
  std::string curve_out;
  auto* curve = app.add_subcommand("curve", "precision-recall curve of a scored-pairs file");
  curve->add_option("--scores", curve_scores, "src<TAB>dst<TAB>score<TAB>label")->required();
  curve->add_option("--out", curve_out, "curve CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen, out);
    if (fit->parsed()) return run_fit(fit_data, fit_cfg, fit_out, fit_diag, out, err);
    if (evaluate->parsed()) {
      const EvalReport report = run_cross_validation(eval_data, eval_cfg, eval_cfg.estimator_config(),
                                                     eval_report, eval_curves, out, err);
      err << eval_cfg.estimator << " aupr " << format_double(report.mean) << " ± "
          << format_double(report.std) << " (negatives=" << to_string(report.negative_domain)
          << ")\n";
      return kExitOk;
    }
    if (explain->parsed()) {
      std::ostringstream sink;
      const EvalReport report =
          run_cross_validation(expl_data, expl_cfg, expl_cfg.llama(), expl_report.empty() ? "" : expl_report,
                               expl_curves, expl_report.empty() ? sink : out, err);
      out << "explainability " << format_double(report.mean) << " ± " << format_double(report.std)
          << " (folds=" << report.folds.size() << "/" << expl_cfg.folds
          << ", negatives=" << to_string(report.negative_domain) << ")\n";
      return kExitOk;
    }
    if (curve->parsed()) return run_curve(curve_scores, curve_out, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace featnet
