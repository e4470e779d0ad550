#include "threshgate/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "threshgate/embedding_store.hpp"
#include "threshgate/error.hpp"
#include "threshgate/evaluation.hpp"
#include "threshgate/histogram.hpp"
#include "threshgate/report.hpp"
#include "threshgate/similarity.hpp"
#include "threshgate/threshold.hpp"

namespace threshgate::cli {
namespace {

struct DistancesArgs {
  std::string embeddings;
  std::string query;
  std::string out;
};

struct ThresholdArgs {
  std::string distances;
  std::size_t bins = kDefaultBins;
  double delta_factor = kDefaultDeltaFactor;
  double k_std = kDefaultKStd;
  std::string report;
  std::string out;
};

struct EvaluateArgs {
  std::string distances;
  std::string labels;
  std::string positive;
  std::optional<double> threshold;
  bool automatic = false;
  std::size_t bins = kDefaultBins;
  double delta_factor = kDefaultDeltaFactor;
  double k_std = kDefaultKStd;
  std::string report;
};

struct ExportArgs {
  std::string distances;
  std::string histogram;
  std::string fits;
  std::string roc;
  std::string labels;
  std::string positive;
  std::size_t bins = kDefaultBins;
  bool stats = false;
};

std::string fmt9(double v) { return format_distance(v); }

DistanceTable load_distances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_distance_table(in);
}

LabelTable load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_labels(in);
}

ThresholdOptions threshold_options(std::size_t bins, double delta_factor, double k_std) {
  ThresholdOptions opts;
  opts.bins = bins;
  opts.delta_factor = delta_factor;
  opts.k_std = k_std;
  return opts;
}

nlohmann::json report_header(std::string_view command) {
  nlohmann::json j;
  j["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
  j["generated_at"] = report_timestamp();
  j["command"] = std::string(command);
  return j;
}

void write_report(const std::string& path, const nlohmann::json& report) {
  if (path.empty()) return;
  write_file_atomically(path, report.dump(2) + "\n");
}

int cmd_distances(const DistancesArgs& args, std::ostream& out) {
  const EmbeddingStore images = load_embedding_store(args.embeddings);
  const EmbeddingStore query_store = load_embedding_store(args.query);
  if (query_store.records.size() != 1) {
    throw Error(Errc::MalformedRow, "query store must hold exactly 1 record, found " +
                                        std::to_string(query_store.records.size()));
  }
  if (query_store.dim != images.dim) {
    throw Error(Errc::DimMismatch, "embedding store dim " + std::to_string(images.dim) + " != query dim " +
                                       std::to_string(query_store.dim));
  }
  const QueryVector query{query_store.records.front().id, query_store.records.front().vector};
  const DistanceTable table = sort_by_distance(compute_distances(images, query));
  std::ostringstream text;
  write_distance_table(table, text);
  write_file_atomically(args.out, text.str());
  out << "wrote " << table.size() << " distances for query '" << query.prompt << "' to " << args.out << "\n";
  return kSuccess;
}

int cmd_threshold(const ThresholdArgs& args, std::ostream& out) {
  const DistanceTable table = load_distances(args.distances);
  const ThresholdDecision decision = auto_threshold(table, threshold_options(args.bins, args.delta_factor, args.k_std));
  const int status = decision.model.variant == ModelVariant::Manual ? kManualAnalysis : kSuccess;

  nlohmann::json report = report_header("threshold");
  report["inputs"] = {{"distances", file_digest(args.distances)}};
  report["options"] = {{"bins", args.bins},
                       {"delta_factor", json_number(args.delta_factor)},
                       {"k_std", json_number(args.k_std)}};
  report["decision"] = to_json(decision);
  report["exit_status"] = status;
  write_report(args.report, report);

  if (!args.out.empty()) {
    std::string ids;
    for (const auto& id : decision.selected_ids) ids += id + "\n";
    write_file_atomically(args.out, ids);
  }

  if (status == kManualAnalysis) {
    out << "model=manual: " << decision.manual_reason << "; results must be analyzed manually\n";
  } else {
    out << "model=" << to_string(decision.model.variant) << " tau=" << fmt9(*decision.tau)
        << " selected=" << decision.n_selected << "\n";
  }
  return status;
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
  const DistanceTable table = load_distances(args.distances);
  const LabelTable labels = load_labels(args.labels);
  int status = kSuccess;

  nlohmann::json report = report_header("evaluate");
  report["inputs"] = {{"distances", file_digest(args.distances)}, {"labels", file_digest(args.labels)}};
  report["positive"] = args.positive;

  std::optional<double> tau = args.threshold;
  if (args.automatic) {
    const ThresholdDecision decision =
        auto_threshold(table, threshold_options(args.bins, args.delta_factor, args.k_std));
    report["options"] = {{"bins", args.bins},
                         {"delta_factor", json_number(args.delta_factor)},
                         {"k_std", json_number(args.k_std)}};
    report["decision"] = to_json(decision);
    tau = decision.tau;
    if (!tau) status = kManualAnalysis;
  }

  if (tau) {
    const MetricsReport ours = metrics(confusion(table, labels, args.positive, *tau), *tau);
    report["ours"] = to_json(ours);
    out << "ours:    tau=" << fmt9(ours.threshold) << " results=" << ours.n_results << " f1=" << fmt9(ours.f1)
        << " precision=" << fmt9(ours.precision) << " recall=" << fmt9(ours.recall) << "\n";
  } else if (args.automatic) {
    report["ours"] = nullptr;
    out << "ours:    manual analysis required\n";
  }

  const MetricsReport best = optimal_f1_threshold(table, labels, args.positive);
  report["optimal_f1"] = to_json(best);
  out << "optimum: tau=" << fmt9(best.threshold) << " results=" << best.n_results << " f1=" << fmt9(best.f1)
      << " precision=" << fmt9(best.precision) << " recall=" << fmt9(best.recall) << "\n";

  report["exit_status"] = status;
  write_report(args.report, report);
  return status;
}

int cmd_export(const ExportArgs& args, std::ostream& out) {
  const DistanceTable table = load_distances(args.distances);
  const auto values = distances_of(table);

  if (args.stats) {
    const SampleMoments m = sample_moments(values);
    out << "n," << values.size() << "\n"
        << "min," << fmt9(m.min) << "\n"
        << "max," << fmt9(m.max) << "\n"
        << "mean," << fmt9(m.mean) << "\n"
        << "std," << fmt9(m.stddev) << "\n";
  }

  if (!args.histogram.empty() || !args.fits.empty()) {
    const Histogram h = build_histogram(std::span<const double>(values), args.bins);
    if (!args.histogram.empty()) {
      std::string text = "center,density\n";
      for (std::size_t i = 0; i < h.bins(); ++i) text += fmt9(h.centers[i]) + "," + fmt9(h.densities[i]) + "\n";
      write_file_atomically(args.histogram, text);
    }
    if (!args.fits.empty()) {
      const SampleMoments m = sample_moments(values);
      const FitReport dual = fit_dual(h, m.mean, m.stddev);
      const FitReport single = fit_single(h, m.mean, m.stddev);
      std::string text = "center,density,fit_dual,fit_single\n";
      for (std::size_t i = 0; i < h.bins(); ++i) {
        const double x = h.centers[i];
        text += fmt9(x) + "," + fmt9(h.densities[i]) + "," + fmt9(eval_model(dual.params, x)) + "," +
                fmt9(eval_model(single.params, x)) + "\n";
      }
      write_file_atomically(args.fits, text);
    }
  }

  if (!args.roc.empty()) {
    const LabelTable labels = load_labels(args.labels);
    const RocCurve curve = roc_curve(table, labels, args.positive);
    std::string text = "threshold,fpr,tpr\n";
    for (const auto& p : curve.points) text += fmt9(p.threshold) + "," + fmt9(p.fpr) + "," + fmt9(p.tpr) + "\n";
    write_file_atomically(args.roc, text);
    const auto& opt = curve.optimum();
    out << "roc optimum: tau=" << fmt9(opt.threshold) << " fpr=" << fmt9(opt.fpr) << " tpr=" << fmt9(opt.tpr)
        << " auc=" << fmt9(roc_auc(curve)) << "\n";
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Automatic cosine-distance thresholds for similarity-sorted image retrieval", "threshgate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  DistancesArgs dist;
  auto* sub_dist = app.add_subcommand("distances", "Cosine distances from every image embedding to a query, sorted");
  sub_dist->add_option("--embeddings", dist.embeddings, "Image embedding store (EMB1)")->required();
  sub_dist->add_option("--query", dist.query, "Single-record query embedding store (EMB1)")->required();
  sub_dist->add_option("--out", dist.out, "Distance table to write")->required();

  ThresholdArgs thr;
  auto* sub_thr = app.add_subcommand("threshold", "Determine tau and the selected subset from a distance table");
  sub_thr->add_option("--distances", thr.distances, "Distance table")->required();
  sub_thr->add_option("--bins", thr.bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  sub_thr->add_option("--delta-factor", thr.delta_factor, "Tolerated ratio of dual to single uncertainty")
      ->capture_default_str();
  sub_thr->add_option("--k-std", thr.k_std, "Standard deviations below the mean for the fallback")
      ->capture_default_str();
  sub_thr->add_option("--report", thr.report, "JSON report to write");
  sub_thr->add_option("--out", thr.out, "Selected ids, one per line");

  EvaluateArgs ev;
  auto* sub_ev = app.add_subcommand("evaluate", "Metrics for a threshold against ground-truth labels");
  sub_ev->add_option("--distances", ev.distances, "Distance table")->required();
  sub_ev->add_option("--labels", ev.labels, "Label table")->required();
  sub_ev->add_option("--positive", ev.positive, "Label of the matching class")->required();
  auto* opt_tau = sub_ev->add_option("--threshold", ev.threshold, "Fixed tau to evaluate");
  auto* opt_auto = sub_ev->add_flag("--auto", ev.automatic, "Evaluate the automatically determined tau");
  opt_tau->excludes(opt_auto);
  sub_ev->add_option("--bins", ev.bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  sub_ev->add_option("--delta-factor", ev.delta_factor, "Tolerated ratio of dual to single uncertainty")
      ->capture_default_str();
  sub_ev->add_option("--k-std", ev.k_std, "Standard deviations below the mean for the fallback")
      ->capture_default_str();
  sub_ev->add_option("--report", ev.report, "JSON report to write");

  ExportArgs ex;
  auto* sub_ex = app.add_subcommand("export", "Plot data: histogram, fitted curves, ROC, distance statistics");
  sub_ex->add_option("--distances", ex.distances, "Distance table")->required();
  sub_ex->add_option("--histogram", ex.histogram, "Write center,density rows");
  sub_ex->add_option("--fits", ex.fits, "Write center,density,fit_dual,fit_single rows");
  auto* opt_roc = sub_ex->add_option("--roc", ex.roc, "Write threshold,fpr,tpr rows");
  auto* opt_labels = sub_ex->add_option("--labels", ex.labels, "Label table (for --roc)");
  auto* opt_pos = sub_ex->add_option("--positive", ex.positive, "Label of the matching class (for --roc)");
  opt_roc->needs(opt_labels)->needs(opt_pos);
  sub_ex->add_option("--bins", ex.bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();
  sub_ex->add_flag("--stats", ex.stats, "Print n/min/max/mean/std of the distances");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kFailure;
  }

  try {
    if (sub_dist->parsed()) return cmd_distances(dist, out);
    if (sub_thr->parsed()) return cmd_threshold(thr, out);
    if (sub_ev->parsed()) return cmd_evaluate(ev, out);
    if (sub_ex->parsed()) return cmd_export(ex, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::DegenerateRange ? kManualAnalysis : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace threshgate::cli
