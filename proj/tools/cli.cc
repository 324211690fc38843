#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "streamtree/experiment.h"

namespace streamtree::cli {

namespace {

struct PlanFlags {
  std::string plan_file;
  std::vector<std::string> streams;
  std::vector<std::string> algorithms;
  std::vector<std::size_t> grace_periods;
  std::vector<double> tie_thresholds;
  std::vector<std::uint64_t> seeds;
  std::optional<double> delta;
  std::optional<std::string> predictor;
  std::optional<std::string> olboost_core;
  std::optional<double> min_lambda;
  std::optional<double> max_lambda;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  std::optional<double> alpha;
  std::optional<std::size_t> window;
};

void AddPlanFlags(CLI::App* cmd, PlanFlags& f) {
  cmd->add_option("--plan", f.plan_file, "JSON plan file; flags override its values");
  cmd->add_option("--stream", f.streams,
                  "stream, e.g. sea:seed=3,length=100000 or csv:path=data.csv")
      ->delimiter(';');
  cmd->add_option("--algo", f.algorithms, "VFDT, SVFDT-I, SVFDT-II, O_VFDT, ...")
      ->delimiter(',');
  cmd->add_option("--gp", f.grace_periods, "grace periods")->delimiter(',');
  cmd->add_option("--tau", f.tie_thresholds, "tie thresholds")->delimiter(',');
  cmd->add_option("--seed", f.seeds, "tree seeds")->delimiter(',');
  cmd->add_option("--delta", f.delta, "split confidence");
  cmd->add_option("--predictor", f.predictor, "leaf predictor: mc, nb, anb");
  cmd->add_option("--olboost", f.olboost_core, "OLBoost core predictor: mc, nb, anb");
  cmd->add_option("--min-lambda", f.min_lambda);
  cmd->add_option("--max-lambda", f.max_lambda);
  cmd->add_option("--out", f.out, std::string("output directory (default: $") + kOutEnv +
                                      " or streamtree-out)");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_option("--alpha", f.alpha, "significance level");
  cmd->add_option("--window", f.window, "trajectory window");
}

ExperimentPlan BuildPlan(const PlanFlags& f) {
  ExperimentPlan base;
  if (const char* env = std::getenv(kOutEnv); env && *env) base.out = env;
  ExperimentPlan plan =
      f.plan_file.empty() ? base : ExperimentPlan::FromFile(f.plan_file, base);
  if (!f.streams.empty()) plan.streams = f.streams;
  if (!f.algorithms.empty()) plan.algorithms = f.algorithms;
  if (!f.grace_periods.empty()) plan.grace_periods = f.grace_periods;
  if (!f.tie_thresholds.empty()) plan.tie_thresholds = f.tie_thresholds;
  if (!f.seeds.empty()) plan.seeds = f.seeds;
  if (f.delta) plan.delta = *f.delta;
  if (f.predictor) plan.predictor = *f.predictor;
  if (f.olboost_core) plan.olboost_core = *f.olboost_core;
  if (f.min_lambda) plan.min_lambda = *f.min_lambda;
  if (f.max_lambda) plan.max_lambda = *f.max_lambda;
  if (f.out) plan.out = *f.out;
  if (f.jobs) plan.jobs = *f.jobs;
  if (f.alpha) plan.alpha = *f.alpha;
  if (f.window) plan.window = *f.window;
  plan.Validate();
  return plan;
}

int Describe(const ExperimentPlan& plan, std::ostream& out) {
  const auto runs = plan.Expand();
  std::uint64_t total = 0;
  for (const RunSpec& run : runs) {
    const std::uint64_t n = run.stream.EstimatedLength();
    total += n;
    out << run.Fingerprint() << "  " << run.algorithm.Name()
        << "  gp=" << run.tree.grace_period << "  tau=" << run.tree.tie_threshold
        << "  seed=" << run.tree.seed << "  instances=" << n << "  "
        << run.stream.Canonical() << '\n';
  }
  out << runs.size() << " runs, " << total << " instances\n";
  return kOk;
}

int Execute(const ExperimentPlan& plan, std::ostream& out, std::ostream& err) {
  const ExperimentOutcome outcome = RunExperiment(plan, &out);
  WriteOutputs(plan, outcome, plan.out);
  out << outcome.reports.size() << " reports written to " << plan.out.string() << '\n';
  if (!outcome.ok()) {
    err << outcome.failures.size() << " run(s) failed; see "
        << (plan.out / "manifest.json").string() << '\n';
    for (const RunFailure& f : outcome.failures) {
      err << "  " << f.fingerprint << ": " << f.error << '\n';
    }
    return kRunFailed;
  }
  return kOk;
}

int Compare(const std::filesystem::path& dir, double alpha, std::ostream& out) {
  if (!std::filesystem::is_directory(dir / "reports")) {
    throw StreamError("no reports directory under '" + dir.string() + "'");
  }
  for (const WinMatrix& m : CompareDirectory(dir, alpha)) {
    out << "# " << MetricName(m.metric) << '\n' << m.ToCsv();
  }
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming Hoeffding trees with prequential evaluation", "streamtree"};
  app.require_subcommand(1);

  PlanFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "execute an experiment plan");
  AddPlanFlags(run, run_flags);

  PlanFlags describe_flags;
  CLI::App* describe = app.add_subcommand("describe", "list the runs of a plan");
  AddPlanFlags(describe, describe_flags);

  std::string compare_dir;
  double compare_alpha = 0.05;
  CLI::App* compare = app.add_subcommand("compare", "rebuild win matrices from reports");
  compare->add_option("--out", compare_dir, "experiment output directory");
  compare->add_option("--alpha", compare_alpha, "significance level")
      ->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream help;
      app.exit(e, help, help);
      out << help.str();
      return kOk;
    }
    std::ostringstream msg, detail;
    app.exit(e, msg, detail);
    err << detail.str() << msg.str();
    return kUsage;
  }

  try {
    if (run->parsed()) return Execute(BuildPlan(run_flags), out, err);
    if (describe->parsed()) return Describe(BuildPlan(describe_flags), out);
    if (compare->parsed()) {
      if (compare_dir.empty()) {
        const char* env = std::getenv(kOutEnv);
        compare_dir = env && *env ? env : "streamtree-out";
      }
      return Compare(compare_dir, compare_alpha, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StreamError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRunFailed;
  }
  return kUsage;
}

}  // namespace streamtree::cli
