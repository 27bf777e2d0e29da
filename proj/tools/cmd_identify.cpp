#include <filesystem>
#include <string>
#include <vector>

#include "cli_common.hpp"
#include "swingid/csv.hpp"
#include "swingid/errors.hpp"
#include "swingid/ident.hpp"

using namespace swingid;

namespace {

void write_estimate(const std::string& path, const IdentResult& r) {
  CsvTable t;
  t.header = {"k_hip", "k_knee", "k_ankle", "d_hip", "d_knee", "d_ankle",
              "cost", "rmse", "vaf_hip", "vaf_knee", "vaf_ankle",
              "n_converged", "best_start"};
  t.cols = {{r.params.k.hip},   {r.params.k.knee},  {r.params.k.ankle},
            {r.params.d.hip},   {r.params.d.knee},  {r.params.d.ankle},
            {r.cost},           {r.rmse},           {r.vaf.hip},
            {r.vaf.knee},       {r.vaf.ankle},
            {static_cast<double>(r.n_converged)},
            {static_cast<double>(r.best_start)}};
  write_csv(path, t);
}

void write_starts(const std::string& path, const IdentResult& r) {
  CsvTable t;
  t.header = {"start", "converged", "iterations", "cost",
              "x0_k_hip", "x0_k_knee", "x0_k_ankle",
              "x0_d_hip", "x0_d_knee", "x0_d_ankle",
              "k_hip", "k_knee", "k_ankle", "d_hip", "d_knee", "d_ankle"};
  t.cols.assign(t.header.size(), {});
  for (std::size_t s = 0; s < r.starts.size(); ++s) {
    const StartReport& rep = r.starts[s];
    std::size_t c = 0;
    t.cols[c++].push_back(static_cast<double>(s));
    t.cols[c++].push_back(rep.converged ? 1.0 : 0.0);
    t.cols[c++].push_back(static_cast<double>(rep.iterations));
    t.cols[c++].push_back(rep.cost);
    for (int i = 0; i < 6; ++i) t.cols[c++].push_back(rep.x0[i]);
    const auto v = rep.params.as_vector();
    for (int i = 0; i < 6; ++i) t.cols[c++].push_back(v[i]);
  }
  write_csv(path, t);
}

// Difference responses (perturbed minus unperturbed joint angles): the
// measured curves next to the model fit at the best parameters.
void write_response(const std::string& path, const IdentProblem& problem,
                    const Trajectory& perturbed, const Trajectory& unperturbed,
                    const ImpedanceParams& best) {
  const std::vector<double>& ts = problem.sample_times();
  const Eigen::VectorXd e = problem.prediction_error(best);
  const auto n = static_cast<long>(ts.size());

  CsvTable t;
  t.header = {"t", "meas_hip", "meas_knee", "meas_ankle",
              "model_hip", "model_knee", "model_ankle"};
  t.cols.assign(t.header.size(), {});
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const JointVec ap = perturbed.joint_angles_at(perturbed.index_near(ts[idx]));
    const JointVec au = unperturbed.joint_angles_at(unperturbed.index_near(ts[idx]));
    const double meas[3] = {ap.hip - au.hip, ap.knee - au.knee, ap.ankle - au.ankle};
    t.cols[0].push_back(ts[idx]);
    for (long j = 0; j < 3; ++j) {
      t.cols[static_cast<std::size_t>(1 + j)].push_back(meas[j]);
      t.cols[static_cast<std::size_t>(4 + j)].push_back(meas[j] - e[j * n + i]);
    }
  }
  write_csv(path, t);
}

}  // namespace

int cmd_identify(const CliArgs& args) {
  if (args.inputs.size() != 2)
    throw ValidationError(
        "identify expects two inputs: perturbed.csv unperturbed.csv");
  const Config cfg = load_config(args);
  ensure_out_dir(args.out);
  const std::filesystem::path out(args.out);

  const Trajectory perturbed = Trajectory::from_csv(args.inputs[0]);
  const Trajectory unperturbed = Trajectory::from_csv(args.inputs[1]);
  const BodyModel model = BodyModel::from_config(cfg);
  const double onset = cfg.get_double("identify.onset");

  IdentOptions opts;
  opts.n_starts = static_cast<int>(cfg.get_int("identify.n_starts", 10));
  opts.window_before = cfg.get_double("identify.window_before", 0.025);
  opts.window_after = cfg.get_double("identify.window_after", 0.250);
  opts.seed = args.seed;
  opts.threads = args.threads;

  const IdentProblem problem(model, unperturbed, perturbed, onset, opts);
  const IdentResult result = problem.identify();

  write_estimate((out / "estimate.csv").string(), result);
  write_starts((out / "starts.csv").string(), result);
  write_response((out / "response.csv").string(), problem, perturbed,
                 unperturbed, result.params);
  write_manifest(args, cfg, "identify");
  return 0;
}
