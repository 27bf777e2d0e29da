#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "cli_common.hpp"
#include "swingid/csv.hpp"
#include "swingid/errors.hpp"
#include "swingid/gait.hpp"

using namespace swingid;

namespace {

struct Processed {
  GaitRecording rec;
  GaitEvents events;
  std::vector<Stride> strides;              // all strides, in order
  std::vector<std::size_t> unpert_indices;  // positions of unperturbed strides
  StrideEnsemble ensemble;                  // normalized unperturbed strides
  OutlierPartition partition;               // indices into `ensemble`
  StrideEnsemble kept;                      // ensemble minus outliers
};

Processed run_pipeline(const std::string& path, const Config& cfg) {
  Processed p;
  p.rec = GaitRecording::from_csv(path);
  filter_forces(p.rec, cfg.get_double("preprocess.force_cutoff", 40.0),
                static_cast<int>(cfg.get_int("preprocess.filter_order", 4)));

  p.events = detect_events(p.rec.grf, p.rec.fs(),
                           cfg.get_double("preprocess.grf_threshold", 20.0),
                           cfg.get_double("preprocess.debounce", 0.050));

  const std::string leg_name = cfg.get_string("preprocess.leg", "left");
  Leg leg = Leg::Left;
  if (leg_name == "right")
    leg = Leg::Right;
  else if (leg_name != "left")
    throw ConfigError("preprocess.leg must be 'left' or 'right', got '" + leg_name + "'");
  p.strides = cut_strides(p.rec, p.events, leg);

  std::vector<Stride> unpert;
  for (std::size_t i = 0; i < p.strides.size(); ++i) {
    if (!p.strides[i].perturbed) {
      unpert.push_back(p.strides[i]);
      p.unpert_indices.push_back(i);
    }
  }
  if (unpert.empty()) throw AnalysisError("preprocess: no unperturbed strides");

  const auto n_points =
      static_cast<std::size_t>(cfg.get_int("preprocess.n_points", 500));
  p.ensemble = normalize_strides(unpert, n_points);
  p.partition =
      outlier_filter(p.ensemble, cfg.get_double("preprocess.max_outlier_fraction", 0.20));

  p.kept.n_points = p.ensemble.n_points;
  for (std::size_t i : p.partition.kept)
    p.kept.strides.push_back(p.ensemble.strides[i]);
  return p;
}

void write_events(const std::string& path, const GaitEvents& ev, double fs) {
  CsvTable t;
  t.header = {"sample", "t", "is_heel_strike"};
  t.cols.assign(3, {});
  auto add = [&](std::size_t s, double hs) {
    t.cols[0].push_back(static_cast<double>(s));
    t.cols[1].push_back(static_cast<double>(s) / fs);
    t.cols[2].push_back(hs);
  };
  std::size_t ih = 0, it = 0;
  while (ih < ev.heel_strikes.size() || it < ev.toe_offs.size()) {
    if (it >= ev.toe_offs.size() ||
        (ih < ev.heel_strikes.size() && ev.heel_strikes[ih] < ev.toe_offs[it]))
      add(ev.heel_strikes[ih++], 1.0);
    else
      add(ev.toe_offs[it++], 0.0);
  }
  write_csv(path, t);
}

void write_strides(const std::string& path, const std::vector<Stride>& strides) {
  CsvTable t;
  t.header = {"stride", "begin", "toe_off", "end",
              "duration", "swing_duration", "perturbed", "onset"};
  t.cols.assign(t.header.size(), {});
  for (std::size_t i = 0; i < strides.size(); ++i) {
    const Stride& s = strides[i];
    t.cols[0].push_back(static_cast<double>(i));
    t.cols[1].push_back(static_cast<double>(s.begin));
    t.cols[2].push_back(static_cast<double>(s.toe_off));
    t.cols[3].push_back(static_cast<double>(s.end));
    t.cols[4].push_back(s.duration());
    t.cols[5].push_back(s.swing_duration());
    t.cols[6].push_back(s.perturbed ? 1.0 : 0.0);
    t.cols[7].push_back(s.onset);
  }
  write_csv(path, t);
}

void write_outliers(const std::string& path, const Processed& p) {
  CsvTable t;
  t.header = {"stride", "kept"};
  t.cols.assign(2, {});
  std::vector<char> kept(p.ensemble.size(), 0);
  for (std::size_t i : p.partition.kept) kept[i] = 1;
  for (std::size_t i = 0; i < p.ensemble.size(); ++i) {
    t.cols[0].push_back(static_cast<double>(p.unpert_indices[i]));
    t.cols[1].push_back(kept[i] ? 1.0 : 0.0);
  }
  write_csv(path, t);
}

void write_normalized(const std::string& path, const Processed& p) {
  CsvTable t;
  t.header = {"point"};
  t.cols.assign(1, {});
  for (std::size_t i = 0; i < p.kept.n_points; ++i)
    t.cols[0].push_back(static_cast<double>(i));
  for (std::size_t k = 0; k < p.partition.kept.size(); ++k) {
    const std::size_t global = p.unpert_indices[p.partition.kept[k]];
    const NormalizedStride& s = p.kept.strides[k];
    const std::string base = "s" + std::to_string(global) + "_";
    for (const auto& [name, chan] :
         {std::pair<const char*, const std::vector<double>*>{"hip", &s.hip},
          {"knee", &s.knee},
          {"ankle", &s.ankle}}) {
      t.header.push_back(base + name);
      t.cols.push_back(*chan);
    }
  }
  write_csv(path, t);
}

void write_mean_curves(const std::string& path, const StrideEnsemble& ens) {
  CsvTable t;
  t.header = {"point", "hip_mean", "hip_std", "knee_mean",
              "knee_std", "ankle_mean", "ankle_std"};
  t.cols.assign(t.header.size(), {});
  for (std::size_t i = 0; i < ens.n_points; ++i)
    t.cols[0].push_back(static_cast<double>(i));
  for (std::size_t j = 0; j < 3; ++j) {
    t.cols[1 + 2 * j] = ens.mean_curve(j);
    t.cols[2 + 2 * j] = ens.std_curve(j);
  }
  write_csv(path, t);
}

std::string fmt_bool(bool b) { return b ? "pass" : "fail"; }

}  // namespace

int cmd_preprocess(const CliArgs& args) {
  if (args.inputs.size() != 1)
    throw ValidationError("preprocess expects exactly one recording file");
  const Config cfg = load_config(args);
  ensure_out_dir(args.out);
  const std::filesystem::path out(args.out);

  const Processed p = run_pipeline(args.inputs[0], cfg);

  write_events((out / "events.csv").string(), p.events, p.rec.fs());
  write_strides((out / "strides.csv").string(), p.strides);
  write_outliers((out / "outliers.csv").string(), p);
  write_normalized((out / "normalized.csv").string(), p);
  write_mean_curves((out / "mean_curves.csv").string(), p.kept);

  // perturbed strides are paired with their closest unperturbed stride and
  // written as swing trajectory pairs ready for the identify subcommand
  std::vector<std::size_t> pert_indices;
  for (std::size_t i = 0; i < p.strides.size(); ++i)
    if (p.strides[i].perturbed) pert_indices.push_back(i);
  if (!pert_indices.empty()) {
    const double window_before = cfg.get_double("preprocess.window_before", 0.025);
    const double window_after = cfg.get_double("preprocess.window_after", 0.250);
    std::vector<Stride> pool;
    for (std::size_t k : p.partition.kept)
      pool.push_back(p.strides[p.unpert_indices[k]]);

    CsvTable pairs;
    pairs.header = {"pair", "perturbed_stride", "matched_stride", "onset"};
    pairs.cols.assign(4, {});
    std::size_t n_pairs = 0;
    for (std::size_t gi : pert_indices) {
      const Stride& ps = p.strides[gi];
      if (ps.onset < 0.0 ||
          ps.swing_duration() < ps.onset + window_after - 1e-12)
        continue;  // window does not fit inside this swing
      const std::vector<Stride> usable = swing_filter(pool, ps.onset, window_after);
      if (usable.empty()) continue;
      const std::size_t m = match_unperturbed(ps, usable, ps.onset, window_before);
      std::size_t matched_global = 0;
      for (std::size_t k = 0; k < p.strides.size(); ++k)
        if (p.strides[k].begin == usable[m].begin) matched_global = k;

      const StridePair pair = extract_pair(ps, usable[m]);
      const std::string stem = "pair" + std::to_string(n_pairs);
      pair.perturbed.to_csv((out / (stem + "_perturbed.csv")).string());
      pair.unperturbed.to_csv((out / (stem + "_unperturbed.csv")).string());
      pairs.cols[0].push_back(static_cast<double>(n_pairs));
      pairs.cols[1].push_back(static_cast<double>(gi));
      pairs.cols[2].push_back(static_cast<double>(matched_global));
      pairs.cols[3].push_back(pair.onset);
      ++n_pairs;
    }
    if (n_pairs == 0)
      throw AnalysisError(
          "preprocess: no valid strides support the analysis window around "
          "any perturbation onset");
    write_csv((out / "pairs.csv").string(), pairs);
  }

  std::string reference = cfg.get_string("preprocess.reference", "");
  if (!reference.empty()) {
    // relative reference paths resolve against the config file's directory
    std::filesystem::path ref_path(reference);
    if (ref_path.is_relative() && !args.config_path.empty())
      ref_path = std::filesystem::path(args.config_path).parent_path() / ref_path;
    const Processed ref = run_pipeline(ref_path.string(), cfg);
    std::vector<double> fmag(p.rec.samples());
    for (std::size_t i = 0; i < fmag.size(); ++i)
      fmag[i] = std::hypot(p.rec.force_x[i], p.rec.force_y[i]);
    const TransparencyReport rep = transparency_metrics(ref.kept, p.kept, fmag);
    write_report_text((out / "transparency.txt").string(),
                      {{"hip.rmse", fmt_num(rep.hip.rmse)},
                       {"hip.isv", fmt_num(rep.hip.isv)},
                       {"hip.result", fmt_bool(rep.hip.pass)},
                       {"knee.rmse", fmt_num(rep.knee.rmse)},
                       {"knee.isv", fmt_num(rep.knee.isv)},
                       {"knee.result", fmt_bool(rep.knee.pass)},
                       {"ankle.rmse", fmt_num(rep.ankle.rmse)},
                       {"ankle.isv", fmt_num(rep.ankle.isv)},
                       {"ankle.result", fmt_bool(rep.ankle.pass)},
                       {"force.rms", fmt_num(rep.force_rms)},
                       {"force.max", fmt_num(rep.force_max)},
                       {"overall", fmt_bool(rep.all_pass())}});
  }

  write_manifest(args, cfg, "preprocess");
  return 0;
}
