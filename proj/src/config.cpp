#include "demonsim/config.hpp"

#include "demonsim/rng.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace demonsim {

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
}

Mode mode_from_string(const std::string& s) {
  if (s == "analytic") return Mode::Analytic;
  if (s == "sampled") return Mode::Sampled;
  throw std::invalid_argument("mode must be 'analytic' or 'sampled'");
}

Observer observer_from_string(const std::string& s) {
  if (s == "outside") return Observer::Outside;
  if (s == "inside") return Observer::Inside;
  throw std::invalid_argument("observer must be 'outside' or 'inside'");
}

DetectionBasis basis_from_string(const std::string& s) {
  if (s == "diagonal") return DetectionBasis::Diagonal;
  if (s == "off-diagonal") return DetectionBasis::OffDiagonal;
  throw std::invalid_argument("basis must be 'diagonal' or 'off-diagonal'");
}

}  // namespace

void RunConfig::validate() const {
  if (experiment < 1 || experiment > 3)
    throw std::invalid_argument("experiment must be 1, 2 or 3");
  if (noise) noise->validate();
  calibration.validate();
  if (n_resamples < 100)
    throw std::invalid_argument("n_resamples must be >= 100");
  if (s_initial_ref < 0.0 || s_initial_ref > 1.0)
    throw std::invalid_argument("s_initial_ref must be in [0, 1]");
  if (out_dir.empty()) throw std::invalid_argument("out_dir must be set");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["mode"] = mode == Mode::Analytic ? "analytic" : "sampled";
  j["observer"] =
      observer ? nlohmann::json(*observer == Observer::Outside ? "outside"
                                                               : "inside")
               : nlohmann::json(nullptr);
  j["basis"] = basis ? nlohmann::json(*basis == DetectionBasis::Diagonal
                                          ? "diagonal"
                                          : "off-diagonal")
                     : nlohmann::json(nullptr);
  if (noise) {
    j["noise"] = {{"t2", noise->t2},
                  {"t2_star", noise->t2_star},
                  {"protected_time", noise->protected_time},
                  {"unprotected_gaps", noise->unprotected_gaps},
                  {"p0", noise->p0}};
  } else {
    j["noise"] = nullptr;
  }
  j["calibration"] = {{"c0", calibration.c0},
                      {"c1", calibration.c1},
                      {"cycles", calibration.cycles}};
  j["n_resamples"] = n_resamples;
  j["seed"] = seed;
  j["s_initial_ref"] = s_initial_ref;
  j["out_dir"] = out_dir;
  j["emit_datasets"] = emit_datasets;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"experiment", "mode", "observer", "basis", "noise",
                       "calibration", "n_resamples", "seed", "s_initial_ref",
                       "out_dir", "emit_datasets"},
                      "config");
  RunConfig c;
  if (j.contains("experiment")) c.experiment = j.at("experiment").get<int>();
  if (j.contains("mode"))
    c.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("observer") && !j.at("observer").is_null())
    c.observer = observer_from_string(j.at("observer").get<std::string>());
  if (j.contains("basis") && !j.at("basis").is_null())
    c.basis = basis_from_string(j.at("basis").get<std::string>());
  if (j.contains("noise") && !j.at("noise").is_null()) {
    const auto& n = j.at("noise");
    reject_unknown_keys(
        n, {"t2", "t2_star", "protected_time", "unprotected_gaps", "p0"},
        "config.noise");
    NoiseParams np;
    if (n.contains("t2")) np.t2 = n.at("t2").get<double>();
    if (n.contains("t2_star")) np.t2_star = n.at("t2_star").get<double>();
    if (n.contains("protected_time"))
      np.protected_time = n.at("protected_time").get<double>();
    if (n.contains("unprotected_gaps"))
      np.unprotected_gaps = n.at("unprotected_gaps").get<double>();
    if (n.contains("p0")) np.p0 = n.at("p0").get<double>();
    c.noise = np;
  }
  if (j.contains("calibration")) {
    const auto& cal = j.at("calibration");
    reject_unknown_keys(cal, {"c0", "c1", "cycles"}, "config.calibration");
    if (cal.contains("c0")) c.calibration.c0 = cal.at("c0").get<double>();
    if (cal.contains("c1")) c.calibration.c1 = cal.at("c1").get<double>();
    if (cal.contains("cycles"))
      c.calibration.cycles = cal.at("cycles").get<long long>();
  }
  if (j.contains("n_resamples"))
    c.n_resamples = j.at("n_resamples").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("s_initial_ref"))
    c.s_initial_ref = j.at("s_initial_ref").get<double>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("emit_datasets"))
    c.emit_datasets = j.at("emit_datasets").get<bool>();
  c.validate();
  return c;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.to_json().dump())));
  return buf;
}

std::string version_string() { return "1.0.0"; }

ExperimentReport run(const RunConfig& config) {
  config.validate();

  SamplingOptions opts;
  opts.calibration = config.calibration;
  opts.n_resamples = config.n_resamples;
  opts.with_ci = config.mode == Mode::Sampled;

  ExperimentReport report;
  switch (config.experiment) {
    case 1:
      report = run_experiment1(config.noise, config.mode, config.seed, opts);
      break;
    case 2:
      report = run_experiment2(config.noise, config.mode, config.basis,
                               config.seed, opts);
      break;
    case 3:
      report = run_experiment3(config.noise, config.mode, config.observer,
                               config.seed, opts, config.s_initial_ref);
      break;
  }

  nlohmann::json j = report.to_json();
  j["reproducibility"] = {{"config", config.to_json()},
                          {"config_hash", config_hash(config)},
                          {"seed", config.seed},
                          {"version", version_string()}};

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  const fs::path dir(config.out_dir);

  auto write_file = [&](const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + p.string());
    out << body;
    if (!out) throw std::runtime_error("write failed for " + p.string());
  };

  write_file(dir / "report.json", j.dump(2) + "\n");
  write_file(dir / "report.csv", report.to_csv());

  if (config.emit_datasets && config.mode == Mode::Sampled) {
    nlohmann::json ds_out = nlohmann::json::array();
    for (const auto& st : report.stages)
      for (const auto& sub : st.subsystems)
        if (sub.dataset)
          ds_out.push_back({{"stage", st.stage},
                            {"subsystem", sub.name},
                            {"dataset", sub.dataset->to_json()}});
    write_file(dir / "datasets.json", ds_out.dump(2) + "\n");
  }
  return report;
}

}  // namespace demonsim
