// Copyright 2026 The fidelimax authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end. File formats are JSON (plans, estimators, datasets,
// reports) and CSV (risk curves). Every command is deterministic for a fixed
// --seed; exit codes are 0 (success), 1 (domain error), 2 (parse/usage).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fidelimax/fidelimax.hpp"

namespace {

using namespace fidelimax;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;

std::string fmt6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5e", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_input_error("cannot write '" + path + "'");
  out << content;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw parse_error("'" + path + "': " + e.what());
  }
}

MeasurementPlan load_plan(const std::string& path) {
  return plan_from_json(parse_json_file(path));
}

int threads_from_env(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("FIDELIMAX_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// Shared target-state selection: a density-matrix JSON file, a GHZ state, or
// a seeded Haar-random pure state.
struct TargetOptions {
  std::string file;
  int ghz = 0;
  int haar = 0;
  std::uint64_t state_seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--target", file, "density-matrix JSON file for the target state");
    cmd->add_option("--ghz", ghz, "use the n-qubit GHZ state as target");
    cmd->add_option("--haar", haar, "use a seeded Haar-random n-qubit pure state");
    cmd->add_option("--state-seed", state_seed, "seed for --haar")->default_val(0);
  }

  DensityMatrix resolve() const {
    const int picked = (!file.empty()) + (ghz > 0) + (haar > 0);
    if (picked != 1) {
      throw invalid_input_error("specify exactly one of --target/--ghz/--haar");
    }
    if (!file.empty()) {
      return DensityMatrix(matrix_from_json(parse_json_file(file), "target"));
    }
    if (ghz > 0) return ghz_state(ghz);
    return random_pure_state(Eigen::Index{1} << haar, state_seed);
  }
};

struct SolverOptions {
  double delta = 1e-4;
  double inner_tol = 1e-6;
  double outer_tol = 1e-6;
  int max_iters = 5000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--delta", delta, "precision padding added to the reported risk");
    cmd->add_option("--inner-tol", inner_tol, "inner solve relative tolerance");
    cmd->add_option("--outer-tol", outer_tol, "relative tolerance on alpha");
    cmd->add_option("--max-iters", max_iters, "inner iteration limit");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.reported_precision = delta;
    c.inner_tolerance = inner_tol;
    c.outer_tolerance = outer_tol;
    c.inner_max_iters = max_iters;
    return c;
  }
};

DensityMatrix resolve_state(const MeasurementPlan& plan, const std::string& state_file,
                            std::optional<double> depolarize_p) {
  if (!state_file.empty() && depolarize_p.has_value()) {
    throw invalid_input_error("--state and --depolarize are mutually exclusive");
  }
  if (!state_file.empty()) {
    return DensityMatrix(matrix_from_json(parse_json_file(state_file), "state"));
  }
  if (depolarize_p.has_value()) return depolarize(plan.target, *depolarize_p);
  return plan.target;
}

// ---------------------------------------------------------------------------

int cmd_plan_validate(const std::string& path) {
  const MeasurementPlan plan = load_plan(path);
  const auto errors = plan.validation_errors();
  if (errors.empty()) {
    std::cout << "plan OK: dimension " << plan.dim << ", " << plan.settings.size()
              << " settings, " << plan.total_shots() << " total shots\n";
    return kExitOk;
  }
  for (const auto& e : errors) std::cout << "violation: " << e << "\n";
  return kExitDomain;
}

int cmd_build(const std::string& plan_path, const std::string& out_path, bool reduced,
              const SolverOptions& sopt) {
  const MeasurementPlan plan = load_plan(plan_path);
  plan.validate();
  const SolverConfig config = sopt.config();
  const SaddlePoint sp =
      reduced ? solve_reduced_two_outcome(plan, config) : outer_minimize(plan, config);
  if (!sp.converged) {
    std::cerr << "error: solver did not converge (" << sp.iterations
              << " inner iterations)\n";
    return kExitDomain;
  }
  const AffineEstimator est = extract_estimator(sp, plan);
  write_file(out_path, serialize(est));

  std::cout << "risk = " << fmt6(est.risk) << "\n";
  std::cout << "constant = " << fmt6(est.constant) << "\n";
  for (std::size_t l = 0; l < est.coefficients.size(); ++l) {
    std::cout << "setting " << l << " '" << plan.settings[l].label << "' coefficients =";
    for (double a : est.coefficients[l]) std::cout << " " << fmt6(a);
    std::cout << "\n";
  }
  std::cout << "alpha = " << fmt6(sp.alpha_star)
            << ", saddle_value = " << fmt6(sp.saddle_value)
            << ", inner_iterations = " << sp.iterations
            << ", boundary_warning = " << (sp.boundary_warning ? "true" : "false")
            << "\n";
  std::cout << "estimator written to " << out_path << "\n";
  return kExitOk;
}

int cmd_estimate(const std::string& est_path, const std::string& data_path) {
  const AffineEstimator est = deserialize(read_file(est_path));
  const Dataset data = dataset_from_json(parse_json_file(data_path));
  const double value = estimate(est, data);
  std::cout << "F = " << fmt6(value) << " ± " << fmt6(est.risk) << " (confidence "
            << fmt6(1.0 - est.epsilon) << ")\n";
  if (value < 0.0 || value > 1.0) {
    std::cout << "note: estimate lies outside [0, 1]; the affine value is reported "
                 "unclipped\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RiskArgs {
  double epsilon = 0.05;
  double risk = 0.0;
  std::int64_t shots = 0;
  double omega1 = 1.0, omega2 = 0.0;
  double delta = 2.0;
  double norm = 0.0;
  std::int64_t dimension = 2;
  bool invert = false;
};

int cmd_risk(const std::string& formula, const RiskArgs& a) {
  if (formula == "vartheta") {
    std::cout << fmt6(vartheta(a.epsilon)) << "\n";
    return kExitOk;
  }
  if (a.invert) {
    std::int64_t shots = 0;
    if (formula == "lower-bound") {
      shots = sample_complexity_optimal(a.risk, a.epsilon);
    } else if (formula == "two-outcome") {
      shots = sample_complexity_two_outcome(a.risk, a.epsilon, a.omega1, a.omega2);
    } else if (formula == "stabilizer") {
      shots = sample_complexity_stabilizer(a.risk, a.epsilon,
                                           static_cast<std::int64_t>(a.delta));
    } else {
      shots = sample_complexity_pauli(a.risk, a.epsilon, a.norm, a.dimension);
    }
    std::cout << shots << "\n";
    return kExitOk;
  }
  if (a.shots < 1) throw invalid_input_error("--shots is required without --invert");
  double value = 0.0;
  if (formula == "lower-bound") {
    value = risk_lower_bound(a.shots, a.epsilon);
  } else if (formula == "two-outcome") {
    value = risk_two_outcome(TwoOutcomeModel(a.omega1, a.omega2, a.shots, a.epsilon));
  } else if (formula == "stabilizer") {
    value = risk_stabilizer(a.delta, a.shots, a.epsilon);
  } else {  // pauli: effective two-outcome weights from (N, d)
    const double n = a.norm;
    const auto d = static_cast<double>(a.dimension);
    value = risk_two_outcome(TwoOutcomeModel((d + n - 1.0) / (2.0 * n),
                                             (n - 1.0) / (2.0 * n), a.shots, a.epsilon));
  }
  std::cout << fmt6(value) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SchemeArgs {
  TargetOptions target;
  std::string out;
  double epsilon = 0.05;
  double epsilon_o = 1e-5;
  std::int64_t shots = 0;
  double risk = 0.0;
  std::uint64_t seed = 0;
  int n_qubits = 0;
  std::string generators;
  std::string mode = "subspace";
};

int cmd_scheme(const std::string& kind, const SchemeArgs& a) {
  std::optional<MeasurementPlan> plan;
  if (kind == "optimal") {
    const DensityMatrix target = a.target.resolve();
    if (a.shots < 1) throw invalid_input_error("scheme optimal requires --shots");
    plan.emplace(target, a.epsilon,
                 std::vector<PovmSetting>{optimal_povm(target, a.shots)}, a.epsilon_o);
  } else if (kind == "stabilizer") {
    StabilizerGroup group;
    if (!a.generators.empty()) {
      std::vector<std::string> gens;
      std::stringstream ss(a.generators);
      std::string tok;
      while (std::getline(ss, tok, ',')) gens.push_back(tok);
      group = StabilizerGroup::from_strings(gens);
    } else if (a.n_qubits > 0) {
      group = StabilizerGroup::ghz(a.n_qubits);
    } else {
      throw invalid_input_error("scheme stabilizer requires --n or --generators");
    }
    const DensityMatrix target = stabilizer_state(group);
    std::int64_t shots = a.shots;
    if (shots < 1) {
      if (!(a.risk > 0.0)) {
        throw invalid_input_error("scheme stabilizer requires --shots or --risk");
      }
      shots = sample_complexity_stabilizer(a.risk, a.epsilon,
                                           static_cast<std::int64_t>(target.dim()));
    }
    const StabilizerScheme scheme = stabilizer_scheme(group, shots, a.seed);
    plan.emplace(target, a.epsilon,
                 std::vector<PovmSetting>{scheme.povm.setting("stabilizer-effective", shots)},
                 a.epsilon_o);
    std::cout << "sampled " << scheme.sampled.size() << " stabilizer elements, omega2 = "
              << fmt6(scheme.povm.omega2) << "\n";
  } else if (kind == "pauli") {
    const DensityMatrix target = a.target.resolve();
    if (a.shots < 1) throw invalid_input_error("scheme pauli requires --shots");
    const PauliScheme scheme = pauli_scheme(target, a.shots, a.seed);
    plan.emplace(target, a.epsilon,
                 std::vector<PovmSetting>{scheme.povm.setting("pauli-effective", a.shots)},
                 a.epsilon_o);
    std::cout << "weight norm N = " << fmt6(scheme.spec.norm_n)
              << ", omega1 = " << fmt6(scheme.povm.omega1)
              << ", omega2 = " << fmt6(scheme.povm.omega2) << "\n";
  } else {  // dfe
    const DensityMatrix target = a.target.resolve();
    if (!(a.risk > 0.0)) throw invalid_input_error("scheme dfe requires --risk");
    const DfeScheme scheme = dfe_scheme(target, a.risk, a.epsilon, a.seed);
    plan.emplace(scheme.plan(target, povm_mode_from_string(a.mode), a.epsilon_o));
    std::cout << "sampled " << scheme.total_samples << " words ("
              << scheme.identity_samples << " identity), " << scheme.entries.size()
              << " distinct settings, " << scheme.total_shots() << " total shots\n";
  }

  plan->validate();
  if (a.out.empty()) throw invalid_input_error("--out is required");
  write_file(a.out, plan_to_json(*plan).dump(2) + "\n");
  std::cout << "plan written to " << a.out << " (fingerprint " << plan_fingerprint(*plan)
            << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& plan_path, const std::string& state_file,
                 std::optional<double> depolarize_p, std::uint64_t seed,
                 const std::string& out_path) {
  const MeasurementPlan plan = load_plan(plan_path);
  plan.validate();
  const DensityMatrix state = resolve_state(plan, state_file, depolarize_p);
  const Dataset data = sample_outcomes(plan, state, seed);
  write_file(out_path, dataset_to_json(data).dump(2) + "\n");
  std::cout << "dataset written to " << out_path << "\n";
  return kExitOk;
}

int cmd_trials(const std::string& plan_path, const std::string& est_path,
               const std::string& state_file, std::optional<double> depolarize_p,
               std::int64_t trials, std::uint64_t seed, int threads,
               const std::string& out_path) {
  const MeasurementPlan plan = load_plan(plan_path);
  plan.validate();
  const AffineEstimator est = deserialize(read_file(est_path));
  const DensityMatrix state = resolve_state(plan, state_file, depolarize_p);
  const TrialReport report = run_coverage(plan, est, state, trials, seed, threads);

  std::cout << "trials = " << report.trials << "\n";
  std::cout << "true_fidelity = " << fmt6(report.true_fidelity) << "\n";
  std::cout << "empirical_coverage = " << fmt6(report.empirical_coverage) << "\n";
  std::cout << "mean_estimate = " << fmt6(report.mean_estimate) << "\n";
  std::cout << "mean_abs_error = " << fmt6(report.mean_abs_error) << "\n";
  if (!out_path.empty()) {
    json j;
    j["version"] = kFileSchemaVersion;
    j["trials"] = report.trials;
    j["coverage_count"] = report.coverage_count;
    j["empirical_coverage"] = report.empirical_coverage;
    j["mean_estimate"] = report.mean_estimate;
    j["mean_abs_error"] = report.mean_abs_error;
    j["true_fidelity"] = report.true_fidelity;
    j["estimates"] = report.estimates;
    write_file(out_path, j.dump(2) + "\n");
    std::cout << "report written to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_curve(const TargetOptions& target_opt, int pool_qubits,
              const std::vector<int>& l_values, const std::vector<std::int64_t>& r_values,
              double epsilon, const std::string& mode, std::uint64_t seed,
              const std::string& out_path) {
  const DensityMatrix target = target_opt.resolve();
  int n = pool_qubits;
  if (n == 0) {
    while ((Eigen::Index{1} << n) < target.dim()) ++n;
  }
  std::vector<PauliString> pool;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << (2 * n)); ++i) {
    pool.push_back(pauli_from_index(n, i));
  }
  const auto points = risk_curve(target, pool, l_values, r_values, epsilon,
                                 povm_mode_from_string(mode), seed);
  std::string csv = "L,R,risk\n";
  for (const auto& p : points) {
    csv += std::to_string(p.n_settings) + "," + std::to_string(p.shots) + "," +
           fmt6(p.risk) + "\n";
  }
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
    std::cout << "curve written to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_mle(const std::string& plan_path, const std::string& data_path, int bootstrap,
            std::uint64_t seed, int threads, const std::string& out_path) {
  const MeasurementPlan plan = load_plan(plan_path);
  plan.validate();
  const Dataset data = dataset_from_json(parse_json_file(data_path));
  const MleResult result = mle_reconstruct(plan, data);
  std::cout << "mle_fidelity = " << fmt6(result.fidelity) << "\n";
  std::cout << "nll = " << fmt6(result.nll) << "\n";
  std::cout << "iterations = " << result.iterations
            << ", converged = " << (result.converged ? "true" : "false") << "\n";

  json j;
  j["version"] = kFileSchemaVersion;
  j["fidelity"] = result.fidelity;
  j["nll"] = result.nll;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["state"] = matrix_to_json(result.state.mat());
  if (bootstrap > 0) {
    const auto [lo, hi] =
        bootstrap_interval(plan, data, bootstrap, plan.epsilon, seed, {}, threads);
    std::cout << "bootstrap_interval = [" << fmt6(lo) << ", " << fmt6(hi) << "]\n";
    j["bootstrap_interval"] = {lo, hi};
  }
  if (!out_path.empty()) {
    write_file(out_path, j.dump(2) + "\n");
    std::cout << "result written to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_robustness(const std::string& plan_path, const std::string& est_path,
                   const std::string& state_file, std::optional<double> depolarize_p,
                   double delta_s, double delta_m, std::uint64_t seed, int runs) {
  const MeasurementPlan plan = load_plan(plan_path);
  plan.validate();
  const AffineEstimator est = deserialize(read_file(est_path));
  const DensityMatrix state = resolve_state(plan, state_file, depolarize_p);
  int violations = 0;
  for (int r = 0; r < runs; ++r) {
    const PerturbationReport rep = perturb_and_estimate(
        plan, est, state, delta_s, delta_m, substream(seed, static_cast<std::uint64_t>(r)));
    std::cout << "run " << r << ": noiseless = " << fmt6(rep.noiseless_estimate)
              << ", perturbed = " << fmt6(rep.perturbed_estimate)
              << ", difference = " << fmt6(rep.observed_difference)
              << ", bound = " << fmt6(rep.bound) << "\n";
    if (rep.observed_difference > rep.bound) ++violations;
  }
  std::cout << "bound_violations = " << violations << "/" << runs << "\n";
  return violations == 0 ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimax fidelity estimation toolkit"};
  app.require_subcommand(1);

  // plan validate
  auto* plan_cmd = app.add_subcommand("plan", "plan file utilities");
  plan_cmd->require_subcommand(1);
  std::string plan_path;
  auto* validate_cmd = plan_cmd->add_subcommand("validate", "check all plan invariants");
  validate_cmd->add_option("file", plan_path, "plan JSON")->required();

  // build
  auto* build_cmd = app.add_subcommand("build", "construct the minimax estimator");
  std::string build_plan, build_out;
  bool reduced = false;
  SolverOptions solver_opt;
  build_cmd->add_option("--plan", build_plan, "plan JSON")->required();
  build_cmd->add_option("--out", build_out, "estimator output path")->required();
  build_cmd->add_flag("--reduced-two-outcome", reduced,
                      "use the scalar two-outcome solver");
  solver_opt.attach(build_cmd);

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "evaluate an estimator on data");
  std::string est_path, data_path;
  est_cmd->add_option("--estimator", est_path, "estimator JSON")->required();
  est_cmd->add_option("--data", data_path, "dataset JSON")->required();

  // risk
  auto* risk_cmd = app.add_subcommand("risk", "closed-form risks and sample complexities");
  risk_cmd->require_subcommand(1);
  RiskArgs risk_args;
  std::vector<CLI::App*> risk_subs;
  for (const char* name : {"vartheta", "lower-bound", "two-outcome", "stabilizer", "pauli"}) {
    auto* sub = risk_cmd->add_subcommand(name, "");
    sub->add_option("--epsilon", risk_args.epsilon, "confidence parameter");
    sub->add_option("--shots", risk_args.shots, "repetitions R");
    sub->add_option("--risk", risk_args.risk, "target risk (with --invert)");
    sub->add_flag("--invert", risk_args.invert, "print the sample complexity");
    sub->add_option("--omega1", risk_args.omega1, "two-outcome weight on rho");
    sub->add_option("--omega2", risk_args.omega2, "two-outcome weight on I - rho");
    sub->add_option("--delta", risk_args.delta, "stabilizer family parameter (= d)");
    sub->add_option("--norm", risk_args.norm, "Pauli weight norm N");
    sub->add_option("--dimension", risk_args.dimension, "Hilbert space dimension");
    risk_subs.push_back(sub);
  }

  // scheme
  auto* scheme_cmd = app.add_subcommand("scheme", "generate measurement plans");
  scheme_cmd->require_subcommand(1);
  SchemeArgs scheme_args;
  for (const char* name : {"optimal", "stabilizer", "pauli", "dfe"}) {
    auto* sub = scheme_cmd->add_subcommand(name, "");
    scheme_args.target.attach(sub);
    sub->add_option("--out", scheme_args.out, "plan output path");
    sub->add_option("--epsilon", scheme_args.epsilon, "confidence parameter");
    sub->add_option("--epsilon-o", scheme_args.epsilon_o, "smoothing parameter");
    sub->add_option("--shots", scheme_args.shots, "repetitions");
    sub->add_option("--risk", scheme_args.risk, "target risk");
    sub->add_option("--seed", scheme_args.seed, "sampling seed");
    sub->add_option("--n", scheme_args.n_qubits, "qubit count (GHZ stabilizer group)");
    sub->add_option("--generators", scheme_args.generators,
                    "comma-separated stabilizer generators, e.g. XX,ZZ");
    sub->add_option("--mode", scheme_args.mode, "subspace|eigenbasis (dfe)");
  }

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "sample outcomes from a plan");
  std::string sim_plan, sim_state, sim_out;
  double sim_depol = -1.0;
  std::uint64_t sim_seed = 0;
  sim_cmd->add_option("--plan", sim_plan, "plan JSON")->required();
  sim_cmd->add_option("--state", sim_state, "true-state matrix JSON");
  sim_cmd->add_option("--depolarize", sim_depol, "depolarize the plan target by p");
  sim_cmd->add_option("--seed", sim_seed, "sampling seed");
  sim_cmd->add_option("--out", sim_out, "dataset output path")->required();

  // trials
  auto* trials_cmd = app.add_subcommand("trials", "repeated-trial coverage experiment");
  std::string tr_plan, tr_est, tr_state, tr_out;
  double tr_depol = -1.0;
  std::int64_t tr_trials = 200;
  std::uint64_t tr_seed = 0;
  int tr_threads = 0;
  trials_cmd->add_option("--plan", tr_plan, "plan JSON")->required();
  trials_cmd->add_option("--estimator", tr_est, "estimator JSON")->required();
  trials_cmd->add_option("--state", tr_state, "true-state matrix JSON");
  trials_cmd->add_option("--depolarize", tr_depol, "depolarize the plan target by p");
  trials_cmd->add_option("--trials", tr_trials, "trial count");
  trials_cmd->add_option("--seed", tr_seed, "master seed");
  trials_cmd->add_option("--threads", tr_threads, "worker threads");
  trials_cmd->add_option("--out", tr_out, "report output path");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "risk over an (L, R) grid");
  TargetOptions curve_target;
  curve_target.attach(curve_cmd);
  std::vector<int> curve_l;
  std::vector<std::int64_t> curve_r;
  double curve_eps = 0.05;
  std::string curve_mode = "subspace", curve_out;
  std::uint64_t curve_seed = 0;
  int curve_pool_qubits = 0;
  curve_cmd->add_option("--l-values", curve_l, "settings counts")
      ->required()
      ->delimiter(',');
  curve_cmd->add_option("--r-values", curve_r, "repetition counts")
      ->required()
      ->delimiter(',');
  curve_cmd->add_option("--epsilon", curve_eps, "confidence parameter");
  curve_cmd->add_option("--mode", curve_mode, "subspace|eigenbasis");
  curve_cmd->add_option("--seed", curve_seed, "pool shuffle seed");
  curve_cmd->add_option("--pool-qubits", curve_pool_qubits, "qubit count of the Pauli pool");
  curve_cmd->add_option("--out", curve_out, "CSV output path");

  // mle
  auto* mle_cmd = app.add_subcommand("mle", "maximum likelihood baseline");
  std::string mle_plan, mle_data, mle_out;
  int mle_bootstrap = 0, mle_threads = 0;
  std::uint64_t mle_seed = 0;
  mle_cmd->add_option("--plan", mle_plan, "plan JSON")->required();
  mle_cmd->add_option("--data", mle_data, "dataset JSON")->required();
  mle_cmd->add_option("--bootstrap", mle_bootstrap, "bootstrap replicate count");
  mle_cmd->add_option("--seed", mle_seed, "bootstrap seed");
  mle_cmd->add_option("--threads", mle_threads, "worker threads");
  mle_cmd->add_option("--out", mle_out, "result output path");

  // robustness
  auto* rob_cmd = app.add_subcommand("robustness", "bounded-perturbation experiment");
  std::string rob_plan, rob_est, rob_state;
  double rob_depol = -1.0, rob_ds = 0.0, rob_dm = 0.0;
  std::uint64_t rob_seed = 0;
  int rob_runs = 1;
  rob_cmd->add_option("--plan", rob_plan, "plan JSON")->required();
  rob_cmd->add_option("--estimator", rob_est, "estimator JSON")->required();
  rob_cmd->add_option("--state", rob_state, "true-state matrix JSON");
  rob_cmd->add_option("--depolarize", rob_depol, "depolarize the plan target by p");
  rob_cmd->add_option("--delta-s", rob_ds, "state perturbation bound");
  rob_cmd->add_option("--delta-m", rob_dm, "effect perturbation bound");
  rob_cmd->add_option("--seed", rob_seed, "master seed");
  rob_cmd->add_option("--runs", rob_runs, "independent runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (validate_cmd->parsed()) return cmd_plan_validate(plan_path);
    if (build_cmd->parsed()) return cmd_build(build_plan, build_out, reduced, solver_opt);
    if (est_cmd->parsed()) return cmd_estimate(est_path, data_path);
    if (risk_cmd->parsed()) {
      for (auto* sub : risk_subs) {
        if (sub->parsed()) return cmd_risk(sub->get_name(), risk_args);
      }
    }
    if (scheme_cmd->parsed()) {
      for (auto* sub : scheme_cmd->get_subcommands({})) {
        if (sub->parsed()) return cmd_scheme(sub->get_name(), scheme_args);
      }
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_plan, sim_state,
                          sim_depol >= 0.0 ? std::optional<double>(sim_depol) : std::nullopt,
                          sim_seed, sim_out);
    }
    if (trials_cmd->parsed()) {
      return cmd_trials(tr_plan, tr_est, tr_state,
                        tr_depol >= 0.0 ? std::optional<double>(tr_depol) : std::nullopt,
                        tr_trials, tr_seed, threads_from_env(tr_threads), tr_out);
    }
    if (curve_cmd->parsed()) {
      return cmd_curve(curve_target, curve_pool_qubits, curve_l, curve_r, curve_eps,
                       curve_mode, curve_seed, curve_out);
    }
    if (mle_cmd->parsed()) {
      return cmd_mle(mle_plan, mle_data, mle_bootstrap, mle_seed,
                     threads_from_env(mle_threads), mle_out);
    }
    if (rob_cmd->parsed()) {
      return cmd_robustness(rob_plan, rob_est, rob_state,
                            rob_depol >= 0.0 ? std::optional<double>(rob_depol) : std::nullopt,
                            rob_ds, rob_dm, rob_seed, rob_runs);
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const invalid_input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const integrity_error& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitParse;
}
