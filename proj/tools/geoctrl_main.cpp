#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"

#include "geoctrl/annuli.hpp"
#include "geoctrl/config.hpp"
#include "geoctrl/errors.hpp"
#include "geoctrl/escape.hpp"
#include "geoctrl/flow.hpp"
#include "geoctrl/gcc.hpp"
#include "geoctrl/halfwave.hpp"
#include "geoctrl/scenario.hpp"
#include "geoctrl/trapping.hpp"
#include "geoctrl/wavesim.hpp"

namespace {

using geoctrl::Vec3;
using nlohmann::json;

std::filesystem::path out_path(const geoctrl::Config& cfg,
                               const std::string& name) {
  std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_report(const geoctrl::Config& cfg, const json& report) {
  std::ofstream out(out_path(cfg, "report.json"));
  out << report.dump(2) << "\n";
}

json phase_point_json(const geoctrl::PhasePoint& w) {
  return json{{"t", w.t},
              {"x", {w.x(0), w.x(1), w.x(2)}},
              {"tau", w.tau},
              {"xi", {w.xi(0), w.xi(1), w.xi(2)}}};
}

// seeds on the plus characteristic, tau normalized to 1, spread over the
// ball |x| <= R0 + 1
std::vector<geoctrl::PhasePoint> characteristic_seeds(
    const geoctrl::SpacetimeMetric& m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<geoctrl::PhasePoint> seeds;
  seeds.reserve(n);
  while ((int)seeds.size() < n) {
    Vec3 x(gauss(rng), gauss(rng), gauss(rng));
    if (x.norm() < 1e-9) continue;
    x *= (m.R0 + 1.0) * std::cbrt(unif(rng)) / x.norm();
    Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
    if (dir.norm() < 1e-9) continue;
    dir.normalize();
    double bp = geoctrl::b_pm(m, x, dir, geoctrl::Branch::plus);
    seeds.push_back({0.0, x, 1.0, dir / bp});
  }
  return seeds;
}

int run_flows(const geoctrl::Config& cfg, const geoctrl::Scenario& sc) {
  using namespace geoctrl;
  FlowBranch br = cfg.flows.branch == "plus"    ? FlowBranch::plus
                  : cfg.flows.branch == "minus" ? FlowBranch::minus
                                                : FlowBranch::full_p;
  auto seeds = characteristic_seeds(sc.metric, cfg.flows.n_trajectories, cfg.seed);
  double max_tau_drift = 0.0, max_p_drift = 0.0;
  json rows = json::array();
  for (size_t i = 0; i < seeds.size(); ++i) {
    PhasePoint w0 = seeds[i];
    if (br == FlowBranch::minus) w0.xi = -w0.xi;  // keep the minus root at -1
    Trajectory traj = integrate_flow(sc.metric, w0, br,
                                     {cfg.flows.s_lo, cfg.flows.s_hi},
                                     cfg.flows.tol);
    double p0 = principal_symbol(sc.metric, w0);
    double tau_drift = 0.0, p_drift = 0.0;
    for (const auto& [s, w] : traj.nodes) {
      tau_drift = std::max(tau_drift, std::abs(w.tau - w0.tau));
      p_drift = std::max(p_drift, std::abs(principal_symbol(sc.metric, w) - p0));
    }
    max_tau_drift = std::max(max_tau_drift, tau_drift);
    max_p_drift = std::max(max_p_drift, p_drift);
    std::string name = "trajectory_" + std::to_string(i) + ".csv";
    write_trajectory_csv(traj, out_path(cfg, name).string());
    rows.push_back(json{{"file", name},
                        {"tau_drift", tau_drift},
                        {"p_drift", p_drift},
                        {"seed", phase_point_json(seeds[i])}});
  }
  bool ok = max_tau_drift <= cfg.flows.drift_tol &&
            max_p_drift <= cfg.flows.drift_tol;
  write_report(cfg, json{{"subcommand", "flows"},
                         {"scenario", sc.name},
                         {"branch", cfg.flows.branch},
                         {"n_trajectories", cfg.flows.n_trajectories},
                         {"max_tau_drift", max_tau_drift},
                         {"max_p_drift", max_p_drift},
                         {"drift_tol", cfg.flows.drift_tol},
                         {"trajectories", rows},
                         {"passed", ok}});
  return ok ? 0 : 1;
}

int run_trapping(const geoctrl::Config& cfg, const geoctrl::Scenario& sc) {
  using namespace geoctrl;
  auto seeds = characteristic_seeds(sc.metric, cfg.trapping.n_seeds, cfg.seed);
  double R = sc.metric.R0 + 1.0;
  int fwd_trapped = 0, bwd_trapped = 0, predicate_mismatch = 0;
  for (const auto& w : seeds) {
    TrapClass tc = classify(sc.metric, w, Branch::plus, R, cfg.trapping.horizon);
    bool fwd = tc.forward == TrapVerdict::trapped;
    bool bwd = tc.backward == TrapVerdict::trapped;
    fwd_trapped += fwd;
    bwd_trapped += bwd;
    if (sc.metric.has_photon_sphere &&
        photon_sphere_trapped(sc.metric, w.x, w.xi) != (fwd && bwd))
      ++predicate_mismatch;
  }
  int n_set = 0;
  if (sc.metric.has_photon_sphere) {
    auto set = sample_trapped_set(sc.metric, cfg.trapping.n_trapped_samples,
                                  cfg.trapping.s_max, cfg.seed);
    n_set = (int)set.size();
    write_phase_points_csv(set, out_path(cfg, "trapped_set.csv").string());
  }
  bool ok = predicate_mismatch == 0 &&
            (sc.metric.has_photon_sphere || fwd_trapped + bwd_trapped == 0);
  write_report(cfg, json{{"subcommand", "trapping"},
                         {"scenario", sc.name},
                         {"n_seeds", cfg.trapping.n_seeds},
                         {"horizon", cfg.trapping.horizon},
                         {"forward_trapped", fwd_trapped},
                         {"backward_trapped", bwd_trapped},
                         {"predicate_mismatch", predicate_mismatch},
                         {"trapped_set_samples", n_set},
                         {"passed", ok}});
  return ok ? 0 : 1;
}

int run_gcc(const geoctrl::Config& cfg, const geoctrl::Scenario& sc) {
  using namespace geoctrl;
  std::vector<PhasePoint> samples;
  if (sc.metric.has_photon_sphere)
    samples = sample_trapped_set(sc.metric, cfg.gcc.n_samples,
                                 sc.s_max_trapped, cfg.seed);
  json report{{"subcommand", "gcc"},
              {"scenario", sc.name},
              {"n_samples", (int)samples.size()},
              {"T", cfg.gcc.T},
              {"threshold", cfg.gcc.threshold}};
  if (samples.empty()) {
    // nothing is trapped, so the control condition holds vacuously
    report["passed"] = true;
    report["Cbar_est"] = nullptr;
    write_report(cfg, report);
    return 0;
  }
  GccReport gr = tgcc_check(sc.metric, sc.damping, samples, cfg.gcc.T,
                            cfg.gcc.threshold);
  report["Cbar_est"] = gr.Cbar_est;
  report["Cbar2"] = gr.Cbar2;
  report["passed"] = gr.passed;

  {
    std::ofstream csv(out_path(cfg, "gcc_samples.csv"));
    csv << "sample,two_sided_average\n";
    csv.precision(17);
    for (size_t i = 0; i < gr.averages.size(); ++i)
      csv << i << "," << gr.averages[i] << "\n";
  }
  if (!sc.damping.time_dependent) {
    auto [tgcc_pass, hit_pass] =
        stationary_gcc_equiv(sc.metric, sc.damping, samples, cfg.gcc.s_max_equiv);
    report["stationary_equiv"] = json{{"tgcc", tgcc_pass},
                                      {"trajectory_hits_damping", hit_pass},
                                      {"agree", tgcc_pass == hit_pass}};
    if (tgcc_pass != hit_pass) report["passed"] = false;
  }
  write_report(cfg, report);
  return report["passed"].get<bool>() ? 0 : 1;
}

int run_escape_verify(const geoctrl::Config& cfg, const geoctrl::Scenario& sc) {
  using namespace geoctrl;
  std::vector<PhasePoint> omegas;
  if (sc.metric.has_photon_sphere)
    omegas = sample_trapped_set(sc.metric, cfg.escape.n_cover,
                                sc.s_max_trapped, cfg.seed);
  double x_max = cfg.escape.x_max > 0.0 ? cfg.escape.x_max : 2.0 * sc.metric.R0;
  EscapeSearchResult res =
      search_escape_function(sc.metric, sc.damping, omegas, sc.consts,
                             sc.decomp, cfg.escape.n_samples, cfg.seed, x_max);

  json triples = json::array();
  double min_triple_residual = 0.0;
  double max_A_over_a = 0.0;
  for (size_t i = 0; i < res.escape.triples.size(); ++i) {
    const auto& tr = res.escape.triples[i];
    TripleCheck chk = verify_local_inequality(tr, 2000, cfg.seed + i);
    min_triple_residual = std::min(min_triple_residual, chk.min_residual);
    max_A_over_a = std::max(max_A_over_a, chk.max_A_over_a);
    triples.push_back(json{{"large", tr.large},
                           {"T_omega", tr.Tw},
                           {"a_omega", tr.a_omega},
                           {"r0", tr.r0},
                           {"r1", tr.r1},
                           {"min_residual", chk.min_residual},
                           {"max_A_over_a", chk.max_A_over_a},
                           {"base", phase_point_json(tr.omega)}});
  }
  bool ok = res.report.positive && min_triple_residual >= -1e-8;
  write_report(cfg,
               json{{"subcommand", "escape-verify"},
                    {"scenario", sc.name},
                    {"sigma", res.escape.sigma},
                    {"kappa", res.escape.kappa},
                    {"Ca", res.escape.Ca},
                    {"sigma_steps", res.sigma_steps},
                    {"eps_in", res.escape.nontrap.eps_in},
                    {"max_active_translates", res.escape.max_active_translates},
                    {"n_samples", res.report.n_samples},
                    {"min_normalized", res.report.min_normalized},
                    {"max_discriminant", res.report.max_discriminant},
                    {"witness", phase_point_json(res.report.witness)},
                    {"min_triple_residual", min_triple_residual},
                    {"max_A_over_a", max_A_over_a},
                    {"triples", triples},
                    {"passed", ok}});
  return ok ? 0 : 1;
}

int run_decay(const geoctrl::Config& cfg, const geoctrl::Scenario& sc) {
  using namespace geoctrl;
  WaveSpec spec;
  spec.L = cfg.decay.L;
  spec.n = cfg.decay.n;
  spec.cfl = cfg.decay.cfl;
  spec.sponge = cfg.decay.sponge;

  RingData rd;
  rd.radius = cfg.decay.ring_radius > 0.0 ? cfg.decay.ring_radius
              : sc.metric.has_photon_sphere ? sc.metric.r_unstable
                                            : 2.0;
  rd.width = cfg.decay.ring_width;
  rd.mode = cfg.decay.ring_mode;
  rd.omega = sc.metric.isotropic_c(rd.radius) * rd.mode / rd.radius;
  auto [u0, v0] = ring_initial_data(rd);

  double c_min = 1.0;
  for (int i = 0; i <= 64; ++i)
    c_min = std::min(c_min, sc.metric.isotropic_c(sc.metric.R0 * i / 64.0));
  double crossing = 2.0 * sc.metric.R0 / c_min;
  double T = cfg.decay.T > 0.0 ? cfg.decay.T : 8.0 * crossing;
  int n_report = std::max(4, cfg.decay.n_report % 2 ? cfg.decay.n_report + 1
                                                    : cfg.decay.n_report);

  DecayReport rep = decay_experiment(sc.metric, sc.damping, spec, u0, v0, T,
                                     n_report);
  {
    std::ofstream csv(out_path(cfg, "decay.csv"));
    csv.precision(17);
    csv << "t,energy,le1_ratio";
    size_t n_ann = rep.partials.empty() ? 0 : rep.partials.front().size();
    for (size_t j = 0; j < n_ann; ++j) csv << ",annulus_" << j;
    csv << "\n";
    for (size_t i = 0; i < rep.times.size(); ++i) {
      csv << rep.times[i] << "," << rep.energy[i] << "," << rep.le1_ratio[i];
      for (double v : rep.partials[i]) csv << "," << v;
      csv << "\n";
    }
  }
  size_t half = rep.times.size() / 2;
  double ratio_half = rep.le1_ratio[half];
  double ratio_full = rep.le1_ratio.back();
  double growth = ratio_half > 0.0 ? ratio_full / ratio_half
                                   : std::numeric_limits<double>::infinity();
  bool ok = true;
  if (cfg.decay.expect == "damped") ok = growth <= 1.05;
  if (cfg.decay.expect == "undamped") ok = growth >= 1.15;
  write_report(cfg, json{{"subcommand", "decay"},
                         {"scenario", sc.name},
                         {"grid_n", spec.n},
                         {"T", T},
                         {"crossing_time", rep.crossing_time},
                         {"E0", rep.E0},
                         {"t_half", rep.times[half]},
                         {"ratio_half", ratio_half},
                         {"ratio_full", ratio_full},
                         {"growth", growth},
                         {"expect", cfg.decay.expect},
                         {"passed", ok}});
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian flows, control conditions, escape functions, and "
               "damped-wave decay on stationary asymptotically flat models"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"flows", "integrate bicharacteristics and check conservation"},
      {"trapping", "classify seeds and sample the trapped set"},
      {"gcc", "verify the control condition along trapped trajectories"},
      {"escape-verify", "build the escape function and verify positivity"},
      {"decay", "run the damped-wave solver and measure decay ratios"},
  };
  for (const auto& [name, desc] : subs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "key=value override (repeatable)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    geoctrl::Config cfg = geoctrl::load_config(config_path, overrides);
    geoctrl::Scenario sc = geoctrl::make_scenario(cfg.scenario);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "flows") return run_flows(cfg, sc);
    if (sub == "trapping") return run_trapping(cfg, sc);
    if (sub == "gcc") return run_gcc(cfg, sc);
    if (sub == "escape-verify") return run_escape_verify(cfg, sc);
    return run_decay(cfg, sc);
  } catch (const geoctrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const geoctrl::Error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
