// Command-line front end: subcommand dispatch, CSV/PGM emission.
//
// Exit codes: 0 success, 1 failed certificate or acceptance check,
// 2 configuration error. Partial outputs are removed on failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "shearmix/certificates.hpp"
#include "shearmix/config.hpp"
#include "shearmix/control.hpp"
#include "shearmix/csv.hpp"
#include "shearmix/mixing.hpp"
#include "shearmix/noise.hpp"
#include "shearmix/parallel.hpp"
#include "shearmix/spectra.hpp"

namespace fs = std::filesystem;
using namespace shearmix;

namespace {

struct OutputTracker {
  std::vector<fs::path> written;
  void add(const fs::path& p) { written.push_back(p); }
  void discard_all() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

int run_simulate(const RunConfig& cfg, OutputTracker& track) {
  fs::path path = fs::path(cfg.output_dir) / "orbit.csv";
  CsvWriter csv(path, "step,x1,x2");
  track.add(path);
  TorusPoint x{wrap(cfg.x1), wrap(cfg.x2)};
  PhaseCursor cur(derive_stream(Seed{cfg.seed}, 0));
  csv.row({"0", format_double(x.x1), format_double(x.x2)});
  for (int k = 1; k <= cfg.steps; ++k) {
    x = apply_map(cur.next(), ShearParams{cfg.tau}, x);
    csv.row({std::to_string(k), format_double(x.x1), format_double(x.x2)});
  }
  return 0;
}

int run_lyapunov(const RunConfig& cfg, OutputTracker& track) {
  LyapunovEstimate est =
      lyapunov_estimate(ShearParams{cfg.tau}, cfg.lyap_steps, Seed{cfg.seed}, cfg.ensemble);
  fs::path path = fs::path(cfg.output_dir) / "lyapunov.csv";
  CsvWriter csv(path, "lambda1,lambda2,steps,ensemble,ci_halfwidth");
  track.add(path);
  csv.row({format_double(est.lambda1), format_double(est.lambda2), std::to_string(est.steps),
           std::to_string(cfg.ensemble), format_double(est.ci_halfwidth)});
  std::cout << "lambda1 = " << format_double(est.lambda1) << " +- "
            << format_double(est.ci_halfwidth) << " (95% bootstrap)\n";
  return 0;
}

int run_spectrum(const RunConfig& cfg, OutputTracker& track) {
  MomentSpectrumReport rep =
      moment_spectrum(cfg.q_list, ShearParams{cfg.tau}, cfg.nx, cfg.ny, cfg.nv, cfg.mc_samples,
                      cfg.max_iter, cfg.tol, Seed{cfg.seed});
  fs::path path = fs::path(cfg.output_dir) / "moment_spectrum.csv";
  CsvWriter csv(path, "q,r_q,iterations,residual,converged");
  track.add(path);
  for (std::size_t i = 0; i < rep.q_values.size(); ++i) {
    csv.row({format_double(rep.q_values[i]), format_double(rep.r_of_q[i]),
             std::to_string(rep.iterations[i]), format_double(rep.residual[i]),
             rep.converged[i] ? "true" : "false"});
  }
  return 0;
}

int run_certify(const RunConfig& cfg, OutputTracker& track) {
  std::vector<CertificateReport> reports = run_all_certificates();
  fs::path path = fs::path(cfg.output_dir) / "certificates.csv";
  CsvWriter csv(path,
                "name,expected_rank,rank,min_kept_sigma,max_dropped_sigma,oracle_discrepancy,"
                "passed");
  track.add(path);
  bool all_passed = true;
  for (const auto& r : reports) {
    csv.row({r.name, std::to_string(r.expected_rank), std::to_string(r.rank),
             format_double(r.min_kept_sigma), format_double(r.max_dropped_sigma),
             format_double(r.oracle_discrepancy), r.passed ? "true" : "false"});
    std::cout << (r.passed ? "[pass] " : "[FAIL] ") << r.name << " rank " << r.rank << "/"
              << r.expected_rank << " oracle " << format_double(r.oracle_discrepancy) << "\n";
    all_passed = all_passed && r.passed;
  }
  return all_passed ? 0 : 1;
}

int run_steer(const RunConfig& cfg, OutputTracker& track) {
  ShearParams tau{cfg.tau};
  SteeringPlan plan;
  if (cfg.mode == "one") {
    plan = steer_one_point({wrap(cfg.x1), wrap(cfg.x2)}, {wrap(cfg.y1), wrap(cfg.y2)}, tau);
  } else if (cfg.mode == "projective") {
    double n0 = std::hypot(cfg.v1, cfg.v2), n1 = std::hypot(cfg.vt1, cfg.vt2);
    ProjectivePoint p{{wrap(cfg.x1), wrap(cfg.x2)}, cfg.v1 / n0, cfg.v2 / n0};
    ProjectivePoint t{{wrap(cfg.y1), wrap(cfg.y2)}, cfg.vt1 / n1, cfg.vt2 / n1};
    plan = steer_projective(p, t, cfg.eps, tau);
  } else if (cfg.mode == "two") {
    plan = steer_two_point({wrap(cfg.x1), wrap(cfg.x2)}, {wrap(cfg.y1), wrap(cfg.y2)},
                           {wrap(cfg.xt1), wrap(cfg.xt2)}, {wrap(cfg.yt1), wrap(cfg.yt2)},
                           cfg.eps, tau);
  } else {
    throw ConfigError("invalid value for `mode`: " + cfg.mode);
  }
  fs::path path = fs::path(cfg.output_dir) / "steer.csv";
  CsvWriter csv(path, "step,w1,w2");
  track.add(path);
  for (std::size_t i = 0; i < plan.phases.size(); ++i) {
    csv.row({std::to_string(i + 1), format_double(plan.phases[i].w1),
             format_double(plan.phases[i].w2)});
  }
  csv.row({"achieved_error", format_double(plan.achieved_error), ""});
  if (!plan.ok) {
    std::cerr << "steering failed: " << plan.note << "\n";
    return 1;
  }
  std::cout << "plan of " << plan.steps << " steps, replay error "
            << format_double(plan.achieved_error) << "\n";
  return 0;
}

int run_mix(const RunConfig& cfg, OutputTracker& track) {
  ShearParams tau{cfg.tau};
  ScalarFn rho0 = [](double x1, double) { return std::cos(x1); };

  std::vector<PhasePair> phases;
  PhaseCursor cur(derive_stream(Seed{cfg.seed}, 0));
  for (int k = 0; k < cfg.steps; ++k) phases.push_back(cur.next());

  fs::path mpath = fs::path(cfg.output_dir) / "mixing.csv";
  CsvWriter csv(mpath, "step,hs_norm");
  track.add(mpath);

  const int stride = (cfg.steps + 5) / 6;  // six snapshot panels
  int emitted = 0;
  for (int m = 0; m <= cfg.steps; ++m) {
    std::vector<PhasePair> prefix(phases.begin(), phases.begin() + m);
    ScalarGridField f = advect_exact(rho0, prefix, tau, cfg.grid);
    csv.row({std::to_string(m), format_double(hs_norm(f, cfg.s))});
    if (m % stride == 0 && emitted < 6) {
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%04d.pgm", m);
      fs::path spath = fs::path(cfg.output_dir) / name;
      write_bytes(spath, snapshot(f));
      track.add(spath);
      ++emitted;
    }
  }
  return 0;
}

int run_drift(const RunConfig& cfg, OutputTracker& track) {
  ShearParams tau{cfg.tau};
  PowerIterationResult psi = twisted_power_iteration(cfg.p, tau, cfg.nx, cfg.ny, cfg.nv,
                                                     cfg.mc_samples, cfg.max_iter, cfg.tol,
                                                     Seed{cfg.seed});
  DriftCheckReport rep = two_point_drift_check(cfg.p, cfg.s_star, tau, cfg.pairs, cfg.mc_per_pair,
                                               psi.psi, Seed{cfg.seed});
  fs::path path = fs::path(cfg.output_dir) / "drift.csv";
  CsvWriter csv(path, "pair_id,V_before,EV_after,log_ratio");
  track.add(path);
  for (int k = 0; k < rep.samples; ++k) {
    csv.row({std::to_string(k), format_double(rep.v_before[k]), format_double(rep.ev_after[k]),
             format_double(rep.log_ratio[k])});
  }
  std::cout << "mean_log_ratio = " << format_double(rep.mean_log_ratio) << " +- "
            << format_double(rep.ci) << ", gamma_hat = " << format_double(rep.gamma_hat) << "\n";
  return 0;
}

void print_usage() {
  std::cerr << "usage: shearmix <simulate|lyapunov|spectrum|certify|steer|mix|drift> "
               "[--key value ...] [--config file]\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage();
    return 2;
  }
  std::string sub = argv[1];
  std::vector<std::string> args(argv + 2, argv + argc);

  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  if (cfg.threads > 0) set_thread_count(cfg.threads);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);

  OutputTracker track;
  try {
    if (sub == "simulate") return run_simulate(cfg, track);
    if (sub == "lyapunov") return run_lyapunov(cfg, track);
    if (sub == "spectrum") return run_spectrum(cfg, track);
    if (sub == "certify") {
      int rc = run_certify(cfg, track);
      if (rc != 0) track.discard_all();
      return rc;
    }
    if (sub == "steer") {
      int rc = run_steer(cfg, track);
      if (rc != 0) track.discard_all();
      return rc;
    }
    if (sub == "mix") return run_mix(cfg, track);
    if (sub == "drift") return run_drift(cfg, track);
    print_usage();
    return 2;
  } catch (const ConfigError& e) {
    track.discard_all();
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    track.discard_all();
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    track.discard_all();
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
