// zollfunk command line: constructs conformal sphere metrics carrying Zoll
// families of minimal hypersurfaces and checks the operator identities of
// the underlying transform pipeline.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include <random>

#include "zollfunk/killing.hpp"
#include "zollfunk/parallel.hpp"
#include "zollfunk/serialize.hpp"

using namespace zollfunk;
using nlohmann::json;

namespace {

struct RunConfig {
  int n = 2;
  int L = 8;
  int Lg = 12;
  int Q = 64;
  int chart_band = -1;  // default L + 6
  int J = 10;
  double t = 0.05;
  double tol = 1e-8;
  int max_iter = 20;
  std::string seed = "guillemin-xyz";
  int threads = 1;

  void validate() const {
    if (n != 2 && n != 3) throw UsageError("config: n must be 2 or 3");
    if (L < 2) throw UsageError("config: L must be >= 2");
    if (Lg < 4) throw UsageError("config: L_g must be >= 4");
    if (n == 2 && Q < 4 * effective_chart_band() + 2)
      throw UsageError("config: Q too small for the chart band");
    if (tol <= 0) throw UsageError("config: tol must be positive");
    if (max_iter < 1) throw UsageError("config: max_iter must be >= 1");
    if (threads < 1) throw UsageError("config: threads must be >= 1");
  }
  int effective_chart_band() const { return chart_band > 0 ? chart_band : L + 6; }

  static RunConfig from_file(const std::string& path) {
    RunConfig c;
    const json j = json::parse(read_text_file(path));
    if (j.contains("n")) c.n = j.at("n");
    if (j.contains("L")) c.L = j.at("L");
    if (j.contains("L_g")) c.Lg = j.at("L_g");
    if (j.contains("Q")) c.Q = j.at("Q");
    if (j.contains("chart_band")) c.chart_band = j.at("chart_band");
    if (j.contains("J")) c.J = j.at("J");
    if (j.contains("t")) c.t = j.at("t");
    if (j.contains("tol")) c.tol = j.at("tol");
    if (j.contains("max_iter")) c.max_iter = j.at("max_iter");
    if (j.contains("seed")) c.seed = j.at("seed");
    if (j.contains("threads")) c.threads = j.at("threads");
    return c;
  }
};

EquatorFamily build_family(const RunConfig& c) {
  return EquatorFamily::build(c.n, c.L, c.Lg, c.Q, c.effective_chart_band());
}

HarmonicField seed_field(const RunConfig& c) {
  if (c.seed == "guillemin-xyz") {
    if (c.n != 2) throw UsageError("preset guillemin-xyz needs n = 2");
    HarmonicField f =
        HarmonicField::project(2, c.L, [](const Vec& p) { return p[0] * p[1] * p[2]; });
    f *= 1.0 / f.l2_norm();
    return f;
  }
  // otherwise a harmonic-field JSON file
  HarmonicField f = harmonic_field_from_json(read_text_file(c.seed));
  if (f.n() != c.n) throw UsageError("seed field dimension does not match config");
  return f.truncated(c.L);
}

int cmd_deform(const std::string& config_path, const std::string& out_prefix) {
  RunConfig cfg = RunConfig::from_file(config_path);
  cfg.validate();
  set_thread_cap(cfg.threads);
  EquatorFamily fam = build_family(cfg);
  HarmonicField rho_dot = seed_field(cfg);

  std::ofstream csv(out_prefix + "_iters.csv", std::ios::binary);
  if (!csv) throw UsageError("cannot write " + out_prefix + "_iters.csv");
  write_iteration_csv_header(csv);

  DeformOptions opt;
  opt.t = cfg.t;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.J = cfg.J;
  opt.trace = [&](int iter, const LambdaValue& lam) { write_iteration_csv_row(csv, iter, lam); };

  ZollState st = deform(fam, rho_dot, opt);
  write_text_file(out_prefix + "_state.json", to_json(fam, st));
  ZollReport rep = verify_zoll(fam, st.rho, st.phi, 2);
  write_text_file(out_prefix + "_report.json", report_to_json(rep));
  std::printf("converged in %d iterations: |Lambda1| = %.3e, |Lambda2| = %.3e\n",
              st.diag.iterations, st.diag.lambda1_inf, st.diag.lambda2_inf);
  std::printf("verified at doubled resolution: max|H| = %.3e, area spread = %.3e\n",
              rep.max_el_residual, rep.area_spread);
  return 0;
}

int cmd_verify(const std::string& state_path, const std::string& out_path,
               const std::string& csv_path) {
  const std::string text = read_text_file(state_path);
  FamilyParams p = family_params_from_json(text);
  EquatorFamily fam = EquatorFamily::build(p.n, p.L, p.Lg, p.Q, p.chart_band);
  ZollState st = zoll_state_from_json(fam, text);
  ZollReport rep = verify_zoll(fam, st.rho, st.phi, 2);
  if (!out_path.empty()) write_text_file(out_path, report_to_json(rep));
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "rep,el_residual\n";
    for (int i = 0; i < fam.grid.size(); ++i) {
      EquatorChart fine = EquatorChart::build(fam.grid.reps[static_cast<size_t>(i)], 2 * fam.Q,
                                              fam.n, fam.chart_band);
      Eigen::VectorXd dens =
          euler_lagrange_density(st.rho, fine, st.phi.fns[static_cast<size_t>(i)]);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%d,%.17g\n", i, dens.cwiseAbs().maxCoeff());
      csv << buf;
    }
  }
  std::printf("max|H| = %.3e, area spread = %.3e, center = %.3e, injectivity = %.3f\n",
              rep.max_el_residual, rep.area_spread, rep.center_norm, rep.gauss_injectivity);
  return 0;
}

int cmd_funk(const std::string& field_path, const std::string& config_path,
             const std::string& out_path) {
  RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
  cfg.validate();
  set_thread_cap(cfg.threads);
  EquatorFamily fam = build_family(cfg);
  HarmonicField f = harmonic_field_from_json(read_text_file(field_path));
  if (f.n() != fam.n) throw UsageError("field dimension does not match config");
  HarmonicField rho(fam.n, fam.L);
  EquatorFieldSet zero;
  for (int i = 0; i < fam.grid.size(); ++i)
    zero.fns.emplace_back(fam.n, fam.chart_band);
  std::vector<double> vals = funk_forward(rho, fam, zero, f);
  json j;
  j["schema"] = "zollfunk.funk_values.v1";
  j["grid"] = {{"n", fam.n}, {"L_g", fam.grid.band_limit}};
  j["values"] = vals;
  write_text_file(out_path, j.dump(2));
  std::printf("wrote %zu transform values to %s\n", vals.size(), out_path.c_str());
  return 0;
}

int cmd_kernel(const std::string& config_path, const std::string& out_path) {
  RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
  cfg.validate();
  set_thread_cap(cfg.threads);
  if (cfg.n != 2) throw UsageError("kernel assembly is n = 2 only");
  EquatorFamily fam = build_family(cfg);
  HarmonicField rho(fam.n, fam.L);
  TangentGraphField phi(fam, cfg.J, TangentSubspace::ZeroOdd);
  KernelMatrix M = assemble_kernel_operator(rho, fam, phi);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + out_path);
  write_kernel_csv(out, M);
  std::printf("kernel matrix %dx%d written (condition %.3e)\n", static_cast<int>(M.K.rows()),
              static_cast<int>(M.K.cols()), M.condition);
  return 0;
}

int cmd_killing(const std::string& preset, const std::string& out_path,
                const std::string& csv_path) {
  std::array<double, 3> alpha{1.1, 1.05, 1.02};
  std::array<double, 3> beta{0.05, 0.03, 0.01};
  if (preset != "eqdiagonal") throw UsageError("unknown killing preset: " + preset);
  KillingTwoTensor k = KillingTwoTensor::diagonal_s3(alpha, beta);
  MetricField g = MetricField::from_killing(k);

  RigidityResult rig = rigidity_map({alpha[0], alpha[1], alpha[2], beta[0], beta[1], beta[2]});
  const double tensor_residual = equator_residual(g, 200, 2026);
  std::mt19937 rng(2027);
  std::normal_distribution<double> gauss;
  double mc = 0.0;
  for (int s = 0; s < 10; ++s) {
    Vec v, p;
    for (int i = 0; i < 4; ++i) v[i] = gauss(rng);
    v = normalized(v);
    for (int i = 0; i < 4; ++i) p[i] = gauss(rng);
    p = normalized(reject(p, v));
    mc = std::max(mc, std::fabs(equator_mean_curvature(g, v, p)));
  }

  json j;
  j["schema"] = "zollfunk.killing_report.v1";
  j["preset"] = preset;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["killing_residual"] = k.killing_residual(200, 2028);
  j["equator_tensor_residual"] = tensor_residual;
  j["equator_mean_curvature_max"] = mc;
  j["rigidity_kernel_dim"] = rig.kernel_dim;
  j["rigidity_smallest_sv"] = rig.smallest_sv;
  if (!out_path.empty()) write_text_file(out_path, j.dump(2));

  if (!csv_path.empty()) {
    // metric samples for external plotting
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "p0,p1,p2,p3,g11,g12,g13,g22,g23,g33\n";
    std::mt19937 rng2(2029);
    for (int s = 0; s < 200; ++s) {
      Vec p;
      for (int i = 0; i < 4; ++i) p[i] = gauss(rng2);
      p = normalized(p);
      const std::vector<Vec> tan = complement_basis({p}, 4);
      char buf[320];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    p[0], p[1], p[2], p[3], g.value(p, tan[0], tan[0]), g.value(p, tan[0], tan[1]),
                    g.value(p, tan[0], tan[2]), g.value(p, tan[1], tan[1]),
                    g.value(p, tan[1], tan[2]), g.value(p, tan[2], tan[2]));
      csv << buf;
    }
  }
  std::printf("rigidity kernel dim = %d (smallest sv %.3e); tensor residual %.3e; max |H| %.3e\n",
              rig.kernel_dim, rig.smallest_sv, tensor_residual, mc);
  return 0;
}

int cmd_spectrum(int L, const std::string& config_path, const std::string& out_path) {
  RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
  cfg.validate();
  EquatorFamily fam = build_family(cfg);
  if (L > fam.grid.band_limit) throw UsageError("spectrum: L exceeds the grid band");
  std::vector<double> lam = round_funk_spectrum(fam, L);
  json j;
  j["schema"] = "zollfunk.funk_spectrum.v1";
  j["n"] = fam.n;
  j["eigenvalues"] = lam;
  write_text_file(out_path, j.dump(2));
  std::printf("lambda_0 = %.15g (2 pi = %.15g)\n", lam[0], 2.0 * M_PI);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zoll families of minimal hypersurfaces on the sphere"};
  app.require_subcommand(1);

  std::string config, out_prefix = "deform", state_path, out_path, csv_path, field_path;
  std::string preset = "eqdiagonal";
  int L = 8;
  int threads = 1;
  app.add_option("--threads", threads, "parallelism cap (results do not depend on it)");

  auto* deform_cmd = app.add_subcommand("deform", "run the corrector toward a Zoll family");
  deform_cmd->add_option("--config", config, "JSON run configuration")->required();
  deform_cmd->add_option("--out", out_prefix, "output prefix (_iters.csv, _state.json, _report.json)");

  auto* verify_cmd = app.add_subcommand("verify", "re-verify a state at doubled resolution");
  verify_cmd->add_option("--state", state_path, "state JSON file")->required();
  verify_cmd->add_option("--out", out_path, "report JSON output");
  verify_cmd->add_option("--csv", csv_path, "per-rep residual CSV output");

  auto* funk_cmd = app.add_subcommand("funk", "forward transform of a field over the family");
  funk_cmd->add_option("--field", field_path, "harmonic field JSON")->required();
  funk_cmd->add_option("--config", config, "JSON run configuration");
  funk_cmd->add_option("--out", out_path, "values JSON output")->required();

  auto* kernel_cmd = app.add_subcommand("kernel", "assemble the transform kernel matrix");
  kernel_cmd->add_option("--config", config, "JSON run configuration");
  kernel_cmd->add_option("--out", out_path, "kernel CSV output")->required();

  auto* killing_cmd = app.add_subcommand("killing", "Killing-tensor metric with minimal equators");
  killing_cmd->add_option("--preset", preset, "tensor preset (eqdiagonal)");
  killing_cmd->add_option("--out", out_path, "report JSON output");
  killing_cmd->add_option("--csv", csv_path, "metric sample CSV output");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "round transform eigenvalues");
  spectrum_cmd->add_option("--L", L, "maximum degree");
  spectrum_cmd->add_option("--config", config, "JSON run configuration");
  spectrum_cmd->add_option("--out", out_path, "spectrum JSON output")->required();

  try {
    app.parse(argc, argv);
    set_thread_cap(threads);
    if (deform_cmd->parsed()) return cmd_deform(config, out_prefix);
    if (verify_cmd->parsed()) return cmd_verify(state_path, out_path, csv_path);
    if (funk_cmd->parsed()) return cmd_funk(field_path, config, out_path);
    if (kernel_cmd->parsed()) return cmd_kernel(config, out_path);
    if (killing_cmd->parsed()) return cmd_killing(preset, out_path, csv_path);
    if (spectrum_cmd->parsed()) return cmd_spectrum(L, config, out_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
