#include "zollfunk/serialize.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "zollfunk/errors.hpp"

namespace zollfunk {

using nlohmann::json;

namespace {

std::string parity_name(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "any";
  }
}

Parity parity_from(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  if (s == "any") return Parity::Any;
  throw UsageError("unknown parity: " + s);
}

json field_json(const HarmonicField& f) {
  json j;
  j["schema"] = "zollfunk.harmonic_field.v1";
  j["n"] = f.n();
  j["L"] = f.degree();
  j["parity"] = parity_name(f.parity());
  // coefficient order: degree blocks l = 0..L, row-major within each block
  j["coeffs"] = std::vector<double>(f.coeffs().data(), f.coeffs().data() + f.size());
  return j;
}

HarmonicField field_from(const json& j) {
  if (j.at("schema") != "zollfunk.harmonic_field.v1")
    throw UsageError("harmonic field: unexpected schema");
  const int n = j.at("n");
  const int L = j.at("L");
  std::vector<double> c = j.at("coeffs");
  if (static_cast<int>(c.size()) != HarmonicBasis::total_size(n, L))
    throw UsageError("harmonic field: coefficient count mismatch");
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  return HarmonicField(n, L, std::move(v), parity_from(j.at("parity")));
}

json tangent_json(const EquatorFamily& fam, const TangentGraphField& phi) {
  json j;
  j["schema"] = "zollfunk.tangent_graph_field.v1";
  j["grid_ref"] = {{"n", fam.n}, {"L", fam.L}, {"L_g", fam.grid.band_limit},
                   {"Q", fam.Q}, {"chart_band", fam.chart_band}};
  j["subspace"] = phi.subspace() == TangentSubspace::ZeroOdd ? "zero_odd" : "star_odd";
  j["joint_degree"] = phi.joint_degree();
  j["global_coeffs"] = std::vector<double>(phi.coeffs().data(), phi.coeffs().data() + phi.coeffs().size());
  json reps = json::array();
  for (const auto& fn : phi.per_rep().fns)
    reps.push_back(std::vector<double>(fn.modes().data(), fn.modes().data() + fn.size()));
  j["per_rep_modes"] = reps;
  return j;
}

TangentGraphField tangent_from(const EquatorFamily& fam, const json& j) {
  if (j.at("schema") != "zollfunk.tangent_graph_field.v1")
    throw UsageError("tangent field: unexpected schema");
  const TangentSubspace sub =
      j.at("subspace") == "zero_odd" ? TangentSubspace::ZeroOdd : TangentSubspace::StarOdd;
  std::vector<double> c = j.at("global_coeffs");
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  return TangentGraphField::from_coeffs(fam, j.at("joint_degree"), std::move(v), sub, false);
}

json state_json(const EquatorFamily& fam, const ZollState& st) {
  json j;
  j["schema"] = "zollfunk.zoll_state.v1";
  j["family"] = {{"n", fam.n}, {"L", fam.L}, {"L_g", fam.grid.band_limit},
                 {"Q", fam.Q}, {"chart_band", fam.chart_band}};
  j["rho"] = field_json(st.rho);
  json reps = json::array();
  for (const auto& fn : st.phi.fns)
    reps.push_back(std::vector<double>(fn.modes().data(), fn.modes().data() + fn.size()));
  j["phi_per_rep_modes"] = reps;
  if (st.phi_fit.valid()) j["phi_fit"] = tangent_json(fam, st.phi_fit);
  j["diagnostics"] = {{"lambda1_inf", st.diag.lambda1_inf},
                      {"lambda2_inf", st.diag.lambda2_inf},
                      {"area_mean", st.diag.area_mean},
                      {"area_spread", st.diag.area_spread},
                      {"iterations", st.diag.iterations}};
  return j;
}

}  // namespace

std::string to_json(const HarmonicField& f) { return field_json(f).dump(2); }

HarmonicField harmonic_field_from_json(const std::string& text) {
  return field_from(json::parse(text));
}

std::string to_json(const DirectionGrid& grid) {
  json j;
  j["schema"] = "zollfunk.direction_grid.v1";
  j["n"] = grid.n;
  j["band_limit"] = grid.band_limit;
  json reps = json::array();
  for (size_t i = 0; i < grid.reps.size(); ++i) {
    json p = json::array();
    for (int d = 0; d <= grid.n; ++d) p.push_back(grid.reps[i][d]);
    reps.push_back({{"v", p}, {"w", grid.weights[i]}});
  }
  j["reps"] = reps;
  return j.dump(2);
}

std::string to_json(const EquatorFamily& fam, const TangentGraphField& phi) {
  return tangent_json(fam, phi).dump(2);
}

TangentGraphField tangent_field_from_json(const EquatorFamily& fam, const std::string& text) {
  return tangent_from(fam, json::parse(text));
}

std::string to_json(const EquatorFamily& fam, const ZollState& state) {
  return state_json(fam, state).dump(2);
}

ZollState zoll_state_from_json(const EquatorFamily& fam, const std::string& text) {
  const json j = json::parse(text);
  if (j.at("schema") != "zollfunk.zoll_state.v1") throw UsageError("state: unexpected schema");
  ZollState st;
  st.rho = field_from(j.at("rho"));
  for (const auto& modes : j.at("phi_per_rep_modes")) {
    std::vector<double> m = modes;
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
    st.phi.fns.emplace_back(fam.n, fam.chart_band, std::move(v));
  }
  if (st.phi.size() != fam.grid.size()) throw UsageError("state: rep count mismatch with family");
  if (j.contains("phi_fit")) st.phi_fit = tangent_from(fam, j.at("phi_fit"));
  const auto& d = j.at("diagnostics");
  st.diag.lambda1_inf = d.at("lambda1_inf");
  st.diag.lambda2_inf = d.at("lambda2_inf");
  st.diag.area_mean = d.at("area_mean");
  st.diag.area_spread = d.at("area_spread");
  st.diag.iterations = d.at("iterations");
  return st;
}

FamilyParams family_params_from_json(const std::string& text) {
  const json j = json::parse(text);
  const json& f = j.contains("family") ? j.at("family") : j.at("grid_ref");
  FamilyParams p;
  p.n = f.at("n");
  p.L = f.at("L");
  p.Lg = f.at("L_g");
  p.Q = f.at("Q");
  p.chart_band = f.at("chart_band");
  return p;
}

std::string report_to_json(const ZollReport& rep) {
  json j;
  j["schema"] = "zollfunk.zoll_report.v1";
  j["max_el_residual"] = rep.max_el_residual;
  j["area_mean"] = rep.area_mean;
  j["area_spread"] = rep.area_spread;
  j["center_norm"] = rep.center_norm;
  j["gauss_injectivity"] = rep.gauss_injectivity;
  return j.dump(2);
}

void write_kernel_csv(std::ostream& os, const KernelMatrix& M) {
  os << "i,j,value\n";
  char buf[64];
  for (int i = 0; i < M.K.rows(); ++i)
    for (int j = 0; j < M.K.cols(); ++j) {
      const double v = i == j ? M.diag_k[i] : M.K(i, j);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", i, j, v);
      os << buf;
    }
}

void write_iteration_csv_header(std::ostream& os) {
  os << "iter,lambda1_inf,lambda2_inf,area_mean,area_spread\n";
}

void write_iteration_csv_row(std::ostream& os, int iter, const LambdaValue& lam) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", iter, lam.lambda1_inf,
                lam.lambda2_inf, lam.area.mean, lam.area.spread);
  os << buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write file: " + path);
  out << content;
}

}  // namespace zollfunk
