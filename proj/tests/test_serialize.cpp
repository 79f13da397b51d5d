#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "zollfunk/serialize.hpp"

using namespace zollfunk;
using namespace zollfunk::testing;

TEST_CASE("harmonic field JSON round trip is exact") {
  HarmonicField f = random_field(2, 6, 1.3, 91);
  HarmonicField g = harmonic_field_from_json(to_json(f));
  CHECK(g.n() == f.n());
  CHECK(g.degree() == f.degree());
  CHECK((g.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.parity() == f.parity());

  HarmonicField o = random_field(3, 4, 0.7, 92, Parity::Odd);
  HarmonicField o2 = harmonic_field_from_json(to_json(o));
  CHECK((o2.coeffs() - o.coeffs()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(o2.parity() == Parity::Odd);
}

TEST_CASE("malformed input is reported") {
  CHECK_THROWS(harmonic_field_from_json("{\"schema\": \"nope\"}"));
  CHECK_THROWS_AS(harmonic_field_from_json(
                      "{\"schema\": \"zollfunk.harmonic_field.v1\", \"n\": 2, \"L\": 2, "
                      "\"parity\": \"any\", \"coeffs\": [1, 2]}"),
                  UsageError);
}

TEST_CASE("tangent field and state round trips") {
  EquatorFamily fam = EquatorFamily::build(2, 6, 6, 32);
  TangentGraphField phi = random_tangent(fam, 5, 0.05, 93, TangentSubspace::ZeroOdd);
  TangentGraphField back = tangent_field_from_json(fam, to_json(fam, phi));
  CHECK((back.coeffs() - phi.coeffs()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.subspace() == TangentSubspace::ZeroOdd);

  ZollState st;
  st.rho = random_field(2, 6, 0.1, 94);
  st.phi = phi.per_rep();
  st.phi_fit = phi;
  st.diag.lambda1_inf = 1.5e-9;
  st.diag.iterations = 3;
  ZollState st2 = zoll_state_from_json(fam, to_json(fam, st));
  CHECK((st2.rho.coeffs() - st.rho.coeffs()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(st2.phi.size() == st.phi.size());
  for (size_t i = 0; i < st.phi.fns.size(); ++i)
    CHECK((st2.phi.fns[i].modes() - st.phi.fns[i].modes()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(st2.diag.lambda1_inf == st.diag.lambda1_inf);
  CHECK(st2.diag.iterations == 3);

  FamilyParams p = family_params_from_json(to_json(fam, st));
  CHECK(p.n == 2);
  CHECK(p.Lg == 6);
  CHECK(p.chart_band == 6);
}

TEST_CASE("direction grid serialization carries reps and weights") {
  DirectionGrid g = DirectionGrid::make(2, 6);
  const std::string j = to_json(g);
  CHECK(j.find("zollfunk.direction_grid.v1") != std::string::npos);
  CHECK(j.find("\"band_limit\": 6") != std::string::npos);
  // every rep appears with its weight
  CHECK(j.find("\"w\":") != std::string::npos);
}

TEST_CASE("CSV writers are stable and carry headers") {
  std::ostringstream os;
  write_iteration_csv_header(os);
  LambdaValue lam;
  lam.lambda1_inf = 0.125;
  lam.lambda2_inf = 1e-3;
  lam.area.mean = 2 * M_PI;
  lam.area.spread = 0.5;
  write_iteration_csv_row(os, 2, lam);
  const std::string out = os.str();
  CHECK(out.find("iter,lambda1_inf,lambda2_inf,area_mean,area_spread\n") == 0);
  CHECK(out.find("2,0.125,0.001,") != std::string::npos);
}
