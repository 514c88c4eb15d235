// Copyright 2026 The nambu-dyn Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "nambu/dynamics.hpp"
#include "nambu/error.hpp"
#include "nambu/random.hpp"

namespace nambu {
namespace {

Matrix unitary(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector phase = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix conjugate(const Matrix& h, const Matrix& rho, double t) {
  const Matrix u = unitary(h, t);
  return u * rho * u.adjoint();
}

IntegratorConfig config(double dt, double t_end, int record_every = 1) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = record_every;
  return c;
}

TEST(Rk4, FourthOrderOnScalarExponential) {
  const Rhs f = [](const Matrix& y) -> Matrix { return cplx(-1.0, 2.0) * y; };
  const Matrix y0 = Matrix::Identity(1, 1);
  const cplx exact = std::exp(cplx(-1.0, 2.0));
  const double e1 = std::abs(propagate(f, y0, 1.0, 0.02)(0, 0) - exact);
  const double e2 = std::abs(propagate(f, y0, 1.0, 0.01)(0, 0) - exact);
  EXPECT_GT(e1 / e2, 14.0);
  EXPECT_LT(e1 / e2, 18.0);
}

TEST(Rk4, PropagateShortensLastStep) {
  const Rhs f = [](const Matrix& y) -> Matrix { return -y; };
  const Matrix y = propagate(f, Matrix::Identity(1, 1), 0.25, 0.1);
  EXPECT_NEAR(y(0, 0).real(), std::exp(-0.25), 2e-7);
}

TEST(Integrate, LinearFlowMatchesUnitaryConjugation) {
  Rng rng(1);
  const Matrix h = random_hermitian(rng, 4);
  const DensityMatrix rho0(random_mixed_state(rng, 4));
  const Trajectory traj = integrate(BracketSpec::three(Operator(h), Generator::casimir(2, 0.5)), rho0, config(1e-3, 1.0));
  EXPECT_LT(max_abs(traj.final_state().matrix() - conjugate(h, rho0.matrix(), 1.0)), 1e-10);
}

TEST(Integrate, LandsExactlyOnFinalTime) {
  Rng rng(2);
  const BracketSpec spec = BracketSpec::three(Operator(random_hermitian(rng, 3)), Generator::casimir(2, 0.5));
  const Trajectory traj = integrate(spec, DensityMatrix(random_mixed_state(rng, 3)), config(0.03, 0.1, 2));
  EXPECT_EQ(traj.times.front(), 0.0);
  EXPECT_EQ(traj.times.back(), 0.1);
  EXPECT_EQ(traj.states.size(), traj.times.size());
  EXPECT_EQ(traj.casimirs.size(), traj.times.size());
}

TEST(Integrate, PureStatesFollowUnitaryUnderPowerFlows) {
  // On projectors rho^k = rho, so -i[H, rho^k] evolves like -i[H, rho].
  Rng rng(3);
  const Matrix h = random_hermitian(rng, 4);
  const DensityMatrix rho0 = DensityMatrix::pure(random_state_vector(rng, 4));
  for (int k : {3, 4}) {
    const BracketSpec spec = BracketSpec::three(Operator(h), Generator::casimir(k, 1.0 / k));
    const Trajectory traj = integrate(spec, rho0, config(1e-3, 1.0, 100));
    EXPECT_LT(max_abs(traj.final_state().matrix() - conjugate(h, rho0.matrix(), 1.0)), 1e-9) << "k=" << k;
  }
}

TEST(Integrate, NonlinearFlowConservesCasimirsAndSpectrum) {
  Rng rng(4);
  const BracketSpec spec = BracketSpec::three(Operator(random_hermitian(rng, 4)), Generator::casimir(3, 1.0 / 3.0));
  const Trajectory traj = integrate(spec, DensityMatrix(random_mixed_state(rng, 4)), config(1e-3, 2.0, 50));
  for (int k = 1; k <= kTrackedCasimirs; ++k) EXPECT_LT(casimir_drift(traj, k), 1e-10);
  EXPECT_LT(spectrum_drift(traj), 1e-9);
  EXPECT_TRUE(traj.diagnostics.flags.empty());
}

TEST(Integrate, AdaptiveMatchesExact) {
  Rng rng(5);
  const Matrix h = random_hermitian(rng, 3);
  const DensityMatrix rho0(random_mixed_state(rng, 3));
  IntegratorConfig cfg = config(0.1, 2.0);
  cfg.method = Method::RK4Adaptive;
  cfg.adaptive_tol = 1e-11;
  const Trajectory traj = integrate(BracketSpec::three(Operator(h), Generator::casimir(2, 0.5)), rho0, cfg);
  EXPECT_EQ(traj.times.back(), 2.0);
  EXPECT_LT(max_abs(traj.final_state().matrix() - conjugate(h, rho0.matrix(), 2.0)), 1e-8);
}

TEST(Integrate, NonFiniteStateRaised) {
  const Rhs f = [](const Matrix& y) -> Matrix {
    return Matrix::Constant(y.rows(), y.cols(), std::numeric_limits<double>::quiet_NaN());
  };
  try {
    integrate(f, DensityMatrix::maximally_mixed(2), config(0.1, 1.0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteState);
  }
}

TEST(Integrate, ObservablesRecorded) {
  Rng rng(6);
  const Matrix h = random_hermitian(rng, 3);
  const std::vector<NamedObservable> obs{
      {"energy", [h](const DensityMatrix& s) { return (h * s.matrix()).trace().real(); }}};
  const Trajectory traj =
      integrate(BracketSpec::three(Operator(h), Generator::casimir(2, 0.5)), DensityMatrix(random_mixed_state(rng, 3)),
                config(1e-2, 1.0, 10), obs);
  ASSERT_EQ(traj.observables.size(), traj.size());
  EXPECT_NEAR(traj.observables.back()[0], traj.observables.front()[0], 1e-12);
}

TEST(Config, Validation) {
  EXPECT_THROW(config(0.0, 1.0).validate(), Error);
  EXPECT_THROW(config(0.1, -1.0).validate(), Error);
  EXPECT_THROW(config(0.1, 1.0, 0).validate(), Error);
  EXPECT_NO_THROW(config(0.1, 1.0).validate());
}

TEST(Taylor, LinearFlowMatchesExponential) {
  Rng rng(7);
  const Matrix h = random_hermitian(rng, 3);
  const DensityMatrix rho0(random_mixed_state(rng, 3));
  const DensityMatrix t = taylor_oracle(BracketSpec::three(Operator(h), Generator::casimir(2, 0.5)), rho0, 0.1, 14);
  EXPECT_LT(max_abs(t.matrix() - conjugate(h, rho0.matrix(), 0.1)), 1e-13);
}

TEST(Taylor, AgreesWithIntegratorOnNonlinearFlow) {
  Rng rng(8);
  const BracketSpec spec = BracketSpec::three(Operator(random_hermitian(rng, 4)), Generator::casimir(4, 0.25));
  const DensityMatrix rho0(random_mixed_state(rng, 4));
  const DensityMatrix t = taylor_oracle(spec, rho0, 0.05, 12);
  const Trajectory traj = integrate(spec, rho0, config(1e-4, 0.05, 500));
  EXPECT_LT(max_abs(t.matrix() - traj.final_state().matrix()), 1e-12);
}

TEST(Taylor, TermNormsDecreaseForSmallTime) {
  Rng rng(9);
  const BracketSpec spec = BracketSpec::three(Operator(random_hermitian(rng, 3)), Generator::casimir(3, 1.0 / 3.0));
  const auto norms = taylor_term_norms(spec, DensityMatrix(random_mixed_state(rng, 3)), 0.05, 10);
  ASSERT_EQ(norms.size(), 11u);
  for (std::size_t j = 2; j < norms.size(); ++j) EXPECT_LT(norms[j], norms[j - 1]);
}

TEST(Taylor, DivergenceDetected) {
  Rng rng(10);
  const BracketSpec spec = BracketSpec::three(Operator(random_hermitian(rng, 3, 20.0)), Generator::casimir(2, 0.5));
  try {
    taylor_oracle(spec, DensityMatrix(random_mixed_state(rng, 3)), 5.0, 12);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SeriesDiverging);
  }
}

TEST(Taylor, OrderRange) {
  const BracketSpec spec = BracketSpec::three(Operator(pauli::z()), Generator::casimir(2, 0.5));
  EXPECT_THROW(taylor_oracle(spec, DensityMatrix::maximally_mixed(2), 0.1, 21), Error);
}

TEST(Pure, SchrodingerMatchesUnitary) {
  Rng rng(11);
  const Matrix h = random_hermitian(rng, 4);
  const Vector psi0 = random_state_vector(rng, 4);
  const PureTrajectory p = evolve_pure(Operator(h), psi0, config(1e-3, 1.0, 100));
  EXPECT_LT((p.states.back() - unitary(h, 1.0) * psi0).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(p.max_norm_drift, 1e-10);
}

TEST(Output, CsvHeaderAndRows) {
  Rng rng(12);
  const Trajectory traj =
      integrate(BracketSpec::three(Operator(random_hermitian(rng, 2)), Generator::casimir(2, 0.5)),
                DensityMatrix(random_mixed_state(rng, 2)), config(0.1, 0.3));
  EXPECT_EQ(trajectory_csv_header(traj), "t,C1,C2,C3,C4,C5,eig1,eig2,flags");
  const std::string csv = trajectory_to_csv(traj);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1 + static_cast<int>(traj.size()));
}

TEST(Output, JsonCarriesStatesOnRequest) {
  Rng rng(13);
  const Trajectory traj =
      integrate(BracketSpec::three(Operator(random_hermitian(rng, 2)), Generator::casimir(2, 0.5)),
                DensityMatrix(random_mixed_state(rng, 2)), config(0.1, 0.2));
  EXPECT_TRUE(trajectory_to_json(traj, true).contains("states"));
  EXPECT_FALSE(trajectory_to_json(traj, false).contains("states"));
}

TEST(Output, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) EXPECT_EQ(std::stod(format_double(v)), v);
}

}  // namespace
}  // namespace nambu
