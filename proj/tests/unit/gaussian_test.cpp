// Copyright 2026 The cqad Authors
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

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include <gtest/gtest.h>

#include "cqad/gaussian.hpp"

namespace cqad {
namespace {

// exp(-i r (ab + a^dagger b^dagger)) |0,0> by dense matrix exponential.
DensityState squeezed_vacuum(double r, Index cutoff) {
  const SparseMatrix id = identity(SpaceTag::factor(cutoff)).matrix();
  const SparseMatrix a = kron(destroy(cutoff).matrix(), id);
  const SparseMatrix b = kron(id, destroy(cutoff).matrix());
  const DenseMatrix pair = DenseMatrix(a * b);
  const DenseMatrix gen = Complex(0.0, -r) * (pair + pair.adjoint());
  const DenseMatrix u = gen.exp();
  const Eigen::VectorXcd psi = u.col(0);
  DenseMatrix rho = psi * psi.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return {SpaceTag::two_mode(cutoff, cutoff), rho};
}

Matrix4 squeezed_sigma(double r) {
  const double c = std::cosh(2.0 * r) / 2.0;
  const double s = std::sinh(2.0 * r) / 2.0;
  Matrix4 m;
  m << c, 0, 0, -s,
       0, c, -s, 0,
       0, -s, c, 0,
       -s, 0, 0, c;
  return m;
}

Matrix4 local_rotation(double theta_a, double theta_b) {
  Matrix4 r = Matrix4::Zero();
  r.topLeftCorner<2, 2>() << std::cos(theta_a), -std::sin(theta_a), std::sin(theta_a),
      std::cos(theta_a);
  r.bottomRightCorner<2, 2>() << std::cos(theta_b), -std::sin(theta_b),
      std::sin(theta_b), std::cos(theta_b);
  return r;
}

TEST(ExtractCovariance, Vacuum) {
  const auto vac = two_mode_product_state(fock_projector(5, 0), fock_projector(4, 0));
  const auto cov = extract_covariance(vac);
  EXPECT_LT((cov.sigma - 0.5 * Matrix4::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(cov.mean, Vector4::Zero());
}

TEST(ExtractCovariance, ThermalMode) {
  const double n = 0.5;
  const auto rho = two_mode_product_state(thermal_mode(16, n), fock_projector(4, 0));
  const auto cov = extract_covariance(rho);
  EXPECT_LT((cov.block_a() - (n + 0.5) * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LT((cov.block_b() - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(cov.block_ab().cwiseAbs().maxCoeff(), 0.0);
}

TEST(ExtractCovariance, SqueezedVacuumConvention) {
  for (double r : {0.05, 0.2, 0.4}) {
    const auto cov = extract_covariance(squeezed_vacuum(r, 30));
    EXPECT_LT((cov.sigma - squeezed_sigma(r)).cwiseAbs().maxCoeff(), 1e-10) << "r = " << r;
    EXPECT_LT(cov.mean.cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ExtractCovariance, CoherentMeanIsSubtracted) {
  const Index n = 20;
  const Complex alpha(0.6, -0.3);
  Eigen::VectorXcd psi(n);
  Complex term = std::exp(-0.5 * std::norm(alpha));
  for (Index k = 0; k < n; ++k) {
    psi(k) = term;
    term *= alpha / std::sqrt(double(k + 1));
  }
  const DenseMatrix pa = psi * psi.adjoint();
  const auto cov = extract_covariance(two_mode_product_state(0.5 * (pa + pa.adjoint()),
                                                             fock_projector(3, 0)));
  EXPECT_LT((cov.sigma - 0.5 * Matrix4::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(cov.mean(0), std::sqrt(2.0) * alpha.real(), 1e-10);
  EXPECT_NEAR(cov.mean(1), std::sqrt(2.0) * alpha.imag(), 1e-10);
}

TEST(ExtractCovariance, RejectsFullSpace) {
  const HilbertSpace space(2, 2);
  const DensityState rho(SpaceTag::full(space),
                         DenseMatrix::Identity(space.dim(), space.dim()) / 8.0);
  EXPECT_THROW(extract_covariance(rho), InvalidArgument);
}

TEST(LogNegativity, Vacuum) {
  const auto v = log_negativity(CovarianceState::vacuum());
  EXPECT_DOUBLE_EQ(v.sigma_invariant, 0.5);
  EXPECT_DOUBLE_EQ(v.eta_minus, 0.5);
  EXPECT_EQ(v.log_negativity, 0.0);
  EXPECT_DOUBLE_EQ(CovarianceState::vacuum().sigma.determinant(), 1.0 / 16.0);
}

TEST(LogNegativity, SqueezedVacuumMasterOracle) {
  for (double r : {0.01, 0.3, 1.0, 1.73, 3.0}) {
    const auto v = log_negativity(CovarianceState(squeezed_sigma(r)));
    EXPECT_NEAR(v.eta_minus, std::exp(-2.0 * r) / 2.0, 1e-12 * std::exp(2.0 * r));
    // Sigma - sqrt(disc) cancels entries of size e^{4r}.
    EXPECT_NEAR(v.log_negativity, 2.0 * r, 1e-12 * std::exp(4.0 * r));
  }
}

TEST(LogNegativity, SeparableStatesAreNeverEntangled) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> n(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const auto cov = CovarianceState::thermal(n(rng), n(rng));
    EXPECT_EQ(log_negativity(cov).log_negativity, 0.0);
  }
}

TEST(LogNegativity, LocalPhaseInvariance) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (double r : {0.2, 0.9}) {
    Matrix4 s = squeezed_sigma(r);
    s.diagonal().array() += 0.05;  // add thermal noise
    const double base = log_negativity(CovarianceState(s)).log_negativity;
    EXPECT_GT(base, 0.0);
    for (int k = 0; k < 20; ++k) {
      const Matrix4 rot = local_rotation(phase(rng), phase(rng));
      Matrix4 turned = rot * s * rot.transpose();
      turned = 0.5 * (turned + turned.transpose()).eval();
      EXPECT_NEAR(log_negativity(CovarianceState(turned)).log_negativity, base, 1e-12);
    }
  }
}

TEST(LogNegativity, ClampWindow) {
  // A = a I, B = b I, V_ab = c I gives disc = (a - b)^2 ((a + b)^2 - 4 c^2).
  const double a = 0.5;
  const double b = 0.501;
  auto make = [&](double c) {
    Matrix4 m = Matrix4::Zero();
    m.diagonal() << a, a, b, b;
    m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = c;
    return CovarianceState(m);
  };
  const auto clamped = log_negativity(make(0.5 * (a + b) + 1e-8));
  EXPECT_TRUE(clamped.clamped);
  EXPECT_FALSE(log_negativity(CovarianceState::vacuum()).clamped);
  EXPECT_THROW(log_negativity(make(0.5 * (a + b) + 1e-3)), UnphysicalCovariance);
}

TEST(PhysicalityCheck, Examples) {
  const auto vac = physicality_check(CovarianceState::vacuum());
  EXPECT_NEAR(vac.min_eigenvalue, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(vac.determinant, 1.0 / 16.0);
  for (double r : {0.1, 0.7, 2.0}) {
    const auto rep = physicality_check(CovarianceState(squeezed_sigma(r)));
    EXPECT_NEAR(rep.determinant, 1.0 / 16.0, 1e-10);
    EXPECT_GT(rep.min_eigenvalue, -1e-8);
  }
  const auto thermal = CovarianceState::thermal(1.0, 0.0);
  EXPECT_DOUBLE_EQ(thermal.block_a().determinant(), 2.25);
  EXPECT_DOUBLE_EQ(physicality_check(thermal).determinant, 2.25 * 0.25);
  Matrix4 bad = 0.1 * Matrix4::Identity();
  EXPECT_LT(physicality_check(CovarianceState(bad)).min_eigenvalue, -0.3);
}

TEST(CovarianceState, RejectsAsymmetry) {
  Matrix4 m = 0.5 * Matrix4::Identity();
  m(0, 1) = 1e-9;
  EXPECT_THROW(CovarianceState{m}, InvalidArgument);
}

TEST(Lyapunov, SqueezedVacuumExact) {
  GaussianModel model;
  model.coupling = effective_coupling(paper_parameters());
  const auto states = lyapunov_evolve(model, CovarianceState::vacuum(), 100.0, 5.0);
  ASSERT_EQ(states.size(), 21u);
  double last = -1.0;
  for (const auto& s : states) {
    const double r = model.coupling * s.time;
    EXPECT_LT((s.sigma - squeezed_sigma(r)).cwiseAbs().maxCoeff(), 1e-10 * std::exp(2.0 * r));
    const double en = log_negativity(s).log_negativity;
    if (s.time > 0.0) EXPECT_NEAR(en / (2.0 * r), 1.0, 1e-10);
    EXPECT_GE(en, last);
    last = en;
  }
}

TEST(Lyapunov, MatchesFockSqueezeSign) {
  // Fock exponentiation and the Lyapunov drift must agree entry by entry.
  GaussianModel model;
  model.coupling = 0.5;
  const auto states = lyapunov_evolve(model, CovarianceState::vacuum(), 0.6, 0.6);
  const auto fock = extract_covariance(squeezed_vacuum(0.3, 30));
  EXPECT_LT((states.back().sigma - fock.sigma).cwiseAbs().maxCoeff(), 1e-10);
  LyapunovOptions mutated;
  mutated.mutate_sign = true;
  const auto wrong = lyapunov_evolve(model, CovarianceState::vacuum(), 0.6, 0.6, mutated);
  EXPECT_GT((wrong.back().sigma - fock.sigma).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(Lyapunov, ThermalRelaxation) {
  GaussianModel model;
  model.gamma_a = 0.3;
  model.gamma_b = 0.1;
  model.n_a = 1.2;
  model.n_b = 0.4;
  const auto states = lyapunov_evolve(model, CovarianceState::vacuum(), 40.0, 2.0);
  for (const auto& s : states) {
    const double va = model.n_a + 0.5 - model.n_a * std::exp(-model.gamma_a * s.time);
    const double vb = model.n_b + 0.5 - model.n_b * std::exp(-model.gamma_b * s.time);
    EXPECT_NEAR(s.sigma(0, 0), va, 1e-10);
    EXPECT_NEAR(s.sigma(1, 1), va, 1e-10);
    EXPECT_NEAR(s.sigma(2, 2), vb, 1e-10);
    EXPECT_NEAR(s.sigma(3, 3), vb, 1e-10);
    EXPECT_EQ(log_negativity(s).log_negativity, 0.0);
  }
}

TEST(Lyapunov, OutputGridAndErrors) {
  GaussianModel model;
  model.coupling = 0.1;
  const auto states = lyapunov_evolve(model, CovarianceState::vacuum(), 1.05, 0.5);
  ASSERT_EQ(states.size(), 4u);
  EXPECT_DOUBLE_EQ(states[2].time, 1.0);
  EXPECT_DOUBLE_EQ(states[3].time, 1.05);
  EXPECT_THROW(lyapunov_evolve(model, CovarianceState(0.1 * Matrix4::Identity()), 1.0, 0.5),
               InvalidArgument);
  EXPECT_THROW(lyapunov_evolve(model, CovarianceState::vacuum(), 1.0, 0.0), InvalidArgument);
}

TEST(Lyapunov, DriftAndDiffusion) {
  GaussianModel model;
  model.coupling = 2.0;
  model.gamma_a = 0.2;
  model.gamma_b = 0.4;
  model.n_a = 1.0;
  const Matrix4 a = drift_matrix(model);
  EXPECT_EQ(a(0, 3), -2.0);
  EXPECT_EQ(a(1, 2), -2.0);
  EXPECT_EQ(a(2, 1), -2.0);
  EXPECT_EQ(a(3, 0), -2.0);
  EXPECT_EQ(a(0, 0), -0.1);
  EXPECT_EQ(a(3, 3), -0.2);
  const Matrix4 d = diffusion_matrix(model);
  EXPECT_DOUBLE_EQ(d(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(d(2, 2), 0.2);
}

}  // namespace
}  // namespace cqad
