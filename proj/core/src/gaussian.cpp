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

#include "cqad/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cqad {

namespace {

double det2(const Eigen::Matrix2d& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

double row_sum_norm(const Matrix4& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

OperatorMatrix two_mode_operator(const OperatorMatrix& op_a,
                                 const OperatorMatrix& op_b) {
  return {SpaceTag::two_mode(op_a.dim(), op_b.dim()),
          kron(op_a.matrix(), op_b.matrix())};
}

}  // namespace

CovarianceState::CovarianceState(Matrix4 sigma_in, Vector4 mean_in, double time_us)
    : sigma(std::move(sigma_in)), mean(std::move(mean_in)), time(time_us) {
  if (!sigma.allFinite() || !mean.allFinite()) {
    throw InvalidArgument("CovarianceState: non-finite entries");
  }
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    std::ostringstream msg;
    msg << "CovarianceState: sigma is not symmetric (deviation " << asym << ")";
    throw InvalidArgument(msg.str());
  }
}

CovarianceState CovarianceState::vacuum() { return thermal(0.0, 0.0); }

CovarianceState CovarianceState::thermal(double n_a, double n_b) {
  if (!(n_a >= 0.0) || !(n_b >= 0.0)) {
    throw InvalidArgument("CovarianceState::thermal: occupations must be >= 0");
  }
  Vector4 diag(n_a + 0.5, n_a + 0.5, n_b + 0.5, n_b + 0.5);
  return CovarianceState(diag.asDiagonal().toDenseMatrix());
}

Matrix4 symplectic_form() {
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

EntanglementValue log_negativity(const CovarianceState& cov) {
  EntanglementValue out;
  out.sigma_invariant =
      det2(cov.block_a()) + det2(cov.block_b()) - 2.0 * det2(cov.block_ab());
  const double sigma_inv = out.sigma_invariant;
  double disc = sigma_inv * sigma_inv - 4.0 * cov.sigma.determinant();
  if (disc < 0.0) {
    if (disc < -kClampWindow) {
      std::ostringstream msg;
      msg << "log_negativity: Sigma^2 - 4 det sigma = " << disc
          << " is below -" << kClampWindow;
      throw UnphysicalCovariance(msg.str());
    }
    disc = 0.0;
    out.clamped = true;
  }
  const double inner = sigma_inv - std::sqrt(disc);
  if (!(inner > 0.0)) {
    throw UnphysicalCovariance(
        "log_negativity: smallest partially transposed symplectic eigenvalue "
        "is not positive");
  }
  out.eta_minus = std::sqrt(inner) / std::sqrt(2.0);
  out.log_negativity = std::max(0.0, -std::log(2.0 * out.eta_minus));
  return out;
}

PhysicalityReport physicality_check(const CovarianceState& cov) {
  PhysicalityReport report;
  report.symmetry_error = (cov.sigma - cov.sigma.transpose()).cwiseAbs().maxCoeff();
  Eigen::Matrix4cd m = cov.sigma.cast<Complex>();
  m += Complex(0.0, 0.5) * symplectic_form().cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.determinant = cov.sigma.determinant();
  return report;
}

CovarianceState extract_covariance(const DensityState& rho) {
  const SpaceTag& tag = rho.tag();
  if (tag.kind() != SpaceTag::Kind::kTwoMode) {
    throw InvalidArgument("extract_covariance: expected a two-mode state, got " +
                          tag.describe());
  }
  if (rho.hermiticity_error() > DensityState::kHermiticityTolerance) {
    throw InvalidArgument("extract_covariance: state is not Hermitian");
  }
  const Index na = tag.cutoff_a();
  const Index nb = tag.cutoff_b();
  const auto id_a = identity(SpaceTag::factor(na));
  const auto id_b = identity(SpaceTag::factor(nb));
  const auto a = two_mode_operator(destroy(na), id_b);
  const auto b = two_mode_operator(id_a, destroy(nb));
  const auto ad = a.adjoint();
  const auto bd = b.adjoint();

  // Moments in normal order; a a^dagger = a^dagger a + 1 is applied
  // analytically so the truncation corner never enters.
  const Complex m_a = expectation(rho, a);
  const Complex m_b = expectation(rho, b);
  const Complex aa = expectation(rho, a * a);
  const Complex bb = expectation(rho, b * b);
  const double n_a = expectation(rho, ad * a).real();
  const double n_b = expectation(rho, bd * b).real();
  const Complex ab = expectation(rho, a * b);
  const Complex adb = expectation(rho, ad * b);

  Matrix4 raw;
  raw(0, 0) = aa.real() + n_a + 0.5;
  raw(1, 1) = -aa.real() + n_a + 0.5;
  raw(0, 1) = aa.imag();
  raw(2, 2) = bb.real() + n_b + 0.5;
  raw(3, 3) = -bb.real() + n_b + 0.5;
  raw(2, 3) = bb.imag();
  raw(0, 2) = ab.real() + adb.real();
  raw(0, 3) = ab.imag() + adb.imag();
  raw(1, 2) = ab.imag() - adb.imag();
  raw(1, 3) = -ab.real() + adb.real();
  raw(1, 0) = raw(0, 1);
  raw(3, 2) = raw(2, 3);
  raw(2, 0) = raw(0, 2);
  raw(3, 0) = raw(0, 3);
  raw(2, 1) = raw(1, 2);
  raw(3, 1) = raw(1, 3);

  const double s2 = std::sqrt(2.0);
  Vector4 mean(s2 * m_a.real(), s2 * m_a.imag(), s2 * m_b.real(), s2 * m_b.imag());
  Matrix4 sigma = raw - mean * mean.transpose();
  return {sigma, mean, rho.time()};
}

GaussianModel GaussianModel::from_params(const SystemParams& params) {
  GaussianModel model;
  model.coupling = effective_coupling(params);
  model.gamma_a = params.gamma_a;
  model.gamma_b = params.gamma_b;
  model.n_a = thermal_occupation(params.omega_a, params.temperature);
  model.n_b = thermal_occupation(params.omega_b, params.temperature);
  return model;
}

Matrix4 drift_matrix(const GaussianModel& model, bool mutate_sign) {
  // Heisenberg equations of G (ab + a^dagger b^dagger):
  //   dX_a = -G Y_b, dY_a = -G X_b, dX_b = -G Y_a, dY_b = -G X_a.
  const double g = model.coupling;
  const double y_sign = mutate_sign ? 1.0 : -1.0;
  Matrix4 a = Matrix4::Zero();
  a(0, 3) = -g;
  a(1, 2) = y_sign * g;
  a(2, 1) = -g;
  a(3, 0) = y_sign * g;
  a(0, 0) = a(1, 1) = -0.5 * model.gamma_a;
  a(2, 2) = a(3, 3) = -0.5 * model.gamma_b;
  return a;
}

Matrix4 diffusion_matrix(const GaussianModel& model) {
  const double da = model.gamma_a * (model.n_a + 0.5);
  const double db = model.gamma_b * (model.n_b + 0.5);
  return Vector4(da, da, db, db).asDiagonal().toDenseMatrix();
}

std::vector<CovarianceState> lyapunov_evolve(const GaussianModel& model,
                                             const CovarianceState& initial,
                                             double t_end, double dt_out,
                                             const LyapunovOptions& options) {
  if (physicality_check(initial).min_eigenvalue < -1e-8) {
    throw InvalidArgument("lyapunov_evolve: initial covariance is not physical");
  }
  if (!(dt_out > 0.0)) {
    throw InvalidArgument("lyapunov_evolve: dt_out must be > 0");
  }
  if (t_end < initial.time) {
    throw InvalidArgument("lyapunov_evolve: t_end precedes the initial time");
  }
  if (!(options.max_phase_step > 0.0)) {
    throw InvalidArgument("lyapunov_evolve: max_phase_step must be > 0");
  }

  const Matrix4 a = drift_matrix(model, options.mutate_sign);
  const Matrix4 at = a.transpose();
  const Matrix4 d = diffusion_matrix(model);
  const double norm = row_sum_norm(a);

  auto f = [&](const Matrix4& s) -> Matrix4 { return a * s + s * at + d; };

  std::vector<double> times{initial.time};
  const double span = t_end - initial.time;
  const auto count = static_cast<std::size_t>(std::ceil(span / dt_out - 1e-9));
  for (std::size_t k = 1; k < count; ++k) times.push_back(initial.time + k * dt_out);
  if (span > 0.0) times.push_back(t_end);

  std::vector<CovarianceState> out;
  out.reserve(times.size());
  out.push_back(initial);
  Matrix4 sigma = initial.sigma;
  Vector4 mean = initial.mean;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double len = times[k] - times[k - 1];
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(norm * len / options.max_phase_step)));
    const double h = len / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Matrix4 k1 = f(sigma);
      const Matrix4 k2 = f(sigma + 0.5 * h * k1);
      const Matrix4 k3 = f(sigma + 0.5 * h * k2);
      const Matrix4 k4 = f(sigma + h * k3);
      sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const Vector4 m1 = a * mean;
      const Vector4 m2 = a * (mean + 0.5 * h * m1);
      const Vector4 m3 = a * (mean + 0.5 * h * m2);
      const Vector4 m4 = a * (mean + h * m3);
      mean += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    }
    sigma = 0.5 * (sigma + sigma.transpose()).eval();
    out.emplace_back(sigma, mean, times[k]);
  }
  return out;
}

std::vector<CovarianceState> lyapunov_evolve(const SystemParams& params,
                                             const CovarianceState& initial,
                                             double t_end, double dt_out,
                                             const LyapunovOptions& options) {
  return lyapunov_evolve(GaussianModel::from_params(params), initial, t_end,
                         dt_out, options);
}

}  // namespace cqad
