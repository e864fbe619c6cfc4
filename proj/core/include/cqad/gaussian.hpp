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

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cqad/fock.hpp"
#include "cqad/model.hpp"

namespace cqad {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

// Two-mode Gaussian moments over R = [X_a, Y_a, X_b, Y_b] with
// X = (a + a^dagger) / sqrt(2), Y = (a - a^dagger) / (i sqrt(2)).
// sigma_kl = <R_k R_l + R_l R_k> / 2 - <R_k><R_l>; the vacuum has sigma = I/2.
struct CovarianceState {
  static constexpr double kSymmetryTolerance = 1e-12;

  CovarianceState(Matrix4 sigma, Vector4 mean = Vector4::Zero(),
                  double time_us = 0.0);

  static CovarianceState vacuum();
  static CovarianceState thermal(double n_a, double n_b);

  Eigen::Matrix2d block_a() const { return sigma.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d block_b() const { return sigma.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d block_ab() const { return sigma.topRightCorner<2, 2>(); }

  Matrix4 sigma;
  Vector4 mean;
  double time;
};

// Standard symplectic form for the ordering above, diag(J, J) with
// J = [[0, 1], [-1, 0]].
Matrix4 symplectic_form();

struct EntanglementValue {
  double log_negativity = 0.0;
  double eta_minus = 0.5;
  double sigma_invariant = 0.0;  // det V_a + det V_b - 2 det V_ab
  bool clamped = false;          // discriminant was clamped to 0
};

// Discriminant Sigma^2 - 4 det sigma values in [-kClampWindow, 0) are treated
// as 0 and flagged; anything lower throws UnphysicalCovariance.
inline constexpr double kClampWindow = 1e-9;

EntanglementValue log_negativity(const CovarianceState& cov);

struct PhysicalityReport {
  double symmetry_error = 0.0;
  double min_eigenvalue = 0.0;  // of sigma + (i/2) Omega
  double determinant = 0.0;
};

PhysicalityReport physicality_check(const CovarianceState& cov);

// Central second moments of a two-mode density matrix (qubit traced out).
CovarianceState extract_covariance(const DensityState& rho_two_mode);

// Quadratic model H = G (ab + a^dagger b^dagger) with thermal damping.
struct GaussianModel {
  double coupling = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double n_a = 0.0;
  double n_b = 0.0;

  static GaussianModel from_params(const SystemParams& params);
};

// dR/dt = A R + noise. `mutate_sign` flips the G entries of the Y rows; used
// only by the validation harness to show the Fock cross-check catches it.
Matrix4 drift_matrix(const GaussianModel& model, bool mutate_sign = false);
Matrix4 diffusion_matrix(const GaussianModel& model);

struct LyapunovOptions {
  double max_phase_step = 1e-3;  // ||A|| h bound for each RK4 substep
  bool mutate_sign = false;
};

// Integrates d sigma / dt = A sigma + sigma A^T + D, d mean / dt = A mean.
// Returns the initial state followed by one state per dt_out, plus t_end.
std::vector<CovarianceState> lyapunov_evolve(const GaussianModel& model,
                                             const CovarianceState& initial,
                                             double t_end, double dt_out,
                                             const LyapunovOptions& options = {});
std::vector<CovarianceState> lyapunov_evolve(const SystemParams& params,
                                             const CovarianceState& initial,
                                             double t_end, double dt_out,
                                             const LyapunovOptions& options = {});

}  // namespace cqad
