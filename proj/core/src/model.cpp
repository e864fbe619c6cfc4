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

#include "cqad/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqad/units.hpp"

namespace cqad {

namespace {

constexpr double kSingularTolerance = 1e-6;
constexpr double kFrameTolerance = 1e-12;
constexpr double kDispersiveRatio = 0.2;

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string("SystemParams: ") + name +
                          " is not finite");
  }
}

// Denominator delta^2 - 4 Omega_d^2 shared by G and delta_d*.
double squeeze_denominator(const SystemParams& params) {
  const double delta = half_mode_splitting(params);
  const double half = std::abs(delta) / 2.0;
  const double omega = std::abs(params.drive_amplitude);
  if (std::abs(omega - half) <= kSingularTolerance * half) {
    std::ostringstream msg;
    msg << "drive amplitude " << params.drive_amplitude
        << " rad/us sits on the pole |Omega_d| = |delta|/2 = " << half;
    throw SingularParameter(msg.str());
  }
  return delta * delta - 4.0 * params.drive_amplitude * params.drive_amplitude;
}

OperatorMatrix qubit_matrix(const Eigen::Matrix2cd& m) {
  return {SpaceTag::factor(2), m.sparseView(0.0, 0.0)};
}

// |j><k| in whichever 2-dim basis the caller means.
Eigen::Matrix2cd ket_bra(Index j, Index k) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(j, k) = 1.0;
  return m;
}

}  // namespace

void validate(const SystemParams& p) {
  require_finite(p.omega_a, "omega_a");
  require_finite(p.omega_b, "omega_b");
  require_finite(p.omega_q, "omega_q");
  require_finite(p.g_a, "g_a");
  require_finite(p.g_b, "g_b");
  require_finite(p.drive_amplitude, "drive_amplitude");
  require_finite(p.drive_detuning, "drive_detuning");
  require_finite(p.gamma_a, "gamma_a");
  require_finite(p.gamma_b, "gamma_b");
  require_finite(p.kappa_q, "kappa_q");
  require_finite(p.temperature, "temperature");
  if (p.omega_a <= 0.0 || p.omega_b <= 0.0 || p.omega_q <= 0.0) {
    throw InvalidArgument("SystemParams: mode and qubit frequencies must be > 0");
  }
  if (p.gamma_a < 0.0 || p.gamma_b < 0.0 || p.kappa_q < 0.0) {
    throw InvalidArgument("SystemParams: decay rates must be >= 0");
  }
  if (p.temperature < 0.0) {
    throw InvalidArgument("SystemParams: temperature must be >= 0");
  }
}

SystemParams paper_parameters() {
  SystemParams p;
  p.omega_a = units::ghz(5.9236);
  p.omega_b = units::ghz(5.9488);
  p.omega_q = 0.5 * (p.omega_a + p.omega_b);
  p.g_a = units::khz(257.0);
  p.g_b = units::khz(257.0);
  // Quoted as "25 MHz" without a 2pi; read as angular.
  p.drive_amplitude = 25.0;
  p.gamma_a = units::khz(4.7);
  p.gamma_b = units::khz(3.3);
  p.kappa_q = 0.0;
  p.temperature = units::millikelvin(50.0);
  p.drive_detuning = resonant_detuning(p, QubitBranch::kPlus);
  return p;
}

double half_mode_splitting(const SystemParams& params) {
  return 0.5 * (params.omega_b - params.omega_a);
}

double effective_coupling(const SystemParams& params) {
  return params.drive_amplitude * params.g_a * params.g_b /
         squeeze_denominator(params);
}

double resonant_detuning(const SystemParams& params, QubitBranch branch) {
  const double shift =
      params.drive_amplitude * (params.g_a * params.g_a + params.g_b * params.g_b) /
      (2.0 * squeeze_denominator(params));
  return sign_of(branch) * shift;
}

DerivedFrame derive_frame(const SystemParams& params, QubitBranch branch) {
  return {half_mode_splitting(params), effective_coupling(params),
          resonant_detuning(params, branch), sign_of(branch)};
}

double thermal_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) {
    throw InvalidArgument("thermal_occupation: omega must be > 0");
  }
  if (temperature < 0.0) {
    throw InvalidArgument("thermal_occupation: temperature must be >= 0");
  }
  if (temperature == 0.0) return 0.0;
  const double x =
      units::kHbar * omega * 1e6 / (units::kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

std::vector<std::string> dispersive_warnings(const SystemParams& params) {
  std::vector<std::string> out;
  const double delta = std::abs(half_mode_splitting(params));
  const double drive = std::abs(params.drive_amplitude);
  const double scale = drive > 0.0 ? std::min(delta, drive) : delta;
  const double limit = kDispersiveRatio * scale;
  auto check = [&](double g, const char* name) {
    if (std::abs(g) / 2.0 >= limit) {
      std::ostringstream msg;
      msg << name << "/2 = " << std::abs(g) / 2.0
          << " rad/us is not small against min(|delta|, |Omega_d|) = " << scale
          << " rad/us; the couplings no longer average out as fast "
             "oscillations and the effective model may be inaccurate";
      out.push_back(msg.str());
    }
  };
  check(params.g_a, "g_a");
  check(params.g_b, "g_b");
  return out;
}

void require_rotating_frame(const SystemParams& params) {
  const double mean = 0.5 * (params.omega_a + params.omega_b);
  if (std::abs(params.omega_q - mean) > kFrameTolerance * std::abs(mean)) {
    std::ostringstream msg;
    msg << "rotating frame requires omega_q = (omega_a + omega_b)/2 = " << mean
        << " rad/us, got " << params.omega_q;
    throw InvalidArgument(msg.str());
  }
}

Hamiltonian::Hamiltonian(SpaceTag tag, SparseMatrix static_part)
    : tag_(tag), static_part_(std::move(static_part)) {
  if (static_part_.rows() != tag_.dim() || static_part_.cols() != tag_.dim()) {
    throw InvalidArgument("Hamiltonian: static part shape mismatch");
  }
  static_part_.makeCompressed();
}

void Hamiltonian::add_rotating(const OperatorMatrix& op, double frequency) {
  require_same_space(tag_, op.tag(), "Hamiltonian::add_rotating");
  SparseMatrix adj = op.matrix().adjoint();
  adj.makeCompressed();
  terms_.push_back({op.matrix(), std::move(adj), frequency});
}

OperatorMatrix Hamiltonian::at(double t) const {
  SparseMatrix h = static_part_;
  for (const auto& term : terms_) {
    const Complex phase = std::polar(1.0, term.frequency * t);
    h += phase * term.op + std::conj(phase) * term.op_adjoint;
  }
  return {tag_, std::move(h)};
}

double Hamiltonian::max_frequency() const {
  double best = 0.0;
  for (const auto& term : terms_) best = std::max(best, std::abs(term.frequency));
  return best;
}

double Hamiltonian::norm_bound() const {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(tag_.dim());
  auto accumulate = [&rows](const SparseMatrix& m) {
    for (Index k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        rows(it.row()) += std::abs(it.value());
      }
    }
  };
  accumulate(static_part_);
  for (const auto& term : terms_) {
    accumulate(term.op);
    accumulate(term.op_adjoint);
  }
  return rows.size() > 0 ? rows.maxCoeff() : 0.0;
}

OperatorMatrix qubit_in_frame(const OperatorMatrix& qubit_op, QubitFrame frame) {
  if (qubit_op.dim() != 2) {
    throw InvalidArgument("qubit_in_frame: expected a 2x2 qubit operator");
  }
  if (frame == QubitFrame::kBare) return qubit_op;
  const Eigen::Matrix2cd w = dressed_basis_change();
  const Eigen::Matrix2cd m = qubit_op.dense();
  return qubit_matrix(w * m * w.adjoint());
}

Hamiltonian lab_hamiltonian(const SystemParams& params,
                            const HilbertSpace& space) {
  validate(params);
  const auto q = qubit_operators();
  const auto a = embed(destroy(space.cutoff_a()), Slot::kModeA, space);
  const auto b = embed(destroy(space.cutoff_b()), Slot::kModeB, space);
  const auto sz = embed(q.sigma_z, Slot::kQubit, space);
  const auto seg = embed(q.sigma_eg, Slot::kQubit, space);
  const auto sge = embed(q.sigma_ge, Slot::kQubit, space);

  const OperatorMatrix h0 =
      Complex(params.omega_a) * (a.adjoint() * a) +
      Complex(params.omega_b) * (b.adjoint() * b) +
      Complex(params.omega_q / 2.0) * sz +
      Complex(params.g_a) * (seg * a + sge * a.adjoint()) +
      Complex(params.g_b) * (seg * b + sge * b.adjoint());
  Hamiltonian h(SpaceTag::full(space), h0.matrix());
  // Omega_d (exp(-i omega_d t) sigma_eg + h.c.)
  const double omega_d = params.omega_q - params.drive_detuning;
  h.add_rotating(Complex(params.drive_amplitude) * seg, -omega_d);
  return h;
}

Hamiltonian rotating_hamiltonian(const SystemParams& params,
                                 const HilbertSpace& space, QubitFrame frame) {
  validate(params);
  require_rotating_frame(params);
  const double delta = half_mode_splitting(params);
  const double dd = params.drive_detuning;
  const auto a = embed(destroy(space.cutoff_a()), Slot::kModeA, space);
  const auto b = embed(destroy(space.cutoff_b()), Slot::kModeB, space);

  OperatorMatrix h0 = identity(SpaceTag::full(space));
  OperatorMatrix raise = h0;
  if (frame == QubitFrame::kBare) {
    const auto q = qubit_operators();
    const auto sz = embed(q.sigma_z, Slot::kQubit, space);
    const auto seg = embed(q.sigma_eg, Slot::kQubit, space);
    const auto sge = embed(q.sigma_ge, Slot::kQubit, space);
    h0 = Complex(dd / 2.0) * sz + Complex(params.drive_amplitude) * (seg + sge);
    raise = seg;
  } else {
    // Dressed basis, index 0 = |+>, 1 = |->. sigma_z = s_{+-} + s_{-+},
    // sigma_eg + sigma_ge = s_{++} - s_{--},
    // sigma_eg = (s_{++} - s_{--} - s_{+-} + s_{-+}) / 2.
    constexpr Index plus = 0;
    constexpr Index minus = 1;
    const Eigen::Matrix2cd pp = ket_bra(plus, plus);
    const Eigen::Matrix2cd mm = ket_bra(minus, minus);
    const Eigen::Matrix2cd pm = ket_bra(plus, minus);
    const Eigen::Matrix2cd mp = ket_bra(minus, plus);
    const auto splitting = embed(qubit_matrix(pp - mm), Slot::kQubit, space);
    const auto flip = embed(qubit_matrix(pm + mp), Slot::kQubit, space);
    h0 = Complex(params.drive_amplitude) * splitting + Complex(dd / 2.0) * flip;
    raise = embed(qubit_matrix(0.5 * (pp - mm - pm + mp)), Slot::kQubit, space);
  }

  Hamiltonian h(SpaceTag::full(space), h0.matrix());
  h.add_rotating(Complex(params.g_a) * (raise * a), delta - dd);
  h.add_rotating(Complex(params.g_b) * (raise * b), -(delta + dd));
  return h;
}

Hamiltonian effective_hamiltonian(const SystemParams& params,
                                  const HilbertSpace& space) {
  const double coupling = effective_coupling(params);
  const auto a = embed(destroy(space.cutoff_a()), Slot::kModeA, space);
  const auto b = embed(destroy(space.cutoff_b()), Slot::kModeB, space);
  const OperatorMatrix pair = a * b;
  const OperatorMatrix h = Complex(coupling) * (pair + pair.adjoint());
  return {SpaceTag::full(space), h.matrix()};
}

OperatorMatrix build_lab_hamiltonian(const SystemParams& params,
                                     const HilbertSpace& space, double t) {
  return lab_hamiltonian(params, space).at(t);
}

OperatorMatrix build_rotating_hamiltonian(const SystemParams& params,
                                          const HilbertSpace& space, double t) {
  return rotating_hamiltonian(params, space, QubitFrame::kBare).at(t);
}

OperatorMatrix build_dressed_hamiltonian(const SystemParams& params,
                                         const HilbertSpace& space, double t) {
  return rotating_hamiltonian(params, space, QubitFrame::kDressed).at(t);
}

OperatorMatrix build_effective_hamiltonian(const SystemParams& params,
                                           const HilbertSpace& space) {
  return effective_hamiltonian(params, space).at(0.0);
}

}  // namespace cqad
