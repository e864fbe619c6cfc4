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

#include <string>
#include <vector>

#include "cqad/fock.hpp"

namespace cqad {

// Physical parameters of the driven qubit coupled to two acoustic modes.
// Frequencies and rates are angular, in rad/us; temperature in kelvin.
struct SystemParams {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double omega_q = 0.0;
  double g_a = 0.0;
  double g_b = 0.0;
  double drive_amplitude = 0.0;  // Omega_d
  double drive_detuning = 0.0;   // omega_q - omega_d
  double gamma_a = 0.0;          // phonon energy decay
  double gamma_b = 0.0;
  double kappa_q = 0.0;          // qubit energy decay
  double temperature = 0.0;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Dressed qubit state the modes are conditioned on: |+> or |->.
enum class QubitBranch { kPlus = 1, kMinus = -1 };

inline int sign_of(QubitBranch branch) { return static_cast<int>(branch); }

// Qubit basis the rotating-frame model is written in.
enum class QubitFrame { kBare, kDressed };

struct DerivedFrame {
  double delta = 0.0;          // (omega_b - omega_a) / 2
  double coupling = 0.0;       // effective two-mode squeezing rate G
  double delta_d_star = 0.0;   // resonant drive detuning
  int qubit_sign = 1;
};

// Rejects non-positive mode frequencies, negative rates or temperature and
// non-finite entries.
void validate(const SystemParams& params);

// Parameter set of the published device, with Omega_d = 25 rad/us, kappa_q = 0
// and the drive detuning on resonance for the |+> branch.
SystemParams paper_parameters();

double half_mode_splitting(const SystemParams& params);

// G = Omega_d g_a g_b / (delta^2 - 4 Omega_d^2). Throws SingularParameter
// within relative 1e-6 of |Omega_d| = |delta| / 2.
double effective_coupling(const SystemParams& params);

// delta_d* = sign * Omega_d (g_a^2 + g_b^2) / (2 (delta^2 - 4 Omega_d^2)).
double resonant_detuning(const SystemParams& params, QubitBranch branch);

DerivedFrame derive_frame(const SystemParams& params, QubitBranch branch);

// Bose-Einstein occupation 1 / (exp(hbar omega / k_B T) - 1); exactly 0 at
// T = 0.
double thermal_occupation(double omega, double temperature);

// Human-readable notes when g_j / 2 >= 0.2 min(|delta|, |Omega_d|), the point
// where the couplings stop being fast compared with the drive and splitting.
std::vector<std::string> dispersive_warnings(const SystemParams& params);

// Throws unless omega_q = (omega_a + omega_b) / 2 (relative 1e-12).
void require_rotating_frame(const SystemParams& params);

// H(t) = static + sum_k (exp(i w_k t) A_k + h.c.).
class Hamiltonian {
 public:
  struct RotatingTerm {
    SparseMatrix op;
    SparseMatrix op_adjoint;
    double frequency;
  };

  Hamiltonian(SpaceTag tag, SparseMatrix static_part);

  void add_rotating(const OperatorMatrix& op, double frequency);

  const SpaceTag& tag() const { return tag_; }
  const SparseMatrix& static_part() const { return static_part_; }
  const std::vector<RotatingTerm>& rotating_terms() const { return terms_; }

  OperatorMatrix at(double t) const;
  // Largest |w_k|; 0 for a static Hamiltonian.
  double max_frequency() const;
  // Bound on the spectral radius of H(t) valid for every t (max row sum).
  double norm_bound() const;

 private:
  SpaceTag tag_;
  SparseMatrix static_part_;
  std::vector<RotatingTerm> terms_;
};

Hamiltonian lab_hamiltonian(const SystemParams& params,
                            const HilbertSpace& space);
Hamiltonian rotating_hamiltonian(const SystemParams& params,
                                 const HilbertSpace& space,
                                 QubitFrame frame = QubitFrame::kBare);
Hamiltonian effective_hamiltonian(const SystemParams& params,
                                  const HilbertSpace& space);

OperatorMatrix build_lab_hamiltonian(const SystemParams& params,
                                     const HilbertSpace& space, double t);
OperatorMatrix build_rotating_hamiltonian(const SystemParams& params,
                                          const HilbertSpace& space, double t);
// Same model written directly in the dressed {|+>, |->} qubit basis.
OperatorMatrix build_dressed_hamiltonian(const SystemParams& params,
                                         const HilbertSpace& space, double t);
OperatorMatrix build_effective_hamiltonian(const SystemParams& params,
                                           const HilbertSpace& space);

// Embeds the 2x2 operator W q W^dagger on the qubit slot, W the dressed basis
// change; the identity map for QubitFrame::kBare.
OperatorMatrix qubit_in_frame(const OperatorMatrix& qubit_op, QubitFrame frame);

}  // namespace cqad
