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

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cqad/errors.hpp"

namespace cqad {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;

// Tensor factor an operator is embedded into.
enum class Slot { kQubit, kModeA, kModeB };

// Truncated space qubit (x) mode_a (x) mode_b.
//
// Basis index of (q, n_a, n_b) is q * (N_a * N_b) + n_a * N_b + n_b. The qubit
// is outermost so the partial trace over it is a sum of two contiguous blocks.
// Qubit basis order is |e> = 0, |g> = 1.
class HilbertSpace {
 public:
  static constexpr Index kQubitDim = 2;

  HilbertSpace(Index cutoff_a, Index cutoff_b);

  Index cutoff_a() const { return cutoff_a_; }
  Index cutoff_b() const { return cutoff_b_; }
  Index mode_dim() const { return cutoff_a_ * cutoff_b_; }
  Index dim() const { return kQubitDim * mode_dim(); }
  Index slot_dim(Slot slot) const;

  Index index(Index qubit, Index n_a, Index n_b) const;

  struct Label {
    Index qubit;
    Index n_a;
    Index n_b;
  };
  Label label(Index index) const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  Index cutoff_a_;
  Index cutoff_b_;
};

// Identity of the space an operator or state lives on. Operators with unequal
// tags never combine.
class SpaceTag {
 public:
  enum class Kind { kFactor, kTwoMode, kFull };

  static SpaceTag factor(Index dim);
  static SpaceTag two_mode(Index cutoff_a, Index cutoff_b);
  static SpaceTag full(const HilbertSpace& space);

  Kind kind() const { return kind_; }
  Index dim() const;
  Index cutoff_a() const { return cutoff_a_; }
  Index cutoff_b() const { return cutoff_b_; }
  std::string describe() const;

  friend bool operator==(const SpaceTag&, const SpaceTag&) = default;

 private:
  SpaceTag(Kind kind, Index qubit, Index cutoff_a, Index cutoff_b)
      : kind_(kind), qubit_(qubit), cutoff_a_(cutoff_a), cutoff_b_(cutoff_b) {}

  Kind kind_;
  Index qubit_;
  Index cutoff_a_;
  Index cutoff_b_;
};

void require_same_space(const SpaceTag& lhs, const SpaceTag& rhs,
                        const char* context);

// Immutable sparse operator tagged with the space it acts on.
class OperatorMatrix {
 public:
  OperatorMatrix(SpaceTag tag, SparseMatrix matrix);

  const SpaceTag& tag() const { return tag_; }
  Index dim() const { return matrix_.rows(); }
  const SparseMatrix& matrix() const { return matrix_; }
  DenseMatrix dense() const { return DenseMatrix(matrix_); }

  Complex coeff(Index row, Index col) const { return matrix_.coeff(row, col); }
  Complex trace() const;
  OperatorMatrix adjoint() const;

  // Largest |entry|; 0 for the zero operator.
  double max_abs() const;
  // Largest |O - O^dagger| entry.
  double hermiticity_error() const;

  friend OperatorMatrix operator+(const OperatorMatrix& lhs,
                                  const OperatorMatrix& rhs);
  friend OperatorMatrix operator-(const OperatorMatrix& lhs,
                                  const OperatorMatrix& rhs);
  friend OperatorMatrix operator*(const OperatorMatrix& lhs,
                                  const OperatorMatrix& rhs);
  friend OperatorMatrix operator*(Complex scale, const OperatorMatrix& op);

 private:
  SpaceTag tag_;
  SparseMatrix matrix_;
};

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix identity(const SpaceTag& tag);

OperatorMatrix destroy(Index cutoff);
OperatorMatrix create(Index cutoff);
OperatorMatrix number(Index cutoff);

// Two-level operators in the {|e>, |g>} basis (|e> = index 0).
struct QubitOperators {
  OperatorMatrix sigma_z;          // |e><e| - |g><g|
  OperatorMatrix sigma_eg;         // |e><g|, raising
  OperatorMatrix sigma_ge;         // |g><e|, lowering
  OperatorMatrix plus_projector;   // |+><+|, |+> = (|e> + |g>)/sqrt(2)
  OperatorMatrix minus_projector;  // |-><-|, |-> = (|e> - |g>)/sqrt(2)
};
QubitOperators qubit_operators();

// Real orthogonal matrix W with W(k, j) = <k|j>, k in {+, -}, j in {e, g}.
// Conjugating by W maps {e, g}-basis qubit operators to the dressed basis.
Eigen::Matrix2cd dressed_basis_change();

// identity (x) ... (x) op (x) ... (x) identity under the fixed ordering.
OperatorMatrix embed(const OperatorMatrix& op, Slot slot,
                     const HilbertSpace& space);

// Kronecker product of sparse matrices.
SparseMatrix kron(const SparseMatrix& lhs, const SparseMatrix& rhs);

// Dense density matrix with its space tag and evolution time (microseconds).
// Construction rejects matrices that are not Hermitian to 1e-12.
class DensityState {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  DensityState(SpaceTag tag, DenseMatrix matrix, double time_us = 0.0);

  const SpaceTag& tag() const { return tag_; }
  const DenseMatrix& matrix() const { return matrix_; }
  double time() const { return time_; }
  Index dim() const { return matrix_.rows(); }

  Complex trace() const { return matrix_.trace(); }
  double hermiticity_error() const;

 private:
  SpaceTag tag_;
  DenseMatrix matrix_;
  double time_;
};

double hermiticity_error(const DenseMatrix& m);

// trace(rho * op).
Complex expectation(const DensityState& rho, const OperatorMatrix& op);

// Single-mode thermal populations p_n = nbar^n / (1 + nbar)^(n + 1),
// renormalised over the truncated levels.
Eigen::VectorXd thermal_populations(double mean_occupation, Index cutoff);

// rho_qubit (x) rho_a (x) rho_b on the full space.
DensityState product_state(const HilbertSpace& space,
                           const Eigen::Matrix2cd& qubit,
                           const DenseMatrix& mode_a,
                           const DenseMatrix& mode_b);

// rho_a (x) rho_b on the two-mode space.
DensityState two_mode_product_state(const DenseMatrix& mode_a,
                                    const DenseMatrix& mode_b);

DenseMatrix fock_projector(Index cutoff, Index n);
DenseMatrix thermal_mode(Index cutoff, double mean_occupation);
Eigen::Matrix2cd qubit_pure_state(Complex amp_e, Complex amp_g);

}  // namespace cqad
