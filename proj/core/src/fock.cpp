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

#include "cqad/fock.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace cqad {

using Triplet = Eigen::Triplet<Complex>;

HilbertSpace::HilbertSpace(Index cutoff_a, Index cutoff_b)
    : cutoff_a_(cutoff_a), cutoff_b_(cutoff_b) {
  if (cutoff_a < 2 || cutoff_b < 2) {
    throw InvalidArgument("HilbertSpace: Fock cutoffs must be >= 2");
  }
}

Index HilbertSpace::slot_dim(Slot slot) const {
  switch (slot) {
    case Slot::kQubit:
      return kQubitDim;
    case Slot::kModeA:
      return cutoff_a_;
    case Slot::kModeB:
      return cutoff_b_;
  }
  return 0;
}

Index HilbertSpace::index(Index qubit, Index n_a, Index n_b) const {
  if (qubit < 0 || qubit >= kQubitDim || n_a < 0 || n_a >= cutoff_a_ ||
      n_b < 0 || n_b >= cutoff_b_) {
    throw InvalidArgument("HilbertSpace::index: label out of range");
  }
  return qubit * mode_dim() + n_a * cutoff_b_ + n_b;
}

HilbertSpace::Label HilbertSpace::label(Index index) const {
  if (index < 0 || index >= dim()) {
    throw InvalidArgument("HilbertSpace::label: index out of range");
  }
  const Index q = index / mode_dim();
  const Index rest = index % mode_dim();
  return {q, rest / cutoff_b_, rest % cutoff_b_};
}

SpaceTag SpaceTag::factor(Index dim) { return {Kind::kFactor, 1, dim, 1}; }

SpaceTag SpaceTag::two_mode(Index cutoff_a, Index cutoff_b) {
  return {Kind::kTwoMode, 1, cutoff_a, cutoff_b};
}

SpaceTag SpaceTag::full(const HilbertSpace& space) {
  return {Kind::kFull, HilbertSpace::kQubitDim, space.cutoff_a(),
          space.cutoff_b()};
}

Index SpaceTag::dim() const { return qubit_ * cutoff_a_ * cutoff_b_; }

std::string SpaceTag::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kFactor:
      out << "factor(" << cutoff_a_ << ")";
      break;
    case Kind::kTwoMode:
      out << "two_mode(" << cutoff_a_ << "x" << cutoff_b_ << ")";
      break;
    case Kind::kFull:
      out << "full(2x" << cutoff_a_ << "x" << cutoff_b_ << ")";
      break;
  }
  return out.str();
}

void require_same_space(const SpaceTag& lhs, const SpaceTag& rhs,
                        const char* context) {
  if (!(lhs == rhs)) {
    throw InvalidArgument(std::string(context) + ": space mismatch " +
                          lhs.describe() + " vs " + rhs.describe());
  }
}

OperatorMatrix::OperatorMatrix(SpaceTag tag, SparseMatrix matrix)
    : tag_(tag), matrix_(std::move(matrix)) {
  if (matrix_.rows() != tag_.dim() || matrix_.cols() != tag_.dim()) {
    throw InvalidArgument("OperatorMatrix: matrix shape does not match " +
                          tag_.describe());
  }
  matrix_.makeCompressed();
}

Complex OperatorMatrix::trace() const {
  Complex sum{0.0, 0.0};
  for (Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
      if (it.row() == it.col()) sum += it.value();
    }
  }
  return sum;
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return {tag_, SparseMatrix(matrix_.adjoint())};
}

double OperatorMatrix::max_abs() const {
  double best = 0.0;
  for (Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
      best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

double OperatorMatrix::hermiticity_error() const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double best = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_space(lhs.tag_, rhs.tag_, "operator+");
  return {lhs.tag_, SparseMatrix(lhs.matrix_ + rhs.matrix_)};
}

OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_space(lhs.tag_, rhs.tag_, "operator-");
  return {lhs.tag_, SparseMatrix(lhs.matrix_ - rhs.matrix_)};
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_space(lhs.tag_, rhs.tag_, "operator*");
  return {lhs.tag_, SparseMatrix(lhs.matrix_ * rhs.matrix_)};
}

OperatorMatrix operator*(Complex scale, const OperatorMatrix& op) {
  return {op.tag_, SparseMatrix(scale * op.matrix_)};
}

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  return lhs * rhs - rhs * lhs;
}

OperatorMatrix identity(const SpaceTag& tag) {
  SparseMatrix m(tag.dim(), tag.dim());
  m.setIdentity();
  return {tag, std::move(m)};
}

OperatorMatrix destroy(Index cutoff) {
  if (cutoff < 2) throw InvalidArgument("destroy: cutoff must be >= 2");
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(cutoff - 1));
  for (Index n = 1; n < cutoff; ++n) {
    entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  }
  SparseMatrix m(cutoff, cutoff);
  m.setFromTriplets(entries.begin(), entries.end());
  return {SpaceTag::factor(cutoff), std::move(m)};
}

OperatorMatrix create(Index cutoff) { return destroy(cutoff).adjoint(); }

OperatorMatrix number(Index cutoff) {
  if (cutoff < 2) throw InvalidArgument("number: cutoff must be >= 2");
  std::vector<Triplet> entries;
  for (Index n = 1; n < cutoff; ++n) {
    entries.emplace_back(n, n, static_cast<double>(n));
  }
  SparseMatrix m(cutoff, cutoff);
  m.setFromTriplets(entries.begin(), entries.end());
  return {SpaceTag::factor(cutoff), std::move(m)};
}

namespace {

OperatorMatrix qubit_from_dense(const Eigen::Matrix2cd& m) {
  return {SpaceTag::factor(2), m.sparseView(0.0, 0.0)};
}

}  // namespace

QubitOperators qubit_operators() {
  constexpr Index e = 0;
  constexpr Index g = 1;
  Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
  sz(e, e) = 1.0;
  sz(g, g) = -1.0;
  Eigen::Matrix2cd seg = Eigen::Matrix2cd::Zero();
  seg(e, g) = 1.0;
  const Eigen::Matrix2cd sge = seg.adjoint();
  // |+><+| and |-><-| have entries 1/2 and +-1/2 in the {e, g} basis.
  Eigen::Matrix2cd pp;
  pp << 0.5, 0.5, 0.5, 0.5;
  Eigen::Matrix2cd mm;
  mm << 0.5, -0.5, -0.5, 0.5;
  return {qubit_from_dense(sz), qubit_from_dense(seg), qubit_from_dense(sge),
          qubit_from_dense(pp), qubit_from_dense(mm)};
}

Eigen::Matrix2cd dressed_basis_change() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd w;
  w << h, h, h, -h;
  return w;
}

SparseMatrix kron(const SparseMatrix& lhs, const SparseMatrix& rhs) {
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(lhs.nonZeros() * rhs.nonZeros()));
  for (Index i = 0; i < lhs.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator a(lhs, i); a; ++a) {
      for (Index j = 0; j < rhs.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator b(rhs, j); b; ++b) {
          entries.emplace_back(a.row() * rhs.rows() + b.row(),
                               a.col() * rhs.cols() + b.col(),
                               a.value() * b.value());
        }
      }
    }
  }
  SparseMatrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

OperatorMatrix embed(const OperatorMatrix& op, Slot slot,
                     const HilbertSpace& space) {
  if (op.tag().kind() != SpaceTag::Kind::kFactor ||
      op.dim() != space.slot_dim(slot)) {
    throw InvalidArgument("embed: operator dimension " +
                          std::to_string(op.dim()) +
                          " does not match slot dimension " +
                          std::to_string(space.slot_dim(slot)));
  }
  auto eye = [](Index n) {
    SparseMatrix m(n, n);
    m.setIdentity();
    return m;
  };
  SparseMatrix q = slot == Slot::kQubit ? op.matrix() : eye(2);
  SparseMatrix a = slot == Slot::kModeA ? op.matrix() : eye(space.cutoff_a());
  SparseMatrix b = slot == Slot::kModeB ? op.matrix() : eye(space.cutoff_b());
  return {SpaceTag::full(space), kron(q, kron(a, b))};
}

double hermiticity_error(const DenseMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityState::DensityState(SpaceTag tag, DenseMatrix matrix, double time_us)
    : tag_(tag), matrix_(std::move(matrix)), time_(time_us) {
  if (matrix_.rows() != tag_.dim() || matrix_.cols() != tag_.dim()) {
    throw InvalidArgument("DensityState: matrix shape does not match " +
                          tag_.describe());
  }
  if (cqad::hermiticity_error(matrix_) > kHermiticityTolerance) {
    throw InvalidArgument("DensityState: matrix is not Hermitian");
  }
}

double DensityState::hermiticity_error() const {
  return cqad::hermiticity_error(matrix_);
}

Complex expectation(const DensityState& rho, const OperatorMatrix& op) {
  require_same_space(rho.tag(), op.tag(), "expectation");
  // trace(rho * op) = sum_ij rho(j, i) op(i, j)
  Complex sum{0.0, 0.0};
  const SparseMatrix& m = op.matrix();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      sum += rho.matrix()(it.col(), it.row()) * it.value();
    }
  }
  return sum;
}

Eigen::VectorXd thermal_populations(double mean_occupation, Index cutoff) {
  if (mean_occupation < 0.0) {
    throw InvalidArgument("thermal_populations: mean occupation must be >= 0");
  }
  if (cutoff < 1) throw InvalidArgument("thermal_populations: bad cutoff");
  Eigen::VectorXd p(cutoff);
  const double ratio = mean_occupation / (1.0 + mean_occupation);
  double term = 1.0 / (1.0 + mean_occupation);
  for (Index n = 0; n < cutoff; ++n) {
    p(n) = term;
    term *= ratio;
  }
  return p / p.sum();
}

DenseMatrix fock_projector(Index cutoff, Index n) {
  if (n < 0 || n >= cutoff) throw InvalidArgument("fock_projector: n out of range");
  DenseMatrix m = DenseMatrix::Zero(cutoff, cutoff);
  m(n, n) = 1.0;
  return m;
}

DenseMatrix thermal_mode(Index cutoff, double mean_occupation) {
  return thermal_populations(mean_occupation, cutoff)
      .cast<Complex>()
      .asDiagonal();
}

Eigen::Matrix2cd qubit_pure_state(Complex amp_e, Complex amp_g) {
  Eigen::Vector2cd psi(amp_e, amp_g);
  psi.normalize();
  return psi * psi.adjoint();
}

namespace {

DenseMatrix dense_kron(const DenseMatrix& lhs, const DenseMatrix& rhs) {
  DenseMatrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Index i = 0; i < lhs.rows(); ++i) {
    for (Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) =
          lhs(i, j) * rhs;
    }
  }
  return out;
}

}  // namespace

DensityState product_state(const HilbertSpace& space,
                           const Eigen::Matrix2cd& qubit,
                           const DenseMatrix& mode_a,
                           const DenseMatrix& mode_b) {
  if (mode_a.rows() != space.cutoff_a() || mode_b.rows() != space.cutoff_b()) {
    throw InvalidArgument("product_state: factor dimension mismatch");
  }
  return {SpaceTag::full(space),
          dense_kron(DenseMatrix(qubit), dense_kron(mode_a, mode_b))};
}

DensityState two_mode_product_state(const DenseMatrix& mode_a,
                                    const DenseMatrix& mode_b) {
  return {SpaceTag::two_mode(mode_a.rows(), mode_b.rows()),
          dense_kron(mode_a, mode_b)};
}

}  // namespace cqad
