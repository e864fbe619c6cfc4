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

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqad/fock.hpp"
#include "cqad/model.hpp"

namespace cqad {

// One Lindblad channel rate * (L rho L^dagger - {L^dagger L, rho} / 2).
struct DissipatorSpec {
  DissipatorSpec(OperatorMatrix op, double rate);

  OperatorMatrix op;
  double rate;
};

DenseMatrix dissipator_apply(const DissipatorSpec& spec, const DensityState& rho);

// The six thermal channels: qubit lowering/raising at kappa_q (n_q + 1) and
// kappa_q n_q, and a, a^dagger, b, b^dagger likewise with gamma_a, gamma_b.
// n_q uses omega_q and the same bath temperature as the modes. Qubit
// operators are expressed in `frame`.
std::vector<DissipatorSpec> thermal_dissipators(
    const SystemParams& params, const HilbertSpace& space,
    QubitFrame frame = QubitFrame::kBare);

enum class ModelKind { kFull, kEffective };

// Matrix-free Lindblad generator. The superoperator is never materialised:
// each evaluation is a handful of sparse-dense products.
class MasterEquation {
 public:
  MasterEquation(Hamiltonian hamiltonian, std::vector<DissipatorSpec> channels);

  // kFull: rotating-frame model in `frame`. kEffective: two-mode squeezing
  // Hamiltonian (identity on the qubit). Both with thermal_dissipators.
  static MasterEquation build(const SystemParams& params,
                              const HilbertSpace& space, ModelKind kind,
                              QubitFrame frame = QubitFrame::kBare);

  const SpaceTag& tag() const { return hamiltonian_.tag(); }
  const Hamiltonian& hamiltonian() const { return hamiltonian_; }
  const std::vector<DissipatorSpec>& channels() const { return channels_; }

  // out = d rho / dt at time t. `scratch` is resized as needed. The result is
  // assembled as K + K^dagger so it is exactly Hermitian for Hermitian rho.
  void rhs(double t, const DenseMatrix& rho, DenseMatrix& out,
           DenseMatrix& scratch) const;
  DenseMatrix rhs(double t, const DenseMatrix& rho) const;

  // Upper bound on total dissipative rate, sum_k rate_k ||L_k^dagger L_k||.
  double dissipation_bound() const;

 private:
  struct Channel {
    SparseMatrix op;
    SparseMatrix op_adjoint;
    double rate;
  };

  Hamiltonian hamiltonian_;
  std::vector<DissipatorSpec> channels_;
  std::vector<Channel> active_;
  SparseMatrix drift_;  // -i H_static - (1/2) sum_k rate_k L_k^dagger L_k
};

DenseMatrix master_rhs(const SystemParams& params, const HilbertSpace& space,
                       ModelKind kind, double t, const DensityState& rho);

struct StepperConfig {
  enum class Method { kRk4, kAdaptive };

  Method method = Method::kRk4;
  double output_interval = 1.0;  // us
  // Fixed step is (2 pi / omega_max) / steps_per_period, omega_max the fastest
  // phase in H(t); for a static H the larger of its spectral width and the
  // dissipation bound. Capped so that h times the generator norm stays <= 1.
  int steps_per_period = 40;
  double max_step = 0.0;          // us; 0 means automatic only
  double tolerance = 1e-9;        // adaptive: max-abs local error per step
  double trace_failure = 1e-6;
  double leakage_bound = 1e-3;    // infinity disables the check
  bool check_positivity = true;
  int positivity_stride = 1;      // check every n-th sample
};

struct EvolutionSample {
  double time;
  double trace_error;
  double hermiticity_error;
  double leakage;
  double min_eigenvalue;  // NaN when not checked at this sample
  DensityState modes;     // qubit traced out
};

struct EvolutionReport {
  enum class Status { kOk, kIntegrationFailure, kTruncationFailure };

  std::vector<EvolutionSample> samples;
  std::optional<DensityState> final_state;
  double trace_drift = 0.0;
  double hermiticity_drift = 0.0;
  double max_leakage = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  double step_size = 0.0;  // fixed-step size, or the last adaptive step
  Status status = Status::kOk;
  std::string message;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, EvolutionReport report)
      : std::runtime_error(what), report_(std::move(report)) {}

  const EvolutionReport& report() const { return report_; }
  virtual const char* tag() const = 0;

 private:
  EvolutionReport report_;
};

class IntegrationFailure : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
  const char* tag() const override { return "integration-failure"; }
};

class TruncationFailure : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
  const char* tag() const override { return "truncation-failure"; }
};

double automatic_step(const MasterEquation& equation, const StepperConfig& config);

// Integrates from rho0.time() to t_end, sampling every output_interval and at
// t_end. The trace is never renormalised. Throws IntegrationFailure when
// |tr rho - 1| exceeds config.trace_failure and TruncationFailure when the
// leakage exceeds config.leakage_bound; both carry the partial report.
EvolutionReport evolve(const MasterEquation& equation, const DensityState& rho0,
                       double t_end, const StepperConfig& config);
EvolutionReport evolve(const DensityState& rho0, const SystemParams& params,
                       const HilbertSpace& space, double t_end,
                       const StepperConfig& config,
                       ModelKind kind = ModelKind::kFull);

// Sums the two qubit blocks; works in either qubit basis.
DensityState partial_trace_qubit(const DensityState& rho);

// Largest population held in the top two Fock levels of either mode.
double leakage(const DensityState& rho);

double min_eigenvalue(const DenseMatrix& hermitian);

}  // namespace cqad
