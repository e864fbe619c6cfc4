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

#include "cqad/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cqad/units.hpp"

namespace cqad {

namespace {

constexpr Complex kI{0.0, 1.0};

double row_sum_norm(const SparseMatrix& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      rows(it.row()) += std::abs(it.value());
    }
  }
  return rows.size() > 0 ? rows.maxCoeff() : 0.0;
}

// out += rate * L rho L^dagger, with a dense temporary.
void add_sandwich(const SparseMatrix& op, const SparseMatrix& op_adjoint,
                  double rate, const DenseMatrix& rho, DenseMatrix& out,
                  DenseMatrix& scratch) {
  scratch.noalias() = op * rho;
  out.noalias() += rate * (scratch * op_adjoint);
}

}  // namespace

DissipatorSpec::DissipatorSpec(OperatorMatrix op_in, double rate_in)
    : op(std::move(op_in)), rate(rate_in) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("DissipatorSpec: rate must be finite and >= 0");
  }
}

DenseMatrix dissipator_apply(const DissipatorSpec& spec, const DensityState& rho) {
  require_same_space(spec.op.tag(), rho.tag(), "dissipator_apply");
  const SparseMatrix& l = spec.op.matrix();
  const SparseMatrix l_adj = l.adjoint();
  const SparseMatrix ldl = l_adj * l;
  // K = rate (L rho L^dagger / 2 - L^dagger L rho / 2); result K + K^dagger.
  DenseMatrix k = -0.5 * spec.rate * (ldl * rho.matrix());
  DenseMatrix scratch;
  add_sandwich(l, l_adj, 0.5 * spec.rate, rho.matrix(), k, scratch);
  DenseMatrix out = k.adjoint();
  out += k;
  return out;
}

std::vector<DissipatorSpec> thermal_dissipators(const SystemParams& params,
                                                const HilbertSpace& space,
                                                QubitFrame frame) {
  const auto q = qubit_operators();
  const auto sge = embed(qubit_in_frame(q.sigma_ge, frame), Slot::kQubit, space);
  const auto seg = embed(qubit_in_frame(q.sigma_eg, frame), Slot::kQubit, space);
  const auto a = embed(destroy(space.cutoff_a()), Slot::kModeA, space);
  const auto b = embed(destroy(space.cutoff_b()), Slot::kModeB, space);

  const double n_q = thermal_occupation(params.omega_q, params.temperature);
  const double n_a = thermal_occupation(params.omega_a, params.temperature);
  const double n_b = thermal_occupation(params.omega_b, params.temperature);

  std::vector<DissipatorSpec> out;
  out.emplace_back(sge, params.kappa_q * (n_q + 1.0));
  out.emplace_back(seg, params.kappa_q * n_q);
  out.emplace_back(a, params.gamma_a * (n_a + 1.0));
  out.emplace_back(a.adjoint(), params.gamma_a * n_a);
  out.emplace_back(b, params.gamma_b * (n_b + 1.0));
  out.emplace_back(b.adjoint(), params.gamma_b * n_b);
  return out;
}

MasterEquation::MasterEquation(Hamiltonian hamiltonian,
                               std::vector<DissipatorSpec> channels)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
  const Index dim = hamiltonian_.tag().dim();
  SparseMatrix damping(dim, dim);
  for (const auto& spec : channels_) {
    require_same_space(hamiltonian_.tag(), spec.op.tag(), "MasterEquation");
    if (spec.rate == 0.0) continue;
    SparseMatrix adj = spec.op.matrix().adjoint();
    adj.makeCompressed();
    damping += spec.rate * SparseMatrix(adj * spec.op.matrix());
    active_.push_back({spec.op.matrix(), std::move(adj), spec.rate});
  }
  drift_ = -kI * hamiltonian_.static_part() - Complex(0.5) * damping;
  drift_.makeCompressed();
}

MasterEquation MasterEquation::build(const SystemParams& params,
                                     const HilbertSpace& space, ModelKind kind,
                                     QubitFrame frame) {
  Hamiltonian h = kind == ModelKind::kFull
                      ? rotating_hamiltonian(params, space, frame)
                      : effective_hamiltonian(params, space);
  return {std::move(h), thermal_dissipators(params, space, frame)};
}

void MasterEquation::rhs(double t, const DenseMatrix& rho, DenseMatrix& out,
                         DenseMatrix& scratch) const {
  // K = (-i H - D/2) rho + (1/2) sum_k rate_k L_k rho L_k^dagger
  out.noalias() = drift_ * rho;
  for (const auto& term : hamiltonian_.rotating_terms()) {
    const Complex phase = std::polar(1.0, term.frequency * t);
    scratch.noalias() = term.op * rho;
    out.noalias() += (-kI * phase) * scratch;
    scratch.noalias() = term.op_adjoint * rho;
    out.noalias() += (-kI * std::conj(phase)) * scratch;
  }
  for (const auto& channel : active_) {
    add_sandwich(channel.op, channel.op_adjoint, 0.5 * channel.rate, rho, out,
                 scratch);
  }
  scratch = out.adjoint();
  out += scratch;
}

DenseMatrix MasterEquation::rhs(double t, const DenseMatrix& rho) const {
  DenseMatrix out(rho.rows(), rho.cols());
  DenseMatrix scratch(rho.rows(), rho.cols());
  rhs(t, rho, out, scratch);
  return out;
}

double MasterEquation::dissipation_bound() const {
  double total = 0.0;
  for (const auto& channel : active_) {
    total += channel.rate * row_sum_norm(SparseMatrix(channel.op_adjoint * channel.op));
  }
  return total;
}

DenseMatrix master_rhs(const SystemParams& params, const HilbertSpace& space,
                       ModelKind kind, double t, const DensityState& rho) {
  const auto equation = MasterEquation::build(params, space, kind);
  require_same_space(equation.tag(), rho.tag(), "master_rhs");
  return equation.rhs(t, rho.matrix());
}

DensityState partial_trace_qubit(const DensityState& rho) {
  const SpaceTag& tag = rho.tag();
  if (tag.kind() != SpaceTag::Kind::kFull) {
    throw InvalidArgument("partial_trace_qubit: expected a full-space state");
  }
  const Index m = tag.cutoff_a() * tag.cutoff_b();
  DenseMatrix reduced = rho.matrix().topLeftCorner(m, m);
  reduced += rho.matrix().bottomRightCorner(m, m);
  return {SpaceTag::two_mode(tag.cutoff_a(), tag.cutoff_b()), std::move(reduced),
          rho.time()};
}

double leakage(const DensityState& rho) {
  const SpaceTag& tag = rho.tag();
  if (tag.kind() == SpaceTag::Kind::kFactor) {
    throw InvalidArgument("leakage: expected a two-mode or full-space state");
  }
  const Index na = tag.cutoff_a();
  const Index nb = tag.cutoff_b();
  const Index m = na * nb;
  double top_a = 0.0;
  double top_b = 0.0;
  for (Index i = 0; i < rho.dim(); ++i) {
    const Index rest = i % m;
    const Index n_a = rest / nb;
    const Index n_b = rest % nb;
    const double p = rho.matrix()(i, i).real();
    if (n_a >= na - 2) top_a += p;
    if (n_b >= nb - 2) top_b += p;
  }
  return std::max(top_a, top_b);
}

double min_eigenvalue(const DenseMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitian,
                                                    Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double automatic_step(const MasterEquation& equation, const StepperConfig& config) {
  if (config.steps_per_period < 1) {
    throw InvalidArgument("StepperConfig: steps_per_period must be >= 1");
  }
  const double norm = equation.hamiltonian().norm_bound();
  double omega_max = equation.hamiltonian().max_frequency();
  if (omega_max == 0.0) omega_max = std::max(2.0 * norm, equation.dissipation_bound());
  double step = omega_max > 0.0
                    ? units::kTwoPi / omega_max / config.steps_per_period
                    : std::numeric_limits<double>::infinity();
  // Keep h ||L|| <= 1, well inside the RK4 stability region.
  const double generator = 2.0 * norm + equation.dissipation_bound();
  if (generator > 0.0) step = std::min(step, 1.0 / generator);
  if (config.max_step > 0.0) step = std::min(step, config.max_step);
  if (!std::isfinite(step)) step = config.output_interval;
  return step;
}

namespace {

class Integrator {
 public:
  Integrator(const MasterEquation& equation, Index dim)
      : equation_(equation),
        scratch_(dim, dim),
        stage_(dim, dim) {
    for (auto& k : k_) k.resize(dim, dim);
  }

  // Classical RK4 from t over h.
  void rk4(double t, double h, DenseMatrix& rho) {
    equation_.rhs(t, rho, k_[0], scratch_);
    stage_ = rho + (h / 2.0) * k_[0];
    equation_.rhs(t + h / 2.0, stage_, k_[1], scratch_);
    stage_ = rho + (h / 2.0) * k_[1];
    equation_.rhs(t + h / 2.0, stage_, k_[2], scratch_);
    stage_ = rho + h * k_[2];
    equation_.rhs(t + h, stage_, k_[3], scratch_);
    rho += (h / 6.0) * (k_[0] + 2.0 * k_[1] + 2.0 * k_[2] + k_[3]);
  }

  // Dormand-Prince 5(4) trial step. Writes the 5th-order solution into
  // `trial` and returns the max-abs embedded error estimate.
  double dopri(double t, double h, const DenseMatrix& rho, DenseMatrix& trial) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    equation_.rhs(t, rho, k_[0], scratch_);
    stage_ = rho + h * a21 * k_[0];
    equation_.rhs(t + c2 * h, stage_, k_[1], scratch_);
    stage_ = rho + h * (a31 * k_[0] + a32 * k_[1]);
    equation_.rhs(t + c3 * h, stage_, k_[2], scratch_);
    stage_ = rho + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    equation_.rhs(t + c4 * h, stage_, k_[3], scratch_);
    stage_ = rho + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    equation_.rhs(t + c5 * h, stage_, k_[4], scratch_);
    stage_ = rho + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] +
                        a65 * k_[4]);
    equation_.rhs(t + h, stage_, k_[5], scratch_);
    trial = rho + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] +
                       b6 * k_[5]);
    equation_.rhs(t + h, trial, k_[6], scratch_);
    stage_ = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] +
                  e6 * k_[5] + e7 * k_[6]);
    return stage_.cwiseAbs().maxCoeff();
  }

 private:
  const MasterEquation& equation_;
  std::array<DenseMatrix, 7> k_;
  DenseMatrix scratch_;
  DenseMatrix stage_;
};

std::vector<double> output_times(double t0, double t_end, double interval) {
  if (!(interval > 0.0)) {
    throw InvalidArgument("StepperConfig: output_interval must be > 0");
  }
  std::vector<double> times{t0};
  const double span = t_end - t0;
  const auto count = static_cast<std::size_t>(std::ceil(span / interval - 1e-9));
  for (std::size_t k = 1; k < count; ++k) times.push_back(t0 + k * interval);
  if (span > 0.0) times.push_back(t_end);
  return times;
}

}  // namespace

EvolutionReport evolve(const MasterEquation& equation, const DensityState& rho0,
                       double t_end, const StepperConfig& config) {
  require_same_space(equation.tag(), rho0.tag(), "evolve");
  if (rho0.tag().kind() != SpaceTag::Kind::kFull) {
    throw InvalidArgument("evolve: initial state must live on the full space");
  }
  if (t_end < rho0.time()) {
    throw InvalidArgument("evolve: t_end precedes the initial time");
  }
  if (config.positivity_stride < 1) {
    throw InvalidArgument("StepperConfig: positivity_stride must be >= 1");
  }

  const Index dim = rho0.dim();
  const double max_step = automatic_step(equation, config);
  const auto times = output_times(rho0.time(), t_end, config.output_interval);

  EvolutionReport report;
  report.step_size = max_step;
  DenseMatrix rho = rho0.matrix();
  Integrator integrator(equation, dim);
  DenseMatrix trial(dim, dim);
  double adaptive_step = max_step;

  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) {
      const double start = times[k - 1];
      const double span = times[k] - start;
      if (config.method == StepperConfig::Method::kRk4) {
        const auto n = static_cast<std::size_t>(std::ceil(span / max_step - 1e-12));
        const double h = span / static_cast<double>(std::max<std::size_t>(n, 1));
        for (std::size_t i = 0; i < n; ++i) {
          integrator.rk4(start + static_cast<double>(i) * h, h, rho);
        }
        report.steps += n;
      } else {
        double t = start;
        while (times[k] - t > 1e-12 * std::max(1.0, std::abs(times[k]))) {
          const double h = std::min(adaptive_step, times[k] - t);
          const double err = integrator.dopri(t, h, rho, trial);
          const double scale =
              err > 0.0 ? 0.9 * std::pow(config.tolerance / err, 0.2) : 5.0;
          if (err <= config.tolerance) {
            rho.swap(trial);
            t += h;
            ++report.steps;
            report.step_size = h;
          }
          adaptive_step = std::min(max_step, h * std::clamp(scale, 0.2, 5.0));
        }
      }
    }

    DensityState full(rho0.tag(), rho, times[k]);
    EvolutionSample sample{times[k],
                           std::abs(rho.trace() - Complex(1.0)),
                           full.hermiticity_error(),
                           leakage(full),
                           std::numeric_limits<double>::quiet_NaN(),
                           partial_trace_qubit(full)};
    if (config.check_positivity &&
        (k % static_cast<std::size_t>(config.positivity_stride) == 0 ||
         k + 1 == times.size())) {
      sample.min_eigenvalue = min_eigenvalue(rho);
      report.min_eigenvalue = std::min(report.min_eigenvalue, sample.min_eigenvalue);
    }
    report.trace_drift = std::max(report.trace_drift, sample.trace_error);
    report.hermiticity_drift =
        std::max(report.hermiticity_drift, sample.hermiticity_error);
    report.max_leakage = std::max(report.max_leakage, sample.leakage);
    report.samples.push_back(std::move(sample));
    report.final_state = std::move(full);

    const auto& last = report.samples.back();
    if (last.trace_error > config.trace_failure) {
      std::ostringstream msg;
      msg << "trace drift " << last.trace_error << " exceeds "
          << config.trace_failure << " at t = " << last.time << " us";
      report.status = EvolutionReport::Status::kIntegrationFailure;
      report.message = msg.str();
      const std::string what = report.message;
      throw IntegrationFailure(what, std::move(report));
    }
    if (last.leakage > config.leakage_bound) {
      std::ostringstream msg;
      msg << "population " << last.leakage
          << " in the top two Fock levels exceeds " << config.leakage_bound
          << " at t = " << last.time << " us; raise the cutoffs";
      report.status = EvolutionReport::Status::kTruncationFailure;
      report.message = msg.str();
      const std::string what = report.message;
      throw TruncationFailure(what, std::move(report));
    }
  }
  return report;
}

EvolutionReport evolve(const DensityState& rho0, const SystemParams& params,
                       const HilbertSpace& space, double t_end,
                       const StepperConfig& config, ModelKind kind) {
  const auto equation = MasterEquation::build(params, space, kind);
  return evolve(equation, rho0, t_end, config);
}

}  // namespace cqad
