#include "nvoc/floquet.hpp"

#include <cmath>
#include <string>

namespace nvoc {

MatrixXc floquet_matrix(const FourierComponents& h, double omega, int truncation) {
  const int d = h.dimension();
  const int blocks = 2 * truncation + 1;
  MatrixXc f = MatrixXc::Zero(blocks * d, blocks * d);
  for (int m = -truncation; m <= truncation; ++m) {
    for (int n = -truncation; n <= truncation; ++n) {
      if (!h.contains(m - n)) continue;
      f.block((m + truncation) * d, (n + truncation) * d, d, d) = h[m - n];
    }
    f.block((m + truncation) * d, (m + truncation) * d, d, d).diagonal().array() += m * omega;
  }
  return f;
}

namespace {

Eigen::SelfAdjointEigenSolver<MatrixXc> diagonalize(const MatrixXc& f) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(f);
  if (es.info() != Eigen::Success) throw NumericalError("Floquet matrix eigensolver failed");
  return es;
}

VectorXc evolution_phases(const VectorXd& quasi_energies, double t) {
  return (Complex(0.0, -t) * quasi_energies.cast<Complex>()).array().exp();
}

// (exp(-i a t) - exp(-i b t)) / (a - b), continuous at a == b.
Complex divided_difference(double a, double b, double t) {
  const double mean = 0.5 * (a + b);
  const double half_gap = 0.5 * (a - b) * t;
  const double sinc = std::abs(half_gap) > 1e-6 ? std::sin(half_gap) / half_gap : 1.0 - half_gap * half_gap / 6.0;
  return Complex(0.0, -t) * std::exp(Complex(0.0, -mean * t)) * sinc;
}

constexpr double unitarity_tolerance = 1e-10;

MatrixXc assemble_propagator(const PulseCoefficients& pulse, const EnsembleMember& member,
                             const HyperfineConfig& config, int truncation) {
  MatrixXc u = MatrixXc::Zero(config.dimension(), config.dimension());
  for (int k = 0; k < config.level_count; ++k) {
    u.block(2 * k, 2 * k, 2, 2) = transition_propagator(pulse, member.detuning_mhz + config.offset_mhz(k),
                                                        member.amplitude, truncation);
  }
  return u;
}

}  // namespace

MatrixXc floquet_evolution(const FourierComponents& h, double omega, double t, int truncation) {
  if (truncation < h.max_harmonic()) {
    throw ValidationError("truncation", "must be at least the number of pulse harmonics");
  }
  const int d = h.dimension();
  const auto es = diagonalize(floquet_matrix(h, omega, truncation));
  const MatrixXc& v = es.eigenvectors();
  const VectorXc phases = evolution_phases(es.eigenvalues(), t);
  // block column 0 of exp(-i F t)
  const MatrixXc column = v * phases.asDiagonal() * v.middleRows(truncation * d, d).adjoint();
  MatrixXc u = MatrixXc::Zero(d, d);
  for (int n = -truncation; n <= truncation; ++n) {
    u += std::exp(Complex(0.0, n * omega * t)) * column.middleRows((n + truncation) * d, d);
  }
  return u;
}

int default_truncation(const PulseCoefficients& pulse) { return pulse.harmonics() + 10; }

MatrixXc transition_propagator(const PulseCoefficients& pulse, double detuning_mhz, double amplitude,
                               int truncation) {
  return floquet_evolution(transition_fourier_components(pulse, detuning_mhz, amplitude), pulse.fundamental(),
                           pulse.duration(), truncation);
}

Propagator floquet_propagator(const PulseCoefficients& pulse, const EnsembleMember& member,
                              const HyperfineConfig& config, const FloquetOptions& options) {
  config.validate();
  if (options.truncation > 0) {
    MatrixXc u = assemble_propagator(pulse, member, config, options.truncation);
    if (options.verify) {
      const MatrixXc next = assemble_propagator(pulse, member, config, options.truncation + 2);
      const double change = operator_norm(u - next);
      if (change > options.tolerance || unitarity_defect(u) > unitarity_tolerance) {
        throw NumericalError("Floquet truncation " + std::to_string(options.truncation) +
                             " not converged (change " + std::to_string(change) + ")");
      }
    }
    return {std::move(u), pulse.duration()};
  }
  const int m = converged_truncation(pulse, member, config, options);
  return {assemble_propagator(pulse, member, config, m), pulse.duration()};
}

int converged_truncation(const PulseCoefficients& pulse, const EnsembleMember& member,
                         const HyperfineConfig& config, const FloquetOptions& options) {
  int m = options.truncation > 0 ? options.truncation : default_truncation(pulse);
  MatrixXc previous = assemble_propagator(pulse, member, config, m);
  while (m <= options.max_truncation) {
    MatrixXc next = assemble_propagator(pulse, member, config, m + 2);
    // The folded propagator is unitary only up to truncation error, so both are gated.
    if (operator_norm(previous - next) < options.tolerance && unitarity_defect(next) <= unitarity_tolerance) {
      return m + 2;
    }
    m *= 2;
    previous = assemble_propagator(pulse, member, config, m);
  }
  throw NumericalError("Floquet truncation did not converge below " + std::to_string(options.max_truncation) +
                       " harmonics");
}

TransitionTransfer floquet_transfer(const PulseCoefficients& pulse, double detuning_mhz, double amplitude,
                                    int truncation, bool with_gradient) {
  if (truncation < pulse.harmonics()) {
    throw ValidationError("truncation", "must be at least the number of pulse harmonics");
  }
  const double omega = pulse.fundamental();
  const double t = pulse.duration();
  const FourierComponents h = transition_fourier_components(pulse, detuning_mhz, amplitude);
  const auto es = diagonalize(floquet_matrix(h, omega, truncation));
  const MatrixXc& v = es.eigenvectors();
  const VectorXd& lambda = es.eigenvalues();
  const auto size = v.rows();
  auto index = [truncation](int m, int a) { return (m + truncation) * 2 + a; };

  // Amplitude <-1| U |0> = phi_f^dagger exp(-i F t) phi_i with phi_i = |0> in
  // harmonic 0 and phi_f stacking exp(-i n W t) |-1> over harmonics n.
  VectorXc phi_f = VectorXc::Zero(size);
  for (int n = -truncation; n <= truncation; ++n) phi_f(index(n, 1)) = std::exp(Complex(0.0, -n * omega * t));
  const VectorXc x = v.adjoint() * phi_f;
  const VectorXc y = v.row(index(0, 0)).adjoint();
  const VectorXc phases = evolution_phases(lambda, t);
  const Complex amp = (x.conjugate().array() * phases.array() * y.array()).sum();

  TransitionTransfer result;
  result.fidelity = std::norm(amp);
  if (!with_gradient) return result;

  // d amp = sum_ab dF_ab C_ab with C = conj(V) W V^T,
  // W_pq = conj(x_p) D_pq y_q and D the divided differences of exp(-i lambda t).
  MatrixXc w(size, size);
  for (Eigen::Index q = 0; q < size; ++q) {
    for (Eigen::Index p = 0; p < size; ++p) {
      w(p, q) = std::conj(x(p)) * divided_difference(lambda(p), lambda(q), t) * y(q);
    }
  }
  const MatrixXc tv = v.conjugate() * w;
  auto c = [&](int a, int b) { return tv.row(a).cwiseProduct(v.row(b)).sum(); };

  const int nf = pulse.harmonics();
  result.gradient = VectorXd::Zero(2 * nf);
  const Complex i_unit{0.0, 1.0};
  const Complex inv_2i{0.0, -0.5};
  for (int j = 1; j <= nf; ++j) {
    Complex sx{0.0}, sy{0.0};
    for (int sign : {1, -1}) {
      // blocks (m, n) with m - n = sign * j carry sign * alpha / 2i * sigma
      for (int m = -truncation; m <= truncation; ++m) {
        const int n = m - sign * j;
        if (n < -truncation || n > truncation) continue;
        const Complex c01 = c(index(m, 0), index(n, 1));
        const Complex c10 = c(index(m, 1), index(n, 0));
        sx += static_cast<double>(sign) * (c01 + c10);
        sy += static_cast<double>(sign) * (-i_unit * c01 + i_unit * c10);
      }
    }
    const Complex dax = amplitude * inv_2i * sx;
    const Complex day = amplitude * inv_2i * sy;
    result.gradient(j - 1) = 2.0 * (std::conj(amp) * dax).real();
    result.gradient(nf + j - 1) = 2.0 * (std::conj(amp) * day).real();
  }
  return result;
}

}  // namespace nvoc
