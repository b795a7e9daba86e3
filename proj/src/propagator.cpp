#include "nvoc/propagator.hpp"

#include <cmath>
#include <string>

namespace nvoc {

MatrixXc hermitian_exp(const MatrixXc& h, double t) {
  if (h.rows() == 2) {
    // h = c0 I + n . sigma
    const double c0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double nz = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double nx = h(1, 0).real();
    const double ny = h(1, 0).imag();
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double c = std::cos(norm * t);
    // sin(|n| t) / |n|, finite at |n| = 0
    const double s = norm * t > 1e-8 ? std::sin(norm * t) / norm : t * (1.0 - norm * norm * t * t / 6.0);
    const Complex phase = std::exp(Complex(0.0, -c0 * t));
    const Complex mi{0.0, -1.0};
    MatrixXc u(2, 2);
    u(0, 0) = phase * (c + mi * s * nz);
    u(1, 1) = phase * (c - mi * s * nz);
    u(0, 1) = phase * (mi * s * Complex(nx, -ny));
    u(1, 0) = phase * (mi * s * Complex(nx, ny));
    return u;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_exp: eigensolver failed");
  const VectorXc phases = (Complex(0.0, -t) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double state_transfer_fidelity(const Propagator& prop, const VectorXc& psi_i, const VectorXc& psi_f) {
  const auto n = prop.u.rows();
  if (psi_i.size() != n || psi_f.size() != n) {
    throw ValidationError("state", "dimension " + std::to_string(n) + " expected");
  }
  if (std::abs(psi_i.norm() - 1.0) > 1e-9) throw ValidationError("psi_i", "state is not normalized");
  if (std::abs(psi_f.norm() - 1.0) > 1e-9) throw ValidationError("psi_f", "state is not normalized");
  return std::norm(psi_f.dot(prop.u * psi_i));
}

VectorXc bright_state(const HyperfineConfig& config, int transition) {
  VectorXc v = VectorXc::Zero(config.dimension());
  v(2 * transition) = 1.0;
  return v;
}

VectorXc dark_state(const HyperfineConfig& config, int transition) {
  VectorXc v = VectorXc::Zero(config.dimension());
  v(2 * transition + 1) = 1.0;
  return v;
}

double mean_block_transfer(const Propagator& prop, const HyperfineConfig& config) {
  double sum = 0.0;
  for (int k = 0; k < config.level_count; ++k) {
    sum += state_transfer_fidelity(prop, bright_state(config, k), dark_state(config, k));
  }
  return sum / config.level_count;
}

}  // namespace nvoc
