#include "nvoc/spin.hpp"

#include <cmath>
#include <string>

namespace nvoc {

HyperfineConfig HyperfineConfig::make(int level_count, double splitting_mhz) {
  HyperfineConfig c;
  c.level_count = level_count;
  c.splitting_mhz = splitting_mhz;
  switch (level_count) {
    case 1: c.weights = {0.0}; break;
    case 2: c.weights = {-0.5, 0.5}; break;
    case 3: c.weights = {-1.0, 0.0, 1.0}; break;
    default:
      throw ValidationError("level_count", "must be 1, 2 or 3, got " + std::to_string(level_count));
  }
  c.validate();
  return c;
}

void HyperfineConfig::validate() const {
  if (level_count < 1 || level_count > 3) {
    throw ValidationError("level_count", "must be 1, 2 or 3, got " + std::to_string(level_count));
  }
  if (static_cast<int>(weights.size()) != level_count) {
    throw ValidationError("weights", "expected " + std::to_string(level_count) + " offsets");
  }
  if (!std::isfinite(splitting_mhz) || splitting_mhz < 0.0) {
    throw ValidationError("splitting", "must be finite and non-negative");
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double mirror = weights[weights.size() - 1 - k];
    if (std::abs(weights[k] + mirror) > 1e-12) {
      throw ValidationError("weights", "offsets must be symmetric about zero");
    }
  }
}

MatrixXc pauli_x() {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

MatrixXc pauli_y() {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

MatrixXc pauli_z() {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

SpinMatrixSet build_spin_matrices(const HyperfineConfig& config) {
  config.validate();
  const int n = config.dimension();
  SpinMatrixSet set;
  const MatrixXc sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  for (int k = 0; k < config.level_count; ++k) {
    MatrixXc x = MatrixXc::Zero(n, n), y = MatrixXc::Zero(n, n), z = MatrixXc::Zero(n, n);
    x.block(2 * k, 2 * k, 2, 2) = sx;
    y.block(2 * k, 2 * k, 2, 2) = sy;
    z.block(2 * k, 2 * k, 2, 2) = sz;
    set.x.push_back(std::move(x));
    set.y.push_back(std::move(y));
    set.z.push_back(std::move(z));
  }
  return set;
}

}  // namespace nvoc
