#ifndef NVOC_TYPES_HPP
#define NVOC_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

// Unit conventions used throughout the library:
//   time               microseconds (us)
//   frequencies        MHz (cycles per microsecond)
//   angular quantities rad/us (pulse amplitudes, Hamiltonian entries)
// The photophysics and sensitivity code works in SI seconds; see those headers.

namespace nvoc {

using Complex = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = MatrixX<Complex>;
using VectorXc = VectorX<Complex>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double to_angular(double frequency_mhz) { return two_pi * frequency_mhz; }
constexpr double to_frequency(double angular) { return angular / two_pi; }

/// Invalid input. `field()` names the offending parameter so the CLI can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical routine failed to converge or produced an invalid result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(m.eval());
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

// ||U^dagger U - I|| in operator norm.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  const Plain g = u.adjoint() * u - Plain::Identity(u.cols(), u.cols());
  return operator_norm(g);
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  return operator_norm(h - h.adjoint());
}

// Operator-norm distance after removing the relative global phase of b.
template <typename DerivedA, typename DerivedB>
double phase_aligned_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return operator_norm(a - phase * b);
}

}  // namespace nvoc

#endif  // NVOC_TYPES_HPP
