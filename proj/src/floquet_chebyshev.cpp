#include <cmath>
#include <complex>

#include "nvoc/floquet.hpp"

namespace nvoc {

namespace {

// Off-diagonal entries of H_{+j} = (alpha / 2i)(a_jx sx + a_jy sy) for a single
// transition: upper = (alpha / 2i)(a_jx - i a_jy), lower = (alpha / 2i)(a_jx + i a_jy).
// H_{-j} = -H_{+j}.
struct DriveTerms {
  std::vector<Complex> upper;
  std::vector<Complex> lower;
};

DriveTerms drive_terms(const PulseCoefficients& pulse, double amplitude) {
  const Complex k = amplitude / Complex(0.0, 2.0);
  DriveTerms d;
  for (int j = 0; j < pulse.harmonics(); ++j) {
    d.upper.push_back(k * Complex(pulse.ax()(j), -pulse.ay()(j)));
    d.lower.push_back(k * Complex(pulse.ax()(j), pulse.ay()(j)));
  }
  return d;
}

// Sambe vectors of one transition are stored split: entries [0, B) hold the
// |0> amplitude of harmonics m = -M..M, entries [B, 2B) the |-1> amplitude.
using Segment = Eigen::Map<VectorXc>;
using ConstSegment = Eigen::Map<const VectorXc>;

// out = (F / rho) v
void apply_scaled(const DriveTerms& d, const VectorXd& diagonal, int blocks, double inv_rho, const Complex* v,
                  Complex* out) {
  const ConstSegment v0(v, blocks), v1(v + blocks, blocks);
  Segment o0(out, blocks), o1(out + blocks, blocks);
  o0 = diagonal.head(blocks).cwiseProduct(v0);
  o1 = diagonal.tail(blocks).cwiseProduct(v1);
  const int nf = static_cast<int>(d.upper.size());
  for (int j = 1; j <= nf && j < blocks; ++j) {
    const int n = blocks - j;
    const Complex cu = d.upper[static_cast<std::size_t>(j - 1)];
    const Complex cl = d.lower[static_cast<std::size_t>(j - 1)];
    o0.tail(n) += cu * v1.head(n);
    o0.head(n) -= cu * v1.tail(n);
    o1.tail(n) += cl * v0.head(n);
    o1.head(n) -= cl * v0.tail(n);
  }
  o0 *= inv_rho;
  o1 *= inv_rho;
}

}  // namespace

FloquetTransferEvaluator::FloquetTransferEvaluator(const PulseCoefficients& pulse, int truncation,
                                                   double max_detuning_mhz, double max_amplitude)
    : pulse_(pulse),
      truncation_(truncation),
      max_detuning_mhz_(std::abs(max_detuning_mhz)),
      max_amplitude_(max_amplitude) {
  if (truncation < pulse.harmonics()) throw ValidationError("truncation", "must be at least N_f");
  if (!(max_amplitude > 0.0)) throw ValidationError("amplitude", "must be positive");
  double drive = 0.0;
  for (int j = 0; j < pulse.harmonics(); ++j) drive += std::hypot(pulse.ax()(j), pulse.ay()(j));
  // Gershgorin: |m W + pi Delta| plus the row sum of two conjugate drive blocks per harmonic.
  scale_ = (truncation * pulse.fundamental() + pi * max_detuning_mhz_ + max_amplitude * drive) * (1.0 + 1e-12);

  // exp(-i z x) = sum_k (2 - delta_k0) (-i)^k J_k(z) T_k(x)
  const double z = scale_ * pulse.duration();
  Complex phase(1.0, 0.0);
  for (int k = 0;; ++k) {
    const double jk = std::cyl_bessel_j(static_cast<double>(k), z);
    coefficients_.push_back((k == 0 ? 1.0 : 2.0) * phase * jk);
    phase *= Complex(0.0, -1.0);
    if (k > z && std::abs(jk) < 1e-17) break;
    if (k > z + 400) throw NumericalError("Chebyshev series for the Floquet exponential did not terminate");
  }
}

TransitionTransfer FloquetTransferEvaluator::operator()(double detuning_mhz, double amplitude,
                                                        bool with_gradient) const {
  if (std::abs(detuning_mhz) > max_detuning_mhz_ * (1.0 + 1e-12) || amplitude > max_amplitude_ * (1.0 + 1e-12) ||
      amplitude < 0.0) {
    throw ValidationError("detuning", "transition outside the evaluator's spectral bound");
  }
  const int m_max = truncation_;
  const int blocks = 2 * m_max + 1;
  const int dim = 2 * blocks;
  const int terms = static_cast<int>(coefficients_.size());
  const DriveTerms d = drive_terms(pulse_, amplitude);
  const double inv_rho = 1.0 / scale_;
  VectorXd diagonal(dim);
  for (int b = 0; b < blocks; ++b) {
    const double m = b - m_max;
    diagonal(b) = m * pulse_.fundamental() + pi * detuning_mhz;
    diagonal(blocks + b) = m * pulse_.fundamental() - pi * detuning_mhz;
  }
  // <w| picks the |-1> component of every harmonic with exp(i n W t_p) = (-1)^n.
  VectorXd w(blocks);
  for (int b = 0; b < blocks; ++b) w(b) = (b - m_max) % 2 == 0 ? 1.0 : -1.0;
  auto project = [&](const Complex* v) { return w.cast<Complex>().dot(ConstSegment(v + blocks, blocks)); };

  // Forward recurrence t_{k+1} = 2 X t_k - t_{k-1}; keep every t_k for the reverse pass.
  MatrixXc t = MatrixXc::Zero(dim, with_gradient ? terms : 3);
  auto column = [&](int k) -> Complex* { return t.col(with_gradient ? k : k % 3).data(); };
  column(0)[m_max] = 1.0;
  Complex a = coefficients_[0] * project(column(0));
  if (terms > 1) {
    apply_scaled(d, diagonal, blocks, inv_rho, column(0), column(1));
    a += coefficients_[1] * project(column(1));
  }
  for (int k = 2; k < terms; ++k) {
    Complex* next = column(k);
    apply_scaled(d, diagonal, blocks, inv_rho, column(k - 1), next);
    Segment(next, dim) = 2.0 * Segment(next, dim) - ConstSegment(column(k - 2), dim);
    a += coefficients_[static_cast<std::size_t>(k)] * project(next);
  }

  TransitionTransfer out;
  out.fidelity = std::norm(a);
  if (!with_gradient) return out;

  // Reverse pass: u_k = conj(c_k) w + 2 X u_{k+1} - u_{k+2};  dA = sum_{k>=1} u_k^H s_k with
  // s_1 = dX t_0 and s_k = 2 dX t_{k-1}. Per harmonic j only the correlations
  //   p_j = sum_m conj(u_{m,0}) (t_{m-j,1} - t_{m+j,1}),  q_j = sum_m conj(u_{m,1}) (t_{m-j,0} - t_{m+j,0})
  // are needed.
  const int nf = pulse_.harmonics();
  std::vector<Complex> p(static_cast<std::size_t>(nf)), q(static_cast<std::size_t>(nf));
  VectorXc u1 = VectorXc::Zero(dim), u2 = VectorXc::Zero(dim), u = VectorXc::Zero(dim);
  for (int k = terms - 1; k >= 1; --k) {
    apply_scaled(d, diagonal, blocks, inv_rho, u1.data(), u.data());
    u = 2.0 * u - u2;
    u.tail(blocks) += std::conj(coefficients_[static_cast<std::size_t>(k)]) * w.cast<Complex>();

    const double weight = (k == 1 ? 1.0 : 2.0) * inv_rho;
    const ConstSegment t0(column(k - 1), blocks), t1(column(k - 1) + blocks, blocks);
    const auto u0 = u.head(blocks);
    const auto u1v = u.tail(blocks);
    for (int j = 1; j <= nf && j < blocks; ++j) {
      const int n = blocks - j;
      p[static_cast<std::size_t>(j - 1)] += weight * (u0.tail(n).dot(t1.head(n)) - u0.head(n).dot(t1.tail(n)));
      q[static_cast<std::size_t>(j - 1)] += weight * (u1v.tail(n).dot(t0.head(n)) - u1v.head(n).dot(t0.tail(n)));
    }
    std::swap(u2, u1);
    std::swap(u1, u);
  }

  out.gradient.resize(2 * nf);
  const Complex kx = amplitude / Complex(0.0, 2.0);
  for (int j = 0; j < nf; ++j) {
    const Complex dax = kx * (p[static_cast<std::size_t>(j)] + q[static_cast<std::size_t>(j)]);
    const Complex day = 0.5 * amplitude * (q[static_cast<std::size_t>(j)] - p[static_cast<std::size_t>(j)]);
    out.gradient(j) = 2.0 * std::real(std::conj(a) * dax);
    out.gradient(nf + j) = 2.0 * std::real(std::conj(a) * day);
  }
  return out;
}

}  // namespace nvoc
