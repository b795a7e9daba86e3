#ifndef NVOC_FLOQUET_HPP
#define NVOC_FLOQUET_HPP

#include <vector>

#include "nvoc/hamiltonian.hpp"
#include "nvoc/propagator.hpp"

namespace nvoc {

/// Harmonic truncation control for Floquet propagators.
///
/// With `truncation == 0` the harmonic cutoff starts at N_f + 10 and is
/// doubled until ||U(M) - U(M + 2)|| < tolerance and U is unitary to 1e-10. A positive truncation is
/// used as given; `verify` then still compares against M + 2.
struct FloquetOptions {
  int truncation = 0;
  bool verify = true;
  double tolerance = 1e-9;
  int max_truncation = 640;
};

/// Truncated Floquet matrix with blocks F[m, n] = H_{m-n} + m W delta_{mn},
/// harmonic indices |m|, |n| <= truncation. Block m starts at row (m + truncation) * d.
MatrixXc floquet_matrix(const FourierComponents& h, double omega, int truncation);

/// U(t) = sum_n exp(i n W t) [exp(-i F t)]_{n, 0} from the eigendecomposition of F.
MatrixXc floquet_evolution(const FourierComponents& h, double omega, double t, int truncation);

int default_truncation(const PulseCoefficients& pulse);

/// U(t_p) over the full 2K hyperfine space. Each transition block is evolved
/// with its own Floquet matrix (the full Floquet matrix is block diagonal
/// after permutation) and embedded. Throws NumericalError when the
/// truncation does not converge.
Propagator floquet_propagator(const PulseCoefficients& pulse, const EnsembleMember& member,
                              const HyperfineConfig& config, const FloquetOptions& options = {});

/// 2x2 U(t_p) of a single transition at a fixed truncation.
MatrixXc transition_propagator(const PulseCoefficients& pulse, double detuning_mhz, double amplitude,
                               int truncation);

/// Smallest truncation (from the auto schedule) that converges for every
/// transition of `member`. Used to pin the cutoff once for a whole optimization.
int converged_truncation(const PulseCoefficients& pulse, const EnsembleMember& member,
                         const HyperfineConfig& config, const FloquetOptions& options = {});

/// |0> -> |-1> transfer probability of one transition and, optionally, its
/// derivative with respect to the flattened amplitudes (a_x then a_y).
struct TransitionTransfer {
  double fidelity = 0.0;
  VectorXd gradient;  ///< empty unless requested
};

/// The derivative is exact for the truncated Floquet matrix: first-order
/// eigen-perturbation of exp(-i F t_p) using divided differences of the
/// exponential over the Floquet quasi-energies.
TransitionTransfer floquet_transfer(const PulseCoefficients& pulse, double detuning_mhz, double amplitude,
                                    int truncation, bool with_gradient);

/// Transfer probability |<-1| U(t_p) |0>|^2 of single transitions driven by one
/// pulse, computed from the truncated Floquet matrix without diagonalizing it:
/// the Sambe-space column exp(-i F t_p) |0, 0> is expanded in Chebyshev
/// polynomials of F (one banded matrix-vector product per term). The gradient
/// is the exact derivative of that expansion, accumulated by running the
/// Chebyshev recurrence backwards (reverse mode).
///
/// The spectral bound used for the expansion covers every transition with
/// |detuning| <= max_detuning_mhz and amplitude <= max_amplitude; calls outside
/// that envelope throw ValidationError. Safe to share between threads.
class FloquetTransferEvaluator {
 public:
  FloquetTransferEvaluator(const PulseCoefficients& pulse, int truncation, double max_detuning_mhz,
                           double max_amplitude);

  TransitionTransfer operator()(double detuning_mhz, double amplitude, bool with_gradient) const;

  int truncation() const { return truncation_; }
  int terms() const { return static_cast<int>(coefficients_.size()); }

 private:
  PulseCoefficients pulse_;
  int truncation_;
  double max_detuning_mhz_;
  double max_amplitude_;
  double scale_;  // spec(F) lies in [-scale_, scale_]
  std::vector<Complex> coefficients_;
};

}  // namespace nvoc

#endif  // NVOC_FLOQUET_HPP
