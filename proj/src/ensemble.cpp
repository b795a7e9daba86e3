#include "nvoc/ensemble.hpp"

#include <cmath>

namespace nvoc {

double RepresentativeEnsemble::total_weight() const {
  double sum = 0.0;
  for (const auto& m : members) sum += m.weight;
  return sum;
}

RepresentativeEnsemble sample_representative_ensemble(double detuning_range_mhz, double amplitude_fraction,
                                                      int detuning_count, int amplitude_count) {
  if (!(detuning_range_mhz > 0.0)) throw ValidationError("detuning_range", "must be positive");
  if (!(amplitude_fraction > 0.0) || amplitude_fraction >= 1.0) {
    throw ValidationError("amplitude_range", "fraction must lie in (0, 1)");
  }
  if (detuning_count < 2) throw ValidationError("detuning_points", "need at least 2 grid points");
  if (amplitude_count < 2) throw ValidationError("amplitude_points", "need at least 2 grid points");

  RepresentativeEnsemble e;
  e.detuning_count = detuning_count;
  e.amplitude_count = amplitude_count;
  e.detuning_range_mhz = detuning_range_mhz;
  e.amplitude_fraction = amplitude_fraction;

  const double fwhm = detuning_range_mhz;
  std::vector<double> detunings(static_cast<std::size_t>(detuning_count));
  std::vector<double> gauss(detunings.size());
  double norm = 0.0;
  for (int i = 0; i < detuning_count; ++i) {
    const double d = -detuning_range_mhz + 2.0 * detuning_range_mhz * i / (detuning_count - 1);
    detunings[static_cast<std::size_t>(i)] = d;
    gauss[static_cast<std::size_t>(i)] = std::exp(-4.0 * std::log(2.0) * d * d / (fwhm * fwhm));
    norm += gauss[static_cast<std::size_t>(i)] * amplitude_count;
  }
  e.members.reserve(static_cast<std::size_t>(detuning_count * amplitude_count));
  for (int i = 0; i < detuning_count; ++i) {
    for (int j = 0; j < amplitude_count; ++j) {
      const double a = 1.0 - amplitude_fraction + 2.0 * amplitude_fraction * j / (amplitude_count - 1);
      e.members.push_back({detunings[static_cast<std::size_t>(i)], a, gauss[static_cast<std::size_t>(i)] / norm});
    }
  }
  return e;
}

RepresentativeEnsemble single_member_ensemble(double detuning_mhz, double amplitude) {
  RepresentativeEnsemble e;
  e.members.push_back({detuning_mhz, amplitude, 1.0});
  e.detuning_count = 1;
  e.amplitude_count = 1;
  return e;
}

}  // namespace nvoc
