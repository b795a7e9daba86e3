#include "nvoc/line_search.hpp"

#include <cmath>

#include "nvoc/types.hpp"

namespace nvoc {

LineSearchResult golden_section_search(const std::function<double(double)>& f, double value_at_zero,
                                       const LineSearchOptions& options) {
  if (!(options.initial_bracket > 0.0)) throw ValidationError("initial_bracket", "must be positive");
  LineSearchResult best;
  best.value = value_at_zero;
  auto eval = [&](double beta) {
    const double v = f(beta);
    ++best.evaluations;
    if (!std::isfinite(v)) throw NumericalError("line search objective is not finite");
    if (v > best.value) {
      best.value = v;
      best.beta = beta;
      best.improved = true;
    }
    return v;
  };

  // Bracket: walk 0 < b < 2b < 4b ... until the objective drops.
  double lo = 0.0;
  double mid = options.initial_bracket;
  double f_mid = eval(mid);
  double hi = mid;
  if (f_mid > value_at_zero) {
    for (int e = 0;; ++e) {
      if (e >= options.max_expansions) return best;
      const double next = 2.0 * mid;
      const double f_next = eval(next);
      if (f_next <= f_mid) {
        hi = next;
        break;
      }
      lo = mid;
      mid = next;
      f_mid = f_next;
    }
  }

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int it = 0; it < options.max_iterations && hi - lo > options.tolerance * hi; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = eval(x2);
    }
  }
  return best;
}

}  // namespace nvoc
