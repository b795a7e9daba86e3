#ifndef NVOC_LINE_SEARCH_HPP
#define NVOC_LINE_SEARCH_HPP

#include <functional>

namespace nvoc {

struct LineSearchOptions {
  double initial_bracket = 0.07;  ///< upper end of the first bracket
  int max_iterations = 30;        ///< golden-section reductions
  int max_expansions = 30;        ///< bracket doublings
  double tolerance = 1e-2;        ///< stop once the bracket is narrower than tolerance * upper end
};

struct LineSearchResult {
  double beta = 0.0;
  double value = 0.0;        ///< f(beta); equals f(0) when no improving step was found
  bool improved = false;     ///< false: beta = 0 is returned and the step should be flagged
  int evaluations = 0;
};

/// Maximizes f over beta >= 0 by golden-section search. The bracket [0, b]
/// starts at b = initial_bracket and is doubled while f keeps increasing at
/// its upper end. Returns the best point evaluated, so f(beta) >= f(0) always.
LineSearchResult golden_section_search(const std::function<double(double)>& f, double value_at_zero,
                                       const LineSearchOptions& options = {});

}  // namespace nvoc

#endif  // NVOC_LINE_SEARCH_HPP
