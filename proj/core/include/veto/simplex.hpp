#pragma once

#include <vector>

#include "veto/rational.hpp"

namespace veto {

/// maximize c·x subject to A x <= b, x >= 0.
struct LinearProgram {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  /// Objective value, meaningful when optimal.
  Rational value;
  /// A maximizer when optimal.
  std::vector<Rational> x;
};

/// Exact dense tableau simplex. Dantzig pricing, switching to Bland's rule
/// during runs of degenerate pivots so it always terminates. A phase one
/// runs only when some b_i is negative.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace veto
