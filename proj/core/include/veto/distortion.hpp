#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "veto/election.hpp"

namespace veto {

/// Voter-to-candidate distances of a pseudo-metric.
class VoterCandidateMetric {
 public:
  VoterCandidateMetric(std::size_t voters, std::size_t candidates);

  std::size_t num_voters() const { return voters_; }
  std::size_t num_candidates() const { return candidates_; }

  const Rational& at(VoterId v, CandidateId c) const { return d_[v.value() * candidates_ + c.value()]; }
  Rational& at(VoterId v, CandidateId c) { return d_[v.value() * candidates_ + c.value()]; }

 private:
  std::size_t voters_;
  std::size_t candidates_;
  std::vector<Rational> d_;
};

/// Non-negative, consistent with every ranking (a ≻_v b implies
/// d(v,a) <= d(v,b)) and satisfying d(v,c) <= d(v,c') + d(v',c') + d(v',c).
bool is_consistent_metric(const Election& e, const VoterCandidateMetric& d);

/// Σ_v d(v,c).
Rational cost(const Election& e, const VoterCandidateMetric& d, CandidateId c);

struct CostRatioBound {
  bool unbounded = false;
  /// max cost(c) subject to cost(x) <= normalization; meaningful when bounded.
  Rational value;
  /// A metric attaining `value`.
  std::optional<VoterCandidateMetric> argmax;
};

/// Exact LP over consistent pseudo-metrics: maximize cost(c) subject to
/// cost(x) <= normalization. The constraint system is a cone, so this equals
/// the optimum with cost(x) = normalization whenever the value is positive.
CostRatioBound max_cost_ratio(const Election& e, CandidateId c, CandidateId x, const Rational& normalization = 1);

struct Distortion {
  bool unbounded = false;
  Rational value;

  /// "num/den" or "infinity".
  std::string to_string() const;
  bool at_most(const Rational& bound) const { return !unbounded && value <= bound; }
};

inline constexpr std::size_t kDefaultMaxLpSize = 36;

/// VETO_MAX_LP_SIZE if set to a positive integer, otherwise kDefaultMaxLpSize.
std::size_t max_lp_size_from_env();

/// Largest cost ratio of c against any other candidate over all consistent
/// pseudo-metrics, at least 1. Throws LimitError when n·m exceeds
/// `max_size` and Error for an unknown candidate.
Distortion distortion(const Election& e, CandidateId c, std::size_t max_size = max_lp_size_from_env());

}  // namespace veto
