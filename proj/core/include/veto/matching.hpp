#pragma once

#include <nlohmann/json.hpp>

#include <span>
#include <variant>
#include <vector>

#include "veto/election.hpp"
#include "veto/rational.hpp"

namespace veto {

/// Non-negative voter x candidate matrix. It is a (p,q)-matching when its row
/// sums are p and its column sums are q; see is_valid_matching().
class Matching {
 public:
  Matching(std::size_t voters, std::size_t candidates);

  std::size_t num_voters() const { return voters_; }
  std::size_t num_candidates() const { return candidates_; }

  const Rational& at(VoterId v, CandidateId c) const { return entries_[v.value() * candidates_ + c.value()]; }
  Rational& at(VoterId v, CandidateId c) { return entries_[v.value() * candidates_ + c.value()]; }

  std::vector<Rational> row_sums() const;
  std::vector<Rational> column_sums() const;
  Rational total() const;
  bool is_integral() const;
  Matching scaled(const Rational& factor) const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::size_t voters_;
  std::size_t candidates_;
  std::vector<Rational> entries_;
};

/// W(M) together with prefix lengths k_v (1..m, or m for an empty row) such
/// that the winners are the intersection of every voter's top-k_v prefix.
struct WinnerSet {
  std::vector<CandidateId> winners;
  std::vector<std::size_t> prefix_indices;

  friend bool operator==(const WinnerSet&, const WinnerSet&) = default;
};

/// A voter set T with p(T) > q(N_a(T)); proves a is not (p,q)-dominant.
struct HallViolation {
  std::vector<VoterId> coalition;
  Rational coalition_weight;
  Rational neighborhood_weight;
};

using AdmittedMatching = std::variant<Matching, HallViolation>;

/// N_a(T) = {c : a ⪰_v c for some v in T}, sorted by id.
std::vector<CandidateId> neighborhood(const Election& e, CandidateId a, std::span<const VoterId> coalition);

/// Searches for a (p,q)-matching supported on the domination graph of `a`.
///
/// Weights are scaled by the lcm of their denominators and an augmenting-path
/// max-flow runs over exact integers, so integral p and q yield an integral
/// matching. When the flow falls short the source side of the residual min cut
/// is returned as a Hall violation. Throws Error if the totals differ or are 0.
AdmittedMatching find_admitted_matching(const Election& e, CandidateId a, const WeightVector& p,
                                        const WeightVector& q);

/// True iff every positive entry (v, c) satisfies a ⪰_v c.
bool admits(const Election& e, CandidateId a, const Matching& m);

/// W(M): candidates weakly above the highest-ranked support member of every
/// voter. May be empty for an arbitrary matching.
WinnerSet tied_winners(const Election& e, const Matching& m);

/// Row sums equal p, column sums equal q, entries non-negative, shapes agree.
bool is_valid_matching(const Election& e, const Matching& m, const WeightVector& p, const WeightVector& q);

/// {"p_total": "n/d", "entries": [{"voter": 1, "candidate": "a", "weight": "n/d"}, ...]}
/// Only positive entries, ordered by voter then by the voter's ranking.
nlohmann::json matching_to_json(const Election& e, const Matching& m);

/// Inverse of matching_to_json(); throws ParseError on malformed input.
Matching matching_from_json(const Election& e, const nlohmann::json& j);

}  // namespace veto
