#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "veto/election.hpp"

namespace veto {

/// A voting rule returning a set of tied winners sorted by id.
using Rule = std::function<std::vector<CandidateId>(const Election&)>;

/// Winners of simultaneous_plurality_veto().
std::vector<CandidateId> plurality_veto_winners(const Election& e);

enum class Verdict { pass, fail };

/// Two elections and their winner sets. `before` and `after` may be the same
/// election when the failing condition concerns a single profile.
struct Counterexample {
  Election before;
  Election after;
  std::vector<CandidateId> winners_before;
  std::vector<CandidateId> winners_after;
  std::string detail;
};

struct AxiomReport {
  std::string axiom;
  Verdict verdict = Verdict::pass;
  /// Present iff verdict is fail.
  std::optional<Counterexample> counterexample;
  /// Number of elections the verdict covers.
  std::size_t instances = 1;
};

/// Random voter permutations and candidate relabelings must map the winners
/// accordingly.
AxiomReport check_anonymity_neutrality(const Election& e, std::uint64_t seed, const Rule& rule = plurality_veto_winners,
                                       std::size_t samples = 4);

/// Adding a voter who ranks a winner w first makes w the unique winner. All
/// completions of the added ranking are tried when m <= 4; otherwise both
/// lexicographic extremes and `samples` random ones.
AxiomReport check_resolvability(const Election& e, std::uint64_t seed = 0, const Rule& rule = plurality_veto_winners,
                                std::size_t samples = 8);

/// Moving a winner up one position in any single ranking keeps it a winner.
AxiomReport check_monotonicity(const Election& e, const Rule& rule = plurality_veto_winners);

/// Whenever a strict majority ranks a proper subset S of the candidates
/// ahead of all others, every winner is in S. Covers Majority and Majority
/// Loser.
AxiomReport check_majority_family(const Election& e, const Rule& rule = plurality_veto_winners);

/// A unique winner w has plu(w) > veto(w) and does not win the reversed
/// profile. Vacuous for ties and for a single candidate.
AxiomReport check_reversal_symmetry(const Election& e, const Rule& rule = plurality_veto_winners);

/// A Pareto-dominated winner's dominators all have plurality score 0.
AxiomReport check_dominated_winners(const Election& e, const Rule& rule = plurality_veto_winners);

/// Names accepted by check_axiom(), in reporting order.
std::span<const std::string_view> axiom_names();

/// Dispatches by name; throws Error for an unknown axiom.
AxiomReport check_axiom(std::string_view axiom, const Election& e, std::uint64_t seed,
                        const Rule& rule = plurality_veto_winners);

/// Folds per-election reports for one axiom: PASS iff all passed, keeping
/// the first counterexample.
AxiomReport combine_reports(std::string_view axiom, std::span<const AxiomReport> reports);

/// Random elections with n in [1, max_n] and m in [1, max_m], all derived
/// from `seed`; one combined report per axiom.
std::vector<AxiomReport> sweep_random(std::span<const std::string_view> axioms, std::size_t max_n, std::size_t max_m,
                                      std::size_t trials, std::uint64_t seed, const Rule& rule = plurality_veto_winners);

/// Every profile with 1 <= n <= max_n voters and 1 <= m <= max_m candidates.
void for_each_election(std::size_t max_n, std::size_t max_m, const std::function<void(const Election&)>& visit);

/// sweep over for_each_election().
std::vector<AxiomReport> sweep_exhaustive(std::span<const std::string_view> axioms, std::size_t max_n,
                                          std::size_t max_m, std::uint64_t seed,
                                          const Rule& rule = plurality_veto_winners);

/// Input of `rule` derived from sweep_random()'s seed for trial t.
Election sweep_election(std::size_t max_n, std::size_t max_m, std::uint64_t seed, std::size_t trial);

/// Known failures of the rule, replayed as regressions.
struct ViolationDemo {
  std::string name;
  bool reproduced = false;
  std::string detail;
  std::vector<Election> elections;
  std::vector<std::vector<CandidateId>> winners;
};

Election consistency_example();
/// Two voters: c1 > c2 > ... > cm and cm > c2 > ... > c(m-1) > c1.
Election pareto_example(std::size_t m);

/// A candidate ranked above each other candidate by at least n/2 voters.
std::vector<CandidateId> condorcet_winners(const Election& e);

/// Consistency (winners {a,b,c}, {a,b,c,d}, {a,b,c,d,e} for the whole
/// election and its two halves), Pareto (all five candidates tie although
/// c2 dominates c3 and c4, and the dominator has plurality score 0), and a
/// seeded search for a Condorcet winner outside the winners.
std::vector<ViolationDemo> demonstrate_violations(std::uint64_t seed = 1, const Rule& rule = plurality_veto_winners);

nlohmann::json report_to_json(const AxiomReport& report);
nlohmann::json demo_to_json(const ViolationDemo& demo);

}  // namespace veto
