#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veto/election.hpp"
#include "veto/matching.hpp"

namespace veto {

/// Voters in veto order; voter v appears p(v) times (on the integer scale).
struct VetoOrder {
  std::vector<VoterId> sequence;

  friend bool operator==(const VetoOrder&, const VetoOrder&) = default;
};

/// State of the discrete-event loop right after the elimination closure at
/// `time`. `weights` covers every candidate (eliminated ones stay at 0);
/// `opposition[c]` lists the voters whose bottom remaining choice is c.
struct TraceEvent {
  Rational time;
  std::vector<CandidateId> eliminated;
  std::vector<Rational> weights;
  std::vector<std::vector<VoterId>> opposition;
};

/// Events at strictly increasing times; the last one is at time 1 and
/// eliminates nothing.
struct EliminationTrace {
  std::vector<TraceEvent> events;
};

struct RuleOutcome {
  WinnerSet winners;
  Matching witness;
  /// Empty for serial_veto().
  EliminationTrace trace;
};

/// Alternating cycle (v_1, c_1, ..., v_k, c_k) stored as two parallel lists.
struct BottomTradingCycle {
  std::vector<VoterId> voters;
  std::vector<CandidateId> candidates;

  friend bool operator==(const BottomTradingCycle&, const BottomTradingCycle&) = default;
};

/// SerialVeto. Voters veto in `order`: each one first removes every
/// zero-weight candidate at the bottom of her remaining ranking, then
/// decrements the weight of her bottom remaining candidate by one, without
/// eliminating it.
///
/// Rational q is scaled by the lcm L of its denominators; the order length
/// must equal L·Σq. The witness counts the decrements of each (voter,
/// candidate) pair, divided by L so its column sums are q. When `p` is given,
/// voter multiplicities in the order must equal L·p.
RuleOutcome serial_veto(const Election& e, const WeightVector& q, const VetoOrder& order);
RuleOutcome serial_veto(const Election& e, const WeightVector& q, const VetoOrder& order, const WeightVector& p);

/// SimultaneousVeto, evaluated exactly as a sequence of discrete events.
///
/// Time runs from 0 to 1 and voter v vetoes at rate p(v), so the raw totals
/// are kept (Σweights = Σq·(1 - t)). At each event time every zero-weight
/// candidate that is some voter's bottom remaining choice is eliminated,
/// repeatedly, until nothing changes. Voters with p(v) = 0 never veto and
/// never eliminate. Throws Error on mismatched or zero totals.
RuleOutcome simultaneous_veto(const Election& e, const WeightVector& p, const WeightVector& q);

/// simultaneous_veto() with unit voter weights and plurality candidate weights.
RuleOutcome simultaneous_plurality_veto(const Election& e);

/// Bottom trading cycle of an integral matching whose column sums are q,
/// found by the walk c_{i+1} = bottom of v_i among {q != 0}, v_{i+1} = the
/// lowest-index voter with a positive entry on c_{i+1}, cut at the first
/// repeated candidate. Returns nullopt when some voter already has weight on
/// her bottom choice or the total is at most 1.
std::optional<BottomTradingCycle> find_bottom_trading_cycle(const Election& e, const Matching& m,
                                                            const WeightVector& q);

/// Checks the full bottom-trading-cycle definition against m's column sums.
bool is_bottom_trading_cycle(const Election& e, const Matching& m, const BottomTradingCycle& cycle);

/// Moves one unit from (v_i, c_i) to (v_i, c_{i+1}) for every i (cyclically).
/// Requires m(v_i, c_i) >= 1 and distinct candidates; marginals are preserved.
/// The bottom condition is not required here; see is_bottom_trading_cycle().
Matching swap_along_cycle(const Election& e, const Matching& m, const BottomTradingCycle& cycle);

/// A veto order under which serial_veto() returns a superset of W(m).
/// p, q and m must be integral and m must be a (p,q)-matching.
VetoOrder veto_order_for_matching(const Election& e, const WeightVector& p, const WeightVector& q,
                                  const Matching& m);

/// Checks every structural guarantee of a rule run: the witness is a
/// (p,q)-matching, winners = W(witness) and are prefix-intersecting, winners
/// are non-empty, and the trace conserves weight. Returns a description of
/// the first failure.
std::optional<std::string> audit_outcome(const Election& e, const WeightVector& p, const WeightVector& q,
                                         const RuleOutcome& outcome);

namespace detail {

/// Piecewise-constant veto rates, active on [previous end, end).
struct RateSegment {
  Rational end;
  std::vector<Rational> rates;
};

/// Event loop with a rate schedule; only voters with a positive rate in the
/// current segment veto or eliminate. The segments must end at 1 and every
/// voter's rates must integrate to the same total as Σq. Used by tests to
/// replay serial_veto() in continuous time.
RuleOutcome scheduled_veto(const Election& e, const WeightVector& q, std::span<const RateSegment> schedule);

/// Voter order[i] vetoes at rate N on [i/N, (i+1)/N).
std::vector<RateSegment> serial_schedule(std::size_t num_voters, const VetoOrder& order);

/// Elimination closure from `remaining`, visiting candidates in
/// `visit_order` on each pass. Returns the candidates removed, in removal order.
std::vector<CandidateId> eliminate_to_fixpoint(const Election& e, CandidateMask& remaining,
                                               std::span<const Rational> weights, const std::vector<bool>& active,
                                               std::span<const CandidateId> visit_order);

}  // namespace detail

}  // namespace veto
