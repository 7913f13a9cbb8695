#include "veto/rules.hpp"

#include <algorithm>

#include "veto/core.hpp"
#include "veto/errors.hpp"

namespace veto {
namespace {

void check_candidate_weights(const Election& e, const WeightVector& q) {
  if (q.domain() != WeightDomain::candidates || q.size() != e.num_candidates()) {
    throw Error("candidate weights do not match the election");
  }
}

void check_voter_weights(const Election& e, const WeightVector& p) {
  if (p.domain() != WeightDomain::voters || p.size() != e.num_voters()) {
    throw Error("voter weights do not match the election");
  }
}

// Lowest-ranked candidate of v with positive weight.
std::optional<CandidateId> bottom_with_weight(const Election& e, VoterId v, std::span<const Rational> weights) {
  auto r = e.ranking(v);
  for (auto it = r.rbegin(); it != r.rend(); ++it) {
    if (weights[it->value()] != 0) return *it;
  }
  return std::nullopt;
}

RuleOutcome run_serial(const Election& e, const WeightVector& q, const VetoOrder& order, const WeightVector* p) {
  check_candidate_weights(e, q);
  const BigInt scale = denominator_lcm(q.weights());
  const Rational factor(scale);
  const WeightVector q_int = q.scaled(factor);
  if (q_int.total() != static_cast<unsigned long>(order.sequence.size())) {
    throw Error("veto order has length " + std::to_string(order.sequence.size()) + ", expected " +
                format_rational(q_int.total()));
  }
  std::vector<std::size_t> occurrences(e.num_voters(), 0);
  for (VoterId v : order.sequence) {
    if (v.value() >= e.num_voters()) throw Error("veto order names unknown voter " + std::to_string(v.value() + 1));
    ++occurrences[v.value()];
  }
  if (p) {
    check_voter_weights(e, *p);
    for (VoterId v : e.voters()) {
      if ((*p)[v] * factor != static_cast<unsigned long>(occurrences[v.value()])) {
        throw Error("voter " + std::to_string(v.value() + 1) + " occurs " + std::to_string(occurrences[v.value()]) +
                    " times in the veto order, inconsistent with p");
      }
    }
  }

  std::vector<Rational> weight(q_int.weights().begin(), q_int.weights().end());
  CandidateMask remaining(e.num_candidates(), true);
  Matching counts(e.num_voters(), e.num_candidates());
  for (VoterId v : order.sequence) {
    CandidateId target = *e.bottom_among(v, remaining);
    while (weight[target.value()] == 0) {
      remaining[target.value()] = false;
      target = *e.bottom_among(v, remaining);
    }
    weight[target.value()] -= 1;
    counts.at(v, target) += 1;
  }

  RuleOutcome outcome{tied_winners(e, counts), counts.scaled(Rational(1) / factor), {}};
  // The loop above removed exactly the candidates outside W(M); keep both views honest.
  if (from_mask(remaining) != outcome.winners.winners) throw Error("internal: serial veto winners diverged from W(M)");
  return outcome;
}

}  // namespace

RuleOutcome serial_veto(const Election& e, const WeightVector& q, const VetoOrder& order) {
  return run_serial(e, q, order, nullptr);
}

RuleOutcome serial_veto(const Election& e, const WeightVector& q, const VetoOrder& order, const WeightVector& p) {
  return run_serial(e, q, order, &p);
}

namespace detail {

std::vector<CandidateId> eliminate_to_fixpoint(const Election& e, CandidateMask& remaining,
                                               std::span<const Rational> weights, const std::vector<bool>& active,
                                               std::span<const CandidateId> visit_order) {
  std::vector<CandidateId> removed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (CandidateId c : visit_order) {
      if (!remaining[c.value()] || weights[c.value()] != 0) continue;
      bool opposed = false;
      for (VoterId v : e.voters()) {
        if (active[v.value()] && e.bottom_among(v, remaining) == c) {
          opposed = true;
          break;
        }
      }
      if (opposed) {
        remaining[c.value()] = false;
        removed.push_back(c);
        changed = true;
      }
    }
  }
  return removed;
}

RuleOutcome scheduled_veto(const Election& e, const WeightVector& q, std::span<const RateSegment> schedule) {
  check_candidate_weights(e, q);
  if (q.total() == 0) throw Error("candidate weights must have a positive total");
  if (schedule.empty() || schedule.back().end != 1) throw Error("rate schedule must end at time 1");

  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();
  const auto visit_order = e.candidates();
  std::vector<Rational> weight(q.weights().begin(), q.weights().end());
  CandidateMask remaining(m, true);
  Matching witness(n, m);
  EliminationTrace trace;

  Rational time = 0;
  std::size_t segment = 0;
  while (time < 1) {
    while (schedule[segment].end <= time) ++segment;
    const auto& rates = schedule[segment].rates;
    if (rates.size() != n) throw Error("rate schedule has the wrong number of voters");
    std::vector<bool> active(n);
    for (std::size_t v = 0; v < n; ++v) active[v] = rates[v] > 0;

    TraceEvent event;
    event.time = time;
    event.eliminated = eliminate_to_fixpoint(e, remaining, weight, active, visit_order);

    std::vector<std::optional<CandidateId>> target(n);
    std::vector<Rational> drain(m, Rational(0));
    event.opposition.assign(m, {});
    for (VoterId v : e.voters()) {
      if (!active[v.value()]) continue;
      target[v.value()] = e.bottom_among(v, remaining);
      const CandidateId c = *target[v.value()];
      event.opposition[c.value()].push_back(v);
      drain[c.value()] += rates[v.value()];
    }
    event.weights = weight;
    trace.events.push_back(std::move(event));

    std::optional<Rational> delta;
    for (std::size_t c = 0; c < m; ++c) {
      if (!remaining[c] || drain[c] == 0) continue;
      Rational until_zero = weight[c] / drain[c];
      if (!delta || until_zero < *delta) delta = std::move(until_zero);
    }
    if (!delta) throw Error("internal: no candidate is being vetoed before time 1");
    if (*delta <= 0) throw Error("internal: opposed candidate with zero weight survived elimination");
    const Rational segment_left = schedule[segment].end - time;
    if (segment_left < *delta) delta = segment_left;

    for (std::size_t c = 0; c < m; ++c) {
      if (drain[c] != 0) weight[c] -= *delta * drain[c];
    }
    for (VoterId v : e.voters()) {
      if (target[v.value()]) witness.at(v, *target[v.value()]) += *delta * rates[v.value()];
    }
    time += *delta;
  }

  TraceEvent last;
  last.time = time;
  last.weights = weight;
  last.opposition.assign(m, {});
  trace.events.push_back(std::move(last));

  WinnerSet winners = tied_winners(e, witness);
  if (from_mask(remaining) != winners.winners) throw Error("internal: surviving candidates diverged from W(M)");
  return RuleOutcome{std::move(winners), std::move(witness), std::move(trace)};
}

std::vector<RateSegment> serial_schedule(std::size_t num_voters, const VetoOrder& order) {
  const auto total = static_cast<unsigned long>(order.sequence.size());
  if (total == 0) throw Error("serial schedule needs a non-empty order");
  std::vector<RateSegment> out;
  out.reserve(order.sequence.size());
  for (std::size_t i = 0; i < order.sequence.size(); ++i) {
    RateSegment seg{Rational(static_cast<unsigned long>(i + 1), total), std::vector<Rational>(num_voters, Rational(0))};
    seg.end.canonicalize();
    seg.rates.at(order.sequence[i].value()) = Rational(total);
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace detail

RuleOutcome simultaneous_veto(const Election& e, const WeightVector& p, const WeightVector& q) {
  check_voter_weights(e, p);
  check_candidate_weights(e, q);
  if (p.total() != q.total()) {
    throw Error("marginal totals differ: " + format_rational(p.total()) + " vs " + format_rational(q.total()));
  }
  if (p.total() == 0) throw Error("weight totals must be positive");
  const detail::RateSegment whole{Rational(1), std::vector<Rational>(p.weights().begin(), p.weights().end())};
  return detail::scheduled_veto(e, q, std::span(&whole, 1));
}

RuleOutcome simultaneous_plurality_veto(const Election& e) {
  return simultaneous_veto(e, unit_voter_weights(e), plurality_weights(e));
}

std::optional<BottomTradingCycle> find_bottom_trading_cycle(const Election& e, const Matching& m,
                                                            const WeightVector& q) {
  check_candidate_weights(e, q);
  if (!m.is_integral()) throw Error("bottom trading cycles need an integral matching");
  const auto columns = m.column_sums();
  for (CandidateId c : e.candidates()) {
    if (columns[c.value()] != q[c]) throw Error("q is not the column marginal of the matching");
  }
  if (m.total() <= 1) return std::nullopt;

  std::vector<CandidateId> bottom(e.num_voters());
  for (VoterId v : e.voters()) {
    bottom[v.value()] = *bottom_with_weight(e, v, q.weights());
    if (m.at(v, bottom[v.value()]) > 0) return std::nullopt;
  }

  auto first_voter_on = [&](CandidateId c) {
    for (VoterId v : e.voters()) {
      if (m.at(v, c) > 0) return v;
    }
    throw Error("internal: candidate with positive q has an empty column");
  };

  // Starting entry: first voter with a non-empty row, her highest-ranked support.
  std::vector<VoterId> walk_voters;
  std::vector<CandidateId> walk_candidates;
  for (VoterId v : e.voters()) {
    for (CandidateId c : e.ranking(v)) {
      if (m.at(v, c) > 0) {
        walk_voters.push_back(v);
        walk_candidates.push_back(c);
        break;
      }
    }
    if (!walk_voters.empty()) break;
  }

  std::vector<std::optional<std::size_t>> step_of(e.num_candidates());
  step_of[walk_candidates[0].value()] = 0;
  for (;;) {
    const CandidateId next = bottom[walk_voters.back().value()];
    if (auto j = step_of[next.value()]) {
      BottomTradingCycle cycle;
      cycle.voters.assign(walk_voters.begin() + static_cast<std::ptrdiff_t>(*j), walk_voters.end());
      cycle.candidates.assign(walk_candidates.begin() + static_cast<std::ptrdiff_t>(*j), walk_candidates.end());
      return cycle;
    }
    step_of[next.value()] = walk_candidates.size();
    walk_candidates.push_back(next);
    walk_voters.push_back(first_voter_on(next));
  }
}

bool is_bottom_trading_cycle(const Election& e, const Matching& m, const BottomTradingCycle& cycle) {
  const std::size_t k = cycle.voters.size();
  if (k == 0 || cycle.candidates.size() != k) return false;
  const auto columns = m.column_sums();
  for (std::size_t i = 0; i < k; ++i) {
    const VoterId v = cycle.voters[i];
    const CandidateId c = cycle.candidates[i];
    if (v.value() >= e.num_voters() || c.value() >= e.num_candidates()) return false;
    if (m.at(v, c) <= 0) return false;
    if (bottom_with_weight(e, v, columns) != cycle.candidates[(i + 1) % k]) return false;
  }
  return true;
}

Matching swap_along_cycle(const Election& e, const Matching& m, const BottomTradingCycle& cycle) {
  const std::size_t k = cycle.voters.size();
  if (k == 0 || cycle.candidates.size() != k) throw Error("invalid cycle: empty or unbalanced");
  std::vector<bool> seen(e.num_candidates(), false);
  for (std::size_t i = 0; i < k; ++i) {
    const VoterId v = cycle.voters[i];
    const CandidateId c = cycle.candidates[i];
    if (v.value() >= e.num_voters() || c.value() >= e.num_candidates()) throw Error("invalid cycle: unknown id");
    if (seen[c.value()]) throw Error("invalid cycle: repeated candidate");
    seen[c.value()] = true;
    if (m.at(v, c) < 1) throw Error("invalid cycle: entry below one unit");
  }
  Matching out = m;
  for (std::size_t i = 0; i < k; ++i) {
    out.at(cycle.voters[i], cycle.candidates[i]) -= 1;
    out.at(cycle.voters[i], cycle.candidates[(i + 1) % k]) += 1;
  }
  return out;
}

VetoOrder veto_order_for_matching(const Election& e, const WeightVector& p, const WeightVector& q,
                                  const Matching& m) {
  check_voter_weights(e, p);
  check_candidate_weights(e, q);
  if (!p.is_integral() || !q.is_integral() || !m.is_integral()) throw Error("veto order synthesis needs integral inputs");
  if (!is_valid_matching(e, m, p, q)) throw Error("matching marginals do not equal (p, q)");

  Matching current = m;
  std::vector<Rational> remaining_q(q.weights().begin(), q.weights().end());
  VetoOrder order;
  auto total = to_u64(q.total());
  order.sequence.reserve(total);

  auto voter_on_bottom = [&]() -> std::optional<std::pair<VoterId, CandidateId>> {
    for (VoterId v : e.voters()) {
      auto bottom = bottom_with_weight(e, v, remaining_q);
      if (bottom && current.at(v, *bottom) > 0) return std::pair{v, *bottom};
    }
    return std::nullopt;
  };

  while (total > 0) {
    auto pick = voter_on_bottom();
    if (!pick) {
      const WeightVector q_now(WeightDomain::candidates, remaining_q);
      auto cycle = find_bottom_trading_cycle(e, current, q_now);
      if (!cycle) throw Error("internal: no bottom trading cycle although no voter sits on her bottom");
      current = swap_along_cycle(e, current, *cycle);
      pick = voter_on_bottom();
      if (!pick) throw Error("internal: swap did not place a voter on her bottom choice");
    }
    const auto [v, c] = *pick;
    order.sequence.push_back(v);
    current.at(v, c) -= 1;
    remaining_q[c.value()] -= 1;
    --total;
  }
  return order;
}

std::optional<std::string> audit_outcome(const Election& e, const WeightVector& p, const WeightVector& q,
                                         const RuleOutcome& outcome) {
  if (!is_valid_matching(e, outcome.witness, p, q)) return "witness is not a (p,q)-matching";
  const WinnerSet recomputed = tied_winners(e, outcome.witness);
  if (recomputed != outcome.winners) return "winners differ from W(witness)";
  if (outcome.winners.winners.empty()) return "empty winner set";
  if (!is_prefix_intersecting(e, outcome.winners.winners)) return "winners are not prefix-intersecting";

  CandidateMask from_indices(e.num_candidates(), true);
  for (VoterId v : e.voters()) {
    auto r = e.ranking(v);
    for (std::size_t pos = outcome.winners.prefix_indices.at(v.value()); pos < r.size(); ++pos) {
      from_indices[r[pos].value()] = false;
    }
  }
  if (from_mask(from_indices) != outcome.winners.winners) return "prefix indices do not reproduce the winners";

  const auto& events = outcome.trace.events;
  if (events.empty()) return std::nullopt;
  if (events.back().time != 1) return "trace does not end at time 1";
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (i > 0 && !(events[i - 1].time < ev.time)) return "trace times are not strictly increasing";
    Rational sum = 0;
    for (const auto& w : ev.weights) {
      if (w < 0) return "negative weight in trace";
      sum += w;
    }
    if (sum != q.total() * (1 - ev.time)) return "weight not conserved at time " + format_rational(ev.time);
    for (CandidateId c : ev.eliminated) {
      if (ev.weights[c.value()] != 0) return "eliminated candidate with positive weight";
    }
  }
  // Opposition recorded after the closure is computed on the survivors, so
  // verify that each elimination had an opposing voter just before it.
  CandidateMask alive(e.num_candidates(), true);
  for (const auto& ev : events) {
    for (CandidateId c : ev.eliminated) {
      bool opposed = false;
      for (VoterId v : e.voters()) {
        if (p[v] > 0 && e.bottom_among(v, alive) == c) opposed = true;
      }
      if (!opposed) return "candidate " + e.name(c) + " eliminated without opposition";
      alive[c.value()] = false;
    }
  }
  return std::nullopt;
}

}  // namespace veto
