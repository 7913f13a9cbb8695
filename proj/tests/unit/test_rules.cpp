#include <doctest.h>

#include <numeric>
#include <set>

#include "oracles.hpp"
#include "veto/core.hpp"
#include "veto/errors.hpp"
#include "veto/rules.hpp"

using namespace veto;

namespace {

Rational r(long num, unsigned long den = 1) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::vector<VoterId> voters_of(std::initializer_list<std::size_t> ids) {
  std::vector<VoterId> out;
  for (auto id : ids) out.emplace_back(id - 1);
  return out;
}

void check_audit(const Election& e, const WeightVector& p, const WeightVector& q, const RuleOutcome& out) {
  const auto problem = audit_outcome(e, p, q, out);
  CHECK_MESSAGE(!problem.has_value(), (problem ? *problem : ""), "\n", render_election(e));
}

BottomTradingCycle reversed(const BottomTradingCycle& c) {
  const std::size_t k = c.voters.size();
  BottomTradingCycle out;
  for (std::size_t j = 0; j < k; ++j) {
    out.voters.push_back(c.voters[k - 1 - j]);
    out.candidates.push_back(c.candidates[(k - j) % k]);
  }
  return out;
}

}  // namespace

TEST_CASE("obvious tie: both candidates win") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  const RuleOutcome out = simultaneous_plurality_veto(e);
  CHECK(out.winners.winners == oracle::ids(e, {"a", "b"}));
  CHECK(out.witness.at(VoterId(0), *e.find_candidate("b")) == 1);
  CHECK(out.witness.at(VoterId(1), *e.find_candidate("a")) == 1);
  REQUIRE(out.trace.events.size() == 2);
  CHECK(out.trace.events[0].time == 0);
  CHECK(out.trace.events[0].eliminated.empty());
  CHECK(out.trace.events[1].time == 1);
  check_audit(e, unit_voter_weights(e), plurality_weights(e), out);
}

TEST_CASE("zero-plurality candidate wins the resolvability example") {
  const Election e = oracle::load_ballots("zero_plurality.ballots");
  const RuleOutcome out = simultaneous_plurality_veto(e);
  CHECK(out.winners.winners == oracle::ids(e, {"a", "b", "c"}));
  CHECK(plurality_weights(e)[*e.find_candidate("b")] == 0);
  // b is nobody's bottom choice, so it is never opposed.
  REQUIRE(out.trace.events.size() == 2);
  CHECK(out.trace.events[0].opposition[1].empty());
  check_audit(e, unit_voter_weights(e), plurality_weights(e), out);
}

TEST_CASE("adding a voter for b resolves the tie: hand trace") {
  const Election e = oracle::load_ballots("zero_plurality.ballots").with_added_voter({CandidateId(1), CandidateId(0),
                                                                             CandidateId(2)});
  const RuleOutcome out = simultaneous_plurality_veto(e);
  const auto a = CandidateId(0), b = CandidateId(1), c = CandidateId(2);
  CHECK(out.winners.winners == std::vector<CandidateId>{b});
  const auto& ev = out.trace.events;
  REQUIRE(ev.size() == 4);
  CHECK(ev[0].time == 0);
  CHECK(ev[1].time == r(1, 2));
  CHECK(ev[1].eliminated == std::vector<CandidateId>{c});
  CHECK(ev[1].weights == std::vector<Rational>{r(1, 2), r(1), r(0)});
  CHECK(ev[1].opposition[a.value()] == voters_of({2, 3}));
  CHECK(ev[2].time == r(3, 4));
  CHECK(ev[2].eliminated == std::vector<CandidateId>{a});
  CHECK(ev[2].weights == std::vector<Rational>{r(0), r(3, 4), r(0)});
  CHECK(ev[3].time == 1);
  CHECK(ev[3].weights == std::vector<Rational>{r(0), r(0), r(0)});
  CHECK(out.witness.at(VoterId(0), c) == r(1, 2));
  CHECK(out.witness.at(VoterId(0), b) == r(1, 2));
  CHECK(out.witness.at(VoterId(1), a) == r(3, 4));
  CHECK(out.witness.at(VoterId(1), b) == r(1, 4));
  CHECK(out.witness.at(VoterId(2), c) == r(1, 2));
  CHECK(out.witness.at(VoterId(2), a) == r(1, 4));
  CHECK(out.witness.at(VoterId(2), b) == r(1, 4));
  check_audit(e, unit_voter_weights(e), plurality_weights(e), out);
}

TEST_CASE("golden winner sets") {
  CHECK(oracle::names(oracle::load_ballots("consistency.ballots"),
                      simultaneous_plurality_veto(oracle::load_ballots("consistency.ballots")).winners.winners) ==
        std::vector<std::string>{"a", "b", "c"});
  const Election p = oracle::load_ballots("pareto.ballots");
  CHECK(simultaneous_plurality_veto(p).winners.winners == p.candidates());
}

TEST_CASE("voters with zero weight never veto") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  const WeightVector p(WeightDomain::voters, {r(1), r(0)});
  const WeightVector q(WeightDomain::candidates, {r(1), r(0)});
  const RuleOutcome out = simultaneous_veto(e, p, q);
  CHECK(out.winners.winners == std::vector<CandidateId>{CandidateId(0)});
  CHECK(out.trace.events[0].eliminated == std::vector<CandidateId>{CandidateId(1)});
  check_audit(e, p, q, out);
}

TEST_CASE("simultaneous veto rejects bad weights") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  const WeightVector p = unit_voter_weights(e);
  CHECK_THROWS_AS(simultaneous_veto(e, p, uniform_candidate_weights(e, r(3))), Error);
  CHECK_THROWS_AS(simultaneous_veto(e, WeightVector(WeightDomain::voters, {r(0), r(0)}),
                                    WeightVector(WeightDomain::candidates, {r(0), r(0)})),
                  Error);
  CHECK_THROWS_AS(simultaneous_veto(e, plurality_weights(e), p), Error);
  const detail::RateSegment idle{r(1), {r(0), r(0)}};
  CHECK_THROWS_AS(detail::scheduled_veto(e, plurality_weights(e), std::span(&idle, 1)), Error);
}

TEST_CASE("random rational runs are audited and lie in the veto core") {
  std::mt19937_64 gen(5);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Election e = random_election(1 + seed % 5, 1 + (seed / 5) % 6, seed);
    const auto [p, q] = oracle::random_pq(e, gen);
    const RuleOutcome out = simultaneous_veto(e, p, q);
    check_audit(e, p, q, out);
    const auto core = veto_core(e, p, q);
    for (CandidateId w : out.winners.winners) {
      CHECK(std::binary_search(core.begin(), core.end(), w));
      CHECK(admits(e, w, out.witness));
    }
  }
}

TEST_CASE("tampered outcomes fail the audit") {
  const Election e = oracle::load_ballots("consistency.ballots");
  const WeightVector p = unit_voter_weights(e);
  const WeightVector q = plurality_weights(e);
  const RuleOutcome good = simultaneous_veto(e, p, q);
  CHECK_FALSE(audit_outcome(e, p, q, good).has_value());

  RuleOutcome bad = good;
  bad.winners.winners.pop_back();
  CHECK(audit_outcome(e, p, q, bad).has_value());
  bad = good;
  bad.witness.at(VoterId(0), CandidateId(0)) += 1;
  CHECK(audit_outcome(e, p, q, bad).has_value());
  bad = good;
  bad.trace.events[0].weights[0] += 1;
  CHECK(audit_outcome(e, p, q, bad).has_value());
  bad = good;
  bad.trace.events.back().time = r(2);
  CHECK(audit_outcome(e, p, q, bad).has_value());
  bad = good;
  bad.winners.prefix_indices[0] = 1;
  CHECK(audit_outcome(e, p, q, bad).has_value());
}

TEST_CASE("serial veto on the obvious tie") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  const WeightVector q = plurality_weights(e);
  for (const auto& order : {voters_of({1, 2}), voters_of({2, 1})}) {
    const RuleOutcome out = serial_veto(e, q, VetoOrder{order});
    CHECK(out.winners.winners == oracle::ids(e, {"a", "b"}));
    CHECK(out.trace.events.empty());
    check_audit(e, unit_voter_weights(e), q, out);
  }
}

TEST_CASE("serial veto eliminates exhausted bottoms before decrementing") {
  // Voter 1 drains b; voter 2's bottom is then b with weight 0, so b is
  // removed and voter 2 decrements c instead.
  const Election e = parse_election("candidates a b c\n1: a > c > b\n1: a > c > b\n1: b > a > c\n");
  const WeightVector q(WeightDomain::candidates, {r(1), r(1), r(1)});
  const RuleOutcome out = serial_veto(e, q, VetoOrder{voters_of({1, 2, 3})});
  CHECK(out.witness.at(VoterId(0), CandidateId(1)) == 1);
  CHECK(out.witness.at(VoterId(1), CandidateId(2)) == 1);
  CHECK(out.witness.at(VoterId(2), CandidateId(0)) == 1);
  CHECK(out.winners.winners == std::vector<CandidateId>{CandidateId(0)});
}

TEST_CASE("serial veto scales rational q and checks the order") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  const WeightVector q(WeightDomain::candidates, {r(1, 2), r(3, 2)});
  const WeightVector p = unit_voter_weights(e);
  const VetoOrder order{voters_of({1, 2, 1, 2})};
  const RuleOutcome out = serial_veto(e, q, order, p);
  CHECK(is_valid_matching(e, out.witness, p, q));
  check_audit(e, p, q, out);
  CHECK_THROWS_AS(serial_veto(e, q, VetoOrder{voters_of({1, 2})}), Error);
  CHECK_THROWS_AS(serial_veto(e, q, VetoOrder{voters_of({1, 1, 1, 2})}, p), Error);
  CHECK_THROWS_AS(serial_veto(e, plurality_weights(e), VetoOrder{voters_of({1, 3})}), Error);
}

TEST_CASE("serial veto with an empty order returns every candidate") {
  const Election e = oracle::load_ballots("zero_plurality.ballots");
  const WeightVector q(WeightDomain::candidates, {r(0), r(0), r(0)});
  const RuleOutcome out = serial_veto(e, q, VetoOrder{});
  CHECK(out.winners.winners == e.candidates());
  CHECK(veto_order_for_matching(e, WeightVector(WeightDomain::voters, {r(0), r(0)}), q, Matching(2, 3)).sequence.empty());
}

TEST_CASE("serial schedule emulation reproduces serial veto") {
  std::mt19937_64 gen(11);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Election e = random_election(1 + seed % 5, 1 + (seed / 5) % 5, seed + 500);
    const WeightVector q = oracle::random_integral_q(e, gen, e.num_voters() + seed % 3);
    std::vector<VoterId> order;
    for (std::size_t i = 0; i < to_u64(q.total()); ++i) order.emplace_back(uniform_below(gen, e.num_voters()));
    const VetoOrder vo{order};
    const RuleOutcome serial = serial_veto(e, q, vo);
    const auto schedule = detail::serial_schedule(e.num_voters(), vo);
    const RuleOutcome emulated = detail::scheduled_veto(e, q, schedule);
    CHECK(serial.winners == emulated.winners);
    CHECK(serial.witness == emulated.witness);
  }
}

TEST_CASE("elimination closure reaches the same fixpoint in any order") {
  std::mt19937_64 gen(3);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Election e = random_election(2 + seed % 5, 1 + seed % 6, seed);
    std::vector<Rational> weights(e.num_candidates());
    for (auto& w : weights) w = uniform_below(gen, 2) == 0 ? r(0) : oracle::random_rational(gen, 3, 2);
    std::vector<bool> active(e.num_voters());
    for (std::size_t v = 0; v < active.size(); ++v) active[v] = uniform_below(gen, 4) != 0;
    CandidateMask start(e.num_candidates(), true);
    for (std::size_t c = 0; c < start.size(); ++c) {
      if (uniform_below(gen, 5) == 0) start[c] = false;
    }

    auto visit = e.candidates();
    CandidateMask reference = start;
    auto removed = detail::eliminate_to_fixpoint(e, reference, weights, active, visit);
    std::set<CandidateId> removed_set(removed.begin(), removed.end());
    for (int trial = 0; trial < 5; ++trial) {
      shuffle_in_place(gen, std::span(visit));
      CandidateMask other = start;
      auto again = detail::eliminate_to_fixpoint(e, other, weights, active, visit);
      CHECK(other == reference);
      CHECK(std::set<CandidateId>(again.begin(), again.end()) == removed_set);
    }
  }
}

TEST_CASE("union of serial winners over all orders equals the veto core") {
  std::mt19937_64 gen(17);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Election e = random_election(1 + seed % 5, 1 + seed % 4, seed + 70);
    const WeightVector p = unit_voter_weights(e);
    const WeightVector q = oracle::random_integral_q(e, gen, e.num_voters());
    std::vector<std::size_t> perm(e.num_voters());
    std::iota(perm.begin(), perm.end(), 0);
    CandidateMask seen(e.num_candidates(), false);
    do {
      VetoOrder order;
      for (auto v : perm) order.sequence.emplace_back(v);
      for (CandidateId c : serial_veto(e, q, order, p).winners.winners) seen[c.value()] = true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(from_mask(seen) == veto_core(e, p, q));
  }
}

TEST_CASE("bottom trading cycle on the obvious tie") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  const WeightVector q = plurality_weights(e);
  Matching m(2, 2);
  m.at(VoterId(0), CandidateId(0)) = 1;
  m.at(VoterId(1), CandidateId(1)) = 1;
  const auto cycle = find_bottom_trading_cycle(e, m, q);
  REQUIRE(cycle.has_value());
  CHECK(cycle->voters == voters_of({1, 2}));
  CHECK(cycle->candidates == std::vector<CandidateId>{CandidateId(0), CandidateId(1)});
  CHECK(is_bottom_trading_cycle(e, m, *cycle));
  const Matching swapped = swap_along_cycle(e, m, *cycle);
  CHECK(swapped.at(VoterId(0), CandidateId(1)) == 1);
  CHECK(swapped.at(VoterId(1), CandidateId(0)) == 1);
  CHECK_FALSE(find_bottom_trading_cycle(e, swapped, q).has_value());
  CHECK(swap_along_cycle(e, swapped, reversed(*cycle)) == m);
}

TEST_CASE("order synthesis on the obvious tie and the Pareto instance") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  Matching m(2, 2);
  m.at(VoterId(0), CandidateId(1)) = 1;
  m.at(VoterId(1), CandidateId(0)) = 1;
  const VetoOrder order = veto_order_for_matching(e, unit_voter_weights(e), plurality_weights(e), m);
  CHECK(order.sequence.size() == 2);
  CHECK(serial_veto(e, plurality_weights(e), order).winners.winners == oracle::ids(e, {"a", "b"}));

  const Election pareto = oracle::load_ballots("pareto.ballots");
  Matching pm(2, 5);
  pm.at(VoterId(0), CandidateId(4)) = 1;
  pm.at(VoterId(1), CandidateId(0)) = 1;
  const WeightVector pq = plurality_weights(pareto);
  const VetoOrder po = veto_order_for_matching(pareto, unit_voter_weights(pareto), pq, pm);
  CHECK(serial_veto(pareto, pq, po).winners.winners == pareto.candidates());
}

TEST_CASE("order synthesis rejects bad input") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  Matching m(2, 2);
  m.at(VoterId(0), CandidateId(1)) = 1;
  m.at(VoterId(1), CandidateId(1)) = 1;
  CHECK_THROWS_AS(veto_order_for_matching(e, unit_voter_weights(e), plurality_weights(e), m), Error);
  Matching half(2, 2);
  half.at(VoterId(0), CandidateId(1)) = r(1, 2);
  half.at(VoterId(0), CandidateId(0)) = r(1, 2);
  half.at(VoterId(1), CandidateId(0)) = r(1, 2);
  half.at(VoterId(1), CandidateId(1)) = r(1, 2);
  CHECK_THROWS_AS(veto_order_for_matching(e, unit_voter_weights(e), plurality_weights(e), half), Error);
}

TEST_CASE("swap validation") {
  const Election e = oracle::load_ballots("two_way_tie.ballots");
  Matching m(2, 2);
  m.at(VoterId(0), CandidateId(0)) = 1;
  m.at(VoterId(1), CandidateId(1)) = 1;
  CHECK_THROWS_AS(swap_along_cycle(e, m, BottomTradingCycle{}), Error);
  CHECK_THROWS_AS(swap_along_cycle(e, m, BottomTradingCycle{voters_of({1, 2}), {CandidateId(1), CandidateId(0)}}),
                  Error);
  CHECK_THROWS_AS(swap_along_cycle(e, m, BottomTradingCycle{voters_of({1, 2}), {CandidateId(0), CandidateId(0)}}),
                  Error);
  CHECK_FALSE(is_bottom_trading_cycle(e, m, BottomTradingCycle{voters_of({1}), {CandidateId(0)}}));
}

TEST_CASE("bottom trading cycles and order synthesis on random matchings") {
  std::mt19937_64 gen(23);
  std::size_t cycles = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Election e = random_election(2 + seed % 4, 2 + seed % 4, seed + 9000);
    std::vector<Rational> pw(e.num_voters());
    for (auto& x : pw) x = r(static_cast<long>(uniform_below(gen, 3)));
    if (std::accumulate(pw.begin(), pw.end(), Rational(0)) == 0) pw[0] = 1;
    const WeightVector p(WeightDomain::voters, pw);
    const WeightVector q = oracle::random_integral_q(e, gen, to_u64(p.total()));
    for (CandidateId a : e.candidates()) {
      const auto admitted = find_admitted_matching(e, a, p, q);
      const auto* m = std::get_if<Matching>(&admitted);
      if (!m) continue;
      if (auto cycle = find_bottom_trading_cycle(e, *m, q)) {
        ++cycles;
        CHECK(is_bottom_trading_cycle(e, *m, *cycle));
        const Matching swapped = swap_along_cycle(e, *m, *cycle);
        CHECK(is_valid_matching(e, swapped, p, q));
        const auto before = tied_winners(e, *m).winners;
        const auto after = tied_winners(e, swapped).winners;
        CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
        CHECK(swap_along_cycle(e, swapped, reversed(*cycle)) == *m);
        CHECK_FALSE(find_bottom_trading_cycle(e, swapped, q).has_value());
      }
      const VetoOrder order = veto_order_for_matching(e, p, q, *m);
      const RuleOutcome out = serial_veto(e, q, order, p);
      const auto target = tied_winners(e, *m).winners;
      CHECK(std::includes(out.winners.winners.begin(), out.winners.winners.end(), target.begin(), target.end()));
      check_audit(e, p, q, out);
    }
  }
  CHECK(cycles > 50);
}
