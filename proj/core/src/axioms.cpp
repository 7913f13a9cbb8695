#include "veto/axioms.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "veto/errors.hpp"
#include "veto/rules.hpp"

namespace veto {
namespace {

AxiomReport pass(std::string_view axiom) { return AxiomReport{std::string(axiom), Verdict::pass, std::nullopt, 1}; }

AxiomReport fail(std::string_view axiom, const Election& before, const Election& after,
                 std::vector<CandidateId> winners_before, std::vector<CandidateId> winners_after, std::string detail) {
  return AxiomReport{std::string(axiom), Verdict::fail,
                     Counterexample{before, after, std::move(winners_before), std::move(winners_after),
                                    std::move(detail)},
                     1};
}

bool contains(std::span<const CandidateId> set, CandidateId c) { return std::find(set.begin(), set.end(), c) != set.end(); }

std::string names_of(const Election& e, std::span<const CandidateId> set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i > 0) out += ",";
    out += e.name(set[i]);
  }
  return out + "}";
}

std::vector<CandidateId> ranking_copy(const Election& e, VoterId v) {
  auto r = e.ranking(v);
  return {r.begin(), r.end()};
}

nlohmann::json names_json(const Election& e, std::span<const CandidateId> set) {
  auto out = nlohmann::json::array();
  for (CandidateId c : set) out.push_back(e.name(c));
  return out;
}

constexpr std::array<std::string_view, 6> kAxioms = {"anonymity-neutrality", "resolvability", "monotonicity",
                                                     "majority-family",      "reversal-symmetry",
                                                     "pareto-dominators"};

}  // namespace

std::vector<CandidateId> plurality_veto_winners(const Election& e) {
  return simultaneous_plurality_veto(e).winners.winners;
}

AxiomReport check_anonymity_neutrality(const Election& e, std::uint64_t seed, const Rule& rule, std::size_t samples) {
  constexpr std::string_view axiom = "anonymity-neutrality";
  const auto winners = rule(e);
  std::mt19937_64 gen(splitmix64(seed));
  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();
  for (std::size_t s = 0; s <= samples; ++s) {
    std::vector<std::size_t> sigma(n);
    std::vector<std::size_t> pi(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::iota(pi.begin(), pi.end(), 0);
    // Sample 0 is the identity.
    if (s > 0) {
      shuffle_in_place(gen, std::span(sigma));
      shuffle_in_place(gen, std::span(pi));
    }
    std::vector<std::string> names(m);
    for (std::size_t c = 0; c < m; ++c) names[pi[c]] = std::string(e.name(CandidateId(c)));
    std::vector<std::vector<CandidateId>> rankings;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<CandidateId> r;
      for (CandidateId c : e.ranking(VoterId(sigma[i]))) r.emplace_back(pi[c.value()]);
      rankings.push_back(std::move(r));
    }
    const Election permuted(std::move(names), std::move(rankings));
    std::vector<CandidateId> expected;
    for (CandidateId w : winners) expected.emplace_back(pi[w.value()]);
    std::sort(expected.begin(), expected.end());
    const auto got = rule(permuted);
    if (got != expected) {
      return fail(axiom, e, permuted, winners, got,
                  "expected " + names_of(permuted, expected) + " after permuting voters and relabeling candidates");
    }
  }
  return pass(axiom);
}

AxiomReport check_resolvability(const Election& e, std::uint64_t seed, const Rule& rule, std::size_t samples) {
  constexpr std::string_view axiom = "resolvability";
  const auto winners = rule(e);
  const std::size_t m = e.num_candidates();
  std::mt19937_64 gen(splitmix64(seed));
  for (CandidateId w : winners) {
    std::vector<CandidateId> rest;
    for (CandidateId c : e.candidates()) {
      if (c != w) rest.push_back(c);
    }
    std::vector<std::vector<CandidateId>> tails;
    if (m <= 4) {
      do {
        tails.push_back(rest);
      } while (std::next_permutation(rest.begin(), rest.end()));
    } else {
      tails.push_back(rest);
      tails.emplace_back(rest.rbegin(), rest.rend());
      for (std::size_t s = 0; s < samples; ++s) {
        auto t = rest;
        shuffle_in_place(gen, std::span(t));
        tails.push_back(std::move(t));
      }
    }
    for (const auto& tail : tails) {
      std::vector<CandidateId> ranking{w};
      ranking.insert(ranking.end(), tail.begin(), tail.end());
      const Election augmented = e.with_added_voter(ranking);
      const auto got = rule(augmented);
      if (got != std::vector<CandidateId>{w}) {
        return fail(axiom, e, augmented, winners, got,
                    "adding a voter who ranks " + e.name(w) + " first should make it the unique winner");
      }
    }
  }
  return pass(axiom);
}

AxiomReport check_monotonicity(const Election& e, const Rule& rule) {
  constexpr std::string_view axiom = "monotonicity";
  const auto winners = rule(e);
  for (CandidateId w : winners) {
    for (VoterId v : e.voters()) {
      const std::size_t pos = e.position(v, w);
      if (pos == 0) continue;
      auto ranking = ranking_copy(e, v);
      std::swap(ranking[pos], ranking[pos - 1]);
      const Election modified = e.with_ranking(v, std::move(ranking));
      const auto got = rule(modified);
      if (!contains(got, w)) {
        return fail(axiom, e, modified, winners, got,
                    e.name(w) + " stopped winning after voter " + std::to_string(v.value() + 1) +
                        " moved it up one position");
      }
    }
  }
  return pass(axiom);
}

AxiomReport check_majority_family(const Election& e, const Rule& rule) {
  constexpr std::string_view axiom = "majority-family";
  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();
  std::vector<CandidateMask> checked;
  std::optional<std::vector<CandidateId>> winners;
  // A set front-ranked by v is v's top-|S| prefix, so prefixes cover every S.
  for (std::size_t k = 1; k < m; ++k) {
    for (VoterId v : e.voters()) {
      CandidateMask s(m, false);
      for (std::size_t pos = 0; pos < k; ++pos) s[e.ranking(v)[pos].value()] = true;
      if (std::find(checked.begin(), checked.end(), s) != checked.end()) continue;
      checked.push_back(s);
      std::size_t supporters = 0;
      for (VoterId u : e.voters()) {
        bool front = true;
        for (std::size_t pos = 0; pos < k && front; ++pos) front = s[e.ranking(u)[pos].value()];
        supporters += front ? 1 : 0;
      }
      if (2 * supporters <= n) continue;
      if (!winners) winners = rule(e);
      for (CandidateId w : *winners) {
        if (!s[w.value()]) {
          return fail(axiom, e, e, *winners, *winners,
                      std::to_string(supporters) + " of " + std::to_string(n) + " voters rank " +
                          names_of(e, from_mask(s)) + " first but " + e.name(w) + " wins");
        }
      }
    }
  }
  return pass(axiom);
}

AxiomReport check_reversal_symmetry(const Election& e, const Rule& rule) {
  constexpr std::string_view axiom = "reversal-symmetry";
  const auto winners = rule(e);
  if (winners.size() != 1 || e.num_candidates() < 2) return pass(axiom);
  const CandidateId w = winners.front();
  const ScoreProfile scores = tally(e);
  if (scores.plurality[w.value()] <= scores.veto[w.value()]) {
    return fail(axiom, e, e, winners, winners,
                "unique winner " + e.name(w) + " has plu " + std::to_string(scores.plurality[w.value()]) +
                    " <= veto " + std::to_string(scores.veto[w.value()]));
  }
  const Election reversed = reverse_profile(e);
  const auto got = rule(reversed);
  if (contains(got, w)) {
    return fail(axiom, e, reversed, winners, got, e.name(w) + " still wins after reversing every ranking");
  }
  return pass(axiom);
}

AxiomReport check_dominated_winners(const Election& e, const Rule& rule) {
  constexpr std::string_view axiom = "pareto-dominators";
  const auto winners = rule(e);
  const ScoreProfile scores = tally(e);
  for (CandidateId a : winners) {
    for (CandidateId b : e.candidates()) {
      if (b == a) continue;
      bool dominates = true;
      for (VoterId v : e.voters()) dominates = dominates && e.prefers(v, b, a);
      if (dominates && scores.plurality[b.value()] != 0) {
        return fail(axiom, e, e, winners, winners,
                    "winner " + e.name(a) + " is dominated by " + e.name(b) + " with plurality score " +
                        std::to_string(scores.plurality[b.value()]));
      }
    }
  }
  return pass(axiom);
}

std::span<const std::string_view> axiom_names() { return kAxioms; }

AxiomReport check_axiom(std::string_view axiom, const Election& e, std::uint64_t seed, const Rule& rule) {
  if (axiom == "anonymity-neutrality") return check_anonymity_neutrality(e, seed, rule);
  if (axiom == "resolvability") return check_resolvability(e, seed, rule);
  if (axiom == "monotonicity") return check_monotonicity(e, rule);
  if (axiom == "majority-family") return check_majority_family(e, rule);
  if (axiom == "reversal-symmetry") return check_reversal_symmetry(e, rule);
  if (axiom == "pareto-dominators") return check_dominated_winners(e, rule);
  throw Error("unknown axiom '" + std::string(axiom) + "'");
}

AxiomReport combine_reports(std::string_view axiom, std::span<const AxiomReport> reports) {
  AxiomReport out = pass(axiom);
  out.instances = 0;
  for (const auto& r : reports) {
    out.instances += r.instances;
    if (r.verdict == Verdict::fail && out.verdict == Verdict::pass) {
      out.verdict = Verdict::fail;
      out.counterexample = r.counterexample;
    }
  }
  return out;
}

Election sweep_election(std::size_t max_n, std::size_t max_m, std::uint64_t seed, std::size_t trial) {
  if (max_n == 0 || max_m == 0) throw Error("sweep needs max_n >= 1 and max_m >= 1");
  std::mt19937_64 gen(splitmix64(seed ^ splitmix64(0x5eed0000ULL + trial)));
  const auto n = static_cast<std::size_t>(1 + uniform_below(gen, max_n));
  const auto m = static_cast<std::size_t>(1 + uniform_below(gen, max_m));
  return random_election(m, n, gen());
}

std::vector<AxiomReport> sweep_random(std::span<const std::string_view> axioms, std::size_t max_n, std::size_t max_m,
                                      std::size_t trials, std::uint64_t seed, const Rule& rule) {
  std::vector<std::vector<AxiomReport>> per_axiom(axioms.size());
  for (std::size_t t = 0; t < trials; ++t) {
    const Election e = sweep_election(max_n, max_m, seed, t);
    for (std::size_t a = 0; a < axioms.size(); ++a) {
      per_axiom[a].push_back(check_axiom(axioms[a], e, splitmix64(seed + t), rule));
    }
  }
  std::vector<AxiomReport> out;
  for (std::size_t a = 0; a < axioms.size(); ++a) out.push_back(combine_reports(axioms[a], per_axiom[a]));
  return out;
}

void for_each_election(std::size_t max_n, std::size_t max_m, const std::function<void(const Election&)>& visit) {
  for (std::size_t m = 1; m <= max_m; ++m) {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < m; ++c) names.push_back("c" + std::to_string(c + 1));
    std::vector<std::vector<CandidateId>> perms;
    std::vector<CandidateId> p;
    for (std::size_t c = 0; c < m; ++c) p.emplace_back(c);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    for (std::size_t n = 1; n <= max_n; ++n) {
      std::vector<std::size_t> digits(n, 0);
      for (;;) {
        std::vector<std::vector<CandidateId>> rankings;
        for (std::size_t d : digits) rankings.push_back(perms[d]);
        visit(Election(names, std::move(rankings)));
        std::size_t i = 0;
        while (i < n && ++digits[i] == perms.size()) digits[i++] = 0;
        if (i == n) break;
      }
    }
  }
}

std::vector<AxiomReport> sweep_exhaustive(std::span<const std::string_view> axioms, std::size_t max_n,
                                          std::size_t max_m, std::uint64_t seed, const Rule& rule) {
  std::vector<std::vector<AxiomReport>> per_axiom(axioms.size());
  std::size_t index = 0;
  for_each_election(max_n, max_m, [&](const Election& e) {
    for (std::size_t a = 0; a < axioms.size(); ++a) {
      per_axiom[a].push_back(check_axiom(axioms[a], e, splitmix64(seed + index), rule));
    }
    ++index;
  });
  std::vector<AxiomReport> out;
  for (std::size_t a = 0; a < axioms.size(); ++a) out.push_back(combine_reports(axioms[a], per_axiom[a]));
  return out;
}

Election consistency_example() {
  return parse_election(
      "candidates a b c d e\n"
      "1: a > c > d > b > e\n"
      "1: b > c > a > d > e\n"
      "1: d > c > b > a > e\n"
      "1: c > a > b > d > e\n"
      "1: e > d > b > a > c\n");
}

Election pareto_example(std::size_t m) {
  if (m < 2) throw Error("the Pareto instance needs at least two candidates");
  std::vector<std::string> names;
  for (std::size_t c = 0; c < m; ++c) names.push_back("c" + std::to_string(c + 1));
  std::vector<CandidateId> first;
  for (std::size_t c = 0; c < m; ++c) first.emplace_back(c);
  std::vector<CandidateId> second = first;
  std::swap(second.front(), second.back());
  return Election(std::move(names), {first, second});
}

std::vector<CandidateId> condorcet_winners(const Election& e) {
  std::vector<CandidateId> out;
  for (CandidateId a : e.candidates()) {
    bool wins = true;
    for (CandidateId b : e.candidates()) {
      if (a == b) continue;
      std::size_t ahead = 0;
      for (VoterId v : e.voters()) ahead += e.prefers(v, a, b) ? 1 : 0;
      wins = wins && 2 * ahead >= e.num_voters();
    }
    if (wins) out.push_back(a);
  }
  return out;
}

std::vector<ViolationDemo> demonstrate_violations(std::uint64_t seed, const Rule& rule) {
  std::vector<ViolationDemo> out;

  {
    ViolationDemo demo{"consistency", false, "", {}, {}};
    const Election whole = consistency_example();
    const std::vector<VoterId> first{VoterId(0), VoterId(1), VoterId(2)};
    const std::vector<VoterId> second{VoterId(3), VoterId(4)};
    demo.elections = {whole, whole.restricted_to(first), whole.restricted_to(second)};
    for (const auto& e : demo.elections) demo.winners.push_back(rule(e));
    const auto set = [&](std::string_view names) {
      std::vector<CandidateId> s;
      for (char c : names) s.push_back(*whole.find_candidate(std::string(1, c)));
      return s;
    };
    demo.reproduced = demo.winners[0] == set("abc") && demo.winners[1] == set("abcd") && demo.winners[2] == set("abcde");
    demo.detail = "f(E) = " + names_of(whole, demo.winners[0]) + ", f(E1) = " + names_of(whole, demo.winners[1]) +
                  ", f(E2) = " + names_of(whole, demo.winners[2]);
    out.push_back(std::move(demo));
  }

  {
    ViolationDemo demo{"pareto", false, "", {}, {}};
    const Election e = pareto_example(5);
    demo.elections = {e};
    demo.winners = {rule(e)};
    const auto& w = demo.winners[0];
    const CandidateId c2(1);
    bool dominated = true;
    for (std::size_t c = 2; c + 1 < e.num_candidates(); ++c) {
      for (VoterId v : e.voters()) dominated = dominated && e.prefers(v, c2, CandidateId(c));
    }
    const bool dominators_zero = check_dominated_winners(e, rule).verdict == Verdict::pass;
    demo.reproduced = w == e.candidates() && dominated && dominators_zero && tally(e).plurality[c2.value()] == 0;
    demo.detail = "winners " + names_of(e, w) + "; c2 dominates c3, c4 with plurality score 0";
    out.push_back(std::move(demo));
  }

  {
    ViolationDemo demo{"condorcet", false, "", {}, {}};
    std::mt19937_64 gen(splitmix64(seed));
    for (std::size_t attempt = 0; attempt < 100000 && !demo.reproduced; ++attempt) {
      const auto n = static_cast<std::size_t>(2 + uniform_below(gen, 4));
      const auto m = static_cast<std::size_t>(3 + uniform_below(gen, 3));
      const Election e = random_election(m, n, gen());
      const auto winners = rule(e);
      for (CandidateId c : condorcet_winners(e)) {
        if (contains(winners, c)) continue;
        demo.reproduced = true;
        demo.elections = {e};
        demo.winners = {winners};
        demo.detail = "Condorcet winner " + e.name(c) + " is not among " + names_of(e, winners);
        break;
      }
    }
    if (!demo.reproduced) demo.detail = "no instance found";
    out.push_back(std::move(demo));
  }
  return out;
}

nlohmann::json report_to_json(const AxiomReport& report) {
  nlohmann::json j;
  j["axiom"] = report.axiom;
  j["verdict"] = report.verdict == Verdict::pass ? "PASS" : "FAIL";
  j["instances"] = report.instances;
  if (report.counterexample) {
    const auto& c = *report.counterexample;
    j["counterexample"] = {{"before", render_election(c.before)},
                           {"after", render_election(c.after)},
                           {"winners_before", names_json(c.before, c.winners_before)},
                           {"winners_after", names_json(c.after, c.winners_after)},
                           {"detail", c.detail}};
  }
  return j;
}

nlohmann::json demo_to_json(const ViolationDemo& demo) {
  nlohmann::json j;
  j["violation"] = demo.name;
  j["reproduced"] = demo.reproduced;
  j["detail"] = demo.detail;
  auto instances = nlohmann::json::array();
  for (std::size_t i = 0; i < demo.elections.size(); ++i) {
    instances.push_back({{"election", render_election(demo.elections[i])},
                         {"winners", names_json(demo.elections[i], demo.winners[i])}});
  }
  j["instances"] = std::move(instances);
  return j;
}

}  // namespace veto
