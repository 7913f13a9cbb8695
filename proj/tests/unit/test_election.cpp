#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "veto/errors.hpp"

using namespace veto;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_election(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 999;
}

}  // namespace

TEST_CASE("ballot parsing expands multiplicities in file order") {
  const Election e = parse_election(
      "# header comment\n"
      "candidates a b c\n"
      "\n"
      "2: a > b > c\n"
      "1: c>b>a   # trailing comment\n");
  CHECK(e.num_voters() == 3);
  CHECK(e.num_candidates() == 3);
  CHECK(e.top(VoterId(1)) == CandidateId(0));
  CHECK(e.bottom(VoterId(2)) == CandidateId(0));
  CHECK(e.position(VoterId(2), CandidateId(1)) == 1);
  CHECK(e.prefers(VoterId(0), CandidateId(0), CandidateId(2)));
  CHECK(e.weakly_prefers(VoterId(0), CandidateId(1), CandidateId(1)));
}

TEST_CASE("ballot errors carry line numbers") {
  CHECK(error_line("candidates a a\n1: a\n") == 1);
  CHECK(error_line("candidates a b\n1: a > x\n") == 2);
  CHECK(error_line("candidates a b\n\n1: a > a\n") == 3);
  CHECK(error_line("candidates a b c\n1: a > b\n") == 2);
  CHECK(error_line("candidates a b\n1: a = b\n") == 2);
  CHECK(error_line("candidates a b\n0: a > b\n") == 2);
  CHECK(error_line("candidates a b\nx: a > b\n") == 2);
  CHECK(error_line("candidates a b\n1 a > b\n") == 2);
  CHECK(error_line("1: a > b\n") == 1);
  CHECK_THROWS_AS(parse_election("# nothing\n"), ParseError);
  CHECK_THROWS_AS(parse_election("candidates a b\n"), ParseError);
}

TEST_CASE("render and parse round trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Election e = random_election(1 + seed % 6, 1 + seed % 7, seed);
    CHECK(parse_election(render_election(e)) == e);
  }
  const Election ex = oracle::load_ballots("convexity.ballots");
  CHECK(parse_election(render_election(ex)) == ex);
}

TEST_CASE("election construction validates rankings") {
  CHECK_THROWS_AS(Election({"a", "b"}, {{CandidateId(0), CandidateId(0)}}), Error);
  CHECK_THROWS_AS(Election({"a", "b"}, {{CandidateId(0)}}), Error);
  CHECK_THROWS_AS(Election({"a", "a"}, {{CandidateId(0), CandidateId(1)}}), Error);
  CHECK_THROWS_AS(Election({"a"}, {}), Error);
  CHECK_THROWS_AS(Election({}, {{}}), Error);
}

TEST_CASE("random elections are deterministic and stable in n") {
  CHECK(random_election(5, 7, 11) == random_election(5, 7, 11));
  CHECK_FALSE(random_election(5, 7, 11) == random_election(5, 7, 12));
  const Election small = random_election(4, 3, 99);
  const Election large = random_election(4, 10, 99);
  for (VoterId v : small.voters()) {
    CHECK(std::vector<CandidateId>(small.ranking(v).begin(), small.ranking(v).end()) ==
          std::vector<CandidateId>(large.ranking(v).begin(), large.ranking(v).end()));
  }
  CHECK(small.name(CandidateId(0)) == "c1");
  CHECK(small.name(CandidateId(3)) == "c4");
}

TEST_CASE("random rankings are close to uniform over permutations") {
  // 6 permutations of 3 candidates, 60000 draws: each count within 5 sigma.
  const Election e = random_election(3, 60000, 7);
  std::map<std::vector<CandidateId>, std::size_t> counts;
  for (VoterId v : e.voters()) counts[{e.ranking(v).begin(), e.ranking(v).end()}]++;
  CHECK(counts.size() == 6);
  const double expected = 10000.0;
  const double sigma = std::sqrt(60000.0 * (1.0 / 6) * (5.0 / 6));
  double chi2 = 0;
  for (const auto& [perm, count] : counts) {
    CHECK(std::abs(static_cast<double>(count) - expected) < 5 * sigma);
    chi2 += (count - expected) * (count - expected) / expected;
  }
  // 5 degrees of freedom; the 99.9% quantile is about 20.5.
  CHECK(chi2 < 20.5);
}

TEST_CASE("uniform_below rejects a zero bound and stays in range") {
  std::mt19937_64 gen(1);
  CHECK_THROWS_AS(uniform_below(gen, 0), Error);
  for (int i = 0; i < 1000; ++i) CHECK(uniform_below(gen, 7) < 7);
}

TEST_CASE("tally, reversal and weight builders") {
  const Election e = oracle::load_ballots("zero_plurality.ballots");
  const ScoreProfile s = tally(e);
  CHECK(s.plurality == std::vector<std::size_t>{1, 0, 1});
  CHECK(s.veto == std::vector<std::size_t>{1, 0, 1});
  const Election r = reverse_profile(e);
  CHECK(r.top(VoterId(0)) == CandidateId(2));
  CHECK(reverse_profile(r) == e);

  CHECK(plurality_weights(e).total() == 2);
  CHECK(plurality_weights(e)[CandidateId(1)] == 0);
  CHECK(uniform_candidate_weights(e, Rational(2))[CandidateId(0)] == Rational(2, 3));
  const WeightVector k2 = k_approval_weights(e, 2);
  CHECK(k2[CandidateId(1)] == 2);
  CHECK(k2.total() == 4);
  CHECK(k_approval_weights(e, 3).total() == 6);
  CHECK_THROWS_AS(k_approval_weights(e, 0), Error);
  CHECK_THROWS_AS(k_approval_weights(e, 4), Error);
  CHECK(unit_voter_weights(e).total() == 2);
}

TEST_CASE("weight vectors reject negative entries and allow a zero total") {
  CHECK_THROWS_AS(WeightVector(WeightDomain::voters, {Rational(1), Rational(-1)}), Error);
  const WeightVector zero(WeightDomain::candidates, {Rational(0), Rational(0)});
  CHECK(zero.total() == 0);
  CHECK(zero.is_integral());
  const WeightVector half(WeightDomain::voters, {Rational(1, 2), Rational(3, 2)});
  CHECK_FALSE(half.is_integral());
  CHECK(half.scaled(Rational(2)).is_integral());
  CHECK(half.scaled(Rational(2)).total() == 4);
}

TEST_CASE("restriction and edits") {
  const Election e = oracle::load_ballots("consistency.ballots");
  const Election first = e.restricted_to(std::vector<VoterId>{VoterId(0), VoterId(1), VoterId(2)});
  CHECK(first == oracle::load_ballots("consistency_part1.ballots"));
  const Election second = e.restricted_to(std::vector<VoterId>{VoterId(3), VoterId(4)});
  CHECK(second == oracle::load_ballots("consistency_part2.ballots"));
  const Election more = first.with_added_voter({CandidateId(4), CandidateId(3), CandidateId(2), CandidateId(1),
                                                CandidateId(0)});
  CHECK(more.num_voters() == 4);
  CHECK(more.top(VoterId(3)) == CandidateId(4));
  const Election edited = first.with_ranking(VoterId(0), {CandidateId(4), CandidateId(3), CandidateId(2),
                                                          CandidateId(1), CandidateId(0)});
  CHECK(edited.top(VoterId(0)) == CandidateId(4));
  CHECK(first.top(VoterId(0)) == CandidateId(0));
}

TEST_CASE("bottom_among and masks") {
  const Election e = parse_election("candidates a b c d\n1: a > b > c > d\n");
  CandidateMask mask{true, true, false, false};
  CHECK(e.bottom_among(VoterId(0), mask) == CandidateId(1));
  CHECK_FALSE(e.bottom_among(VoterId(0), CandidateMask(4, false)).has_value());
  CHECK(from_mask(to_mask(4, std::vector<CandidateId>{CandidateId(3), CandidateId(1)})) ==
        std::vector<CandidateId>{CandidateId(1), CandidateId(3)});
  CHECK(e.find_candidate("c") == CandidateId(2));
  CHECK_FALSE(e.find_candidate("z").has_value());
}
