#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "veto/rational.hpp"

namespace veto {

/// Zero-based index with a tag so voter and candidate indices don't mix.
template <class Tag>
class Index {
 public:
  constexpr Index() = default;
  constexpr explicit Index(std::size_t value) : value_(value) {}

  constexpr std::size_t value() const { return value_; }

  friend constexpr auto operator<=>(const Index&, const Index&) = default;

 private:
  std::size_t value_ = 0;
};

using VoterId = Index<struct VoterTag>;
using CandidateId = Index<struct CandidateTag>;

/// Membership mask over candidates, indexed by CandidateId::value().
using CandidateMask = std::vector<bool>;

/// Voters, candidates and one strict ranking per voter.
///
/// Voters are identified by their position (0-based internally; ballot files,
/// JSON and the CLI use 1-based ids). Rankings list candidates from most to
/// least preferred.
class Election {
 public:
  /// Throws Error if names are not unique, a ranking is not a permutation of
  /// the candidates, or there are no voters or candidates.
  Election(std::vector<std::string> candidates, std::vector<std::vector<CandidateId>> rankings);

  std::size_t num_voters() const { return rankings_.size(); }
  std::size_t num_candidates() const { return candidates_.size(); }

  std::span<const std::string> candidate_names() const { return candidates_; }
  const std::string& name(CandidateId c) const { return candidates_[c.value()]; }
  std::optional<CandidateId> find_candidate(std::string_view name) const;

  std::span<const CandidateId> ranking(VoterId v) const { return rankings_[v.value()]; }
  /// 0 for the top choice, m - 1 for the bottom choice.
  std::size_t position(VoterId v, CandidateId c) const { return positions_[v.value()][c.value()]; }

  /// a ≻_v b
  bool prefers(VoterId v, CandidateId a, CandidateId b) const { return position(v, a) < position(v, b); }
  /// a ⪰_v b
  bool weakly_prefers(VoterId v, CandidateId a, CandidateId b) const { return position(v, a) <= position(v, b); }

  CandidateId top(VoterId v) const { return rankings_[v.value()].front(); }
  CandidateId bottom(VoterId v) const { return rankings_[v.value()].back(); }
  /// Lowest-ranked member of `allowed` for voter v; nullopt if the mask is empty.
  std::optional<CandidateId> bottom_among(VoterId v, const CandidateMask& allowed) const;

  std::vector<VoterId> voters() const;
  std::vector<CandidateId> candidates() const;

  /// Keeps the listed voters, in the given order.
  Election restricted_to(std::span<const VoterId> voters) const;
  Election with_added_voter(std::vector<CandidateId> ranking) const;
  Election with_ranking(VoterId v, std::vector<CandidateId> ranking) const;

  friend bool operator==(const Election& a, const Election& b) {
    return a.candidates_ == b.candidates_ && a.rankings_ == b.rankings_;
  }

 private:
  std::vector<std::string> candidates_;
  std::vector<std::vector<CandidateId>> rankings_;
  std::vector<std::vector<std::uint32_t>> positions_;
};

struct ScoreProfile {
  std::vector<std::size_t> plurality;
  std::vector<std::size_t> veto;
};

enum class WeightDomain { voters, candidates };

/// Non-negative rational weights over voters (p) or candidates (q).
///
/// A zero total is representable (the empty base case of veto-order
/// synthesis); rules that need a positive total reject it themselves.
class WeightVector {
 public:
  WeightVector(WeightDomain domain, std::vector<Rational> weights);

  WeightDomain domain() const { return domain_; }
  std::size_t size() const { return weights_.size(); }
  const Rational& operator[](std::size_t i) const { return weights_[i]; }
  const Rational& operator[](VoterId v) const { return weights_[v.value()]; }
  const Rational& operator[](CandidateId c) const { return weights_[c.value()]; }
  std::span<const Rational> weights() const { return weights_; }
  const Rational& total() const { return total_; }

  bool is_integral() const;
  WeightVector scaled(const Rational& factor) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  WeightDomain domain_;
  std::vector<Rational> weights_;
  Rational total_;
};

/// Parses the ballot format:
///
///   # comment
///   candidates a b c
///   2: a > b > c
///   1: c > b > a
///
/// Text after `#` is a comment. Multiplicities are expanded into separate
/// voters in file order.
Election parse_election(std::string_view text);

/// Canonical form of the ballot format, one line per voter.
std::string render_election(const Election& e);

ScoreProfile tally(const Election& e);

/// Impartial Culture profile with candidates named c1..cm.
///
/// Voter i's ranking is a Fisher-Yates shuffle driven by std::mt19937_64
/// seeded with splitmix64(seed ^ splitmix64(i)), with bounded draws by
/// rejection sampling. Each voter's stream depends only on (seed, i), so
/// the output is identical across platforms and growing n keeps earlier
/// voters unchanged.
Election random_election(std::size_t m, std::size_t n, std::uint64_t seed);

Election reverse_profile(const Election& e);

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform draw from [0, bound) by rejection sampling, so results do not
/// depend on the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound);

/// Fisher-Yates with uniform_below().
template <class T>
void shuffle_in_place(std::mt19937_64& gen, std::span<T> items) {
  for (std::size_t i = items.size(); i-- > 1;) {
    const auto j = static_cast<std::size_t>(uniform_below(gen, i + 1));
    std::swap(items[i], items[j]);
  }
}

WeightVector unit_voter_weights(const Election& e);
WeightVector plurality_weights(const Election& e);
/// Every candidate gets total / m.
WeightVector uniform_candidate_weights(const Election& e, const Rational& total);
/// q(c) = number of voters ranking c among their top k.
WeightVector k_approval_weights(const Election& e, std::size_t k);

CandidateMask to_mask(std::size_t m, std::span<const CandidateId> members);
std::vector<CandidateId> from_mask(const CandidateMask& mask);

}  // namespace veto
