#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "veto/election.hpp"
#include "veto/matching.hpp"

namespace veto {

/// Coalition T blocking a candidate c with witness B: B ≻_T c and
/// p(T) > Σq - q(B). `margin` is p(T) - (Σq - q(B)).
struct BlockingPair {
  std::vector<VoterId> coalition;
  std::vector<CandidateId> witness;
  Rational margin;
};

/// Why a candidate is or is not in the core.
using MembershipCertificate = std::variant<Matching, BlockingPair>;

struct CoreReport {
  std::vector<CandidateId> core;
  /// One entry per candidate, indexed by CandidateId::value().
  std::vector<MembershipCertificate> certificates;
};

inline constexpr std::size_t kDefaultBlockingVoterLimit = 20;

/// The (p,q)-veto core via max-flow dominance, sorted by id. Never empty.
std::vector<CandidateId> veto_core(const Election& e, const WeightVector& p, const WeightVector& q);

/// As veto_core(), with a witnessing matching for each member and a blocking
/// pair (derived from the Hall violation) for each non-member.
CoreReport veto_core_with_certificates(const Election& e, const WeightVector& p, const WeightVector& q);

/// Brute-force blocking oracle. Enumerates every non-empty coalition T,
/// takes the maximal witness B = {c : c ≻_T a}, and returns the pair with the
/// largest margin (earliest coalition bitmask on ties). Throws LimitError when
/// n exceeds `max_voters`.
std::optional<BlockingPair> find_blocking(const Election& e, const WeightVector& p, const WeightVector& q,
                                          CandidateId a, std::size_t max_voters = kDefaultBlockingVoterLimit);

/// B ≻_T a holds, margin is recomputed exactly and is positive.
bool is_valid_blocking_pair(const Election& e, const WeightVector& p, const WeightVector& q, CandidateId a,
                            const BlockingPair& pair);

BlockingPair blocking_pair_from_hall(const Election& e, const WeightVector& p, const WeightVector& q, CandidateId a,
                                     const HallViolation& violation);

/// Prefix lengths k_v with s = ∩_v top-k_v(v), or nullopt if none exist.
/// For non-empty s, k_v is the position (1-based) of v's lowest-ranked
/// member of s; for the empty set all k_v are 0.
std::optional<std::vector<std::size_t>> is_prefix_intersecting(const Election& e, std::span<const CandidateId> s);

/// Proportional veto core from the classical ceiling definition:
/// T blocks c iff ⌈m|T|/n⌉ - 1 ≥ m - |B| for the maximal B ≻_T c.
/// Brute force over coalitions; throws LimitError above `max_voters`.
std::vector<CandidateId> proportional_veto_core(const Election& e,
                                                std::size_t max_voters = kDefaultBlockingVoterLimit);

}  // namespace veto
