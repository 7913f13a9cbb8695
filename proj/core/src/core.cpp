#include "veto/core.hpp"

#include <algorithm>

#include "veto/errors.hpp"

namespace veto {
namespace {

// {c : c ≻_v a for every v in T}, as a mask.
CandidateMask above_for_all(const Election& e, CandidateId a, std::span<const VoterId> coalition) {
  CandidateMask mask(e.num_candidates(), true);
  mask[a.value()] = false;
  for (VoterId v : coalition) {
    auto r = e.ranking(v);
    for (std::size_t pos = e.position(v, a); pos < r.size(); ++pos) mask[r[pos].value()] = false;
  }
  return mask;
}

std::vector<VoterId> coalition_from_bits(std::uint64_t bits, std::size_t n) {
  std::vector<VoterId> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (bits >> v & 1U) out.emplace_back(v);
  }
  return out;
}

void check_enumeration_limit(const Election& e, std::size_t max_voters) {
  if (e.num_voters() > max_voters || e.num_voters() >= 63) {
    throw LimitError("coalition enumeration limited to " + std::to_string(max_voters) + " voters, got " +
                     std::to_string(e.num_voters()));
  }
}

}  // namespace

std::vector<CandidateId> veto_core(const Election& e, const WeightVector& p, const WeightVector& q) {
  std::vector<CandidateId> core;
  for (CandidateId a : e.candidates()) {
    if (std::holds_alternative<Matching>(find_admitted_matching(e, a, p, q))) core.push_back(a);
  }
  return core;
}

CoreReport veto_core_with_certificates(const Election& e, const WeightVector& p, const WeightVector& q) {
  CoreReport report;
  for (CandidateId a : e.candidates()) {
    auto result = find_admitted_matching(e, a, p, q);
    if (auto* m = std::get_if<Matching>(&result)) {
      report.core.push_back(a);
      report.certificates.emplace_back(std::move(*m));
    } else {
      report.certificates.emplace_back(blocking_pair_from_hall(e, p, q, a, std::get<HallViolation>(result)));
    }
  }
  return report;
}

std::optional<BlockingPair> find_blocking(const Election& e, const WeightVector& p, const WeightVector& q,
                                          CandidateId a, std::size_t max_voters) {
  check_enumeration_limit(e, max_voters);
  if (a.value() >= e.num_candidates()) throw Error("unknown candidate");
  if (p.total() != q.total()) throw Error("marginal totals differ");

  const std::size_t n = e.num_voters();
  std::optional<BlockingPair> best;
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    auto coalition = coalition_from_bits(bits, n);
    const CandidateMask witness = above_for_all(e, a, coalition);
    Rational p_t = 0;
    for (VoterId v : coalition) p_t += p[v];
    Rational q_b = 0;
    for (std::size_t c = 0; c < witness.size(); ++c) {
      if (witness[c]) q_b += q[c];
    }
    Rational margin = p_t - (q.total() - q_b);
    if (margin > 0 && (!best || margin > best->margin)) {
      best = BlockingPair{std::move(coalition), from_mask(witness), std::move(margin)};
    }
  }
  return best;
}

bool is_valid_blocking_pair(const Election& e, const WeightVector& p, const WeightVector& q, CandidateId a,
                            const BlockingPair& pair) {
  if (pair.coalition.empty()) return false;
  for (VoterId v : pair.coalition) {
    if (v.value() >= e.num_voters()) return false;
    for (CandidateId b : pair.witness) {
      if (b.value() >= e.num_candidates() || !e.prefers(v, b, a)) return false;
    }
  }
  Rational p_t = 0;
  for (VoterId v : pair.coalition) p_t += p[v];
  Rational q_b = 0;
  for (CandidateId b : pair.witness) q_b += q[b];
  const Rational margin = p_t - (q.total() - q_b);
  return margin > 0 && margin == pair.margin;
}

BlockingPair blocking_pair_from_hall(const Election& e, const WeightVector& p, const WeightVector& q, CandidateId a,
                                     const HallViolation& violation) {
  BlockingPair pair;
  pair.coalition = violation.coalition;
  pair.witness = from_mask(above_for_all(e, a, violation.coalition));
  Rational q_b = 0;
  for (CandidateId b : pair.witness) q_b += q[b];
  Rational p_t = 0;
  for (VoterId v : pair.coalition) p_t += p[v];
  pair.margin = p_t - (q.total() - q_b);
  return pair;
}

std::optional<std::vector<std::size_t>> is_prefix_intersecting(const Election& e, std::span<const CandidateId> s) {
  const std::size_t m = e.num_candidates();
  const CandidateMask target = to_mask(m, s);
  if (s.empty()) return std::vector<std::size_t>(e.num_voters(), 0);

  std::vector<std::size_t> k(e.num_voters(), 0);
  CandidateMask intersection(m, true);
  for (VoterId v : e.voters()) {
    std::size_t lowest = 0;
    for (CandidateId c : s) lowest = std::max(lowest, e.position(v, c) + 1);
    k[v.value()] = lowest;
    auto r = e.ranking(v);
    for (std::size_t pos = lowest; pos < m; ++pos) intersection[r[pos].value()] = false;
  }
  if (intersection != target) return std::nullopt;
  return k;
}

std::vector<CandidateId> proportional_veto_core(const Election& e, std::size_t max_voters) {
  check_enumeration_limit(e, max_voters);
  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();
  std::vector<CandidateId> core;
  for (CandidateId c : e.candidates()) {
    bool blocked = false;
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n) && !blocked; ++bits) {
      const auto coalition = coalition_from_bits(bits, n);
      const auto witness = above_for_all(e, c, coalition);
      const auto b_size = static_cast<std::size_t>(std::count(witness.begin(), witness.end(), true));
      const std::size_t ceiling = (m * coalition.size() + n - 1) / n;
      // ⌈m|T|/n⌉ - 1 ≥ m - |B|, kept in unsigned arithmetic.
      blocked = ceiling + b_size >= m + 1;
    }
    if (!blocked) core.push_back(c);
  }
  return core;
}

}  // namespace veto
