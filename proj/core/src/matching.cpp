#include "veto/matching.hpp"

#include <algorithm>
#include <queue>

#include "veto/errors.hpp"

namespace veto {
namespace {

// Dinic's algorithm over arbitrary-precision integers.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : adjacency_(nodes) {}

  std::size_t add_edge(std::size_t from, std::size_t to, const BigInt& capacity) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity});
    edges_.push_back({from, 0});
    adjacency_[from].push_back(id);
    adjacency_[to].push_back(id + 1);
    return id;
  }

  /// Flow currently routed on a forward edge returned by add_edge().
  const BigInt& flow_on(std::size_t edge) const { return edges_[edge ^ 1].residual; }

  BigInt max_flow(std::size_t source, std::size_t sink) {
    BigInt total = 0;
    while (build_levels(source, sink)) {
      cursor_.assign(adjacency_.size(), 0);
      for (;;) {
        BigInt pushed = augment(source, sink, nullptr);
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  std::vector<bool> reachable_from(std::size_t source) const {
    std::vector<bool> seen(adjacency_.size(), false);
    std::queue<std::size_t> queue;
    seen[source] = true;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t id : adjacency_[u]) {
        const auto& edge = edges_[id];
        if (edge.residual > 0 && !seen[edge.to]) {
          seen[edge.to] = true;
          queue.push(edge.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    std::size_t to;
    BigInt residual;
  };

  bool build_levels(std::size_t source, std::size_t sink) {
    level_.assign(adjacency_.size(), -1);
    std::queue<std::size_t> queue;
    level_[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t id : adjacency_[u]) {
        const auto& edge = edges_[id];
        if (edge.residual > 0 && level_[edge.to] < 0) {
          level_[edge.to] = level_[u] + 1;
          queue.push(edge.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // Pushes one blocking path; `limit == nullptr` means unbounded.
  BigInt augment(std::size_t u, std::size_t sink, const BigInt* limit) {
    if (u == sink) return limit ? *limit : BigInt(0);
    for (std::size_t& i = cursor_[u]; i < adjacency_[u].size(); ++i) {
      const std::size_t id = adjacency_[u][i];
      Edge& edge = edges_[id];
      if (edge.residual <= 0 || level_[edge.to] != level_[u] + 1) continue;
      const BigInt& cap = (limit && *limit < edge.residual) ? *limit : edge.residual;
      BigInt pushed = augment(edge.to, sink, &cap);
      if (pushed > 0) {
        edge.residual -= pushed;
        edges_[id ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

void check_shapes(const Election& e, const WeightVector& p, const WeightVector& q) {
  if (p.domain() != WeightDomain::voters || p.size() != e.num_voters()) {
    throw Error("voter weights do not match the election");
  }
  if (q.domain() != WeightDomain::candidates || q.size() != e.num_candidates()) {
    throw Error("candidate weights do not match the election");
  }
}

// Highest-ranked candidate with a positive entry in v's row.
std::optional<CandidateId> top_of_support(const Election& e, const Matching& m, VoterId v) {
  for (CandidateId c : e.ranking(v)) {
    if (m.at(v, c) != 0) return c;
  }
  return std::nullopt;
}

}  // namespace

Matching::Matching(std::size_t voters, std::size_t candidates)
    : voters_(voters), candidates_(candidates), entries_(voters * candidates, Rational(0)) {}

std::vector<Rational> Matching::row_sums() const {
  std::vector<Rational> out(voters_, Rational(0));
  for (std::size_t v = 0; v < voters_; ++v) {
    for (std::size_t c = 0; c < candidates_; ++c) out[v] += entries_[v * candidates_ + c];
  }
  return out;
}

std::vector<Rational> Matching::column_sums() const {
  std::vector<Rational> out(candidates_, Rational(0));
  for (std::size_t v = 0; v < voters_; ++v) {
    for (std::size_t c = 0; c < candidates_; ++c) out[c] += entries_[v * candidates_ + c];
  }
  return out;
}

Rational Matching::total() const {
  Rational sum = 0;
  for (const auto& x : entries_) sum += x;
  return sum;
}

bool Matching::is_integral() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Rational& x) { return veto::is_integral(x); });
}

Matching Matching::scaled(const Rational& factor) const {
  Matching out = *this;
  for (auto& x : out.entries_) x *= factor;
  return out;
}

std::vector<CandidateId> neighborhood(const Election& e, CandidateId a, std::span<const VoterId> coalition) {
  if (a.value() >= e.num_candidates()) throw Error("unknown candidate");
  CandidateMask mask(e.num_candidates(), false);
  for (VoterId v : coalition) {
    if (v.value() >= e.num_voters()) throw Error("unknown voter " + std::to_string(v.value() + 1));
    auto r = e.ranking(v);
    for (std::size_t pos = e.position(v, a); pos < r.size(); ++pos) mask[r[pos].value()] = true;
  }
  return from_mask(mask);
}

AdmittedMatching find_admitted_matching(const Election& e, CandidateId a, const WeightVector& p,
                                        const WeightVector& q) {
  check_shapes(e, p, q);
  if (a.value() >= e.num_candidates()) throw Error("unknown candidate");
  if (p.total() != q.total()) {
    throw Error("marginal totals differ: " + format_rational(p.total()) + " vs " + format_rational(q.total()));
  }
  if (p.total() == 0) throw Error("weight totals must be positive");

  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();
  std::vector<Rational> all(p.weights().begin(), p.weights().end());
  all.insert(all.end(), q.weights().begin(), q.weights().end());
  const BigInt scale = denominator_lcm(all);
  auto scaled_int = [&](const Rational& x) -> BigInt { return BigInt(x.get_num() * (scale / x.get_den())); };

  const std::size_t source = 0;
  const std::size_t sink = n + m + 1;
  auto voter_node = [](std::size_t v) { return 1 + v; };
  auto candidate_node = [n](std::size_t c) { return 1 + n + c; };

  FlowNetwork net(n + m + 2);
  const BigInt total = scaled_int(p.total());
  const BigInt unbounded = total + 1;
  for (std::size_t v = 0; v < n; ++v) net.add_edge(source, voter_node(v), scaled_int(p[v]));
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> match_edges(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = e.ranking(VoterId{v});
    for (std::size_t pos = e.position(VoterId{v}, a); pos < m; ++pos) {
      const std::size_t c = r[pos].value();
      match_edges[v].emplace_back(c, net.add_edge(voter_node(v), candidate_node(c), unbounded));
    }
  }
  for (std::size_t c = 0; c < m; ++c) net.add_edge(candidate_node(c), sink, scaled_int(q[c]));

  if (net.max_flow(source, sink) == total) {
    Matching result(n, m);
    for (std::size_t v = 0; v < n; ++v) {
      for (auto [c, edge] : match_edges[v]) {
        Rational& w = result.at(VoterId{v}, CandidateId{c});
        w = Rational(net.flow_on(edge), scale);
        w.canonicalize();
      }
    }
    return result;
  }

  const auto reachable = net.reachable_from(source);
  HallViolation violation;
  for (std::size_t v = 0; v < n; ++v) {
    if (reachable[voter_node(v)]) violation.coalition.emplace_back(v);
  }
  violation.coalition_weight = 0;
  for (VoterId v : violation.coalition) violation.coalition_weight += p[v];
  violation.neighborhood_weight = 0;
  for (CandidateId c : neighborhood(e, a, violation.coalition)) violation.neighborhood_weight += q[c];
  return violation;
}

bool admits(const Election& e, CandidateId a, const Matching& m) {
  for (VoterId v : e.voters()) {
    auto top = top_of_support(e, m, v);
    if (top && !e.weakly_prefers(v, a, *top)) return false;
  }
  return true;
}

WinnerSet tied_winners(const Election& e, const Matching& m) {
  if (m.num_voters() != e.num_voters() || m.num_candidates() != e.num_candidates()) {
    throw Error("matching shape does not match the election");
  }
  const std::size_t mc = e.num_candidates();
  WinnerSet out;
  out.prefix_indices.assign(e.num_voters(), mc);
  CandidateMask alive(mc, true);
  for (VoterId v : e.voters()) {
    auto top = top_of_support(e, m, v);
    if (!top) continue;
    const std::size_t k = e.position(v, *top) + 1;
    out.prefix_indices[v.value()] = k;
    auto r = e.ranking(v);
    for (std::size_t pos = k; pos < mc; ++pos) alive[r[pos].value()] = false;
  }
  out.winners = from_mask(alive);
  return out;
}

bool is_valid_matching(const Election& e, const Matching& m, const WeightVector& p, const WeightVector& q) {
  if (m.num_voters() != e.num_voters() || m.num_candidates() != e.num_candidates()) return false;
  if (p.size() != e.num_voters() || q.size() != e.num_candidates()) return false;
  for (VoterId v : e.voters()) {
    for (CandidateId c : e.candidates()) {
      if (m.at(v, c) < 0) return false;
    }
  }
  const auto rows = m.row_sums();
  const auto cols = m.column_sums();
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (rows[v] != p[v]) return false;
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] != q[c]) return false;
  }
  return true;
}

nlohmann::json matching_to_json(const Election& e, const Matching& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (VoterId v : e.voters()) {
    for (CandidateId c : e.ranking(v)) {
      const auto& w = m.at(v, c);
      if (w == 0) continue;
      entries.push_back({{"voter", v.value() + 1}, {"candidate", e.name(c)}, {"weight", format_rational(w)}});
    }
  }
  return {{"p_total", format_rational(m.total())}, {"entries", std::move(entries)}};
}

Matching matching_from_json(const Election& e, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw ParseError(0, "matching JSON needs an 'entries' array");
  }
  Matching m(e.num_voters(), e.num_candidates());
  for (const auto& entry : j["entries"]) {
    if (!entry.is_object() || !entry.contains("voter") || !entry.contains("candidate") || !entry.contains("weight")) {
      throw ParseError(0, "matching entry needs voter, candidate and weight");
    }
    const auto& vj = entry["voter"];
    if (!vj.is_number_integer() || vj.get<long long>() < 1 ||
        static_cast<std::size_t>(vj.get<long long>()) > e.num_voters()) {
      throw ParseError(0, "matching entry has an invalid voter id");
    }
    const VoterId v{static_cast<std::size_t>(vj.get<long long>()) - 1};
    if (!entry["candidate"].is_string()) throw ParseError(0, "candidate must be a name");
    auto c = e.find_candidate(entry["candidate"].get<std::string>());
    if (!c) throw ParseError(0, "unknown candidate '" + entry["candidate"].get<std::string>() + "'");
    if (!entry["weight"].is_string()) throw ParseError(0, "weight must be a \"num/den\" string");
    Rational w = parse_rational(entry["weight"].get<std::string>());
    if (w < 0) throw ParseError(0, "negative matching weight");
    m.at(v, *c) += w;
  }
  if (j.contains("p_total")) {
    if (!j["p_total"].is_string() || parse_rational(j["p_total"].get<std::string>()) != m.total()) {
      throw ParseError(0, "p_total does not equal the sum of entries");
    }
  }
  return m;
}

}  // namespace veto
