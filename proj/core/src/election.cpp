#include "veto/election.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "veto/errors.hpp"

namespace veto {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
           ch == '-';
  });
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = gen();
    if (x < limit) return x % bound;
  }
}

Election::Election(std::vector<std::string> candidates, std::vector<std::vector<CandidateId>> rankings)
    : candidates_(std::move(candidates)), rankings_(std::move(rankings)) {
  if (candidates_.empty()) throw Error("an election needs at least one candidate");
  if (rankings_.empty()) throw Error("an election needs at least one voter");
  {
    std::vector<std::string> sorted = candidates_;
    std::sort(sorted.begin(), sorted.end());
    if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end()) {
      throw Error("duplicate candidate '" + *it + "'");
    }
  }
  const std::size_t m = candidates_.size();
  positions_.assign(rankings_.size(), std::vector<std::uint32_t>(m, 0));
  for (std::size_t v = 0; v < rankings_.size(); ++v) {
    const auto& r = rankings_[v];
    if (r.size() != m) {
      throw Error("ranking of voter " + std::to_string(v + 1) + " has " + std::to_string(r.size()) +
                  " entries, expected " + std::to_string(m));
    }
    std::vector<bool> seen(m, false);
    for (std::size_t pos = 0; pos < m; ++pos) {
      const std::size_t c = r[pos].value();
      if (c >= m || seen[c]) throw Error("ranking of voter " + std::to_string(v + 1) + " is not a permutation");
      seen[c] = true;
      positions_[v][c] = static_cast<std::uint32_t>(pos);
    }
  }
}

std::optional<CandidateId> Election::find_candidate(std::string_view name) const {
  for (std::size_t c = 0; c < candidates_.size(); ++c) {
    if (candidates_[c] == name) return CandidateId{c};
  }
  return std::nullopt;
}

std::optional<CandidateId> Election::bottom_among(VoterId v, const CandidateMask& allowed) const {
  const auto& r = rankings_[v.value()];
  for (auto it = r.rbegin(); it != r.rend(); ++it) {
    if (allowed[it->value()]) return *it;
  }
  return std::nullopt;
}

std::vector<VoterId> Election::voters() const {
  std::vector<VoterId> out;
  out.reserve(num_voters());
  for (std::size_t v = 0; v < num_voters(); ++v) out.emplace_back(v);
  return out;
}

std::vector<CandidateId> Election::candidates() const {
  std::vector<CandidateId> out;
  out.reserve(num_candidates());
  for (std::size_t c = 0; c < num_candidates(); ++c) out.emplace_back(c);
  return out;
}

Election Election::restricted_to(std::span<const VoterId> voters) const {
  std::vector<std::vector<CandidateId>> rankings;
  rankings.reserve(voters.size());
  for (VoterId v : voters) rankings.push_back(rankings_.at(v.value()));
  return Election(candidates_, std::move(rankings));
}

Election Election::with_added_voter(std::vector<CandidateId> ranking) const {
  auto rankings = rankings_;
  rankings.push_back(std::move(ranking));
  return Election(candidates_, std::move(rankings));
}

Election Election::with_ranking(VoterId v, std::vector<CandidateId> ranking) const {
  auto rankings = rankings_;
  rankings.at(v.value()) = std::move(ranking);
  return Election(candidates_, std::move(rankings));
}

WeightVector::WeightVector(WeightDomain domain, std::vector<Rational> weights)
    : domain_(domain), weights_(std::move(weights)), total_(0) {
  for (const auto& w : weights_) {
    if (w < 0) throw Error("negative weight " + format_rational(w));
    total_ += w;
  }
}

bool WeightVector::is_integral() const {
  return std::all_of(weights_.begin(), weights_.end(), [](const Rational& w) { return veto::is_integral(w); });
}

WeightVector WeightVector::scaled(const Rational& factor) const {
  std::vector<Rational> out;
  out.reserve(weights_.size());
  for (const auto& w : weights_) out.emplace_back(w * factor);
  return WeightVector(domain_, std::move(out));
}

Election parse_election(std::string_view text) {
  std::vector<std::string> candidates;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<CandidateId>> rankings;
  bool have_header = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const std::string_view line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;

    if (!have_header) {
      auto tokens = split_whitespace(line);
      if (tokens.empty() || tokens.front() != "candidates") {
        throw ParseError(line_no, "expected 'candidates <name> ...' header");
      }
      if (tokens.size() < 2) throw ParseError(line_no, "no candidates listed");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::string name(tokens[i]);
        if (!valid_name(name)) throw ParseError(line_no, "invalid candidate name '" + name + "'");
        if (!index.emplace(name, candidates.size()).second) {
          throw ParseError(line_no, "duplicate candidate '" + name + "'");
        }
        candidates.push_back(std::move(name));
      }
      have_header = true;
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<multiplicity>: <ranking>'");
    const std::string_view mult_text = trim(line.substr(0, colon));
    if (mult_text.empty() || !std::all_of(mult_text.begin(), mult_text.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw ParseError(line_no, "multiplicity must be a positive integer");
    }
    if (mult_text.size() > 9) throw ParseError(line_no, "multiplicity too large");
    const std::size_t multiplicity = std::stoul(std::string(mult_text));
    if (multiplicity < 1) throw ParseError(line_no, "multiplicity must be at least 1");

    std::vector<CandidateId> ranking;
    std::vector<bool> seen(candidates.size(), false);
    std::string_view rest = line.substr(colon + 1);
    for (;;) {
      const auto gt = rest.find('>');
      const std::string_view name = trim(rest.substr(0, gt));
      if (!valid_name(name)) {
        throw ParseError(line_no, name.empty() ? "empty position in ranking"
                                               : "invalid token '" + std::string(name) + "' (ties are not allowed)");
      }
      auto it = index.find(std::string(name));
      if (it == index.end()) throw ParseError(line_no, "unknown candidate '" + std::string(name) + "'");
      if (seen[it->second]) throw ParseError(line_no, "candidate '" + std::string(name) + "' repeated");
      seen[it->second] = true;
      ranking.emplace_back(it->second);
      if (gt == std::string_view::npos) break;
      rest = rest.substr(gt + 1);
    }
    if (ranking.size() != candidates.size()) {
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!seen[c]) throw ParseError(line_no, "ranking omits candidate '" + candidates[c] + "'");
      }
    }
    for (std::size_t k = 0; k < multiplicity; ++k) rankings.push_back(ranking);
  }

  if (!have_header) throw ParseError(0, "missing 'candidates' header");
  if (rankings.empty()) throw ParseError(0, "no ballots");
  return Election(std::move(candidates), std::move(rankings));
}

std::string render_election(const Election& e) {
  std::ostringstream out;
  out << "candidates";
  for (const auto& name : e.candidate_names()) out << ' ' << name;
  out << '\n';
  for (VoterId v : e.voters()) {
    out << "1:";
    bool first = true;
    for (CandidateId c : e.ranking(v)) {
      out << (first ? " " : " > ") << e.name(c);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

ScoreProfile tally(const Election& e) {
  ScoreProfile s{std::vector<std::size_t>(e.num_candidates(), 0), std::vector<std::size_t>(e.num_candidates(), 0)};
  for (VoterId v : e.voters()) {
    ++s.plurality[e.top(v).value()];
    ++s.veto[e.bottom(v).value()];
  }
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Election random_election(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw Error("random_election needs m >= 1 and n >= 1");
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t c = 0; c < m; ++c) names.push_back("c" + std::to_string(c + 1));

  std::vector<std::vector<CandidateId>> rankings(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(v)));
    auto& r = rankings[v];
    r.reserve(m);
    for (std::size_t c = 0; c < m; ++c) r.emplace_back(c);
    shuffle_in_place(gen, std::span(r));
  }
  return Election(std::move(names), std::move(rankings));
}

Election reverse_profile(const Election& e) {
  std::vector<std::vector<CandidateId>> rankings;
  rankings.reserve(e.num_voters());
  for (VoterId v : e.voters()) {
    auto r = e.ranking(v);
    rankings.emplace_back(r.rbegin(), r.rend());
  }
  return Election(std::vector<std::string>(e.candidate_names().begin(), e.candidate_names().end()),
                  std::move(rankings));
}

WeightVector unit_voter_weights(const Election& e) {
  return WeightVector(WeightDomain::voters, std::vector<Rational>(e.num_voters(), Rational(1)));
}

WeightVector plurality_weights(const Election& e) {
  const auto scores = tally(e);
  std::vector<Rational> w;
  w.reserve(e.num_candidates());
  for (auto s : scores.plurality) w.emplace_back(static_cast<unsigned long>(s));
  return WeightVector(WeightDomain::candidates, std::move(w));
}

WeightVector uniform_candidate_weights(const Election& e, const Rational& total) {
  Rational each = total / static_cast<unsigned long>(e.num_candidates());
  return WeightVector(WeightDomain::candidates, std::vector<Rational>(e.num_candidates(), each));
}

WeightVector k_approval_weights(const Election& e, std::size_t k) {
  if (k < 1 || k > e.num_candidates()) throw Error("k-approval needs 1 <= k <= m");
  std::vector<Rational> w(e.num_candidates(), Rational(0));
  for (VoterId v : e.voters()) {
    auto r = e.ranking(v);
    for (std::size_t i = 0; i < k; ++i) w[r[i].value()] += 1;
  }
  return WeightVector(WeightDomain::candidates, std::move(w));
}

CandidateMask to_mask(std::size_t m, std::span<const CandidateId> members) {
  CandidateMask mask(m, false);
  for (CandidateId c : members) mask.at(c.value()) = true;
  return mask;
}

std::vector<CandidateId> from_mask(const CandidateMask& mask) {
  std::vector<CandidateId> out;
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (mask[c]) out.emplace_back(c);
  }
  return out;
}

}  // namespace veto
