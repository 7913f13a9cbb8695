#include "veto/distortion.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include "veto/errors.hpp"
#include "veto/simplex.hpp"

namespace veto {
namespace {

// Rows shared by every LP(c, x): consecutive-pair consistency and the
// relaxed triangle inequality, over variables d(v,c) at v·m + c.
std::vector<std::vector<Rational>> metric_constraints(const Election& e) {
  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();
  const auto var = [m](std::size_t v, std::size_t c) { return v * m + c; };
  std::vector<std::vector<Rational>> rows;
  for (VoterId v : e.voters()) {
    auto r = e.ranking(v);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      std::vector<Rational> row(n * m);
      row[var(v.value(), r[i].value())] = 1;
      row[var(v.value(), r[i + 1].value())] = -1;
      rows.push_back(std::move(row));
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < n; ++w) {
      if (v == w) continue;
      for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t c2 = 0; c2 < m; ++c2) {
          if (c == c2) continue;
          std::vector<Rational> row(n * m);
          row[var(v, c)] = 1;
          row[var(v, c2)] = -1;
          row[var(w, c2)] = -1;
          row[var(w, c)] = -1;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

void check_candidate(const Election& e, CandidateId c) {
  if (c.value() >= e.num_candidates()) throw Error("unknown candidate");
}

}  // namespace

VoterCandidateMetric::VoterCandidateMetric(std::size_t voters, std::size_t candidates)
    : voters_(voters), candidates_(candidates), d_(voters * candidates) {}

bool is_consistent_metric(const Election& e, const VoterCandidateMetric& d) {
  if (d.num_voters() != e.num_voters() || d.num_candidates() != e.num_candidates()) return false;
  for (VoterId v : e.voters()) {
    auto r = e.ranking(v);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (d.at(v, r[i]) < 0) return false;
      if (i + 1 < r.size() && d.at(v, r[i]) > d.at(v, r[i + 1])) return false;
    }
  }
  for (VoterId v : e.voters()) {
    for (VoterId w : e.voters()) {
      for (CandidateId c : e.candidates()) {
        for (CandidateId c2 : e.candidates()) {
          if (d.at(v, c) > d.at(v, c2) + d.at(w, c2) + d.at(w, c)) return false;
        }
      }
    }
  }
  return true;
}

Rational cost(const Election& e, const VoterCandidateMetric& d, CandidateId c) {
  Rational sum = 0;
  for (VoterId v : e.voters()) sum += d.at(v, c);
  return sum;
}

CostRatioBound max_cost_ratio(const Election& e, CandidateId c, CandidateId x, const Rational& normalization) {
  check_candidate(e, c);
  check_candidate(e, x);
  if (normalization < 0) throw Error("normalization must be non-negative");
  const std::size_t n = e.num_voters();
  const std::size_t m = e.num_candidates();

  LinearProgram lp;
  lp.A = metric_constraints(e);
  lp.b.assign(lp.A.size(), Rational(0));
  std::vector<Rational> norm(n * m);
  for (std::size_t v = 0; v < n; ++v) norm[v * m + x.value()] = 1;
  lp.A.push_back(std::move(norm));
  lp.b.push_back(normalization);
  lp.c.assign(n * m, Rational(0));
  for (std::size_t v = 0; v < n; ++v) lp.c[v * m + c.value()] = 1;

  const LpSolution sol = solve_lp(lp);
  CostRatioBound out;
  if (sol.status == LpStatus::unbounded) {
    out.unbounded = true;
    return out;
  }
  if (sol.status != LpStatus::optimal) throw Error("internal: metric LP reported infeasible");
  out.value = sol.value;
  VoterCandidateMetric d(n, m);
  for (VoterId v : e.voters()) {
    for (CandidateId k : e.candidates()) d.at(v, k) = sol.x[v.value() * m + k.value()];
  }
  out.argmax = std::move(d);
  return out;
}

std::string Distortion::to_string() const { return unbounded ? "infinity" : format_rational(value); }

std::size_t max_lp_size_from_env() {
  const char* raw = std::getenv("VETO_MAX_LP_SIZE");
  if (raw == nullptr || *raw == '\0') return kDefaultMaxLpSize;
  std::size_t value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc() || ptr != end || value == 0) {
    throw Error(std::string("VETO_MAX_LP_SIZE must be a positive integer, got '") + raw + "'");
  }
  return value;
}

Distortion distortion(const Election& e, CandidateId c, std::size_t max_size) {
  check_candidate(e, c);
  const std::size_t size = e.num_voters() * e.num_candidates();
  if (size > max_size) {
    throw LimitError("distortion LP limited to n*m <= " + std::to_string(max_size) + ", got " + std::to_string(size));
  }
  Distortion out{false, Rational(1)};
  for (CandidateId x : e.candidates()) {
    if (x == c) continue;
    const CostRatioBound bound = max_cost_ratio(e, c, x);
    if (bound.unbounded) return Distortion{true, Rational(0)};
    if (bound.value > out.value) out.value = bound.value;
  }
  return out;
}

}  // namespace veto
