#include "veto/simplex.hpp"

#include <optional>

#include "veto/errors.hpp"

namespace veto {
namespace {

constexpr int kDegenerateBeforeBland = 16;

// Tableau layout: rows 0..m-1 are constraints, row m the objective and row
// m+1 the phase one objective. Column n is the artificial variable, n+1 the
// right-hand side. N holds non-basic variable ids (n..n+m-1 are slacks,
// -1 the artificial one), B the basic ones.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp)
      : m_(lp.b.size()), n_(lp.c.size()), d_(m_ + 2, std::vector<Rational>(n_ + 2)), basic_(m_), nonbasic_(n_ + 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.A[i].size() != n_) throw Error("LP row has the wrong width");
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = lp.A[i][j];
      d_[i][n_] = -1;
      d_[i][n_ + 1] = lp.b[i];
      basic_[i] = static_cast<long>(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      d_[m_][j] = -lp.c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1;
  }

  LpSolution solve() {
    LpSolution out;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    }
    if (m_ > 0 && d_[r][n_ + 1] < 0) {
      pivot(r, n_);
      if (!run(2) || d_[m_ + 1][n_ + 1] < 0) return out;
      for (std::size_t i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (d_[i][j] != 0 && (d_[i][s] == 0 || nonbasic_[j] < nonbasic_[s])) s = j;
        }
        // An all-zero row is redundant; the artificial variable stays basic at 0.
        if (d_[i][s] != 0) pivot(i, s);
      }
    }
    if (!run(1)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.value = d_[m_][n_ + 1];
    out.x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) out.x[basic_[i]] = d_[i][n_ + 1];
    }
    return out;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    auto& pr = d_[r];
    const Rational inv = 1 / pr[s];
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < n_ + 2; ++j) {
      if (j != s && pr[j] != 0) support.push_back(j);
    }
    Rational factor;
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || d_[i][s] == 0) continue;
      auto& row = d_[i];
      factor = row[s] * inv;
      for (std::size_t j : support) row[j] -= pr[j] * factor;
      row[s] = -factor;
    }
    for (std::size_t j : support) pr[j] *= inv;
    pr[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Returns false when the objective of this phase is unbounded.
  bool run(int phase) {
    const std::size_t x = m_ + static_cast<std::size_t>(phase) - 1;
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate >= kDegenerateBeforeBland;
      std::optional<std::size_t> s;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase || d_[x][j] >= 0) continue;
        if (!s) {
          s = j;
        } else if (bland) {
          if (nonbasic_[j] < nonbasic_[*s]) s = j;
        } else if (d_[x][j] < d_[x][*s] || (d_[x][j] == d_[x][*s] && nonbasic_[j] < nonbasic_[*s])) {
          s = j;
        }
      }
      if (!s) return true;

      std::optional<std::size_t> r;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][*s] <= 0) continue;
        if (!r) {
          r = i;
          continue;
        }
        // b_i / a_i < b_r / a_r with both a positive.
        const int cmp = ::cmp(d_[i][n_ + 1] * d_[*r][*s], d_[*r][n_ + 1] * d_[i][*s]);
        if (cmp < 0 || (cmp == 0 && basic_[i] < basic_[*r])) r = i;
      }
      if (!r) return false;
      degenerate = d_[*r][n_ + 1] == 0 ? degenerate + 1 : 0;
      pivot(*r, *s);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<Rational>> d_;
  std::vector<long> basic_;
  std::vector<long> nonbasic_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  if (lp.A.size() != lp.b.size()) throw Error("LP has mismatched row counts");
  return Tableau(lp).solve();
}

}  // namespace veto
