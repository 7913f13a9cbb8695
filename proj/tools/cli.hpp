#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "veto/election.hpp"

namespace veto::cli {

/// How candidate (q) or voter (p) weights are chosen on the command line:
/// "plurality", "uniform", "k-approval:K" or a path to a weight file.
struct WeightSpec {
  enum class Kind { plurality, uniform, k_approval, file };
  Kind kind = Kind::plurality;
  std::size_t k = 0;
  std::string path;

  std::string to_string() const;
};

WeightSpec parse_weight_spec(const std::string& text);

/// p: "uniform" gives every voter weight 1; a file holds "<voter id> <weight>"
/// lines (1-based ids, unlisted voters get 0).
WeightVector resolve_voter_weights(const Election& e, const WeightSpec& spec);

/// q: plurality, uniform and k-approval are scaled so that Σq = `total`. A
/// file holds "<candidate> <weight>" lines (unlisted candidates get 0) and must
/// already sum to `total`.
WeightVector resolve_candidate_weights(const Election& e, const WeightSpec& spec, const Rational& total);

/// Weight file lines "<key> <rational>", with '#' comments and blank lines.
std::map<std::string, Rational> read_weight_file(const std::string& path);

struct CoreSizeSummary {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Rational mean;
  double stddev = 0;
  /// histogram[s] = number of trials with core size s, for s in 0..m.
  std::vector<std::size_t> histogram;

  nlohmann::json to_json() const;
};

/// Impartial Culture trials with unit p; trial t uses seed splitmix64(seed + t).
CoreSizeSummary simulate_core_size(std::size_t m, std::size_t n, std::size_t trials, std::uint64_t seed,
                                   const WeightSpec& q);

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 when an axiom check fails or a known violation does not reproduce, and
/// 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace veto::cli
