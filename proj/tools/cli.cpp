#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "veto/axioms.hpp"
#include "veto/core.hpp"
#include "veto/distortion.hpp"
#include "veto/errors.hpp"
#include "veto/matching.hpp"
#include "veto/rules.hpp"

namespace veto::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Election load_election(const std::string& path) {
  try {
    return parse_election(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

nlohmann::json names(const Election& e, std::span<const CandidateId> set) {
  auto out = nlohmann::json::array();
  for (CandidateId c : set) out.push_back(e.name(c));
  return out;
}

nlohmann::json voter_ids(std::span<const VoterId> voters) {
  auto out = nlohmann::json::array();
  for (VoterId v : voters) out.push_back(v.value() + 1);
  return out;
}

nlohmann::json trace_json(const Election& e, const EliminationTrace& trace) {
  auto out = nlohmann::json::array();
  for (const auto& ev : trace.events) {
    nlohmann::json weights = nlohmann::json::object();
    nlohmann::json opposition = nlohmann::json::object();
    for (CandidateId c : e.candidates()) {
      weights[e.name(c)] = format_rational(ev.weights[c.value()]);
      if (!ev.opposition[c.value()].empty()) opposition[e.name(c)] = voter_ids(ev.opposition[c.value()]);
    }
    out.push_back({{"time", format_rational(ev.time)},
                   {"eliminated", names(e, ev.eliminated)},
                   {"weights", std::move(weights)},
                   {"opposition", std::move(opposition)}});
  }
  return out;
}

std::string join_names(const Election& e, std::span<const CandidateId> set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) out += (i ? ", " : "") + e.name(set[i]);
  return out;
}

std::string matching_text(const Election& e, const Matching& m) {
  std::string out;
  for (VoterId v : e.voters()) {
    for (CandidateId c : e.ranking(v)) {
      if (m.at(v, c) != 0) {
        out += "  voter " + std::to_string(v.value() + 1) + " -> " + e.name(c) + " : " + format_rational(m.at(v, c)) +
               "\n";
      }
    }
  }
  return out;
}

std::vector<VoterId> parse_order(const Election& e, const std::string& text) {
  std::vector<VoterId> order;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t id = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
    if (ec != std::errc() || ptr != item.data() + item.size() || id == 0 || id > e.num_voters()) {
      throw Error("invalid voter id '" + item + "' in --order (expected 1.." + std::to_string(e.num_voters()) + ")");
    }
    order.emplace_back(id - 1);
  }
  if (order.empty()) throw Error("--order is empty");
  return order;
}

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump() << '\n'; }

struct Options {
  std::string file;
  std::string p_spec = "uniform";
  std::string q_spec = "plurality";
  bool no_trace = false;
  bool pretty = false;
  std::string order;
  std::vector<std::string> candidates;
  std::size_t n = 5;
  std::size_t m = 5;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> axioms;
  bool exhaustive = false;
  bool violations = false;
  std::string matching;
  std::string sim_q_spec = "uniform";
};

int cmd_winners(const Options& o, std::ostream& out) {
  const Election e = load_election(o.file);
  const WeightVector p = resolve_voter_weights(e, parse_weight_spec(o.p_spec));
  const WeightVector q = resolve_candidate_weights(e, parse_weight_spec(o.q_spec), p.total());
  const RuleOutcome r = simultaneous_veto(e, p, q);
  if (o.pretty) {
    out << "winners: " << join_names(e, r.winners.winners) << "\nwitness:\n" << matching_text(e, r.witness);
    if (!o.no_trace) {
      out << "events:\n";
      for (const auto& ev : r.trace.events) {
        out << "  t = " << format_rational(ev.time);
        if (!ev.eliminated.empty()) out << "  eliminated " << join_names(e, ev.eliminated);
        out << '\n';
      }
    }
    return 0;
  }
  nlohmann::json j{{"rule", "simultaneous-veto"},
                   {"winners", names(e, r.winners.winners)},
                   {"witness", matching_to_json(e, r.witness)}};
  if (!o.no_trace) j["trace"] = trace_json(e, r.trace);
  emit(out, j);
  return 0;
}

int cmd_serial(const Options& o, std::ostream& out) {
  const Election e = load_election(o.file);
  const VetoOrder order{parse_order(e, o.order)};
  const WeightVector q = resolve_candidate_weights(e, parse_weight_spec(o.q_spec), Rational(e.num_voters()));
  const RuleOutcome r = serial_veto(e, q, order);
  if (o.pretty) {
    out << "winners: " << join_names(e, r.winners.winners) << "\nwitness:\n" << matching_text(e, r.witness);
    return 0;
  }
  emit(out, {{"rule", "serial-veto"},
             {"order", voter_ids(order.sequence)},
             {"winners", names(e, r.winners.winners)},
             {"witness", matching_to_json(e, r.witness)}});
  return 0;
}

int cmd_core(const Options& o, std::ostream& out) {
  const Election e = load_election(o.file);
  const WeightVector p = resolve_voter_weights(e, parse_weight_spec(o.p_spec));
  const WeightVector q = resolve_candidate_weights(e, parse_weight_spec(o.q_spec), p.total());
  const CoreReport report = veto_core_with_certificates(e, p, q);
  if (o.pretty) {
    out << "core: " << join_names(e, report.core) << '\n';
    for (CandidateId c : e.candidates()) {
      const auto& cert = report.certificates[c.value()];
      if (const auto* m = std::get_if<Matching>(&cert)) {
        out << e.name(c) << ": in the core, matching\n" << matching_text(e, *m);
      } else {
        const auto& b = std::get<BlockingPair>(cert);
        out << e.name(c) << ": blocked by voters";
        for (VoterId v : b.coalition) out << ' ' << v.value() + 1;
        out << " with {" << join_names(e, b.witness) << "}, margin " << format_rational(b.margin) << '\n';
      }
    }
    return 0;
  }
  nlohmann::json certs = nlohmann::json::object();
  for (CandidateId c : e.candidates()) {
    const auto& cert = report.certificates[c.value()];
    if (const auto* m = std::get_if<Matching>(&cert)) {
      certs[e.name(c)] = {{"member", true}, {"matching", matching_to_json(e, *m)}};
    } else {
      const auto& b = std::get<BlockingPair>(cert);
      certs[e.name(c)] = {{"member", false},
                          {"blocking",
                           {{"coalition", voter_ids(b.coalition)},
                            {"witness", names(e, b.witness)},
                            {"margin", format_rational(b.margin)}}}};
    }
  }
  emit(out, {{"q", o.q_spec}, {"core", names(e, report.core)}, {"certificates", std::move(certs)}});
  return 0;
}

int cmd_distortion(const Options& o, std::ostream& out) {
  const Election e = load_election(o.file);
  std::vector<CandidateId> targets;
  for (const auto& name : o.candidates) {
    auto c = e.find_candidate(name);
    if (!c) throw Error("unknown candidate '" + name + "'");
    targets.push_back(*c);
  }
  if (targets.empty()) targets = e.candidates();
  const std::size_t limit = max_lp_size_from_env();
  nlohmann::json j = nlohmann::json::object();
  for (CandidateId c : targets) j[e.name(c)] = distortion(e, c, limit).to_string();
  out << (o.pretty ? j.dump(2) : j.dump()) << '\n';
  return 0;
}

int cmd_axioms(const Options& o, std::ostream& out) {
  std::vector<std::string_view> selected;
  for (const auto& a : o.axioms) {
    const auto all = axiom_names();
    auto it = std::find(all.begin(), all.end(), a);
    if (it == all.end()) throw Error("unknown axiom '" + a + "'");
    selected.push_back(*it);
  }
  if (selected.empty()) selected.assign(axiom_names().begin(), axiom_names().end());
  if (o.n == 0 || o.m == 0) throw Error("--n and --m must be positive");

  std::vector<AxiomReport> reports;
  if (o.exhaustive) {
    if (o.n > 3 || o.m > 4) throw LimitError("--exhaustive is limited to n <= 3 and m <= 4");
    reports = sweep_exhaustive(selected, o.n, o.m, o.seed);
  } else {
    reports = sweep_random(selected, o.n, o.m, o.trials, o.seed);
  }
  int code = 0;
  for (const auto& r : reports) {
    emit(out, report_to_json(r));
    if (r.verdict == Verdict::fail) code = 1;
  }
  if (o.violations) {
    for (const auto& demo : demonstrate_violations(o.seed)) {
      emit(out, demo_to_json(demo));
      if (!demo.reproduced) code = 1;
    }
  }
  return code;
}

int cmd_order_for_matching(const Options& o, std::ostream& out) {
  const Election e = load_election(o.file);
  const std::string text = !o.matching.empty() && o.matching.front() == '{' ? o.matching : read_file(o.matching);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(0, std::string("matching is not valid JSON: ") + ex.what());
  }
  const Matching m = matching_from_json(e, j);
  const WeightVector p(WeightDomain::voters, m.row_sums());
  const WeightVector q(WeightDomain::candidates, m.column_sums());
  const VetoOrder order = veto_order_for_matching(e, p, q, m);
  const RuleOutcome r = serial_veto(e, q, order, p);
  emit(out, {{"order", voter_ids(order.sequence)},
             {"winners", names(e, r.winners.winners)},
             {"matching_winners", names(e, tied_winners(e, m).winners)}});
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto summary = simulate_core_size(o.m, o.n, o.trials, o.seed, parse_weight_spec(o.sim_q_spec));
  out << (o.pretty ? summary.to_json().dump(2) : summary.to_json().dump()) << '\n';
  return 0;
}

}  // namespace

std::string WeightSpec::to_string() const {
  switch (kind) {
    case Kind::plurality:
      return "plurality";
    case Kind::uniform:
      return "uniform";
    case Kind::k_approval:
      return "k-approval:" + std::to_string(k);
    case Kind::file:
      return path;
  }
  return {};
}

WeightSpec parse_weight_spec(const std::string& text) {
  if (text == "plurality") return {WeightSpec::Kind::plurality, 0, {}};
  if (text == "uniform") return {WeightSpec::Kind::uniform, 0, {}};
  constexpr std::string_view prefix = "k-approval:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || k == 0) {
      throw Error("invalid weight spec '" + text + "': k must be a positive integer");
    }
    return {WeightSpec::Kind::k_approval, k, {}};
  }
  if (text.empty()) throw Error("empty weight spec");
  return {WeightSpec::Kind::file, 0, text};
}

std::map<std::string, Rational> read_weight_file(const std::string& path) {
  std::map<std::string, Rational> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    std::string value;
    std::string extra;
    if (!(fields >> key)) continue;
    if (!(fields >> value) || (fields >> extra)) throw ParseError(number, path + ": expected '<key> <weight>'");
    Rational w;
    try {
      w = parse_rational(value);
    } catch (const ParseError& e) {
      throw ParseError(number, path + ": " + e.what());
    }
    if (w < 0) throw ParseError(number, path + ": negative weight for '" + key + "'");
    if (!out.emplace(key, w).second) throw ParseError(number, path + ": duplicate key '" + key + "'");
  }
  return out;
}

WeightVector resolve_voter_weights(const Election& e, const WeightSpec& spec) {
  switch (spec.kind) {
    case WeightSpec::Kind::uniform:
      return unit_voter_weights(e);
    case WeightSpec::Kind::file: {
      std::vector<Rational> w(e.num_voters(), Rational(0));
      for (const auto& [key, value] : read_weight_file(spec.path)) {
        std::size_t id = 0;
        auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
        if (ec != std::errc() || ptr != key.data() + key.size() || id == 0 || id > e.num_voters()) {
          throw Error(spec.path + ": unknown voter '" + key + "'");
        }
        w[id - 1] = value;
      }
      WeightVector p(WeightDomain::voters, std::move(w));
      if (p.total() == 0) throw Error(spec.path + ": voter weights must have a positive total");
      return p;
    }
    default:
      throw Error("voter weights must be 'uniform' or a weight file, got '" + spec.to_string() + "'");
  }
}

WeightVector resolve_candidate_weights(const Election& e, const WeightSpec& spec, const Rational& total) {
  auto rescale = [&](const WeightVector& q) { return q.scaled(total / q.total()); };
  switch (spec.kind) {
    case WeightSpec::Kind::plurality:
      return rescale(plurality_weights(e));
    case WeightSpec::Kind::uniform:
      return uniform_candidate_weights(e, total);
    case WeightSpec::Kind::k_approval:
      if (spec.k > e.num_candidates()) {
        throw Error("k-approval needs k <= m = " + std::to_string(e.num_candidates()));
      }
      return rescale(k_approval_weights(e, spec.k));
    case WeightSpec::Kind::file: {
      std::vector<Rational> w(e.num_candidates(), Rational(0));
      for (const auto& [key, value] : read_weight_file(spec.path)) {
        auto c = e.find_candidate(key);
        if (!c) throw Error(spec.path + ": unknown candidate '" + key + "'");
        w[c->value()] = value;
      }
      WeightVector q(WeightDomain::candidates, std::move(w));
      if (q.total() != total) {
        throw Error(spec.path + ": candidate weights sum to " + format_rational(q.total()) + " but voter weights sum to " +
                    format_rational(total));
      }
      return q;
    }
  }
  throw Error("unsupported weight spec");
}

nlohmann::json CoreSizeSummary::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (std::size_t s = 0; s < histogram.size(); ++s) hist[std::to_string(s)] = histogram[s];
  return {{"experiment", "core-size"}, {"m", m},          {"n", n},
          {"trials", trials},          {"seed", seed},    {"mean", mean.get_d()},
          {"mean_exact", format_rational(mean)},          {"stddev", stddev},
          {"histogram", std::move(hist)}};
}

CoreSizeSummary simulate_core_size(std::size_t m, std::size_t n, std::size_t trials, std::uint64_t seed,
                                   const WeightSpec& q_spec) {
  if (trials == 0) throw Error("trials must be at least 1");
  if (m == 0 || n == 0) throw Error("m and n must be positive");
  CoreSizeSummary s;
  s.m = m;
  s.n = n;
  s.trials = trials;
  s.seed = seed;
  s.histogram.assign(m + 1, 0);
  Rational sum = 0;
  Rational sum_sq = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Election e = random_election(m, n, splitmix64(seed + t));
    const WeightVector p = unit_voter_weights(e);
    const WeightVector q = resolve_candidate_weights(e, q_spec, p.total());
    const std::size_t size = veto_core(e, p, q).size();
    ++s.histogram[size];
    sum += static_cast<unsigned long>(size);
    sum_sq += static_cast<unsigned long>(size * size);
  }
  const Rational count(static_cast<unsigned long>(trials));
  s.mean = sum / count;
  const Rational variance = trials > 1 ? (sum_sq - sum * s.mean) / (count - 1) : Rational(0);
  s.stddev = std::sqrt(variance.get_d());
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Veto-core voting rules with exact witnesses", "veto"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "Ballot file")->required(); };
  auto add_pretty = [&](CLI::App* sub) { sub->add_flag("--pretty", o.pretty, "Human-readable output"); };

  auto* winners = app.add_subcommand("winners", "Winners of SimultaneousVeto with witness and trace");
  add_file(winners);
  winners->add_option("--p", o.p_spec, "Voter weights: uniform or FILE");
  winners->add_option("--q", o.q_spec, "Candidate weights: plurality, uniform, k-approval:K or FILE");
  winners->add_flag("--no-trace", o.no_trace, "Omit the elimination trace");
  add_pretty(winners);

  auto* serial = app.add_subcommand("serial", "Winners of SerialVeto for a veto order");
  add_file(serial);
  serial->add_option("--order", o.order, "Comma-separated 1-based voter ids")->required();
  serial->add_option("--q", o.q_spec, "Candidate weights");
  add_pretty(serial);

  auto* core = app.add_subcommand("core", "The (p,q)-veto core with certificates");
  add_file(core);
  core->add_option("--p", o.p_spec, "Voter weights: uniform or FILE");
  core->add_option("--q", o.q_spec, "Candidate weights");
  add_pretty(core);

  auto* dist = app.add_subcommand("distortion", "Exact metric distortion of candidates");
  add_file(dist);
  dist->add_option("--candidate", o.candidates, "Candidate name (repeatable; default all)");
  add_pretty(dist);

  auto* axioms = app.add_subcommand("axioms", "Seeded axiom sweeps");
  axioms->add_option("--n", o.n, "Largest number of voters")->check(CLI::PositiveNumber);
  axioms->add_option("--m", o.m, "Largest number of candidates")->check(CLI::PositiveNumber);
  axioms->add_option("--trials", o.trials, "Random elections");
  axioms->add_option("--seed", o.seed, "Seed");
  axioms->add_option("--axiom", o.axioms, "Axiom to check (repeatable; default all)");
  axioms->add_flag("--exhaustive", o.exhaustive, "Enumerate every profile up to n and m instead of sampling");
  axioms->add_flag("--violations", o.violations, "Also replay the known violations");

  auto* ofm = app.add_subcommand("order-for-matching", "Veto order whose SerialVeto winners contain W(M)");
  add_file(ofm);
  ofm->add_option("--matching", o.matching, "Matching JSON file or inline JSON")->required();

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiments");
  auto* core_size = simulate->add_subcommand("core-size", "Mean veto core size on Impartial Culture");
  simulate->require_subcommand(1);
  core_size->add_option("--m", o.m, "Candidates")->required();
  core_size->add_option("--n", o.n, "Voters")->required();
  core_size->add_option("--trials", o.trials, "Trials")->required();
  core_size->add_option("--seed", o.seed, "Seed")->required();
  core_size->add_option("--q", o.sim_q_spec, "Candidate weights (default uniform)");
  add_pretty(core_size);

  std::vector<std::string> storage{"veto"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (winners->parsed()) return cmd_winners(o, out);
    if (serial->parsed()) return cmd_serial(o, out);
    if (core->parsed()) return cmd_core(o, out);
    if (dist->parsed()) return cmd_distortion(o, out);
    if (axioms->parsed()) return cmd_axioms(o, out);
    if (ofm->parsed()) return cmd_order_for_matching(o, out);
    if (core_size->parsed()) return cmd_simulate(o, out);
  } catch (const std::exception& e) {
    err << "veto: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace veto::cli
