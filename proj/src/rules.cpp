#include "balance/rules.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "balance/errors.hpp"

namespace balance {

// ---------------------------------------------------------------------------
// Weights

Weights::Weights(std::vector<Rational> s) : s_(std::move(s)) {
  if (s_.size() < 2) throw PreconditionError("a scoring system needs at least two weights");
  for (std::size_t k = 1; k < s_.size(); ++k) {
    if (s_[k] < s_[k - 1]) throw PreconditionError("weights must be non-decreasing");
  }
  if (s_.front() == s_.back()) {
    throw PreconditionError("all weights equal: the scoring rule would be constant");
  }
}

Weights Weights::borda(int m) {
  std::vector<Rational> s;
  for (int k = 1; k <= m; ++k) s.emplace_back(k);
  return Weights(std::move(s));
}

const Rational& Weights::at(int rank) const {
  if (rank < 1 || rank > size()) throw PreconditionError("weight index out of range");
  return s_[rank - 1];
}

// ---------------------------------------------------------------------------
// RuleSpec

RuleSpec RuleSpec::scoring(Weights w) {
  RuleSpec r(RuleKind::Scoring);
  r.weights_ = std::move(w);
  return r;
}

RuleSpec RuleSpec::k_approval(int k) {
  if (k < 1) throw PreconditionError("k-approval needs k >= 1");
  RuleSpec r(RuleKind::KApproval);
  r.k_ = k;
  return r;
}

RuleSpec RuleSpec::dictatorship(int voter) {
  if (voter < 1) throw PreconditionError("dictator index must be at least 1");
  RuleSpec r(RuleKind::Dictatorship);
  r.dictator_ = voter;
  return r;
}

RuleSpec RuleSpec::constant(std::optional<ChoiceSet> set) {
  if (set && set->empty()) throw PreconditionError("constant rule needs a non-empty set");
  RuleSpec r(RuleKind::Constant);
  r.fixed_ = set;
  return r;
}

RuleSpec RuleSpec::tops_unanimity(std::optional<ChoiceSet> fallback) {
  if (fallback && fallback->empty()) throw PreconditionError("fallback set must be non-empty");
  RuleSpec r(RuleKind::TopsUnanimity);
  r.fixed_ = fallback;
  return r;
}

const Weights& RuleSpec::weights() const {
  if (!weights_) throw PreconditionError("rule has no weights");
  return *weights_;
}

ChoiceSet RuleSpec::fixed_set(int m) const { return fixed_ ? *fixed_ : ChoiceSet::all(m); }

void check_rule_fits(const RuleSpec& rule, int m, int n) {
  switch (rule.kind()) {
    case RuleKind::Scoring:
      if (rule.weights().size() != m) {
        throw PreconditionError("scoring rule has " + std::to_string(rule.weights().size()) +
                                " weights but m = " + std::to_string(m));
      }
      break;
    case RuleKind::KApproval:
      if (rule.k() >= m) {
        throw PreconditionError("k-approval needs k < m (k = " + std::to_string(rule.k()) + ")");
      }
      break;
    case RuleKind::Dictatorship:
      if (rule.dictator() > n) {
        throw PreconditionError("dictator " + std::to_string(rule.dictator()) + " outside 1.." +
                                std::to_string(n));
      }
      break;
    case RuleKind::Constant:
    case RuleKind::TopsUnanimity:
      if (!rule.fixed_set(m).subset_of(ChoiceSet::all(m))) {
        throw PreconditionError("fixed set names alternatives outside the universe");
      }
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// Rules

namespace {

template <typename Less>
ChoiceSet best_by(int m, Less better_or_equal_first) {
  // Collects every alternative not strictly beaten by the running best.
  ChoiceSet out;
  int best = 0;
  out.insert(0);
  for (AltId x = 1; x < m; ++x) {
    int cmp = better_or_equal_first(x, best);
    if (cmp > 0) {
      out = ChoiceSet{x};
      best = x;
    } else if (cmp == 0) {
      out.insert(x);
    }
  }
  return out;
}

ChoiceSet argmax(const std::vector<int>& values) {
  return best_by(static_cast<int>(values.size()), [&](AltId x, AltId best) {
    return values[x] > values[best] ? 1 : (values[x] == values[best] ? 0 : -1);
  });
}

}  // namespace

ScoreTable scoring_scores(const Profile& u, const Weights& w) {
  if (w.size() != u.m()) throw PreconditionError("weight count does not match m");
  ScoreTable scores(u.m(), Rational(0));
  for (const auto& r : u.orderings()) {
    for (int k = 1; k <= u.m(); ++k) scores[r.at(k)] += w.at(k);
  }
  return scores;
}

ChoiceSet scoring_choice(const Profile& u, const Weights& w) {
  ScoreTable scores = scoring_scores(u, w);
  return best_by(u.m(), [&](AltId x, AltId best) {
    return scores[x] < scores[best] ? 1 : (scores[x] == scores[best] ? 0 : -1);
  });
}

ChoiceSet borda(const Profile& u) {
  // Integer weights: plain ints avoid rational overhead in the hot loop.
  std::vector<int> negated(u.m(), 0);
  for (const auto& r : u.orderings()) {
    for (int k = 1; k <= u.m(); ++k) negated[r.at(k)] -= k;
  }
  return argmax(negated);
}

ChoiceSet plurality(const Profile& u) { return k_approval(u, 1); }

ChoiceSet k_approval(const Profile& u, int k) {
  if (k < 1 || k >= u.m()) {
    throw PreconditionError("k-approval needs 1 <= k < m (k = " + std::to_string(k) + ")");
  }
  std::vector<int> counts(u.m(), 0);
  for (const auto& r : u.orderings()) {
    for (int rank = 1; rank <= k; ++rank) ++counts[r.at(rank)];
  }
  return argmax(counts);
}

std::vector<std::vector<int>> pairwise_support(const Profile& u) {
  const int m = u.m();
  std::vector<std::vector<int>> support(m, std::vector<int>(m, 0));
  for (const auto& r : u.orderings()) {
    for (int a = 1; a <= m; ++a) {
      for (int b = a + 1; b <= m; ++b) ++support[r.at(a)][r.at(b)];
    }
  }
  return support;
}

ChoiceSet copeland(const Profile& u) {
  auto support = pairwise_support(u);
  std::vector<int> score(u.m(), 0);
  for (AltId x = 0; x < u.m(); ++x) {
    for (AltId y = 0; y < u.m(); ++y) {
      if (x == y) continue;
      if (support[x][y] > support[y][x]) ++score[x];
      if (support[x][y] < support[y][x]) --score[x];
    }
  }
  return argmax(score);
}

ChoiceSet top_cycle(const Profile& u) {
  const int m = u.m();
  auto support = pairwise_support(u);
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  for (AltId x = 0; x < m; ++x) {
    for (AltId y = 0; y < m; ++y) reach[x][y] = (x == y) || support[x][y] >= support[y][x];
  }
  for (int k = 0; k < m; ++k) {
    for (int x = 0; x < m; ++x) {
      if (!reach[x][k]) continue;
      for (int y = 0; y < m; ++y) {
        if (reach[k][y]) reach[x][y] = true;
      }
    }
  }
  ChoiceSet out;
  for (AltId x = 0; x < m; ++x) {
    if (std::all_of(reach[x].begin(), reach[x].end(), [](bool b) { return b; })) out.insert(x);
  }
  return out;
}

ChoiceSet pareto_set(const Profile& u) {
  const int m = u.m();
  auto support = pairwise_support(u);
  ChoiceSet out;
  for (AltId x = 0; x < m; ++x) {
    bool dominated = false;
    for (AltId y = 0; y < m && !dominated; ++y) {
      dominated = (y != x && support[y][x] == u.n());
    }
    if (!dominated) out.insert(x);
  }
  return out;
}

ChoiceSet maximin(const Profile& u) {
  const int m = u.m();
  auto support = pairwise_support(u);
  std::vector<int> worst(m, std::numeric_limits<int>::max());
  for (AltId x = 0; x < m; ++x) {
    for (AltId y = 0; y < m; ++y) {
      if (x != y) worst[x] = std::min(worst[x], support[x][y]);
    }
  }
  return argmax(worst);
}

ChoiceSet dictatorship(const Profile& u, int voter) { return ChoiceSet{u.voter(voter).top()}; }

ChoiceSet union_of_tops(const Profile& u) { return tops_set(u); }

ChoiceSet tops_unanimity(const Profile& u, const ChoiceSet& fallback) {
  ChoiceSet tops = tops_set(u);
  return tops.size() == 1 ? tops : fallback;
}

ChoiceSet evaluate(const RuleSpec& rule, const Profile& u) {
  check_rule_fits(rule, u.m(), u.n());
  switch (rule.kind()) {
    case RuleKind::Borda: return borda(u);
    case RuleKind::Scoring: return scoring_choice(u, rule.weights());
    case RuleKind::Plurality: return plurality(u);
    case RuleKind::KApproval: return k_approval(u, rule.k());
    case RuleKind::Copeland: return copeland(u);
    case RuleKind::TopCycle: return top_cycle(u);
    case RuleKind::ParetoSet: return pareto_set(u);
    case RuleKind::Maximin: return maximin(u);
    case RuleKind::Dictatorship: return dictatorship(u, rule.dictator());
    case RuleKind::UnionOfTops: return union_of_tops(u);
    case RuleKind::Constant: return rule.fixed_set(u.m());
    case RuleKind::TopsUnanimity: return tops_unanimity(u, rule.fixed_set(u.m()));
  }
  throw Error("unknown rule kind");
}

// ---------------------------------------------------------------------------
// Text syntax

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_positive(const std::string& text, const std::string& rule) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw PreconditionError("rule '" + rule + "' needs a positive integer, got '" + text + "'");
}

std::optional<ChoiceSet> parse_set(const std::string& text, const Labels& labels) {
  if (text == "*") return std::nullopt;
  ChoiceSet s;
  for (const auto& label : split(text, ',')) s.insert(labels.id(label));
  return s;
}

std::string format_set(const RuleSpec& rule, const Labels& labels) {
  if (rule.fixed_set_is_universe()) return "*";
  std::string out;
  for (AltId x : rule.fixed_set(labels.size()).members()) {
    if (!out.empty()) out += ',';
    out += labels.name(x);
  }
  return out;
}

}  // namespace

RuleSpec parse_rule(std::string_view text, const Labels& labels) {
  std::string spec(text);
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::optional<std::string> arg;
  if (colon != std::string::npos) arg = spec.substr(colon + 1);

  auto no_arg = [&](RuleSpec r) {
    if (arg) throw PreconditionError("rule '" + name + "' takes no parameter");
    return r;
  };
  auto need_arg = [&]() -> const std::string& {
    if (!arg || arg->empty()) throw PreconditionError("rule '" + name + "' needs a parameter");
    return *arg;
  };

  if (name == "borda") return no_arg(RuleSpec::borda());
  if (name == "plurality") return no_arg(RuleSpec::plurality());
  if (name == "copeland") return no_arg(RuleSpec::copeland());
  if (name == "topcycle") return no_arg(RuleSpec::top_cycle());
  if (name == "pareto") return no_arg(RuleSpec::pareto());
  if (name == "maximin") return no_arg(RuleSpec::maximin());
  if (name == "uniontops") return no_arg(RuleSpec::union_of_tops());
  if (name == "scoring") {
    std::vector<Rational> s;
    for (const auto& part : split(need_arg(), ',')) s.push_back(parse_rational(part));
    return RuleSpec::scoring(Weights(std::move(s)));
  }
  if (name == "kapproval") return RuleSpec::k_approval(parse_positive(need_arg(), name));
  if (name == "dictator") return RuleSpec::dictatorship(parse_positive(need_arg(), name));
  if (name == "constant") return RuleSpec::constant(parse_set(need_arg(), labels));
  if (name == "topsunan") return RuleSpec::tops_unanimity(arg ? parse_set(need_arg(), labels) : std::nullopt);
  throw PreconditionError("unknown rule '" + name + "' (see 'rules list')");
}

std::string format_rule(const RuleSpec& rule, const Labels& labels) {
  switch (rule.kind()) {
    case RuleKind::Borda: return "borda";
    case RuleKind::Scoring: {
      std::string out = "scoring:";
      bool first = true;
      for (const auto& s : rule.weights().values()) {
        if (!first) out += ',';
        out += to_string(s);
        first = false;
      }
      return out;
    }
    case RuleKind::Plurality: return "plurality";
    case RuleKind::KApproval: return "kapproval:" + std::to_string(rule.k());
    case RuleKind::Copeland: return "copeland";
    case RuleKind::TopCycle: return "topcycle";
    case RuleKind::ParetoSet: return "pareto";
    case RuleKind::Maximin: return "maximin";
    case RuleKind::Dictatorship: return "dictator:" + std::to_string(rule.dictator());
    case RuleKind::UnionOfTops: return "uniontops";
    case RuleKind::Constant: return "constant:" + format_set(rule, labels);
    case RuleKind::TopsUnanimity: return "topsunan:" + format_set(rule, labels);
  }
  return "?";
}

std::string rule_syntax_help() {
  return "borda                 Borda count (weights 1,2,...,m, lowest total wins)\n"
         "scoring:s1,...,sm     scoring rule; weights as integers, p/q or decimals\n"
         "plurality             most frequent tops\n"
         "kapproval:k           most frequent members of the top-k sets (1 <= k < m)\n"
         "copeland              pairwise wins minus losses\n"
         "topcycle              maximal set of the weak majority relation's closure\n"
         "pareto                Pareto optimal alternatives\n"
         "maximin               Simpson-Kramer maximin\n"
         "dictator:i            top of individual i\n"
         "uniontops             union of all tops\n"
         "constant:a,b|*        fixed set (* = all alternatives)\n"
         "topsunan[:a,b|*]      common top if unanimous, else the fixed set (default all)\n";
}

}  // namespace balance
