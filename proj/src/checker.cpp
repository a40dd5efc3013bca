#include "balance/checker.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <random>
#include <thread>

#include "balance/errors.hpp"

namespace balance {
namespace {

constexpr std::uint64_t kNoHit = std::numeric_limits<std::uint64_t>::max();

// Unbiased draw from [0, bound) using only the engine's raw output, so a seed
// reproduces across standard library implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

Profile sample_profile(std::mt19937_64& rng, const std::vector<Ordering>& orderings, int m, int n) {
  std::vector<Ordering> os;
  os.reserve(n);
  for (int i = 0; i < n; ++i) os.push_back(orderings[uniform_below(rng, orderings.size())]);
  return Profile(m, std::move(os));
}

void shuffle_range(std::mt19937_64& rng, std::vector<AltId>& v, std::size_t first, std::size_t last) {
  for (std::size_t k = last; k > first + 1; --k) {
    std::size_t pick = first + uniform_below(rng, k - first);
    std::swap(v[k - 1], v[pick]);
  }
}

void require_sizes(int m, int n) {
  if (m < 2 || n < 2) throw PreconditionError("checks need m >= 2 and n >= 2");
}

BalanceVerdict exhaustive_balance(const RuleSpec& rule, int m, int n, const Exhaustive& opt) {
  ProfileSpace space(m, n, opt.cap);
  const int workers = std::max(1, opt.workers);

  struct Local {
    std::uint64_t moves = 0;
    std::uint64_t hit_index = kNoHit;
    std::size_t hit_pair = 0;
  };
  std::vector<Local> locals(workers);
  std::atomic<std::uint64_t> best{kNoHit};

  auto scan = [&](int w) {
    Local& local = locals[w];
    for (std::uint64_t idx = w; idx < space.size(); idx += workers) {
      if (idx > best.load(std::memory_order_relaxed)) break;
      Profile u = space.at(idx);
      auto pairs = valid_pairs(u);
      if (pairs.empty()) continue;
      const ChoiceSet g = evaluate(rule, u);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        ++local.moves;
        if (evaluate(rule, apply_pair(u, pairs[p])) != g) {
          local.hit_index = idx;
          local.hit_pair = p;
          break;
        }
      }
      if (local.hit_index != kNoHit) {
        std::uint64_t current = best.load();
        while (idx < current && !best.compare_exchange_weak(current, idx)) {
        }
        break;
      }
    }
  };

  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(scan, w);
  }

  const Local* hit = nullptr;
  for (const auto& local : locals) {
    if (local.hit_index != kNoHit && (!hit || local.hit_index < hit->hit_index)) hit = &local;
  }

  BalanceVerdict verdict{BalanceStatus::Balanced, 0, std::nullopt};
  if (!hit) {
    for (const auto& local : locals) verdict.searched += local.moves;
    return verdict;
  }

  verdict.status = BalanceStatus::Unbalanced;
  if (workers == 1) {
    verdict.searched = hit->moves;
  } else {
    // Count moves as a sequential scan would have, independent of scheduling.
    for (std::uint64_t idx = 0; idx < hit->hit_index; ++idx) verdict.searched += valid_pairs(space.at(idx)).size();
    verdict.searched += hit->hit_pair + 1;
  }
  Profile u = space.at(hit->hit_index);
  verdict.witness = make_balance_witness(rule, u, valid_pairs(u)[hit->hit_pair]);
  return verdict;
}

BalanceVerdict sampled_balance(const RuleSpec& rule, int m, int n, const Sampled& opt) {
  const auto orderings = enumerate_orderings(m);
  std::mt19937_64 rng(opt.seed);
  BalanceVerdict verdict{BalanceStatus::Inconclusive, 0, std::nullopt};
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    Profile u = sample_profile(rng, orderings, m, n);
    auto pairs = valid_pairs(u);
    if (pairs.empty()) continue;
    const auto& p = pairs[uniform_below(rng, pairs.size())];
    ++verdict.searched;
    if (is_balance_violation(rule, u, p)) {
      verdict.status = BalanceStatus::Unbalanced;
      verdict.witness = make_balance_witness(rule, u, p);
      return verdict;
    }
  }
  return verdict;
}

std::vector<std::uint64_t> top_k_key(const Profile& u, int k) {
  std::vector<std::uint64_t> key;
  key.reserve(u.n());
  for (const auto& r : u.orderings()) key.push_back(top_k_set(r, k).bits());
  return key;
}

PropertyVerdict exhaustive_top_k(const RuleSpec& rule, int m, int n, int k, const Exhaustive& opt) {
  ProfileSpace space(m, n, opt.cap);
  std::map<std::vector<std::uint64_t>, std::pair<std::uint64_t, ChoiceSet>> groups;
  PropertyVerdict verdict{PropertyStatus::Holds, 0, std::nullopt};
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    Profile u = space.at(idx);
    ChoiceSet g = evaluate(rule, u);
    ++verdict.searched;
    auto [it, inserted] = groups.try_emplace(top_k_key(u, k), idx, g);
    if (!inserted && it->second.second != g) {
      verdict.status = PropertyStatus::Fails;
      verdict.witness = PairWitness{space.at(it->second.first), u, it->second.second, g};
      return verdict;
    }
  }
  return verdict;
}

PropertyVerdict sampled_top_k(const RuleSpec& rule, int m, int n, int k, const Sampled& opt) {
  const auto orderings = enumerate_orderings(m);
  std::mt19937_64 rng(opt.seed);
  PropertyVerdict verdict{PropertyStatus::Inconclusive, 0, std::nullopt};
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    Profile u = sample_profile(rng, orderings, m, n);
    std::vector<Ordering> os;
    for (const auto& r : u.orderings()) {
      std::vector<AltId> v(r.alternatives().begin(), r.alternatives().end());
      shuffle_range(rng, v, 0, static_cast<std::size_t>(k));
      shuffle_range(rng, v, static_cast<std::size_t>(k), v.size());
      os.emplace_back(std::move(v));
    }
    Profile v(m, std::move(os));
    ++verdict.searched;
    ChoiceSet gu = evaluate(rule, u);
    ChoiceSet gv = evaluate(rule, v);
    if (gu != gv) {
      verdict.status = PropertyStatus::Fails;
      verdict.witness = PairWitness{u, v, gu, gv};
      return verdict;
    }
  }
  return verdict;
}

std::vector<ChoiceSet> evaluate_all(const RuleSpec& rule, const ProfileSpace& space) {
  std::vector<ChoiceSet> table;
  table.reserve(space.size());
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) table.push_back(evaluate(rule, space.at(idx)));
  return table;
}

IndividualEffect scan_voter(const ProfileSpace& space, const std::vector<ChoiceSet>& table, int voter) {
  const auto base = static_cast<std::uint64_t>(space.orderings().size());
  std::uint64_t stride = 1;
  for (int i = space.n(); i > voter; --i) stride *= base;

  IndividualEffect effect{voter, false, 0, std::nullopt};
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    if ((idx / stride) % base != 0) continue;
    ++effect.groups_examined;
    for (std::uint64_t d = 1; d < base; ++d) {
      std::uint64_t other = idx + d * stride;
      if (table[other] != table[idx]) {
        effect.effective = true;
        effect.witness = PairWitness{space.at(idx), space.at(other), table[idx], table[other]};
        return effect;
      }
    }
  }
  return effect;
}

}  // namespace

std::string describe(const SearchMode& mode) {
  if (const auto* s = std::get_if<Sampled>(&mode)) {
    return "sampled(seed=" + std::to_string(s->seed) + ",trials=" + std::to_string(s->trials) + ")";
  }
  return "exhaustive";
}

std::string to_string(BalanceStatus s) {
  switch (s) {
    case BalanceStatus::Balanced: return "Balanced";
    case BalanceStatus::Unbalanced: return "Unbalanced";
    case BalanceStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(PropertyStatus s) {
  switch (s) {
    case PropertyStatus::Holds: return "Holds";
    case PropertyStatus::Fails: return "Fails";
    case PropertyStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool is_balance_violation(const RuleSpec& rule, const Profile& u, const TranspositionPair& p) {
  if (!is_valid_pair(u, p)) return false;
  return evaluate(rule, u) != evaluate(rule, apply_pair(u, p));
}

BalanceWitness make_balance_witness(const RuleSpec& rule, const Profile& u, const TranspositionPair& p) {
  Profile v = apply_pair(u, p);
  ChoiceSet gu = evaluate(rule, u);
  ChoiceSet gv = evaluate(rule, v);
  return BalanceWitness{u, p, std::move(v), gu, gv};
}

bool revalidate(const RuleSpec& rule, const BalanceWitness& w) {
  if (!is_valid_pair(w.before, w.pair)) return false;
  if (apply_pair(w.before, w.pair) != w.after) return false;
  ChoiceSet gu = evaluate(rule, w.before);
  ChoiceSet gv = evaluate(rule, w.after);
  return gu == w.before_choice && gv == w.after_choice && gu != gv;
}

BalanceVerdict check_balanced(const RuleSpec& rule, int m, int n, const SearchMode& mode) {
  require_sizes(m, n);
  check_rule_fits(rule, m, n);
  if (const auto* s = std::get_if<Sampled>(&mode)) return sampled_balance(rule, m, n, *s);
  return exhaustive_balance(rule, m, n, std::get<Exhaustive>(mode));
}

std::vector<EscalationStep> search_balance_escalating(const RuleSpec& rule,
                                                      const std::vector<std::pair<int, int>>& sizes,
                                                      std::uint64_t cap) {
  std::vector<EscalationStep> steps;
  for (auto [m, n] : sizes) {
    steps.push_back({m, n, check_balanced(rule, m, n, Exhaustive{cap, 1})});
    if (steps.back().verdict.status == BalanceStatus::Unbalanced) break;
  }
  return steps;
}

PropertyVerdict check_top_k_only(const RuleSpec& rule, int m, int n, int k, const SearchMode& mode) {
  require_sizes(m, n);
  if (k < 1 || k >= m) {
    throw PreconditionError("top-k check needs 1 <= k < m (k = " + std::to_string(k) + ")");
  }
  check_rule_fits(rule, m, n);
  if (const auto* s = std::get_if<Sampled>(&mode)) return sampled_top_k(rule, m, n, k, *s);
  return exhaustive_top_k(rule, m, n, k, std::get<Exhaustive>(mode));
}

PropertyVerdict check_tops_only(const RuleSpec& rule, int m, int n, const SearchMode& mode) {
  return check_top_k_only(rule, m, n, 1, mode);
}

PropertyVerdict check_pareto_compliance(const RuleSpec& rule, int m, int n, std::uint64_t cap) {
  require_sizes(m, n);
  check_rule_fits(rule, m, n);
  ProfileSpace space(m, n, cap);
  PropertyVerdict verdict{PropertyStatus::Holds, 0, std::nullopt};
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    Profile u = space.at(idx);
    ++verdict.searched;
    ChoiceSet g = evaluate(rule, u);
    ChoiceSet optimal = pareto_set(u);
    if (!g.subset_of(optimal)) {
      verdict.status = PropertyStatus::Fails;
      verdict.witness = PairWitness{u, u, g, optimal};
      return verdict;
    }
  }
  return verdict;
}

EffectivenessReport check_effectiveness(const RuleSpec& rule, int m, int n, std::uint64_t cap) {
  require_sizes(m, n);
  check_rule_fits(rule, m, n);
  ProfileSpace space(m, n, cap);
  const auto table = evaluate_all(rule, space);
  EffectivenessReport report{m, n, {}};
  for (int voter = 1; voter <= n; ++voter) report.individuals.push_back(scan_voter(space, table, voter));
  return report;
}

IneffectiveWitness ineffective_voter_witness(const RuleSpec& rule, int m, int n, int voter, std::uint64_t cap) {
  require_sizes(m, n);
  check_rule_fits(rule, m, n);
  if (voter < 1 || voter > n) {
    throw PreconditionError("individual " + std::to_string(voter) + " outside 1.." + std::to_string(n));
  }
  ProfileSpace space(m, n, cap);
  const auto table = evaluate_all(rule, space);

  auto differing = std::find_if(table.begin(), table.end(), [&](const ChoiceSet& g) { return g != table[0]; });
  if (differing == table.end()) {
    throw PreconditionError("the construction requires a non-constant correspondence; " +
                            format_rule(rule, Labels::defaults(m)) + " is constant at (m,n) = (" +
                            std::to_string(m) + "," + std::to_string(n) + ")");
  }
  if (scan_voter(space, table, voter).effective) {
    throw PreconditionError("individual " + std::to_string(voter) + " is effective for " +
                            format_rule(rule, Labels::defaults(m)));
  }

  // u(voter) = u*(voter); ineffectiveness keeps G(u*) unchanged.
  const Profile start = space.at(0);
  const Profile target =
      space.at(static_cast<std::uint64_t>(differing - table.begin())).with_voter(voter, start.voter(voter));

  struct Swap {
    Profile before;
    int who;
    AltId upper;
    AltId lower;
  };
  std::vector<Swap> chain;
  Profile current = start;
  for (int j = 1; j <= n; ++j) {
    if (j == voter) continue;
    const Ordering& goal = target.voter(j);
    while (current.voter(j) != goal) {
      const Ordering& r = current.voter(j);
      int k = 1;
      while (goal.rank_of(r.at(k)) < goal.rank_of(r.at(k + 1))) ++k;
      AltId upper = r.at(k);
      AltId lower = r.at(k + 1);
      chain.push_back({current, j, upper, lower});
      current = current.with_voter(j, r.swapped(upper, lower));
    }
  }

  for (std::size_t t = 0; t < chain.size(); ++t) {
    const Swap& s = chain[t];
    Profile next = t + 1 < chain.size() ? chain[t + 1].before : target;
    if (evaluate(rule, s.before) == evaluate(rule, next)) continue;

    // Move `lower` directly above `upper` for the ineffective voter; the swap by
    // `who` and the reverse swap by `voter` then form a transposition pair.
    Profile lifted = s.before.with_voter(voter, s.before.voter(voter).placed_just_above(s.lower, s.upper));
    TranspositionPair pair = TranspositionPair{s.upper, s.lower, s.who, voter}.canonical();
    BalanceWitness violation = make_balance_witness(rule, lifted, pair);
    if (violation.before_choice == violation.after_choice) {
      throw Error("lifted move does not change the choice set; the voter is not ineffective");
    }
    return IneffectiveWitness{voter, start, target, chain.size(), t + 1, std::move(violation)};
  }
  throw Error("adjacent-swap chain never changed the choice set");
}

}  // namespace balance
