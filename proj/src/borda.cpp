#include "balance/borda.hpp"

#include <algorithm>
#include <numeric>

#include "balance/errors.hpp"

namespace balance {
namespace {

Profile make_profile(int m, const std::vector<std::vector<AltId>>& columns) {
  std::vector<Ordering> os;
  for (const auto& c : columns) os.emplace_back(c);
  return Profile(m, std::move(os));
}

std::vector<AltId> ascending(AltId from, AltId to) {
  std::vector<AltId> out;
  for (AltId x = from; x < to; ++x) out.push_back(x);
  return out;
}

std::vector<AltId> concat(std::initializer_list<std::vector<AltId>> parts) {
  std::vector<AltId> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

// Difference form rewritten with s_3 = 2 + d_3 and s_k = s_{k-1} + d_k, all
// d_k >= 0: returns the constant and the d-coefficients.
std::pair<Rational, std::vector<Rational>> in_increments(const SymbolicScore& diff, int m) {
  Rational constant = diff.constant;
  std::vector<Rational> d(m + 1, Rational(0));
  for (const auto& [k, c] : diff.coefficients) {
    if (k <= 2) {
      constant += c * k;
      continue;
    }
    constant += c * 2;
    for (int j = 3; j <= k; ++j) d[j] += c;
  }
  return {constant, d};
}

// diff >= 0 (strict: > 0) for every admissible weighting 1 < 2 <= s_3 <= ... <= s_m.
bool always_nonnegative(const SymbolicScore& diff, int m, bool strict) {
  auto [constant, d] = in_increments(diff, m);
  if (strict ? constant <= Rational(0) : constant < Rational(0)) return false;
  return std::all_of(d.begin(), d.end(), [](const Rational& c) { return c >= Rational(0); });
}

// Exact Gauss-Jordan elimination on s_3..s_m. Unique solution or nullopt.
std::optional<std::vector<Rational>> solve(const std::vector<LinearEquation>& eqs, int m) {
  const int unknowns = m - 2;
  std::vector<std::vector<Rational>> rows;
  for (const auto& e : eqs) {
    std::vector<Rational> row(unknowns + 1, Rational(0));
    for (const auto& [k, c] : e.coefficients) row[k - 3] = c;
    row[unknowns] = e.rhs;
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (int col = 0; col < unknowns; ++col) {
    auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                              [&](const auto& r) { return r[col] != Rational(0); });
    if (pivot == rows.end()) return std::nullopt;
    std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
    auto& p = rows[rank];
    const Rational lead = p[col];
    for (auto& v : p) v /= lead;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == Rational(0)) continue;
      const Rational f = rows[r][col];
      for (int c = 0; c <= unknowns; ++c) rows[r][c] -= f * p[c];
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (rows[r][unknowns] != Rational(0)) return std::nullopt;
  }
  std::vector<Rational> out;
  for (int col = 0; col < unknowns; ++col) out.push_back(rows[col][unknowns]);
  return out;
}

void append_term(std::string& out, const Rational& c, const std::string& var) {
  const bool negative = c < Rational(0);
  const Rational mag = negative ? -c : c;
  if (out.empty()) {
    out += negative ? "-" : "";
  } else {
    out += negative ? " - " : " + ";
  }
  if (var.empty()) {
    out += to_string(mag);
  } else {
    if (mag != Rational(1)) out += to_string(mag) + " ";
    out += var;
  }
}

std::string weight_name(int k) { return "s_" + std::to_string(k); }

}  // namespace

// ---------------------------------------------------------------------------

Weights normalize_weights(const Weights& w) {
  const auto& s = w.values();
  if (s[0] == s[1]) throw PreconditionError("s_1 = s_2: weights cannot be normalized to s_1 = 1, s_2 = 2");
  const Rational beta = Rational(1) / (s[1] - s[0]);
  const Rational alpha = Rational(1) - beta * s[0];
  std::vector<Rational> t;
  for (const auto& v : s) t.push_back(alpha + beta * v);
  return Weights(std::move(t));
}

Rational SymbolicScore::evaluate(const Weights& w) const {
  Rational total = constant;
  for (const auto& [k, c] : coefficients) total += c * w.at(k);
  return total;
}

SymbolicScore operator-(const SymbolicScore& a, const SymbolicScore& b) {
  SymbolicScore out = a;
  out.constant -= b.constant;
  for (const auto& [k, c] : b.coefficients) out.coefficients[k] -= c;
  std::erase_if(out.coefficients, [](const auto& kv) { return kv.second == Rational(0); });
  return out;
}

std::string to_string(const SymbolicScore& s) {
  std::string out;
  if (s.constant != Rational(0) || s.coefficients.empty()) append_term(out, s.constant, "");
  for (const auto& [k, c] : s.coefficients) append_term(out, c, weight_name(k));
  return out;
}

std::vector<SymbolicScore> symbolic_scores(const Profile& u, const std::set<int>& unknowns) {
  std::vector<SymbolicScore> out(u.m());
  for (const auto& r : u.orderings()) {
    for (int k = 1; k <= u.m(); ++k) {
      SymbolicScore& s = out[r.at(k)];
      if (unknowns.contains(k)) {
        s.coefficients[k] += 1;
      } else {
        s.constant += k;
      }
    }
  }
  return out;
}

std::string to_string(const LinearEquation& e) {
  std::string out;
  for (const auto& [k, c] : e.coefficients) append_term(out, c, weight_name(k));
  if (out.empty()) out = "0";
  return out + " = " + to_string(e.rhs);
}

std::optional<LinearEquation> WeightConstraint::normalized() const {
  const SymbolicScore diff = left - right;
  if (diff.coefficients.empty() && diff.constant == Rational(0)) return std::nullopt;

  LinearEquation e{diff.coefficients, -diff.constant};
  std::int64_t scale = e.rhs.denominator();
  for (const auto& [k, c] : e.coefficients) scale = lcm64(scale, c.denominator());
  std::int64_t g = 0;
  auto numer = [&](const Rational& c) { return (c * scale).numerator(); };
  for (const auto& [k, c] : e.coefficients) g = std::gcd(g, numer(c));
  g = std::gcd(g, numer(e.rhs));
  if (!e.coefficients.empty() && e.coefficients.begin()->second < Rational(0)) g = -g;
  for (auto& [k, c] : e.coefficients) c = Rational(numer(c) / g);
  e.rhs = Rational(numer(e.rhs) / g);
  return e;
}

std::string to_string(const WeightConstraint& c) { return to_string(c.left) + " = " + to_string(c.right); }

// ---------------------------------------------------------------------------

EqualLeadingWitness equal_leading_weights_witness(const Weights& w, int m, int n) {
  if (m < 3 || n < 2) throw PreconditionError("equal-leading-weights witness needs m >= 3 and n >= 2");
  const auto& s = w.values();
  if (static_cast<int>(s.size()) != m) throw PreconditionError("weights must have exactly m entries");
  if (s[0] != s[1]) throw PreconditionError("s_1 != s_2: the equal-leading-weights construction does not apply");
  int k = 1;
  while (k < m && s[k] == s[0]) ++k;

  const AltId x = 0;
  const AltId y = 1;
  const std::vector<AltId> rest = ascending(2, m);
  std::vector<std::vector<AltId>> columns(n - 1, concat({{y, x}, rest}));
  std::vector<AltId> last(rest.begin(), rest.begin() + (k - 1));
  last.push_back(x);
  last.push_back(y);
  last.insert(last.end(), rest.begin() + (k - 1), rest.end());
  columns.push_back(last);
  const Profile u = make_profile(m, columns);

  const RuleSpec rule = RuleSpec::scoring(w);
  BalanceWitness bw = make_balance_witness(rule, u, TranspositionPair{y, x, 1, n});
  const bool as_claimed = bw.before_choice.contains(x) && !bw.before_choice.contains(y) &&
                          !bw.after_choice.contains(x) && bw.after_choice.contains(y);
  if (!as_claimed || !revalidate(rule, bw)) throw Error("equal-leading-weights witness failed re-verification");
  return {k, x, y, std::move(bw)};
}

// ---------------------------------------------------------------------------

Labels xyz_labels() { return Labels({"x", "y", "z"}); }

Profile small_electorate_profile(int n) {
  constexpr AltId x = 0, y = 1, z = 2;
  switch (n) {
    case 4:
      return make_profile(3, {{x, y, z}, {z, y, x}, {x, y, z}, {z, y, x}});
    case 5:
      return make_profile(3, {{x, y, z}, {z, y, x}, {y, x, z}, {x, z, y}, {z, y, x}});
    case 6:
      return make_profile(3, {{y, x, z}, {z, x, y}, {y, x, z}, {z, x, y}, {y, x, z}, {z, x, y}});
    default:
      throw PreconditionError("the small-electorate profile exists for n = 4, 5, 6 only");
  }
}

std::vector<TranspositionPair> small_electorate_pairs(int n) {
  constexpr AltId x = 0, y = 1;
  switch (n) {
    case 4:
      return {{x, y, 1, 2}, {x, y, 3, 4}};
    case 5:
      return {{x, y, 1, 2}};
    case 6:
      return {{y, x, 1, 2}, {y, x, 3, 4}, {y, x, 5, 6}};
    default:
      throw PreconditionError("the small-electorate profile exists for n = 4, 5, 6 only");
  }
}

Profile paradox_pad(const Profile& u, int t) {
  if (u.m() != 3) throw PreconditionError("paradox padding needs m = 3");
  if (t < 0) throw PreconditionError("padding count must be non-negative");
  std::vector<Ordering> os(u.orderings().begin(), u.orderings().end());
  for (int r = 0; r < t; ++r) {
    os.push_back(Ordering({0, 1, 2}));
    os.push_back(Ordering({1, 2, 0}));
    os.push_back(Ordering({2, 0, 1}));
  }
  return Profile(3, std::move(os));
}

// ---------------------------------------------------------------------------

std::optional<Weights> BordaDerivation::solved_weights() const {
  if (!solution) return std::nullopt;
  std::vector<Rational> s{Rational(1), Rational(2)};
  s.insert(s.end(), solution->begin(), solution->end());
  return Weights(std::move(s));
}

BordaDerivation derive_borda_constraints(int m, int n) {
  std::optional<Labels> labels;
  Profile start = [&] {
    if (m == 3 && n >= 4) {
      const int base = n % 3 == 1 ? 4 : n % 3 == 2 ? 5 : 6;
      labels = xyz_labels();
      return paradox_pad(small_electorate_profile(base), (n - base) / 3);
    }
    if (m == 4 && n == 3) {
      constexpr AltId a = 0, b = 1, x = 2, y = 3;
      labels = Labels({"a", "b", "x", "y"});
      return make_profile(4, {{a, y, x, b}, {b, a, x, y}, {x, y, b, a}});
    }
    throw PreconditionError("constraint derivation supports m = 3 with n >= 4, and (m, n) = (4, 3)");
  }();

  std::vector<std::vector<TranspositionPair>> moves;
  if (m == 3) {
    moves.push_back(small_electorate_pairs(n % 3 == 1 ? 4 : n % 3 == 2 ? 5 : 6));
  } else {
    constexpr AltId x = 2, y = 3;
    moves = {{{y, x, 1, 2}}, {{y, x, 2, 3}}};
  }

  BordaDerivation d{m, n, *labels, {start}, moves, {}, ChoiceSet{}, {}, {}, std::nullopt};
  for (const auto& stage : moves) {
    Profile next = d.profiles.back();
    for (const auto& p : stage) next = apply_pair(next, p);
    d.profiles.push_back(std::move(next));
  }

  std::set<int> unknowns;
  for (int k = 3; k <= m; ++k) unknowns.insert(k);
  for (const auto& p : d.profiles) d.scores.push_back(symbolic_scores(p, unknowns));

  // The common choice set C is an argmin class at every profile. An
  // alternative strictly beaten somewhere cannot be in C; one that is never
  // worse than a member of C must be in C.
  auto beaten = [&](AltId q) {
    for (const auto& sc : d.scores) {
      for (AltId r = 0; r < m; ++r) {
        if (always_nonnegative(sc[q] - sc[r], m, true)) return true;
      }
    }
    return false;
  };
  auto closure = [&](AltId q) {
    ChoiceSet cl{q};
    for (bool grew = true; grew;) {
      grew = false;
      for (AltId r = 0; r < m; ++r) {
        if (cl.contains(r)) continue;
        for (const auto& sc : d.scores) {
          const bool joins = std::ranges::any_of(cl.members(), [&](AltId s) {
            return always_nonnegative(sc[s] - sc[r], m, false);
          });
          if (joins) {
            cl.insert(r);
            grew = true;
            break;
          }
        }
      }
    }
    return cl;
  };

  ChoiceSet candidates;
  for (AltId q = 0; q < m; ++q) {
    if (!beaten(q)) candidates.insert(q);
  }
  for (bool shrank = true; shrank;) {
    shrank = false;
    for (AltId q : candidates.members()) {
      if (!closure(q).subset_of(candidates)) {
        candidates = ChoiceSet::from_bits(candidates.bits() & ~(std::uint64_t{1} << q));
        shrank = true;
      }
    }
  }
  if (candidates.empty()) throw Error("no admissible common choice set");

  d.forced = ChoiceSet::all(m);
  for (AltId q : candidates.members()) d.forced = ChoiceSet::from_bits(d.forced.bits() & closure(q).bits());

  const std::vector<AltId> forced = d.forced.members();
  for (const auto& sc : d.scores) {
    for (std::size_t k = 1; k < forced.size(); ++k) {
      WeightConstraint c{sc[forced[0]], sc[forced[k]]};
      auto e = c.normalized();
      if (!e || std::find(d.equations.begin(), d.equations.end(), *e) != d.equations.end()) continue;
      d.constraints.push_back(std::move(c));
      d.equations.push_back(std::move(*e));
    }
  }
  d.solution = solve(d.equations, m);
  return d;
}

// ---------------------------------------------------------------------------

InsertionWitness insertion_witness(int m, int n, const Rational& w) {
  if (m < 4) throw PreconditionError("insertion witness needs m >= 4");
  if (n < 3 || n > 6) throw PreconditionError("insertion witness needs n in {3, 4, 5, 6}");
  if (w == Rational(m)) throw PreconditionError("w = m gives the Borda weights: no witness exists");
  if (w < Rational(m - 1)) throw PreconditionError("w < m - 1 violates non-decreasing weights");

  std::vector<Rational> s;
  for (int k = 1; k < m; ++k) s.emplace_back(k);
  s.push_back(w);
  const Weights weights(s);

  std::vector<std::string> names;
  std::optional<Profile> u;
  std::optional<TranspositionPair> pair;
  std::optional<std::pair<ChoiceSet, ChoiceSet>> predicted;

  if (n == 3) {
    if (m > 25) throw PreconditionError("insertion witness at n = 3 supports m <= 25");
    // a, b, inserted c's, x, y.
    const AltId a = 0, b = 1, x = m - 2, y = m - 1;
    const std::vector<AltId> cs = ascending(2, m - 2);
    std::vector<AltId> cs_down(cs.rbegin(), cs.rend());
    names = {"a", "b"};
    for (std::size_t k = 0; k < cs.size(); ++k) names.emplace_back(1, static_cast<char>('c' + k));
    names.insert(names.end(), {"x", "y"});
    if (m == 4) {
      u = make_profile(m, {{a, y, x, b}, {b, a, x, y}, {x, y, b, a}});
      pair = TranspositionPair{y, x, 1, 2};
      if (w > Rational(4) && w < Rational(5)) predicted = std::make_pair(ChoiceSet{x}, ChoiceSet{x, a});
    } else {
      u = make_profile(m, {concat({{a, x, y}, cs, {b}}), concat({{b}, cs_down, {a, y, x}}),
                           concat({{x, y, b, a}, cs})});
      pair = TranspositionPair{x, y, 1, 2};
      if (w > Rational(m)) predicted = std::make_pair(ChoiceSet{a}, ChoiceSet{a, x});
    }
  } else {
    if (m > 26) throw PreconditionError("insertion witness supports m <= 26");
    // Inserted alternatives first, then x, y, z.
    const AltId x = m - 3, y = m - 2, z = m - 1;
    const std::vector<AltId> as = ascending(0, m - 3);
    std::vector<AltId> as_down(as.rbegin(), as.rend());
    for (std::size_t k = 0; k < as.size(); ++k) names.emplace_back(1, static_cast<char>('a' + k));
    names.insert(names.end(), {"x", "y", "z"});
    const Profile base = small_electorate_profile(n);
    auto lift = [&](AltId v) { return v + (m - 3); };
    std::vector<std::vector<AltId>> columns;
    for (int i = 1; i <= n; ++i) {
      const Ordering& r = base.voter(i);
      const AltId p = lift(r.at(1)), q = lift(r.at(2)), t = lift(r.at(3));
      if (i == 1) {
        columns.push_back(concat({{p, q}, as, {t}}));
      } else if (i == 2) {
        columns.push_back(concat({{p}, as_down, {q, t}}));
      } else {
        columns.push_back(concat({{p, q, t}, as}));
      }
    }
    u = make_profile(m, columns);
    pair = n == 6 ? TranspositionPair{y, x, 1, 2} : TranspositionPair{x, y, 1, 2};
    if (n == 5 && w > Rational(m)) predicted = std::make_pair(ChoiceSet{y}, ChoiceSet{x});
    (void)z;
  }

  const RuleSpec rule = RuleSpec::scoring(weights);
  BalanceWitness bw = make_balance_witness(rule, *u, *pair);
  if (!revalidate(rule, bw)) throw Error("insertion witness failed re-verification");
  if (predicted && (predicted->first != bw.before_choice || predicted->second != bw.after_choice)) {
    throw Error("insertion witness disagrees with its predicted choice sets");
  }
  return {m, n, weights, Labels(std::move(names)), std::move(bw), predicted};
}

// ---------------------------------------------------------------------------

std::string to_string(CharacterizationKind k) {
  return k == CharacterizationKind::BordaForced ? "BordaForced" : "NotForced";
}

Characterization characterize(int m, int n) {
  if (m == 3 && n == 3) {
    const Weights w({Rational(1), Rational(2), Rational(31, 10)});
    BalanceVerdict v = check_balanced(RuleSpec::scoring(w), 3, 3, Exhaustive{});
    if (v.status != BalanceStatus::Balanced) throw Error("weights 1, 2, 31/10 are not balanced at (3, 3)");
    return {CharacterizationKind::NotForced, m, n, std::nullopt, w, std::move(v)};
  }
  BordaDerivation d = derive_borda_constraints(m, n);
  const auto solved = d.solved_weights();
  if (!solved || normalize_weights(*solved) != Weights::borda(m)) {
    throw Error("constraint derivation did not determine the Borda weights");
  }
  return {CharacterizationKind::BordaForced, m, n, std::move(d), std::nullopt, std::nullopt};
}

std::vector<std::pair<Rational, BalanceStatus>> sweep_third_weight(const std::vector<Rational>& grid) {
  std::vector<std::pair<Rational, BalanceStatus>> out;
  for (const auto& s : grid) {
    const Weights w({Rational(1), Rational(2), s});
    out.emplace_back(s, check_balanced(RuleSpec::scoring(w), 3, 3, Exhaustive{}).status);
  }
  return out;
}

}  // namespace balance
