#include "balance/prefs.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "balance/errors.hpp"

namespace balance {

// ---------------------------------------------------------------------------
// Ordering

Ordering::Ordering(std::vector<AltId> best_to_worst) : ranks_(std::move(best_to_worst)) {
  const int m = size();
  if (m < 1 || m > kMaxAlternatives) {
    throw PreconditionError("ordering size " + std::to_string(m) + " outside 1.." +
                            std::to_string(kMaxAlternatives));
  }
  pos_.assign(m, -1);
  for (int k = 0; k < m; ++k) {
    AltId x = ranks_[k];
    if (x < 0 || x >= m || pos_[x] != -1) {
      throw PreconditionError("ordering is not a permutation of 0.." + std::to_string(m - 1));
    }
    pos_[x] = k;
  }
}

Ordering Ordering::identity(int m) {
  std::vector<AltId> r(m);
  std::iota(r.begin(), r.end(), 0);
  return Ordering(std::move(r));
}

AltId Ordering::at(int rank) const {
  if (rank < 1 || rank > size()) {
    throw PreconditionError("rank " + std::to_string(rank) + " outside 1.." + std::to_string(size()));
  }
  return ranks_[rank - 1];
}

int Ordering::rank_of(AltId x) const {
  if (x < 0 || x >= size()) throw PreconditionError("unknown alternative id " + std::to_string(x));
  return pos_[x] + 1;
}

bool Ordering::immediately_above(AltId x, AltId y) const {
  if (x < 0 || y < 0 || x >= size() || y >= size()) return false;
  return pos_[x] + 1 == pos_[y];
}

Ordering Ordering::swapped(AltId x, AltId y) const {
  std::vector<AltId> r = ranks_;
  std::swap(r[pos_.at(x)], r[pos_.at(y)]);
  return Ordering(std::move(r));
}

Ordering Ordering::with_prefix(std::span<const AltId> head) const {
  std::vector<AltId> r(head.begin(), head.end());
  for (AltId x : ranks_) {
    if (std::find(head.begin(), head.end(), x) == head.end()) r.push_back(x);
  }
  return Ordering(std::move(r));
}

Ordering Ordering::placed_just_above(AltId x, AltId anchor) const {
  if (x == anchor) throw PreconditionError("cannot place an alternative above itself");
  std::vector<AltId> r;
  r.reserve(ranks_.size());
  for (AltId z : ranks_) {
    if (z == x) continue;
    if (z == anchor) r.push_back(x);
    r.push_back(z);
  }
  return Ordering(std::move(r));
}

// ---------------------------------------------------------------------------
// ChoiceSet

ChoiceSet::ChoiceSet(std::initializer_list<AltId> members) {
  for (AltId x : members) insert(x);
}

ChoiceSet ChoiceSet::all(int m) {
  if (m < 0 || m > kMaxAlternatives) throw PreconditionError("universe too large");
  return from_bits(m == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
}

void ChoiceSet::insert(AltId x) {
  if (x < 0 || x >= kMaxAlternatives) {
    throw PreconditionError("alternative id " + std::to_string(x) + " out of range");
  }
  bits_ |= std::uint64_t{1} << x;
}

int ChoiceSet::size() const noexcept { return std::popcount(bits_); }

std::vector<AltId> ChoiceSet::members() const {
  std::vector<AltId> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

// ---------------------------------------------------------------------------
// Profile

Profile::Profile(int m, std::vector<Ordering> orderings) : m_(m), orderings_(std::move(orderings)) {
  if (m < 2) throw PreconditionError("a profile needs m >= 2 alternatives");
  if (orderings_.size() < 2) throw PreconditionError("a profile needs n >= 2 individuals");
  for (const auto& o : orderings_) {
    if (o.size() != m) throw PreconditionError("ordering size does not match m");
  }
}

const Ordering& Profile::voter(int i) const {
  if (i < 1 || i > n()) {
    throw PreconditionError("individual " + std::to_string(i) + " outside 1.." + std::to_string(n()));
  }
  return orderings_[i - 1];
}

Profile Profile::with_voter(int i, Ordering ordering) const {
  voter(i);
  Profile copy = *this;
  if (ordering.size() != m_) throw PreconditionError("ordering size does not match m");
  copy.orderings_[i - 1] = std::move(ordering);
  return copy;
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Ordering> enumerate_orderings(int m) {
  if (m <= 0) throw PreconditionError("empty universe: m must be at least 1");
  if (m > 10) throw CapExceeded("refusing to enumerate " + std::to_string(m) + "! orderings");
  std::vector<AltId> r(m);
  std::iota(r.begin(), r.end(), 0);
  std::vector<Ordering> out;
  do {
    out.emplace_back(r);
  } while (std::next_permutation(r.begin(), r.end()));
  return out;
}

std::uint64_t ordering_index(const Ordering& o) {
  // Lehmer code.
  const int m = o.size();
  std::uint64_t index = 0;
  std::uint64_t used = 0;
  for (int k = 0; k < m; ++k) {
    AltId x = o.at(k + 1);
    std::uint64_t smaller_unused = std::popcount(~used & ((std::uint64_t{1} << x) - 1));
    index = index * static_cast<std::uint64_t>(m - k) + smaller_unused;
    used |= std::uint64_t{1} << x;
  }
  return index;
}

std::uint64_t profile_space_size(int m, int n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t fact = 1;
  for (int k = 2; k <= m; ++k) {
    if (fact > kMax / static_cast<std::uint64_t>(k)) return kMax;
    fact *= static_cast<std::uint64_t>(k);
  }
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (fact != 0 && total > kMax / fact) return kMax;
    total *= fact;
  }
  return total;
}

ProfileSpace::ProfileSpace(int m, int n, std::uint64_t cap) : m_(m), n_(n) {
  if (m < 2 || n < 2) throw PreconditionError("profile space needs m >= 2 and n >= 2");
  size_ = profile_space_size(m, n);
  if (size_ > cap) {
    throw CapExceeded("(" + std::to_string(m) + "!)^" + std::to_string(n) +
                      " profiles exceed the exhaustive cap of " + std::to_string(cap) +
                      "; use sampled mode");
  }
  orderings_ = enumerate_orderings(m);
}

std::vector<int> ProfileSpace::digits(std::uint64_t index) const {
  if (index >= size_) throw PreconditionError("profile index out of range");
  const auto base = static_cast<std::uint64_t>(orderings_.size());
  std::vector<int> d(n_);
  for (int i = n_ - 1; i >= 0; --i) {
    d[i] = static_cast<int>(index % base);
    index /= base;
  }
  return d;
}

Profile ProfileSpace::at(std::uint64_t index) const {
  std::vector<Ordering> os;
  os.reserve(n_);
  for (int d : digits(index)) os.push_back(orderings_[d]);
  return Profile(m_, std::move(os));
}

std::uint64_t ProfileSpace::index_of(const Profile& u) const {
  if (u.m() != m_ || u.n() != n_) throw PreconditionError("profile does not belong to this space");
  const auto base = static_cast<std::uint64_t>(orderings_.size());
  std::uint64_t index = 0;
  for (const auto& o : u.orderings()) index = index * base + ordering_index(o);
  return index;
}

ProfileSpace enumerate_profiles(int m, int n, std::uint64_t cap) { return ProfileSpace(m, n, cap); }

// ---------------------------------------------------------------------------
// Statistics and moves

ChoiceSet top_k_set(const Ordering& r, int k) {
  if (k < 1 || k > r.size()) {
    throw PreconditionError("k = " + std::to_string(k) + " outside 1.." + std::to_string(r.size()));
  }
  ChoiceSet s;
  for (int rank = 1; rank <= k; ++rank) s.insert(r.at(rank));
  return s;
}

ChoiceSet tops_set(const Profile& u) {
  ChoiceSet s;
  for (const auto& o : u.orderings()) s.insert(o.top());
  return s;
}

bool is_valid_pair(const Profile& u, const TranspositionPair& p) {
  if (p.x == p.y || p.i == p.j) return false;
  if (p.i < 1 || p.i > u.n() || p.j < 1 || p.j > u.n()) return false;
  return u.voter(p.i).immediately_above(p.x, p.y) && u.voter(p.j).immediately_above(p.y, p.x);
}

std::vector<TranspositionPair> valid_pairs(const Profile& u) {
  std::vector<TranspositionPair> out;
  const int m = u.m();
  for (int i = 1; i <= u.n(); ++i) {
    const Ordering& ri = u.voter(i);
    for (int j = i + 1; j <= u.n(); ++j) {
      const Ordering& rj = u.voter(j);
      for (int k = 1; k < m; ++k) {
        AltId x = ri.at(k);
        AltId y = ri.at(k + 1);
        if (rj.immediately_above(y, x)) out.push_back({x, y, i, j});
      }
    }
  }
  return out;
}

Profile apply_pair(const Profile& u, const TranspositionPair& p) {
  auto describe = [&] {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.i) + "," +
           std::to_string(p.j) + ")";
  };
  if (p.x == p.y) throw PreconditionError("pair " + describe() + " needs x != y");
  if (p.i == p.j) throw PreconditionError("pair " + describe() + " needs i != j");
  if (p.i < 1 || p.i > u.n() || p.j < 1 || p.j > u.n()) {
    throw PreconditionError("pair " + describe() + " names an individual outside 1.." +
                            std::to_string(u.n()));
  }
  if (!u.voter(p.i).immediately_above(p.x, p.y)) {
    throw PreconditionError("pair " + describe() + ": alternative " + std::to_string(p.x) +
                            " is not immediately above " + std::to_string(p.y) + " for individual " +
                            std::to_string(p.i));
  }
  if (!u.voter(p.j).immediately_above(p.y, p.x)) {
    throw PreconditionError("pair " + describe() + ": alternative " + std::to_string(p.y) +
                            " is not immediately above " + std::to_string(p.x) + " for individual " +
                            std::to_string(p.j));
  }
  return u.with_voter(p.i, u.voter(p.i).swapped(p.x, p.y))
      .with_voter(p.j, u.voter(p.j).swapped(p.x, p.y));
}

// ---------------------------------------------------------------------------
// Labels and text format

bool is_valid_label(std::string_view label) {
  if (label.empty() || label.front() < 'a' || label.front() > 'z') return false;
  return std::all_of(label.begin() + 1, label.end(),
                     [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); });
}

Labels::Labels(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (!is_valid_label(names_[k])) throw PreconditionError("invalid label '" + names_[k] + "'");
    for (std::size_t l = 0; l < k; ++l) {
      if (names_[l] == names_[k]) throw PreconditionError("duplicate label '" + names_[k] + "'");
    }
  }
}

Labels Labels::defaults(int m) {
  std::vector<std::string> names;
  names.reserve(m);
  for (int x = 0; x < m; ++x) {
    names.push_back(m <= 26 ? std::string(1, static_cast<char>('a' + x)) : "a" + std::to_string(x));
  }
  return Labels(std::move(names));
}

const std::string& Labels::name(AltId x) const {
  if (x < 0 || x >= size()) throw PreconditionError("no label for alternative " + std::to_string(x));
  return names_[x];
}

std::optional<AltId> Labels::find(std::string_view label) const {
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (names_[k] == label) return static_cast<AltId>(k);
  }
  return std::nullopt;
}

AltId Labels::id(std::string_view label) const {
  if (auto x = find(label)) return *x;
  throw PreconditionError("unknown alternative '" + std::string(label) + "'");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

int parse_count(const std::string& tok, std::size_t line, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  return value;
}

}  // namespace

LabeledProfile parse_profile(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string buf(text);
    std::istringstream in(buf);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  while (!lines.empty() && split_ws(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty profile");

  auto header = split_ws(lines[0]);
  if (header.size() != 2) throw ParseError(1, "expected header 'm n'");
  int m = parse_count(header[0], 1, "m");
  int n = parse_count(header[1], 1, "n");
  if (m < 2 || m > kMaxAlternatives) throw ParseError(1, "m must lie in 2.." + std::to_string(kMaxAlternatives));
  if (n < 2) throw ParseError(1, "n must be at least 2");
  if (lines.size() != static_cast<std::size_t>(n) + 1) {
    throw ParseError(lines.size() < static_cast<std::size_t>(n) + 1 ? lines.size() + 1 : n + 2,
                     "expected exactly " + std::to_string(n) + " ordering lines");
  }

  std::vector<std::vector<std::string>> rows;
  for (int i = 1; i <= n; ++i) {
    auto row = split_ws(lines[i]);
    std::size_t line_no = static_cast<std::size_t>(i) + 1;
    if (row.size() != static_cast<std::size_t>(m)) {
      throw ParseError(line_no, "expected " + std::to_string(m) + " labels, got " + std::to_string(row.size()));
    }
    for (const auto& label : row) {
      if (!is_valid_label(label)) throw ParseError(line_no, "invalid label '" + label + "'");
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::string> names = rows[0];
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw ParseError(2, "repeated label in ordering");
  }
  Labels labels(names);

  std::vector<Ordering> orderings;
  for (int i = 0; i < n; ++i) {
    std::size_t line_no = static_cast<std::size_t>(i) + 2;
    std::vector<AltId> ids;
    for (const auto& label : rows[i]) {
      auto x = labels.find(label);
      if (!x) throw ParseError(line_no, "label '" + label + "' not used by individual 1");
      ids.push_back(*x);
    }
    try {
      orderings.emplace_back(std::move(ids));
    } catch (const PreconditionError&) {
      throw ParseError(line_no, "repeated label in ordering");
    }
  }
  return {Profile(m, std::move(orderings)), std::move(labels)};
}

std::string format_ordering(const Ordering& r, const Labels& labels) {
  std::string out;
  for (int k = 1; k <= r.size(); ++k) {
    if (k > 1) out += ' ';
    out += labels.name(r.at(k));
  }
  return out;
}

std::string format_profile(const Profile& u, const Labels& labels) {
  if (labels.size() != u.m()) throw PreconditionError("label count does not match m");
  std::string out = std::to_string(u.m()) + " " + std::to_string(u.n()) + "\n";
  for (const auto& o : u.orderings()) out += format_ordering(o, labels) + "\n";
  return out;
}

std::string format_choice(const ChoiceSet& s, const Labels& labels) {
  std::vector<std::string> names;
  for (AltId x : s.members()) names.push_back(labels.name(x));
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& name : names) {
    if (!out.empty()) out += ' ';
    out += name;
  }
  return out;
}

std::string format_pair(const TranspositionPair& p, const Labels& labels) {
  return "(" + labels.name(p.x) + "," + labels.name(p.y) + "," + std::to_string(p.i) + "," +
         std::to_string(p.j) + ")";
}

}  // namespace balance
