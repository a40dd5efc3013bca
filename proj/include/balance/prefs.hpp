#pragma once

// Alternatives, strict orderings, profiles and the transposition-pair move.
//
// Alternatives are dense ids 0..m-1. Ranks and voter indices are 1-based at
// every public entry point, matching the usual r[1], u(1) notation; storage is
// 0-based.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace balance {

using AltId = int;

/// ChoiceSet is a 64-bit mask, which bounds the universe size.
inline constexpr int kMaxAlternatives = 64;

/// Exhaustive enumeration refuses spaces larger than this unless told otherwise.
inline constexpr std::uint64_t kDefaultProfileCap = 100'000'000;

class Ordering {
 public:
  Ordering() = default;

  /// `best_to_worst` must be a permutation of 0..m-1.
  explicit Ordering(std::vector<AltId> best_to_worst);

  static Ordering identity(int m);

  int size() const noexcept { return static_cast<int>(ranks_.size()); }

  /// Alternative at 1-based `rank`.
  AltId at(int rank) const;
  AltId top() const { return at(1); }

  /// 1-based rank of `x`.
  int rank_of(AltId x) const;

  bool immediately_above(AltId x, AltId y) const;

  std::span<const AltId> alternatives() const noexcept { return ranks_; }

  /// Copy with the positions of `x` and `y` exchanged.
  Ordering swapped(AltId x, AltId y) const;

  /// Copy with `head` occupying ranks 1..|head| in that order; the remaining
  /// alternatives keep their current relative order below it.
  Ordering with_prefix(std::span<const AltId> head) const;
  Ordering with_prefix(std::initializer_list<AltId> head) const {
    return with_prefix(std::span<const AltId>(head.begin(), head.size()));
  }

  /// Copy with `x` removed and reinserted directly above `anchor`.
  Ordering placed_just_above(AltId x, AltId anchor) const;

  friend bool operator==(const Ordering& a, const Ordering& b) { return a.ranks_ == b.ranks_; }
  friend std::strong_ordering operator<=>(const Ordering& a, const Ordering& b) {
    return a.ranks_ <=> b.ranks_;
  }

 private:
  std::vector<AltId> ranks_;
  std::vector<int> pos_;  // pos_[x] is the 0-based rank of x
};

/// Subset of the universe stored as a bit mask.
class ChoiceSet {
 public:
  ChoiceSet() = default;
  ChoiceSet(std::initializer_list<AltId> members);
  static ChoiceSet from_bits(std::uint64_t bits) {
    ChoiceSet s;
    s.bits_ = bits;
    return s;
  }
  static ChoiceSet all(int m);

  void insert(AltId x);
  bool contains(AltId x) const noexcept {
    return x >= 0 && x < kMaxAlternatives && ((bits_ >> x) & 1U) != 0;
  }
  int size() const noexcept;
  bool empty() const noexcept { return bits_ == 0; }
  bool subset_of(const ChoiceSet& other) const noexcept { return (bits_ & ~other.bits_) == 0; }
  std::vector<AltId> members() const;
  std::uint64_t bits() const noexcept { return bits_; }

  friend bool operator==(const ChoiceSet&, const ChoiceSet&) = default;

 private:
  std::uint64_t bits_ = 0;
};

class Profile {
 public:
  /// Requires m >= 2, n >= 2 and every ordering over exactly m alternatives.
  Profile(int m, std::vector<Ordering> orderings);

  int m() const noexcept { return m_; }
  int n() const noexcept { return static_cast<int>(orderings_.size()); }

  /// u(i) for 1-based voter index i.
  const Ordering& voter(int i) const;

  std::span<const Ordering> orderings() const noexcept { return orderings_; }

  Profile with_voter(int i, Ordering ordering) const;

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  int m_;
  std::vector<Ordering> orderings_;
};

/// Quadruple (x, y, i, j): x immediately above y for voter i and y immediately
/// above x for voter j. (x, y, i, j) and (y, x, j, i) denote the same move.
struct TranspositionPair {
  AltId x = 0;
  AltId y = 0;
  int i = 0;
  int j = 0;

  /// The same move written from the other voter's side.
  TranspositionPair flipped() const { return {y, x, j, i}; }
  /// Representative with i < j.
  TranspositionPair canonical() const { return i < j ? *this : flipped(); }
  /// The move that undoes this one, valid at the resulting profile.
  TranspositionPair inverse() const { return {y, x, i, j}; }

  friend bool operator==(const TranspositionPair&, const TranspositionPair&) = default;
};

// ---------------------------------------------------------------------------
// Enumeration

/// All m! orderings in lexicographic order of their rank sequences.
std::vector<Ordering> enumerate_orderings(int m);

/// 0-based lexicographic index of `o` among enumerate_orderings(o.size()).
std::uint64_t ordering_index(const Ordering& o);

/// (m!)^n, saturating at UINT64_MAX.
std::uint64_t profile_space_size(int m, int n);

/// The full space L(X)^N as a random-access, restartable sequence. Index order
/// is lexicographic over the n-tuple of ordering indices, voter 1 most
/// significant.
class ProfileSpace {
 public:
  /// Throws CapExceeded when (m!)^n > cap.
  ProfileSpace(int m, int n, std::uint64_t cap = kDefaultProfileCap);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }
  const std::vector<Ordering>& orderings() const noexcept { return orderings_; }

  Profile at(std::uint64_t index) const;
  std::uint64_t index_of(const Profile& u) const;

  /// Ordering indices of the profile at `index`, voter 1 first.
  std::vector<int> digits(std::uint64_t index) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Profile;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const ProfileSpace* space, std::uint64_t index) : space_(space), index_(index) {}

    Profile operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++index_;
      return copy;
    }
    std::uint64_t index() const noexcept { return index_; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const ProfileSpace* space_ = nullptr;
    std::uint64_t index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  int m_;
  int n_;
  std::uint64_t size_;
  std::vector<Ordering> orderings_;
};

ProfileSpace enumerate_profiles(int m, int n, std::uint64_t cap = kDefaultProfileCap);

// ---------------------------------------------------------------------------
// Statistics and moves

/// r[1:k], the unordered set of the top k alternatives. 1 <= k <= m.
ChoiceSet top_k_set(const Ordering& r, int k);

/// Union of every voter's top alternative.
ChoiceSet tops_set(const Profile& u);

bool is_valid_pair(const Profile& u, const TranspositionPair& p);

/// Every valid move at u, one representative (i < j) each, ordered by
/// (i, j, rank of x in u(i)).
std::vector<TranspositionPair> valid_pairs(const Profile& u);

/// u with x and y exchanged for voters i and j. Throws PreconditionError
/// naming the failing adjacency when p is not valid at u.
Profile apply_pair(const Profile& u, const TranspositionPair& p);

// ---------------------------------------------------------------------------
// Labels and the profile text format

/// Presentation names for alternative ids; each matches [a-z][a-z0-9]*.
class Labels {
 public:
  explicit Labels(std::vector<std::string> names);

  /// a, b, c, ... for m <= 26, otherwise a0, a1, ...
  static Labels defaults(int m);

  int size() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(AltId x) const;
  std::optional<AltId> find(std::string_view label) const;
  /// Throws PreconditionError for an unknown label.
  AltId id(std::string_view label) const;

  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const Labels&, const Labels&) = default;

 private:
  std::vector<std::string> names_;
};

bool is_valid_label(std::string_view label);

struct LabeledProfile {
  Profile profile;
  Labels labels;
};

/// Reads "m n" followed by n lines of labels, best to worst. Ids are assigned
/// in sorted label order. Throws ParseError carrying the offending line.
LabeledProfile parse_profile(std::string_view text);

/// Exact inverse of parse_profile: "m n\n" then one space-separated line per voter.
std::string format_profile(const Profile& u, const Labels& labels);

std::string format_ordering(const Ordering& r, const Labels& labels);

/// Members as labels sorted alphabetically, space separated.
std::string format_choice(const ChoiceSet& s, const Labels& labels);

/// "(x,y,i,j)".
std::string format_pair(const TranspositionPair& p, const Labels& labels);

}  // namespace balance
