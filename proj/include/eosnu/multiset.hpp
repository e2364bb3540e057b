#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eosnu/errors.hpp"

namespace eosnu {

using Count = std::uint64_t;

inline Count checked_add(Count a, Count b) {
  if (a > std::numeric_limits<Count>::max() - b)
    throw std::overflow_error("multiset count overflow");
  return a + b;
}

inline Count checked_mul(Count a, Count b) {
  if (a != 0 && b > std::numeric_limits<Count>::max() / a)
    throw std::overflow_error("multiset count overflow");
  return a * b;
}

/// Finite multiset over an ordered element type.
///
/// Stored as a vector of (element, count) pairs sorted by element, so iteration
/// is canonical and equality is structural. No stored count is ever zero.
/// Subtraction is truncated at zero; `exact_sub` is the guarded variant.
template <typename E>
class Multiset {
 public:
  using element_type = E;
  using value_type = std::pair<E, Count>;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  Multiset() = default;

  Multiset(std::initializer_list<E> elems) {
    for (const auto& e : elems) insert(e);
  }

  template <typename Range>
  static Multiset from_elements(const Range& elems) {
    Multiset m;
    for (const auto& e : elems) m.insert(e);
    return m;
  }

  Count count(const E& e) const {
    auto it = find(e);
    return it == entries_.end() ? 0 : it->second;
  }

  bool contains(const E& e) const { return find(e) != entries_.end(); }

  void insert(const E& e, Count n = 1) {
    if (n == 0) return;
    auto it = lower(e);
    if (it != entries_.end() && !(e < it->first)) {
      it->second = checked_add(it->second, n);
    } else {
      entries_.insert(it, value_type{e, n});
    }
  }

  // Removes up to n copies of e and returns how many were removed.
  Count erase(const E& e, Count n = std::numeric_limits<Count>::max()) {
    auto it = lower(e);
    if (it == entries_.end() || e < it->first) return 0;
    Count removed = std::min(n, it->second);
    it->second -= removed;
    if (it->second == 0) entries_.erase(it);
    return removed;
  }

  // Total number of copies, |m|.
  Count size() const {
    Count total = 0;
    for (const auto& [e, c] : entries_) total = checked_add(total, c);
    return total;
  }

  std::size_t distinct() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<E> support() const {
    std::vector<E> out;
    out.reserve(entries_.size());
    for (const auto& [e, c] : entries_) out.push_back(e);
    return out;
  }

  // Every element repeated by its count, in canonical order.
  std::vector<E> expand() const {
    std::vector<E> out;
    for (const auto& [e, c] : entries_)
      for (Count i = 0; i < c; ++i) out.push_back(e);
    return out;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  Multiset& operator+=(const Multiset& other) {
    entries_ = merge(entries_, other.entries_, [](Count a, Count b) {
      return checked_add(a, b);
    });
    return *this;
  }

  Multiset& operator-=(const Multiset& other) {
    entries_ = merge(entries_, other.entries_,
                     [](Count a, Count b) { return a > b ? a - b : Count{0}; });
    return *this;
  }

  friend Multiset operator+(Multiset a, const Multiset& b) { return a += b; }
  friend Multiset operator-(Multiset a, const Multiset& b) { return a -= b; }

  friend bool operator==(const Multiset& a, const Multiset& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const Multiset& a, const Multiset& b) {
    return !(a == b);
  }
  // Lexicographic over the canonical (element, count) sequence.
  friend bool operator<(const Multiset& a, const Multiset& b) {
    return a.entries_ < b.entries_;
  }

 private:
  auto lower(const E& e) {
    return std::lower_bound(
        entries_.begin(), entries_.end(), e,
        [](const value_type& entry, const E& key) { return entry.first < key; });
  }

  const_iterator find(const E& e) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), e,
        [](const value_type& entry, const E& key) { return entry.first < key; });
    if (it != entries_.end() && !(e < it->first)) return it;
    return entries_.end();
  }

  template <typename Combine>
  static std::vector<value_type> merge(const std::vector<value_type>& a,
                                       const std::vector<value_type>& b,
                                       Combine combine) {
    std::vector<value_type> out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
      Count ca = 0, cb = 0;
      const E* key;
      if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
        key = &ia->first;
        ca = ia->second;
        ++ia;
      } else if (ia == a.end() || ib->first < ia->first) {
        key = &ib->first;
        cb = ib->second;
        ++ib;
      } else {
        key = &ia->first;
        ca = ia->second;
        cb = ib->second;
        ++ia;
        ++ib;
      }
      Count c = combine(ca, cb);
      if (c != 0) out.emplace_back(*key, c);
    }
    return out;
  }

  std::vector<value_type> entries_;
};

template <typename E>
Multiset<E> add(const Multiset<E>& a, const Multiset<E>& b) {
  return a + b;
}

// Truncated difference: max(a(d) - b(d), 0).
template <typename E>
Multiset<E> sub(const Multiset<E>& a, const Multiset<E>& b) {
  return a - b;
}

// a ⊑ b
template <typename E>
bool leq(const Multiset<E>& a, const Multiset<E>& b) {
  auto ib = b.begin();
  for (const auto& [e, c] : a) {
    while (ib != b.end() && ib->first < e) ++ib;
    if (ib == b.end() || e < ib->first || ib->second < c) return false;
  }
  return true;
}

// Non-truncating difference; requires b ⊑ a.
template <typename E>
Multiset<E> exact_sub(const Multiset<E>& a, const Multiset<E>& b) {
  if (!leq(b, a))
    throw PreconditionError("exact multiset difference would go negative");
  return a - b;
}

template <typename E>
Multiset<E> scale(const Multiset<E>& m, Count k) {
  Multiset<E> out;
  for (const auto& [e, c] : m) out.insert(e, checked_mul(c, k));
  return out;
}

// Renders as {{a, a, b}} with elements in canonical order.
template <typename E, typename Show>
std::string render(const Multiset<E>& m, Show show) {
  std::string out = "{{";
  bool first = true;
  for (const auto& [e, c] : m) {
    std::string s = show(e);
    for (Count i = 0; i < c; ++i) {
      if (!first) out += ", ";
      out += s;
      first = false;
    }
  }
  out += "}}";
  return out;
}

inline std::string render(const Multiset<std::string>& m) {
  return render(m, [](const std::string& s) { return s; });
}

}  // namespace eosnu
