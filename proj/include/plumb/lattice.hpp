#pragma once

#include "plumb/errors.hpp"
#include "plumb/grade.hpp"
#include "plumb/intersection_form.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace plumb {

/// A characteristic vector K, stored by its evaluations k_i = <K, v_i>.
class CharVector {
public:
  CharVector() = default;
  explicit CharVector(std::vector<int> k) : k_(std::move(k)) {}
  CharVector(std::initializer_list<int> k) : k_(k) {}

  int size() const noexcept { return static_cast<int>(k_.size()); }
  int operator[](int i) const { return k_[i]; }
  int &operator[](int i) { return k_[i]; }
  const std::vector<int> &values() const noexcept { return k_; }
  std::span<const int> span() const noexcept { return k_; }

  CharVector operator-() const {
    CharVector out = *this;
    for (int &x : out.k_)
      x = -x;
    return out;
  }

  friend auto operator<=>(const CharVector &, const CharVector &) = default;
  friend bool operator==(const CharVector &, const CharVector &) = default;

private:
  std::vector<int> k_;
};

/// Tuple notation "(a, b, c)".
inline std::string to_string(const CharVector &k) {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < k.size(); ++i)
    out << (i ? ", " : "") << k[i];
  out << ")";
  return out.str();
}

/// Parses "a,b,c", "(a, b, c)" or whitespace-separated integers.
inline CharVector parse_char_vector(const std::string &text) {
  std::string s;
  for (char c : text)
    s += (c == ',' || c == '(' || c == ')' || c == '[' || c == ']') ? ' ' : c;
  std::istringstream in(s);
  std::vector<int> k;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != tok.size())
      throw InputError("malformed vector entry '" + tok + "' in '" + text +
                       "'");
    k.push_back(v);
  }
  return CharVector(std::move(k));
}

struct CharVectorHash {
  std::size_t operator()(const CharVector &k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : k.values()) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// k_i == m(v_i) mod 2 for every vertex.
inline bool is_characteristic(const IntersectionForm &q, const CharVector &k) {
  if (k.size() != q.size())
    return false;
  for (int i = 0; i < k.size(); ++i)
    if (((k[i] - q(i, i)) % 2) != 0)
      return false;
  return true;
}

inline void require_characteristic(const IntersectionForm &q,
                                   const CharVector &k) {
  if (k.size() != q.size())
    throw InputError("vector " + to_string(k) + " has " +
                     std::to_string(k.size()) + " entries, graph has " +
                     std::to_string(q.size()) + " vertices");
  if (!is_characteristic(q, k))
    throw InputError("vector " + to_string(k) +
                     " is not characteristic: <K,v> must have the parity of "
                     "m(v) at every vertex");
}

/// K + sign * 2PD[v]: adds 2 * sign * (column v of Q).
inline CharVector add_2pd(const IntersectionForm &q, CharVector k, Vertex v,
                          int sign = +1) {
  for (int i = 0; i < k.size(); ++i)
    k[i] += 2 * sign * static_cast<int>(q(i, v));
  return k;
}

/// K^2 = k^T Q^{-1} k, exact.
inline Grade square(const IntersectionForm &q, const CharVector &k) {
  return q.dual_pairing(k.span(), k.span());
}

/// (K^2 + |G|) / 4, the quantity maximised by the d-invariant.
inline Grade renormalized_length(const IntersectionForm &q,
                                 const CharVector &k) {
  return (square(q, k) + Grade(q.size())) / Grade(4);
}

/// Degree of the leveled vector U^level (x) K in the dual model:
/// 2 * level - (K^2 + |G|) / 4.
inline Grade leveled_degree(const IntersectionForm &q, int level,
                            const CharVector &k) {
  return Grade(2 * level) - renormalized_length(q, k);
}

// ---------------------------------------------------------------------------
// Spin^c structures: orbits of Char(G) under the lattice 2Q Z^n.

struct SpinCClass {
  int index = 0;
  std::vector<std::int64_t> residue;

  friend bool operator==(const SpinCClass &a, const SpinCClass &b) {
    return a.index == b.index && a.residue == b.residue;
  }
};

/// Triangular (Hermite) basis of 2Q Z^n and the canonical residue map.
///
/// Basis vector b_i vanishes in coordinates < i and has b_i[i] = g_i > 0.
/// Reducing k against b_0, b_1, ... in order lands every coordinate in
/// [0, g_i); two vectors share a residue iff they differ by an element of
/// 2Q Z^n. The g_i are even and, on characteristic vectors, residues run
/// over |det Q| values indexed in lexicographic order.
class SpinCLattice {
public:
  explicit SpinCLattice(const IntersectionForm &q) : n_(q.size()) {
    q.require_nondegenerate();
    for (int i = 0; i < n_; ++i)
      parity_.push_back(((q(i, i) % 2) + 2) % 2);
    if (n_ == 0)
      return;
    const int128 modulus = (int128{1} << n_) * std::llabs(q.determinant());
    auto mod = [&](int128 x) {
      x %= modulus;
      return x < 0 ? x + modulus : x;
    };

    std::vector<std::vector<int128>> active;
    for (int i = 0; i < n_; ++i) {
      std::vector<int128> row(n_);
      for (int j = 0; j < n_; ++j)
        row[j] = mod(2 * static_cast<int128>(q(i, j)));
      active.push_back(std::move(row));
    }
    basis_.assign(n_, std::vector<std::int64_t>(n_, 0));
    for (int col = 0; col < n_; ++col) {
      std::vector<int128> pivot(n_, 0);
      pivot[col] = modulus;
      std::vector<std::vector<int128>> rest;
      for (auto &row : active) {
        if (row[col] != 0) {
          auto [g, s, t] = ext_gcd(pivot[col], row[col]);
          int128 a = row[col] / g, b = pivot[col] / g;
          std::vector<int128> np(n_), nr(n_);
          for (int j = col; j < n_; ++j) {
            np[j] = s * pivot[j] + t * row[j];
            nr[j] = a * pivot[j] - b * row[j];
          }
          for (int j = col + 1; j < n_; ++j) {
            np[j] = mod(np[j]);
            nr[j] = mod(nr[j]);
          }
          pivot = std::move(np);
          row = std::move(nr);
        }
        if (std::any_of(row.begin(), row.end(),
                        [](int128 x) { return x != 0; }))
          rest.push_back(std::move(row));
      }
      if (pivot[col] < 0)
        for (auto &x : pivot)
          x = -x;
      for (int j = col + 1; j < n_; ++j)
        pivot[j] = mod(pivot[j]);
      for (int j = 0; j < n_; ++j)
        basis_[col][j] = detail::narrow(pivot[j]);
      active = std::move(rest);
    }
    for (int i = 0; i < n_; ++i)
      radix_.push_back(basis_[i][i] / 2);
  }

  int size() const noexcept { return n_; }

  /// Diagonal of the triangular basis.
  std::vector<std::int64_t> pivots() const {
    std::vector<std::int64_t> out;
    for (int i = 0; i < n_; ++i)
      out.push_back(basis_[i][i]);
    return out;
  }

  const std::vector<std::vector<std::int64_t>> &basis() const noexcept {
    return basis_;
  }

  /// Number of Spin^c structures, equal to |det Q|.
  std::int64_t count() const {
    std::int64_t c = 1;
    for (auto r : radix_)
      c *= r;
    return c;
  }

  std::vector<std::int64_t> residue(const CharVector &k) const {
    std::vector<int128> r(k.values().begin(), k.values().end());
    for (int i = 0; i < n_; ++i) {
      int128 g = basis_[i][i];
      int128 quo = r[i] / g;
      if (r[i] % g < 0)
        --quo;
      if (quo != 0)
        for (int j = i; j < n_; ++j)
          r[j] -= quo * basis_[i][j];
    }
    std::vector<std::int64_t> out;
    for (auto x : r)
      out.push_back(detail::narrow(x));
    return out;
  }

  std::int64_t index_of_residue(const std::vector<std::int64_t> &r) const {
    std::int64_t idx = 0;
    for (int i = 0; i < n_; ++i)
      idx = idx * radix_[i] + (r[i] - parity_[i]) / 2;
    return idx;
  }

  std::vector<std::int64_t> residue_of_index(std::int64_t idx) const {
    std::vector<std::int64_t> r(n_);
    for (int i = n_ - 1; i >= 0; --i) {
      r[i] = 2 * (idx % radix_[i]) + parity_[i];
      idx /= radix_[i];
    }
    return r;
  }

  SpinCClass classify(const CharVector &k) const {
    auto r = residue(k);
    return {static_cast<int>(index_of_residue(r)), std::move(r)};
  }

  SpinCClass class_at(std::int64_t index) const {
    if (index < 0 || index >= count())
      throw InputError("Spin^c index " + std::to_string(index) +
                       " out of range 0.." + std::to_string(count() - 1));
    return {static_cast<int>(index), residue_of_index(index)};
  }

private:
  struct Egcd {
    int128 g, s, t;
  };
  static Egcd ext_gcd(int128 a, int128 b) {
    int128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      int128 quo = old_r / r;
      int128 tmp = old_r - quo * r;
      old_r = r;
      r = tmp;
      tmp = old_s - quo * s;
      old_s = s;
      s = tmp;
      tmp = old_t - quo * t;
      old_t = t;
      t = tmp;
    }
    if (old_r < 0)
      return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
  }

  int n_;
  std::vector<std::vector<std::int64_t>> basis_;
  std::vector<std::int64_t> radix_;
  std::vector<int> parity_;
};

inline SpinCClass spinc_of(const IntersectionForm &q, const CharVector &k) {
  return SpinCLattice(q).classify(k);
}

/// All |det Q| classes in lexicographic residue order.
inline std::vector<SpinCClass> enumerate_spinc(const IntersectionForm &q) {
  q.require_nondegenerate();
  SpinCLattice lat(q);
  std::vector<SpinCClass> out;
  for (std::int64_t i = 0; i < lat.count(); ++i)
    out.push_back(lat.class_at(i));
  return out;
}

// ---------------------------------------------------------------------------
// Streaming enumeration of characteristic vectors in coordinate boxes.

/// Characteristic vectors with lo_i <= k_i <= hi_i, where the bounds already
/// carry the right parity. Iteration is lexicographic and allocation-free
/// beyond the current vector.
class CharBox {
public:
  CharBox(std::vector<int> lo, std::vector<int> hi)
      : lo_(std::move(lo)), hi_(std::move(hi)) {}

  class iterator {
  public:
    using value_type = CharVector;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(const CharBox *box) : box_(box) {
      for (std::size_t i = 0; i < box->lo_.size(); ++i)
        if (box->lo_[i] > box->hi_[i])
          done_ = true;
      current_ = CharVector(box->lo_);
    }
    const CharVector &operator*() const { return current_; }
    const CharVector *operator->() const { return &current_; }
    iterator &operator++() {
      int i = current_.size() - 1;
      for (; i >= 0; --i) {
        if (current_[i] + 2 <= box_->hi_[i]) {
          current_[i] += 2;
          break;
        }
        current_[i] = box_->lo_[i];
      }
      if (i < 0)
        done_ = true;
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

  private:
    const CharBox *box_ = nullptr;
    CharVector current_;
    bool done_ = false;
  };

  iterator begin() const { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

  /// Number of vectors in the box.
  std::uint64_t count() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      if (lo_[i] > hi_[i])
        return 0;
      c *= static_cast<std::uint64_t>((hi_[i] - lo_[i]) / 2 + 1);
    }
    return c;
  }

  bool contains(const CharVector &k) const {
    for (std::size_t i = 0; i < lo_.size(); ++i)
      if (k[i] < lo_[i] || k[i] > hi_[i])
        return false;
    return true;
  }

  const std::vector<int> &lower() const noexcept { return lo_; }
  const std::vector<int> &upper() const noexcept { return hi_; }

private:
  std::vector<int> lo_, hi_;
};

/// m(v) + 2 <= k_v <= -m(v): the starting box of full paths, with
/// prod(-m(v)) members.
inline CharBox enumerate_initial_box(const IntersectionForm &q) {
  q.require_negative_definite();
  std::vector<int> lo, hi;
  for (int i = 0; i < q.size(); ++i) {
    int m = static_cast<int>(q(i, i));
    lo.push_back(m + 2);
    hi.push_back(-m);
  }
  return CharBox(std::move(lo), std::move(hi));
}

/// B_n: |k_v| <= -m(v) + 2n.
inline CharBox enumerate_box(const IntersectionForm &q, int n) {
  q.require_negative_definite();
  if (n < 0)
    throw InputError("box radius must be nonnegative");
  std::vector<int> lo, hi;
  for (int i = 0; i < q.size(); ++i) {
    int m = static_cast<int>(q(i, i));
    lo.push_back(m - 2 * n);
    hi.push_back(-m + 2 * n);
  }
  return CharBox(std::move(lo), std::move(hi));
}

} // namespace plumb
