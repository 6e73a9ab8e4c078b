#pragma once

#include "plumb/errors.hpp"
#include "plumb/grade.hpp"
#include "plumb/graph.hpp"

#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace plumb {

using int128 = __int128;

namespace detail {

inline int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ResourceError("integer overflow in exact elimination");
  return r;
}

inline int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r))
    throw ResourceError("integer overflow in exact elimination");
  return r;
}

inline std::int64_t narrow(int128 x) {
  if (x > INT64_MAX || x < INT64_MIN)
    throw ResourceError("value does not fit in 64 bits");
  return static_cast<std::int64_t>(x);
}

inline int128 abs128(int128 x) { return x < 0 ? -x : x; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Builds a Grade from a 128-bit fraction, reducing first.
inline Grade make_grade(int128 num, int128 den) {
  int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Grade(narrow(num), narrow(den));
}

} // namespace detail

/// Dense square integer matrix, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  int size() const noexcept { return n_; }
  std::int64_t &operator()(int i, int j) { return data_[idx(i, j)]; }
  std::int64_t operator()(int i, int j) const { return data_[idx(i, j)]; }

  std::span<const std::int64_t> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }

  IntMatrix minor(int skip_row, int skip_col) const {
    IntMatrix m(n_ - 1);
    for (int i = 0, r = 0; i < n_; ++i) {
      if (i == skip_row)
        continue;
      for (int j = 0, c = 0; j < n_; ++j) {
        if (j == skip_col)
          continue;
        m(r, c++) = (*this)(i, j);
      }
      ++r;
    }
    return m;
  }

  friend bool operator==(const IntMatrix &, const IntMatrix &) = default;

private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  int n_ = 0;
  std::vector<std::int64_t> data_;
};

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
inline std::int64_t bareiss_determinant(const IntMatrix &a) {
  const int n = a.size();
  if (n == 0)
    return 1;
  std::vector<std::vector<int128>> m(n, std::vector<int128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i][j] = a(i, j);
  int sign = 1;
  int128 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0)
        return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = detail::checked_sub(detail::checked_mul(m[i][j], m[k][k]),
                                      detail::checked_mul(m[i][k], m[k][j])) /
                  prev;
    prev = m[k][k];
  }
  return detail::narrow(sign * m[n - 1][n - 1]);
}

/// Leading principal minors D_1..D_n by Bareiss elimination without
/// pivoting. Stops (returns a shorter list) after the first zero minor.
inline std::vector<std::int64_t> leading_minors(const IntMatrix &a) {
  const int n = a.size();
  std::vector<std::vector<int128>> m(n, std::vector<int128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i][j] = a(i, j);
  std::vector<std::int64_t> minors;
  int128 prev = 1;
  for (int k = 0; k < n; ++k) {
    minors.push_back(detail::narrow(m[k][k]));
    if (m[k][k] == 0)
      break;
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = detail::checked_sub(detail::checked_mul(m[i][j], m[k][k]),
                                      detail::checked_mul(m[i][k], m[k][j])) /
                  prev;
    prev = m[k][k];
  }
  return minors;
}

/// Determinant of the intersection form by leaf expansion:
/// det(G) = m(v) det(G - v) - det(G - v - w) for a leaf v with neighbor w,
/// and det(G) = m(v) det(G - v) for an isolated v. Independent of Bareiss.
inline std::int64_t tree_determinant(const PlumbingGraph &g) {
  if (g.size() > 64)
    throw ResourceError("tree expansion limited to 64 vertices");
  std::map<std::uint64_t, int128> memo;
  auto rec = [&](auto &self, std::uint64_t mask) -> int128 {
    if (mask == 0)
      return 1;
    if (auto it = memo.find(mask); it != memo.end())
      return it->second;
    int leaf = -1, nbr = -1;
    for (int v = 0; v < g.size() && leaf < 0; ++v) {
      if (!(mask >> v & 1))
        continue;
      int deg = 0, last = -1;
      for (int w : g.neighbors(v))
        if (mask >> w & 1) {
          ++deg;
          last = w;
        }
      if (deg <= 1) {
        leaf = v;
        nbr = last;
      }
    }
    std::uint64_t rest = mask & ~(std::uint64_t{1} << leaf);
    int128 value = detail::checked_mul(g.weight(leaf), self(self, rest));
    if (nbr >= 0)
      value = detail::checked_sub(
          value, self(self, rest & ~(std::uint64_t{1} << nbr)));
    memo.emplace(mask, value);
    return value;
  };
  std::uint64_t all =
      g.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.size()) - 1;
  return detail::narrow(rec(rec, all));
}

/// The intersection form Q of a plumbing together with its exact inverse.
///
/// Q_ii = m(v_i), Q_ij = 1 on edges. When det Q != 0 the adjugate is kept as
/// an integer matrix, so Qinv = adjugate / det exactly.
class IntersectionForm {
public:
  explicit IntersectionForm(const PlumbingGraph &g) : q_(g.size()) {
    const int n = g.size();
    for (int v = 0; v < n; ++v)
      q_(v, v) = g.weight(v);
    for (auto [a, b] : g.edges())
      q_(a, b) = q_(b, a) = 1;
    det_ = bareiss_determinant(q_);
    auto minors = leading_minors(q_);
    negative_definite_ = static_cast<int>(minors.size()) == n;
    for (int k = 0; k < static_cast<int>(minors.size()); ++k) {
      bool want_negative = (k % 2) == 0; // D_1 < 0, D_2 > 0, ...
      if (minors[k] == 0 || (minors[k] < 0) != want_negative)
        negative_definite_ = false;
    }
    if (det_ != 0) {
      adjugate_ = IntMatrix(n);
      if (n == 1) {
        (*adjugate_)(0, 0) = 1;
      } else {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            std::int64_t c = bareiss_determinant(q_.minor(j, i));
            (*adjugate_)(i, j) = ((i + j) % 2 == 0) ? c : -c;
          }
      }
    }
  }

  int size() const noexcept { return q_.size(); }
  const IntMatrix &matrix() const noexcept { return q_; }
  std::int64_t operator()(int i, int j) const { return q_(i, j); }
  std::int64_t determinant() const noexcept { return det_; }
  bool is_degenerate() const noexcept { return det_ == 0; }

  /// All leading principal minors have sign (-1)^k.
  bool is_negative_definite() const noexcept { return negative_definite_; }

  /// det(Q) * Qinv; present iff det != 0.
  const std::optional<IntMatrix> &adjugate() const noexcept {
    return adjugate_;
  }

  /// Exact entry of Q^{-1}.
  Grade inverse(int i, int j) const {
    require_nondegenerate();
    return detail::make_grade((*adjugate_)(i, j), det_);
  }

  /// x^T Q^{-1} y for integer vectors (evaluations on the vertices).
  Grade dual_pairing(std::span<const int> x, std::span<const int> y) const {
    require_nondegenerate();
    const int n = size();
    int128 acc = 0;
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0)
        continue;
      int128 row = 0;
      for (int j = 0; j < n; ++j)
        row += static_cast<int128>((*adjugate_)(i, j)) * y[j];
      acc += row * x[i];
    }
    return detail::make_grade(acc, det_);
  }

  void require_nondegenerate() const {
    if (det_ == 0)
      throw DomainError("the intersection form is degenerate (det Q = 0)");
  }

  void require_negative_definite() const {
    if (!negative_definite_)
      throw DomainError(
          "the intersection form is not negative definite; the plumbing "
          "does not satisfy the negative-definite graph hypothesis");
  }

private:
  IntMatrix q_;
  std::int64_t det_ = 1;
  bool negative_definite_ = true;
  std::optional<IntMatrix> adjugate_;
};

inline IntersectionForm intersection_form(const PlumbingGraph &g) {
  return IntersectionForm(g);
}

enum class ValidityRegime { Exact, EvenPartOnly, OutsideTheorems };

inline std::string to_string(ValidityRegime r) {
  switch (r) {
  case ValidityRegime::Exact:
    return "exact";
  case ValidityRegime::EvenPartOnly:
    return "even-part-only";
  case ValidityRegime::OutsideTheorems:
    return "outside-theorems";
  }
  return "?";
}

inline ValidityRegime regime_for_bad_count(std::size_t bad) {
  if (bad <= 1)
    return ValidityRegime::Exact;
  if (bad == 2)
    return ValidityRegime::EvenPartOnly;
  return ValidityRegime::OutsideTheorems;
}

struct GraphReport {
  bool is_forest = true;
  bool is_negative_definite = false;
  std::vector<Vertex> bad_vertices;
  ValidityRegime validity_regime = ValidityRegime::Exact;
  std::optional<std::int64_t> h1_order; ///< |det Q|, absent when degenerate
};

inline GraphReport analyze(const PlumbingGraph &g) {
  IntersectionForm q(g);
  GraphReport r;
  r.is_negative_definite = q.is_negative_definite();
  r.bad_vertices = g.bad_vertices();
  r.validity_regime = regime_for_bad_count(r.bad_vertices.size());
  if (!q.is_degenerate())
    r.h1_order = std::llabs(q.determinant());
  return r;
}

} // namespace plumb
