#pragma once

#include "plumb/errors.hpp"
#include "plumb/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace plumb {

/// U^level (x) K, an element of Z^{>=0} x Char(G).
struct LeveledVector {
  int level = 0;
  CharVector k;

  friend bool operator==(const LeveledVector &, const LeveledVector &) = default;
  friend auto operator<=>(const LeveledVector &, const LeveledVector &) = default;
};

inline std::string to_string(const LeveledVector &x) {
  if (x.level == 0)
    return to_string(x.k);
  return "U^" + std::to_string(x.level) + "(x)" + to_string(x.k);
}

inline Grade leveled_degree(const IntersectionForm &q, const LeveledVector &x) {
  return leveled_degree(q, x.level, x.k);
}

/// Elements related to x by one application of the adjunction relation.
///
/// With 2n = <K,v> + m(v), adding 2PD[v] moves U^a (x) K to
/// U^{a+n} (x) (K + 2PD[v]) for either sign of n; subtracting is the inverse
/// move. Results with a negative level are dropped. Every neighbor has the
/// same degree 2a - (K^2 + |G|)/4 as x.
inline std::vector<LeveledVector> relation_neighbors(const IntersectionForm &q,
                                                     const LeveledVector &x) {
  std::vector<LeveledVector> out;
  for (int v = 0; v < q.size(); ++v) {
    const int m = static_cast<int>(q(v, v));
    const int up = (x.k[v] + m) / 2;
    if (x.level + up >= 0)
      out.push_back({x.level + up, add_2pd(q, x.k, v, +1)});
    const int down = (x.k[v] - m) / 2;
    if (x.level - down >= 0)
      out.push_back({x.level - down, add_2pd(q, x.k, v, -1)});
  }
  return out;
}

enum class ClassStatus {
  Closed,      ///< every member found; kill level exact
  Exceeds,     ///< a member above the level budget exists
  Truncated,   ///< exploration left the box B_{N+margin}; unresolved
};

inline std::string to_string(ClassStatus s) {
  switch (s) {
  case ClassStatus::Closed:
    return "closed";
  case ClassStatus::Exceeds:
    return "exceeds-budget";
  case ClassStatus::Truncated:
    return "truncated";
  }
  return "?";
}

struct ClassRecord {
  int id = 0;
  Grade degree;
  int max_level = 0;
  ClassStatus status = ClassStatus::Closed;
  LeveledVector representative;
  std::size_t members = 0;

  /// Kill level if known to be at most the budget.
  std::optional<int> kill_level() const {
    if (status == ClassStatus::Closed)
      return max_level;
    return std::nullopt;
  }
};

struct ClassTableConfig {
  int level_budget = 1; ///< N
  int margin = 1;       ///< explore inside B_{N + margin}
  std::size_t state_cap = 10'000'000;
};

/// Census of Ker U^{n+1}: n -> (degree -> rank).
using Census = std::map<int, std::map<Grade, int>>;

/// Equivalence classes of the dual model for one Spin^c structure.
///
/// Leaves (classes with no positive-level member) are found by exploring
/// the class of every level-0 vector of the initial box m(v)+2 <= k_v <= -m(v)
/// until either a positive-level member shows up or the class is exhausted.
/// Every class is U^j applied to a leaf, so the classes of U^j (x) K_leaf for
/// j = 0..N are then explored in full, stopping early only once a member
/// above level N proves the kill level exceeds the budget.
class ClassTable {
public:
  ClassTable(const IntersectionForm &q, const SpinCClass &t,
             ClassTableConfig config)
      : q_(&q), spinc_(t), config_(config) {
    q.require_negative_definite();
    if (config.level_budget < 0 || config.margin < 0)
      throw InputError("level budget and margin must be nonnegative");
    const int radius = config.level_budget + config.margin;
    for (int v = 0; v < q.size(); ++v)
      bound_.push_back(static_cast<int>(-q(v, v)) + 2 * radius);

    SpinCLattice lattice(q);
    // Leaf detection.
    Explorer leaves(*this, 0);
    for (const CharVector &k : enumerate_initial_box(q)) {
      if (q.size() > 0 && lattice.index_of_residue(lattice.residue(k)) !=
                              spinc_.index)
        continue;
      ++initial_box_members_;
      leaves.explore({0, k});
    }
    for (const auto &[id, rec] : leaves.records()) {
      if (rec.status == ClassStatus::Closed && rec.max_level == 0)
        leaf_vectors_.push_back(rec.representative.k);
      else if (rec.status == ClassStatus::Truncated)
        ++unresolved_leaves_;
    }
    std::sort(leaf_vectors_.begin(), leaf_vectors_.end());
    explored_states_ += leaves.states();

    // Census classes.
    Explorer census(*this, config.level_budget);
    for (int j = 0; j <= config.level_budget; ++j)
      for (const auto &k : leaf_vectors_)
        census.explore({j, k});
    explored_states_ += census.states();
    for (const auto &[id, rec] : census.records())
      classes_.push_back(rec);
    std::sort(classes_.begin(), classes_.end(),
              [](const ClassRecord &a, const ClassRecord &b) {
                return a.id < b.id;
              });
    for (std::size_t i = 0; i < classes_.size(); ++i)
      index_[classes_[i].id] = static_cast<int>(i);
    for (int j = 0; j <= config.level_budget; ++j)
      for (const auto &k : leaf_vectors_)
        seed_class_[{j, k}] = census.class_of({j, k});
  }

  const IntersectionForm &form() const noexcept { return *q_; }
  const SpinCClass &spinc() const noexcept { return spinc_; }
  const ClassTableConfig &config() const noexcept { return config_; }
  int level_budget() const noexcept { return config_.level_budget; }

  /// Classes of U^j (x) K_leaf, j <= N, ordered by discovery.
  const std::vector<ClassRecord> &classes() const noexcept { return classes_; }

  const ClassRecord &record(int id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw std::out_of_range("unknown class id " + std::to_string(id));
    return classes_[it->second];
  }

  /// Initial-box vectors of this Spin^c structure whose class has no
  /// positive-level member, in lexicographic order.
  const std::vector<CharVector> &leaves() const noexcept {
    return leaf_vectors_;
  }

  std::size_t initial_box_members() const noexcept {
    return initial_box_members_;
  }

  /// Classes whose exploration hit the box boundary before being resolved.
  std::size_t truncated_classes() const {
    std::size_t c = unresolved_leaves_;
    for (const auto &r : classes_)
      if (r.status == ClassStatus::Truncated)
        ++c;
    return c;
  }

  bool is_sound() const { return truncated_classes() == 0; }

  std::size_t explored_states() const noexcept { return explored_states_; }

  /// Class id of a seed U^j (x) K_leaf.
  std::optional<int> class_of_seed(const LeveledVector &x) const {
    auto it = seed_class_.find(x);
    if (it == seed_class_.end())
      return std::nullopt;
    return it->second;
  }

  /// Class of U (x) representative; degree goes up by exactly two.
  int u_shift(int id) const {
    const auto &rec = record(id);
    LeveledVector up{rec.representative.level + 1, rec.representative.k};
    auto target = class_of_seed(up);
    if (!target)
      throw ResourceError("U-shift of class " + std::to_string(id) +
                          " lies outside the explored region");
    if (record(*target).degree != rec.degree + Grade(2))
      throw std::logic_error("U-shift did not raise the degree by two");
    return *target;
  }

  /// Degree -> number of closed classes with kill level <= n.
  std::map<Grade, int> ker_u_pow_ranks(int n) const {
    if (n < 0 || n > config_.level_budget)
      throw InputError("Ker U^" + std::to_string(n + 1) +
                       " requested beyond the level budget N = " +
                       std::to_string(config_.level_budget));
    std::map<Grade, int> out;
    for (const auto &r : classes_)
      if (auto kill = r.kill_level(); kill && *kill <= n)
        ++out[r.degree];
    return out;
  }

  Census census() const {
    Census c;
    for (int n = 0; n <= config_.level_budget; ++n)
      c[n] = ker_u_pow_ranks(n);
    return c;
  }

private:
  struct KeyHash {
    std::size_t operator()(const std::string &s) const noexcept {
      return std::hash<std::string>{}(s);
    }
  };

  static std::string key(const LeveledVector &x) {
    std::string s;
    s.reserve(4 * (x.k.size() + 1));
    auto put = [&](int v) {
      s.append(reinterpret_cast<const char *>(&v), sizeof v);
    };
    put(x.level);
    for (int v : x.k.values())
      put(v);
    return s;
  }

  bool in_box(const CharVector &k) const {
    for (int i = 0; i < k.size(); ++i)
      if (k[i] > bound_[i] || k[i] < -bound_[i])
        return false;
    return true;
  }

  /// BFS with union-on-contact over the relation graph inside the box.
  class Explorer {
  public:
    Explorer(const ClassTable &table, int level_limit)
        : table_(table), level_limit_(level_limit) {}

    int explore(const LeveledVector &seed) {
      auto found = visited_.find(key(seed));
      if (found != visited_.end())
        return find(found->second);
      const IntersectionForm &q = *table_.q_;
      int id = next_id_++;
      parent_.push_back(id);
      ClassRecord rec;
      rec.id = id;
      rec.degree = leveled_degree(q, seed);
      rec.max_level = seed.level;
      rec.representative = seed;
      rec.members = 1;
      records_.emplace(id, rec);
      if (seed.level > level_limit_)
        records_[id].status = ClassStatus::Exceeds;
      visit(seed, id);

      std::deque<LeveledVector> queue{seed};
      while (!queue.empty()) {
        LeveledVector x = std::move(queue.front());
        queue.pop_front();
        for (auto &y : relation_neighbors(q, x)) {
          ClassRecord &cur = records_[find(id)];
          if (y.level > level_limit_) {
            cur.status = ClassStatus::Exceeds;
            cur.max_level = std::max(cur.max_level, y.level);
            return find(id);
          }
          if (!table_.in_box(y.k)) {
            if (cur.status == ClassStatus::Closed)
              cur.status = ClassStatus::Truncated;
            continue;
          }
          auto it = visited_.find(key(y));
          if (it != visited_.end()) {
            unite(id, it->second);
            continue;
          }
          ClassRecord &live = records_[find(id)];
          live.max_level = std::max(live.max_level, y.level);
          ++live.members;
          visit(y, id);
          queue.push_back(std::move(y));
        }
      }
      return find(id);
    }

    int class_of(const LeveledVector &x) {
      auto it = visited_.find(key(x));
      if (it == visited_.end())
        throw std::out_of_range("vector not explored: " + to_string(x));
      return find(it->second);
    }

    const ClassRecord &record(int id) { return records_.at(find(id)); }
    const std::map<int, ClassRecord> &records() const { return records_; }
    std::size_t states() const { return visited_.size(); }

  private:
    void visit(const LeveledVector &x, int id) {
      if (visited_.size() >= table_.config_.state_cap)
        throw ResourceError(
            "dual-model exploration exceeded the state cap of " +
            std::to_string(table_.config_.state_cap) + " states");
      visited_.emplace(key(x), id);
    }

    int find(int x) {
      while (parent_[x] != x)
        x = parent_[x] = parent_[parent_[x]];
      return x;
    }

    void unite(int a, int b) {
      a = find(a);
      b = find(b);
      if (a == b)
        return;
      if (b < a)
        std::swap(a, b);
      ClassRecord &keep = records_[a];
      const ClassRecord &gone = records_[b];
      if (keep.degree != gone.degree)
        throw std::logic_error("relation joined classes of different degree");
      keep.max_level = std::max(keep.max_level, gone.max_level);
      keep.members += gone.members;
      auto rank = [](ClassStatus s) {
        return s == ClassStatus::Exceeds ? 2
               : s == ClassStatus::Truncated ? 1
                                             : 0;
      };
      if (rank(gone.status) > rank(keep.status))
        keep.status = gone.status;
      records_.erase(b);
      parent_[b] = a;
    }

    const ClassTable &table_;
    int level_limit_;
    int next_id_ = 0;
    std::vector<int> parent_;
    std::map<int, ClassRecord> records_;
    std::unordered_map<std::string, int, KeyHash> visited_;
  };

  const IntersectionForm *q_;
  SpinCClass spinc_;
  ClassTableConfig config_;
  std::vector<int> bound_;
  std::vector<CharVector> leaf_vectors_;
  std::size_t unresolved_leaves_ = 0;
  std::size_t initial_box_members_ = 0;
  std::size_t explored_states_ = 0;
  std::vector<ClassRecord> classes_;
  std::map<int, int> index_;
  std::map<LeveledVector, int> seed_class_;
};

inline ClassTable build_classes(const IntersectionForm &q, const SpinCClass &t,
                                int level_budget, int margin,
                                std::size_t state_cap = 10'000'000) {
  return ClassTable(q, t, {level_budget, margin, state_cap});
}

inline std::map<Grade, int> ker_u_pow_ranks(const ClassTable &table, int n) {
  return table.ker_u_pow_ranks(n);
}

inline int u_shift(const ClassTable &table, int id) {
  return table.u_shift(id);
}

struct MarginCheck {
  bool stable = false;
  bool sound = false; ///< neither table had a truncated class
  Census at_margin;
  Census at_next_margin;
};

/// Compares Ker U^{n+1} censuses for n <= N at margins M and M+1.
inline MarginCheck check_margin_stability(const IntersectionForm &q,
                                          const SpinCClass &t, int level_budget,
                                          int margin,
                                          std::size_t state_cap = 10'000'000) {
  ClassTable a(q, t, {level_budget, margin, state_cap});
  ClassTable b(q, t, {level_budget, margin + 1, state_cap});
  MarginCheck out;
  out.at_margin = a.census();
  out.at_next_margin = b.census();
  out.stable = out.at_margin == out.at_next_margin;
  out.sound = a.is_sound() && b.is_sound();
  return out;
}

} // namespace plumb
