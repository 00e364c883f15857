#pragma once

// Semi-decision of triviality for finitely presented groups: abelianization,
// homomorphisms into small finite groups, and HLT coset enumeration.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "acfx/errors.hpp"
#include "acfx/presentation.hpp"
#include "acfx/word.hpp"

namespace acfx {

// ---------------------------------------------------------------------------
// Coset enumeration

struct CosetStats {
  std::size_t defined = 0;       // cosets ever defined, including the first
  std::size_t max_live = 0;
  std::size_t coincidences = 0;  // cosets killed by coincidence
  std::size_t compactions = 0;
};

struct CosetResult {
  bool closed = false;
  std::size_t count = 0;  // group order when closed
  CosetStats stats;
};

inline constexpr std::size_t default_coset_limit = std::size_t{1} << 20;

namespace detail {

// Coset table for the trivial subgroup. Column 2(g-1) is x_g, 2(g-1)+1 its
// inverse; the inverse column of c is c ^ 1. Dead rows forward to their
// representative through `forward_`.
class CosetTable {
 public:
  CosetTable(int gen_count, std::size_t limit)
      : cols_(static_cast<std::size_t>(2 * gen_count)), limit_(limit) {
    add_row();
  }

  // Returns false when the live-coset limit is hit.
  bool run(std::vector<std::vector<int>> relators) {
    std::erase_if(relators, [](const auto& r) { return r.empty(); });
    for (std::size_t c = 0; c < rows(); ++c) {
      if (!live(c)) continue;
      for (const auto& r : relators) {
        if (!scan_and_fill(static_cast<int>(c), r)) return false;
        if (!live(c)) break;
      }
      if (live(c)) {
        for (std::size_t x = 0; x < cols_; ++x) {
          if (entry(static_cast<int>(c), x) < 0 && !define(static_cast<int>(c), x)) return false;
        }
      }
      if (live_ * 2 < rows() && rows() > 1024) c = compact(c);
    }
    return true;
  }

  std::size_t live_count() const noexcept { return live_; }
  const CosetStats& stats() const noexcept { return stats_; }

 private:
  std::size_t rows() const noexcept { return forward_.size(); }
  bool live(std::size_t c) const noexcept { return forward_[c] == static_cast<int>(c); }
  int& entry(int c, std::size_t x) { return table_[static_cast<std::size_t>(c) * cols_ + x]; }

  void add_row() {
    table_.insert(table_.end(), cols_, -1);
    forward_.push_back(static_cast<int>(forward_.size()));
    ++live_;
    ++stats_.defined;
    stats_.max_live = std::max(stats_.max_live, live_);
  }

  bool define(int c, std::size_t x) {
    if (live_ >= limit_) return false;
    const int d = static_cast<int>(rows());
    add_row();
    entry(c, x) = d;
    entry(d, x ^ 1) = c;
    return true;
  }

  // Traces w from c forwards and backwards, defining cosets until the
  // relator closes; a mismatch is a coincidence.
  bool scan_and_fill(int c, const std::vector<int>& w) {
    int f = c, b = c;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    auto col = [&](std::ptrdiff_t k) { return static_cast<std::size_t>(w[static_cast<std::size_t>(k)]); };
    for (;;) {
      while (i <= j && entry(f, col(i)) >= 0) f = entry(f, col(i++));
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && entry(b, col(j) ^ 1) >= 0) b = entry(b, col(j--) ^ 1);
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        entry(f, col(i)) = b;
        entry(b, col(i) ^ 1) = f;
        return true;
      }
      if (!define(f, col(i))) return false;
    }
  }

  int rep(int c) {
    int r = c;
    while (forward_[static_cast<std::size_t>(r)] != r) r = forward_[static_cast<std::size_t>(r)];
    while (forward_[static_cast<std::size_t>(c)] != r) {
      int next = forward_[static_cast<std::size_t>(c)];
      forward_[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(int k, int l) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (l < k) std::swap(k, l);
    forward_[static_cast<std::size_t>(l)] = k;
    --live_;
    ++stats_.coincidences;
    queue_.push_back(l);
  }

  void coincidence(int a, int b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      const int g = queue_[q];
      for (std::size_t x = 0; x < cols_; ++x) {
        const int d = entry(g, x);
        if (d < 0) continue;
        if (entry(d, x ^ 1) == g) entry(d, x ^ 1) = -1;
        const int mu = rep(g);
        const int nu = rep(d);
        if (entry(mu, x) >= 0) {
          merge(nu, entry(mu, x));
        } else if (entry(nu, x ^ 1) >= 0) {
          merge(mu, entry(nu, x ^ 1));
        } else {
          entry(mu, x) = nu;
          entry(nu, x ^ 1) = mu;
        }
      }
    }
    queue_.clear();
  }

  // Drops dead rows. Returns the new index of the last live row at or before
  // `c` (wrapping below zero when there is none) so the scan resumes after it.
  std::size_t compact(std::size_t c) {
    std::vector<int> renumber(rows(), -1);
    int next = 0;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (live(r)) renumber[r] = next++;
    }
    std::vector<int> table;
    table.reserve(static_cast<std::size_t>(next) * cols_);
    for (std::size_t r = 0; r < rows(); ++r) {
      if (!live(r)) continue;
      for (std::size_t x = 0; x < cols_; ++x) {
        int e = entry(static_cast<int>(r), x);
        table.push_back(e < 0 ? -1 : renumber[static_cast<std::size_t>(rep(e))]);
      }
    }
    std::size_t new_c = static_cast<std::size_t>(-1);
    for (std::size_t r = 0; r <= c; ++r) {
      if (renumber[r] >= 0) new_c = static_cast<std::size_t>(renumber[r]);
    }
    table_ = std::move(table);
    forward_.resize(static_cast<std::size_t>(next));
    std::iota(forward_.begin(), forward_.end(), 0);
    ++stats_.compactions;
    return new_c;
  }

  std::size_t cols_;
  std::size_t limit_;
  std::vector<int> table_;
  std::vector<int> forward_;
  std::vector<int> queue_;
  std::size_t live_ = 0;
  CosetStats stats_;
};

inline std::vector<std::vector<int>> relator_columns(const Presentation& p) {
  std::vector<std::vector<int>> out;
  for (const Word& r : p.relators()) {
    std::vector<int> cols;
    for (Letter l : r) cols.push_back(l.rank());
    out.push_back(std::move(cols));
  }
  return out;
}

}  // namespace detail

/// Enumerates the cosets of the trivial subgroup (HLT with coincidence
/// processing). Closed{count} gives the group order; otherwise `limit` live
/// cosets were reached.
inline CosetResult coset_enumerate(const Presentation& p, std::size_t limit = default_coset_limit) {
  if (limit < 1) throw InvalidArgument("coset limit must be >= 1");
  if (p.generator_count() == 0) return {true, 1, {1, 1, 0, 0}};
  detail::CosetTable table(p.generator_count(), limit);
  bool closed = table.run(detail::relator_columns(p));
  return {closed, closed ? table.live_count() : 0, table.stats()};
}

// ---------------------------------------------------------------------------
// Finite targets

using Permutation = std::vector<int>;  // images of 0..d-1

/// A finite group as a multiplication table over elements 0..order-1 with
/// element 0 the identity. Permutation groups keep their permutations for
/// display.
class FiniteGroup {
 public:
  static FiniteGroup symmetric(int degree) {
    std::vector<Permutation> perms;
    Permutation p(static_cast<std::size_t>(degree));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return from_permutations("S" + std::to_string(degree), std::move(perms));
  }

  static FiniteGroup alternating(int degree) {
    std::vector<Permutation> perms;
    Permutation p(static_cast<std::size_t>(degree));
    std::iota(p.begin(), p.end(), 0);
    do {
      if (parity(p) == 0) perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return from_permutations("A" + std::to_string(degree), std::move(perms));
  }

  /// `perms` must be closed under composition; the identity is moved first.
  static FiniteGroup from_permutations(std::string name, std::vector<Permutation> perms) {
    if (perms.empty()) throw InvalidArgument("empty permutation group");
    const std::size_t d = perms.front().size();
    Permutation id(d);
    std::iota(id.begin(), id.end(), 0);
    auto it = std::find(perms.begin(), perms.end(), id);
    if (it == perms.end()) throw InvalidArgument(name + ": identity missing");
    std::rotate(perms.begin(), it, it + 1);
    std::map<Permutation, int> index;
    for (std::size_t k = 0; k < perms.size(); ++k) index[perms[k]] = static_cast<int>(k);
    if (index.size() != perms.size()) throw InvalidArgument(name + ": repeated permutation");

    FiniteGroup g;
    g.name_ = std::move(name);
    g.order_ = perms.size();
    g.mul_.resize(g.order_ * g.order_);
    for (std::size_t a = 0; a < g.order_; ++a) {
      for (std::size_t b = 0; b < g.order_; ++b) {
        // Left-to-right composition: apply a, then b.
        Permutation c(d);
        for (std::size_t k = 0; k < d; ++k) c[k] = perms[b][static_cast<std::size_t>(perms[a][k])];
        auto f = index.find(c);
        if (f == index.end()) throw InvalidArgument(g.name_ + ": not closed under composition");
        g.mul_[a * g.order_ + b] = f->second;
      }
    }
    g.perms_ = std::move(perms);
    g.finish();
    return g;
  }

  /// Explicit Cayley table. Identity, inverses and closure are checked in
  /// full; associativity on a fixed pseudo-random sample of triples.
  static FiniteGroup from_table(std::string name, const std::vector<std::vector<int>>& table) {
    const std::size_t m = table.size();
    if (m == 0) throw InvalidArgument(name + ": empty table");
    FiniteGroup g;
    g.name_ = std::move(name);
    g.order_ = m;
    g.mul_.resize(m * m);
    for (std::size_t a = 0; a < m; ++a) {
      if (table[a].size() != m) throw InvalidArgument(g.name_ + ": table not square");
      for (std::size_t b = 0; b < m; ++b) {
        int v = table[a][b];
        if (v < 0 || static_cast<std::size_t>(v) >= m) throw InvalidArgument(g.name_ + ": entry out of range");
        g.mul_[a * m + b] = v;
      }
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (g.mul(0, static_cast<int>(a)) != static_cast<int>(a) || g.mul(static_cast<int>(a), 0) != static_cast<int>(a)) {
        throw InvalidArgument(g.name_ + ": element 0 is not the identity");
      }
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(m) - 1);
    const std::size_t samples = std::min<std::size_t>(m * m * m, 100'000);
    for (std::size_t s = 0; s < samples; ++s) {
      int a = pick(rng), b = pick(rng), c = pick(rng);
      if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
        throw InvalidArgument(g.name_ + ": multiplication is not associative");
      }
    }
    g.finish();
    return g;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t order() const noexcept { return order_; }
  int mul(int a, int b) const noexcept { return mul_[static_cast<std::size_t>(a) * order_ + static_cast<std::size_t>(b)]; }
  int inverse(int a) const noexcept { return inv_[static_cast<std::size_t>(a)]; }
  static constexpr int identity() noexcept { return 0; }

  /// Cycle notation on points 1..d ("()" for the identity); "e<k>" for
  /// table-defined groups.
  std::string element_name(int e) const {
    if (perms_.empty()) return "e" + std::to_string(e);
    const Permutation& p = perms_[static_cast<std::size_t>(e)];
    std::string out;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t s = 0; s < p.size(); ++s) {
      if (seen[s] || p[s] == static_cast<int>(s)) continue;
      out += "(";
      std::size_t k = s;
      bool first = true;
      while (!seen[k]) {
        seen[k] = true;
        if (!first) out += " ";
        out += std::to_string(k + 1);
        first = false;
        k = static_cast<std::size_t>(p[k]);
      }
      out += ")";
    }
    return out.empty() ? "()" : out;
  }

 private:
  static int parity(const Permutation& p) {
    int inversions = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      for (std::size_t b = a + 1; b < p.size(); ++b) inversions += p[a] > p[b];
    }
    return inversions & 1;
  }

  void finish() {
    inv_.assign(order_, -1);
    for (std::size_t a = 0; a < order_; ++a) {
      for (std::size_t b = 0; b < order_; ++b) {
        if (mul(static_cast<int>(a), static_cast<int>(b)) == 0) {
          inv_[a] = static_cast<int>(b);
          break;
        }
      }
      if (inv_[a] < 0) throw InvalidArgument(name_ + ": element without inverse");
    }
  }

  std::string name_;
  std::size_t order_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<Permutation> perms_;
};

/// S2, S3, S4, S5, A5.
inline std::vector<FiniteGroup> default_quotient_battery() {
  return {FiniteGroup::symmetric(2), FiniteGroup::symmetric(3), FiniteGroup::symmetric(4),
          FiniteGroup::symmetric(5), FiniteGroup::alternating(5)};
}

// ---------------------------------------------------------------------------
// Homomorphism search

namespace detail {

// Backtracking over generator images in order x_1, x_2, ...; each relator
// is checked as soon as its largest generator has an image.
class HomSearch {
 public:
  HomSearch(const Presentation& p, const FiniteGroup& q) : q_(q), n_(p.generator_count()) {
    checks_.resize(static_cast<std::size_t>(n_) + 1);
    for (const Word& r : p.relators()) {
      std::vector<std::pair<int, bool>> letters;
      for (Letter l : r) letters.emplace_back(l.generator() - 1, l.sign() < 0);
      checks_[static_cast<std::size_t>(r.max_generator())].push_back(std::move(letters));
    }
    images_.assign(static_cast<std::size_t>(n_), 0);
  }

  /// Number of homomorphisms with the first generator's image fixed (or all,
  /// when `first` is empty).
  std::uint64_t count(std::optional<int> first = std::nullopt) {
    std::uint64_t total = 0;
    visit(0, first, [&] {
      ++total;
      return false;
    });
    return total;
  }

  /// First homomorphism with a non-identity image, in lexicographic order
  /// of image tuples.
  std::optional<std::vector<int>> first_nontrivial() {
    std::optional<std::vector<int>> found;
    visit(0, std::nullopt, [&] {
      if (std::any_of(images_.begin(), images_.end(), [](int e) { return e != 0; })) {
        found = images_;
        return true;
      }
      return false;
    });
    return found;
  }

 private:
  bool holds(std::size_t level) const {
    for (const auto& r : checks_[level]) {
      int v = 0;
      for (auto [g, inv] : r) {
        int e = images_[static_cast<std::size_t>(g)];
        v = q_.mul(v, inv ? q_.inverse(e) : e);
      }
      if (v != 0) return false;
    }
    return true;
  }

  // Returns true to stop.
  template <typename Fn>
  bool visit(int g, std::optional<int> first, Fn&& leaf) {
    if (g == n_) return leaf();
    const int lo = (g == 0 && first) ? *first : 0;
    const int hi = (g == 0 && first) ? *first + 1 : static_cast<int>(q_.order());
    for (int e = lo; e < hi; ++e) {
      images_[static_cast<std::size_t>(g)] = e;
      if (holds(static_cast<std::size_t>(g) + 1) && visit(g + 1, first, leaf)) return true;
    }
    return false;
  }

 public:
  bool root_holds() const { return holds(0); }

 private:
  const FiniteGroup& q_;
  int n_;
  std::vector<std::vector<std::vector<std::pair<int, bool>>>> checks_;  // by max generator
  std::vector<int> images_;
};

}  // namespace detail

/// |Hom(G, Q)| for the group G presented by p. With workers > 1 the search
/// is split over the first generator's image; the sum is deterministic.
inline std::uint64_t count_homomorphisms(const Presentation& p, const FiniteGroup& q, unsigned workers = 1) {
  detail::HomSearch root(p, q);
  if (!root.root_holds()) return 0;
  if (p.generator_count() == 0) return 1;
  if (workers <= 1) return root.count();
  std::vector<std::future<std::uint64_t>> parts;
  std::vector<std::uint64_t> sums(q.order(), 0);
  for (std::size_t start = 0; start < q.order(); start += workers) {
    parts.clear();
    for (std::size_t e = start; e < std::min(q.order(), start + workers); ++e) {
      parts.push_back(std::async(std::launch::async, [&p, &q, e] {
        detail::HomSearch s(p, q);
        return s.count(static_cast<int>(e));
      }));
    }
    for (std::size_t k = 0; k < parts.size(); ++k) sums[start + k] = parts[k].get();
  }
  return std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
}

struct QuotientWitness {
  std::string target;
  std::vector<int> images;       // element indices, one per generator
  std::vector<std::string> names;  // cycle notation

  /// "S2:x=(),y=(1 2)"
  std::string to_string(int gen_count) const {
    const Alphabet a = alphabet_for(gen_count);
    std::string out = target + ":";
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (k > 0) out += ",";
      out += generator_char(static_cast<int>(k) + 1, a);
      out += "=" + names[k];
    }
    return out;
  }
};

inline std::optional<QuotientWitness> find_nontrivial_quotient(const Presentation& p,
                                                               const std::vector<FiniteGroup>& targets) {
  for (const FiniteGroup& q : targets) {
    detail::HomSearch s(p, q);
    if (!s.root_holds()) continue;
    if (auto images = s.first_nontrivial()) {
      QuotientWitness w{q.name(), *images, {}};
      for (int e : *images) w.names.push_back(q.element_name(e));
      return w;
    }
  }
  return std::nullopt;
}

inline std::optional<QuotientWitness> find_nontrivial_quotient(const Presentation& p) {
  return find_nontrivial_quotient(p, default_quotient_battery());
}

// ---------------------------------------------------------------------------
// Verdict pipeline

enum class VerdictKind { trivial, nontrivial, unknown };

struct OracleVerdict {
  VerdictKind kind = VerdictKind::unknown;
  std::size_t coset_count = 0;
  CosetStats work;
  std::string witness;  // "<target>:<images>" for nontrivial
  std::string reason;   // failure class for unknown

  /// "TRIVIAL cosets=1", "NONTRIVIAL witness=...", "UNKNOWN reason=..."
  std::string to_line() const {
    switch (kind) {
      case VerdictKind::trivial:
        return "TRIVIAL cosets=" + std::to_string(coset_count);
      case VerdictKind::nontrivial:
        return "NONTRIVIAL witness=" + witness;
      case VerdictKind::unknown:
        return "UNKNOWN reason=" + reason;
    }
    return {};
  }
};

struct OracleBudget {
  std::size_t coset_limit = default_coset_limit;
  std::vector<FiniteGroup> quotient_battery = default_quotient_battery();
};

/// Abelianization gate, then finite quotients, then coset enumeration.
inline OracleVerdict triviality_verdict(const Presentation& p, const OracleBudget& budget = {}) {
  OracleVerdict v;
  if (p.generator_count() == 0) {
    v.kind = VerdictKind::trivial;
    v.coset_count = 1;
    return v;
  }
  if (p.balanced()) {
    std::int64_t det = abel_det(p);
    if (det != 1 && det != -1) {
      // Already settled; an explicit quotient reads better when one exists.
      v.kind = VerdictKind::nontrivial;
      auto w = find_nontrivial_quotient(p, budget.quotient_battery);
      v.witness = w ? w->to_string(p.generator_count()) : "abelianization:det=" + std::to_string(det);
      return v;
    }
  }
  if (auto w = find_nontrivial_quotient(p, budget.quotient_battery)) {
    v.kind = VerdictKind::nontrivial;
    v.witness = w->to_string(p.generator_count());
    return v;
  }
  CosetResult c = coset_enumerate(p, budget.coset_limit);
  v.work = c.stats;
  if (!c.closed) {
    v.kind = VerdictKind::unknown;
    v.reason = "coset_limit";
  } else if (c.count == 1) {
    v.kind = VerdictKind::trivial;
    v.coset_count = 1;
  } else {
    v.kind = VerdictKind::nontrivial;
    v.coset_count = c.count;
    v.witness = "order:" + std::to_string(c.count);
  }
  return v;
}

}  // namespace acfx
