#pragma once

// Bounded search for SAC trivializations, and a scrambler producing
// instances with known solutions.
//
// States are canonical classes (canonicalize). Invert and Conjugate never
// change the class, so expanding a class with single moves alone would miss
// every concat that needs a rotated or inverted partner. A search edge is
// therefore one class-changing move, preceded by the rotations/inversion
// that prepare it:
//
//   concat edge  r_i -> rot_a(r_i) * rot_b(r_j^{+-1}), cyclically reduced
//   destabilize  as the single move
//   stabilize    with the empty word
//
// Each node stores the concrete presentation reached from the start (all
// relators cyclically reduced), so the recorded moves replay verbatim from
// the original presentation.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acfx/certificate.hpp"
#include "acfx/errors.hpp"
#include "acfx/presentation.hpp"
#include "acfx/word.hpp"

namespace acfx {

enum class Strategy { bfs, beam, iterative_deepening };

struct SearchConfig {
  std::size_t max_len = 24;  // longest relator allowed
  int max_gens = 3;
  Strategy strategy = Strategy::bfs;
  std::size_t beam_width = 1000;
  std::size_t node_budget = 1'000'000;  // distinct states visited
  std::chrono::milliseconds time_budget{std::chrono::hours(24)};
  unsigned workers = 1;
};

enum class SearchStatus { found, exhausted, budget_exceeded };

struct SearchStats {
  std::size_t visited = 0;    // distinct classes inserted, including the start
  std::size_t expanded = 0;
  std::size_t generated = 0;  // start plus every edge produced; = dedup_hits + visited
  std::size_t dedup_hits = 0;
  std::size_t frontier_peak = 0;
  std::size_t depth = 0;      // edges on the found path, else deepest level reached
  double wall_ms = 0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<Certificate> certificate;
  SearchStats stats;

  /// "outcome=<FOUND|EXHAUSTED|BUDGET> nodes=<n> depth=<d> time_ms=<t>".
  /// Without the timing field the line is stable across runs.
  std::string summary_line(bool with_time = true) const {
    const char* name = status == SearchStatus::found       ? "FOUND"
                       : status == SearchStatus::exhausted ? "EXHAUSTED"
                                                           : "BUDGET";
    std::string s = std::string("outcome=") + name + " nodes=" + std::to_string(stats.visited) +
                    " depth=" + std::to_string(stats.depth);
    if (with_time) s += " time_ms=" + std::to_string(static_cast<long long>(stats.wall_ms));
    return s;
  }

  std::string timing_line() const {
    return "time_ms=" + std::to_string(static_cast<long long>(stats.wall_ms)) +
           " expanded=" + std::to_string(stats.expanded) + " frontier_peak=" + std::to_string(stats.frontier_peak);
  }
};

namespace detail {

struct SearchEdge {
  std::vector<Move> moves;
  Presentation result;
};

// Left rotation by `a` of a cyclically reduced word, as one conjugation.
inline Word rotation_conjugator(const Word& r, std::size_t a) {
  const std::size_t len = r.size();
  if (a <= len / 2) {
    std::vector<Letter> prefix(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(a));
    return invert_word(Word::from_reduced(std::move(prefix)));
  }
  std::vector<Letter> suffix(r.begin() + static_cast<std::ptrdiff_t>(a), r.end());
  return Word::from_reduced(std::move(suffix));
}

/// Class-changing edges out of `rep`, whose relators are cyclically reduced.
inline std::vector<SearchEdge> search_edges(const Presentation& rep, const SearchConfig& cfg,
                                            std::size_t& local_duplicates) {
  std::vector<SearchEdge> out;
  const int m = static_cast<int>(rep.relator_count());
  const int n = rep.generator_count();
  const auto& rels = rep.relators();

  for (int i = 1; i <= m; ++i) {
    const Word& ri = rels[static_cast<std::size_t>(i - 1)];
    const Word old_form = canonical_cyclic_form(ri);
    std::vector<Word> seen;  // cyclic forms already produced for relator i
    const std::size_t rot_i = std::max<std::size_t>(ri.size(), 1);
    for (int j = 1; j <= m; ++j) {
      if (j == i) continue;
      const Word& rj = rels[static_cast<std::size_t>(j - 1)];
      if (rj.empty()) continue;
      for (int sign : {1, -1}) {
        const Word rjs = sign > 0 ? rj : invert_word(rj);
        for (std::size_t a = 0; a < rot_i; ++a) {
          const Word left = rotate_word(ri, a);
          for (std::size_t b = 0; b < rjs.size(); ++b) {
            const Word right = rotate_word(rjs, b);
            Word product = concat_words(left, right);
            if (product.size() > cfg.max_len) continue;
            CyclicReduction cr = cyclic_reduce(product);
            Word form = canonical_cyclic_form(cr.core);
            if (form == old_form || std::find(seen.begin(), seen.end(), form) != seen.end()) {
              ++local_duplicates;
              continue;
            }
            seen.push_back(std::move(form));

            SearchEdge e;
            if (a != 0) e.moves.push_back(Move::conjugate(i, rotation_conjugator(ri, a)));
            if (sign < 0) e.moves.push_back(Move::invert(j));
            if (b != 0) e.moves.push_back(Move::conjugate(j, rotation_conjugator(rjs, b)));
            e.moves.push_back(Move::concat(i, j));
            if (!cr.conjugator.empty()) e.moves.push_back(Move::conjugate(i, invert_word(cr.conjugator)));
            std::vector<Word> next = rels;
            next[static_cast<std::size_t>(i - 1)] = std::move(cr.core);
            next[static_cast<std::size_t>(j - 1)] = right;
            e.result = Presentation(n, std::move(next));
            out.push_back(std::move(e));
          }
        }
      }
    }
  }
  for (int i = 1; i <= m; ++i) {
    if (find_destabilize_site(rep, i)) {
      Move mv = Move::destabilize(i);
      Presentation q = apply_move(rep, mv);
      out.push_back({{mv}, std::move(q)});
    }
  }
  if (n < cfg.max_gens) {
    Move mv = Move::stabilize();
    out.push_back({{mv}, apply_move(rep, mv)});
  }
  return out;
}

// Conjugates every relator to its cyclic core.
inline Presentation cyclically_reduce_all(const Presentation& p, std::vector<Move>& moves) {
  Presentation q = p;
  for (int i = 1; i <= static_cast<int>(p.relator_count()); ++i) {
    CyclicReduction cr = cyclic_reduce(p.relator(i));
    if (cr.conjugator.empty()) continue;
    Move mv = Move::conjugate(i, invert_word(cr.conjugator));
    q = apply_move(q, mv);
    moves.push_back(std::move(mv));
  }
  return q;
}

struct Candidate {
  SearchEdge edge;
  CanonicalKey key;
};

class Searcher {
 public:
  Searcher(const Presentation& start, const SearchConfig& cfg)
      : start_(start), cfg_(cfg), t0_(std::chrono::steady_clock::now()) {
    for (int m = 0; m <= cfg.max_gens; ++m) goals_.insert(canonical_key(gen_trivial(m)));
  }

  SearchOutcome run() {
    std::vector<Move> prefix;
    Presentation root = cyclically_reduce_all(start_, prefix);
    prefix_ = std::move(prefix);
    CanonicalKey key = canonical_key(root);
    stats_.generated = 1;
    auto [it, inserted] = visited_.emplace(std::move(key), 0);
    stats_.visited = 1;
    nodes_.push_back({std::move(root), -1, {}, 0, &it->first});
    if (goals_.count(it->first)) return finish(SearchStatus::found, 0);

    switch (cfg_.strategy) {
      case Strategy::bfs:
      case Strategy::beam:
        return level_search();
      case Strategy::iterative_deepening:
        return deepening_search();
    }
    return finish(SearchStatus::exhausted, -1);
  }

 private:
  struct Node {
    Presentation rep;
    std::int64_t parent;
    std::vector<Move> moves;  // from parent
    std::size_t depth;
    const CanonicalKey* key;
  };

  bool out_of_time() const {
    return std::chrono::steady_clock::now() - t0_ > cfg_.time_budget;
  }

  // Expands frontier[lo, hi) into per-node candidate lists, in parallel when
  // configured. Order of the result follows the frontier.
  std::vector<std::vector<Candidate>> expand_batch(const std::vector<std::size_t>& frontier, std::size_t lo,
                                                   std::size_t hi) const {
    std::vector<std::vector<Candidate>> out(hi - lo);
    std::vector<std::size_t> dups(hi - lo, 0);
    auto work = [&](std::size_t k) {
      std::size_t d = 0;
      auto edges = search_edges(nodes_[frontier[lo + k]].rep, cfg_, d);
      dups[k] = d;
      out[k].reserve(edges.size());
      for (auto& e : edges) {
        CanonicalKey key = canonical_key(e.result);
        out[k].push_back({std::move(e), std::move(key)});
      }
    };
    const unsigned workers = std::max(1u, cfg_.workers);
    if (workers == 1 || hi - lo == 1) {
      for (std::size_t k = 0; k < hi - lo; ++k) work(k);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t k = w; k < hi - lo; k += workers) work(k);
        });
      }
      for (auto& t : pool) t.join();
    }
    batch_dups_ = dups;
    return out;
  }

  SearchOutcome level_search() {
    std::vector<std::size_t> frontier{0};
    bool pruned = false;
    const std::size_t batch = 64 * std::max(1u, cfg_.workers);
    while (!frontier.empty()) {
      stats_.frontier_peak = std::max(stats_.frontier_peak, frontier.size());
      std::vector<std::size_t> next;
      for (std::size_t lo = 0; lo < frontier.size(); lo += batch) {
        const std::size_t hi = std::min(frontier.size(), lo + batch);
        auto candidates = expand_batch(frontier, lo, hi);
        for (std::size_t k = 0; k < candidates.size(); ++k) {
          const std::size_t parent = frontier[lo + k];
          ++stats_.expanded;
          stats_.generated += batch_dups_[k];
          stats_.dedup_hits += batch_dups_[k];
          for (auto& c : candidates[k]) {
            ++stats_.generated;
            if (visited_.count(c.key)) {
              ++stats_.dedup_hits;
              continue;
            }
            if (stats_.visited >= cfg_.node_budget) {
              --stats_.generated;  // not examined
              return finish(SearchStatus::budget_exceeded, -1);
            }
            auto [it, ins] = visited_.emplace(std::move(c.key), nodes_.size());
            ++stats_.visited;
            const std::size_t depth = nodes_[parent].depth + 1;
            nodes_.push_back({std::move(c.edge.result), static_cast<std::int64_t>(parent),
                              std::move(c.edge.moves), depth, &it->first});
            stats_.depth = std::max(stats_.depth, depth);
            if (goals_.count(it->first)) return finish(SearchStatus::found, static_cast<std::int64_t>(nodes_.size() - 1));
            next.push_back(nodes_.size() - 1);
          }
          if (out_of_time()) return finish(SearchStatus::budget_exceeded, -1);
        }
      }
      if (cfg_.strategy == Strategy::beam && next.size() > cfg_.beam_width) {
        // Keep the shortest presentations; ties by canonical key.
        std::stable_sort(next.begin(), next.end(), [&](std::size_t a, std::size_t b) {
          const auto la = nodes_[a].rep.total_length(), lb = nodes_[b].rep.total_length();
          if (la != lb) return la < lb;
          return *nodes_[a].key < *nodes_[b].key;
        });
        next.resize(cfg_.beam_width);
        pruned = true;
      }
      frontier = std::move(next);
    }
    return finish(pruned ? SearchStatus::budget_exceeded : SearchStatus::exhausted, -1);
  }

  SearchOutcome deepening_search() {
    const Presentation root = nodes_[0].rep;
    const CanonicalKey root_key = *nodes_[0].key;
    for (std::size_t limit = 1;; ++limit) {
      std::unordered_map<CanonicalKey, std::size_t, CanonicalKeyHash> depth_seen;
      depth_seen.emplace(root_key, 0);
      bool cut = false;
      path_.clear();
      auto r = dfs(root, 0, limit, depth_seen, cut);
      if (r) return *r;
      if (!cut) return finish(SearchStatus::exhausted, -1);
    }
  }

  std::optional<SearchOutcome> dfs(const Presentation& rep, std::size_t depth, std::size_t limit,
                                   std::unordered_map<CanonicalKey, std::size_t, CanonicalKeyHash>& seen,
                                   bool& cut) {
    if (depth == limit) {
      cut = true;
      return std::nullopt;
    }
    std::size_t dups = 0;
    auto edges = search_edges(rep, cfg_, dups);
    ++stats_.expanded;
    stats_.generated += dups;
    stats_.dedup_hits += dups;
    for (auto& e : edges) {
      ++stats_.generated;
      CanonicalKey key = canonical_key(e.result);
      auto it = seen.find(key);
      if (it != seen.end() && it->second <= depth + 1) {
        ++stats_.dedup_hits;
        continue;
      }
      if (stats_.visited >= cfg_.node_budget) {
        --stats_.generated;
        return finish(SearchStatus::budget_exceeded, -1);
      }
      if (it == seen.end()) {
        it = seen.emplace(std::move(key), depth + 1).first;
      } else {
        it->second = depth + 1;
      }
      ++stats_.visited;
      stats_.depth = std::max(stats_.depth, depth + 1);
      path_.push_back(e.moves);
      if (goals_.count(it->first)) {
        found_end_ = e.result;
        return finish_path(depth + 1);
      }
      if (auto r = dfs(e.result, depth + 1, limit, seen, cut)) return r;
      path_.pop_back();
      if (out_of_time()) return finish(SearchStatus::budget_exceeded, -1);
    }
    return std::nullopt;
  }

  SearchOutcome finish_path(std::size_t depth) {
    std::vector<Move> moves = prefix_;
    for (const auto& step : path_) moves.insert(moves.end(), step.begin(), step.end());
    SearchOutcome out;
    out.status = SearchStatus::found;
    out.certificate = Certificate{start_, std::move(moves), *found_end_};
    stats_.depth = depth;
    out.stats = stats_;
    out.stats.wall_ms = elapsed_ms();
    return out;
  }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

  SearchOutcome finish(SearchStatus status, std::int64_t goal) {
    SearchOutcome out;
    out.status = status;
    if (status == SearchStatus::found) {
      std::vector<std::int64_t> chain;
      for (std::int64_t k = goal; k > 0; k = nodes_[static_cast<std::size_t>(k)].parent) chain.push_back(k);
      std::vector<Move> moves = prefix_;
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const auto& step = nodes_[static_cast<std::size_t>(*it)].moves;
        moves.insert(moves.end(), step.begin(), step.end());
      }
      const Node& g = nodes_[static_cast<std::size_t>(goal)];
      out.certificate = Certificate{start_, std::move(moves), g.rep};
      stats_.depth = g.depth;
    }
    out.stats = stats_;
    out.stats.wall_ms = elapsed_ms();
    return out;
  }

  Presentation start_;
  SearchConfig cfg_;
  std::chrono::steady_clock::time_point t0_;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> goals_;
  std::unordered_map<CanonicalKey, std::size_t, CanonicalKeyHash> visited_;
  std::vector<Node> nodes_;
  std::vector<Move> prefix_;
  SearchStats stats_;
  mutable std::vector<std::size_t> batch_dups_;
  std::vector<std::vector<Move>> path_;
  std::optional<Presentation> found_end_;
};

}  // namespace detail

/// Searches for a SAC path from p to some trivial presentation T_m within
/// the caps. An unbalanced start, or one with |abel_det| != 1, has no
/// trivialization and is reported as exhausted immediately.
inline SearchOutcome search_trivialization(const Presentation& p, const SearchConfig& cfg = {}) {
  if (cfg.node_budget < 1) throw InvalidArgument("node budget must be >= 1");
  if (p.longest_relator() > cfg.max_len) {
    throw InvalidArgument("max_len " + std::to_string(cfg.max_len) + " is below the longest start relator (" +
                          std::to_string(p.longest_relator()) + ")");
  }
  if (p.generator_count() > cfg.max_gens) throw InvalidArgument("max_gens is below the start generator count");
  if (cfg.strategy == Strategy::beam && cfg.beam_width < 1) throw InvalidArgument("beam width must be >= 1");
  if (!p.balanced() || std::abs(abel_det(p)) != 1) return {SearchStatus::exhausted, std::nullopt, {}};
  return detail::Searcher(p, cfg).run();
}

/// Number of moves in the certificate that change the canonical class; the
/// rest only rotate, invert or conjugate relators.
inline std::size_t class_changing_moves(const Certificate& c) {
  Presentation p = c.start;
  CanonicalKey key = canonical_key(p);
  std::size_t changes = 0;
  for (const Move& m : c.moves) {
    p = apply_move(p, m);
    CanonicalKey next = canonical_key(p);
    if (next != key) ++changes;
    key = std::move(next);
  }
  return changes;
}

// ---------------------------------------------------------------------------
// Scramble

struct ScrambleResult {
  Presentation presentation;
  std::vector<Move> moves;
};

/// Applies up to k moves drawn uniformly from neighbors(., caps) with a
/// seeded generator. Stops early if no move fits the caps.
inline ScrambleResult scramble(const Presentation& p, std::size_t k, std::uint64_t seed, const Caps& caps = {}) {
  std::mt19937_64 rng(seed);
  ScrambleResult out{p, {}};
  for (std::size_t step = 0; step < k; ++step) {
    auto options = neighbors(out.presentation, caps);
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    auto& [move, next] = options[pick(rng)];
    out.moves.push_back(move);
    out.presentation = std::move(next);
  }
  return out;
}

}  // namespace acfx
