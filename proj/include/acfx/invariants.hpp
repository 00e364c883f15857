#pragma once

// Randomized move-invariance battery: along random SAC move sequences,
// |abel_det| and |Hom(G, S3)| stay constant, relators stay freely reduced,
// and every move followed by its inverse returns to the same canonical form.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "acfx/oracle.hpp"
#include "acfx/presentation.hpp"

namespace acfx {

struct RandomMoveConfig {
  std::size_t max_len = 40;
  int max_gens = 4;
  std::size_t max_conjugator_len = 3;
};

inline Word random_word(std::mt19937_64& rng, int gen_count, std::size_t len) {
  std::vector<Letter> letters;
  if (gen_count < 1) return {};
  std::uniform_int_distribution<int> gen(1, gen_count);
  std::bernoulli_distribution neg(0.5);
  while (letters.size() < len) {
    Letter l(gen(rng), neg(rng) ? -1 : 1);
    if (!letters.empty() && letters.back() == l.inverse()) continue;
    letters.push_back(l);
  }
  return Word::from_reduced(std::move(letters));
}

/// A random applicable move whose result fits the config, or nothing after
/// a bounded number of attempts.
inline std::optional<Move> random_move(const Presentation& p, std::mt19937_64& rng, const RandomMoveConfig& cfg) {
  const int m = static_cast<int>(p.relator_count());
  const int n = p.generator_count();
  std::uniform_int_distribution<int> kind_dist(0, 4);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::optional<Move> mv;
    switch (kind_dist(rng)) {
      case 0:
        if (m >= 2) {
          std::uniform_int_distribution<int> pick(1, m);
          int i = pick(rng), j = pick(rng);
          if (i != j) mv = Move::concat(i, j);
        }
        break;
      case 1:
        if (m >= 1) mv = Move::invert(std::uniform_int_distribution<int>(1, m)(rng));
        break;
      case 2:
        if (m >= 1 && n >= 1) {
          int i = std::uniform_int_distribution<int>(1, m)(rng);
          std::size_t len = std::uniform_int_distribution<std::size_t>(1, cfg.max_conjugator_len)(rng);
          mv = Move::conjugate(i, random_word(rng, n, len));
        }
        break;
      case 3:
        if (n < cfg.max_gens) {
          std::size_t len = n >= 1 ? std::uniform_int_distribution<std::size_t>(0, 2)(rng) : 0;
          mv = Move::stabilize(random_word(rng, n, len));
        }
        break;
      case 4: {
        std::vector<int> sites;
        for (int i = 1; i <= m; ++i) {
          if (detail::find_destabilize_site(p, i)) sites.push_back(i);
        }
        if (!sites.empty()) {
          mv = Move::destabilize(sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)]);
        }
        break;
      }
    }
    if (mv && apply_move(p, *mv).longest_relator() <= cfg.max_len) return mv;
  }
  return std::nullopt;
}

struct InvariantConfig {
  std::size_t cases = 10'000;  // move sequences per start presentation
  std::uint64_t seed = 1;
  std::size_t max_steps = 20;
  RandomMoveConfig moves;
};

struct InvariantReport {
  std::string name;
  std::size_t sequences = 0;
  std::size_t moves = 0;
  std::size_t det_failures = 0;
  std::size_t hom_failures = 0;
  std::size_t reduced_failures = 0;
  std::size_t roundtrip_failures = 0;

  bool passed() const {
    return det_failures + hom_failures + reduced_failures + roundtrip_failures == 0;
  }

  std::string to_line() const {
    std::ostringstream os;
    os << "invariants start=" << name << " sequences=" << sequences << " moves=" << moves
       << " det_fail=" << det_failures << " hom_fail=" << hom_failures << " reduced_fail=" << reduced_failures
       << " roundtrip_fail=" << roundtrip_failures << (passed() ? " PASS" : " FAIL");
    return os.str();
  }
};

/// Runs cfg.cases random sequences of 1..cfg.max_steps moves from `start`.
/// `stream` separates the random streams of different start presentations.
inline InvariantReport run_invariants(const Presentation& start, std::string name, const InvariantConfig& cfg,
                                      std::uint64_t stream = 0) {
  InvariantReport report;
  report.name = std::move(name);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  const std::int64_t det0 = std::llabs(abel_det(start));
  const std::uint64_t hom0 = count_homomorphisms(start, s3);
  RandomMoveConfig move_cfg = cfg.moves;
  move_cfg.max_len = std::max(move_cfg.max_len, start.longest_relator());
  move_cfg.max_gens = std::max(move_cfg.max_gens, start.generator_count());
  std::uniform_int_distribution<std::size_t> steps_dist(1, cfg.max_steps);

  for (std::size_t c = 0; c < cfg.cases; ++c) {
    Presentation p = start;
    const std::size_t steps = steps_dist(rng);
    for (std::size_t s = 0; s < steps; ++s) {
      auto mv = random_move(p, rng, move_cfg);
      if (!mv) break;
      Presentation q = apply_move(p, *mv);
      ++report.moves;
      for (const Word& r : q.relators()) {
        if (!is_freely_reduced(r.letters())) {
          ++report.reduced_failures;
          break;
        }
      }
      if (std::llabs(abel_det(q)) != det0) ++report.det_failures;
      if (count_homomorphisms(q, s3) != hom0) ++report.hom_failures;
      Presentation back = apply_moves(q, inverse_move(p, *mv));
      if (back != p && canonical_key(back) != canonical_key(p)) ++report.roundtrip_failures;
      p = std::move(q);
    }
    ++report.sequences;
  }
  return report;
}

/// The standard battery: T3, G(P2) and fig5.
inline std::vector<InvariantReport> run_invariant_battery(const InvariantConfig& cfg) {
  return {run_invariants(gen_trivial(3), "T3", cfg, 1), run_invariants(gen_gpn(2), "GP2", cfg, 2),
          run_invariants(fig5_presentation(), "fig5", cfg, 3)};
}

}  // namespace acfx
