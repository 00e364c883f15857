#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace acfx;
using namespace testing_support;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(ACFX_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Certificate searched(std::size_t k, std::uint64_t seed) {
  ScrambleResult s = scramble(gen_trivial(2), k, seed);
  SearchOutcome r = search_trivialization(s.presentation);
  EXPECT_EQ(r.status, SearchStatus::found);
  return *r.certificate;
}

std::size_t syntax_line(const std::string& text) {
  try {
    parse_certificate(text);
  } catch (const SyntaxError& e) {
    return e.position();
  }
  ADD_FAILURE() << "parsed: " << text;
  return 0;
}

}  // namespace

TEST(Replay, Examples) {
  EXPECT_EQ(replay(Certificate{gen_trivial(2), {}, gen_trivial(2)}), gen_trivial(2));
  std::vector<Move> moves = {Move::concat(1, 2)};
  auto inv = inverse_move(gen_trivial(2), Move::concat(1, 2));
  moves.insert(moves.end(), inv.begin(), inv.end());
  EXPECT_EQ(canonical_key(replay(Certificate{gen_trivial(2), moves, gen_trivial(2)})), canonical_key(gen_trivial(2)));
}

TEST(Replay, ReportsFailingStep) {
  Certificate c{gen_trivial(2), {Move::invert(1), Move::concat(2, 2), Move::invert(1)}, gen_trivial(2)};
  try {
    replay(c);
    FAIL();
  } catch (const ReplayError& e) {
    EXPECT_EQ(e.step(), 2u);
  }
}

TEST(VerifyCertificate, EmptyCertificate) {
  EXPECT_TRUE(verify_certificate(Certificate{gen_gpn(2), {}, gen_gpn(2)}).valid);
  // Endpoint comparison is up to canonical form.
  EXPECT_TRUE(verify_certificate(Certificate{P("x,y | x, y"), {}, P("x,y | Y, x")}).valid);
}

TEST(VerifyCertificate, SearchOutputIsValid) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) EXPECT_TRUE(verify_certificate(searched(3, seed)).valid);
}

TEST(VerifyCertificate, FlippedConcatIndexIsCaught) {
  Certificate c{gen_gpn(2), {Move::invert(2), Move::concat(1, 2), Move::invert(1)},
                P("x,y | xxxYxyXYX, yyXXX")};
  ASSERT_TRUE(verify_certificate(c).valid);
  Certificate t = c;
  t.moves[1] = Move::concat(2, 1);
  CertificateVerdict v = verify_certificate(t);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.step, 4u);  // replay succeeds, endpoint differs
  t.moves[1] = Move::concat(1, 3);
  v = verify_certificate(t);
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.step, 2u);
}

TEST(VerifyCertificate, TamperedSearchCertificates) {
  std::size_t caught = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Certificate c = searched(4, seed);
    for (std::size_t k = 0; k < c.moves.size(); ++k) {
      Certificate t = c;
      Move& m = t.moves[k];
      if (m.kind == MoveKind::concat) {
        std::swap(m.i, m.j);
      } else if (m.kind == MoveKind::conjugate) {
        m.g = concat_words(m.g, W("y"));
      } else {
        continue;
      }
      ++total;
      CertificateVerdict v = verify_certificate(t);
      if (!v.valid) {
        ++caught;
        EXPECT_GE(v.step, k + 1);
      }
    }
    Certificate t = c;
    t.claimed_end = gen_gpn(2);
    EXPECT_FALSE(verify_certificate(t).valid);
    EXPECT_EQ(verify_certificate(t).step, c.moves.size() + 1);
  }
  // Some tampers are harmless (e.g. swapped concat of equal relators) but
  // most must be detected.
  EXPECT_GT(caught * 2, total);
}

TEST(VerifyConsequence, Examples) {
  std::vector<Word> rels = fig5_presentation().relators();
  EXPECT_TRUE(verify_consequence({rels, rels[0], {{Word{}, 1, 1}}}).valid);
  ConsequenceVerdict bad = verify_consequence({rels, W("x"), {}});
  EXPECT_FALSE(bad.valid);
  EXPECT_EQ(S(bad.residue), "X");
  EXPECT_THROW(verify_consequence({rels, W("x"), {{Word{}, 3, 1}}}), Error);
  EXPECT_THROW(verify_consequence({rels, W("x"), {{Word{}, 1, 2}}}), Error);
}

TEST(VerifyConsequence, ShippedFixtures) {
  for (const char* name : {"braid_consequence.acfx", "power_consequence.acfx"}) {
    std::string text = fixture(name);
    auto t0 = std::chrono::steady_clock::now();
    ConsequenceCertificate cc = parse_consequence_certificate(text);
    ConsequenceVerdict v = verify_consequence(cc);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(v.valid) << name;
    EXPECT_LT(ms, 10.0);
    EXPECT_EQ(cc.relators, fig5_presentation().relators());
    EXPECT_EQ(serialize(cc), text);
  }
  EXPECT_EQ(S(parse_consequence_certificate(fixture("braid_consequence.acfx")).target), "xyxYXY");
  EXPECT_EQ(S(parse_consequence_certificate(fixture("power_consequence.acfx")).target), "xxxYY");
}

TEST(VerifyConsequence, DroppedTermLeavesResidue) {
  ConsequenceCertificate cc = parse_consequence_certificate(fixture("power_consequence.acfx"));
  cc.terms.pop_back();
  ConsequenceVerdict v = verify_consequence(cc);
  EXPECT_FALSE(v.valid);
  EXPECT_FALSE(v.residue.empty());
}

TEST(CertificateText, SacRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Certificate c = searched(3, seed);
    std::string text = serialize(c);
    EXPECT_EQ(parse_sac_certificate(text), c);
    EXPECT_EQ(serialize(parse_sac_certificate(text)), text);
  }
  Certificate big{gen_trivial(4), {Move::conjugate(1, W("y")), Move::stabilize(Word{Letter(4, -1)})},
                  apply_moves(gen_trivial(4), {Move::conjugate(1, W("y")), Move::stabilize(Word{Letter(4, -1)})})};
  EXPECT_EQ(parse_sac_certificate(serialize(big)), big);
}

TEST(CertificateText, ShippedFixturesRoundTrip) {
  for (const char* name :
       {"sample_sac.acfx", "gp2_trivialization.acfx", "braid_consequence.acfx", "power_consequence.acfx"}) {
    std::string text = fixture(name);
    AnyCertificate any = parse_certificate(text);
    std::string again = std::visit([](const auto& c) { return serialize(c); }, any);
    EXPECT_EQ(again, text) << name;
  }
  EXPECT_TRUE(verify_certificate(parse_sac_certificate(fixture("sample_sac.acfx"))).valid);
}

TEST(CertificateText, Gp2TrivializationFixtureIsValid) {
  Certificate c = parse_sac_certificate(fixture("gp2_trivialization.acfx"));
  EXPECT_EQ(c.start, gen_gpn(2));
  EXPECT_EQ(c.claimed_end, gen_trivial(2));
  EXPECT_TRUE(verify_certificate(c).valid);
}

TEST(CertificateText, PresentationFixturesRoundTrip) {
  for (const char* name : {"gp2.txt", "gp4.txt", "fig5.txt", "t3.txt"}) {
    std::string text = fixture(name);
    ASSERT_FALSE(text.empty()) << name;
    std::string line = text.substr(0, text.find('\n'));
    EXPECT_EQ(F(P(line)) + "\n", text) << name;
  }
}

TEST(CertificateText, ToleratesTrailingWhitespace) {
  std::string text = "acfx v1 kind=sac  \nstart: x | x\t\nend: x | x\n\n\n";
  EXPECT_TRUE(verify_certificate(parse_sac_certificate(text)).valid);
}

TEST(CertificateText, Errors) {
  EXPECT_THROW(parse_certificate("acfx v2 kind=sac\nstart: x | x\nend: x | x\n"), VersionMismatch);
  EXPECT_EQ(syntax_line("acfx v1 kind=sac\nstart: x | x\nmove: twist i=1\nend: x | x\n"), 3u);
  EXPECT_EQ(syntax_line("acfx v1 kind=sac\nstart: x | x\nmove: invert\nend: x | x\n"), 3u);
  EXPECT_EQ(syntax_line("acfx v1 kind=sac\nstart: x | x\nmove: invert i=one\nend: x | x\n"), 3u);
  EXPECT_EQ(syntax_line("acfx v1 kind=sac\nstart: x | x\n\nend: x | x\n"), 3u);
  EXPECT_EQ(syntax_line("acfx v1 kind=sac\nbegin: x | x\nend: x | x\n"), 2u);
  EXPECT_EQ(syntax_line("acfx v1 kind=sac\nstart: x | x\n"), 3u);
  EXPECT_EQ(syntax_line("hello\n"), 1u);
  EXPECT_EQ(syntax_line("acfx v1 kind=proof\n"), 1u);
  EXPECT_EQ(syntax_line("acfx v1 kind=consequence\nrelators: xy\ntarget: x\nterm: g=1 r=1 e=2\n"), 4u);
  EXPECT_EQ(syntax_line("acfx v1 kind=consequence\nrelators: xy\ntarget x\n"), 3u);
}
