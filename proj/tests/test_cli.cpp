#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the CLI with a shell-quoted argument string; stderr is discarded.
CliResult run(const std::string& args) {
  std::string cmd = std::string("'") + ACFX_CLI_PATH + "' " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "acfx_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string fixtures = ACFX_FIXTURE_DIR;

}  // namespace

TEST(Cli, Gen) {
  EXPECT_EQ(run("gen gpn 2").out, "x,y | xyxYXY, xxxYY\n");
  EXPECT_EQ(run("gen trivial 3").out, "x,y,z | x, y, z\n");
  EXPECT_EQ(run("gen fig5").out, "x,y | xxyXyXY, YYXyXyx\n");
  EXPECT_EQ(run("gen gpn").code, 2);
  EXPECT_EQ(run("gen gpn -1").code, 2);
  EXPECT_EQ(run("gen cube 2").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("gen gpn 2 --bogus").code, 2);
}

TEST(Cli, Judge) {
  CliResult a = run("judge 'x,y | xyxYXY, xxY'");
  EXPECT_EQ(a.out, "TRIVIAL cosets=1\n");
  EXPECT_EQ(a.code, 0);
  CliResult b = run("judge 'x,y | xyXY, x'");
  EXPECT_EQ(b.out.rfind("NONTRIVIAL witness=S2:", 0), 0u);
  EXPECT_EQ(b.code, 3);
  CliResult c = run("judge 'x,y | xyxYXY, xxxxxYYYY' --coset-limit 10");
  EXPECT_EQ(c.out.rfind("UNKNOWN", 0), 0u);
  EXPECT_EQ(c.code, 4);
  EXPECT_EQ(run("judge 'x,y | xy@'").code, 2);
  EXPECT_EQ(run("judge 'x | x' --coset-limit 0").code, 2);
  EXPECT_EQ(run("judge @" + fixtures + "/gp2.txt").out, "TRIVIAL cosets=1\n");
  EXPECT_EQ(run("judge @/nonexistent/file").code, 7);
}

TEST(Cli, SearchAndVerify) {
  CliResult a = run("search 'x,y | x, y'");
  EXPECT_EQ(a.out, "outcome=FOUND nodes=1 depth=0\n");
  EXPECT_EQ(a.code, 0);
  CliResult b = run("search 'x,y | xy, xy'");
  EXPECT_EQ(b.out.rfind("outcome=EXHAUSTED", 0), 0u);
  EXPECT_EQ(b.code, 8);
  EXPECT_EQ(run("search 'x,y | xyxYXY, xxxxxYYYY' --budget 100").code, 5);
  EXPECT_EQ(run("search 'x,y | xyxYXY, xxxYY' --max-len 3").code, 2);
  EXPECT_EQ(run("search 'x | x' --strategy dfs").code, 2);

  auto scr = scratch("scr.acfx"), cert = scratch("found.acfx");
  std::filesystem::remove(cert);
  CliResult s = run("scramble 'x,y | x, y' --steps 3 --seed 7 --out '" + scr.string() + "'");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(run("verify '" + scr.string() + "'").code, 0);
  std::string scrambled = s.out.substr(0, s.out.size() - 1);
  CliResult f = run("search '" + scrambled + "' --out '" + cert.string() + "'");
  EXPECT_EQ(f.code, 0);
  CliResult v = run("verify '" + cert.string() + "'");
  EXPECT_EQ(v.out.rfind("VALID", 0), 0u);
  EXPECT_EQ(v.code, 0);

  // Flip the first concat's indices byte-for-byte.
  std::string text = read(cert);
  auto pos = text.find("concat i=");
  ASSERT_NE(pos, std::string::npos);
  std::swap(text[pos + 9], text[pos + 13]);
  auto bad = scratch("tampered.acfx");
  write(bad, text);
  CliResult t = run("verify '" + bad.string() + "'");
  EXPECT_EQ(t.out.rfind("INVALID step=", 0), 0u) << t.out;
  EXPECT_EQ(t.code, 6);

  EXPECT_EQ(run("verify /nonexistent/cert.acfx").code, 7);
  EXPECT_EQ(run("verify " + fixtures + "/braid_consequence.acfx").code, 0);
  EXPECT_EQ(run("verify " + fixtures + "/power_consequence.acfx").code, 0);
  EXPECT_EQ(run("verify " + fixtures + "/sample_sac.acfx").code, 0);
}

TEST(Cli, VerifyRejectsMalformedAndWrongConsequence) {
  auto p = scratch("bad_syntax.acfx");
  write(p, "acfx v1 kind=sac\nstart: x | x\nmove: twist i=1\nend: x | x\n");
  CliResult a = run("verify '" + p.string() + "'");
  EXPECT_EQ(a.code, 6);
  EXPECT_EQ(a.out.rfind("INVALID line=3", 0), 0u);
  write(p, "acfx v1 kind=consequence\nrelators: xxyXyXY, YYXyXyx\ntarget: x\n");
  CliResult b = run("verify '" + p.string() + "'");
  EXPECT_EQ(b.out, "INVALID residue=X\n");
  EXPECT_EQ(b.code, 6);
}

TEST(Cli, ScrambleIsSeeded) {
  EXPECT_EQ(run("scramble 'x,y | x, y' --steps 3 --seed 7").out, "x,y,z | x, yz, z\n");
  EXPECT_EQ(run("scramble 'x,y | x, y' --steps 0").out, "x,y | x, y\n");
  EXPECT_EQ(run("scramble 'x,y | x, y' --steps 5 --seed 11").out,
            run("scramble 'x,y | x, y' --steps 5 --seed 11").out);
}

TEST(Cli, Apply) {
  CliResult a = run("apply 'x,y | x, y' --move 'concat i=1 j=2' --move 'conjugate i=2 g=xY'");
  EXPECT_EQ(a.out, "x,y | xy, xyX\n");
  EXPECT_EQ(run("apply 'x | x' --move 'stabilize g=x'").out, "x,y | x, yx\n");
  EXPECT_EQ(run("apply 'x,y | x, y' --move 'concat i=1 j=1'").code, 2);
  EXPECT_EQ(run("apply 'x,y | x, y' --move 'spin i=1'").code, 2);
}

TEST(Cli, Invariants) {
  CliResult a = run("invariants --cases 200 --seed 1");
  CliResult b = run("invariants --cases 200 --seed 1");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("invariants PASS\n"), std::string::npos);
  EXPECT_NE(a.out.find("start=fig5"), std::string::npos);
}

TEST(Cli, ConfigFile) {
  auto cfg = scratch("run.cfg");
  write(cfg, "# search limits\nbudget = 50\nmax-len=30\n");
  CliResult a = run("--config '" + cfg.string() + "' search 'x,y | xyxYXY, xxxxxYYYY'");
  EXPECT_EQ(a.out, "outcome=BUDGET nodes=50 depth=1\n");
  EXPECT_EQ(a.code, 5);
  // Flags override the file.
  CliResult b = run("--config '" + cfg.string() + "' search 'x,y | xyxYXY, xxxxxYYYY' --budget 7");
  EXPECT_EQ(b.out, "outcome=BUDGET nodes=7 depth=1\n");
  write(cfg, "colour=blue\n");
  EXPECT_EQ(run("--config '" + cfg.string() + "' search 'x | x'").code, 2);
  write(cfg, "budget=0\n");
  EXPECT_EQ(run("--config '" + cfg.string() + "' search 'x | x'").code, 2);
  write(cfg, "just a line\n");
  EXPECT_EQ(run("--config '" + cfg.string() + "' search 'x | x'").code, 2);
  EXPECT_EQ(run("--config /nonexistent/run.cfg search 'x | x'").code, 7);
}
