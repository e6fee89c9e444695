// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cqe/cli.h"
#include "doctest.h"

using namespace cqe;

namespace {

// Redirects std::cout (and std::cerr) into buffers for the lifetime of one
// command invocation.
class Capture {
 public:
  Capture()
      : oldOut_(std::cout.rdbuf(out_.rdbuf())),
        oldErr_(std::cerr.rdbuf(err_.rdbuf())) {}
  ~Capture() {
    std::cout.rdbuf(oldOut_);
    std::cerr.rdbuf(oldErr_);
  }
  std::string out() const { return out_.str(); }
  std::string err() const { return err_.str(); }

 private:
  std::ostringstream out_, err_;
  std::streambuf* oldOut_;
  std::streambuf* oldErr_;
};

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation run(const std::vector<std::string>& args) {
  Invocation r;
  Capture cap;
  r.code = runCli(args);
  r.out = cap.out();
  r.err = cap.err();
  return r;
}

// A scratch file deleted at scope exit.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& content)
      : path_("cli_test_" + name + ".tmp") {
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// The shared demonstration instance.
const char* kTBox = "Abc ISA Antiseizure\n";
const char* kABox =
    "buy(john,m_a)\nAbc(m_a)\nbuy(alice,m_b)\ncontain(m_b,phenytoin)\n";
const char* kPolicy =
    "DENY buy(?x,?y), Antiseizure(?y)\nDENY buy(?x,?y), contain(?y,phenytoin)\n";

}  // namespace

TEST_CASE("runCli requires a known subcommand") {
  CHECK(run({}).code == 2);
  Invocation unknown = run({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown subcommand") != std::string::npos);
}

TEST_CASE("check reports consistency and policy violation") {
  TempFile tbox("t1", kTBox), abox("a1", kABox), policy("p1", kPolicy);
  Invocation ok = run({"check", "--tbox", tbox.path(), "--abox", abox.path(),
                       "--policy", policy.path()});
  CHECK(ok.code == 0);
  CHECK(ok.out == "consistent\npolicy-violated: yes\n");

  TempFile clean("a2", "buy(john,m_a)\n");
  Invocation quiet = run({"check", "--tbox", tbox.path(), "--abox",
                          clean.path(), "--policy", policy.path()});
  CHECK(quiet.code == 0);
  CHECK(quiet.out == "consistent\npolicy-violated: no\n");

  Invocation bare = run({"check", "--tbox", tbox.path(), "--abox", abox.path()});
  CHECK(bare.code == 0);
  CHECK(bare.out == "consistent\n");
}

TEST_CASE("check exits 3 on an inconsistent pair and 2 on a missing file") {
  TempFile tbox("t2", "A ISA NOT B\n"), abox("a3", "A(c)\nB(c)\n");
  Invocation bad = run({"check", "--tbox", tbox.path(), "--abox", abox.path()});
  CHECK(bad.code == 3);
  CHECK(bad.out == "inconsistent\n");

  Invocation missing =
      run({"check", "--tbox", tbox.path(), "--abox", "no_such_file.abox"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  Invocation noArgs = run({"check"});
  CHECK(noArgs.code == 2);
}

TEST_CASE("rewrite prints the brave sentence for the next query") {
  TempFile tbox("t3", kTBox), policy("p3", kPolicy);
  TempFile entq("e3", "ASK buy(john,m_a)\n");
  Invocation r = run({"rewrite", "--tbox", tbox.path(), "--policy",
                      policy.path(), "--entq", entq.path(), "--query",
                      "ASK buy(?x,m_b)"});
  CHECK(r.code == 0);
  CHECK(r.out == "(EXISTS (?v0) (AND buy(john,m_a) buy(?v0,m_b)))\n");
}

TEST_CASE("rewrite state mode prints one guess-conditioned sentence") {
  TempFile tbox("t4", kTBox), policy("p4", kPolicy);
  TempFile entq("e4", "ASK buy(john,m_a)\nASK Abc(m_a)\n");
  Invocation r = run({"rewrite", "--tbox", tbox.path(), "--policy",
                      policy.path(), "--entq", entq.path(), "--query",
                      "ASK buy(?x,m_b)", "--mode", "state", "--index", "3",
                      "--guess", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "(EXISTS (?v0) (AND buy(john,m_a) buy(?v0,m_b)))\n");

  Invocation badIndex = run({"rewrite", "--tbox", tbox.path(), "--policy",
                             policy.path(), "--query", "ASK Abc(m_a)",
                             "--mode", "state", "--index", "2"});
  CHECK(badIndex.code == 2);

  Invocation badGuess = run({"rewrite", "--tbox", tbox.path(), "--policy",
                             policy.path(), "--entq", entq.path(), "--query",
                             "ASK buy(?x,m_b)", "--mode", "state", "--index",
                             "2", "--guess", "2"});
  CHECK(badGuess.code == 2);
  CHECK(badGuess.err.find("--guess") != std::string::npos);
}

TEST_CASE("rewrite exits 4 when the reformulation overflows") {
  TempFile tbox("t5", "s ISAR r\nt ISAR r\nu ISAR r\n");
  TempFile policy("p5", "DENY r(?x,?x)\n");
  Invocation r = run(
      {"rewrite", "--tbox", tbox.path(), "--policy", policy.path(), "--query",
       "ASK r(?x1,?x2), r(?x2,?x3), r(?x3,?x4), r(?x4,?x5), r(?x5,?x6), "
       "r(?x6,?x7)"});
  CHECK(r.code == 4);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("session runs a script and exits by the last answer") {
  TempFile tbox("t6", kTBox), abox("a6", kABox), policy("p6", kPolicy);
  TempFile script("s6",
                  "# the demonstration sequence\n"
                  "ask buy(john,m_a)\n"
                  "ask Abc(m_a)\n"
                  "ask buy(?x,m_b)\n");
  Invocation r = run({"session", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--script", script.path()});
  CHECK(r.code == 0);
  CHECK(r.out == "TRUE\nFALSE\nTRUE\n");

  TempFile denied("s6b", "ask Abc(m_a)\nask buy(john,m_a)\n");
  Invocation d = run({"session", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--script", denied.path()});
  CHECK(d.code == 1);
  CHECK(d.out == "TRUE\nFALSE\n");
}

TEST_CASE("session scripts are byte-deterministic") {
  TempFile tbox("t7", kTBox), abox("a7", kABox), policy("p7", kPolicy);
  TempFile script("s7",
                  "ask buy(john,m_a)\n"
                  "entq\n"
                  "history\n"
                  "censors\n"
                  "materialize\n"
                  "ask buy(?x,m_b)\n"
                  "quit\n");
  std::vector<std::string> args = {"session",  "--tbox",  tbox.path(),
                                   "--abox",   abox.path(), "--policy",
                                   policy.path(), "--script", script.path()};
  Invocation first = run(args);
  Invocation second = run(args);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  CHECK(first.err == second.err);
}

TEST_CASE("session auxiliary commands report the evolving state") {
  TempFile tbox("t8", kTBox), abox("a8", kABox), policy("p8", kPolicy);
  TempFile script("s8",
                  "ask buy(john,m_a)\n"
                  "ask Abc(m_a)\n"
                  "ask buy(?x,m_b)\n"
                  "entq\n"
                  "history\n"
                  "censors\n"
                  "materialize\n");
  Invocation r = run({"session", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--script", script.path()});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "TRUE\nFALSE\nTRUE\n"
        "ASK buy(john,m_a)\nASK buy(?x,m_b)\n"
        "TRUE\tASK buy(john,m_a)\nFALSE\tASK Abc(m_a)\nTRUE\tASK buy(?x,m_b)\n"
        "{buy(alice,m_b), buy(john,m_a)}\n"
        "buy(alice,m_b)\nbuy(john,m_a)\n");
}

TEST_CASE("session errors are diagnosed without ending the session") {
  TempFile tbox("t9", kTBox), abox("a9", kABox), policy("p9", kPolicy);
  TempFile script("s9",
                  "ask buy(?x\n"
                  "frobnicate\n"
                  "ask buy(john,m_a)\n");
  Invocation r = run({"session", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--script", script.path()});
  CHECK(r.code == 0);
  CHECK(r.out == "TRUE\n");
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("unknown command") != std::string::npos);
}

TEST_CASE("session save and resume round-trip; tampering is detected") {
  TempFile tbox("t10", kTBox), abox("a10", kABox), policy("p10", kPolicy);
  const std::string logPath = "cli_test_log10.tmp";
  TempFile script("s10",
                  "ask buy(john,m_a)\n"
                  "ask Abc(m_a)\n"
                  "save " + logPath + "\n");
  Invocation saved = run({"session", "--tbox", tbox.path(), "--abox",
                          abox.path(), "--policy", policy.path(), "--script",
                          script.path()});
  CHECK(saved.code == 1);  // last ask was FALSE
  std::string logText = slurp(logPath);
  CHECK(logText.find("#tbox-sha256:") == 0);

  // Resume, ask the remaining query.
  TempFile more("s10b", "ask buy(?x,m_b)\n");
  Invocation resumed = run({"session", "--tbox", tbox.path(), "--abox",
                            abox.path(), "--policy", policy.path(), "--resume",
                            logPath, "--script", more.path()});
  CHECK(resumed.code == 0);
  CHECK(resumed.out == "TRUE\n");

  // Tamper with a recorded answer: resuming must fail with exit 3.
  std::string flipped = logText;
  std::size_t pos = flipped.find("FALSE\t");
  REQUIRE(pos != std::string::npos);
  flipped.replace(pos, 6, "TRUE\t");
  {
    std::ofstream out(logPath, std::ios::binary);
    out << flipped;
  }
  Invocation tampered = run({"session", "--tbox", tbox.path(), "--abox",
                             abox.path(), "--policy", policy.path(),
                             "--resume", logPath, "--script", more.path()});
  CHECK(tampered.code == 3);
  CHECK(tampered.err.find("recorded") != std::string::npos);

  std::remove(logPath.c_str());
}

TEST_CASE("session materialized mode answers from the frozen censor") {
  TempFile tbox("t11", kTBox), abox("a11", kABox), policy("p11", kPolicy);
  TempFile script("s11", "ask Abc(m_a)\nmaterialize\n");
  Invocation r = run({"session", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--mode", "materialized",
                      "--script", script.path()});
  CHECK(r.code == 0);
  // The greedily frozen censor concedes the drug class and its purchase
  // evidence, so the class query is answerable.
  CHECK(r.out ==
        "TRUE\n"
        "Abc(m_a)\nAntiseizure(m_a)\nbuy(alice,m_b)\n");
}

TEST_CASE("compare tabulates the five semantics and cross-checks them") {
  TempFile tbox("t12", kTBox), abox("a12", kABox), policy("p12", kPolicy);
  TempFile queries("q12",
                   "ASK buy(john,m_a)\nASK Abc(m_a)\nASK buy(?x,m_b)\n");
  Invocation r = run({"compare", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--queries", queries.path()});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out ==
        "# query\tdynCQE(engine)\tdynCQE(oracle)\tskeptical\tIGA\thonest\n"
        "ASK buy(john,m_a)\tT\tT\tF\tF\tT\n"
        "ASK Abc(m_a)\tF\tF\tF\tF\tT\n"
        "ASK buy(?x,m_b)\tT\tT\tF\tF\tT\n");
}

TEST_CASE("compare exits 3 on an inconsistent instance") {
  TempFile tbox("t13", "A ISA NOT B\n"), abox("a13", "A(c)\nB(c)\n");
  TempFile policy("p13", "DENY A(?x)\n");
  TempFile queries("q13", "ASK A(?x)\n");
  Invocation r = run({"compare", "--tbox", tbox.path(), "--abox", abox.path(),
                      "--policy", policy.path(), "--queries", queries.path()});
  CHECK(r.code == 3);
}
