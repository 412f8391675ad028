#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cubic_euler/checkpoint.hpp"
#include "cubic_euler/runner.hpp"

using namespace cubic_euler;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cubic-euler-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const RunConfig& config) {
  std::ostringstream out, err;
  const int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

RunConfig csv_period(int p) {
  RunConfig c;
  c.period = p;
  c.format = OutputFormat::csv;
  return c;
}

Checkpoint snapshot(int p, std::size_t steps) {
  PeriodicEnumerator e(p);
  PeriodAccumulator acc(p, {1, false, true});
  e.initialize(acc.sink());
  e.run(steps, 1, acc.sink());
  const auto audit = acc.audit();
  return {p, e.stats(), acc.summary(), AuditState{audit->found(), audit->unexpected()}, e.remaining()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("checkpoint text round trip") {
  const Checkpoint cp = snapshot(8, 10);
  std::stringstream text;
  write_checkpoint(text, cp);
  CHECK(text.str().rfind("CUBIC-EULER v1 period=8\n", 0) == 0);
  CHECK(text.str().find("END " + std::to_string(cp.remaining.size()) + "\n") != std::string::npos);
  const Checkpoint back = read_checkpoint(text, 8);
  CHECK(back == cp);
  CHECK(back.stats == cp.stats);
}

TEST_CASE("checkpoint right after initialization") {
  Checkpoint cp = snapshot(6, 0);
  std::stringstream text;
  write_checkpoint(text, cp);
  CHECK(read_checkpoint(text) == cp);
}

TEST_CASE("checkpoint rejects bad input") {
  std::stringstream good;
  write_checkpoint(good, snapshot(5, 1));
  const std::string text = good.str();

  auto reject = [](const std::string& s, int expected_period = 0) {
    std::istringstream in(s);
    CHECK_THROWS_AS(read_checkpoint(in, expected_period), CheckpointError);
  };
  reject(text, 6);  // wrong period
  std::string v2 = text;
  v2.replace(v2.find("v1"), 2, "v2");
  reject(v2);
  reject(text.substr(0, text.size() - 6));  // truncated END line
  std::string bad_count = text;
  bad_count.replace(bad_count.rfind("END"), std::string::npos, "END 999\n");
  reject(bad_count);
  std::string bad_item = text;
  bad_item.insert(bad_item.rfind("END"), "0,2,0,0,0\n");
  reject(bad_item);
  std::string short_item = text;
  short_item.insert(short_item.rfind("END"), "0,1\n");
  reject(short_item);
  std::string junk = text;
  junk.insert(junk.rfind("END"), "0,x,0,0,0\n");
  reject(junk);
  reject("");
  reject("hello\n");
}

TEST_CASE("resume mid-run finishes period 10 with 649 taus") {
  TempDir dir;
  const std::string ck = dir.file("p10.ck");

  RunConfig first = csv_period(10);
  first.checkpoint_path = ck;
  first.stop_after = 200;
  const Outcome stopped = invoke(first);
  CHECK(stopped.code == kExitStopped);
  CHECK(stopped.out.empty());
  const Checkpoint mid = read_checkpoint(ck, 10);
  CHECK(mid.remaining.size() == 435 - 200);
  CHECK(mid.summary.tau_count < 649);

  RunConfig second = csv_period(10);
  second.resume_path = ck;
  second.stats = true;
  second.workers = 2;
  const Outcome resumed = invoke(second);
  CHECK(resumed.code == kExitOk);
  CHECK(resumed.out.find("\n10,649,8301,") != std::string::npos);

  RunConfig straight = csv_period(10);
  straight.stats = true;
  CHECK(invoke(straight).out == resumed.out);
}

TEST_CASE("periodic checkpoints and a resume chain") {
  TempDir dir;
  const std::string ck = dir.file("p9.ck");
  RunConfig c = csv_period(9);
  c.checkpoint_path = ck;
  c.checkpoint_every = 20;
  c.stop_after = 50;
  CHECK(invoke(c).code == kExitStopped);
  c.resume_path = ck;
  CHECK(invoke(c).code == kExitStopped);
  c.stop_after = 0;
  const Outcome done = invoke(c);
  CHECK(done.code == kExitOk);
  CHECK(done.out == invoke(csv_period(9)).out);
  CHECK(read_checkpoint(ck, 9).remaining.size() == 0);
}

TEST_CASE("resume with the wrong period fails") {
  TempDir dir;
  const std::string ck = dir.file("p7.ck");
  write_checkpoint(ck, snapshot(7, 2));
  RunConfig c = csv_period(8);
  c.resume_path = ck;
  const Outcome o = invoke(c);
  CHECK(o.code == kExitFailure);
  CHECK(o.err.find("period 7") != std::string::npos);
}

TEST_CASE("csv output") {
  RunConfig c;
  c.through = 4;
  c.format = OutputFormat::csv;
  const Outcome o = invoke(c);
  CHECK(o.code == kExitOk);
  CHECK(o.out ==
        "period,tau_count,central_ends,num_ends,degree,euler_char,neg_ratio\n"
        "1,1,1,1,1,2,-2.000\n"
        "2,1,1,2,2,2,-0.667\n"
        "3,3,5,8,8,0,0.000\n"
        "4,6,13,20,24,-28,1.037\n");
  CHECK(invoke(csv_period(1)).out.find("\n1,1,1,1,1,2,-2.000\n") != std::string::npos);
}

TEST_CASE("stats block for period 10") {
  RunConfig c = csv_period(10);
  c.stats = true;
  const std::string out = invoke(c).out;
  CHECK(out.find("\nperiod,length,periodic,discard,continue\n"
                 "10,10,205,1,435\n10,11,201,242,506\n10,12,139,567,479\n10,13,57,780,279\n"
                 "10,14,26,497,134\n10,15,12,251,61\n10,16,6,122,21\n10,17,2,43,6\n10,18,1,13,0\n") !=
        std::string::npos);

  c.format = OutputFormat::table;
  const std::string table = invoke(c).out;
  CHECK(table.find("Length  Periodic  Discard  Continue") != std::string::npos);
  CHECK(table.find("    10       205        1       435") != std::string::npos);
}

TEST_CASE("json output") {
  RunConfig c;
  c.through = 5;
  c.format = OutputFormat::json;
  c.stats = true;
  const auto doc = nlohmann::json::parse(invoke(c).out);
  REQUIRE(doc["periods"].size() == 5);
  const auto& p5 = doc["periods"][4];
  CHECK(p5["period"] == 5);
  CHECK(p5["tau_count"] == 15);
  CHECK(p5["central_ends"] == 41);
  CHECK(p5["degree"] == 80);
  CHECK(p5["euler_char"] == -184);
  CHECK(p5["neg_ratio"] == "2.272");
  CHECK(p5["stats"][0]["discard"] == 1);
}

TEST_CASE("output file and worker determinism") {
  TempDir dir;
  RunConfig c;
  c.through = 11;
  c.stats = true;
  c.out_path = dir.file("report.txt");
  CHECK(invoke(c).code == kExitOk);
  const std::string serial = slurp(c.out_path);
  c.workers = 4;
  CHECK(invoke(c).code == kExitOk);
  CHECK(slurp(c.out_path) == serial);

  c.out_path = dir.file("missing/dir/report.txt");
  CHECK(invoke(c).code == kExitFailure);
}

TEST_CASE("config validation") {
  RunConfig none;
  CHECK(invoke(none).code == kExitUsage);
  RunConfig both;
  both.period = 3;
  both.through = 3;
  CHECK(invoke(both).code == kExitUsage);
  RunConfig huge;
  huge.period = 1000;
  CHECK(invoke(huge).code == kExitUsage);
  RunConfig no_workers;
  no_workers.period = 3;
  no_workers.workers = 0;
  CHECK(invoke(no_workers).code == kExitUsage);
  RunConfig range_ck;
  range_ck.through = 3;
  range_ck.checkpoint_path = "x";
  CHECK(invoke(range_ck).code == kExitUsage);
  RunConfig stop_alone;
  stop_alone.period = 3;
  stop_alone.stop_after = 1;
  CHECK(invoke(stop_alone).code == kExitUsage);
}

TEST_CASE("no-verify still reports") {
  RunConfig c = csv_period(6);
  c.verify = false;
  const Outcome o = invoke(c);
  CHECK(o.code == kExitOk);
  CHECK(o.out.find("\n6,29,109,") != std::string::npos);
}
