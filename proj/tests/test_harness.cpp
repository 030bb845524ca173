#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgt/harness.hpp"
#include "support.hpp"

using namespace cgt;
using namespace cgt::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(std::string const& name) {
  auto d = fs::temp_directory_path() / ("cgt_harness_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_file(fs::path const& p, std::string const& text) { std::ofstream(p) << text; }

std::string read_file(fs::path const& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Json base_config(fs::path const& dir, std::string const& pres) {
  write_file(dir / "g.pres", pres);
  return Json{{"base", "g.pres"}, {"n", {1, 3}}};
}

}  // namespace

TEST_CASE("config parsing") {
  auto dir = scratch("parse");
  auto j = base_config(dir, "gens: x y\nrel: x y x^-1 y^-1\n");
  j["functions"] = {"delta"};
  auto c = parse_config(j, dir.string());
  CHECK(c.n_min == 1);
  CHECK(c.n_max == 3);
  CHECK(c.pipeline == "none");
  CHECK(fs::path(c.base) == dir / "g.pres");
  auto again = parse_config(config_to_json(c), dir.string());
  CHECK(config_to_json(again) == config_to_json(c));

  auto empty = j;
  empty["n"] = {4, 2};
  CHECK_THROWS_AS(parse_config(empty, dir.string()), ConfigError);
  auto unknown = j;
  unknown["functions"] = {"nope"};
  CHECK_THROWS_AS(parse_config(unknown, dir.string()), ConfigError);
  auto no_a = j;
  no_a["functions"] = {"dist"};
  CHECK_THROWS_AS(parse_config(no_a, dir.string()), ConfigError);
  auto bad_audit = j;
  bad_audit["audits"] = {"rips"};
  CHECK_THROWS_AS(parse_config(bad_audit, dir.string()), ConfigError);
  auto no_base = j;
  no_base.erase("base");
  CHECK_THROWS_AS(parse_config(no_base, dir.string()), ConfigError);
  auto hnn = j;
  hnn["pipeline"] = "hnn";
  CHECK_THROWS_AS(parse_config(hnn, dir.string()), ConfigError);
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("table serialization") {
  FunctionTable t;
  t.name = "delta";
  t.samples.push_back({1, 0, Exactness::Exact, ""});
  t.samples.push_back({2, 5, Exactness::LowerBound, "x y"});
  t.budget["states"] = 17;
  auto back = table_from_json(table_to_json(t));
  CHECK(back.name == t.name);
  REQUIRE(back.samples.size() == 2);
  CHECK(back.samples[1].value == 5);
  CHECK(back.samples[1].exactness == Exactness::LowerBound);
  CHECK(back.samples[1].witness == "x y");
  CHECK(table_to_json(back) == table_to_json(t));

  FunctionTable one;
  one.name = "x";
  one.samples.push_back({3, 7, Exactness::Exact, ""});
  auto csv = table_to_csv(one);
  std::istringstream in(csv);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "n,value,exactness");
  CHECK(lines[1].rfind("3,7,", 0) == 0);
}

TEST_CASE("emit suffixes repeated table names") {
  auto dir = scratch("emit");
  ExperimentResult r;
  r.report = Json{{"k", 1}};
  FunctionTable t;
  t.name = "delta";
  t.samples.push_back({1, 0, Exactness::Exact, ""});
  r.tables = {t, t};
  auto paths = emit(r, (dir / "out").string(), {"json", "csv"});
  CHECK(fs::exists(dir / "out.json"));
  CHECK(fs::exists(dir / "out_delta.csv"));
  CHECK(fs::exists(dir / "out_delta_2.csv"));
  CHECK(paths.size() == 3);
}

TEST_CASE("Z^2 Dehn experiment") {
  auto dir = scratch("z2");
  auto j = base_config(dir, "gens: x y\nrel: x y x^-1 y^-1\n");
  j["n"] = {1, 6};
  j["functions"] = {"delta"};
  j["audits"] = {"monotone"};
  auto r = run_experiment(parse_config(j, dir.string()));
  CHECK(r.exit_code == kOk);
  REQUIRE(r.tables.size() == 1);
  std::vector<long long> want{0, 0, 0, 1, 1, 2};
  REQUIRE(r.tables[0].samples.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(r.tables[0].samples[i].value == want[i]);
  REQUIRE(r.audits.size() == 1);
  CHECK(r.audits[0].count(AuditStatus::Fail) == 0);
  CHECK(r.audits[0].count(AuditStatus::Pass) > 0);
  CHECK(r.report["summary"]["audit_failures"] == 0);
}

TEST_CASE("pair audits on F2 with A = {x}") {
  auto sys = make_fibre_system(f2(), {"x"});
  auto s = audit_scholium(sys, 1, 3);
  auto h = audit_half_length(sys, 1, 3);
  CHECK(s.count(AuditStatus::Fail) == 0);
  CHECK(h.count(AuditStatus::Fail) == 0);
  CHECK(s.count(AuditStatus::Pass) == 3);
  CHECK(h.count(AuditStatus::Pass) == 3);
}

TEST_CASE("conjugator audit on F2 with A = {x}") {
  auto sys = make_fibre_system(f2(), {"x"});
  ConjugatorAuditCaps caps;
  caps.random_instances = 10;
  caps.seed = 5;
  auto a = audit_conjugator(sys, 2, 2, caps);
  CHECK(a.count(AuditStatus::Fail) == 0);
  CHECK(a.count(AuditStatus::Pass) >= 10);
}

TEST_CASE("experiments are deterministic") {
  auto dir = scratch("det");
  auto j = base_config(dir, "gens: x y\n");
  j["A"] = {"x"};
  j["n"] = {1, 2};
  j["functions"] = {"dist"};
  j["audits"] = {"conjugator", "half-length"};
  j["conjugator_instances"] = 5;
  j["seed"] = 9;
  auto c = parse_config(j, dir.string());
  auto a = run_experiment(c), b = run_experiment(c, 2);
  CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("pipelines and error stages") {
  auto dir = scratch("pipe");
  auto j = base_config(dir, "gens: x\n");
  j["pipeline"] = "dagger";
  j["n"] = {1, 1};
  j["audits"] = {"dagger"};
  auto r = run_experiment(parse_config(j, dir.string()));
  CHECK(r.exit_code == kOk);
  REQUIRE(r.audits.size() == 1);
  CHECK(r.audits[0].count(AuditStatus::Pass) == 1);

  auto bad = base_config(dir, "gens: x\nrel: x q\n");
  CHECK_THROWS(run_experiment(parse_config(bad, dir.string())));
}

TEST_CASE("worker count from the environment") {
  ::unsetenv("CGT_WORKERS");
  CHECK(worker_count() == 1u);
  ::setenv("CGT_WORKERS", "3", 1);
  CHECK(worker_count() == 3u);
  ::setenv("CGT_WORKERS", "zero", 1);
  CHECK_THROWS_AS(worker_count(), ConfigError);
  ::unsetenv("CGT_WORKERS");
}
