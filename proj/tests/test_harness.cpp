#include <sstream>

#include "doctest.h"
#include "sparsity/error.hpp"
#include "sparsity/harness.hpp"
#include "sparsity/records.hpp"

using namespace sparsity;

namespace {

ExperimentConfig from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

int run_text(const std::string& text, std::string& out, std::string& err) {
  auto cfg = from_text(text);
  std::ostringstream o, e;
  const int code = run(cfg, o, e);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = from_text("# comment\nmode=count-squares\n\ng=2\nc=1,1\nK=10\nseed=9\nformat=jsonl\n");
  CHECK(cfg.mode == "count-squares");
  CHECK(cfg.params.at("g") == "2");
  CHECK(cfg.params.at("c") == "1,1");
  CHECK(cfg.seed == 9);
  CHECK(cfg.format == OutputFormat::jsonl);
  CHECK_NOTHROW(validate_config(cfg));
  CHECK(cfg.resolved().count("out") == 0);
  CHECK_THROWS_AS(from_text("mode count-squares\n"), Error);
  CHECK_THROWS_AS(from_text("format=xml\n"), Error);
}

TEST_CASE("unknown keys and modes are rejected by name") {
  auto cfg = from_text("mode=count-squares\ng=2\nc=1,1\nK=4\nbogus=1\n");
  try {
    validate_config(cfg);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_config(from_text("mode=nonsense\n")), Error);
  for (const auto& m : known_modes()) CHECK_FALSE(mode_keys(m).empty());
}

TEST_CASE("box cap derivation") {
  CHECK(derive_box_cap(SparseForm(2, {1, 1}), 20) == 10);
  CHECK(derive_box_cap(SparseForm(4, {9}), 12) == 6);
  CHECK(derive_box_cap(SparseForm(10, {1}), 2) == 2);
  CHECK_THROWS_AS(derive_box_cap(SparseForm(10, {1}), 1), Error);
}

TEST_CASE("records round trip in both formats") {
  std::vector<Record> rows;
  rows.push_back(Record().add("n", std::uint64_t{3}).add("x", -1.25).add("ok", true).add("tag", std::string("a b")).add(
      "none", std::monostate{}));
  rows.push_back(Record().add("n", std::uint64_t{18446744073709551615ULL}).add("x", 0.1).add("ok", false).add(
      "tag", std::string("")).add("none", std::int64_t{-7}));
  const std::map<std::string, std::string> config{{"mode", "demo"}, {"seed", "1"}};
  CHECK(round_trips(OutputFormat::csv, config, rows));
  CHECK(round_trips(OutputFormat::jsonl, config, rows));

  std::vector<Record> ragged = rows;
  ragged[1].fields.pop_back();
  std::ostringstream sink;
  CHECK_THROWS(write_records(sink, OutputFormat::csv, config, ragged));

  std::istringstream cr("# config: a=1\r\nx\n1\n");
  CHECK_THROWS_AS(parse_output(cr, OutputFormat::csv), Error);
}

TEST_CASE("csv layout") {
  std::ostringstream out;
  write_records(out, OutputFormat::csv, {{"b", "2"}, {"a", "1"}}, {Record().add("v", 0.1)});
  CHECK(out.str() == "# config: a=1;b=2\nv\n0.10000000000000001\n");
}

TEST_CASE("run: count-squares output and exit codes") {
  std::string out, err;
  CHECK(run_text("mode=count-squares\ng=2\nc=1,1\nK=10\n", out, err) == kExitOk);
  CHECK(out.find("2,1 1,10,brute,13,") != std::string::npos);
  CHECK(run_text("mode=count-squares\ng=2\nc=1,1\nK=10\nbogus=1\n", out, err) == kExitConfig);
  CHECK(err.find("bogus") != std::string::npos);
  CHECK(run_text("mode=count-squares\ng=2\nc=1,1,1\nK=60\nbudget=1000\n", out, err) == kExitWorkload);
  CHECK(run_text("mode=example-21\nn=3\nprecision_bits=512\n", out, err) == kExitOk);
}

TEST_CASE("run is deterministic") {
  for (const char* text : {"mode=verify-lemma\nlemma=diag-bound\ngrid=true\nseed=3\n",
                           "mode=approx-search\nq=0,0,1\nlambda=2\nc=1,1\nN=50\nformat=jsonl\n",
                           "mode=sieve\ng=2\nz=100\n"}) {
    std::string a, b, e1, e2;
    INFO(text);
    CHECK(run_text(text, a, e1) == kExitOk);
    INFO(e1);
    CHECK(run_text(text, b, e2) == kExitOk);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
  }
}

TEST_CASE("lemma checks") {
  CHECK(check_lemma("product-formula", {{"ell", "5"}, {"r", "7"}, {"theta", "2"}, {"a", "1"}, {"b", "2"}}).pass);
  CHECK(check_lemma("diag-bound", {{"q", "3"}, {"d", "2"}, {"a", "1,1"}}).value == 0);
  CHECK_THROWS_AS(check_lemma("no-such-check", {}), Error);
  for (const auto& name : lemma_names()) {
    const auto grid = lemma_grid(name, 1);
    CHECK_FALSE(grid.empty());
    for (const auto& c : grid) {
      INFO(name << " " << c.params);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("growth table") {
  const auto rows = growth_table(SparseForm(2, {1, 1}), {20, 100, 500});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].count == 7);
  CHECK(rows[1].count == 12);
  CHECK(rows[2].count == 16);
  CHECK_FALSE(rows[0].log_m_gamma.has_value());
  CHECK(growth_table(SparseForm(2, {1, 1, 1}), {50})[0].log_m_gamma.has_value());
  CHECK_THROWS_AS(growth_table(SparseForm(2, {1, 1}), {100, 20}), Error);
}
