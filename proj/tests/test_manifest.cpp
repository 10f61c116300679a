#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "symmcirc/manifest.hpp"

using namespace symmcirc;

namespace {

const char* kGood = R"({
  "kind": "sweep",
  "sizes": [16, 32],
  "p_s": [0.4, 0.5],
  "p_u": [0.0, 0.1],
  "trajectories": 10,
  "schedule": "sequential",
  "basis": "Z",
  "master_seed": 42,
  "observables": ["s_topo", "half_chain"],
  "out": "results"
})";

std::string error_of(const std::string& text) {
  try {
    RunManifest::parse_json_text(text);
  } catch (const ManifestError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a valid manifest parses into the right fields") {
  RunManifest m = RunManifest::parse_json_text(kGood);
  CHECK(m.kind == RunManifest::Kind::sweep);
  CHECK(m.sizes == std::vector<size_t>{16, 32});
  CHECK(m.p_s_grid == std::vector<double>{0.4, 0.5});
  CHECK(m.trajectories == 10);
  CHECK(m.master_seed == 42);
  CHECK(m.observables == std::vector<std::string>{"s_topo", "half_chain"});
  CircuitConfig cfg = m.config_for(16, 0.4, 0.1);
  CHECK(cfg.n == 16);
  CHECK(cfg.p_s == 0.4);
  CHECK(cfg.master_seed == 42);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("unknown keys are rejected") {
  std::string err = error_of(R"({"kind":"sweep","sizes":[8],"p_s":[0.5],"bogus":1})");
  CHECK(err.find("unknown key \"bogus\"") != std::string::npos);
}

TEST_CASE("constraint violations name the offending values") {
  std::string err =
      error_of(R"({"kind":"sweep","sizes":[8],"p_s":[0.7],"p_u":[0.5]})");
  CHECK(err.find("p_s+p_u>1") != std::string::npos);
  err = error_of(R"({"kind":"sweep","sizes":[7],"p_s":[0.5]})");
  CHECK(err.find("even") != std::string::npos);
  err = error_of(R"({"kind":"sweep","sizes":[8],"p_s":[]})");
  CHECK(err.find("p_s") != std::string::npos);
}

TEST_CASE("all violations are reported at once") {
  std::string err = error_of(
      R"({"kind":"sweep","sizes":[7],"p_s":[1.5],"trajectories":0,"junk":true})");
  CHECK(err.find("even") != std::string::npos);
  CHECK(err.find("out of [0,1]") != std::string::npos);
  CHECK(err.find("trajectories") != std::string::npos);
  CHECK(err.find("junk") != std::string::npos);
}

TEST_CASE("oracle manifests require measurement-only physics") {
  std::string err = error_of(
      R"({"kind":"oracle","sizes":[16],"p_s":[0.4],"p_u":[0.2]})");
  CHECK(err.find("must be 0") != std::string::npos);
}

TEST_CASE("invalid JSON and enum values") {
  CHECK(error_of("not json").find("not valid JSON") != std::string::npos);
  CHECK(error_of(R"({"kind":"nope","sizes":[8],"p_s":[0.5]})").find("unknown value") !=
        std::string::npos);
  CHECK(error_of(R"({"kind":"sweep","sizes":[8],"p_s":[0.5],"basis":"Q"})")
            .find("basis") != std::string::npos);
}

TEST_CASE("CSV rows round trip and reject unknown schemas") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "symmcirc_manifest_test";
  fs::create_directories(dir);
  std::string path = (dir / "rows.csv").string();

  std::vector<ResultRow> rows = {
      {0.4, 0.0, 16, 32, "s_topo", 0, 2.0, 12345},
      {0.4, 0.0, 16, 32, "s_topo", 1, 0.0, 67890},
      {0.5, 0.1, 32, 64, "half_chain", 7, 3.0, 42},
  };
  write_rows_csv(path, rows);
  std::vector<ResultRow> back = read_rows_csv(path);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].p_s == rows[i].p_s);
    CHECK(back[i].p_u == rows[i].p_u);
    CHECK(back[i].L == rows[i].L);
    CHECK(back[i].t == rows[i].t);
    CHECK(back[i].observable == rows[i].observable);
    CHECK(back[i].trajectory == rows[i].trajectory);
    CHECK(back[i].value == rows[i].value);
    CHECK(back[i].seed == rows[i].seed);
  }

  std::string bad = (dir / "bad.csv").string();
  {
    std::ofstream out(bad);
    out << "# some-other-schema v9\np_s,p_u\n";
  }
  CHECK_THROWS_WITH_AS(read_rows_csv(bad),
                       doctest::Contains("unknown CSV schema"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("parse_file reports missing files") {
  CHECK_THROWS_AS(RunManifest::parse_file("/nonexistent/manifest.json"), ManifestError);
}
