#include <catch2/catch_amalgamated.hpp>

#include "eigencrit/harness.hpp"

using namespace eigencrit;

namespace {

json base_config() {
  return json::parse(R"({
    "domains": [{"family": "rectangle"}],
    "N": [4],
    "h": [0.015625],
    "m": 2,
    "analyses": {"critical_points": true, "nodal": true}
  })");
}

}  // namespace

TEST_CASE("rectangle config produces two critical points") {
  const ExperimentConfig cfg = parse_config(base_config());
  const ResultBundle b = run_experiment(cfg);
  REQUIRE(b.records.size() == 1);
  REQUIRE(b.records[0].ok);
  CHECK(b.records[0].crit.size() == 2);
  CHECK(b.records[0].lambdas.size() == 2);
  CHECK(b.records[0].n_curves == 1);
}

TEST_CASE("invalid family and unsupported h are rejected at parse time") {
  json bad = base_config();
  bad["domains"][0]["family"] = "pentagon";
  CHECK_THROWS_AS(parse_config(bad), Error);
  json badh = base_config();
  badh["h"] = {0.1};
  CHECK_THROWS_AS(parse_config(badh), Error);
}

TEST_CASE("config hash tracks semantic fields only") {
  const ExperimentConfig a = parse_config(base_config());
  json j2 = base_config();
  j2["m"] = 3;
  const ExperimentConfig b = parse_config(j2);
  json j3 = base_config();
  j3["out"] = "elsewhere";  // output path is not semantic
  const ExperimentConfig c = parse_config(j3);
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a) == config_hash(c));
}

TEST_CASE("bundle JSON round-trips losslessly") {
  const ExperimentConfig cfg = parse_config(base_config());
  const ResultBundle b = run_experiment(cfg);
  const json j = bundle_to_json(b);
  const ResultBundle b2 = bundle_from_json(j);
  CHECK(bundle_to_json(b2).dump() == j.dump());
  CHECK(b2.hash == b.hash);
  CHECK(b2.records[0].crit.size() == b.records[0].crit.size());
}

TEST_CASE("reruns are byte-identical regardless of thread count") {
  ExperimentConfig cfg = parse_config(base_config());
  cfg.threads = 1;
  const std::string once = bundle_to_json(run_experiment(cfg)).dump();
  cfg.threads = 4;
  const std::string again = bundle_to_json(run_experiment(cfg)).dump();
  CHECK(once == again);
}

TEST_CASE("per-cell failures are captured as data, sweep continues") {
  json j = base_config();
  j["N"] = {0.0625, 4.0};  // first cell too thin for the grid: must fail alone
  const ExperimentConfig cfg = parse_config(j);
  const ResultBundle b = run_experiment(cfg);
  REQUIRE(b.records.size() == 2);
  CHECK_FALSE(b.records[0].ok);
  CHECK_FALSE(b.records[0].error.empty());
  CHECK(b.records[1].ok);
}

TEST_CASE("empty-domain sweep writes valid empty tables") {
  json j = base_config();
  j["N"] = json::array();
  const ExperimentConfig cfg = parse_config(j);
  const ResultBundle b = run_experiment(cfg);
  CHECK(b.records.empty());
  const auto dir = std::filesystem::temp_directory_path() / "eigencrit_empty";
  emit_report(b, dir.string(), "csv");
  std::ifstream in(dir / "eigenvalues.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "family,N,h,m,lambda,residual");
  const ResultBundle back = bundle_from_json(
      json::parse(std::ifstream(dir / "results.json")));
  CHECK(back.records.empty());
}
