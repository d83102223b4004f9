#include <catch_amalgamated.hpp>
#include <cmath>

#include "dixmier/error.hpp"
#include "dixmier/experiments.hpp"
#include "dixmier/parallel.hpp"
#include "oracles.hpp"

using namespace dixmier;
using nlohmann::json;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
ErrorCode code_of(const std::string& id, const json& user) {
  try {
    ExperimentConfig::make(id, user);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

json quick_identity() {
  return {{"cutoffs", {{"zeta", 2000}, {"trace", {32}}, {"hs", {48}}, {"bracket", 200}}},
          {"tolerances", {{"zeta_width", 1e-3}, {"bracket_rel", 0.05}}},
          {"parameters", {{"trig_count", 3}, {"hs_count", 2}}}};
}
}  // namespace

TEST_CASE("config validation", "[experiments]") {
  for (const auto& id : experiment_ids()) {
    const auto c = ExperimentConfig::make(id);
    CHECK(c.doc.at("experiment") == id);
    CHECK(c.hash_hex().size() == 16);
  }
  CHECK(code_of("nope", json::object()) == ErrorCode::Validation);
  CHECK(code_of("l2-sharpness", {{"colour", 1}}) == ErrorCode::Validation);
  CHECK(code_of("l2-sharpness", {{"cutoffs", {{"zeta", 3}}}}) == ErrorCode::Validation);
  CHECK(code_of("l2-sharpness", {{"experiment", "l1-residue"}}) == ErrorCode::Validation);
  CHECK(code_of("l1-residue", {{"functions", {{{"kind", "wavelet"}}}}}) == ErrorCode::Validation);
  CHECK(code_of("l1-plus-eps", {{"s_grid", {0.5}}}) == ErrorCode::Validation);
  CHECK(code_of("l2-sharpness", {{"cutoffs", {{"bracket", {4096}}}}}) == ErrorCode::Infeasible);
  CHECK(code_of("l1-counterexample", {{"parameters", {{"n_max", 20}}}}) == ErrorCode::Infeasible);
  try {
    ExperimentConfig::make("l1-plus-eps", {{"cutoffs", {{"bracket", {5000}}}}});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("use N <= 2048") != std::string::npos);
  }

  const auto a = ExperimentConfig::make("l1-residue"), b = ExperimentConfig::make("l1-residue");
  CHECK(a.hash == b.hash);
  CHECK(ExperimentConfig::make("l1-residue", {{"seed", 5}}).hash != a.hash);
  CHECK(ExperimentConfig::make("l1-residue", {{"cutoffs", {{"bracket", {64}}}}}).doc["cutoffs"]["bracket"] == json{64});
}

TEST_CASE("function and symbol specs", "[experiments]") {
  const auto f = parse_function(
      {{"kind", "trig_poly"}, {"coefficients", {{{"index", {1}}, {"re", 0.5}}, {{"index", {-1}}, {"re", 0.5}}}}}, 1);
  CHECK_THAT(f.value(0.25), WithinAbs(0.0, 1e-15));
  CHECK_THAT(f.value(0.0), WithinAbs(1.0, 1e-15));
  CHECK(parse_function({{"kind", "constant"}, {"value", 2.0}}, 2).mean() == 2.0);
  CHECK_THAT(parse_function({{"kind", "log_power"}, {"eps", 0.5}}, 1).mean(), WithinRel(oracle::logpower_mean(0.5), 1e-9));
  CHECK_THROWS_AS(parse_function({{"kind", "log_power"}, {"eps", 0.5}}, 2), Error);
  CHECK_THROWS_AS(parse_function({{"kind", "trig_poly"}, {"coefficients", {{{"index", {1, 0}}}}}}, 1), Error);
  CHECK(parse_symbol({{"kind", "power_resolvent"}, {"order", 2}})(1.0) == 0.5);
  CHECK_THROWS_AS(parse_symbol({{"kind", "exp"}, {"order", 1}}), Error);
}

TEST_CASE("emission", "[experiments]") {
  ResultRecord r;
  r.experiment = "x";
  r.config = ExperimentConfig::make("l1-residue").doc;
  r.config_hash = ExperimentConfig::make("l1-residue").hash_hex();
  r.rows = {{"x", "a", 3, 0.1, 1e-17, -INFINITY, INFINITY}, {"x", "b", 1000000, 1.0 / 3.0, 0, 0, 0}};
  r.predicates = {{"p", true, "fine"}};
  const std::string csv = to_csv(r);
  CHECK(csv ==
        "experiment,route,N_or_k,value,err,lower,upper\n"
        "x,a,3,0.10000000000000001,1.0000000000000001e-17,-inf,inf\n"
        "x,b,1000000,0.33333333333333331,0,0,0\n");
  CHECK(csv.find('\r') == std::string::npos);
  const json j = to_json(r);
  CHECK(j["rows"][0]["upper"] == "inf");
  const auto back = record_from_json(json::parse(j.dump()));
  CHECK(back.rows == r.rows);
  CHECK(back.predicates == r.predicates);
  CHECK(back.config == r.config);
  CHECK(to_csv(back) == csv);
  json bad = j;
  bad["config"]["seed"] = 1;
  CHECK_THROWS_AS(record_from_json(bad), Error);
}

TEST_CASE("quick runs", "[experiments]") {
  const auto id = ExperimentConfig::make("l-infinity-identity", quick_identity());
  set_threads(1);
  const auto r1 = run_experiment(id);
  set_threads(4);
  const auto r4 = run_experiment(id);
  CHECK(to_csv(r1) == to_csv(r4));
  for (const auto& p : r1.predicates) {
    INFO(p.name << ": " << p.detail);
    CHECK(p.pass);
  }
  CHECK(r1.passed());

  const auto ce = run_experiment(ExperimentConfig::make("l1-counterexample", {{"parameters", {{"n_max", 16}}}}));
  CHECK(ce.passed());
  // A range too short to separate growth from convergence is a failed predicate, not an exception.
  const auto strict = run_experiment(ExperimentConfig::make("l1-counterexample",
                                                            {{"parameters", {{"n_max", 6}}}}));
  CHECK_FALSE(strict.passed());

  const auto mb = run_experiment(ExperimentConfig::make("matrix-battery", {{"parameters", {{"instances", 20}}}}));
  CHECK(mb.passed());
  CHECK(mb.rows.size() == 6);
  const auto lb = run_experiment(
      ExperimentConfig::make("limits-battery", {{"parameters", {{"sequences", 5}, {"length", 20000}, {"weight_K", 1000}}},
                                                {"k_grid", {1000}}}));
  CHECK(lb.passed());
  set_threads(1);
}
