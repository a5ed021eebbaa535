#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "jpsn/baselines.hpp"
#include "jpsn/config.hpp"
#include "jpsn/errors.hpp"
#include "jpsn/io.hpp"
#include "jpsn/mcmc.hpp"
#include "jpsn/workflow.hpp"
#include "test_helpers.hpp"

using namespace jpsn;

namespace {

DatasetRead parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset_csv(in);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("dataset CSV parsing") {
  const auto one = parse("theta:a,y:b\n0.5,-1.2\n");
  CHECK(one.data.p() == 1);
  CHECK(one.data.q() == 1);
  REQUIRE(one.data.size() == 1);
  CHECK(one.data[0].angles[0].value() == 0.5);
  CHECK(one.data[0].linears[0] == -1.2);
  CHECK(one.data.labels() == std::vector<std::string>{"a", "b"});
  CHECK(one.normalized == 0);

  const auto wrapped = parse("theta:a,y:b\n7.0,1\n-0.5,2\n");
  CHECK(wrapped.normalized == 2);
  CHECK(wrapped.data[0].angles[0].value() == doctest::Approx(7.0 - kTwoPi).epsilon(1e-15));
  CHECK(wrapped.data[1].angles[0].value() == doctest::Approx(kTwoPi - 0.5).epsilon(1e-15));

  const auto na = parse("y:u,theta:v,theta:w\nNA,1.0,NA\n2.0,0.1,0.2\n");
  CHECK(na.data.p() == 2);
  CHECK(na.data.q() == 1);
  CHECK(na.data[0].linear_missing[0]);
  CHECK_FALSE(na.data[0].angle_missing[0]);
  CHECK(na.data[0].angle_missing[1]);
  CHECK(na.data.missing_count() == 2);

  CHECK(parse_error_line("theta:a,y:b\n0.5,1\n1,2,3\n") == 3);
  CHECK(parse_error_line("theta:a,y:b\n0.5,abc\n") == 2);
  CHECK(parse_error_line("theta:a,y:b\n0.5\n") == 2);
  CHECK(parse_error_line("angle:a,y:b\n0.5,1\n") == 1);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(read_dataset_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("dataset CSV round trip") {
  Rng rng(71);
  auto sim = simulate_jpsn(synthetic_example(2), 40, rng);
  sim.data[3].angle_missing[1] = true;
  sim.data[5].linear_missing[0] = true;
  const std::string text = dataset_csv_text(sim.data);
  CHECK(text.rfind("theta:theta1,theta:theta2,y:y1\n", 0) == 0);
  std::istringstream in(text);
  const auto back = parse_dataset_csv(in).data;
  REQUIRE(back.size() == sim.data.size());
  for (std::size_t t = 0; t < back.size(); ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back[t].angle_missing[i] == sim.data[t].angle_missing[i]);
      if (!back[t].angle_missing[i]) CHECK(back[t].angles[i] == sim.data[t].angles[i]);
    }
    CHECK(back[t].linear_missing[0] == sim.data[t].linear_missing[0]);
    if (!back[t].linear_missing[0]) CHECK(back[t].linears[0] == sim.data[t].linears[0]);
  }
  CHECK(dataset_csv_text(back) == text);
}

TEST_CASE("format_double round trips") {
  Rng rng(72);
  for (int k = 0; k < 10000; ++k) {
    const double x = std::ldexp(rng.normal(), static_cast<int>(rng.uniform() * 200.0) - 100);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-3.0) == "-3");
}

TEST_CASE("draw files") {
  Rng rng(73);
  const auto sim = simulate_jpsn(synthetic_example(1), 30, rng);
  ChainConfig cfg;
  cfg.iterations = 60;
  cfg.burnin = 20;
  cfg.thin = 4;
  const auto draws = run_gibbs(sim.data, PriorSpec::defaults(2, 1), cfg, rng);

  const auto cols = jpsn_draw_columns(1, 1, true);
  CHECK(cols == std::vector<std::string>{"mu[1]", "mu[2]", "mu[3]", "sigma[1,1]", "sigma[1,2]", "sigma[1,3]",
                                         "sigma[2,2]", "sigma[2,3]", "sigma[3,3]", "lambda[1]", "c[1]"});

  const auto dir = testing::scratch_dir("io_draws");
  const std::string raw = (dir / "raw.csv").string(), ident = (dir / "ident.csv").string();
  write_text_file(raw, raw_draws_csv(draws));
  write_text_file(ident, identified_draws_csv(draws));
  const auto rs = read_jpsn_draws(raw, 2, 1);
  const auto is = read_jpsn_draws(ident, 2, 1);
  REQUIRE(rs.params.size() == draws.size());
  REQUIRE(is.c.size() == draws.size());
  for (std::size_t k = 0; k < draws.size(); ++k) {
    CHECK(rs.iterations[k] == draws.raw[k].iteration);
    CHECK(rs.params[k].mu == draws.raw[k].params.mu);
    CHECK(rs.params[k].sigma == draws.raw[k].params.sigma);
    CHECK(rs.params[k].lambda == draws.raw[k].params.lambda);
    CHECK(is.params[k].sigma == draws.identified[k].params.sigma);
    CHECK(is.c[k].c == draws.identified[k].c.c);
  }
  const auto table = read_numeric_csv(raw);
  CHECK(table.header.front() == "iter");
  CHECK(table.column("sigma[1,2]").size() == draws.size());
  CHECK_THROWS_AS(table.column("nope"), ParseError);

  const std::string lat = latents_csv(draws);
  CHECK(lat.substr(0, lat.find('\n')).find("iter") != std::string::npos);
}

TEST_CASE("parameter JSON") {
  const JpsnParams ex = synthetic_example(3);
  const JpsnParams back = parse_params_json(params_json(ex));
  CHECK(back.p == 2);
  CHECK(back.q == 1);
  CHECK(back.constrained);
  CHECK(back.mu == ex.mu);
  CHECK(back.sigma == ex.sigma);
  CHECK(back.lambda == ex.lambda);
  CHECK_THROWS_AS(parse_params_json("{\"p\": 1}"), ParseError);
  CHECK_THROWS_AS(parse_params_json("not json"), ParseError);
}

TEST_CASE("Abe-Ley draw files") {
  AbeLeyDraws d;
  d.iterations = {2, 4};
  d.draws = {AbeLeyParams(2.0, 1.0, Angle(3.0), 1.0, 0.3), AbeLeyParams(1.5, 0.7, Angle(0.1), 0.2, -0.9)};
  const auto dir = testing::scratch_dir("io_abeley");
  const std::string path = (dir / "ab.csv").string();
  write_text_file(path, abeley_draws_csv(d));
  const auto back = read_abeley_draws(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].alpha() == 1.5);
  CHECK(back[1].lambda_skew() == -0.9);
  CHECK(back[0].mu().value() == 3.0);
}

TEST_CASE("predictions CSV") {
  PolyCylDataset d(1, 1, {"turn", "step"});
  PolyCylObservation o({Angle(0.0)}, {1.0});
  o.angle_missing = {true};
  d.add(PolyCylObservation({Angle(1.0)}, {2.0}));
  d.add(o);
  const auto text = predictions_csv(d, missing_entries(d), {{0.25}, {0.5}});
  CHECK(text == "t,variable,draw,value\n2,turn,1,0.25\n2,turn,2,0.5\n");
}

TEST_CASE("run configuration") {
  RunConfig cfg;
  CHECK(cfg.get("model.type") == "jpsn");
  CHECK(cfg.get_uint("chain.iterations") == 12000);
  CHECK(cfg.get_uint("chain.burnin") == 8000);
  CHECK(cfg.get_uint("chain.thin") == 2);
  CHECK(cfg.get_double("prior.kappa0") == 0.001);
  CHECK(cfg.get_double("scoring.holdout_fraction") == 0.1);
  CHECK(cfg.values().size() == RunConfig::known_keys().size());

  cfg.set("chain.seed", "42");
  CHECK(cfg.get_uint("chain.seed") == 42);
  CHECK_THROWS_AS(cfg.set("chain.sed", "1"), DomainError);
  CHECK_THROWS_AS(cfg.set("chain.iterations", "many"), DomainError);
  CHECK_THROWS_AS(cfg.set("model.type", "gp"), DomainError);

  cfg.load_text("# comment\nchain.iterations = 500\n\nchain.burnin=100 # trailing\n");
  CHECK(cfg.get_uint("chain.iterations") == 500);
  CHECK(cfg.get_uint("chain.burnin") == 100);
  try {
    cfg.load_text("chain.thin = 2\nbogus.key = 1\n");
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  cfg.load_text(R"({"subcommand": "fit", "config": {"chain.thin": "5", "prior.nu0": 20}})");
  CHECK(cfg.get_uint("chain.thin") == 5);
  CHECK(cfg.get_double("prior.nu0") == 20.0);
  CHECK_THROWS_AS(cfg.load_file("/nonexistent/cfg.txt"), IoError);
}

TEST_CASE("configuration to sampler settings") {
  RunConfig cfg;
  cfg.set("prior.nu0", "auto");
  const PriorSpec pr = prior_from_config(cfg, 2, 1);
  CHECK(pr.niw.nu0 == 15.0);
  CHECK(pr.niw.kappa0 == 0.001);
  CHECK(pr.lambda_cov(0, 0) == 100.0);
  cfg.set("chain.iterations", "900");
  cfg.set("chain.burnin", "300");
  cfg.set("chain.thin", "3");
  const ChainConfig cc = chain_from_config(cfg);
  CHECK(cc.iterations == 900);
  CHECK(cc.stored_count() == 200);
  const auto blocks = parse_partition("0|0;1,2|1", 3, 2);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[1].circular == std::vector<std::size_t>{1, 2});
  CHECK(parse_partition("units", 2, 2).size() == 2);
  CHECK_THROWS_AS(parse_partition("0|0", 2, 2), DomainError);
}
