#include "bubblefield/run.hpp"

#include <sstream>

#include <gtest/gtest.h>
#include "json.hpp"

#include "bubblefield/error.hpp"

namespace bubblefield {
namespace {

using nlohmann::json;

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorKind::IoError, "");
}

TEST(ParseRunConfigTest, DefaultsForEquilibria) {
  const auto cfg = parse_run_config(R"({"command":"equilibria","points":[[0,0,0,0,0],[1,0,0,0,0]]})");
  EXPECT_EQ(cfg.command, Command::Equilibria);
  EXPECT_EQ(cfg.points.size(), 2u);
  EXPECT_EQ(cfg.kappa_source, "closed-form");
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_EQ(cfg.integrator.rtol, 1e-9);
  EXPECT_EQ(cfg.solver.tol, 1e-12);
  EXPECT_EQ(cfg.format, OutputFormat::Json);
  EXPECT_TRUE(cfg.output.empty());
}

TEST(ParseRunConfigTest, K10NeedsNoPoints) {
  const auto cfg = parse_run_config(R"({"command":"k10"})");
  EXPECT_EQ(cfg.command, Command::K10);
  EXPECT_TRUE(cfg.points.empty());
  EXPECT_EQ(cfg.k10.bracket_lo, 4.70);
  EXPECT_EQ(cfg.k10.samples, 100);
}

TEST(ParseRunConfigTest, SimulateRequiresSchedule) {
  const auto e = error_of([] { parse_run_config(R"({"command":"simulate"})"); });
  EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
  EXPECT_NE(std::string(e.what()).find("schedule"), std::string::npos) << e.what();
}

TEST(ParseRunConfigTest, SimulateDirectives) {
  const auto cfg = parse_run_config(R"({
    "command": "simulate",
    "points": [[0,0,0,0,0],[1,0,0,0,0]],
    "schedule": {"kind": "power", "amplitude": 0.1, "rate": 2},
    "initial": "start-at-equilibrium:0,0.2",
    "seed": 9
  })");
  EXPECT_EQ(cfg.format, OutputFormat::Csv);
  ASSERT_TRUE(cfg.schedule && cfg.initial);
  EXPECT_EQ(cfg.schedule->kind, dynamics::ScheduleKind::Power);
  EXPECT_EQ(cfg.initial->equilibrium_index, 0);
  EXPECT_EQ(cfg.initial->offset, 0.2);
  EXPECT_EQ(cfg.solver.seed, 9u);
}

TEST(ParseRunConfigTest, RejectsNonDecayingSchedule) {
  const auto e = error_of([] {
    parse_run_config(R"({"command":"simulate","points":[[0,0,0,0,0],[1,0,0,0,0]],
      "schedule":{"kind":"exponential","amplitude":0.1,"rate":0},"initial":"start-at-equilibrium:0"})");
  });
  EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
}

TEST(ParseRunConfigTest, UnknownKeysAtAnyLevel) {
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"k10","tolerance":1})"); }).kind(),
            ErrorKind::UnknownKey);
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"k10","k10":{"steps":3}})"); }).kind(),
            ErrorKind::UnknownKey);
  EXPECT_EQ(error_of([] {
              parse_run_config(R"({"command":"equilibria","points":[[0,0,0,0,0],[1,0,0,0,0]],
                "solver":{"tol":1e-10,"newton":true}})");
            }).kind(),
            ErrorKind::UnknownKey);
}

TEST(ParseRunConfigTest, ParseErrorReportsPosition) {
  const auto e = error_of([] { parse_run_config("{\n  \"command\": \"k10\",\n  oops\n}"); });
  EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("column"), std::string::npos) << e.what();
}

TEST(ParseRunConfigTest, ValidatesFields) {
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"fly"})"); }).kind(), ErrorKind::ValidationError);
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"equilibria"})"); }).kind(),
            ErrorKind::ValidationError);
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"k10","kappa":-1})"); }).kind(),
            ErrorKind::ValidationError);
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"k10","format":"csv"})"); }).kind(),
            ErrorKind::ValidationError);
  EXPECT_EQ(error_of([] { parse_run_config(R"({"command":"k10","seed":-3})"); }).kind(),
            ErrorKind::ValidationError);
  const auto cfg = parse_run_config(R"({"command":"k10","kappa":"quadrature"})");
  EXPECT_EQ(cfg.kappa_source, "quadrature");
}

TEST(ParsePointsDocumentTest, Basic) {
  const auto d = parse_points_document(R"({"points":[[0,0,0,0,0],[1,2,3,4,5]],"kappa":2.5})");
  EXPECT_EQ(d.points.size(), 2u);
  EXPECT_EQ(d.points[1][4], 5.0);
  EXPECT_EQ(d.kappa, 2.5);
  EXPECT_THROW(parse_points_document(R"({"points":[[0,0,0]]})"), Error);
}

TEST(RunTest, EquilibriaKTwoReportsSixOverKappa) {
  const auto out = run(parse_run_config(R"({"command":"equilibria","points":[[0,0,0,0,0],[1,0,0,0,0]]})"));
  EXPECT_FALSE(out.csv.has_value());
  const auto j = json::parse(out.report);
  ASSERT_EQ(j["solutions"].size(), 1u);
  const double kappa = j["kappa"];
  EXPECT_NEAR(kappa, kappa_closed_form(), 0.0);
  for (double a : j["solutions"][0]["a"]) EXPECT_NEAR(a, 6.0 / kappa, 1e-10 * 6.0 / kappa);
  EXPECT_EQ(j["solutions"][0]["isolation"]["isolated"], true);
}

TEST(RunTest, KThreeCheckIsolatesAllTriangles) {
  const auto j = json::parse(run(parse_run_config(R"({"command":"k3-check","seed":5})")).report);
  EXPECT_EQ(j["triangles"], 50);
  EXPECT_EQ(j["triangles_isolated"], 50);
  EXPECT_EQ(j["solutions_with_pattern"], j["solutions"]);
  EXPECT_LE(j["max_eig18_residual"].get<double>(), 1e-7);
  EXPECT_GT(j["min_abs_det_shift"].get<double>(), 1e-6);
}

TEST(RunTest, K10Report) {
  const auto j = json::parse(run(parse_run_config(R"({"command":"k10"})")).report);
  const double b0 = j["B0"];
  EXPECT_GT(b0, 4.70);
  EXPECT_LT(b0, 4.71);
  EXPECT_EQ(j["lambda"].size(), 10u);
  EXPECT_GT(j["a"].get<double>(), j["b"].get<double>());
  EXPECT_LE(j["max_family_residual"].get<double>(), 1e-9);
  EXPECT_LE(j["kernel_residual"].get<double>(), 1e-8);
  EXPECT_EQ(j["any_member_isolated"], false);
}

TEST(RunTest, SimulateIsDeterministic) {
  const std::string doc = R"({
    "command": "simulate",
    "points": [[0,0,0,0,0],[1,0,0,0,0],[0.2,0.9,0,0.3,0]],
    "schedule": {"kind": "exponential", "amplitude": 0.05, "rate": 1.0},
    "initial": "start-at-equilibrium:0,0.01",
    "t_end": 0.5,
    "seed": 3
  })";
  const auto a = run(parse_run_config(doc));
  const auto b = run(parse_run_config(doc));
  ASSERT_TRUE(a.csv && b.csv);
  EXPECT_EQ(*a.csv, *b.csv);
  EXPECT_EQ(a.report, b.report);
  const std::string header = a.csv->substr(0, a.csv->find('\n'));
  EXPECT_EQ(header, "t,s,alpha_1,alpha_2,alpha_3,beta_1,beta_2,beta_3,L,L_rate,dist_to_eq");
  // 0, 0.1, ..., 0.5 plus the header
  EXPECT_EQ(std::count(a.csv->begin(), a.csv->end(), '\n'), 7);
}

TEST(RunTest, ExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(run_and_write(parse_run_config(R"({"command":"equilibria","points":[[0,0,0,0,0],[1,0,0,0,0]]})"),
                          out, err),
            0);
  EXPECT_TRUE(err.str().empty());

  // the K=2 saddle repels a 20% offset: integration leaves the regime
  const auto cfg = parse_run_config(R"({
    "command": "simulate",
    "points": [[0,0,0,0,0],[1,0,0,0,0]],
    "schedule": {"kind": "exponential", "amplitude": 0.1, "rate": 1.0},
    "initial": "start-at-equilibrium:0,0.2",
    "t_end": 40
  })");
  std::ostringstream out2, err2;
  EXPECT_EQ(run_and_write(cfg, out2, err2), 2);
  EXPECT_TRUE(out2.str().empty());
  const auto j = json::parse(err2.str());
  EXPECT_TRUE(j["error"] == "AlphaCollapse" || j["error"] == "StepUnderflow") << j.dump();
  EXPECT_TRUE(j.contains("time"));
  EXPECT_EQ(j["exit_code"], 2);

  const auto bad_index = parse_run_config(R"({
    "command": "simulate",
    "points": [[0,0,0,0,0],[1,0,0,0,0]],
    "schedule": {"kind": "zero"},
    "initial": "start-at-equilibrium:4,0"
  })");
  std::ostringstream out3, err3;
  EXPECT_EQ(run_and_write(bad_index, out3, err3), 1);
  EXPECT_EQ(json::parse(err3.str())["exit_code"], 1);
}

TEST(RunTest, ErrorJsonShape) {
  const auto j = json::parse(error_json(Error(ErrorKind::UnknownKey, "nope")));
  EXPECT_EQ(j["error"], "UnknownKey");
  EXPECT_EQ(j["message"], "nope");
  EXPECT_EQ(j["exit_code"], 1);
  EXPECT_EQ(exit_code_for(IntegrationError(ErrorKind::AlphaCollapse, 1.0, "x")), 2);
}

}  // namespace
}  // namespace bubblefield
