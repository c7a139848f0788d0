#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/args.hpp"
#include "cli/commands.hpp"
#include "mcdelay/errors.hpp"

namespace cli = mcdelay::cli;

namespace {

cli::RunSpec spec(cli::Command c, std::map<std::string, std::string> params, int figure = 0) {
  cli::RunSpec s;
  s.command = c;
  s.params = std::move(params);
  s.figure = figure;
  return s;
}

cli::ParsedArgs parse(std::vector<std::string> args) {
  args.insert(args.begin(), "mcdelay");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::parse_command_line(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mcdelay_test_" + name);
}

}  // namespace

TEST(CliMellin, ExponentialClosedForm) {
  const auto t = cli::execute(spec(cli::Command::Mellin,
                                   {{"M", "1"}, {"K", "1"}, {"power-db", "0"}, {"s", "0.5"},
                                    {"method", "exact"}}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_NEAR(t.number(0, "value"), 0.757872, 1e-6);
}

TEST(CliMellin, AlzerEmitsBothBounds) {
  const auto t = cli::execute(spec(cli::Command::Mellin,
                                   {{"M", "2"}, {"K", "3"}, {"s", "0.2,0.7"}, {"method", "alzer"}}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_LE(t.number(0, "value"), t.number(1, "value"));
}

TEST(CliEvt, WeibullParameters) {
  const auto t = cli::execute(spec(cli::Command::Evt, {{"M", "2"}, {"K", "8"}}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.number(0, "c"), 0.0);
  EXPECT_NEAR(t.number(0, "d"), 0.25, 1e-15);
  EXPECT_EQ(t.number(0, "kappa"), 2.0);
  const auto text = cli::render(t, cli::Format::Csv);
  EXPECT_NE(text.find("0,0.25,2,"), std::string::npos);
}

TEST(CliFigure, FigureOneBoundsAreMonotone) {
  const auto t = cli::execute(spec(cli::Command::Figure, {{"replications", "2"}, {"horizon", "4000"}}, 1));
  ASSERT_EQ(t.columns.front(), "rate_bps");
  ASSERT_EQ(t.rows.size(), 60u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (t.number(i, "rate_bps") != t.number(i - 1, "rate_bps")) continue;
    for (const char* col : {"bound_exact", "bound_alzer_lower", "bound_alzer_upper", "sim_p_hat"}) {
      EXPECT_LE(t.number(i, col), t.number(i - 1, col) * (1 + 1e-9)) << col << " row " << i;
    }
    EXPECT_LE(t.number(i, "bound_alzer_lower"), t.number(i, "bound_exact") * (1 + 1e-6));
    EXPECT_GE(t.number(i, "bound_alzer_upper"), t.number(i, "bound_exact") * (1 - 1e-6));
  }
}

TEST(CliFigure, FigureThreeFallsBackToQuadrature) {
  std::vector<std::string> notes;
  const auto t = cli::execute(
      spec(cli::Command::Figure, {{"replications", "0"}, {"w-max", "4"}}, 3), &notes);
  ASSERT_EQ(t.rows.size(), 5u);
  bool found = false;
  for (const auto& [k, v] : t.params) {
    if (k == "exact_method") {
      found = true;
      EXPECT_EQ(std::get<std::string>(v), "quadrature");
    }
  }
  EXPECT_TRUE(found);
  EXPECT_FALSE(notes.empty());
  EXPECT_TRUE(std::isnan(t.number(0, "sim_p_hat")));
}

TEST(CliFigure, FigureTwoColumns) {
  const auto t = cli::execute(spec(cli::Command::Figure, {{"replications", "0"}, {"M", "2:4"}}, 2));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.columns[0], "M");
  EXPECT_EQ(t.number(0, "M"), 2.0);
  EXPECT_GT(t.number(0, "bound"), t.number(1, "bound"));
}

TEST(CliOutput, RowsCarryResolvedParameters) {
  const auto t = cli::execute(spec(cli::Command::DelayBound,
                                   {{"power-db", "10"}, {"w", "1,2"}, {"method", "quadrature"}}));
  const auto csv = cli::render(t, cli::Format::Csv);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  for (const char* key : {"M", "K", "power_db", "P", "rho", "N", "slot_s", "rate_bps",
                          "lambda_nats_per_slot"}) {
    EXPECT_NE(header.find(std::string(",") + key + ","), std::string::npos) << key;
  }
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    EXPECT_NE(row.find(",10,10,2,100,0.002,100000,138.629436112,"), std::string::npos) << row;
  }
  EXPECT_EQ(rows, 2);
}

TEST(CliOutput, JsonMirrorsColumns) {
  const auto t = cli::execute(spec(cli::Command::EffectiveCapacity,
                                   {{"M", "1"}, {"K", "1"}, {"power-db", "0"}, {"theta", "0.5"}}));
  const auto json = cli::render(t, cli::Format::Json);
  EXPECT_NE(json.find("\"params\""), std::string::npos);
  EXPECT_NE(json.find("\"effective_capacity\": [\n      0.554481"), std::string::npos) << json;
}

TEST(CliOutput, ByteIdenticalReruns) {
  auto s = spec(cli::Command::Simulate, {{"horizon", "3000"}, {"replications", "3"}, {"seed", "9"},
                                         {"rate-bps", "110000"}});
  const auto path = temp_path("rerun.csv");
  s.out = path.string();
  std::ostringstream sink, diag;
  ASSERT_EQ(cli::run(s, sink, diag), cli::kExitOk) << diag.str();
  const std::string first = slurp(s.out);
  ASSERT_EQ(cli::run(s, sink, diag), cli::kExitOk);
  EXPECT_EQ(first, slurp(s.out));
  EXPECT_FALSE(first.empty());
  std::filesystem::remove(path);
}

TEST(CliErrors, StructuredExitCodes) {
  std::ostringstream out, diag;
  EXPECT_EQ(cli::run(spec(cli::Command::Mellin, {{"bogus", "1"}}), out, diag), cli::kExitConfig);
  EXPECT_NE(diag.str().find("\"kind\":\"config\""), std::string::npos) << diag.str();

  diag.str("");
  EXPECT_EQ(cli::run(spec(cli::Command::Mellin, {{"M", "abc"}}), out, diag), cli::kExitConfig);

  diag.str("");
  EXPECT_EQ(cli::run(spec(cli::Command::Mellin, {{"M", "12"}, {"K", "60"}, {"method", "exact"}}),
                     out, diag),
            cli::kExitNumerical);
  EXPECT_NE(diag.str().find("budget-exceeded"), std::string::npos) << diag.str();

  diag.str("");
  EXPECT_EQ(cli::run(spec(cli::Command::Mellin, {{"M", "5"}, {"K", "10"}, {"method", "alzer"}}),
                     out, diag),
            cli::kExitNumerical);
  EXPECT_NE(diag.str().find("precision-loss"), std::string::npos) << diag.str();

  diag.str("");
  auto bad_out = spec(cli::Command::Evt, {});
  bad_out.out = "/nonexistent-dir/x.csv";
  EXPECT_EQ(cli::run(bad_out, out, diag), cli::kExitIo);
}

TEST(CliErrors, UnstableIsReportedNotFatal) {
  std::ostringstream out, diag;
  const int code = cli::run(spec(cli::Command::DelayBound,
                                 {{"M", "1"}, {"K", "10"}, {"rate-bps", "500000"}, {"w", "3"},
                                  {"method", "quadrature"}}),
                            out, diag);
  EXPECT_EQ(code, cli::kExitOk);
  EXPECT_NE(diag.str().find("unstable"), std::string::npos);
  EXPECT_NE(out.str().find("\n3,quadrature,1,"), std::string::npos) << out.str();
}

TEST(CliArgs, FlagsAndFallthrough) {
  const auto p = parse({"--M", "3", "delay-bound", "--K", "4", "--w", "1,2", "--format", "json"});
  ASSERT_TRUE(p.spec);
  EXPECT_EQ(p.spec->command, cli::Command::DelayBound);
  EXPECT_EQ(p.spec->params.at("M"), "3");
  EXPECT_EQ(p.spec->params.at("K"), "4");
  EXPECT_EQ(p.spec->params.at("w"), "1,2");
  EXPECT_EQ(p.spec->format, cli::Format::Json);
  EXPECT_EQ(p.spec->params.count("power-db"), 0u);

  const auto f = parse({"figure", "2", "--replications", "0", "--asymptotic-verbatim"});
  ASSERT_TRUE(f.spec);
  EXPECT_EQ(f.spec->command, cli::Command::Figure);
  EXPECT_EQ(f.spec->figure, 2);
  EXPECT_EQ(f.spec->params.at("asymptotic-verbatim"), "1");

  EXPECT_FALSE(parse({"figure", "4"}).spec);
  EXPECT_FALSE(parse({"mellin", "--format", "xml"}).spec);
  EXPECT_FALSE(parse({}).spec);
  const auto h = parse({"--help"});
  EXPECT_FALSE(h.spec);
  EXPECT_EQ(h.exit_code, 0);
}

TEST(CliArgs, ConfigFileWithFlagPrecedence) {
  const auto path = temp_path("run.ini");
  {
    std::ofstream f(path);
    f << "# sweep settings\nM=4\nK=6\npower-db=3\nrate-bps=50000\n";
  }
  const auto p = parse({"delay-bound", "--config", path.string(), "--K", "2"});
  ASSERT_TRUE(p.spec) << p.message;
  EXPECT_EQ(p.spec->params.at("M"), "4");
  EXPECT_EQ(p.spec->params.at("K"), "2");
  EXPECT_EQ(p.spec->params.at("power-db"), "3");
  EXPECT_EQ(p.spec->params.at("rate-bps"), "50000");
  std::filesystem::remove(path);
}
