#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/solver.hpp"

using namespace corrgen;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig cfg;
  cfg.p = 8;
  cfg.runs = 3;
  cfg.density_grid = {0.3, 0.8};
  cfg.b_grid = {-1.0, 0.2, 0.9};
  cfg.threads = 2;
  return cfg;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string header_row(const std::string& csv) {
  for (const auto& line : lines_of(csv))
    if (line.rfind("#", 0) != 0) return line;
  return {};
}

}  // namespace

TEST(ExperimentConfig, JsonRoundTrip) {
  ExperimentConfig cfg = tiny();
  cfg.methods = {Method::Convex, Method::ChordalCholesky};
  cfg.graph_models = {GraphModel::WattsStrogatz};
  cfg.solver.detector.window = 250;
  cfg.numerics.jacobi_max_sweeps = 50;
  const auto back = config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(back.methods, cfg.methods);
  EXPECT_EQ(back.numerics.jacobi_max_sweeps, 50);
}

TEST(ExperimentConfig, RejectsBadInput) {
  EXPECT_THROW(config_from_json({{"unknown", 1}}), Error);
  EXPECT_THROW(config_from_json({{"p", "ten"}}), Error);
  EXPECT_THROW(config_from_json({{"p", 2}}), Error);
  EXPECT_THROW(config_from_json({{"runs", -1}}), Error);
  EXPECT_THROW(config_from_json({{"methods", {"magic"}}}), Error);
  EXPECT_THROW(config_from_json({{"density_grid", {0.0}}}), Error);
  EXPECT_THROW(config_from_json({{"solver", {{"tolerance", 1e-6}}}}), Error);
  EXPECT_THROW(config_from_json({{"numerics", {{"jacobi", 1}}}}), Error);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), Error);
  EXPECT_EQ(config_from_json({{"p", 12}}, ExperimentConfig::quick()).runs, 10u);
}

TEST(Method, Names) {
  for (auto m : {Method::DiagonalDominance, Method::ChordalCholesky,
                 Method::PartialOrthogonalization, Method::Convex})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("cvx"), Error);
}

TEST(Median, EvenOddEmpty) {
  EXPECT_EQ(median({}), 0.0);
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
}

TEST(StripColumns, BlanksNamedColumns) {
  const std::string csv = "# k=v\na,wall_time_s,b\n1,0.5,2\n3,0.25,4\n";
  EXPECT_EQ(strip_columns(csv, {"wall_time_s"}), "# k=v\na,wall_time_s,b\n1,,2\n3,,4\n");
}

TEST(Experiments, ComparisonHasEveryMethodGroup) {
  auto cfg = tiny();
  cfg.methods = {Method::DiagonalDominance, Method::ChordalCholesky,
                 Method::PartialOrthogonalization, Method::Convex};
  const auto out = run_experiment("comparison", cfg);
  EXPECT_EQ(out.file_name, "comparison.csv");
  EXPECT_EQ(header_row(out.csv),
            "method,graph_model,density,graph_density,b,seed,status,valid,iterations,"
            "achieved_mean,min_eigenvalue,wall_time_s,values");
  std::set<std::string> methods;
  for (const auto& line : lines_of(out.csv))
    if (line.rfind("#", 0) != 0 && line.rfind("method", 0) != 0)
      methods.insert(line.substr(0, line.find(',')));
  EXPECT_EQ(methods, (std::set<std::string>{"diagdom", "chordal", "partial-orth", "convex"}));
  EXPECT_TRUE(out.hard_checks_pass());
}

TEST(Experiments, FeasibilityCellsAndMetadata) {
  const auto cfg = tiny();
  const auto cells = exp_feasibility_sweep(cfg);
  ASSERT_EQ(cells.size(), 6u);
  for (const auto& c : cells) {
    EXPECT_EQ(c.runs, 3u);
    EXPECT_EQ(c.converged + c.infeasible + c.iteration_cap + c.failed, c.runs);
    if (c.b <= -1.0) {
      EXPECT_EQ(c.proportion(), 1.0);
    }
  }
  const auto out = run_experiment("feasibility", cfg);
  EXPECT_NE(out.csv.find("# density_grid=0.3;0.8\n"), std::string::npos);
  EXPECT_NE(out.csv.find("# b_grid=-1;0.2;0.9\n"), std::string::npos);
  EXPECT_NE(out.csv.find("# detector_window=500\n"), std::string::npos);
  EXPECT_EQ(header_row(out.csv),
            "density,b,runs,converged,infeasible_suspected,iteration_cap,failed,invalid,"
            "proportion,no_solution");
}

TEST(Experiments, GraphTypesMeetMeanBound) {
  auto cfg = tiny();
  cfg.p = 12;
  const auto records = exp_graph_type_sweep(cfg);
  EXPECT_EQ(records.size(), 5u * 3u);
  for (const auto& r : records) {
    EXPECT_EQ(r.b, 0.2);
    if (r.status == "Converged") {
      EXPECT_TRUE(r.valid);
      EXPECT_GE(r.achieved_mean, 0.2 - 1e-6);
    }
  }
}

TEST(Experiments, TimingCoversGridWithoutValues) {
  const auto cfg = tiny();
  const auto records = exp_timing(cfg);
  EXPECT_EQ(records.size(), 5u * 2u * 3u);
  for (const auto& r : records) {
    EXPECT_TRUE(r.values.empty());
    EXPECT_NE(r.status, "InfeasibleSuspected");
  }
  const auto out = run_experiment("timing", cfg);
  EXPECT_EQ(header_row(out.csv),
            "method,graph_model,density,graph_density,b,seed,status,valid,iterations,"
            "achieved_mean,min_eigenvalue,wall_time_s");
  EXPECT_NE(out.csv.find("# model_parameters="), std::string::npos);
}

TEST(Experiments, RealDataIdentityStaysIdentity) {
  const auto cfg = tiny();
  const auto r = exp_real_data(SymMatrix::identity(6), 0.4, cfg);
  EXPECT_EQ(r.graph.edge_count(), 6u);  // ceil(0.4 * 15)
  EXPECT_EQ(r.b, 0.0);
  EXPECT_EQ(r.report.status, SolveStatus::Converged);
  for (double v : r.generated) EXPECT_EQ(v, 0.0);
  const auto out = run_experiment("realdata", cfg, SymMatrix::identity(6));
  EXPECT_EQ(header_row(out.csv), "source,i,j,value");
  EXPECT_THROW(run_experiment("realdata", cfg), Error);
}

TEST(Experiments, RealDataRejectsNonCorrelationInput) {
  const auto cfg = tiny();
  EXPECT_THROW(exp_real_data(SymMatrix::constant(4, 2.0), 0.5, cfg), Error);
}

TEST(Experiments, ThreadCountDoesNotChangeResults) {
  for (const char* name : {"comparison", "feasibility", "graphtypes"}) {
    auto one = tiny();
    one.threads = 1;
    auto many = tiny();
    many.threads = 4;
    EXPECT_EQ(strip_columns(run_experiment(name, one).csv, {"wall_time_s"}),
              strip_columns(run_experiment(name, many).csv, {"wall_time_s"}))
        << name;
  }
}

TEST(Experiments, UnknownNameThrows) {
  EXPECT_THROW(run_experiment("figure5", tiny()), Error);
}
