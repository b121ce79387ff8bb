#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mfd/experiments.hpp"
#include "mfd/manufactured.hpp"

using namespace mfd;

namespace {

std::vector<RunConfig> quad_tg_configs(int max_level) {
  std::vector<RunConfig> configs;
  for (int l = 1; l <= max_level; ++l) {
    RunConfig cfg;
    cfg.family = MeshFamily::Quad;
    cfg.fine_level = l;
    cfg.smoother.sweeps = 2;
    configs.push_back(cfg);
  }
  return configs;
}

std::string csv_of(const std::vector<TableRow>& rows, SolveMode mode) {
  std::ostringstream os;
  write_csv(rows, mode, os);
  return os.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("./" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("run_table emits one row per config with rates between levels") {
  const std::vector<TableRow> rows = run_table(quad_tg_configs(3));
  REQUIRE(rows.size() == 3);
  for (const TableRow& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.family == "quad");
    CHECK(r.iterations >= 5);
    CHECK(r.iterations <= 13);
    REQUIRE(r.cond.has_value());
  }
  CHECK_FALSE(rows[0].rate.has_value());
  REQUIRE(rows[1].rate.has_value());
  REQUIRE(rows[2].rate.has_value());
  CHECK(*rows[1].rate == doctest::Approx(2.0).epsilon(0.2));
  CHECK(*rows[2].rate == doctest::Approx(2.0).epsilon(0.2));
  CHECK(rows[0].dofs == 49);
  CHECK(rows[1].dofs == 225);
  CHECK(rows[2].dofs == 961);
  // sparsity diagnostics for the run report: the sparsified coarse operator
  // keeps strictly fewer nonzeros than the system it corrects
  for (const TableRow& r : rows) {
    REQUIRE(r.coarse_nnz.has_value());
    REQUIRE(r.system_nnz.has_value());
    CHECK(*r.coarse_nnz < *r.system_nnz);
  }
}

TEST_CASE("quad table replica: counts within +/-4 of the reference column") {
  const std::vector<TableRow> rows = run_table(quad_tg_configs(5));
  REQUIRE(rows.size() == 5);
  const int reference[5] = {9, 8, 8, 9, 9};
  for (int l = 0; l < 5; ++l) {
    CHECK(rows[l].error.empty());
    CHECK(std::abs(rows[l].iterations - reference[l]) <= 4);
  }
}

TEST_CASE("rerunning a config set reproduces the CSV byte for byte") {
  const std::vector<RunConfig> configs = quad_tg_configs(2);
  const std::string first = csv_of(run_table(configs), SolveMode::TwoLevel);
  const std::string second = csv_of(run_table(configs), SolveMode::TwoLevel);
  CHECK(first == second);
  CHECK(first.rfind("schema,family,L,level,dofs,iterations,rho,cond,rate\n", 0) == 0);
  // versioned schema tag on every data row
  std::istringstream in(first);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.rfind("table-v1,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("spectral mode emits the dedicated schema with bounds data") {
  RunConfig cfg;
  cfg.family = MeshFamily::Quad;
  cfg.mode = SolveMode::Spectral;
  cfg.fine_level = 0;
  const std::vector<TableRow> rows = run_table({cfg});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].error.empty());
  REQUIRE(rows[0].cheeger.has_value());
  REQUIRE(rows[0].eig_min.has_value());
  CHECK(*rows[0].cheeger * *rows[0].cheeger <= *rows[0].eig_min + 1e-10);
  REQUIRE(rows[0].max_degree.has_value());
  CHECK(*rows[0].eig_max <= *rows[0].max_degree + 1e-10);
  const std::string csv = csv_of(rows, SolveMode::Spectral);
  CHECK(csv.rfind("schema,family,L,level,dofs,cheeger,max_degree,eig_min,eig_max\n", 0) == 0);
  CHECK(csv.find("spectral-v1,quad,1,0,9,") != std::string::npos);
}

TEST_CASE("invalid configurations land in the row error column") {
  RunConfig cfg;
  cfg.fine_level = 0;  // two-level mode needs a coarser mesh
  const std::vector<TableRow> rows = run_table({cfg});
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].error.empty());
  const std::string csv = csv_of(rows, SolveMode::TwoLevel);
  CHECK(csv.find("error:") != std::string::npos);
}

TEST_CASE("manufactured rhs drives a solution whose nodal error shrinks with refinement") {
  std::vector<double> max_errors;
  for (int l = 1; l <= 3; ++l) {
    const LevelContext ctx = build_level_context(MeshFamily::Quad, 1, l, SystemKind::Mfd);
    SmootherConfig gs;
    gs.sweeps = 2;
    const TwoLevelPreconditioner tg =
        make_preconditioner(ctx, CoarseOperatorKind::SparsifiedEdge, gs);
    StoppingRule stop;
    stop.relative_tolerance = 1e-11;
    const auto [x, rep] =
        pcg(ctx.system, [&tg](const std::vector<double>& r) { return tg.apply(r); }, ctx.rhs, stop);
    REQUIRE(rep.converged);
    double err = 0.0;
    for (int d = 0; d < ctx.fine_dofs.n_free(); ++d) {
      const Point2 pos = ctx.hierarchy.fine.vertex_position(ctx.fine_dofs.free_dofs[d]);
      err = std::max(err, std::abs(x[d] - ManufacturedProblem::solution(pos.x, pos.y)));
    }
    max_errors.push_back(err);
  }
  CHECK(max_errors[1] < max_errors[0]);
  CHECK(max_errors[2] < max_errors[1]);
}

TEST_CASE("plot script: references columns, one labeled series per family") {
  TempFile csv("plot_test.csv");
  TempFile script("plot_test.py");
  {
    std::vector<RunConfig> configs = quad_tg_configs(2);
    RunConfig hex = configs[0];
    hex.family = MeshFamily::Hex;
    configs.push_back(hex);
    const std::vector<TableRow> rows = run_table(configs);
    std::ofstream out(csv.path);
    write_csv(rows, SolveMode::TwoLevel, out);
  }
  emit_plot_script(csv.path, script.path);
  std::ifstream in(script.path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  for (const char* column : {"family", "level", "iterations", "rho", "cond", "rate", "dofs"})
    CHECK(text.find(column) != std::string::npos);
  CHECK(text.find("label=\"quad\"") != std::string::npos);
  CHECK(text.find("label=\"hex\"") != std::string::npos);
}

TEST_CASE("plot script from an empty CSV has no series and no crash") {
  TempFile csv("plot_empty.csv");
  TempFile script("plot_empty.py");
  {
    std::ofstream out(csv.path);
    write_csv({}, SolveMode::TwoLevel, out);
  }
  emit_plot_script(csv.path, script.path);
  std::ifstream in(script.path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str().find("label=") == std::string::npos);
  CHECK(buffer.str().find("import csv") != std::string::npos);
}

TEST_CASE("plot script emission fails loudly when the CSV is missing") {
  CHECK_THROWS_AS(emit_plot_script("./does_not_exist.csv", "./never_written.py"),
                  std::runtime_error);
}

TEST_CASE("matrix and vector exports use the documented text formats") {
  const SparseOperator a =
      operator_from_triplets(2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}});
  std::ostringstream mat;
  write_coordinate(a, mat);
  CHECK(mat.str() == "0 0 2\n0 1 -1\n1 0 -1\n1 1 2\n");
  std::ostringstream vec;
  write_vector({0.5, -1.25}, vec);
  CHECK(vec.str() == "0.5\n-1.25\n");
}

TEST_CASE("edge-form system flag solves the spectrally equivalent operator") {
  RunConfig cfg;
  cfg.family = MeshFamily::Quad;
  cfg.fine_level = 2;
  cfg.system = SystemKind::EdgeForm;
  cfg.smoother.sweeps = 2;
  const std::vector<TableRow> rows = run_table({cfg});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].iterations >= 5);
  CHECK(rows[0].iterations <= 13);
}
