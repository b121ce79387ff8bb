// Experiment driver: builds a refinement chain of the requested mesh family,
// assembles the manufactured-solution system at each level, runs the chosen
// solver, and emits a CSV table (plus optional plot script and mesh/matrix
// dumps).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfd/experiments.hpp"
#include "mfd/mesh_io.hpp"
#include "mfd/sparse.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Polygonal-mesh mimetic finite difference solver tables"};

  std::string family_s = "quad";
  int initial_level = 1;
  int level = 1;
  std::string smoother_s = "gs";
  double omega = 1.5;
  double jacobi_damping = 0.5;
  int nu = 2;
  std::string coarse_s = "bh";
  std::string system_s = "mfd";
  std::string mode_s = "tg";
  double tol = 1e-9;
  int max_it = 3000;
  std::string out_path;
  std::string plot_path;
  std::string dump_mesh_path;
  std::string dump_matrix_path;
  std::string dump_rhs_path;
  bool verbose = false;

  app.add_option("--family", family_s, "Mesh family")->check(CLI::IsMember({"tria", "quad", "hex"}));
  app.add_option("--L", initial_level, "Initial grid level (>= 1)");
  app.add_option("--level", level, "Finest refinement level; rows cover 1..level");
  app.add_option("--smoother", smoother_s, "Smoother kind")
      ->check(CLI::IsMember({"gs", "jacobi", "sor"}));
  app.add_option("--omega", omega, "SOR relaxation parameter in (0, 2)");
  app.add_option("--jacobi-damping", jacobi_damping, "Damped Jacobi factor");
  app.add_option("--nu", nu, "Smoothing sweeps per side");
  app.add_option("--coarse", coarse_s, "Coarse operator: bh (sparsified), ah (Galerkin), unit")
      ->check(CLI::IsMember({"bh", "ah", "unit"}));
  app.add_option("--system", system_s, "System to solve")->check(CLI::IsMember({"mfd", "edge"}));
  app.add_option("--mode", mode_s, "Solver mode")->check(CLI::IsMember({"tg", "pcg", "cg", "spectral"}));
  app.add_option("--tol", tol, "Relative residual tolerance");
  app.add_option("--max-it", max_it, "Iteration cap");
  app.add_option("--out", out_path, "CSV output path (stdout when omitted)");
  app.add_option("--plot", plot_path, "Write a plot script referencing the CSV (needs --out)");
  app.add_option("--dump-mesh", dump_mesh_path, "Write the finest mesh in plain-text format");
  app.add_option("--dump-matrix", dump_matrix_path, "Write the finest system matrix as i j value");
  app.add_option("--dump-rhs", dump_rhs_path, "Write the finest load vector, one value per line");
  app.add_flag("--verbose", verbose, "Print per-row diagnostics (operator sparsity) to stderr");

  CLI11_PARSE(app, argc, argv);

  mfd::RunConfig base;
  base.family = family_s == "tria"  ? mfd::MeshFamily::Tria
                : family_s == "hex" ? mfd::MeshFamily::Hex
                                    : mfd::MeshFamily::Quad;
  base.initial_level = initial_level;
  base.smoother.kind = smoother_s == "jacobi" ? mfd::SmootherKind::DampedJacobi
                       : smoother_s == "sor"  ? mfd::SmootherKind::Sor
                                              : mfd::SmootherKind::GaussSeidelForward;
  base.smoother.sweeps = nu;
  base.smoother.sor_omega = omega;
  base.smoother.jacobi_damping = jacobi_damping;
  base.coarse = coarse_s == "ah"     ? mfd::CoarseOperatorKind::Galerkin
                : coarse_s == "unit" ? mfd::CoarseOperatorKind::UnitEdge
                                     : mfd::CoarseOperatorKind::SparsifiedEdge;
  base.system = system_s == "edge" ? mfd::SystemKind::EdgeForm : mfd::SystemKind::Mfd;
  base.mode = mode_s == "pcg"        ? mfd::SolveMode::Pcg
              : mode_s == "cg"       ? mfd::SolveMode::Cg
              : mode_s == "spectral" ? mfd::SolveMode::Spectral
                                     : mfd::SolveMode::TwoLevel;
  base.tolerance = tol;
  base.max_iterations = max_it;

  std::vector<mfd::RunConfig> configs;
  const int first = base.mode == mfd::SolveMode::Spectral ? 0 : 1;
  if (level < first) {
    std::cerr << "error: --level must be >= " << first << " for mode " << mode_s << "\n";
    return 1;
  }
  for (int l = first; l <= level; ++l) {
    mfd::RunConfig cfg = base;
    cfg.fine_level = l;
    configs.push_back(cfg);
  }

  const std::vector<mfd::TableRow> rows = mfd::run_table(configs);

  if (verbose) {
    for (const mfd::TableRow& r : rows) {
      std::cerr << "# " << r.family << " L=" << r.initial_level << " level=" << r.fine_level
                << " dofs=" << r.dofs;
      if (r.system_nnz) std::cerr << " system_nnz=" << *r.system_nnz;
      if (r.coarse_nnz) std::cerr << " coarse_nnz=" << *r.coarse_nnz;
      std::cerr << "\n";
    }
  }

  std::ostringstream csv;
  mfd::write_csv(rows, base.mode, csv);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    out << csv.str();
  }

  if (!plot_path.empty()) {
    if (out_path.empty()) {
      std::cerr << "error: --plot requires --out\n";
      return 1;
    }
    mfd::emit_plot_script(out_path, plot_path);
  }

  if (!dump_mesh_path.empty() || !dump_matrix_path.empty() || !dump_rhs_path.empty()) {
    const int l = std::max(level, 1);
    const mfd::LevelContext ctx =
        mfd::build_level_context(base.family, base.initial_level, l, base.system);
    const auto dump = [](const std::string& path, const auto& writer) {
      std::ofstream out(path);
      if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
      }
      writer(out);
      return true;
    };
    if (!dump_mesh_path.empty() &&
        !dump(dump_mesh_path, [&](std::ostream& o) { mfd::write_mesh(ctx.hierarchy.fine, o); }))
      return 1;
    if (!dump_matrix_path.empty() &&
        !dump(dump_matrix_path, [&](std::ostream& o) { mfd::write_coordinate(ctx.system, o); }))
      return 1;
    if (!dump_rhs_path.empty() &&
        !dump(dump_rhs_path, [&](std::ostream& o) { mfd::write_vector(ctx.rhs, o); }))
      return 1;
  }

  bool any_error = false;
  for (const mfd::TableRow& r : rows)
    if (!r.error.empty()) {
      std::cerr << "row " << r.family << " L=" << r.initial_level << " level=" << r.fine_level
                << " failed: " << r.error << "\n";
      any_error = true;
    }
  return any_error ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
