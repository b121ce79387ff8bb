#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfd/krylov.hpp"
#include "mfd/mesh.hpp"
#include "mfd/twolevel.hpp"

namespace mfd {

enum class SolveMode { TwoLevel, Pcg, Cg, Spectral };
enum class SystemKind { Mfd, EdgeForm };

struct RunConfig {
  MeshFamily family = MeshFamily::Quad;
  int initial_level = 1;  // L
  int fine_level = 1;     // number of refinements applied to the initial grid
  SmootherConfig smoother;
  CoarseOperatorKind coarse = CoarseOperatorKind::SparsifiedEdge;
  SystemKind system = SystemKind::Mfd;
  SolveMode mode = SolveMode::TwoLevel;
  double tolerance = 1e-9;
  int max_iterations = 3000;

  void check() const;
};

struct TableRow {
  std::string family;
  int initial_level = 0;
  int fine_level = 0;
  int dofs = 0;
  // solver modes
  int iterations = 0;
  double rho = 0.0;
  std::optional<double> cond;
  std::optional<double> rate;  // log2 of the cond ratio against the previous level
  // diagnostics for the run report (two-level modes)
  std::optional<long long> coarse_nnz;
  std::optional<long long> system_nnz;
  // spectral mode
  std::optional<double> cheeger;
  std::optional<int> max_degree;
  std::optional<double> eig_min;
  std::optional<double> eig_max;
  std::string error;  // empty on success
};

/// Runs each configuration and fills rate columns per (family, L, mode)
/// group in level order. Deterministic: rerunning a config set reproduces
/// the rows exactly.
std::vector<TableRow> run_table(const std::vector<RunConfig>& configs);

/// CSV with a versioned schema tag in the header row and per row.
/// Solver modes: schema,family,L,level,dofs,iterations,rho,cond,rate
/// Spectral mode: schema,family,L,level,dofs,cheeger,max_degree,eig_min,eig_max
void write_csv(const std::vector<TableRow>& rows, SolveMode mode, std::ostream& out);

/// Writes a standalone matplotlib script plotting iterations per level and
/// condition numbers (log scale) per level, one labeled series per mesh
/// family found in the CSV. Throws if the CSV does not exist.
void emit_plot_script(const std::string& csv_path, const std::string& script_path);

const char* family_name(MeshFamily f);

/// Convenience used by the CLI and the acceptance suite: mesh chain with
/// assembled systems at one level.
struct LevelContext {
  MeshHierarchy hierarchy;       // between fine_level-1 and fine_level
  DofMap fine_dofs;
  DofMap coarse_dofs;
  SparseOperator system;         // operator being solved (MFD or edge form)
  SparseOperator fine_edge_form;
  EdgeWeights fine_weights;
  std::vector<double> rhs;       // manufactured load
};

LevelContext build_level_context(MeshFamily family, int initial_level, int fine_level,
                                 SystemKind system);

TwoLevelPreconditioner make_preconditioner(const LevelContext& ctx, CoarseOperatorKind kind,
                                           const SmootherConfig& smoother);

}  // namespace mfd
