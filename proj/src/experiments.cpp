#include "mfd/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "mfd/manufactured.hpp"
#include "mfd/spectral.hpp"

namespace mfd {

const char* family_name(MeshFamily f) {
  switch (f) {
    case MeshFamily::Tria: return "tria";
    case MeshFamily::Quad: return "quad";
    case MeshFamily::Hex: return "hex";
  }
  return "?";
}

void RunConfig::check() const {
  smoother.check();
  if (initial_level < 1) throw std::invalid_argument("RunConfig: L must be >= 1");
  if (tolerance <= 0.0) throw std::invalid_argument("RunConfig: tolerance must be positive");
  if (mode == SolveMode::Spectral) {
    if (fine_level < 0) throw std::invalid_argument("RunConfig: level must be >= 0");
  } else if (mode == SolveMode::TwoLevel || mode == SolveMode::Pcg) {
    if (fine_level < 1) throw std::invalid_argument("RunConfig: two-level modes need level >= 1");
  } else if (fine_level < 1) {
    throw std::invalid_argument("RunConfig: level must be >= 1");
  }
}

namespace {

/// Cache of refinement chains so a table over levels 1..N builds each mesh once.
class MeshChainCache {
 public:
  const PolygonalMesh& mesh_at(MeshFamily family, int initial_level, int level) {
    auto& chain = chain_for(family, initial_level);
    grow(chain, family, initial_level, level);
    return level == 0 ? chain.initial : chain.hierarchies[level - 1].fine;
  }

  const MeshHierarchy& hierarchy_at(MeshFamily family, int initial_level, int level) {
    if (level < 1) throw std::invalid_argument("hierarchy_at: level must be >= 1");
    auto& chain = chain_for(family, initial_level);
    grow(chain, family, initial_level, level);
    return chain.hierarchies[level - 1];
  }

 private:
  struct Chain {
    PolygonalMesh initial;
    std::vector<MeshHierarchy> hierarchies;
  };

  Chain& chain_for(MeshFamily family, int initial_level) {
    const auto key = std::make_pair(static_cast<int>(family), initial_level);
    auto it = chains_.find(key);
    if (it == chains_.end()) {
      Chain c;
      c.initial = generate_initial(family, initial_level);
      it = chains_.emplace(key, std::move(c)).first;
    }
    return it->second;
  }

  void grow(Chain& chain, MeshFamily, int, int level) {
    while (static_cast<int>(chain.hierarchies.size()) < level) {
      const PolygonalMesh& prev =
          chain.hierarchies.empty() ? chain.initial : chain.hierarchies.back().fine;
      chain.hierarchies.push_back(refine(prev));
    }
  }

  std::map<std::pair<int, int>, Chain> chains_;
};

TableRow spectral_row(const PolygonalMesh& mesh) {
  TableRow row;
  const DofMap dofs = DofMap::build(mesh);
  row.dofs = dofs.n_free();
  const FreeGraph graph = free_dof_graph(mesh, dofs);
  const SparseOperator lap = dirichlet_graph_laplacian(mesh, dofs);
  const SpectralReport rep = spectral_bounds(&lap, graph);
  row.max_degree = rep.max_degree;
  row.eig_min = rep.eig_min;
  row.eig_max = rep.eig_max;
  if (rep.cheeger_computed) {
    row.cheeger = rep.cheeger;
    if (!rep.lower_bound_holds || !rep.upper_bound_holds)
      row.error = "spectral bounds violated";
  }
  return row;
}

}  // namespace

LevelContext build_level_context(MeshFamily family, int initial_level, int fine_level,
                                 SystemKind system) {
  static thread_local MeshChainCache cache;
  LevelContext ctx;
  ctx.hierarchy = cache.hierarchy_at(family, initial_level, fine_level);
  ctx.fine_dofs = DofMap::build(ctx.hierarchy.fine);
  ctx.coarse_dofs = DofMap::build(ctx.hierarchy.coarse);
  const Coefficient kappa = Coefficient::constant(ctx.hierarchy.fine, 1.0);
  auto [edge_op, weights] = assemble_edge_form(ctx.hierarchy.fine, kappa, ctx.fine_dofs);
  ctx.fine_edge_form = std::move(edge_op);
  if (system == SystemKind::Mfd) {
    ctx.system = assemble_mfd(ctx.hierarchy.fine, kappa, ctx.fine_dofs);
    // Coarse-operator weights at the scale of the solved system.
    ctx.fine_weights = mfd_edge_weights(ctx.hierarchy.fine, kappa);
  } else {
    ctx.system = ctx.fine_edge_form;
    ctx.fine_weights = std::move(weights);
  }
  ctx.rhs = manufactured_rhs(ctx.hierarchy.fine, ctx.fine_dofs);
  return ctx;
}

TwoLevelPreconditioner make_preconditioner(const LevelContext& ctx, CoarseOperatorKind kind,
                                           const SmootherConfig& smoother) {
  Prolongation p = build_prolongation(ctx.hierarchy, ctx.coarse_dofs, ctx.fine_dofs);
  SparseOperator coarse =
      build_coarse(kind, ctx.fine_weights, p, ctx.hierarchy, ctx.coarse_dofs, ctx.system);
  return TwoLevelPreconditioner(ctx.system, std::move(p), std::move(coarse), smoother);
}

std::vector<TableRow> run_table(const std::vector<RunConfig>& configs) {
  std::vector<TableRow> rows;
  rows.reserve(configs.size());

  for (const RunConfig& cfg : configs) {
    TableRow row;
    row.family = family_name(cfg.family);
    row.initial_level = cfg.initial_level;
    row.fine_level = cfg.fine_level;
    try {
      cfg.check();
      if (cfg.mode == SolveMode::Spectral) {
        const PolygonalMesh mesh =
            cfg.fine_level == 0
                ? generate_initial(cfg.family, cfg.initial_level)
                : build_level_context(cfg.family, cfg.initial_level, cfg.fine_level, cfg.system)
                      .hierarchy.fine;
        TableRow sr = spectral_row(mesh);
        sr.family = row.family;
        sr.initial_level = row.initial_level;
        sr.fine_level = row.fine_level;
        row = sr;
      } else {
        const LevelContext ctx =
            build_level_context(cfg.family, cfg.initial_level, cfg.fine_level, cfg.system);
        row.dofs = ctx.fine_dofs.n_free();
        StoppingRule stop{cfg.tolerance, cfg.max_iterations};
        if (cfg.mode == SolveMode::Cg) {
          const auto [x, rep] = cg(ctx.system, ctx.rhs, stop);
          (void)x;
          if (!rep.converged) throw std::runtime_error("cg did not converge");
          row.iterations = rep.iterations;
          row.rho = rep.rho;
          row.cond = estimate_condition(ctx.system, ctx.rhs);
        } else {
          const TwoLevelPreconditioner tg = make_preconditioner(ctx, cfg.coarse, cfg.smoother);
          row.coarse_nnz = static_cast<long long>(tg.coarse_operator().nnz());
          row.system_nnz = static_cast<long long>(ctx.system.nnz());
          if (cfg.mode == SolveMode::TwoLevel) {
            const auto [x, rep] = stationary_two_level(ctx.system, tg, ctx.rhs, stop);
            (void)x;
            if (rep.diverged) throw std::runtime_error("two-level iteration diverged");
            if (!rep.converged) throw std::runtime_error("two-level iteration did not converge");
            row.iterations = rep.iterations;
            row.rho = rep.rho;
            row.cond = estimate_condition(ctx.system, ctx.rhs);
          } else {
            const Preconditioner apply = [&tg](const std::vector<double>& r) { return tg.apply(r); };
            const auto [x, rep] = pcg(ctx.system, apply, ctx.rhs, stop, /*lanczos_extra=*/10);
            (void)x;
            if (!rep.converged) throw std::runtime_error("pcg did not converge");
            row.iterations = rep.iterations;
            row.rho = rep.rho;
            row.cond = rep.cond_estimate;  // estimate for the preconditioned operator
          }
        }
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  // growth rate of the condition number against the previous level within
  // each (family, L) group, in level order
  std::map<std::tuple<std::string, int>, std::map<int, std::size_t>> groups;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].error.empty() && rows[i].cond)
      groups[{rows[i].family, rows[i].initial_level}][rows[i].fine_level] = i;
  for (const auto& [key, by_level] : groups) {
    (void)key;
    std::size_t prev_idx = 0;
    bool have_prev = false;
    int prev_level = 0;
    for (const auto& [level, idx] : by_level) {
      if (have_prev && level == prev_level + 1) {
        const double c0 = *rows[prev_idx].cond;
        const double c1 = *rows[idx].cond;
        if (c0 > 0.0 && c1 > 0.0) rows[idx].rate = std::log2(c1 / c0);
      }
      prev_idx = idx;
      prev_level = level;
      have_prev = true;
    }
  }
  return rows;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_csv(const std::vector<TableRow>& rows, SolveMode mode, std::ostream& out) {
  if (mode == SolveMode::Spectral) {
    out << "schema,family,L,level,dofs,cheeger,max_degree,eig_min,eig_max\n";
    for (const TableRow& r : rows) {
      out << "spectral-v1," << r.family << "," << r.initial_level << "," << r.fine_level << ","
          << r.dofs << ",";
      if (!r.error.empty()) {
        out << ",,,error:" << r.error << "\n";
        continue;
      }
      out << (r.cheeger ? fmt_double(*r.cheeger) : std::string()) << ","
          << (r.max_degree ? std::to_string(*r.max_degree) : std::string()) << ","
          << (r.eig_min ? fmt_double(*r.eig_min) : std::string()) << ","
          << (r.eig_max ? fmt_double(*r.eig_max) : std::string()) << "\n";
    }
    return;
  }
  out << "schema,family,L,level,dofs,iterations,rho,cond,rate\n";
  for (const TableRow& r : rows) {
    out << "table-v1," << r.family << "," << r.initial_level << "," << r.fine_level << "," << r.dofs
        << ",";
    if (!r.error.empty()) {
      out << ",,,error:" << r.error << "\n";
      continue;
    }
    out << r.iterations << "," << fmt_double(r.rho) << ","
        << (r.cond ? fmt_double(*r.cond) : std::string()) << ","
        << (r.rate ? fmt_double(*r.rate) : std::string()) << "\n";
  }
}

void emit_plot_script(const std::string& csv_path, const std::string& script_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("emit_plot_script: cannot open CSV " + csv_path);
  std::string header;
  if (!std::getline(csv, header)) throw std::runtime_error("emit_plot_script: empty CSV");

  // collect families present, in first-seen order
  std::vector<std::string> families;
  std::string line;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string schema, family;
    if (!std::getline(ss, schema, ',') || !std::getline(ss, family, ',')) continue;
    bool seen = false;
    for (const std::string& f : families) seen = seen || f == family;
    if (!seen) families.push_back(family);
  }

  std::ofstream out(script_path);
  if (!out) throw std::runtime_error("emit_plot_script: cannot write " + script_path);
  out << "#!/usr/bin/env python3\n"
      << "# Plots iteration counts and condition numbers per refinement level.\n"
      << "# Columns: " << header << "\n"
      << "import csv\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "rows = []\n"
      << "with open(" << '"' << csv_path << '"' << ") as fh:\n"
      << "    for row in csv.DictReader(fh):\n"
      << "        rows.append(row)\n\n"
      << "fig, (ax_it, ax_cond) = plt.subplots(1, 2, figsize=(11, 4.5))\n";
  for (const std::string& f : families) {
    out << "series = [(int(r[\"level\"]), float(r[\"iterations\"]), r[\"cond\"]) for r in rows"
        << " if r[\"family\"] == \"" << f << "\" and r.get(\"iterations\")]\n"
        << "series.sort()\n"
        << "ax_it.plot([s[0] for s in series], [s[1] for s in series], marker=\"o\", label=\"" << f
        << "\")\n"
        << "cond = [(s[0], float(s[2])) for s in series if s[2]]\n"
        << "ax_cond.semilogy([c[0] for c in cond], [c[1] for c in cond], marker=\"s\", label=\"" << f
        << "\")\n";
  }
  out << "ax_it.set_xlabel(\"level\")\n"
      << "ax_it.set_ylabel(\"iterations\")\n"
      << "ax_cond.set_xlabel(\"level\")\n"
      << "ax_cond.set_ylabel(\"cond\")\n";
  if (!families.empty()) out << "ax_it.legend()\nax_cond.legend()\n";
  out << "fig.tight_layout()\n"
      << "plt.savefig(\"" << csv_path << ".png\", dpi=150)\n";
}

}  // namespace mfd
