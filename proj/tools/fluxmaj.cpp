// Command-line driver: majorant studies on the unit-square benchmark and mesh dumps.
//
//   fluxmaj study --table1 --format markdown
//   fluxmaj study --config study.json --nx 20,40 --p2 1,2,3 --out rows.csv
//   fluxmaj mesh --nx 4 --ny 4

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fluxmaj/errors.hpp"
#include "fluxmaj/mesh.hpp"
#include "fluxmaj/problem.hpp"
#include "fluxmaj/study.hpp"

namespace {

using fluxmaj::Diagonal;
using fluxmaj::FluxSolver;
using fluxmaj::TableFormat;

struct StudyFlags {
  std::string config_path;
  bool table1 = false;
  bool table2 = false;
  std::optional<std::string> out;
  std::optional<TableFormat> format;
  std::vector<std::size_t> nx;
  std::optional<int> p1;
  std::vector<int> p2;
  std::optional<int> k1;
  std::optional<int> k2;
  std::optional<double> eps;
  std::optional<int> imax;
  std::optional<double> lambda;
  std::optional<double> cf;
  std::optional<int> quad_degree;
  std::optional<Diagonal> diagonal;
  std::optional<FluxSolver> flux_solver;
};

const std::map<std::string, TableFormat> kFormats{{"csv", TableFormat::kCsv},
                                                  {"markdown", TableFormat::kMarkdown}};
const std::map<std::string, Diagonal> kDiagonals{{"right", Diagonal::kRight},
                                                 {"left", Diagonal::kLeft}};
const std::map<std::string, FluxSolver> kSolvers{{"direct", FluxSolver::kDirect},
                                                 {"cg", FluxSolver::kCG}};

fluxmaj::StudyConfig resolve(const StudyFlags& f, const CLI::App& cmd) {
  fluxmaj::StudyConfig c;
  if (f.table1) c = fluxmaj::table1_preset();
  if (f.table2) c = fluxmaj::table2_preset();
  if (!f.config_path.empty()) c = fluxmaj::load_study_config(f.config_path);
  if (cmd.count("--nx") > 0) c.mesh_sizes = f.nx;
  if (cmd.count("--p2") > 0) c.p2 = f.p2;
  if (f.p1) c.p1 = *f.p1;
  if (f.k1) c.k1 = *f.k1;
  if (f.k2) c.k2 = *f.k2;
  if (f.eps) c.eps = *f.eps;
  if (f.imax) c.imax = *f.imax;
  if (f.lambda) c.lambda_override = f.lambda;
  if (f.cf) c.friedrichs_override = f.cf;
  if (f.quad_degree) c.quad_degree = f.quad_degree;
  if (f.diagonal) c.diagonal = *f.diagonal;
  if (f.flux_solver) c.flux_solver = *f.flux_solver;
  if (f.out) c.output_path = f.out;
  if (f.format) c.format = *f.format;
  c.validate();
  return c;
}

int run_study_command(const StudyFlags& flags, const CLI::App& cmd) {
  const fluxmaj::StudyConfig config = resolve(flags, cmd);
  if (!fluxmaj::example1_printed_rhs_is_exact(config.k1, config.k2)) {
    std::cerr << "note: k1 != k2; using f = -div(A grad u), which differs from the "
                 "(a + d) k1^2 closed form\n";
  }
  const fluxmaj::StudyOutcome outcome = fluxmaj::run_study(config);
  const std::string table = fluxmaj::emit_table(outcome.rows, config.format);
  if (config.output_path) {
    std::ofstream out(*config.output_path);
    if (!out) {
      std::cerr << "error: cannot write '" << *config.output_path << "'\n";
      return 2;
    }
    out << table;
  } else {
    std::cout << table;
  }
  for (const std::string& failure : outcome.failures) std::cerr << "row failed: " << failure << '\n';
  return outcome.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed error majorants for nonsymmetric diffusion"};
  app.require_subcommand(1);

  StudyFlags sf;
  CLI::App* study = app.add_subcommand("study", "run a p-refinement study and print the table");
  study->add_option("--config", sf.config_path, "JSON study configuration")->check(CLI::ExistingFile);
  study->add_flag("--table1", sf.table1, "preset: n in {20,40}, p1=1, k1=k2=1");
  study->add_flag("--table2", sf.table2, "preset: n in {20,40}, p1=2, k1=2, k2=3");
  study->add_option("--out", sf.out, "write the table to this file");
  study->add_option("--format", sf.format, "csv or markdown")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  study->add_option("--nx", sf.nx, "cells per side (comma separated list)")->delimiter(',');
  study->add_option("--p1", sf.p1, "Lagrange order of v (1 or 2)");
  study->add_option("--p2", sf.p2, "Raviart-Thomas labels 1..3 (comma separated)")->delimiter(',');
  study->add_option("--k1", sf.k1, "frequency in x");
  study->add_option("--k2", sf.k2, "frequency in y");
  study->add_option("--eps", sf.eps, "relative stopping tolerance");
  study->add_option("--imax", sf.imax, "maximum number of flux solves");
  study->add_option("--lambda", sf.lambda, "override the ellipticity constant");
  study->add_option("--cf", sf.cf, "override the Friedrichs constant");
  study->add_option("--quad-degree", sf.quad_degree, "quadrature exactness degree");
  study->add_option("--diagonal", sf.diagonal, "right or left")
      ->transform(CLI::CheckedTransformer(kDiagonals, CLI::ignore_case));
  study->add_option("--flux-solver", sf.flux_solver, "direct or cg")
      ->transform(CLI::CheckedTransformer(kSolvers, CLI::ignore_case));

  std::size_t mesh_nx = 4;
  std::size_t mesh_ny = 4;
  Diagonal mesh_diagonal = Diagonal::kRight;
  std::string mesh_out;
  CLI::App* mesh = app.add_subcommand("mesh", "dump a unit-square mesh as plain text");
  mesh->add_option("--nx", mesh_nx, "cells in x");
  mesh->add_option("--ny", mesh_ny, "cells in y");
  mesh->add_option("--diagonal", mesh_diagonal, "right or left")
      ->transform(CLI::CheckedTransformer(kDiagonals, CLI::ignore_case));
  mesh->add_option("--out", mesh_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed()) return run_study_command(sf, *study);
    const fluxmaj::TriMesh m = fluxmaj::build_rect_mesh(fluxmaj::kUnitSquare, mesh_nx, mesh_ny, mesh_diagonal);
    if (mesh_out.empty()) {
      fluxmaj::write_mesh_text(m, std::cout);
    } else {
      std::ofstream out(mesh_out);
      fluxmaj::write_mesh_text(m, out);
    }
    return 0;
  } catch (const fluxmaj::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
