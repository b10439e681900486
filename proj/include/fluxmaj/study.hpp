#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluxmaj/majorant.hpp"
#include "fluxmaj/mesh.hpp"
#include "fluxmaj/small_matrix.hpp"

namespace fluxmaj {

enum class TableFormat { kCsv, kMarkdown };

/// One p-refinement study on the unit-square benchmark. Flux orders use the
/// 1-based labels of the result tables: p2 = 1, 2, 3 selects RT0, RT1, RT2.
struct StudyConfig {
  std::vector<std::size_t> mesh_sizes{20};
  int p1 = 1;
  std::vector<int> p2{1, 2, 3};
  int k1 = 1;
  int k2 = 1;
  Mat2 a{2.0, 1.0, 0.0, 3.0};
  std::optional<double> lambda_override;
  std::optional<double> friedrichs_override;
  double eps = 1e-6;
  int imax = 50;
  std::optional<int> quad_degree;
  Diagonal diagonal = Diagonal::kRight;
  FluxSolver flux_solver = FluxSolver::kDirect;
  std::optional<std::string> output_path;
  TableFormat format = TableFormat::kCsv;

  /// Throws InvalidArgument on out-of-range entries.
  void validate() const;
};

/// Every key optional; unknown keys are rejected. Keys:
/// mesh_sizes, p1, p2, k1, k2, A ([[a, b], [c, d]]), lambda, cf, eps, imax,
/// quad_degree, diagonal ("right"/"left"), flux_solver ("direct"/"cg"),
/// output, format ("csv"/"markdown").
StudyConfig parse_study_config(const nlohmann::json& doc);
StudyConfig load_study_config(const std::string& path);

/// Table-1 matrix: n in {20, 40}, p1 = 1, p2 in {1, 2, 3}, k1 = k2 = 1.
StudyConfig table1_preset();
/// Table-2 matrix: n in {20, 40}, p1 = 2, p2 in {1, 2, 3}, k1 = 2, k2 = 3.
StudyConfig table2_preset();

struct StudyRow {
  std::size_t n = 0;
  std::size_t n1 = 0;  ///< scalar DOFs
  int p2 = 0;
  std::size_t n2 = 0;  ///< flux DOFs
  int k = 0;           ///< iterations
  double maj_sq = 0.0;
  double dual = 0.0;
  double equi = 0.0;
  double ieff = 0.0;   ///< maj^2 / energy error^2
  double maj = 0.0;
  double beta = 0.0;
  double energy_error_sq = 0.0;

  /// maj / energy error, the unsquared reading of the efficiency index.
  [[nodiscard]] double ieff_unsquared() const;
};

struct StudyOutcome {
  std::vector<StudyRow> rows;
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// For each mesh size: primal solve, then one majorant minimization per flux
/// order. A failing row is reported in `failures` and skipped.
StudyOutcome run_study(const StudyConfig& config);

/// CSV columns N1,p2,N2,k,maj_sq,dual,equi,Ieff,maj,beta; markdown mirrors
/// the eight-column result tables.
std::string emit_table(const std::vector<StudyRow>& rows, TableFormat format);

/// Parses emit_table's CSV output back into rows (n and energy_error_sq are left 0).
std::vector<StudyRow> parse_table_csv(const std::string& text);

}  // namespace fluxmaj
