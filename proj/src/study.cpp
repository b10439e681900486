#include "fluxmaj/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fluxmaj/assembly.hpp"
#include "fluxmaj/errors.hpp"
#include "fluxmaj/fem_spaces.hpp"
#include "fluxmaj/problem.hpp"
#include "fluxmaj/quadrature.hpp"

namespace fluxmaj {

namespace {

using nlohmann::json;

std::string format_number(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

std::string sci3(double v) { return format_number("%.2E", v); }
std::string fixed4(double v) { return format_number("%.4f", v); }
std::string sci7(double v) { return format_number("%.6E", v); }

template <typename T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

void StudyConfig::validate() const {
  if (p1 != 1 && p1 != 2) throw InvalidArgument("p1 must be 1 or 2");
  for (int p : p2) {
    if (p < 1 || p > 3) throw InvalidArgument("p2 entries must be in {1, 2, 3}");
  }
  for (std::size_t n : mesh_sizes) {
    if (n == 0) throw InvalidArgument("mesh sizes must be positive");
  }
  if (k1 < 1 || k2 < 1) throw InvalidArgument("k1 and k2 must be >= 1");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (imax < 1) throw InvalidArgument("imax must be >= 1");
  if (lambda_override && !(*lambda_override > 0.0)) throw InvalidArgument("lambda must be positive");
  if (friedrichs_override && !(*friedrichs_override > 0.0)) throw InvalidArgument("cf must be positive");
  if (quad_degree && (*quad_degree < 1 || *quad_degree > kMaxQuadratureDegree)) {
    throw InvalidArgument("quad_degree outside supported range");
  }
}

StudyConfig parse_study_config(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("study config must be a JSON object");
  static const std::set<std::string> known{"mesh_sizes", "p1", "p2", "k1", "k2", "A",
                                           "lambda", "cf", "eps", "imax", "quad_degree",
                                           "diagonal", "flux_solver", "output", "format"};
  for (const auto& item : doc.items()) {
    if (!known.contains(item.key())) throw InvalidArgument("unknown config key '" + item.key() + "'");
  }

  StudyConfig c;
  if (doc.contains("mesh_sizes")) c.mesh_sizes = get_as<std::vector<std::size_t>>(doc, "mesh_sizes");
  if (doc.contains("p1")) c.p1 = get_as<int>(doc, "p1");
  if (doc.contains("p2")) c.p2 = get_as<std::vector<int>>(doc, "p2");
  if (doc.contains("k1")) c.k1 = get_as<int>(doc, "k1");
  if (doc.contains("k2")) c.k2 = get_as<int>(doc, "k2");
  if (doc.contains("A")) {
    const auto rows = get_as<std::vector<std::vector<double>>>(doc, "A");
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) {
      throw InvalidArgument("config key 'A' must be a 2x2 array");
    }
    c.a = {rows[0][0], rows[0][1], rows[1][0], rows[1][1]};
  }
  if (doc.contains("lambda")) c.lambda_override = get_as<double>(doc, "lambda");
  if (doc.contains("cf")) c.friedrichs_override = get_as<double>(doc, "cf");
  if (doc.contains("eps")) c.eps = get_as<double>(doc, "eps");
  if (doc.contains("imax")) c.imax = get_as<int>(doc, "imax");
  if (doc.contains("quad_degree")) c.quad_degree = get_as<int>(doc, "quad_degree");
  if (doc.contains("diagonal")) {
    const auto d = get_as<std::string>(doc, "diagonal");
    if (d == "right") c.diagonal = Diagonal::kRight;
    else if (d == "left") c.diagonal = Diagonal::kLeft;
    else throw InvalidArgument("diagonal must be 'right' or 'left'");
  }
  if (doc.contains("flux_solver")) {
    const auto s = get_as<std::string>(doc, "flux_solver");
    if (s == "direct") c.flux_solver = FluxSolver::kDirect;
    else if (s == "cg") c.flux_solver = FluxSolver::kCG;
    else throw InvalidArgument("flux_solver must be 'direct' or 'cg'");
  }
  if (doc.contains("output")) c.output_path = get_as<std::string>(doc, "output");
  if (doc.contains("format")) {
    const auto f = get_as<std::string>(doc, "format");
    if (f == "csv") c.format = TableFormat::kCsv;
    else if (f == "markdown") c.format = TableFormat::kMarkdown;
    else throw InvalidArgument("format must be 'csv' or 'markdown'");
  }
  c.validate();
  return c;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_study_config(doc);
}

StudyConfig table1_preset() {
  StudyConfig c;
  c.mesh_sizes = {20, 40};
  c.p1 = 1;
  c.p2 = {1, 2, 3};
  c.k1 = 1;
  c.k2 = 1;
  return c;
}

StudyConfig table2_preset() {
  StudyConfig c = table1_preset();
  c.p1 = 2;
  c.k1 = 2;
  c.k2 = 3;
  return c;
}

double StudyRow::ieff_unsquared() const { return std::sqrt(ieff); }

StudyOutcome run_study(const StudyConfig& config) {
  config.validate();
  StudyOutcome out;
  const ProblemSpec problem = example1_problem(
      config.k1, config.k2, config.a, {config.lambda_override, config.friedrichs_override});

  MajorantOptions options;
  options.eps = config.eps;
  options.max_iterations = config.imax;
  options.solver = config.flux_solver;

  for (std::size_t n : config.mesh_sizes) {
    if (config.p2.empty()) break;
    const TriMesh mesh = build_rect_mesh(problem.domain, n, n, config.diagonal);
    const ScalarSpace scalar(mesh, config.p1);
    std::vector<double> v;
    double err_sq = 0.0;
    try {
      v = solve_primal(scalar, problem);
      err_sq = energy_error(scalar, v, problem);
    } catch (const Error& e) {
      for (int p2 : config.p2) {
        out.failures.push_back("n=" + std::to_string(n) + " p2=" + std::to_string(p2) +
                               ": primal solve failed: " + e.what());
      }
      continue;
    }
    for (int p2 : config.p2) {
      try {
        const FluxSpace flux(mesh, p2 - 1);
        const MajorantSystem sys =
            assemble_majorant(flux, scalar, v, problem, config.quad_degree.value_or(0));
        const MajorantResult res = minimize_majorant(sys, options);
        StudyRow row;
        row.n = n;
        row.n1 = scalar.dof_count();
        row.p2 = p2;
        row.n2 = flux.dof_count();
        row.k = res.iterations;
        row.maj_sq = res.maj_sq;
        row.dual = res.dual;
        row.equi = res.equi;
        row.ieff = guaranteed_bound_check(res, err_sq);
        row.maj = res.maj;
        row.beta = res.beta;
        row.energy_error_sq = err_sq;
        out.rows.push_back(row);
      } catch (const Error& e) {
        out.failures.push_back("n=" + std::to_string(n) + " p2=" + std::to_string(p2) + ": " +
                               e.what());
      }
    }
  }
  return out;
}

std::string emit_table(const std::vector<StudyRow>& rows, TableFormat format) {
  std::ostringstream os;
  if (format == TableFormat::kCsv) {
    os << "N1,p2,N2,k,maj_sq,dual,equi,Ieff,maj,beta\n";
    for (const StudyRow& r : rows) {
      os << r.n1 << ',' << r.p2 << ',' << r.n2 << ',' << r.k << ',' << sci3(r.maj_sq) << ','
         << sci3(r.dual) << ',' << sci3(r.equi) << ',' << fixed4(r.ieff) << ',' << sci7(r.maj)
         << ',' << sci7(r.beta) << '\n';
    }
    return os.str();
  }
  os << "| N1 | p2 | N2 | k | maj^2(v,y_k,beta_k) | M_Dual | M_Equi | I_eff |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const StudyRow& r : rows) {
    os << "| " << r.n1 << " | " << r.p2 << " | " << r.n2 << " | " << r.k << " | " << sci3(r.maj_sq)
       << " | " << sci3(r.dual) << " | " << sci3(r.equi) << " | " << fixed4(r.ieff) << " |\n";
  }
  return os.str();
}

std::vector<StudyRow> parse_table_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "N1,p2,N2,k,maj_sq,dual,equi,Ieff,maj,beta") {
    throw InvalidArgument("parse_table_csv: unexpected header");
  }
  std::vector<StudyRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw InvalidArgument("parse_table_csv: expected 10 columns");
    StudyRow r;
    r.n1 = std::stoul(cells[0]);
    r.p2 = std::stoi(cells[1]);
    r.n2 = std::stoul(cells[2]);
    r.k = std::stoi(cells[3]);
    r.maj_sq = std::stod(cells[4]);
    r.dual = std::stod(cells[5]);
    r.equi = std::stod(cells[6]);
    r.ieff = std::stod(cells[7]);
    r.maj = std::stod(cells[8]);
    r.beta = std::stod(cells[9]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fluxmaj
