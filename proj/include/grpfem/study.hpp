#pragma once

#include "grpfem/error.hpp"
#include "grpfem/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace grpfem {

enum class Variant { Grp, Robin, Neumann };

struct StudyConfig {
  DomainKind domain = DomainKind::UnitDisk;
  int degree = 1;
  int levels = 4;
  double h0 = 0.3;
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 1.0;
  Variant variant = Variant::Grp;
  std::string solution = "poly";
  double tol = 1e-12;
  std::string out;           // CSV path; empty writes no file
  bool diagnostics = false;  // geometry diagnostics instead of a solve study

  // Variant-adjusted coefficients: robin forces beta = 0, neumann forces
  // alpha = beta = 0.
  double effective_alpha() const;
  double effective_beta() const;

  void validate() const;  // throws ConfigError naming the offending field
};

struct LevelRecord {
  int level = 0;
  double h = 0.0;
  int nodes = 0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double eoc_l2 = 0.0;  // NaN on level 0
  double eoc_h1 = 0.0;
};

struct ErrorReport {
  StudyConfig config;
  std::vector<LevelRecord> levels;
};

struct DiagnosticsRecord {
  int level = 0;
  double h = 0.0;
  double volume = 0.0;
  double surface = 0.0;
  double max_boundary_dist = 0.0;  // max |d| over face quadrature points
  double min_jacobian = 0.0;       // min det D Phi^(k) over bulk points
  double max_ct = 0.0;             // max sampled |D rho B^{-1}|
};

/// Refinement study: solve, lift, measure, tabulate. Writes the CSV when
/// config.out is set.
ErrorReport run_study(const StudyConfig& config);

/// Per-level geometric quality measurements on the same mesh family.
std::vector<DiagnosticsRecord> run_geometry_diagnostics(const StudyConfig& config);

// CSV schemas: "level,h,N,errL2,errH1,eocL2,eocH1" (eoc blank on level 0)
// and "level,h,volume,surface,maxBoundaryDist,minJacobian,maxCT", floats with
// 17 significant digits.
void write_study_csv(const ErrorReport& report, std::ostream& out);
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                           std::ostream& out);

/// key=value configuration lines; '#' starts a comment. Keys match the CLI
/// flag names.
void apply_config_entry(StudyConfig& config, const std::string& key,
                        const std::string& value);
StudyConfig load_config_file(const std::string& path);

std::string variant_name(Variant variant);

}  // namespace grpfem
