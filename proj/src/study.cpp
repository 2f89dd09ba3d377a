#include "grpfem/study.hpp"

#include "grpfem/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace grpfem {

namespace {

Domain make_domain(DomainKind kind) {
  return kind == DomainKind::UnitDisk ? Domain::unit_disk() : Domain::unit_ball();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void maybe_write_file(const StudyConfig& config, const std::string& content) {
  if (config.out.empty()) return;
  std::ofstream file(config.out, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + config.out + "'");
  file << content;
}

}  // namespace

double StudyConfig::effective_alpha() const {
  return variant == Variant::Neumann ? 0.0 : alpha;
}

double StudyConfig::effective_beta() const {
  return variant == Variant::Grp ? beta : 0.0;
}

void StudyConfig::validate() const {
  if (degree < 1 || degree > 4) throw ConfigError("degree: must be in 1..4");
  if (levels < 2) throw ConfigError("levels: need at least 2");
  if (!(h0 > 0.0)) throw ConfigError("h0: must be positive");
  if (alpha < 0.0) throw ConfigError("alpha: must be nonnegative");
  if (beta < 0.0) throw ConfigError("beta: must be nonnegative");
  if (kappa < 0.0) throw ConfigError("kappa: must be nonnegative");
  if (!(tol > 0.0) || tol > 1e-4) throw ConfigError("tol: must lie in (0, 1e-4]");
  if (variant == Variant::Grp && !(alpha > 0.0 && beta > 0.0)) {
    throw ConfigError("variant: grp requires alpha > 0 and beta > 0");
  }
  if (variant == Variant::Robin && !(alpha > 0.0)) {
    throw ConfigError("variant: robin requires alpha > 0");
  }
  if (variant == Variant::Neumann && !(kappa > 0.0)) {
    throw ConfigError("variant: neumann requires kappa > 0");
  }
  if (solution != "poly" && solution != "one") {
    throw ConfigError("solution: unknown built-in '" + solution + "'");
  }
}

ErrorReport run_study(const StudyConfig& config) {
  config.validate();
  const Domain domain = make_domain(config.domain);
  const ExactSolution exact = builtin_solution(config.solution, domain.dimension());
  const double alpha = config.effective_alpha();
  const double beta = config.effective_beta();
  const ProblemData data =
      manufactured_rhs(exact, alpha, beta, config.kappa, domain);

  ErrorReport report;
  report.config = config;

  Mesh mesh = generate_linear_mesh(domain, config.h0);
  std::vector<double> errs_l2, errs_h1, hs;
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = refine(mesh, domain);
    const FeSpace space = build_space(mesh, domain, config.degree);

    const SparseSpdMatrix bulk_mass = assemble_bulk_mass(space);
    const SparseSpdMatrix bulk_stiffness = assemble_bulk_stiffness(space);
    const SparseSpdMatrix surface_mass = assemble_surface_mass(space);
    const SparseSpdMatrix surface_stiffness = assemble_surface_stiffness(space);
    const SparseSpdMatrix system =
        combine_system(bulk_mass, bulk_stiffness, surface_mass, surface_stiffness,
                       alpha, beta, config.kappa);

    const std::vector<double> f_h = interpolate(space, data.f);
    const std::vector<double> g_h = interpolate_boundary(space, data.g);
    const std::vector<double> b = load_vector(bulk_mass, surface_mass, f_h, g_h);

    const auto [u, solve_report] = solve_spd(system, b, config.tol);
    const ErrorPair err = error_norms(space, u, exact);

    LevelRecord record;
    record.level = level;
    record.h = mesh.h;
    record.nodes = space.node_count;
    record.err_l2 = err.l2;
    record.err_h1 = err.h1;
    record.eoc_l2 = std::numeric_limits<double>::quiet_NaN();
    record.eoc_h1 = std::numeric_limits<double>::quiet_NaN();
    hs.push_back(mesh.h);
    errs_l2.push_back(err.l2);
    errs_h1.push_back(err.h1);
    if (level > 0 && errs_l2[errs_l2.size() - 2] > 0.0 && err.l2 > 0.0) {
      record.eoc_l2 = std::log(errs_l2[errs_l2.size() - 2] / err.l2) /
                      std::log(hs[hs.size() - 2] / mesh.h);
    }
    if (level > 0 && errs_h1[errs_h1.size() - 2] > 0.0 && err.h1 > 0.0) {
      record.eoc_h1 = std::log(errs_h1[errs_h1.size() - 2] / err.h1) /
                      std::log(hs[hs.size() - 2] / mesh.h);
    }
    report.levels.push_back(record);
  }

  std::ostringstream csv;
  write_study_csv(report, csv);
  maybe_write_file(config, csv.str());
  return report;
}

std::vector<DiagnosticsRecord> run_geometry_diagnostics(const StudyConfig& config) {
  config.validate();
  const Domain domain = make_domain(config.domain);
  const int k = config.degree;

  std::vector<DiagnosticsRecord> records;
  Mesh mesh = generate_linear_mesh(domain, config.h0);
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = refine(mesh, domain);
    const FeSpace space = build_space(mesh, domain, k);
    const QuadratureRule bulk_rule = make_quadrature(mesh.dim, 2 * k + 2);
    const QuadratureRule face_rule = make_quadrature(mesh.dim - 1, 2 * k + 2);

    DiagnosticsRecord rec;
    rec.level = level;
    rec.h = mesh.h;
    rec.min_jacobian = std::numeric_limits<double>::max();

    std::vector<Vec> gradients(static_cast<std::size_t>(space.ref.node_count()));
    for (int c = 0; c < mesh.cell_count(); ++c) {
      const CurvedElementMap& map = space.maps[static_cast<std::size_t>(c)];
      for (int q = 0; q < bulk_rule.size(); ++q) {
        space.ref.eval_basis_gradients(bulk_rule.points[static_cast<std::size_t>(q)],
                                       gradients.data());
        const JacobianResult jac = bulk_jacobian_from_gradients(map, gradients.data());
        rec.volume += bulk_rule.weights[static_cast<std::size_t>(q)] * jac.det;
        rec.min_jacobian = std::min(rec.min_jacobian, jac.det);
      }
      if (map.curved()) {
        rec.max_ct = std::max(rec.max_ct, derivative_bound_sample(map, domain, 6));
      }
    }
    for (const auto& face : space.boundary_faces) {
      const CurvedElementMap& map = space.maps[static_cast<std::size_t>(face.cell)];
      for (int q = 0; q < face_rule.size(); ++q) {
        const Vec& xhat_face = face_rule.points[static_cast<std::size_t>(q)];
        const FaceFrame frame =
            face_jacobian(map, space.ref, space.face_ref, face.local_face, xhat_face);
        rec.surface += face_rule.weights[static_cast<std::size_t>(q)] * frame.measure;
        // Position on the discrete surface Gamma_h^(k).
        const Vec xhat = embed_face_point(mesh.dim, face.local_face, xhat_face);
        const Vec x = isoparametric_map(map, space.ref, xhat);
        rec.max_boundary_dist =
            std::max(rec.max_boundary_dist, std::abs(domain.signed_distance(x)));
      }
    }
    records.push_back(rec);
  }

  std::ostringstream csv;
  write_diagnostics_csv(records, csv);
  maybe_write_file(config, csv.str());
  return records;
}

void write_study_csv(const ErrorReport& report, std::ostream& out) {
  out << "level,h,N,errL2,errH1,eocL2,eocH1\n";
  for (const auto& rec : report.levels) {
    out << rec.level << ',' << format_double(rec.h) << ',' << rec.nodes << ','
        << format_double(rec.err_l2) << ',' << format_double(rec.err_h1) << ',';
    if (!std::isnan(rec.eoc_l2)) out << format_double(rec.eoc_l2);
    out << ',';
    if (!std::isnan(rec.eoc_h1)) out << format_double(rec.eoc_h1);
    out << '\n';
  }
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                           std::ostream& out) {
  out << "level,h,volume,surface,maxBoundaryDist,minJacobian,maxCT\n";
  for (const auto& rec : records) {
    out << rec.level << ',' << format_double(rec.h) << ','
        << format_double(rec.volume) << ',' << format_double(rec.surface) << ','
        << format_double(rec.max_boundary_dist) << ','
        << format_double(rec.min_jacobian) << ',' << format_double(rec.max_ct)
        << '\n';
  }
}

void apply_config_entry(StudyConfig& config, const std::string& key,
                        const std::string& value) {
  auto parse_double = [&](const char* field) {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string(field) + ": cannot parse '" + value + "'");
    }
  };
  auto parse_int = [&](const char* field) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string(field) + ": cannot parse '" + value + "'");
    }
  };
  if (key == "domain") {
    if (value == "disk") {
      config.domain = DomainKind::UnitDisk;
    } else if (value == "ball") {
      config.domain = DomainKind::UnitBall;
    } else {
      throw ConfigError("domain: expected 'disk' or 'ball', got '" + value + "'");
    }
  } else if (key == "degree") {
    config.degree = parse_int("degree");
  } else if (key == "levels") {
    config.levels = parse_int("levels");
  } else if (key == "h0") {
    config.h0 = parse_double("h0");
  } else if (key == "alpha") {
    config.alpha = parse_double("alpha");
  } else if (key == "beta") {
    config.beta = parse_double("beta");
  } else if (key == "kappa") {
    config.kappa = parse_double("kappa");
  } else if (key == "variant") {
    if (value == "grp") {
      config.variant = Variant::Grp;
    } else if (value == "robin") {
      config.variant = Variant::Robin;
    } else if (value == "neumann") {
      config.variant = Variant::Neumann;
    } else {
      throw ConfigError("variant: expected grp, robin or neumann, got '" + value + "'");
    }
  } else if (key == "solution") {
    config.solution = value;
  } else if (key == "tol") {
    config.tol = parse_double("tol");
  } else if (key == "out") {
    config.out = value;
  } else if (key == "diagnostics") {
    if (value == "true" || value == "1") {
      config.diagnostics = true;
    } else if (value == "false" || value == "0") {
      config.diagnostics = false;
    } else {
      throw ConfigError("diagnostics: expected true/false, got '" + value + "'");
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

StudyConfig load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file '" + path + "'");
  StudyConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(file, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

std::string variant_name(Variant variant) {
  switch (variant) {
    case Variant::Grp:
      return "grp";
    case Variant::Robin:
      return "robin";
    case Variant::Neumann:
      return "neumann";
  }
  return "grp";
}

}  // namespace grpfem
