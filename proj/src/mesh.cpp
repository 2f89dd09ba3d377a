#include "grpfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace grpfem {

namespace {

constexpr double kBoundaryTol = 1e-10;

Vec vertex_of(int dim, const std::vector<double>& coords, int v) {
  Vec x(dim);
  for (int d = 0; d < dim; ++d) x[d] = coords[static_cast<std::size_t>(v) * dim + d];
  return x;
}

double cell_diameter(const Mesh& mesh, const std::array<int, 4>& cell) {
  double diam = 0.0;
  const int nv = mesh.dim + 1;
  for (int a = 0; a < nv; ++a) {
    for (int b = a + 1; b < nv; ++b) {
      diam = std::max(diam, (mesh.vertex(cell[a]) - mesh.vertex(cell[b])).norm());
    }
  }
  return diam;
}

Mat cell_matrix(const Mesh& mesh, const std::array<int, 4>& cell) {
  const int n = mesh.dim;
  Mat B(n, n);
  const Vec origin = mesh.vertex(cell[0]);
  for (int j = 0; j < n; ++j) B.col(j) = mesh.vertex(cell[j + 1]) - origin;
  return B;
}

double inscribed_ball_diameter(const Mesh& mesh, const std::array<int, 4>& cell) {
  const int n = mesh.dim;
  const double det = cell_matrix(mesh, cell).determinant();
  if (n == 2) {
    const double area = 0.5 * std::abs(det);
    double perimeter = 0.0;
    for (int a = 0; a < 3; ++a) {
      perimeter += (mesh.vertex(cell[a]) - mesh.vertex(cell[(a + 1) % 3])).norm();
    }
    return 4.0 * area / perimeter;
  }
  const double volume = std::abs(det) / 6.0;
  double face_area = 0.0;
  for (int f = 0; f < 4; ++f) {
    int ids[3];
    int t = 0;
    for (int s = 0; s < 4; ++s) {
      if (s != f) ids[t++] = cell[s];
    }
    const Vec e1 = mesh.vertex(ids[1]) - mesh.vertex(ids[0]);
    const Vec e2 = mesh.vertex(ids[2]) - mesh.vertex(ids[0]);
    Eigen::Vector3d a(e1[0], e1[1], e1[2]);
    Eigen::Vector3d b(e2[0], e2[1], e2[2]);
    face_area += 0.5 * a.cross(b).norm();
  }
  return 6.0 * volume / face_area;
}

struct FaceKey {
  std::array<int, 3> verts{-1, -1, -1};
  bool operator<(const FaceKey& o) const { return verts < o.verts; }
};

FaceKey face_key(const Mesh& mesh, int cell, int local_face) {
  FaceKey key;
  const auto fv = mesh.face_vertices(cell, local_face);
  for (std::size_t i = 0; i < fv.size(); ++i) key.verts[i] = fv[i];
  std::sort(key.verts.begin(), key.verts.begin() + mesh.dim);
  return key;
}

// Derives boundary faces by face-sharing counts, renumbers vertices boundary
// first, sorts each cell boundary-first with positive orientation, and fills
// the derived fields. The vertex permutation is stable, so an already
// ordered mesh passes through unchanged.
Mesh finish_mesh(int dim, std::vector<double> coords,
                 std::vector<std::array<int, 4>> cells) {
  Mesh mesh;
  mesh.dim = dim;
  mesh.coords = std::move(coords);
  mesh.cells = std::move(cells);

  const int nv = mesh.vertex_count();
  const int faces_per_cell = dim + 1;

  std::map<FaceKey, int> counts;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int f = 0; f < faces_per_cell; ++f) {
      const FaceKey key = face_key(mesh, c, f);
      auto [it, inserted] = counts.emplace(key, 0);
      (void)inserted;
      it->second += 1;
      if (it->second > 2) {
        throw NumericalError("mesh: face shared by more than two cells");
      }
    }
  }

  std::vector<bool> on_boundary(nv, false);
  std::vector<FaceKey> boundary_keys;
  for (const auto& [key, count] : counts) {
    if (count == 1) {
      boundary_keys.push_back(key);
      for (int i = 0; i < dim; ++i) on_boundary[static_cast<std::size_t>(key.verts[i])] = true;
    }
  }

  // Stable boundary-first vertex permutation.
  std::vector<int> new_of_old(nv, -1);
  int next = 0;
  for (int v = 0; v < nv; ++v) {
    if (on_boundary[v]) new_of_old[v] = next++;
  }
  mesh.boundary_vertex_count = next;
  for (int v = 0; v < nv; ++v) {
    if (!on_boundary[v]) new_of_old[v] = next++;
  }

  std::vector<double> new_coords(mesh.coords.size());
  for (int v = 0; v < nv; ++v) {
    for (int d = 0; d < dim; ++d) {
      new_coords[static_cast<std::size_t>(new_of_old[v]) * dim + d] =
          mesh.coords[static_cast<std::size_t>(v) * dim + d];
    }
  }
  mesh.coords = std::move(new_coords);

  for (auto& cell : mesh.cells) {
    for (int j = 0; j <= dim; ++j) cell[j] = new_of_old[cell[j]];
    // Boundary vertices first (stable), then restore positive orientation by
    // a swap inside one of the two classes.
    std::stable_partition(cell.begin(), cell.begin() + dim + 1, [&](int v) {
      return v < mesh.boundary_vertex_count;
    });
    int l = 0;
    while (l <= dim && cell[l] < mesh.boundary_vertex_count) ++l;
    if (l == dim + 1) {
      throw NumericalError("mesh: cell with all vertices on the boundary");
    }
    const double det = cell_matrix(mesh, cell).determinant();
    if (det == 0.0) throw NumericalError("mesh: degenerate cell");
    if (det < 0.0) {
      if (l >= 2) {
        std::swap(cell[0], cell[1]);
      } else {
        std::swap(cell[dim - 1], cell[dim]);
      }
    }
  }

  // Re-derive the boundary (cell, local face) pairs under the new numbering.
  std::map<FaceKey, std::pair<int, int>> boundary_owner;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int f = 0; f < faces_per_cell; ++f) {
      const FaceKey key = face_key(mesh, c, f);
      bool is_boundary = true;
      for (int i = 0; i < dim; ++i) {
        if (key.verts[i] >= mesh.boundary_vertex_count) is_boundary = false;
      }
      if (!is_boundary) continue;
      // A face is boundary iff it occurred once in the original count; the
      // vertex test alone can mislabel interior chord faces, so recount.
      boundary_owner.emplace(key, std::make_pair(c, f));
    }
  }
  std::map<FaceKey, int> recounts;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int f = 0; f < faces_per_cell; ++f) recounts[face_key(mesh, c, f)] += 1;
  }
  mesh.boundary_faces.clear();
  for (const auto& [key, owner] : boundary_owner) {
    if (recounts.at(key) == 1) mesh.boundary_faces.push_back(owner);
  }
  std::sort(mesh.boundary_faces.begin(), mesh.boundary_faces.end());

  mesh.h = mesh_size(mesh);
  mesh.shape_ratio = shape_regularity_ratio(mesh);
  return mesh;
}

Mesh base_disk_mesh(const Domain& domain) {
  const int rim = 6;
  std::vector<double> coords;
  for (int i = 0; i < rim; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / rim;
    coords.push_back(std::cos(angle));
    coords.push_back(std::sin(angle));
  }
  coords.push_back(0.0);
  coords.push_back(0.0);
  std::vector<std::array<int, 4>> cells;
  for (int i = 0; i < rim; ++i) {
    cells.push_back({i, (i + 1) % rim, rim, -1});
  }
  Mesh mesh = finish_mesh(2, std::move(coords), std::move(cells));
  validate_mesh(mesh, domain);
  return mesh;
}

Mesh base_ball_mesh(const Domain& domain) {
  std::vector<double> coords = {
      1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0,
  };
  const int xp = 0, xm = 1, yp = 2, ym = 3, zp = 4, zm = 5, center = 6;
  std::vector<std::array<int, 4>> cells;
  for (int sx : {0, 1}) {
    for (int sy : {0, 1}) {
      for (int sz : {0, 1}) {
        cells.push_back({sx ? xm : xp, sy ? ym : yp, sz ? zm : zp, center});
      }
    }
  }
  Mesh mesh = finish_mesh(3, std::move(coords), std::move(cells));
  validate_mesh(mesh, domain);
  return mesh;
}

}  // namespace

Vec Mesh::vertex(int v) const { return vertex_of(dim, coords, v); }

std::vector<int> Mesh::face_vertices(int cell, int local_face) const {
  std::vector<int> out;
  out.reserve(dim);
  for (int s = 0; s <= dim; ++s) {
    if (s != local_face) out.push_back(cells[static_cast<std::size_t>(cell)][s]);
  }
  return out;
}

int Mesh::boundary_vertices_in_cell(int cell) const {
  int l = 0;
  while (l <= dim && cells[static_cast<std::size_t>(cell)][l] < boundary_vertex_count) ++l;
  return l;
}

double mesh_size(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& cell : mesh.cells) h = std::max(h, cell_diameter(mesh, cell));
  return h;
}

double shape_regularity_ratio(const Mesh& mesh) {
  double max_diam = 0.0;
  double min_inball = std::numeric_limits<double>::max();
  for (const auto& cell : mesh.cells) {
    max_diam = std::max(max_diam, cell_diameter(mesh, cell));
    min_inball = std::min(min_inball, inscribed_ball_diameter(mesh, cell));
  }
  return max_diam / min_inball;
}

void validate_mesh(const Mesh& mesh, const Domain& domain) {
  if (mesh.dim != domain.dimension()) {
    throw NumericalError("mesh: dimension does not match the domain");
  }
  const int nv = mesh.vertex_count();
  for (int v = 0; v < nv; ++v) {
    const double d = domain.signed_distance(mesh.vertex(v));
    if (v < mesh.boundary_vertex_count) {
      if (std::abs(d) > kBoundaryTol) {
        throw NumericalError("mesh: boundary vertex off the boundary, |d| = " +
                             std::to_string(std::abs(d)));
      }
    } else if (d >= 0.0) {
      throw NumericalError("mesh: interior vertex not inside the domain");
    }
  }
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const auto& cell = mesh.cells[static_cast<std::size_t>(c)];
    const int l = mesh.boundary_vertices_in_cell(c);
    if (l == mesh.dim + 1) {
      throw NumericalError("mesh: cell " + std::to_string(c) +
                           " has all vertices on the boundary");
    }
    for (int s = l; s <= mesh.dim; ++s) {
      if (cell[s] < mesh.boundary_vertex_count) {
        throw NumericalError("mesh: cell vertices not boundary-first");
      }
    }
    if (cell_matrix(mesh, cell).determinant() <= 0.0) {
      throw NumericalError("mesh: inverted cell " + std::to_string(c));
    }
  }
  // Conformity.
  std::map<FaceKey, int> counts;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int f = 0; f <= mesh.dim; ++f) counts[face_key(mesh, c, f)] += 1;
  }
  std::set<FaceKey> boundary_set;
  for (const auto& [c, f] : mesh.boundary_faces) {
    const FaceKey key = face_key(mesh, c, f);
    if (counts.at(key) != 1) {
      throw NumericalError("mesh: boundary face shared by two cells");
    }
    boundary_set.insert(key);
    for (const int v : mesh.face_vertices(c, f)) {
      if (v >= mesh.boundary_vertex_count) {
        throw NumericalError("mesh: boundary face with interior vertex");
      }
    }
  }
  int boundary_count = 0;
  for (const auto& [key, count] : counts) {
    if (count == 1) {
      ++boundary_count;
      if (!boundary_set.count(key)) {
        throw NumericalError("mesh: unlisted boundary face");
      }
    }
  }
  if (boundary_count != static_cast<int>(mesh.boundary_faces.size())) {
    throw NumericalError("mesh: boundary face list out of date");
  }
  // Strip containment of the polyhedral boundary: sample each boundary face
  // on a barycentric lattice.
  const int sample = 8;
  for (const auto& [c, f] : mesh.boundary_faces) {
    const auto fv = mesh.face_vertices(c, f);
    auto check = [&](const Vec& x) {
      if (std::abs(domain.signed_distance(x)) >= 0.98 * domain.strip_width()) {
        throw NumericalError(
            "mesh: polyhedral boundary leaves the projection strip "
            "(target h too coarse)");
      }
    };
    if (mesh.dim == 2) {
      for (int i = 0; i <= sample; ++i) {
        const double t = static_cast<double>(i) / sample;
        check((1.0 - t) * mesh.vertex(fv[0]) + t * mesh.vertex(fv[1]));
      }
    } else {
      for (int i = 0; i <= sample; ++i) {
        for (int j = 0; j <= sample - i; ++j) {
          const double a = static_cast<double>(i) / sample;
          const double b = static_cast<double>(j) / sample;
          check(a * mesh.vertex(fv[0]) + b * mesh.vertex(fv[1]) +
                (1.0 - a - b) * mesh.vertex(fv[2]));
        }
      }
    }
  }
}

Mesh generate_linear_mesh(const Domain& domain, double target_h) {
  if (!(target_h > 0.0)) {
    throw std::invalid_argument("generate_linear_mesh: target h must be positive");
  }
  Mesh mesh = domain.dimension() == 2 ? base_disk_mesh(domain) : base_ball_mesh(domain);
  while (mesh.h > target_h) {
    mesh = refine(mesh, domain);
  }
  return mesh;
}

Mesh refine(const Mesh& mesh, const Domain& domain) {
  const int dim = mesh.dim;

  // Edges of boundary faces get projected midpoints.
  std::set<std::pair<int, int>> boundary_edges;
  for (const auto& [c, f] : mesh.boundary_faces) {
    const auto fv = mesh.face_vertices(c, f);
    for (std::size_t a = 0; a < fv.size(); ++a) {
      for (std::size_t b = a + 1; b < fv.size(); ++b) {
        boundary_edges.insert(std::minmax(fv[a], fv[b]));
      }
    }
  }

  std::vector<double> coords = mesh.coords;
  std::map<std::pair<int, int>, int> midpoint_of;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint_of.find(key);
    if (it != midpoint_of.end()) return it->second;
    Vec m = 0.5 * (mesh.vertex(a) + mesh.vertex(b));
    if (boundary_edges.count(key)) m = domain.closest_point(m);
    const int id = static_cast<int>(coords.size()) / dim;
    for (int d = 0; d < dim; ++d) coords.push_back(m[d]);
    midpoint_of.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 4>> cells;
  cells.reserve(mesh.cells.size() * (dim == 2 ? 4 : 8));
  for (const auto& cell : mesh.cells) {
    if (dim == 2) {
      const int a = cell[0], b = cell[1], c = cell[2];
      const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      cells.push_back({a, ab, ca, -1});
      cells.push_back({b, bc, ab, -1});
      cells.push_back({c, ca, bc, -1});
      cells.push_back({ab, bc, ca, -1});
    } else {
      const int v0 = cell[0], v1 = cell[1], v2 = cell[2], v3 = cell[3];
      const int m01 = midpoint(v0, v1), m02 = midpoint(v0, v2), m03 = midpoint(v0, v3);
      const int m12 = midpoint(v1, v2), m13 = midpoint(v1, v3), m23 = midpoint(v2, v3);
      cells.push_back({v0, m01, m02, m03});
      cells.push_back({v1, m01, m12, m13});
      cells.push_back({v2, m02, m12, m23});
      cells.push_back({v3, m03, m13, m23});
      // Central octahedron: split around the shortest of the three interior
      // diagonals (deterministic tie-break by listed order).
      const std::array<std::array<int, 2>, 3> diagonals = {
          {{m01, m23}, {m02, m13}, {m03, m12}}};
      auto length = [&](const std::array<int, 2>& e) {
        return (vertex_of(dim, coords, e[0]) - vertex_of(dim, coords, e[1])).norm();
      };
      int best = 0;
      for (int i = 1; i < 3; ++i) {
        if (length(diagonals[i]) < length(diagonals[best])) best = i;
      }
      const int d0 = diagonals[best][0], d1 = diagonals[best][1];
      std::array<int, 4> equator;
      if (best == 0) {
        equator = {m02, m03, m13, m12};
      } else if (best == 1) {
        equator = {m01, m03, m23, m12};
      } else {
        equator = {m01, m02, m23, m13};
      }
      for (int i = 0; i < 4; ++i) {
        cells.push_back({d0, d1, equator[i], equator[(i + 1) % 4]});
      }
    }
  }

  Mesh refined = finish_mesh(dim, std::move(coords), std::move(cells));
  validate_mesh(refined, domain);
  return refined;
}

Mesh order_nodes_boundary_first(const Mesh& mesh) {
  return finish_mesh(mesh.dim, mesh.coords, mesh.cells);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.dim << ' ' << mesh.vertex_count() << ' ' << mesh.cell_count()
      << ' ' << mesh.boundary_faces.size() << '\n';
  char buf[32];
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    for (int d = 0; d < mesh.dim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    mesh.coords[static_cast<std::size_t>(v) * mesh.dim + d]);
      out << (d ? " " : "") << buf;
    }
    out << '\n';
  }
  for (const auto& cell : mesh.cells) {
    for (int s = 0; s <= mesh.dim; ++s) out << (s ? " " : "") << cell[s];
    out << '\n';
  }
  for (const auto& [c, f] : mesh.boundary_faces) out << c << ' ' << f << '\n';
}

Mesh read_mesh(std::istream& in) {
  int dim = 0, nv = 0, nc = 0, nbf = 0;
  if (!(in >> dim >> nv >> nc >> nbf) || (dim != 2 && dim != 3)) {
    throw NumericalError("read_mesh: bad header");
  }
  Mesh mesh;
  mesh.dim = dim;
  mesh.coords.resize(static_cast<std::size_t>(nv) * dim);
  for (double& c : mesh.coords) {
    if (!(in >> c)) throw NumericalError("read_mesh: bad coordinate");
  }
  mesh.cells.assign(static_cast<std::size_t>(nc), {-1, -1, -1, -1});
  for (auto& cell : mesh.cells) {
    for (int s = 0; s <= dim; ++s) {
      if (!(in >> cell[s]) || cell[s] < 0 || cell[s] >= nv) {
        throw NumericalError("read_mesh: bad cell index");
      }
    }
  }
  mesh.boundary_faces.resize(static_cast<std::size_t>(nbf));
  std::vector<bool> on_boundary(static_cast<std::size_t>(nv), false);
  for (auto& [c, f] : mesh.boundary_faces) {
    if (!(in >> c >> f) || c < 0 || c >= nc || f < 0 || f > dim) {
      throw NumericalError("read_mesh: bad boundary face");
    }
    for (const int v : mesh.face_vertices(c, f)) on_boundary[static_cast<std::size_t>(v)] = true;
  }
  int count = 0;
  for (int v = 0; v < nv; ++v) {
    if (on_boundary[static_cast<std::size_t>(v)]) {
      if (v != count) {
        throw NumericalError("read_mesh: vertices not numbered boundary-first");
      }
      ++count;
    }
  }
  mesh.boundary_vertex_count = count;
  mesh.h = mesh_size(mesh);
  mesh.shape_ratio = shape_regularity_ratio(mesh);
  return mesh;
}

}  // namespace grpfem
