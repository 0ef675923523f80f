#include "fracgibc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "fracgibc/errors.hpp"

namespace fracgibc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_area(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                   const Eigen::Vector2d& p2) {
  return 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                (p2.x() - p0.x()) * (p1.y() - p0.y()));
}

// Even-odd rule point-in-polygon.
bool inside_polygon(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles_[static_cast<std::size_t>(t)];
  return signed_area(vertices_[static_cast<std::size_t>(tri[0])],
                     vertices_[static_cast<std::size_t>(tri[1])],
                     vertices_[static_cast<std::size_t>(tri[2])]);
}

double Mesh::area() const {
  double total = 0.0;
  for (int t = 0; t < n_triangles(); ++t) total += triangle_area(t);
  return total;
}

double Mesh::polygonal_boundary_length(BoundaryTag tag) const {
  double total = 0.0;
  for (const auto& e : boundary(tag)) {
    total += (vertices_[static_cast<std::size_t>(e.b)] -
              vertices_[static_cast<std::size_t>(e.a)])
                 .norm();
  }
  return total;
}

void Mesh::compute_mesh_size() {
  double h = 0.0;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const auto& p = vertices_[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
      const auto& q = vertices_[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])];
      h = std::max(h, (p - q).norm());
    }
  }
  mesh_size_ = h;
}

void Mesh::rebuild_boundary_node_lists() {
  auto build = [this](const std::vector<BoundaryEdge>& edges, std::vector<int>& nodes,
                      std::vector<double>& sigmas, double& length) {
    nodes.clear();
    sigmas.clear();
    std::vector<BoundaryEdge> sorted = edges;
    std::sort(sorted.begin(), sorted.end(),
              [](const BoundaryEdge& x, const BoundaryEdge& y) { return x.sigma_a < y.sigma_a; });
    for (const auto& e : sorted) {
      nodes.push_back(e.a);
      sigmas.push_back(e.sigma_a);
    }
    length = sorted.empty() ? 0.0 : sorted.back().sigma_b;
  };
  build(gamma0_, gamma0_nodes_, gamma0_sigmas_, gamma0_length_);
  build(gamma1_, gamma1_nodes_, gamma1_sigmas_, gamma1_length_);
}

void Mesh::validate() const {
  if (vertices_.empty() || triangles_.empty()) throw InvalidInput("mesh: empty");
  for (const auto& tri : triangles_) {
    for (int v : tri) {
      if (v < 0 || v >= n_vertices()) throw InvalidInput("mesh: triangle index out of range");
    }
    const double a = signed_area(vertices_[static_cast<std::size_t>(tri[0])],
                                 vertices_[static_cast<std::size_t>(tri[1])],
                                 vertices_[static_cast<std::size_t>(tri[2])]);
    if (!(a > 0.0)) throw InvalidInput("mesh: nonpositive triangle orientation/area");
  }

  // Boundary edges: each tagged exactly once, cycles closed, sigma increasing.
  std::set<std::pair<int, int>> seen;
  for (const auto* cycle : {&gamma0_, &gamma1_}) {
    if (cycle->size() < 3) throw InvalidInput("mesh: boundary cycle too short");
    std::map<int, int> out_deg, in_deg;
    for (const auto& e : *cycle) {
      auto key = std::minmax(e.a, e.b);
      if (!seen.insert({key.first, key.second}).second) {
        throw InvalidInput("mesh: boundary edge tagged twice");
      }
      out_deg[e.a]++;
      in_deg[e.b]++;
      if (!(e.sigma_b > e.sigma_a)) throw InvalidInput("mesh: sigma not increasing on edge");
    }
    for (const auto& [node, deg] : out_deg) {
      if (deg != 1 || in_deg[node] != 1) throw InvalidInput("mesh: boundary cycle not closed");
    }
  }
}

Mesh build_annulus_mesh(const Curve& outer, const Curve& inner, double h) {
  if (!(h > 0.0)) throw InvalidInput("mesh size h must be positive");

  // Inner curve must be strictly inside the outer one with positive clearance.
  {
    const int m = 512;
    std::vector<Eigen::Vector2d> outer_poly(m), inner_poly(m);
    for (int i = 0; i < m; ++i) {
      const double theta = kTwoPi * i / m;
      outer_poly[static_cast<std::size_t>(i)] = outer.point(theta);
      inner_poly[static_cast<std::size_t>(i)] = inner.point(theta);
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (const auto& p : inner_poly) {
      if (!inside_polygon(outer_poly, p)) {
        throw InvalidInput("annulus: inner curve not strictly inside outer curve");
      }
      for (const auto& q : outer_poly) min_dist = std::min(min_dist, (p - q).norm());
    }
    if (!(min_dist > 0.0)) throw InvalidInput("annulus: curves touch or intersect");
  }

  if (inner.length() / h < 8.0) {
    throw InvalidInput("annulus: h too coarse to resolve the inner curve (need >= 8 edges)");
  }

  const double target = h / std::numbers::sqrt2;
  double max_gap = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double theta = kTwoPi * i / 512;
    max_gap = std::max(max_gap, (outer.point(theta) - inner.point(theta)).norm());
  }

  int n_theta = std::max<int>(8, static_cast<int>(
      std::ceil(std::max(outer.length(), inner.length()) / target)));
  int n_rho = std::max<int>(2, static_cast<int>(std::ceil(max_gap / target)));

  Mesh mesh;
  for (int attempt = 0; attempt < 24; ++attempt) {
    mesh = Mesh();
    mesh.vertices_.reserve(static_cast<std::size_t>((n_rho + 1) * n_theta));
    // Ring i = 0 on the inner curve (Gamma0), ring n_rho on the outer (Gamma1);
    // intermediate rings blend between the two along matched angles.
    for (int i = 0; i <= n_rho; ++i) {
      const double rho = static_cast<double>(i) / n_rho;
      for (int j = 0; j < n_theta; ++j) {
        const double theta = kTwoPi * j / n_theta;
        const Eigen::Vector2d p =
            (1.0 - rho) * inner.point(theta) + rho * outer.point(theta);
        mesh.vertices_.push_back(p);
      }
    }
    auto vid = [n_theta](int i, int j) { return i * n_theta + (j % n_theta); };
    for (int i = 0; i < n_rho; ++i) {
      for (int j = 0; j < n_theta; ++j) {
        const int v00 = vid(i, j), v01 = vid(i, j + 1);
        const int v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1);
        for (std::array<int, 3> tri : {std::array<int, 3>{v00, v01, v11},
                                       std::array<int, 3>{v00, v11, v10}}) {
          const double a = signed_area(mesh.vertices_[static_cast<std::size_t>(tri[0])],
                                       mesh.vertices_[static_cast<std::size_t>(tri[1])],
                                       mesh.vertices_[static_cast<std::size_t>(tri[2])]);
          if (a == 0.0) throw InvalidInput("annulus: degenerate triangle generated");
          if (a < 0.0) std::swap(tri[1], tri[2]);
          mesh.triangles_.push_back(tri);
        }
      }
    }
    auto add_cycle = [&](const Curve& curve, int ring, std::vector<BoundaryEdge>& edges) {
      std::vector<double> sigma(static_cast<std::size_t>(n_theta) + 1);
      for (int j = 0; j < n_theta; ++j) {
        sigma[static_cast<std::size_t>(j)] = curve.arc_length(kTwoPi * j / n_theta);
      }
      sigma[static_cast<std::size_t>(n_theta)] = curve.length();
      for (int j = 0; j < n_theta; ++j) {
        edges.push_back({vid(ring, j), vid(ring, j + 1), sigma[static_cast<std::size_t>(j)],
                         sigma[static_cast<std::size_t>(j) + 1]});
      }
    };
    add_cycle(inner, 0, mesh.gamma0_);
    add_cycle(outer, n_rho, mesh.gamma1_);
    mesh.compute_mesh_size();
    if (mesh.mesh_size_ <= h) break;
    const double ratio = mesh.mesh_size_ / h;
    n_theta = static_cast<int>(std::ceil(n_theta * std::min(ratio, 2.0) * 1.02));
    n_rho = static_cast<int>(std::ceil(n_rho * std::min(ratio, 2.0) * 1.02));
  }
  if (mesh.mesh_size_ > h) {
    throw NumericalFailure("annulus: could not reach target mesh size");
  }
  mesh.rebuild_boundary_node_lists();
  mesh.validate();
  return mesh;
}

double separation(const Mesh& mesh) {
  double d = std::numeric_limits<double>::infinity();
  for (int i : mesh.boundary_nodes(BoundaryTag::Gamma0)) {
    const auto& p = mesh.vertices()[static_cast<std::size_t>(i)];
    for (int j : mesh.boundary_nodes(BoundaryTag::Gamma1)) {
      d = std::min(d, (p - mesh.vertices()[static_cast<std::size_t>(j)]).norm());
    }
  }
  return d;
}

void Mesh::save(std::ostream& os) const {
  std::string out;
  out.reserve(vertices_.size() * 48);
  for (const auto& v : vertices_) {
    out += "v ";
    format_double(out, v.x());
    out += ' ';
    format_double(out, v.y());
    out += '\n';
  }
  for (const auto& t : triangles_) {
    out += "t " + std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' +
           std::to_string(t[2]) + '\n';
  }
  for (const auto* cycle : {&gamma0_, &gamma1_}) {
    const int tag = (cycle == &gamma0_) ? 0 : 1;
    for (const auto& e : *cycle) {
      out += "b " + std::to_string(tag) + ' ' + std::to_string(e.a) + ' ' +
             std::to_string(e.b) + ' ';
      format_double(out, e.sigma_a);
      out += ' ';
      format_double(out, e.sigma_b);
      out += '\n';
    }
  }
  os << out;
}

void Mesh::save_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw InvalidInput("mesh: cannot open " + path + " for writing");
  save(os);
}

Mesh Mesh::load(std::istream& is) {
  Mesh mesh;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    char kind = 0;
    ls >> kind;
    if (kind == 'v') {
      double x = 0.0, y = 0.0;
      if (!(ls >> x >> y)) throw InvalidInput("mesh: bad vertex line " + std::to_string(line_no));
      mesh.vertices_.emplace_back(x, y);
    } else if (kind == 't') {
      int i = 0, j = 0, k = 0;
      if (!(ls >> i >> j >> k)) throw InvalidInput("mesh: bad triangle line " + std::to_string(line_no));
      mesh.triangles_.push_back({i, j, k});
    } else if (kind == 'b') {
      int tag = 0;
      BoundaryEdge e;
      if (!(ls >> tag >> e.a >> e.b >> e.sigma_a >> e.sigma_b)) {
        throw InvalidInput("mesh: bad boundary line " + std::to_string(line_no));
      }
      if (tag == 0) {
        mesh.gamma0_.push_back(e);
      } else if (tag == 1) {
        mesh.gamma1_.push_back(e);
      } else {
        throw InvalidInput("mesh: unknown boundary tag on line " + std::to_string(line_no));
      }
    } else {
      throw InvalidInput("mesh: unknown record on line " + std::to_string(line_no));
    }
  }
  mesh.rebuild_boundary_node_lists();
  mesh.compute_mesh_size();
  mesh.validate();
  return mesh;
}

Mesh Mesh::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("mesh: cannot open " + path);
  return load(is);
}

}  // namespace fracgibc
