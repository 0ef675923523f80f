#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracgibc/geometry.hpp"

namespace fracgibc {

enum class BoundaryTag : int { Gamma0 = 0, Gamma1 = 1 };

/// Oriented boundary edge (a -> b) with the arc-length coordinates of its
/// endpoints on the owning curve. On the closing edge sigma_b equals the
/// full cycle length rather than wrapping to zero.
struct BoundaryEdge {
  int a = 0;
  int b = 0;
  double sigma_a = 0.0;
  double sigma_b = 0.0;
};

/// Triangulation of the annulus between two closed curves. Gamma0 is the
/// inner boundary (interface to the impenetrable subregion), Gamma1 the outer
/// boundary carrying the flux data. Immutable after construction.
class Mesh {
 public:
  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary(BoundaryTag tag) const {
    return tag == BoundaryTag::Gamma0 ? gamma0_ : gamma1_;
  }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }

  /// Boundary node indices in increasing arc-length order.
  const std::vector<int>& boundary_nodes(BoundaryTag tag) const {
    return tag == BoundaryTag::Gamma0 ? gamma0_nodes_ : gamma1_nodes_;
  }
  /// Arc-length coordinate of each boundary node, same order as boundary_nodes.
  const std::vector<double>& boundary_sigmas(BoundaryTag tag) const {
    return tag == BoundaryTag::Gamma0 ? gamma0_sigmas_ : gamma1_sigmas_;
  }
  /// Total (curve) length of a boundary cycle.
  double boundary_length(BoundaryTag tag) const {
    return tag == BoundaryTag::Gamma0 ? gamma0_length_ : gamma1_length_;
  }
  /// Sum of chord lengths of the boundary cycle (polygonal length).
  double polygonal_boundary_length(BoundaryTag tag) const;

  /// Max edge length over all triangle edges.
  double mesh_size() const { return mesh_size_; }

  /// Sum of triangle areas (polygonal approximation of |D1|).
  double area() const;

  double triangle_area(int t) const;

  /// Throws InvalidInput if any structural invariant fails.
  void validate() const;

  void save(std::ostream& os) const;
  void save_file(const std::string& path) const;
  static Mesh load(std::istream& is);
  static Mesh load_file(const std::string& path);

  friend Mesh build_annulus_mesh(const Curve& outer, const Curve& inner, double h);

 private:
  Mesh() = default;
  void rebuild_boundary_node_lists();
  void compute_mesh_size();

  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> gamma0_;
  std::vector<BoundaryEdge> gamma1_;
  std::vector<int> gamma0_nodes_, gamma1_nodes_;
  std::vector<double> gamma0_sigmas_, gamma1_sigmas_;
  double gamma0_length_ = 0.0;
  double gamma1_length_ = 0.0;
  double mesh_size_ = 0.0;
};

/// Structured polar-mapped triangulation of the annulus D1 between the inner
/// curve (Gamma0) and the outer curve (Gamma1). Boundary vertices lie exactly
/// on the curves; max edge length <= h.
Mesh build_annulus_mesh(const Curve& outer, const Curve& inner, double h);

/// Minimum distance between Gamma1 vertices and Gamma0 vertices.
double separation(const Mesh& mesh);

}  // namespace fracgibc
