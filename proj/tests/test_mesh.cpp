#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracgibc/errors.hpp"
#include "fracgibc/mesh.hpp"

using namespace fracgibc;
namespace {
constexpr double kPi = std::numbers::pi;

Mesh unit_annulus(double h) {
  return build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0), Curve::circle({0.0, 0.0}, 0.5), h);
}
}  // namespace

TEST_CASE("annulus area approximates 3 pi / 4") {
  const Mesh mesh = unit_annulus(0.1);
  CHECK(mesh.area() == doctest::Approx(3.0 * kPi / 4.0).epsilon(0.02));
  CHECK(mesh.mesh_size() <= 0.1);
}

TEST_CASE("halving h roughly doubles the boundary edge counts") {
  const Mesh coarse = unit_annulus(0.1);
  const Mesh fine = unit_annulus(0.05);
  for (BoundaryTag tag : {BoundaryTag::Gamma0, BoundaryTag::Gamma1}) {
    const double ratio = static_cast<double>(fine.boundary(tag).size()) /
                         static_cast<double>(coarse.boundary(tag).size());
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.5);
  }
}

TEST_CASE("boundary vertices sit on the curves") {
  const Mesh mesh = unit_annulus(0.1);
  for (int i : mesh.boundary_nodes(BoundaryTag::Gamma1)) {
    CHECK(std::abs(mesh.vertices()[static_cast<std::size_t>(i)].norm() - 1.0) < 1e-12);
  }
  for (int i : mesh.boundary_nodes(BoundaryTag::Gamma0)) {
    CHECK(std::abs(mesh.vertices()[static_cast<std::size_t>(i)].norm() - 0.5) < 1e-12);
  }
}

TEST_CASE("polygonal Gamma0 length matches the ellipse length oracle") {
  const Curve inner = Curve::ellipse({0.0, 0.0}, 0.5, 0.3);
  const Mesh mesh = build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0), inner, 0.05);
  CHECK(mesh.polygonal_boundary_length(BoundaryTag::Gamma0) ==
        doctest::Approx(2.5526998863398128).epsilon(0.01));
  CHECK(mesh.boundary_length(BoundaryTag::Gamma0) ==
        doctest::Approx(2.5526998863398128).epsilon(1e-9));
}

TEST_CASE("separation of concentric circles") {
  CHECK(separation(unit_annulus(0.1)) == doctest::Approx(0.5).epsilon(0.02));
  const Mesh wide = build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0),
                                       Curve::circle({0.0, 0.0}, 0.25), 0.09);
  CHECK(separation(wide) == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("separation equals brute-force vertex-pair minimization") {
  const Mesh mesh = build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0),
                                       Curve::ellipse({0.0, 0.0}, 0.5, 0.3), 0.1);
  double brute = 1e300;
  for (int i : mesh.boundary_nodes(BoundaryTag::Gamma0)) {
    for (int j : mesh.boundary_nodes(BoundaryTag::Gamma1)) {
      brute = std::min(brute, (mesh.vertices()[static_cast<std::size_t>(i)] -
                               mesh.vertices()[static_cast<std::size_t>(j)])
                                  .norm());
    }
  }
  CHECK(separation(mesh) == doctest::Approx(brute).epsilon(1e-14));
  CHECK(separation(mesh) >= 0.5 - 2.0 * mesh.mesh_size());
}

TEST_CASE("area error decays at second order under refinement") {
  const double exact = 3.0 * kPi / 4.0;
  const double e1 = std::abs(unit_annulus(0.2).area() - exact);
  const double e2 = std::abs(unit_annulus(0.1).area() - exact);
  const double e3 = std::abs(unit_annulus(0.05).area() - exact);
  CHECK(e1 / e2 > 3.0);  // O(h^2) would give ~4
  CHECK(e2 / e3 > 3.0);
}

TEST_CASE("sigma coordinates increase along each cycle and wrap at the length") {
  const Mesh mesh = build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0),
                                       Curve::ellipse({0.0, 0.0}, 0.5, 0.3), 0.1);
  for (BoundaryTag tag : {BoundaryTag::Gamma0, BoundaryTag::Gamma1}) {
    const auto& edges = mesh.boundary(tag);
    double last_end = 0.0;
    for (const auto& e : edges) {
      CHECK(e.sigma_b > e.sigma_a);
      last_end = std::max(last_end, e.sigma_b);
    }
    CHECK(last_end == doctest::Approx(mesh.boundary_length(tag)).epsilon(1e-12));
    CHECK(mesh.boundary_sigmas(tag).front() == 0.0);
  }
}

TEST_CASE("save/load round trip is stable") {
  const Mesh mesh = build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0),
                                       Curve::ellipse({0.0, 0.0}, 0.5, 0.3), 0.15);
  std::ostringstream first;
  mesh.save(first);
  std::istringstream in(first.str());
  const Mesh loaded = Mesh::load(in);
  std::ostringstream second;
  loaded.save(second);
  CHECK(first.str() == second.str());
  CHECK(loaded.n_vertices() == mesh.n_vertices());
  CHECK(loaded.area() == doctest::Approx(mesh.area()).epsilon(1e-15));
}

TEST_CASE("invalid geometries are rejected") {
  const Curve outer = Curve::circle({0.0, 0.0}, 1.0);
  // Inner curve pokes outside the outer circle.
  CHECK_THROWS_AS(build_annulus_mesh(outer, Curve::circle({0.8, 0.0}, 0.5), 0.1),
                  InvalidInput);
  CHECK_THROWS_AS(build_annulus_mesh(outer, Curve::circle({0.0, 0.0}, 1.2), 0.1),
                  InvalidInput);
  // h too coarse for the inner curve (< 8 edges).
  CHECK_THROWS_AS(build_annulus_mesh(outer, Curve::circle({0.0, 0.0}, 0.5), 0.5),
                  InvalidInput);
  CHECK_THROWS_AS(build_annulus_mesh(outer, Curve::circle({0.0, 0.0}, 0.5), -0.1),
                  InvalidInput);
}

TEST_CASE("triangles are positively oriented with no interior Gamma0 vertices") {
  const Mesh mesh = build_annulus_mesh(Curve::circle({0.0, 0.0}, 1.0),
                                       Curve::ellipse({0.5, 0.0}, 0.3, 0.2), 0.1);
  for (int t = 0; t < mesh.n_triangles(); ++t) CHECK(mesh.triangle_area(t) > 0.0);
  // No vertex strictly inside the inner curve.
  const Curve inner = Curve::ellipse({0.5, 0.0}, 0.3, 0.2);
  for (const auto& v : mesh.vertices()) {
    const Eigen::Vector2d d = v - Eigen::Vector2d(0.5, 0.0);
    if (d.norm() < 1e-12) continue;
    const double theta = std::atan2(d.y(), d.x());
    CHECK(d.norm() >= inner.radius(theta) - 1e-9);
  }
}
