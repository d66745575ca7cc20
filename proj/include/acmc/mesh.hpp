#pragma once
#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "acmc/geom2d.hpp"

namespace acmc {

enum class DomainKind { Disk, Annulus, EccentricAnnulus, Rectangle };

struct DomainSpec {
  DomainKind kind = DomainKind::Disk;
  double r_out = 1.0;
  double r_in = 0.0;
  Vec2 hole_offset{0, 0};  // hole center for the eccentric annulus
  double width = 1.0, height = 1.0;
  double h = 0.05;      // target edge length
  double delta_M = 0;   // collar depth, 0 picks 0.25 * min_feature
};

// Point on the domain boundary: loop id, arclength coordinate along that
// loop, position, and the unit normal pointing into the domain.
struct BoundaryPoint {
  int component = 0;
  double s = 0;
  Vec2 p{0, 0};
  Vec2 normal{0, 0};
};

// Ball (possibly clipped by the walls) used as a sharp-interface region.
// vol is the area it actually encloses under mesh quadrature; arcs describe
// the free part of its circle when the analytic domain shape is known.
struct BallRegion {
  Vec2 center{0, 0};
  double radius = 0;
  double vol = 0;
  bool clipped = false;
  bool has_arcs = false;
  std::vector<AngleInterval> arcs;
};

struct DomainMesh {
  DomainSpec spec;
  DomainGeom geom;
  bool has_geom = true;  // false for meshes read back from file

  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> node_component;        // -1 interior, else boundary loop id
  std::vector<std::vector<int>> loops;    // node ids per loop, domain on the left
  std::vector<double> loop_length;        // total arclength per loop
  std::vector<double> curvature;          // per node; 0 at interior nodes
  std::vector<double> inj_estimate;       // per loop, projection validity radius
  std::vector<int> boundary_nodes, interior_nodes;

  Eigen::SparseMatrix<double> K;  // stiffness, row sums 0
  Eigen::SparseMatrix<double> M;  // consistent mass
  Eigen::VectorXd ML;             // lumped mass (row sums of M)
  double area = 0;                // sum of triangle areas
  double diameter = 0;
  double min_feature = 0;
  double delta_M = 0;  // collar depth, 0.25 * min_feature unless overridden

  int n_nodes() const { return int(nodes.size()); }
};

using MeshPtr = std::shared_ptr<const DomainMesh>;

MeshPtr build_domain(const DomainSpec& spec);

// Nearest boundary point.  With strict set, competing minimizers at
// spatially distant locations raise AmbiguousProjection.
BoundaryPoint project_to_boundary(const DomainMesh& mesh, Vec2 x, bool strict = false);

// Identity on the closed domain, boundary projection outside.
Vec2 project_to_domain(const DomainMesh& mesh, Vec2 x);

// Point at arclength s (wrapped) along boundary loop `component`.
BoundaryPoint boundary_point(const DomainMesh& mesh, int component, double s);

// Ball about `center` whose mesh-clipped area equals `mass` within
// 1e-8 * area; radius found by monotone bisection.
BallRegion ball_indicator(const DomainMesh& mesh, Vec2 center, double mass);

// Signed distance from every node to the free interface of the region,
// positive inside the ball, negative outside.
Eigen::VectorXd signed_distance(const DomainMesh& mesh, const BallRegion& region);

// Same sign convention for a region given as a nodal 0/1 indicator; the
// interface is the mid-edge polyline separating the two labels.
Eigen::VectorXd signed_distance(const DomainMesh& mesh, const std::vector<char>& inside);

// Plain-text persistence: node lines "x y boundary_flag component_id",
// triangle lines "i j k" (0-based).  Coordinates keep full precision.
void save_mesh(const DomainMesh& mesh, const std::string& path);
MeshPtr load_mesh(const std::string& path);

}  // namespace acmc
