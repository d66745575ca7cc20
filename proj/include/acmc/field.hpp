#pragma once
#include <Eigen/Dense>

#include "acmc/mesh.hpp"

namespace acmc {

enum class BC { Neumann, Dirichlet };

// Nodal P1 function on a domain mesh.  Dirichlet fields carry exact zeros on
// every boundary node; that is enforced when the field is built.
struct ScalarField {
  MeshPtr mesh;
  BC bc = BC::Neumann;
  Eigen::VectorXd u;

  ScalarField(MeshPtr mesh_, BC bc_, Eigen::VectorXd u_);

  double mass() const;  // 1' M u with the consistent mass matrix
  int size() const { return int(u.size()); }
};

}  // namespace acmc
