#include "acmc/field.hpp"

#include "acmc/errors.hpp"

namespace acmc {

ScalarField::ScalarField(MeshPtr mesh_, BC bc_, Eigen::VectorXd u_)
    : mesh(std::move(mesh_)), bc(bc_), u(std::move(u_)) {
  if (!mesh) throw Error("field needs a mesh");
  if (u.size() != mesh->n_nodes()) throw Error("field size does not match the mesh");
  if (bc == BC::Dirichlet)
    for (int i : mesh->boundary_nodes)
      if (u[i] != 0.0) throw Error("dirichlet field must vanish on boundary nodes");
}

double ScalarField::mass() const { return (mesh->M * u).sum(); }

}  // namespace acmc
