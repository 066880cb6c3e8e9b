#pragma once

#include <Eigen/Sparse>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wwtm/mesh.hpp"

namespace wwtm {

/// Symmetric sparse quadratic form. Stored fully (both triangles).
struct SparseSymmetric {
    Eigen::SparseMatrix<double> mat;

    int dimension() const { return static_cast<int>(mat.rows()); }
    /// Max |a_ij - a_ji|; 0 for forms produced by the assemblers.
    double asymmetry() const;
    void check_symmetric(double tol = 1e-12) const;
};

/// Stiffness, domain mass, and one boundary-trace mass per boundary tag,
/// all over the same vertex index space.
struct Forms {
    SparseSymmetric stiffness;
    SparseSymmetric mass;
    std::map<std::string, SparseSymmetric> boundary_mass;
};

Forms assemble(const TriMesh& mesh);
Forms assemble(const TetMesh& mesh);

/// Stiffness of the form (B grad u, grad v) with a constant symmetric 2x2 B.
SparseSymmetric assemble_anisotropic_stiffness(const TriMesh& mesh,
                                               const std::array<double, 4>& B);

/// Dirichlet pins and periodic identifications on mesh vertices.
struct ConstraintSet {
    std::set<int> dirichlet;
    /// slave -> master; masters must not themselves be slaves (acyclic).
    std::map<int, int> periodic;

    void validate(int n_dofs) const;
};

/// Reduction of forms/vectors onto the constrained subspace via the
/// prolongation matrix P (full x reduced): reduced form = P^T A P.
class Reduction {
public:
    Reduction(int n_full, const ConstraintSet& constraints);

    int full_dim() const { return static_cast<int>(P_.rows()); }
    int reduced_dim() const { return static_cast<int>(P_.cols()); }

    SparseSymmetric reduce(const SparseSymmetric& form) const;
    Eigen::VectorXd reduce_vec(const Eigen::VectorXd& full) const;
    /// Expands a reduced vector; slaves copy their master, pins get zero.
    Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;

    const Eigen::SparseMatrix<double>& prolongation() const { return P_; }

private:
    Eigen::SparseMatrix<double> P_;
};

}  // namespace wwtm
