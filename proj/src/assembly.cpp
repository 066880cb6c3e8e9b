#include "wwtm/assembly.hpp"

#include <cmath>

namespace wwtm {

double SparseSymmetric::asymmetry() const {
    Eigen::SparseMatrix<double> d = Eigen::SparseMatrix<double>(mat.transpose()) - mat;
    double worst = 0.0;
    for (int c = 0; c < d.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(d, c); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

void SparseSymmetric::check_symmetric(double tol) const {
    if (asymmetry() > tol)
        throw InconsistencyError("form is not symmetric");
}

namespace {

using Trip = Eigen::Triplet<double>;

SparseSymmetric from_triplets(int n, std::vector<Trip>& trips) {
    SparseSymmetric s;
    s.mat.resize(n, n);
    s.mat.setFromTriplets(trips.begin(), trips.end());
    s.mat.makeCompressed();
    return s;
}

/// 2D P1 gradients: lambda_i = (a_i + b_i x + c_i y) / (2A).
void tri_gradients(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                   double grad[3][2], double& area) {
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p1[1] - p0[1]) * (p2[0] - p0[0]);
    area = 0.5 * det;
    grad[0][0] = (p1[1] - p2[1]) / det;
    grad[0][1] = (p2[0] - p1[0]) / det;
    grad[1][0] = (p2[1] - p0[1]) / det;
    grad[1][1] = (p0[0] - p2[0]) / det;
    grad[2][0] = (p0[1] - p1[1]) / det;
    grad[2][1] = (p1[0] - p0[0]) / det;
}

void tet_gradients(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                   const Vec3& p3, double grad[4][3], double& vol) {
    Eigen::Matrix3d J;
    for (int i = 0; i < 3; ++i) {
        J(i, 0) = p1[i] - p0[i];
        J(i, 1) = p2[i] - p0[i];
        J(i, 2) = p3[i] - p0[i];
    }
    const double det = J.determinant();
    vol = det / 6.0;
    const Eigen::Matrix3d Jinv = J.inverse();
    // grad lambda_{i+1} = row i of J^{-1}; grad lambda_0 = -sum.
    for (int d = 0; d < 3; ++d) grad[0][d] = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int d = 0; d < 3; ++d) {
            grad[i + 1][d] = Jinv(i, d);
            grad[0][d] -= Jinv(i, d);
        }
}

double mesh_scale2(const TriMesh& mesh) {
    double a = 0.0;
    for (const auto& t : mesh.triangles) {
        const auto& p0 = mesh.vertices[t[0]];
        const auto& p1 = mesh.vertices[t[1]];
        const auto& p2 = mesh.vertices[t[2]];
        a = std::max(a, std::abs((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                                 (p1[1] - p0[1]) * (p2[0] - p0[0])));
    }
    return 0.5 * a;
}

}  // namespace

Forms assemble(const TriMesh& mesh) {
    const int n = static_cast<int>(mesh.vertices.size());
    if (n == 0) throw InvalidGeometryError("assemble: empty mesh");
    const double scale = mesh_scale2(mesh);

    std::vector<Trip> ks, ms;
    ks.reserve(mesh.triangles.size() * 9);
    ms.reserve(mesh.triangles.size() * 9);
    for (const auto& t : mesh.triangles) {
        double grad[3][2], area;
        tri_gradients(mesh.vertices[t[0]], mesh.vertices[t[1]],
                      mesh.vertices[t[2]], grad, area);
        if (area < 1e-14 * scale)
            throw DegenerateElementError("assemble: degenerate triangle");
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ks.emplace_back(t[i], t[j],
                                area * (grad[i][0] * grad[j][0] +
                                        grad[i][1] * grad[j][1]));
                // Exact P1 mass: A/12 off-diagonal, A/6 diagonal.
                ms.emplace_back(t[i], t[j], area * (i == j ? 2.0 : 1.0) / 12.0);
            }
    }

    Forms f;
    f.stiffness = from_triplets(n, ks);
    f.mass = from_triplets(n, ms);

    std::map<std::string, std::vector<Trip>> bs;
    for (const auto& [edge, tag] : mesh.edge_tags) {
        const auto& a = mesh.vertices[edge[0]];
        const auto& b = mesh.vertices[edge[1]];
        const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        auto& v = bs[tag];
        // Exact 1D trace mass: L/6 * [[2,1],[1,2]].
        v.emplace_back(edge[0], edge[0], len / 3.0);
        v.emplace_back(edge[1], edge[1], len / 3.0);
        v.emplace_back(edge[0], edge[1], len / 6.0);
        v.emplace_back(edge[1], edge[0], len / 6.0);
    }
    for (auto& [tag, v] : bs) f.boundary_mass[tag] = from_triplets(n, v);
    return f;
}

Forms assemble(const TetMesh& mesh) {
    const int n = static_cast<int>(mesh.vertices.size());
    if (n == 0) throw InvalidGeometryError("assemble: empty mesh");

    double scale = 0.0;
    std::vector<Trip> ks, ms;
    ks.reserve(mesh.tets.size() * 16);
    ms.reserve(mesh.tets.size() * 16);
    // First pass for the degeneracy scale.
    {
        double vmax = 0.0;
        for (const auto& t : mesh.tets) {
            double grad[4][3], vol;
            tet_gradients(mesh.vertices[t[0]], mesh.vertices[t[1]],
                          mesh.vertices[t[2]], mesh.vertices[t[3]], grad, vol);
            vmax = std::max(vmax, std::abs(vol));
        }
        scale = vmax;
    }
    for (const auto& t : mesh.tets) {
        double grad[4][3], vol;
        tet_gradients(mesh.vertices[t[0]], mesh.vertices[t[1]],
                      mesh.vertices[t[2]], mesh.vertices[t[3]], grad, vol);
        if (vol < 1e-14 * scale)
            throw DegenerateElementError("assemble: degenerate tet");
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                ks.emplace_back(t[i], t[j],
                                vol * (grad[i][0] * grad[j][0] +
                                       grad[i][1] * grad[j][1] +
                                       grad[i][2] * grad[j][2]));
                // Exact P1 mass in 3D: V/20 off-diagonal, V/10 diagonal.
                ms.emplace_back(t[i], t[j], vol * (i == j ? 2.0 : 1.0) / 20.0);
            }
    }

    Forms f;
    f.stiffness = from_triplets(n, ks);
    f.mass = from_triplets(n, ms);

    std::map<std::string, std::vector<Trip>> bs;
    for (const auto& [face, tag] : mesh.face_tags) {
        const auto& a = mesh.vertices[face[0]];
        const auto& b = mesh.vertices[face[1]];
        const auto& c = mesh.vertices[face[2]];
        const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        const double cx = u[1] * v[2] - u[2] * v[1];
        const double cy = u[2] * v[0] - u[0] * v[2];
        const double cz = u[0] * v[1] - u[1] * v[0];
        const double area = 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
        auto& trips = bs[tag];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(face[i], face[j],
                                   area * (i == j ? 2.0 : 1.0) / 12.0);
    }
    for (auto& [tag, v] : bs) f.boundary_mass[tag] = from_triplets(n, v);
    return f;
}

SparseSymmetric assemble_anisotropic_stiffness(
    const TriMesh& mesh, const std::array<double, 4>& B) {
    if (std::abs(B[1] - B[2]) > 1e-12)
        throw InconsistencyError("anisotropic stiffness: B not symmetric");
    const int n = static_cast<int>(mesh.vertices.size());
    if (n == 0) throw InvalidGeometryError("assemble: empty mesh");
    const double scale = mesh_scale2(mesh);

    std::vector<Trip> ks;
    ks.reserve(mesh.triangles.size() * 9);
    for (const auto& t : mesh.triangles) {
        double g[3][2], area;
        tri_gradients(mesh.vertices[t[0]], mesh.vertices[t[1]],
                      mesh.vertices[t[2]], g, area);
        if (area < 1e-14 * scale)
            throw DegenerateElementError("assemble: degenerate triangle");
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double bg0 = B[0] * g[j][0] + B[1] * g[j][1];
                const double bg1 = B[2] * g[j][0] + B[3] * g[j][1];
                ks.emplace_back(t[i], t[j],
                                area * (g[i][0] * bg0 + g[i][1] * bg1));
            }
    }
    return from_triplets(n, ks);
}

void ConstraintSet::validate(int n_dofs) const {
    for (int d : dirichlet)
        if (d < 0 || d >= n_dofs)
            throw InconsistencyError("constraint index out of range");
    for (const auto& [slave, master] : periodic) {
        if (slave < 0 || slave >= n_dofs || master < 0 || master >= n_dofs)
            throw InconsistencyError("constraint index out of range");
        if (periodic.count(master))
            throw InconsistencyError("periodic map is not acyclic");
        if (dirichlet.count(slave))
            throw InconsistencyError("dof both pinned and periodic slave");
    }
}

Reduction::Reduction(int n_full, const ConstraintSet& constraints) {
    constraints.validate(n_full);
    std::vector<int> target(n_full, -1);
    int n_red = 0;
    for (int i = 0; i < n_full; ++i) {
        if (constraints.dirichlet.count(i)) continue;
        if (constraints.periodic.count(i)) continue;
        target[i] = n_red++;
    }
    if (n_red == 0) throw EmptySystemError("all dofs constrained away");

    std::vector<Trip> trips;
    trips.reserve(n_full);
    for (int i = 0; i < n_full; ++i) {
        int rep = i;
        auto it = constraints.periodic.find(i);
        if (it != constraints.periodic.end()) rep = it->second;
        if (constraints.dirichlet.count(rep)) continue;  // slave of a pin
        if (target[rep] < 0)
            throw InconsistencyError("periodic master is itself constrained");
        trips.emplace_back(i, target[rep], 1.0);
    }
    P_.resize(n_full, n_red);
    P_.setFromTriplets(trips.begin(), trips.end());
    P_.makeCompressed();
}

SparseSymmetric Reduction::reduce(const SparseSymmetric& form) const {
    if (form.dimension() != full_dim())
        throw InconsistencyError("reduce: dimension mismatch");
    SparseSymmetric r;
    r.mat = P_.transpose() * form.mat * P_;
    r.mat.makeCompressed();
    return r;
}

Eigen::VectorXd Reduction::reduce_vec(const Eigen::VectorXd& full) const {
    if (full.size() != full_dim())
        throw InconsistencyError("reduce_vec: dimension mismatch");
    return P_.transpose() * full;
}

Eigen::VectorXd Reduction::expand(const Eigen::VectorXd& reduced) const {
    if (reduced.size() != reduced_dim())
        throw InconsistencyError("expand: dimension mismatch");
    return P_ * reduced;
}

}  // namespace wwtm
