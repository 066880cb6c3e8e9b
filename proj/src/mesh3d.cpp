#include "wwtm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace wwtm {

namespace {

constexpr double kTol = 1e-12;

double tet_volume6(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const double w[3] = {d[0] - a[0], d[1] - a[1], d[2] - a[2]};
    return u[0] * (v[1] * w[2] - v[2] * w[1]) -
           u[1] * (v[0] * w[2] - v[2] * w[0]) +
           u[2] * (v[0] * w[1] - v[1] * w[0]);
}

/// Split the prism (t0,t1,t2 | b0,b1,b2), b_i below t_i, into three tets.
/// Face diagonals are chosen through global minimum indices so that
/// neighbouring prisms agree on shared quad faces.
void split_prism(std::vector<std::array<int, 4>>& tets,
                 const std::vector<Vec3>& verts,
                 std::array<int, 3> top, std::array<int, 3> bot) {
    // Rotate so the smallest index in the top triangle leads. The quad faces
    // (t0,t1,b1,b0), (t0,t2,b2,b0) and (t1,t2,b2,b1) are invariant as a set
    // under this rotation.
    int r = 0;
    for (int i = 1; i < 3; ++i)
        if (std::min(top[i], bot[i]) < std::min(top[r], bot[r])) r = i;
    std::array<int, 3> t{top[r], top[(r + 1) % 3], top[(r + 2) % 3]};
    std::array<int, 3> b{bot[r], bot[(r + 1) % 3], bot[(r + 2) % 3]};
    // Anchor vertex: smaller of t[0], b[0]; mirror the prism if it is b[0].
    if (b[0] < t[0]) {
        std::swap(t, b);
        std::swap(t[1], t[2]);
        std::swap(b[1], b[2]);
    }
    // Diagonals of faces through t[0]: (t0,b1) and (t0,b2). The remaining
    // quad face (t1,t2,b2,b1) gets the diagonal through its minimum index.
    std::array<std::array<int, 4>, 3> split;
    if (std::min(t[1], b[2]) < std::min(t[2], b[1]))
        split = {{{t[0], t[1], t[2], b[2]},
                  {t[0], t[1], b[2], b[1]},
                  {t[0], b[1], b[2], b[0]}}};
    else
        split = {{{t[0], t[1], t[2], b[1]},
                  {t[0], b[1], t[2], b[2]},
                  {t[0], b[1], b[2], b[0]}}};
    for (auto tet : split) {
        if (tet_volume6(verts[tet[0]], verts[tet[1]], verts[tet[2]],
                        verts[tet[3]]) < 0.0)
            std::swap(tet[2], tet[3]);
        tets.push_back(tet);
    }
}

std::vector<FaceKey> boundary_faces(const TetMesh& mesh) {
    std::map<FaceKey, int> count;
    static const int local[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& t : mesh.tets)
        for (const auto& f : local)
            ++count[make_face(t[f[0]], t[f[1]], t[f[2]])];
    std::vector<FaceKey> result;
    for (const auto& [face, n] : count)
        if (n == 1) result.push_back(face);
    return result;
}

}  // namespace

double TetMesh::volume() const {
    double sum = 0.0;
    for (const auto& t : tets)
        sum += tet_volume6(vertices[t[0]], vertices[t[1]], vertices[t[2]],
                           vertices[t[3]]) / 6.0;
    return sum;
}

std::vector<int> TetMesh::tagged_vertices(const std::string& tag) const {
    std::set<int> verts;
    for (const auto& [face, t] : face_tags)
        if (t == tag) verts.insert(face.begin(), face.end());
    return {verts.begin(), verts.end()};
}

void TetMesh::validate() const {
    const int n = static_cast<int>(vertices.size());
    for (const auto& t : tets) {
        for (int v : t)
            if (v < 0 || v >= n)
                throw InvalidGeometryError("tet vertex index out of range");
        if (tet_volume6(vertices[t[0]], vertices[t[1]], vertices[t[2]],
                        vertices[t[3]]) <= 0.0)
            throw InvalidGeometryError("non-positive tet volume");
    }
    for (const auto& face : boundary_faces(*this))
        if (face_tags.find(face) == face_tags.end())
            throw InvalidGeometryError("untagged boundary face");
    for (const auto& [slave, master] : periodic_pairs) {
        if (slave < 0 || slave >= n || master < 0 || master >= n)
            throw InvalidGeometryError("periodic pair index out of range");
        if (std::abs(vertices[slave][2] - vertices[master][2]) > kTol)
            throw InvalidGeometryError("periodic pair differs in z");
    }
}

double CellGeometry::depth(double eta1, double eta2) const {
    const double fx = (eta1 / a1 + 0.5) * (profile_nx - 1);
    const double fy = (eta2 / a2 + 0.5) * (profile_ny - 1);
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, profile_nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, profile_ny - 2);
    const double s = std::clamp(fx - i, 0.0, 1.0);
    const double t = std::clamp(fy - j, 0.0, 1.0);
    const auto at = [&](int ii, int jj) {
        return depth_samples[jj * profile_nx + ii];
    };
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) +
           (1 - s) * t * at(i, j + 1) + s * t * at(i + 1, j + 1);
}

bool CellGeometry::is_flat() const {
    for (double h : depth_samples)
        if (std::abs(h - H) > kTol) return false;
    return true;
}

void CellGeometry::validate() const {
    if (a1 <= 0.0 || a2 <= 0.0 || H <= 0.0)
        throw InvalidGeometryError("cell: non-positive dimension");
    if (profile_nx < 2 || profile_ny < 2 ||
        depth_samples.size() !=
            static_cast<size_t>(profile_nx) * profile_ny)
        throw InvalidGeometryError("cell: malformed depth profile grid");
    for (double h : depth_samples)
        if (!(h > 0.0) || h > H + kTol)
            throw InvalidGeometryError("cell: depth profile outside (0, H]");
    const auto at = [&](int i, int j) {
        return depth_samples[j * profile_nx + i];
    };
    for (int j = 0; j < profile_ny; ++j)
        if (std::abs(at(0, j) - at(profile_nx - 1, j)) > kTol)
            throw InvalidGeometryError("cell: profile not periodic in eta1");
    for (int i = 0; i < profile_nx; ++i)
        if (std::abs(at(i, 0) - at(i, profile_ny - 1)) > kTol)
            throw InvalidGeometryError("cell: profile not periodic in eta2");
}

namespace {

/// Shared builder for the cell mesh and the plate mesh: a structured grid of
/// (nx1 x nx2) columns with per-column depth, prisms split into tets.
/// depth(i,j) gives the column depth at grid node (i,j); positions are
/// x = x0 + i*dx, y = y0 + j*dy, z in [-depth, 0] split into nz layers.
struct ExtrudedGrid {
    TetMesh mesh;
    int nx, ny, nz;
    std::vector<int> grid_i, grid_j, grid_k;  // per vertex

    template <typename DepthFn>
    void build(int nx_, int ny_, int nz_, double x0, double dx, double y0,
               double dy, DepthFn depth) {
        nx = nx_;
        ny = ny_;
        nz = nz_;
        const auto vid = [&](int i, int j, int k) {
            return (k * (ny + 1) + j) * (nx + 1) + i;
        };
        const size_t nvert =
            static_cast<size_t>(nx + 1) * (ny + 1) * (nz + 1);
        mesh.vertices.resize(nvert);
        grid_i.resize(nvert);
        grid_j.resize(nvert);
        grid_k.resize(nvert);
        for (int k = 0; k <= nz; ++k)
            for (int j = 0; j <= ny; ++j)
                for (int i = 0; i <= nx; ++i) {
                    const int id = vid(i, j, k);
                    const double h = depth(i, j);
                    mesh.vertices[id] = {x0 + dx * i, y0 + dy * j,
                                         -h * k / nz};
                    grid_i[id] = i;
                    grid_j[id] = j;
                    grid_k[id] = k;
                }
        mesh.tets.reserve(static_cast<size_t>(nx) * ny * nz * 6);
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const int v00t = vid(i, j, k), v10t = vid(i + 1, j, k);
                    const int v01t = vid(i, j + 1, k),
                              v11t = vid(i + 1, j + 1, k);
                    const int v00b = vid(i, j, k + 1),
                              v10b = vid(i + 1, j, k + 1);
                    const int v01b = vid(i, j + 1, k + 1),
                              v11b = vid(i + 1, j + 1, k + 1);
                    split_prism(mesh.tets, mesh.vertices, {v00t, v10t, v11t},
                                {v00b, v10b, v11b});
                    split_prism(mesh.tets, mesh.vertices, {v00t, v11t, v01t},
                                {v00b, v11b, v01b});
                }
    }

    /// Classify boundary faces using the integer grid coordinates.
    void tag(const std::string& top, const std::string& bottom,
             const std::string& left, const std::string& right,
             const std::string& front, const std::string& back) {
        for (const auto& face : boundary_faces(mesh)) {
            const auto all = [&](const std::vector<int>& coord, int value) {
                return coord[face[0]] == value && coord[face[1]] == value &&
                       coord[face[2]] == value;
            };
            std::string t;
            if (all(grid_k, 0))
                t = top;
            else if (all(grid_i, 0))
                t = left;
            else if (all(grid_i, nx))
                t = right;
            else if (all(grid_j, 0))
                t = front;
            else if (all(grid_j, ny))
                t = back;
            else
                t = bottom;
            mesh.face_tags[face] = t;
        }
    }
};

}  // namespace

TetMesh mesh_graph_cell(const CellGeometry& cell, int nx, int ny, int nz) {
    cell.validate();
    if (nx < 1 || ny < 1 || nz < 1)
        throw InvalidGeometryError("mesh_graph_cell: zero resolution");

    // Column depths; opposite faces must carry matching grids.
    std::vector<double> h(static_cast<size_t>(nx + 1) * (ny + 1));
    const auto hat = [&](int i, int j) -> double& {
        return h[static_cast<size_t>(j) * (nx + 1) + i];
    };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            hat(i, j) = cell.depth(-cell.a1 / 2 + cell.a1 * i / nx,
                                   -cell.a2 / 2 + cell.a2 * j / ny);
    for (int j = 0; j <= ny; ++j)
        if (std::abs(hat(0, j) - hat(nx, j)) > kTol)
            throw InvalidGeometryError(
                "mesh_graph_cell: mismatched opposite-face grids (eta1)");
    for (int i = 0; i <= nx; ++i)
        if (std::abs(hat(i, 0) - hat(i, ny)) > kTol)
            throw InvalidGeometryError(
                "mesh_graph_cell: mismatched opposite-face grids (eta2)");
    // Force bitwise equality so periodic pairing is exact.
    for (int j = 0; j <= ny; ++j) hat(nx, j) = hat(0, j);
    for (int i = 0; i <= nx; ++i) hat(i, ny) = hat(i, 0);
    hat(nx, ny) = hat(0, 0);

    ExtrudedGrid grid;
    grid.build(nx, ny, nz, -cell.a1 / 2, cell.a1 / nx, -cell.a2 / 2,
               cell.a2 / ny, [&](int i, int j) { return hat(i, j); });
    grid.tag("sigma+", "sigma-", "lateral", "lateral", "lateral", "lateral");

    const auto vid = [&](int i, int j, int k) {
        return (k * (ny + 1) + j) * (nx + 1) + i;
    };
    for (int k = 0; k <= nz; ++k) {
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                if (i == nx || j == ny)
                    grid.mesh.periodic_pairs.push_back(
                        {vid(i, j, k), vid(i % nx, j % ny, k)});
    }
    return grid.mesh;
}

void PlateGeometry::validate() const {
    cell.validate();
    if (N1 < 1 || N2 < 1)
        throw InvalidGeometryError("plate: cell counts must be >= 1");
    if (eps <= 0.0) throw InvalidGeometryError("plate: eps must be positive");
    if (std::abs(eps * cell.a1 * N1 - A1) > kTol ||
        std::abs(eps * cell.a2 * N2 - A2) > kTol)
        throw InconsistentScalingError(
            "plate: A_i != eps * a_i * N_i within 1e-12");
}

TetMesh mesh_plate(const PlateGeometry& plate, int nx, int ny, int nz,
                   bool half, std::vector<int>* cell_vertex_map) {
    plate.validate();
    if (nx < 1 || ny < 1 || nz < 1)
        throw InvalidGeometryError("mesh_plate: zero resolution");
    const int gx = plate.N1 * nx;
    const int gy = plate.N2 * ny;
    int j0 = 0;
    if (half) {
        if (gy % 2 != 0)
            throw InvalidGeometryError(
                "mesh_plate: y2 = 0 is not a mesh plane (N2*ny odd)");
        j0 = gy / 2;
    }
    const double eps = plate.eps;
    const CellGeometry& cell = plate.cell;

    // Per-column depth evaluated through the periodic wrap so that shared
    // columns of neighbouring cells get bitwise identical coordinates.
    std::vector<double> hcol(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            hcol[static_cast<size_t>(j) * nx + i] =
                cell.depth(-cell.a1 / 2 + cell.a1 * i / nx,
                           -cell.a2 / 2 + cell.a2 * j / ny);
    const auto depth = [&](int gi, int gj) {
        return eps * hcol[static_cast<size_t>((j0 + gj) % ny) * nx + gi % nx];
    };

    ExtrudedGrid grid;
    grid.build(gx, gy - j0, nz, -plate.A1 / 2, eps * cell.a1 / nx,
               half ? 0.0 : -plate.A2 / 2, eps * cell.a2 / ny, depth);
    grid.tag("omega+", "omega-", "upsilon", "upsilon",
             half ? "symmetry" : "upsilon", "upsilon");

    if (cell_vertex_map) {
        cell_vertex_map->resize(grid.mesh.vertices.size());
        for (size_t v = 0; v < grid.mesh.vertices.size(); ++v) {
            const int ci = grid.grid_i[v] % nx;
            const int cj = (j0 + grid.grid_j[v]) % ny;
            (*cell_vertex_map)[v] =
                (grid.grid_k[v] * (ny + 1) + cj) * (nx + 1) + ci;
        }
    }
    return grid.mesh;
}

void export_mesh(const TetMesh& mesh, std::ostream& out) {
    out << "vertices " << mesh.vertices.size() << " 3\n";
    for (const auto& v : mesh.vertices)
        out << v[0] << " " << v[1] << " " << v[2] << "\n";
    out << "cells " << mesh.tets.size() << " 4\n";
    for (const auto& t : mesh.tets)
        out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    out << "tags " << mesh.face_tags.size() << " 3\n";
    for (const auto& [face, tag] : mesh.face_tags)
        out << face[0] << " " << face[1] << " " << face[2] << " " << tag
            << "\n";
}

}  // namespace wwtm
