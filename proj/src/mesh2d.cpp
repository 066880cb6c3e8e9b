#include "wwtm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace wwtm {

EdgeKey make_edge(int a, int b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

FaceKey make_face(int a, int b, int c) {
    FaceKey f{a, b, c};
    std::sort(f.begin(), f.end());
    return f;
}

namespace {

double tri_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

/// Edges of the mesh that belong to exactly one triangle.
std::vector<EdgeKey> boundary_edges(const TriMesh& mesh) {
    std::map<EdgeKey, int> count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            ++count[make_edge(t[e], t[(e + 1) % 3])];
    std::vector<EdgeKey> result;
    for (const auto& [edge, n] : count)
        if (n == 1) result.push_back(edge);
    return result;
}

}  // namespace

double TriMesh::area() const {
    double sum = 0.0;
    for (const auto& t : triangles)
        sum += 0.5 * tri_area2(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    return sum;
}

std::vector<int> TriMesh::tagged_vertices(const std::string& tag) const {
    std::set<int> verts;
    for (const auto& [edge, t] : edge_tags)
        if (t == tag) {
            verts.insert(edge[0]);
            verts.insert(edge[1]);
        }
    return {verts.begin(), verts.end()};
}

void TriMesh::validate() const {
    const int n = static_cast<int>(vertices.size());
    for (const auto& t : triangles) {
        for (int v : t)
            if (v < 0 || v >= n)
                throw InvalidGeometryError("triangle vertex index out of range");
        if (tri_area2(vertices[t[0]], vertices[t[1]], vertices[t[2]]) <= 0.0)
            throw InvalidGeometryError("non-positive triangle orientation");
    }
    for (const auto& edge : boundary_edges(*this))
        if (edge_tags.find(edge) == edge_tags.end())
            throw InvalidGeometryError("untagged boundary edge");
}

TriMesh mesh_rectangle(double width, double height, int nx, int ny,
                       const RectTags& tags, double ox, double oy) {
    if (width <= 0.0 || height <= 0.0)
        throw InvalidGeometryError("mesh_rectangle: non-positive dimension");
    if (nx < 1 || ny < 1)
        throw InvalidGeometryError("mesh_rectangle: zero resolution");

    TriMesh mesh;
    const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.push_back(
                {ox + width * i / nx, oy + height * j / ny});

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }

    for (int i = 0; i < nx; ++i) {
        mesh.edge_tags[make_edge(vid(i, 0), vid(i + 1, 0))] = tags.bottom;
        mesh.edge_tags[make_edge(vid(i, ny), vid(i + 1, ny))] = tags.top;
    }
    for (int j = 0; j < ny; ++j) {
        mesh.edge_tags[make_edge(vid(0, j), vid(0, j + 1))] = tags.left;
        mesh.edge_tags[make_edge(vid(nx, j), vid(nx, j + 1))] = tags.right;
    }
    return mesh;
}

namespace {

constexpr double kGeomTol = 1e-12;

bool on_segment(const Vec2& p, const TaggedSegment& s) {
    const double lox = std::min(s.a[0], s.b[0]) - kGeomTol;
    const double hix = std::max(s.a[0], s.b[0]) + kGeomTol;
    const double loy = std::min(s.a[1], s.b[1]) - kGeomTol;
    const double hiy = std::max(s.a[1], s.b[1]) + kGeomTol;
    if (p[0] < lox || p[0] > hix || p[1] < loy || p[1] > hiy) return false;
    // Axis-aligned: collinearity reduces to matching the fixed coordinate.
    if (std::abs(s.a[0] - s.b[0]) < kGeomTol)
        return std::abs(p[0] - s.a[0]) < kGeomTol;
    return std::abs(p[1] - s.a[1]) < kGeomTol;
}

bool point_inside(const Vec2& p, const SteppedPolygon& poly) {
    // Ray casting along +x; p is assumed to be off the boundary.
    bool inside = false;
    for (const auto& s : poly.segments) {
        const double y1 = s.a[1], y2 = s.b[1];
        if (std::abs(y1 - y2) < kGeomTol) continue;  // horizontal
        const double x = s.a[0];
        if ((y1 > p[1]) != (y2 > p[1]) && x > p[0]) inside = !inside;
    }
    return inside;
}

void check_polygon(const SteppedPolygon& poly) {
    const size_t n = poly.segments.size();
    if (n < 4) throw InvalidGeometryError("stepped polygon needs >= 4 segments");
    for (size_t i = 0; i < n; ++i) {
        const auto& s = poly.segments[i];
        const auto& next = poly.segments[(i + 1) % n];
        if (std::abs(s.b[0] - next.a[0]) > kGeomTol ||
            std::abs(s.b[1] - next.a[1]) > kGeomTol)
            throw InvalidGeometryError("stepped polygon is not closed");
        const bool vert = std::abs(s.a[0] - s.b[0]) < kGeomTol;
        const bool horz = std::abs(s.a[1] - s.b[1]) < kGeomTol;
        if (vert == horz)
            throw InvalidGeometryError(
                "stepped polygon segment is not axis-aligned or degenerate");
    }
    // Simple-ness: no two non-adjacent segments may touch.
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const auto& p = poly.segments[i];
            const auto& q = poly.segments[j];
            const double lox = std::max(std::min(p.a[0], p.b[0]),
                                        std::min(q.a[0], q.b[0]));
            const double hix = std::min(std::max(p.a[0], p.b[0]),
                                        std::max(q.a[0], q.b[0]));
            const double loy = std::max(std::min(p.a[1], p.b[1]),
                                        std::min(q.a[1], q.b[1]));
            const double hiy = std::min(std::max(p.a[1], p.b[1]),
                                        std::max(q.a[1], q.b[1]));
            if (lox <= hix + kGeomTol && loy <= hiy + kGeomTol)
                throw InvalidGeometryError("self-intersecting stepped polygon");
        }
}

std::vector<double> grid_lines(std::set<double> breaks, double target_h) {
    std::vector<double> lines(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (size_t i = 0; i + 1 < lines.size(); ++i) {
        const double a = lines[i], b = lines[i + 1];
        const int m = std::max(1, static_cast<int>(std::ceil((b - a) / target_h)));
        for (int s = 0; s < m; ++s) out.push_back(a + (b - a) * s / m);
    }
    out.push_back(lines.back());
    return out;
}

}  // namespace

TriMesh mesh_stepped_polygon(const SteppedPolygon& polygon, double target_h) {
    if (target_h <= 0.0)
        throw InvalidGeometryError("mesh_stepped_polygon: target_h <= 0");
    check_polygon(polygon);

    std::set<double> xs, ys;
    for (const auto& s : polygon.segments) {
        xs.insert(s.a[0]);
        ys.insert(s.a[1]);
    }
    const auto gx = grid_lines(xs, target_h);
    const auto gy = grid_lines(ys, target_h);
    const int nx = static_cast<int>(gx.size()) - 1;
    const int ny = static_cast<int>(gy.size()) - 1;

    TriMesh mesh;
    std::unordered_map<int64_t, int> vmap;  // grid (i,j) -> vertex id
    const auto vertex = [&](int i, int j) {
        const int64_t key = static_cast<int64_t>(j) * (nx + 2) + i;
        auto it = vmap.find(key);
        if (it != vmap.end()) return it->second;
        const int id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back({gx[i], gy[j]});
        vmap.emplace(key, id);
        return id;
    };

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Vec2 center{0.5 * (gx[i] + gx[i + 1]),
                              0.5 * (gy[j] + gy[j + 1])};
            if (!point_inside(center, polygon)) continue;
            const int v00 = vertex(i, j), v10 = vertex(i + 1, j);
            const int v01 = vertex(i, j + 1), v11 = vertex(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    if (mesh.triangles.empty())
        throw InvalidGeometryError("stepped polygon has empty interior");

    for (const auto& edge : boundary_edges(mesh)) {
        const Vec2 mid{0.5 * (mesh.vertices[edge[0]][0] +
                              mesh.vertices[edge[1]][0]),
                       0.5 * (mesh.vertices[edge[0]][1] +
                              mesh.vertices[edge[1]][1])};
        bool tagged = false;
        for (const auto& s : polygon.segments)
            if (on_segment(mid, s)) {
                mesh.edge_tags[edge] = s.tag;
                tagged = true;
                break;
            }
        if (!tagged)
            throw InvalidGeometryError(
                "boundary edge not covered by any polygon segment");
    }
    return mesh;
}

void export_mesh(const TriMesh& mesh, std::ostream& out) {
    out << "vertices " << mesh.vertices.size() << " 2\n";
    for (const auto& v : mesh.vertices) out << v[0] << " " << v[1] << "\n";
    out << "cells " << mesh.triangles.size() << " 3\n";
    for (const auto& t : mesh.triangles)
        out << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "tags " << mesh.edge_tags.size() << " 2\n";
    for (const auto& [edge, tag] : mesh.edge_tags)
        out << edge[0] << " " << edge[1] << " " << tag << "\n";
}

}  // namespace wwtm
