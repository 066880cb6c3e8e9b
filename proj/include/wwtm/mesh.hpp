#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "wwtm/errors.hpp"

namespace wwtm {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

/// Undirected boundary edge, stored with sorted vertex indices.
using EdgeKey = std::array<int, 2>;
/// Boundary triangle, stored with sorted vertex indices.
using FaceKey = std::array<int, 3>;

EdgeKey make_edge(int a, int b);
FaceKey make_face(int a, int b, int c);

/// Conforming triangle mesh of a plane domain.
/// Triangles are positively oriented; every boundary edge carries one tag.
struct TriMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::map<EdgeKey, std::string> edge_tags;

    double area() const;
    /// Indices of vertices incident to edges with the given tag.
    std::vector<int> tagged_vertices(const std::string& tag) const;
    void validate() const;
};

/// Conforming tetrahedral mesh. Boundary faces are tagged; lateral faces of
/// periodicity cells come with master-slave vertex pairs.
struct TetMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;
    std::map<FaceKey, std::string> face_tags;
    /// (slave, master) vertex pairs; coordinates equal up to the period vector.
    std::vector<std::array<int, 2>> periodic_pairs;

    double volume() const;
    std::vector<int> tagged_vertices(const std::string& tag) const;
    void validate() const;
};

/// Edge tags for the four sides of a rectangle.
struct RectTags {
    std::string left = "wall";
    std::string right = "wall";
    std::string bottom = "wall";
    std::string top = "wall";
};

/// Uniform nx-by-ny grid on (ox, ox+width) x (oy, oy+height), each quad
/// split in two.
TriMesh mesh_rectangle(double width, double height, int nx, int ny,
                       const RectTags& tags, double ox = 0.0, double oy = 0.0);

/// One tagged segment of an axis-aligned stepped polygon boundary.
struct TaggedSegment {
    Vec2 a;
    Vec2 b;
    std::string tag;
};

/// A simple, closed, axis-aligned polygon given as a list of tagged segments
/// traversed in order (counter-clockwise).
struct SteppedPolygon {
    std::vector<TaggedSegment> segments;
};

/// Conforming triangulation of a stepped polygon with mesh size about
/// target_h; every boundary edge inherits the tag of its segment.
TriMesh mesh_stepped_polygon(const SteppedPolygon& polygon, double target_h);

/// One periodicity cell of the rough layer: the rectangle
/// |eta_i| < a_i/2 extruded down to z = -h(eta).
struct CellGeometry {
    double a1 = 1.0;
    double a2 = 1.0;
    double H = 1.0;
    /// Node samples of the depth h on a uniform (nx x ny) grid over the cell
    /// cover, row-major with eta1 fastest; first and last row/column sit on
    /// the cell boundary and must match periodically.
    int profile_nx = 2;
    int profile_ny = 2;
    std::vector<double> depth_samples = {1.0, 1.0, 1.0, 1.0};

    /// Bilinear interpolation of the depth profile at (eta1, eta2).
    double depth(double eta1, double eta2) const;
    bool is_flat() const;
    void validate() const;
};

/// Vertical-extrusion tet mesh of a cell: nx-by-ny columns over the cover,
/// nz layers each, prisms split into three tets. Top faces are tagged
/// "sigma+", bottom faces "sigma-", lateral faces "lateral" and paired
/// periodically.
TetMesh mesh_graph_cell(const CellGeometry& cell, int nx, int ny, int nz);

/// The thin rough plate: N1 x N2 cells scaled by eps, A_i = eps*a_i*N_i.
struct PlateGeometry {
    CellGeometry cell;
    double A1 = 1.0;
    double A2 = 1.0;
    double eps = 0.25;
    int N1 = 4;
    int N2 = 4;

    void validate() const;
};

/// Union of scaled translated cell meshes with shared interface vertices.
/// Tags: top "omega+", bottom "omega-", outer lateral "upsilon". When half
/// is set, only the y2 > 0 part is kept and the cut plane is tagged
/// "symmetry"; requires y2 = 0 to be a mesh plane.
///
/// cell_vertex_map (optional out) receives, per plate vertex, the index of
/// the cell-mesh vertex it was instantiated from.
TetMesh mesh_plate(const PlateGeometry& plate, int nx, int ny, int nz,
                   bool half = false,
                   std::vector<int>* cell_vertex_map = nullptr);

/// Plain-text dump: one section per array (vertices, cells, tags).
void export_mesh(const TriMesh& mesh, std::ostream& out);
void export_mesh(const TetMesh& mesh, std::ostream& out);

}  // namespace wwtm
