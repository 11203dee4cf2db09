#pragma once

#include <Eigen/Core>

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hyperls {

// Coordinate order is (t, x) everywhere. grad v = [d_t v, d_x v] and
// perp v = [d_x v, -d_t v]; the outward normal follows the same ordering.
using Vec2 = Eigen::Vector2d;

struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

enum class BoundaryTag { Inflow, Complement };

/// Axis-aligned segment on the rectangle perimeter assigned to Gamma_I.
struct BoundarySegment {
  Vec2 a, b;
};

struct BoundarySplit {
  std::vector<BoundarySegment> inflow;
};

/// Perimeter side ids: 0: t=t0, 1: t=t1, 2: x=x0, 3: x=x1.
struct BoundaryEdge {
  int v0 = -1, v1 = -1;
  int side = -1;
  int tri = -1;         // the unique incident triangle
  int local_edge = -1;  // edge (local_edge, (local_edge+1)%3) of that triangle
  BoundaryTag tag = BoundaryTag::Complement;
};

/// Structured triangulation of the space-time rectangle into right-crossed
/// squares; every square is split along the diagonal from its lower-left to
/// its upper-right corner. Immutable after construction.
class Mesh {
 public:
  int nt = 0, nx = 0;
  int level = 0;
  double h = 0.0;
  std::array<double, 4> rect{};  // t0, t1, x0, x1

  std::vector<double> t_coords;  // nt+1
  std::vector<double> x_coords;  // nx+1

  // grid (it, ix) -> vertex id. Lexicographic (t-major) on the coarsest
  // mesh; refinement keeps parent ids as a prefix and appends midpoints.
  std::vector<int> grid_ids;

  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;  // CCW, 2 per cell
  std::vector<BoundaryEdge> boundary_edges;
  std::optional<BoundarySplit> split;

  int n_vertices() const { return static_cast<int>(vertices.rows()); }
  int n_triangles() const { return static_cast<int>(triangles.rows()); }

  int grid_vertex(int it, int ix) const { return grid_ids[it * (nx + 1) + ix]; }

  double signed_area(int tri) const;
  double total_area() const;
  double boundary_length() const;

  /// Triangle containing (t, x) (clamped to the rectangle) and the reference
  /// coordinates (xi, eta) of the point in it.
  struct Location {
    int tri;
    double xi, eta;
  };
  Location locate(double t, double x) const;

  const BoundaryEdge& boundary_edge(int i) const { return boundary_edges[i]; }
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// nt-by-nx right-crossed squares over rect; cells must be square.
MeshPtr build_structured(int nt, int nx, const std::array<double, 4>& rect);

/// Each square becomes 4; parent vertices keep their indices, h halves.
MeshPtr refine_uniform(const Mesh& m);

/// Tags every boundary edge Inflow/Complement from the given split.
MeshPtr tag_boundary(const Mesh& m, const BoundarySplit& split);

void check_mesh_invariants(const Mesh& m);

}  // namespace hyperls
