#ifndef LOEM_MANIFOLD_HPP
#define LOEM_MANIFOLD_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "loem/metric.hpp"
#include "loem/rng.hpp"

namespace loem {

struct Circle {
    double radius = 1.0;
};

struct Sphere {
    double radius = 1.0;
};

struct FlatTorus {
    double period_u = 1.0;
    double period_v = 1.0;
};

// Abstract triangulated surface: the metric data is the edge lengths; vertex
// positions are only used at construction. Distances are shortest paths in
// the vertex graph, an upper bound on the true surface geodesic but an exact
// metric in its own right.
class TriangleMesh {
  public:
    TriangleMesh(int n_vertices, std::vector<std::array<int, 3>> faces,
                 std::vector<std::array<double, 3>> face_lengths);

    static TriangleMesh from_positions(const std::vector<std::array<double, 3>>& positions,
                                       std::vector<std::array<int, 3>> faces);

    int vertex_count() const { return n_vertices_; }
    const std::vector<std::array<int, 3>>& faces() const { return faces_; }
    // lengths[f] = {d(v0,v1), d(v1,v2), d(v2,v0)} for faces[f] = {v0,v1,v2}.
    const std::vector<std::array<double, 3>>& face_lengths() const { return face_lengths_; }
    const std::vector<std::vector<std::pair<int, double>>>& adjacency() const { return adj_; }
    double diameter() const { return diameter_; }
    double total_area() const { return total_area_; }
    const std::vector<double>& face_areas() const { return face_areas_; }

  private:
    int n_vertices_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<std::array<double, 3>> face_lengths_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<double> face_areas_;
    double total_area_ = 0.0;
    double diameter_ = 0.0;
};

using ManifoldModel = std::variant<Circle, Sphere, FlatTorus, TriangleMesh>;

struct CirclePoint {
    double theta = 0.0;
};
struct SpherePoint {
    std::array<double, 3> x{};  // norm equal to the model radius
};
struct TorusPoint {
    double u = 0.0, v = 0.0;
};
struct MeshPoint {
    int face = 0;
    std::array<double, 3> bary{};  // nonnegative, summing to 1
};

using ManifoldPoint = std::variant<CirclePoint, SpherePoint, TorusPoint, MeshPoint>;

// `v x y z` and 1-based `f i j k` lines, triangles only.
TriangleMesh read_mesh_obj(std::istream& in);
TriangleMesh read_mesh_obj_file(const std::string& path);

// Largest distance the model can realize (graph diameter for meshes).
double model_diameter(const ManifoldModel& model);

double geodesic_distance(const ManifoldModel& model, const ManifoldPoint& p,
                         const ManifoldPoint& q);

// Squared distance; the building block the residual and gradient act on.
double squared_distance_eta(const ManifoldModel& model, const ManifoldPoint& p,
                            const ManifoldPoint& q);

// Point at arclength t in [0, d(p,q)] along the unique minimizing geodesic.
ManifoldPoint geodesic_trace(const ManifoldModel& model, const ManifoldPoint& p,
                             const ManifoldPoint& q, double t);

// Gradient of x -> d(x,p)^2 at z, in chart components: signed arclength for
// the circle, the tangent plane at z for the sphere, the flat chart for the
// torus. Equals -2 d(z,p) times the unit tangent of the geodesic toward p.
std::vector<double> squared_distance_gradient(const ManifoldModel& model, const ManifoldPoint& z,
                                              const ManifoldPoint& p);

// d(x,p0)^2 - d(x,q0)^2; zero exactly on the locus equidistant from p0, q0.
double median_residual(const ManifoldModel& model, const ManifoldPoint& x,
                       const ManifoldPoint& p0, const ManifoldPoint& q0);

struct SampleResult {
    std::vector<ManifoldPoint> points;
    FiniteMetricSpace space;
};

// n points drawn uniformly (arc length, area, chart area, or face area), with
// the induced distance matrix. Points closer than 1e-9 times the model
// diameter are redrawn.
SampleResult sample(const ManifoldModel& model, int n, std::uint64_t rng_seed);

// Grows an existing draw to `total` points under the same separation rule;
// the given points are kept verbatim at the front.
std::vector<ManifoldPoint> extend_sample(const ManifoldModel& model,
                                         std::vector<ManifoldPoint> existing, int total,
                                         std::uint64_t rng_seed);

// Distance matrix of the points as a validated space, labels p0, p1, ...
FiniteMetricSpace space_from_points(const ManifoldModel& model,
                                    const std::vector<ManifoldPoint>& points);

// (max - min) / mean over pairwise distances; zero only for exact
// equidistance.
double simplex_quality(const ManifoldModel& model, const std::vector<ManifoldPoint>& points);

// Worst equidistance violation of later points against earlier pairs,
// relative to the configuration diameter; zero only for an exact flag.
double flag_quality(const ManifoldModel& model,
                    const std::vector<std::pair<ManifoldPoint, ManifoldPoint>>& pairs);

// Chart coordinates for reports: {theta}, {x,y,z}, {u,v}, or
// {face, b0, b1, b2}.
std::vector<double> chart_coords(const ManifoldPoint& point);

}  // namespace loem

#endif
