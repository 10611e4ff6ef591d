#include "loem/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numbers>
#include <queue>
#include <sstream>

#include "loem/io.hpp"

namespace loem {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double wrap_canonical(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0) y += period;
    return y;
}

// Difference folded into (-period/2, period/2].
double wrap_signed(double x, double period) {
    double y = std::fmod(x, period);
    if (y <= -period / 2) y += period;
    if (y > period / 2) y -= period;
    return y;
}

const CirclePoint& as_circle(const ManifoldPoint& p) {
    if (const auto* c = std::get_if<CirclePoint>(&p)) return *c;
    throw ModelMismatch("expected a circle point");
}
const SpherePoint& as_sphere(const ManifoldPoint& p) {
    if (const auto* s = std::get_if<SpherePoint>(&p)) return *s;
    throw ModelMismatch("expected a sphere point");
}
const TorusPoint& as_torus(const ManifoldPoint& p) {
    if (const auto* t = std::get_if<TorusPoint>(&p)) return *t;
    throw ModelMismatch("expected a torus point");
}
const MeshPoint& as_mesh(const ManifoldPoint& p) {
    if (const auto* m = std::get_if<MeshPoint>(&p)) return *m;
    throw ModelMismatch("expected a mesh point");
}

std::array<double, 3> unit_vector(const Sphere& model, const SpherePoint& p) {
    double norm = std::sqrt(p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.x[2] * p.x[2]);
    if (std::abs(norm - model.radius) > 1e-12 * model.radius)
        throw ModelMismatch("point is off the sphere");
    return {p.x[0] / norm, p.x[1] / norm, p.x[2] / norm};
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<double, 3> cross3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const std::array<double, 3>& a) { return std::sqrt(dot3(a, a)); }

// atan2 keeps full precision near 0 and pi, where acos of the dot loses it.
double sphere_angle(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return std::atan2(norm3(cross3(u, v)), dot3(u, v));
}

struct UnfoldedFace {
    std::array<std::array<double, 2>, 3> corner;
    std::array<double, 2> point;
};

// Lays the face flat: corner 0 at the origin, corner 1 on the positive x
// axis. Valid because each face carries strict triangle inequalities.
UnfoldedFace unfold(const TriangleMesh& mesh, const MeshPoint& p) {
    if (p.face < 0 || p.face >= static_cast<int>(mesh.faces().size()))
        throw MeshError("face index " + std::to_string(p.face) + " out of range");
    double sum = p.bary[0] + p.bary[1] + p.bary[2];
    if (std::abs(sum - 1.0) > 1e-9 || p.bary[0] < -1e-12 || p.bary[1] < -1e-12 ||
        p.bary[2] < -1e-12)
        throw MeshError("barycentric coordinates must be nonnegative and sum to 1");
    const auto& len = mesh.face_lengths()[p.face];
    double l01 = len[0], l12 = len[1], l20 = len[2];
    UnfoldedFace out;
    out.corner[0] = {0.0, 0.0};
    out.corner[1] = {l01, 0.0};
    double x2 = (l01 * l01 + l20 * l20 - l12 * l12) / (2.0 * l01);
    double y2sq = l20 * l20 - x2 * x2;
    out.corner[2] = {x2, std::sqrt(y2sq > 0 ? y2sq : 0)};
    for (int c = 0; c < 2; ++c)
        out.point[c] = (p.bary[0] / sum) * out.corner[0][c] + (p.bary[1] / sum) * out.corner[1][c] +
                       (p.bary[2] / sum) * out.corner[2][c];
    return out;
}

double planar_dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int source) {
    std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        for (auto [w, len] : adj[v])
            if (d + len < dist[w]) {
                dist[w] = d + len;
                queue.push({dist[w], w});
            }
    }
    return dist;
}

// Distances between interior points: attach each to its face's corners (and
// directly to same-face companions) and run shortest paths. In-face triangle
// inequalities make the attachment edges shortcut-free, so the result does
// not depend on which other points share the graph.
std::vector<std::vector<double>> mesh_point_distances(const TriangleMesh& mesh,
                                                      const std::vector<MeshPoint>& pts) {
    const int v_count = mesh.vertex_count();
    const int k = static_cast<int>(pts.size());
    std::vector<std::vector<std::pair<int, double>>> adj = mesh.adjacency();
    adj.resize(static_cast<std::size_t>(v_count) + k);
    std::vector<UnfoldedFace> frames;
    frames.reserve(pts.size());
    for (const MeshPoint& p : pts) frames.push_back(unfold(mesh, p));
    for (int a = 0; a < k; ++a) {
        const auto& face = mesh.faces()[pts[a].face];
        for (int c = 0; c < 3; ++c) {
            double w = planar_dist(frames[a].point, frames[a].corner[c]);
            adj[v_count + a].push_back({face[c], w});
            adj[face[c]].push_back({v_count + a, w});
        }
        for (int b = 0; b < a; ++b)
            if (pts[b].face == pts[a].face) {
                double w = planar_dist(frames[a].point, frames[b].point);
                adj[v_count + a].push_back({v_count + b, w});
                adj[v_count + b].push_back({v_count + a, w});
            }
    }
    std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
    for (int a = 0; a < k; ++a) {
        std::vector<double> dist = dijkstra(adj, v_count + a);
        for (int b = a + 1; b < k; ++b) out[a][b] = out[b][a] = dist[v_count + b];
    }
    return out;
}

[[noreturn]] void throw_ambiguous(const char* what) { throw AmbiguousGeodesic(what); }

void check_arclength(double t, double total) {
    double slack = 1e-9 * std::max(1.0, total);
    if (t < -slack || t > total + slack)
        throw Error("arclength " + std::to_string(t) + " outside [0, " + std::to_string(total) +
                    "]");
}

}  // namespace

TriangleMesh::TriangleMesh(int n_vertices, std::vector<std::array<int, 3>> faces,
                           std::vector<std::array<double, 3>> face_lengths)
    : n_vertices_(n_vertices), faces_(std::move(faces)), face_lengths_(std::move(face_lengths)) {
    if (n_vertices_ < 3 || faces_.empty()) throw MeshError("mesh needs vertices and faces");
    if (face_lengths_.size() != faces_.size())
        throw MeshError("face length records do not match faces");

    // Edge book-keeping: every undirected edge carries one length and belongs
    // to at most two faces.
    struct EdgeInfo {
        double length;
        int uses;
    };
    std::vector<std::vector<std::pair<int, EdgeInfo>>> edges(n_vertices_);
    auto touch_edge = [&](int a, int b, double len) {
        if (a > b) std::swap(a, b);
        for (auto& [other, info] : edges[a])
            if (other == b) {
                if (std::abs(info.length - len) > 1e-12 * std::max(1.0, len))
                    throw MeshError("edge length disagrees between faces");
                if (++info.uses > 2) throw MeshError("edge shared by more than two faces");
                return;
            }
        edges[a].push_back({b, EdgeInfo{len, 1}});
    };

    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& [a, b, c] = faces_[f];
        if (a < 0 || b < 0 || c < 0 || a >= n_vertices_ || b >= n_vertices_ || c >= n_vertices_)
            throw MeshError("face vertex out of range");
        if (a == b || b == c || a == c) throw MeshError("face repeats a vertex");
        const auto& [lab, lbc, lca] = face_lengths_[f];
        if (!(lab > 0) || !(lbc > 0) || !(lca > 0)) throw MeshError("edge lengths must be positive");
        if (lab + lbc <= lca || lbc + lca <= lab || lca + lab <= lbc)
            throw MeshError("face violates the triangle inequality");
        touch_edge(a, b, lab);
        touch_edge(b, c, lbc);
        touch_edge(c, a, lca);

        double s = 0.5 * (lab + lbc + lca);
        face_areas_.push_back(std::sqrt(s * (s - lab) * (s - lbc) * (s - lca)));
        total_area_ += face_areas_.back();
    }

    adj_.assign(n_vertices_, {});
    for (int a = 0; a < n_vertices_; ++a)
        for (const auto& [b, info] : edges[a]) {
            adj_[a].push_back({b, info.length});
            adj_[b].push_back({a, info.length});
        }
    for (int v = 0; v < n_vertices_; ++v)
        if (adj_[v].empty()) throw MeshError("vertex " + std::to_string(v) + " unused");

    std::vector<double> reach = dijkstra(adj_, 0);
    for (int v = 0; v < n_vertices_; ++v) {
        if (!(reach[v] < std::numeric_limits<double>::infinity()))
            throw MeshError("mesh is not connected");
    }
    for (int v = 0; v < n_vertices_; ++v) {
        std::vector<double> dist = dijkstra(adj_, v);
        for (double d : dist) diameter_ = std::max(diameter_, d);
    }
}

TriangleMesh TriangleMesh::from_positions(const std::vector<std::array<double, 3>>& positions,
                                          std::vector<std::array<int, 3>> faces) {
    std::vector<std::array<double, 3>> lengths;
    lengths.reserve(faces.size());
    for (const auto& [a, b, c] : faces) {
        if (a < 0 || b < 0 || c < 0 || a >= static_cast<int>(positions.size()) ||
            b >= static_cast<int>(positions.size()) || c >= static_cast<int>(positions.size()))
            throw MeshError("face vertex out of range");
        auto dist = [&](int u, int v) {
            double dx = positions[u][0] - positions[v][0];
            double dy = positions[u][1] - positions[v][1];
            double dz = positions[u][2] - positions[v][2];
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        };
        lengths.push_back({dist(a, b), dist(b, c), dist(c, a)});
    }
    return TriangleMesh(static_cast<int>(positions.size()), std::move(faces), std::move(lengths));
}

TriangleMesh read_mesh_obj(std::istream& in) {
    std::vector<std::array<double, 3>> positions;
    std::vector<std::array<int, 3>> faces;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "v") {
            std::array<double, 3> p{};
            if (!(ls >> p[0] >> p[1] >> p[2])) throw ParseError(number, "bad vertex line");
            positions.push_back(p);
        } else if (kind == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                // OBJ allows v/vt/vn references; the leading integer names the
                // vertex.
                std::size_t slash = tok.find('/');
                std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                try {
                    idx.push_back(std::stoi(head));
                } catch (const std::exception&) {
                    throw ParseError(number, "bad face index '" + tok + "'");
                }
            }
            if (idx.size() != 3) throw MeshError("only triangular faces are supported");
            for (int& v : idx) {
                if (v < 1 || v > static_cast<int>(positions.size()))
                    throw ParseError(number, "face references vertex " + std::to_string(v));
                v -= 1;
            }
            faces.push_back({idx[0], idx[1], idx[2]});
        }
        // Normals, texture coordinates, groups and the like are irrelevant
        // here and skipped.
    }
    return TriangleMesh::from_positions(positions, std::move(faces));
}

TriangleMesh read_mesh_obj_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_mesh_obj(in);
}

double model_diameter(const ManifoldModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Circle>)
                return std::numbers::pi * m.radius;
            else if constexpr (std::is_same_v<T, Sphere>)
                return std::numbers::pi * m.radius;
            else if constexpr (std::is_same_v<T, FlatTorus>)
                return std::hypot(m.period_u / 2, m.period_v / 2);
            else
                return m.diameter();
        },
        model);
}

double geodesic_distance(const ManifoldModel& model, const ManifoldPoint& p,
                         const ManifoldPoint& q) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Circle>) {
                double delta = wrap_signed(as_circle(q).theta - as_circle(p).theta, kTau);
                return m.radius * std::abs(delta);
            } else if constexpr (std::is_same_v<T, Sphere>) {
                return m.radius * sphere_angle(unit_vector(m, as_sphere(p)),
                                               unit_vector(m, as_sphere(q)));
            } else if constexpr (std::is_same_v<T, FlatTorus>) {
                const TorusPoint &a = as_torus(p), &b = as_torus(q);
                return std::hypot(wrap_signed(b.u - a.u, m.period_u),
                                  wrap_signed(b.v - a.v, m.period_v));
            } else {
                return mesh_point_distances(m, {as_mesh(p), as_mesh(q)})[0][1];
            }
        },
        model);
}

double squared_distance_eta(const ManifoldModel& model, const ManifoldPoint& p,
                            const ManifoldPoint& q) {
    double d = geodesic_distance(model, p, q);
    return d * d;
}

ManifoldPoint geodesic_trace(const ManifoldModel& model, const ManifoldPoint& p,
                             const ManifoldPoint& q, double t) {
    return std::visit(
        [&](const auto& m) -> ManifoldPoint {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Circle>) {
                double theta = as_circle(p).theta;
                double delta = wrap_signed(as_circle(q).theta - theta, kTau);
                if (std::abs(delta) > std::numbers::pi - 1e-9)
                    throw_ambiguous("opposite circle points have two shortest arcs");
                double total = m.radius * std::abs(delta);
                check_arclength(t, total);
                if (total == 0) return p;
                return CirclePoint{wrap_canonical(theta + (delta < 0 ? -t : t) / m.radius, kTau)};
            } else if constexpr (std::is_same_v<T, Sphere>) {
                auto u = unit_vector(m, as_sphere(p));
                auto v = unit_vector(m, as_sphere(q));
                double omega = sphere_angle(u, v);
                if (omega > std::numbers::pi - 1e-9)
                    throw_ambiguous("antipodal sphere points have no unique geodesic");
                double total = m.radius * omega;
                check_arclength(t, total);
                if (omega < 1e-15) return p;
                double s = std::clamp(t / total, 0.0, 1.0);
                double a = std::sin((1.0 - s) * omega) / std::sin(omega);
                double b = std::sin(s * omega) / std::sin(omega);
                std::array<double, 3> w{a * u[0] + b * v[0], a * u[1] + b * v[1],
                                        a * u[2] + b * v[2]};
                double norm = norm3(w);
                return SpherePoint{{m.radius * w[0] / norm, m.radius * w[1] / norm,
                                    m.radius * w[2] / norm}};
            } else if constexpr (std::is_same_v<T, FlatTorus>) {
                const TorusPoint &a = as_torus(p), &b = as_torus(q);
                double du = wrap_signed(b.u - a.u, m.period_u);
                double dv = wrap_signed(b.v - a.v, m.period_v);
                if (m.period_u / 2 - std::abs(du) < 1e-12 * m.period_u)
                    throw_ambiguous("wrap tie along the first torus period");
                if (m.period_v / 2 - std::abs(dv) < 1e-12 * m.period_v)
                    throw_ambiguous("wrap tie along the second torus period");
                double total = std::hypot(du, dv);
                check_arclength(t, total);
                if (total == 0) return p;
                double s = std::clamp(t / total, 0.0, 1.0);
                return TorusPoint{wrap_canonical(a.u + s * du, m.period_u),
                                  wrap_canonical(a.v + s * dv, m.period_v)};
            } else {
                (void)m;
                throw UnsupportedModel("mesh geodesics have no closed-form trace");
            }
        },
        model);
}

std::vector<double> squared_distance_gradient(const ManifoldModel& model, const ManifoldPoint& z,
                                              const ManifoldPoint& p) {
    return std::visit(
        [&](const auto& m) -> std::vector<double> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Circle>) {
                double delta = wrap_signed(as_circle(p).theta - as_circle(z).theta, kTau);
                if (std::abs(delta) > std::numbers::pi - 1e-9)
                    throw_ambiguous("opposite circle points have two shortest arcs");
                return {-2.0 * m.radius * delta};
            } else if constexpr (std::is_same_v<T, Sphere>) {
                auto uz = unit_vector(m, as_sphere(z));
                auto up = unit_vector(m, as_sphere(p));
                double omega = sphere_angle(uz, up);
                if (omega > std::numbers::pi - 1e-9)
                    throw_ambiguous("antipodal sphere points have no unique geodesic");
                if (omega < 1e-15) return {0.0, 0.0, 0.0};
                double along = dot3(uz, up);
                std::array<double, 3> dir{up[0] - along * uz[0], up[1] - along * uz[1],
                                          up[2] - along * uz[2]};
                double norm = norm3(dir);
                if (norm < 1e-300) return {0.0, 0.0, 0.0};
                double scale = -2.0 * m.radius * omega / norm;
                return {scale * dir[0], scale * dir[1], scale * dir[2]};
            } else if constexpr (std::is_same_v<T, FlatTorus>) {
                const TorusPoint &a = as_torus(z), &b = as_torus(p);
                double du = wrap_signed(b.u - a.u, m.period_u);
                double dv = wrap_signed(b.v - a.v, m.period_v);
                if (m.period_u / 2 - std::abs(du) < 1e-12 * m.period_u)
                    throw_ambiguous("wrap tie along the first torus period");
                if (m.period_v / 2 - std::abs(dv) < 1e-12 * m.period_v)
                    throw_ambiguous("wrap tie along the second torus period");
                return {-2.0 * du, -2.0 * dv};
            } else {
                (void)m;
                throw UnsupportedModel("mesh distances are not differentiable here");
            }
        },
        model);
}

double median_residual(const ManifoldModel& model, const ManifoldPoint& x, const ManifoldPoint& p0,
                       const ManifoldPoint& q0) {
    return squared_distance_eta(model, x, p0) - squared_distance_eta(model, x, q0);
}

namespace {

ManifoldPoint draw_point(const ManifoldModel& model, Rng& rng) {
    return std::visit(
        [&](const auto& m) -> ManifoldPoint {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return CirclePoint{rng.uniform(0.0, kTau)};
            } else if constexpr (std::is_same_v<T, Sphere>) {
                double n2 = 0.0;
                std::array<double, 3> g{};
                do {
                    for (double& c : g) c = rng.gaussian();
                    n2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
                } while (n2 < 1e-24);
                double s = m.radius / std::sqrt(n2);
                return SpherePoint{{g[0] * s, g[1] * s, g[2] * s}};
            } else if constexpr (std::is_same_v<T, FlatTorus>) {
                return TorusPoint{rng.uniform(0.0, m.period_u), rng.uniform(0.0, m.period_v)};
            } else {
                double target = rng.uniform() * m.total_area();
                int face = 0;
                double acc = 0.0;
                for (std::size_t f = 0; f < m.face_areas().size(); ++f) {
                    acc += m.face_areas()[f];
                    if (target <= acc || f + 1 == m.face_areas().size()) {
                        face = static_cast<int>(f);
                        break;
                    }
                }
                double a = rng.uniform(), b = rng.uniform();
                if (a + b > 1.0) {
                    a = 1.0 - a;
                    b = 1.0 - b;
                }
                return MeshPoint{face, {1.0 - a - b, a, b}};
            }
        },
        model);
}

}  // namespace

std::vector<ManifoldPoint> extend_sample(const ManifoldModel& model,
                                         std::vector<ManifoldPoint> existing, int total,
                                         std::uint64_t rng_seed) {
    if (total < 1) throw Error("sample size must be at least 1");
    if (static_cast<int>(existing.size()) > total)
        throw Error("more fixed points than the requested total");
    Rng rng(rng_seed);
    const double floor = 1e-9 * model_diameter(model);

    std::vector<ManifoldPoint>& points = existing;
    points.reserve(total);
    int attempts = 0;
    while (static_cast<int>(points.size()) < total) {
        if (++attempts > 1000 * total)
            throw Error("cannot draw " + std::to_string(total) + " separated points");
        ManifoldPoint cand = draw_point(model, rng);
        bool clear = true;
        for (const ManifoldPoint& prev : points)
            if (geodesic_distance(model, prev, cand) < floor) {
                clear = false;
                break;
            }
        if (clear) points.push_back(std::move(cand));
    }
    return std::move(existing);
}

FiniteMetricSpace space_from_points(const ManifoldModel& model,
                                    const std::vector<ManifoldPoint>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 1) throw Error("need at least one point");
    RawMatrix raw;
    raw.n = n;
    for (int i = 0; i < n; ++i) raw.labels.push_back("p" + std::to_string(i));
    raw.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    if (const auto* mesh = std::get_if<TriangleMesh>(&model)) {
        std::vector<MeshPoint> mpts;
        mpts.reserve(points.size());
        for (const ManifoldPoint& p : points) mpts.push_back(as_mesh(p));
        auto d = mesh_point_distances(*mesh, mpts);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) raw.values[static_cast<std::size_t>(i) * n + j] = d[i][j];
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = geodesic_distance(model, points[i], points[j]);
                raw.values[static_cast<std::size_t>(i) * n + j] = d;
                raw.values[static_cast<std::size_t>(j) * n + i] = d;
            }
    }
    return make_space(raw, 1e-12 * std::max(1.0, model_diameter(model)));
}

SampleResult sample(const ManifoldModel& model, int n, std::uint64_t rng_seed) {
    std::vector<ManifoldPoint> points = extend_sample(model, {}, n, rng_seed);
    FiniteMetricSpace space = space_from_points(model, points);
    return SampleResult{std::move(points), std::move(space)};
}

double simplex_quality(const ManifoldModel& model, const std::vector<ManifoldPoint>& points) {
    if (points.size() < 2) throw Error("simplex quality needs at least two points");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double d = geodesic_distance(model, points[i], points[j]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sum += d;
            ++count;
        }
    double mean = sum / static_cast<double>(count);
    if (mean <= 0.0) throw CoincidentPoints("all pairwise distances vanish");
    return (hi - lo) / mean;
}

double flag_quality(const ManifoldModel& model,
                    const std::vector<std::pair<ManifoldPoint, ManifoldPoint>>& pairs) {
    if (pairs.empty()) throw Error("flag quality needs at least one pair");
    for (const auto& [p, q] : pairs)
        if (geodesic_distance(model, p, q) == 0.0)
            throw DegeneratePair("flag pair with coincident members");
    std::vector<const ManifoldPoint*> all;
    for (const auto& [p, q] : pairs) {
        all.push_back(&p);
        all.push_back(&q);
    }
    double diameter = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            diameter = std::max(diameter, geodesic_distance(model, *all[i], *all[j]));
    double worst = 0.0;
    for (std::size_t i = 1; i < pairs.size(); ++i)
        for (std::size_t s = 0; s < i; ++s)
            for (const ManifoldPoint* z : {&pairs[i].first, &pairs[i].second}) {
                double a = geodesic_distance(model, *z, pairs[s].first);
                double b = geodesic_distance(model, *z, pairs[s].second);
                worst = std::max(worst, std::abs(a - b));
            }
    return worst / diameter;
}

std::vector<double> chart_coords(const ManifoldPoint& point) {
    return std::visit(
        [](const auto& p) -> std::vector<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, CirclePoint>)
                return {p.theta};
            else if constexpr (std::is_same_v<T, SpherePoint>)
                return {p.x[0], p.x[1], p.x[2]};
            else if constexpr (std::is_same_v<T, TorusPoint>)
                return {p.u, p.v};
            else
                return {static_cast<double>(p.face), p.bary[0], p.bary[1], p.bary[2]};
        },
        point);
}

}  // namespace loem
