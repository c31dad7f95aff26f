#include "hydrosurr/sdf/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hydrosurr::sdf {

using geometry::Triangle;

// Closest point by Voronoi region (Ericson, Real-Time Collision Detection 5.1.5).
double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0) return dot(ap, ap);

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return dot(bp, bp);

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        const Vec3 q = a + ab * (d1 / (d1 - d3));
        return dot(p - q, p - q);
    }

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return dot(cp, cp);

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        const Vec3 q = a + ac * (d2 / (d2 - d6));
        return dot(p - q, p - q);
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        const Vec3 q = b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
        return dot(p - q, p - q);
    }

    const double denom = 1.0 / (va + vb + vc);
    const Vec3 q = a + ab * (vb * denom) + ac * (vc * denom);
    return dot(p - q, p - q);
}

namespace {

double box_distance_sq(const Vec3& p, const Vec3& lo, const Vec3& hi) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double e = std::max({lo[i] - p[i], 0.0, p[i] - hi[i]});
        d += e * e;
    }
    return d;
}

bool ray_hits_box(const Vec3& o, const Vec3& inv_dir, const Vec3& lo, const Vec3& hi) {
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        double a = (lo[i] - o[i]) * inv_dir[i];
        double b = (hi[i] - o[i]) * inv_dir[i];
        if (std::isnan(a) || std::isnan(b)) {  // zero direction component with origin on a slab plane
            if (o[i] < lo[i] || o[i] > hi[i]) return false;
            continue;
        }
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        if (t0 > t1) return false;
    }
    return true;
}

// 2-D test in the face plane: does the ray touch the triangle?
bool coplanar_ray_touches(const Vec3& o, const Vec3& d, const Triangle& t, const Vec3& nrm) {
    const int drop = std::abs(nrm.x) >= std::abs(nrm.y) && std::abs(nrm.x) >= std::abs(nrm.z)
                         ? 0
                         : (std::abs(nrm.y) >= std::abs(nrm.z) ? 1 : 2);
    const int i0 = (drop + 1) % 3, i1 = (drop + 2) % 3;
    auto cross2 = [](double ax, double ay, double bx, double by) { return ax * by - ay * bx; };
    const std::array<Vec3, 3> v{t.a, t.b, t.c};
    for (int e = 0; e < 3; ++e) {
        const Vec3& a = v[e];
        const Vec3& b = v[(e + 1) % 3];
        const double ex = b[i0] - a[i0], ey = b[i1] - a[i1];
        const double wx = a[i0] - o[i0], wy = a[i1] - o[i1];
        const double den = cross2(d[i0], d[i1], ex, ey);
        if (den == 0.0) {
            if (cross2(wx, wy, d[i0], d[i1]) == 0.0) return true;  // collinear with an edge
            continue;
        }
        const double tr = cross2(wx, wy, ex, ey) / den;
        const double s = cross2(wx, wy, d[i0], d[i1]) / den;
        if (tr >= 0.0 && s >= 0.0 && s <= 1.0) return true;
    }
    return false;
}

}  // namespace

MeshDistance::MeshDistance(const geometry::Mesh& mesh) {
    tris_.reserve(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) tris_.push_back(mesh.triangle(f));
    order_.resize(tris_.size());
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!tris_.empty()) {
        const auto [lo, hi] = mesh.bounds();
        scale_ = std::max(norm(hi - lo), 1e-12);
        nodes_.reserve(2 * tris_.size());
        build(0, static_cast<std::uint32_t>(tris_.size()));
    }
}

std::uint32_t MeshDistance::build(std::uint32_t first, std::uint32_t count) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Vec3 lo = tris_[order_[first]].a, hi = lo;
    Vec3 clo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity()};
    Vec3 chi = -clo;
    for (std::uint32_t i = first; i < first + count; ++i) {
        const auto& t = tris_[order_[i]];
        for (const auto& v : {t.a, t.b, t.c}) {
            lo = cwise_min(lo, v);
            hi = cwise_max(hi, v);
        }
        const Vec3 c = (t.a + t.b + t.c) / 3.0;
        clo = cwise_min(clo, c);
        chi = cwise_max(chi, c);
    }
    nodes_[index].lo = lo;
    nodes_[index].hi = hi;
    if (count <= 4) {
        nodes_[index].first = first;
        nodes_[index].count = count;
        return index;
    }
    const Vec3 ext = chi - clo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    const std::uint32_t half = count / 2;
    auto key = [&](std::uint32_t t) {
        const auto& tri = tris_[t];
        return tri.a[axis] + tri.b[axis] + tri.c[axis];
    };
    std::nth_element(order_.begin() + first, order_.begin() + first + half, order_.begin() + first + count,
                     [&](std::uint32_t x, std::uint32_t y) { return key(x) < key(y) || (key(x) == key(y) && x < y); });
    build(first, half);
    const std::uint32_t right = build(first + half, count - half);
    nodes_[index].first = right;
    nodes_[index].count = 0;
    return index;
}

double MeshDistance::unsigned_distance(const Vec3& p) const {
    if (nodes_.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::array<std::uint32_t, 128> stack{};
    std::size_t top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& n = nodes_[stack[--top]];
        if (box_distance_sq(p, n.lo, n.hi) >= best) continue;
        if (n.count > 0) {
            for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
                const auto& t = tris_[order_[i]];
                best = std::min(best, point_triangle_distance_sq(p, t.a, t.b, t.c));
            }
            continue;
        }
        const auto self = static_cast<std::uint32_t>(&n - nodes_.data());
        const std::uint32_t left = self + 1, right = n.first;
        const double dl = box_distance_sq(p, nodes_[left].lo, nodes_[left].hi);
        const double dr = box_distance_sq(p, nodes_[right].lo, nodes_[right].hi);
        // Push the farther child first so the nearer one is visited next.
        if (dl < dr) {
            stack[top++] = right;
            stack[top++] = left;
        } else {
            stack[top++] = left;
            stack[top++] = right;
        }
    }
    return std::sqrt(best);
}

RayParity MeshDistance::cast_parity(const Vec3& o, const Vec3& d) const {
    RayParity out;
    if (nodes_.empty()) {
        out.valid = true;
        return out;
    }
    const Vec3 inv{1.0 / d.x, 1.0 / d.y, 1.0 / d.z};
    const double edge_eps = 1e-10;
    const double t_eps = 1e-12 * scale_;
    std::size_t hits = 0;
    std::array<std::uint32_t, 128> stack{};
    std::size_t top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const std::uint32_t idx = stack[--top];
        const Node& n = nodes_[idx];
        if (!ray_hits_box(o, inv, n.lo, n.hi)) continue;
        if (n.count == 0) {
            stack[top++] = n.first;
            stack[top++] = idx + 1;
            continue;
        }
        for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
            const Triangle& t = tris_[order_[i]];
            // Moller-Trumbore with explicit degeneracy classification.
            const Vec3 e1 = t.b - t.a, e2 = t.c - t.a;
            const Vec3 pv = cross(d, e2);
            const double det = dot(e1, pv);
            const double tol = 1e-12 * norm(e1) * norm(e2);
            if (std::abs(det) <= tol) {
                // Ray parallel to the face: harmless unless it lies in the face plane.
                const Vec3 nrm = cross(e1, e2);
                const double nn = norm(nrm);
                if (nn > 0 && std::abs(dot(o - t.a, nrm)) / nn <= t_eps && coplanar_ray_touches(o, d, t, nrm))
                    return out;  // ray slides along the face
                continue;
            }
            const double inv_det = 1.0 / det;
            const Vec3 tv = o - t.a;
            const double u = dot(tv, pv) * inv_det;
            if (u < -edge_eps || u > 1.0 + edge_eps) continue;
            const Vec3 qv = cross(tv, e1);
            const double v = dot(d, qv) * inv_det;
            if (v < -edge_eps || u + v > 1.0 + edge_eps) continue;
            const double tt = dot(e2, qv) * inv_det;
            if (tt < -t_eps) continue;
            if (tt <= t_eps) return out;  // origin on the surface
            if (u <= edge_eps || v <= edge_eps || u + v >= 1.0 - edge_eps) return out;  // edge/vertex graze
            ++hits;
        }
    }
    out.valid = true;
    out.inside = (hits % 2) == 1;
    return out;
}

bool MeshDistance::inside(const Vec3& p) const {
    static const std::array<Vec3, 3> axes{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    // Fixed irrational-looking tilts so that retries are deterministic.
    static const std::array<Vec3, 6> tilts{Vec3{0.0131, 0.0217, 0.0071},  Vec3{-0.0193, 0.0113, 0.0157},
                                           Vec3{0.0241, -0.0167, 0.0089}, Vec3{-0.0071, -0.0253, 0.0199},
                                           Vec3{0.0311, 0.0049, -0.0277}, Vec3{-0.0229, 0.0281, -0.0131}};
    int votes = 0;
    for (const auto& axis : axes) {
        RayParity r = cast_parity(p, axis);
        for (std::size_t k = 0; !r.valid && k < tilts.size(); ++k) {
            const Vec3 d = axis + tilts[k] * static_cast<double>(k + 1);
            r = cast_parity(p, d / norm(d));
        }
        if (r.valid && r.inside) ++votes;
    }
    return votes >= 2;
}

double MeshDistance::signed_distance(const Vec3& p) const {
    const double d = unsigned_distance(p);
    if (d == 0.0) return 0.0;
    return inside(p) ? -d : d;
}

double signed_distance(const geometry::Mesh& mesh, const Vec3& point) {
    return MeshDistance(mesh).signed_distance(point);
}

}  // namespace hydrosurr::sdf
