#include "seal/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "seal/errors.hpp"
#include "seal/random.hpp"

namespace seal {

namespace {

void require_valid(const Polygon& poly) {
  if (poly.rings.empty() || poly.rings.front().size() < 3) {
    throw InputError("degenerate polygon: outer ring needs at least 3 vertices");
  }
}

bool on_segment(Point a, Point b, Point p) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double cross = dx * (p.y - a.y) - dy * (p.x - a.x);
  const double scale = std::max(1.0, dx * dx + dy * dy);
  if (std::abs(cross) > 1e-12 * scale) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

// Even-odd crossings for one ring; sets on_edge when p lies on the ring.
bool ring_crossings(const Ring& ring, Point p, bool& on_edge) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[j];
    const Point b = ring[i];
    if (on_segment(a, b, p)) {
      on_edge = true;
      return true;
    }
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = (a.x - b.x) * (p.y - b.y) / (a.y - b.y) + b.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double ring_signed_area(const Ring& ring) {
  double s = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    s += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
  }
  return 0.5 * s;
}

Point sample_with(const Envelope& env, Rng& rng, const auto& accept) {
  for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
    const Point p{rng.uniform(env.min_x, env.max_x), rng.uniform(env.min_y, env.max_y)};
    if (accept(p)) return p;
  }
  throw SamplingError(fmt::format("no point accepted after {} rejection attempts", kMaxRejections));
}

}  // namespace

bool contains(const Polygon& poly, Point p) {
  require_valid(poly);
  bool inside = false;
  for (const Ring& ring : poly.rings) {
    if (ring.size() < 3) continue;
    bool on_edge = false;
    const bool crossed = ring_crossings(ring, p, on_edge);
    if (on_edge) return true;
    if (crossed) inside = !inside;
  }
  return inside;
}

bool contains(const MultiPolygon& poly, Point p) {
  return std::any_of(poly.parts.begin(), poly.parts.end(),
                     [&](const Polygon& part) { return contains(part, p); });
}

double area(const Polygon& poly) {
  if (poly.rings.empty()) return 0.0;
  double a = std::abs(ring_signed_area(poly.rings.front()));
  for (std::size_t i = 1; i < poly.rings.size(); ++i) {
    a -= std::abs(ring_signed_area(poly.rings[i]));
  }
  return std::max(a, 0.0);
}

double area(const MultiPolygon& poly) {
  double a = 0.0;
  for (const Polygon& part : poly.parts) a += area(part);
  return a;
}

Envelope envelope_of(const Polygon& poly) {
  Envelope env{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Ring& ring : poly.rings) {
    for (const Point& p : ring) {
      env.min_x = std::min(env.min_x, p.x);
      env.min_y = std::min(env.min_y, p.y);
      env.max_x = std::max(env.max_x, p.x);
      env.max_y = std::max(env.max_y, p.y);
    }
  }
  return env;
}

Envelope envelope_of(const MultiPolygon& poly) {
  if (poly.parts.empty()) return {};
  Envelope env = envelope_of(poly.parts.front());
  for (std::size_t i = 1; i < poly.parts.size(); ++i) {
    const Envelope e = envelope_of(poly.parts[i]);
    env.min_x = std::min(env.min_x, e.min_x);
    env.min_y = std::min(env.min_y, e.min_y);
    env.max_x = std::max(env.max_x, e.max_x);
    env.max_y = std::max(env.max_y, e.max_y);
  }
  return env;
}

Point random_point_in_polygon(const Polygon& poly, Rng& rng) {
  require_valid(poly);
  if (!(area(poly) > 0.0)) throw InputError("cannot sample a point in a zero-area polygon");
  return sample_with(envelope_of(poly), rng, [&](Point p) { return contains(poly, p); });
}

Point random_point_in_polygon(const MultiPolygon& poly, Rng& rng) {
  return random_point_in_polygon(poly, {}, rng);
}

Point random_point_in_polygon(const MultiPolygon& poly, std::span<const MultiPolygon> excluded, Rng& rng) {
  if (poly.parts.empty()) throw InputError("cannot sample a point in an empty polygon");
  for (const Polygon& part : poly.parts) require_valid(part);
  if (!(area(poly) > 0.0)) throw InputError("cannot sample a point in a zero-area polygon");
  return sample_with(envelope_of(poly), rng, [&](Point p) {
    if (!contains(poly, p)) return false;
    return std::none_of(excluded.begin(), excluded.end(),
                        [&](const MultiPolygon& zone) { return contains(zone, p); });
  });
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Polygon rectangle(double min_x, double min_y, double max_x, double max_y) {
  return Polygon{{Ring{{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}}}};
}

RegionBoundary make_boundary(RegionId id, std::string name, MultiPolygon outer,
                             std::vector<MultiPolygon> urban_zones) {
  RegionBoundary b;
  b.region_id = std::move(id);
  b.name = std::move(name);
  b.envelope = envelope_of(outer);
  b.outer = std::move(outer);
  b.urban_zones = std::move(urban_zones);
  return b;
}

}  // namespace seal
