#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seal/ids.hpp"

namespace seal {

class Rng;

// Planar map coordinates. No projection is applied anywhere.
struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

using Ring = std::vector<Point>;

// First ring is the outer boundary; further rings are holes. Containment uses the
// even-odd rule across all rings, so holes fall out naturally.
struct Polygon {
  std::vector<Ring> rings;

  bool operator==(const Polygon&) const = default;
};

struct Envelope {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(Point p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  bool operator==(const Envelope&) const = default;
};

struct MultiPolygon {
  std::vector<Polygon> parts;

  bool operator==(const MultiPolygon&) const = default;
};

struct RegionBoundary {
  RegionId region_id;
  std::string name;
  MultiPolygon outer;
  std::vector<MultiPolygon> urban_zones;
  Envelope envelope;

  bool operator==(const RegionBoundary&) const = default;
};

// Inside or on the boundary. Throws InputError for rings with fewer than 3 vertices.
bool contains(const Polygon& poly, Point p);
bool contains(const MultiPolygon& poly, Point p);

double area(const Polygon& poly);
double area(const MultiPolygon& poly);

Envelope envelope_of(const Polygon& poly);
Envelope envelope_of(const MultiPolygon& poly);

inline constexpr long kMaxRejections = 1'000'000;

// Uniform over the polygon area by rejection inside the envelope.
// Throws InputError on zero area and SamplingError after kMaxRejections misses.
Point random_point_in_polygon(const Polygon& poly, Rng& rng);
Point random_point_in_polygon(const MultiPolygon& poly, Rng& rng);

// Same, but additionally rejects points inside any of `excluded` (the rural remainder
// of a municipality once its urban zones are cut out).
Point random_point_in_polygon(const MultiPolygon& poly, std::span<const MultiPolygon> excluded, Rng& rng);

double distance(Point a, Point b);

// Axis-aligned rectangle helper, used by the synthetic world and tests.
Polygon rectangle(double min_x, double min_y, double max_x, double max_y);

RegionBoundary make_boundary(RegionId id, std::string name, MultiPolygon outer,
                             std::vector<MultiPolygon> urban_zones = {});

}  // namespace seal
