#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "genagent/errors.hpp"

namespace genagent {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }

// Coordinates are ground meters in a planar projection. Loaded data is snapped
// to a 2^-29 m grid; on that grid, translation by a snapped vector is exact in
// doubles (all sums stay below 2^24, where the grid still resolves), which the
// displacement bookkeeping and the fixed-point guarantees lean on. Geometry
// produced mid-plan (enlarge, square) may leave the grid; that only costs the
// bitwise guarantees, never validity.
inline constexpr double kCoordQuantum = 0x1.0p-29;
inline constexpr double kMaxCoord = 16775168.0;  // 2^24 - 2^11: headroom for displacement

double snap_coord(double v);  // validates finite + |v| <= kMaxCoord, snaps to the grid
Point2 snap_point(Point2 p);

// Open chain, >= 2 vertices, no two consecutive vertices identical.
class Polyline {
  public:
    explicit Polyline(const std::vector<Point2>& pts);
    static Polyline unchecked(std::vector<double> xs, std::vector<double> ys);

    std::size_t size() const { return xs_.size(); }
    double x(std::size_t i) const { return xs_[i]; }
    double y(std::size_t i) const { return ys_[i]; }
    Point2 pt(std::size_t i) const { return {xs_[i], ys_[i]}; }
    Point2 front() const { return pt(0); }
    Point2 back() const { return pt(size() - 1); }
    const double* xs() const { return xs_.data(); }
    const double* ys() const { return ys_.data(); }

  private:
    Polyline() = default;
    std::vector<double> xs_, ys_;
};

// Simple ring, counter-clockwise, >= 3 vertices. Stored closed (first vertex
// repeated at the end) so the ring doubles as a segment chain for the kernels.
class Polygon {
  public:
    explicit Polygon(const std::vector<Point2>& ring);  // open ring; fixes orientation
    static Polygon unchecked(std::vector<double> xs_closed, std::vector<double> ys_closed);

    std::size_t size() const { return xs_.size() - 1; }  // distinct vertices
    std::size_t closed_size() const { return xs_.size(); }
    double x(std::size_t i) const { return xs_[i]; }
    double y(std::size_t i) const { return ys_[i]; }
    Point2 pt(std::size_t i) const { return {xs_[i], ys_[i]}; }
    const double* xs() const { return xs_.data(); }
    const double* ys() const { return ys_.data(); }

  private:
    Polygon() = default;
    std::vector<double> xs_, ys_;
};

using Geometry = std::variant<Polygon, Polyline>;

enum class FeatureKind { Building, Road };

struct MapObject {
    std::string id;
    FeatureKind kind = FeatureKind::Building;
    Geometry geometry;
};

struct ScaleSpec {
    double source_denominator = 1000.0;
    double target_denominator = 1500.0;
    double min_symbol_side_mm = 0.4;
    double min_separation_mm = 0.2;
};

struct BBox {
    double minx = 0.0, miny = 0.0, maxx = 0.0, maxy = 0.0;
};

BBox bbox(const Geometry& g);
BBox bbox_expanded(const BBox& b, double r);
bool bbox_overlap(const BBox& a, const BBox& b);

double polygon_area(const Polygon& p);          // shoelace / 2; throws DegenerateGeometry on 0
Point2 polygon_centroid(const Polygon& p);      // area-weighted
double polyline_length(const Polyline& l);
double ground_threshold(const ScaleSpec& spec, double mm);  // map-mm -> ground meters at target
double min_separation(const Geometry& a, const Geometry& b);
bool point_in_polygon(const Polygon& p, double px, double py);  // even-odd; boundary unspecified

// Total unsigned area enclosed between two chains sharing both endpoints: the
// closed tour (a forward, b backward) is split at crossings and repeated
// vertices into simple loops whose absolute areas are summed.
double areal_displacement(const Polyline& original, const Polyline& simplified);

std::uint64_t geometry_hash(const Geometry& g);           // FNV-1a over coordinate bits
bool geometry_equal(const Geometry& a, const Geometry& b);  // bitwise coordinate equality

}  // namespace genagent
