#pragma once

#include <variant>
#include <vector>

namespace roso {

struct Vec2 {
    double x = 0.0, y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

/// Table pose of an object: centroid and rotation about it.
struct Pose {
    double x = 0.0, y = 0.0, theta = 0.0;
    friend bool operator==(const Pose&, const Pose&) = default;
};

struct RectShape {
    double width = 0.0, height = 0.0;
    friend bool operator==(const RectShape&, const RectShape&) = default;
};

struct DiscShape {
    double radius = 0.0;
    friend bool operator==(const DiscShape&, const DiscShape&) = default;
};

/// Simple polygon, vertices relative to its area centroid.
struct PolygonShape {
    std::vector<Vec2> vertices;
    friend bool operator==(const PolygonShape&, const PolygonShape&) = default;
};

/// 2-D footprint in object-local coordinates, centered on the centroid.
class Footprint {
public:
    using Shape = std::variant<RectShape, DiscShape, PolygonShape>;

    Footprint() = default;
    explicit Footprint(Shape shape);

    // Polygon vertices are re-centered on their area centroid.
    static Footprint polygon(std::vector<Vec2> vertices);

    const Shape& shape() const { return shape_; }

    // Strict interior test in object-local coordinates.
    bool contains_local(Vec2 p) const;
    bool contains(const Pose& pose, Vec2 world) const;

    double area() const;
    double bounding_radius() const;

    // Extreme points in world coordinates (for bounds checks).
    void world_bounds(const Pose& pose, double& min_x, double& min_y, double& max_x, double& max_y) const;

    friend bool operator==(const Footprint&, const Footprint&) = default;

private:
    Shape shape_{RectShape{}};
};

Vec2 to_local(const Pose& pose, Vec2 world);

} // namespace roso
