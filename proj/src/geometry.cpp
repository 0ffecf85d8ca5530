#include "roso/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace roso {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double signed_area(const std::vector<Vec2>& v)
{
    double a = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        a += v[j].x * v[i].y - v[i].x * v[j].y;
    return 0.5 * a;
}

} // namespace

Footprint::Footprint(Shape shape) : shape_(std::move(shape)) {}

Footprint Footprint::polygon(std::vector<Vec2> vertices)
{
    if (vertices.size() < 3)
        throw std::invalid_argument("polygon footprint needs at least 3 vertices");
    const double a = signed_area(vertices);
    if (std::abs(a) <= 0.0)
        throw std::invalid_argument("degenerate polygon footprint");
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0, j = vertices.size() - 1; i < vertices.size(); j = i++) {
        const double cross = vertices[j].x * vertices[i].y - vertices[i].x * vertices[j].y;
        cx += (vertices[j].x + vertices[i].x) * cross;
        cy += (vertices[j].y + vertices[i].y) * cross;
    }
    cx /= 6.0 * a;
    cy /= 6.0 * a;
    for (auto& p : vertices)
        p = {p.x - cx, p.y - cy};
    return Footprint(PolygonShape{std::move(vertices)});
}

bool Footprint::contains_local(Vec2 p) const
{
    return std::visit(overloaded{
                          [&](const RectShape& r) {
                              return std::abs(p.x) < 0.5 * r.width && std::abs(p.y) < 0.5 * r.height;
                          },
                          [&](const DiscShape& d) { return p.x * p.x + p.y * p.y < d.radius * d.radius; },
                          [&](const PolygonShape& poly) {
                              // Even-odd crossing test.
                              const auto& v = poly.vertices;
                              bool inside = false;
                              for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
                                  if ((v[i].y > p.y) != (v[j].y > p.y)) {
                                      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
                                      if (p.x < x)
                                          inside = !inside;
                                  }
                              }
                              return inside;
                          },
                      },
                      shape_);
}

Vec2 to_local(const Pose& pose, Vec2 world)
{
    const double dx = world.x - pose.x;
    const double dy = world.y - pose.y;
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    return {c * dx + s * dy, -s * dx + c * dy};
}

bool Footprint::contains(const Pose& pose, Vec2 world) const
{
    return contains_local(to_local(pose, world));
}

double Footprint::area() const
{
    return std::visit(overloaded{
                          [](const RectShape& r) { return r.width * r.height; },
                          [](const DiscShape& d) { return std::numbers::pi * d.radius * d.radius; },
                          [](const PolygonShape& p) { return std::abs(signed_area(p.vertices)); },
                      },
                      shape_);
}

double Footprint::bounding_radius() const
{
    return std::visit(overloaded{
                          [](const RectShape& r) { return 0.5 * std::hypot(r.width, r.height); },
                          [](const DiscShape& d) { return d.radius; },
                          [](const PolygonShape& p) {
                              double m = 0.0;
                              for (const auto& v : p.vertices)
                                  m = std::max(m, std::hypot(v.x, v.y));
                              return m;
                          },
                      },
                      shape_);
}

void Footprint::world_bounds(const Pose& pose, double& min_x, double& min_y, double& max_x, double& max_y) const
{
    std::vector<Vec2> pts;
    std::visit(overloaded{
                   [&](const RectShape& r) {
                       const double hw = 0.5 * r.width, hh = 0.5 * r.height;
                       pts = {{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}};
                   },
                   [&](const DiscShape& d) {
                       pts = {{-d.radius, 0}, {d.radius, 0}, {0, -d.radius}, {0, d.radius}};
                       // A disc is rotation invariant; use the axis extremes directly.
                   },
                   [&](const PolygonShape& p) { pts = p.vertices; },
               },
               shape_);
    const bool disc = std::holds_alternative<DiscShape>(shape_);
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    min_x = min_y = 1e300;
    max_x = max_y = -1e300;
    for (const auto& p : pts) {
        const double wx = disc ? pose.x + p.x : pose.x + c * p.x - s * p.y;
        const double wy = disc ? pose.y + p.y : pose.y + s * p.x + c * p.y;
        min_x = std::min(min_x, wx);
        max_x = std::max(max_x, wx);
        min_y = std::min(min_y, wy);
        max_y = std::max(max_y, wy);
    }
}

} // namespace roso
