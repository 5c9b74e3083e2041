#include "varkit/cone2d.hpp"

#include <algorithm>

#include "varkit/errors.hpp"

namespace varkit {
namespace {

std::string str(const Vec2& v) { return "(" + to_string(v.x) + "," + to_string(v.y) + ")"; }

int half(const Vec2& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

std::vector<Vec2> sorted_directions(const std::vector<Vec2>& gens) {
  std::vector<Vec2> d;
  for (const auto& g : gens)
    if (!g.is_zero()) d.push_back(normalize_direction(g));
  std::sort(d.begin(), d.end(), angle_less);
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

Vec2 require_nonzero(const Vec2& v) {
  if (v.is_zero()) throw Error(Errc::InvalidArgument, "cone generator must be nonzero");
  return normalize_direction(v);
}

}  // namespace

Vec2 normalize_direction(const Vec2& v) {
  const Rational ax = abs(v.x), ay = abs(v.y);
  const Rational m = ax > ay ? ax : ay;
  if (m == 0) return v;
  return {v.x / m, v.y / m};
}

bool angle_less(const Vec2& a, const Vec2& b) {
  const int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0;
}

ConvexCone2D ConvexCone2D::ray(const Vec2& g) { return ConvexCone2D(Kind::Ray, {require_nonzero(g)}); }

ConvexCone2D ConvexCone2D::line(const Vec2& g) {
  Vec2 d = require_nonzero(g);
  if (half(d) == 1) d = -d;
  return ConvexCone2D(Kind::Line, {d});
}

ConvexCone2D ConvexCone2D::sector(const Vec2& g1, const Vec2& g2) {
  const Vec2 a = require_nonzero(g1), b = require_nonzero(g2);
  if (!(cross(a, b) > 0)) throw Error(Errc::InvalidArgument, "sector must span an angle in (0, pi)");
  return ConvexCone2D(Kind::Sector, {a, b});
}

ConvexCone2D ConvexCone2D::half_plane(const Vec2& inner_normal) {
  return ConvexCone2D(Kind::HalfPlane, {require_nonzero(inner_normal)});
}

ConvexCone2D ConvexCone2D::hull(const std::vector<Vec2>& generators) {
  const std::vector<Vec2> d = sorted_directions(generators);
  const std::size_t n = d.size();
  if (n == 0) return zero();
  if (n == 1) return ray(d[0]);
  std::vector<std::size_t> straight;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = d[i];
    const Vec2& b = d[(i + 1) % n];
    const Rational c = cross(a, b);
    if (c < 0) return sector(b, a);
    if (c == 0) straight.push_back(i);
  }
  if (straight.size() == 2) return line(d[0]);
  if (straight.size() == 1) return half_plane(perp(d[(straight[0] + 1) % n]));
  return plane();
}

std::vector<Vec2> ConvexCone2D::generators() const {
  switch (kind_) {
    case Kind::Zero:
      return {};
    case Kind::Ray:
      return {data_[0]};
    case Kind::Line:
      return {data_[0], -data_[0]};
    case Kind::Sector:
      return data_;
    case Kind::HalfPlane:
      return {perp(data_[0]), -perp(data_[0]), data_[0]};
    case Kind::Plane:
      return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  }
  return {};
}

std::vector<Vec2> ConvexCone2D::constraints() const { return polar().generators(); }

bool ConvexCone2D::contains(const Vec2& p) const {
  if (p.is_zero()) return true;
  switch (kind_) {
    case Kind::Zero:
      return false;
    case Kind::Ray:
      return cross(data_[0], p) == 0 && dot(data_[0], p) > 0;
    case Kind::Line:
      return cross(data_[0], p) == 0;
    case Kind::Sector:
      return cross(data_[0], p) >= 0 && cross(p, data_[1]) >= 0;
    case Kind::HalfPlane:
      return dot(data_[0], p) >= 0;
    case Kind::Plane:
      return true;
  }
  return false;
}

ConvexCone2D ConvexCone2D::polar() const {
  switch (kind_) {
    case Kind::Zero:
      return plane();
    case Kind::Ray:
      return half_plane(-data_[0]);
    case Kind::Line:
      return line(perp(data_[0]));
    case Kind::Sector: {
      const Vec2 n1{data_[0].y, -data_[0].x};
      const Vec2 n2 = perp(data_[1]);
      return sector(n2, n1);
    }
    case Kind::HalfPlane:
      return ray(-data_[0]);
    case Kind::Plane:
      return zero();
  }
  return zero();
}

ConvexCone2D ConvexCone2D::intersect(const ConvexCone2D& other) const {
  std::vector<Vec2> a = constraints();
  const std::vector<Vec2> b = other.constraints();
  a.insert(a.end(), b.begin(), b.end());
  return hull(a).polar();
}

std::string ConvexCone2D::describe() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::Ray:
      return "ray" + str(data_[0]);
    case Kind::Line:
      return "line" + str(data_[0]);
    case Kind::Sector:
      return "sector[" + str(data_[0]) + "," + str(data_[1]) + "]";
    case Kind::HalfPlane:
      return "halfplane" + str(data_[0]);
    case Kind::Plane:
      return "plane";
  }
  return {};
}

Cone2D& Cone2D::add(ConvexCone2D c) {
  if (std::find(parts_.begin(), parts_.end(), c) == parts_.end()) parts_.push_back(std::move(c));
  return *this;
}

Cone2D& Cone2D::unite(const Cone2D& other) {
  for (const auto& c : other.parts_) add(c);
  return *this;
}

bool Cone2D::contains(const Vec2& p) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const ConvexCone2D& c) { return c.contains(p); });
}

ConvexCone2D Cone2D::polar() const {
  ConvexCone2D out = ConvexCone2D::plane();
  for (const auto& c : parts_) out = out.intersect(c.polar());
  return out;
}

bool Cone2D::same_set(const Cone2D& other) const {
  if (parts_.empty() != other.parts_.empty()) return false;
  if (parts_.empty()) return true;
  std::vector<Vec2> dirs{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto* u : {this, &other}) {
    for (const auto& c : u->parts_) {
      for (const auto& g : c.generators()) {
        dirs.push_back(g);
        dirs.push_back(-g);
      }
    }
  }
  dirs = sorted_directions(dirs);
  const std::size_t n = dirs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 mid = dirs[i] + dirs[(i + 1) % n];
    if (contains(dirs[i]) != other.contains(dirs[i])) return false;
    if (contains(mid) != other.contains(mid)) return false;
  }
  return contains({0, 0}) == other.contains({0, 0});
}

std::string Cone2D::describe() const {
  if (parts_.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += " U ";
    out += parts_[i].describe();
  }
  return out;
}

}  // namespace varkit
