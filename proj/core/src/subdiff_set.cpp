#include "varkit/subdiff_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varkit/errors.hpp"
#include "varkit/ext_real.hpp"

namespace varkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point project_box(const SubdiffSet::Piece& p, const Point& v) {
  return v.cwiseMax(p.lo).cwiseMin(p.hi);
}

Point project_hull(const std::vector<Point>& verts, const Point& v) {
  if (verts.size() == 1) return verts.front();
  if (verts.size() == 2) {
    const Point d = verts[1] - verts[0];
    const double dd = d.squaredNorm();
    if (dd == 0.0) return verts[0];
    const double t = std::clamp((v - verts[0]).dot(d) / dd, 0.0, 1.0);
    return verts[0] + t * d;
  }
  // Frank-Wolfe with exact line search; hulls here have a handful of vertices.
  Point x = verts[0];
  for (int it = 0; it < 500; ++it) {
    const Point grad = x - v;
    std::size_t best = 0;
    double best_val = kInf;
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const double val = grad.dot(verts[k]);
      if (val < best_val) {
        best_val = val;
        best = k;
      }
    }
    const Point d = verts[best] - x;
    const double dd = d.squaredNorm();
    if (dd == 0.0) break;
    const double gap = -grad.dot(d);
    if (gap <= 1e-15) break;
    x += std::clamp(gap / dd, 0.0, 1.0) * d;
  }
  return x;
}

Point project_piece(const SubdiffSet::Piece& p, const Point& v) {
  return p.kind == SubdiffSet::Piece::Kind::Box ? project_box(p, v) : project_hull(p.vertices, v);
}

// Fractions of the selection radius tried along each axis.
constexpr double kLadder[] = {1.0, 0.5, 0.25, 1.0 / 16, 1.0 / 256};

}  // namespace

SubdiffSet SubdiffSet::point(const Point& p) { return box(p, p); }

SubdiffSet SubdiffSet::box(const Point& lo, const Point& hi) {
  if (lo.size() != hi.size()) throw Error(Errc::DimensionMismatch, "box bounds differ in dimension");
  SubdiffSet s(static_cast<int>(lo.size()));
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
      throw Error(Errc::InvalidArgument, "subdifferential box with lo > hi");
  }
  s.pieces_.push_back(Piece{Piece::Kind::Box, lo, hi, {}});
  return s;
}

SubdiffSet SubdiffSet::hull(std::vector<Point> vertices) {
  if (vertices.empty()) throw Error(Errc::InvalidArgument, "hull of no points");
  SubdiffSet s(static_cast<int>(vertices.front().size()));
  if (vertices.size() == 1) return point(vertices.front());
  s.pieces_.push_back(Piece{Piece::Kind::Hull, {}, {}, std::move(vertices)});
  return s;
}

SubdiffSet SubdiffSet::interval(double lo, double hi) {
  return box(Point::Constant(1, lo), Point::Constant(1, hi));
}

SubdiffSet& SubdiffSet::unite(const SubdiffSet& other) {
  if (other.dim_ != dim_) throw Error(Errc::DimensionMismatch, "union of sets of different dimension");
  pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
  return *this;
}

bool SubdiffSet::is_singleton() const {
  if (pieces_.empty()) return false;
  const Point first = anchors().front();
  for (const auto& p : pieces_) {
    if (p.kind == Piece::Kind::Box) {
      if (p.lo != p.hi || p.lo != first) return false;
    } else {
      for (const auto& v : p.vertices)
        if (v != first) return false;
    }
  }
  return true;
}

bool SubdiffSet::is_bounded() const {
  for (const auto& p : pieces_) {
    if (p.kind == Piece::Kind::Box && (!p.lo.allFinite() || !p.hi.allFinite())) return false;
  }
  return true;
}

Point SubdiffSet::project(const Point& v) const {
  if (pieces_.empty()) throw Error(Errc::InvalidArgument, "projection onto an empty set");
  Point best = project_piece(pieces_.front(), v);
  double best_d = (best - v).squaredNorm();
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    Point p = project_piece(pieces_[k], v);
    const double d = (p - v).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = std::move(p);
    }
  }
  return best;
}

double SubdiffSet::distance(const Point& v) const {
  if (pieces_.empty()) return kInf;
  return (project(v) - v).norm();
}

bool SubdiffSet::contains(const Point& v, double tol) const { return distance(v) <= tol; }

SubdiffSet SubdiffSet::translated(const Point& d) const {
  SubdiffSet out(dim_);
  for (const auto& p : pieces_) {
    Piece q = p;
    if (q.kind == Piece::Kind::Box) {
      q.lo += d;
      q.hi += d;
    } else {
      for (auto& v : q.vertices) v += d;
    }
    out.pieces_.push_back(std::move(q));
  }
  return out;
}

std::vector<Point> SubdiffSet::selections_near(const Point& center, double radius) const {
  std::vector<Point> out;
  auto push = [&](const Point& p) {
    if ((p - center).norm() > radius) return;
    for (const auto& q : out)
      if (q == p) return;
    out.push_back(p);
  };
  for (const auto& piece : pieces_) {
    const Point proj = project_piece(piece, center);
    if ((proj - center).norm() > radius) continue;
    push(proj);
    if (piece.kind == Piece::Kind::Hull) {
      for (const auto& v : piece.vertices) push(v);
      continue;
    }
    for (int i = 0; i < dim_; ++i) {
      if (std::isfinite(piece.lo[i])) {
        Point p = proj;
        p[i] = piece.lo[i];
        push(p);
      }
      if (std::isfinite(piece.hi[i])) {
        Point p = proj;
        p[i] = piece.hi[i];
        push(p);
      }
      if (piece.lo[i] == piece.hi[i]) continue;
      for (double frac : kLadder) {
        for (double sgn : {1.0, -1.0}) {
          Point p = proj;
          p[i] = std::clamp(proj[i] + sgn * frac * radius, piece.lo[i], piece.hi[i]);
          push(p);
        }
      }
    }
  }
  return out;
}

std::vector<Point> SubdiffSet::anchors(double spread) const {
  std::vector<Point> out;
  for (const auto& piece : pieces_) {
    if (piece.kind == Piece::Kind::Hull) {
      Point c = Point::Zero(dim_);
      for (const auto& v : piece.vertices) {
        out.push_back(v);
        c += v;
      }
      out.push_back(c / static_cast<double>(piece.vertices.size()));
      continue;
    }
    Point lo = piece.lo, hi = piece.hi;
    for (int i = 0; i < dim_; ++i) {
      const bool flo = std::isfinite(lo[i]), fhi = std::isfinite(hi[i]);
      if (!flo && !fhi) {
        lo[i] = -spread;
        hi[i] = spread;
      } else if (!flo) {
        lo[i] = hi[i] - spread;
      } else if (!fhi) {
        hi[i] = lo[i] + spread;
      }
    }
    out.push_back(lo);
    if (hi != lo) {
      out.push_back(hi);
      out.push_back(0.5 * (lo + hi));
    }
  }
  return out;
}

Point SubdiffSet::sample(Rng& rng, double spread) const {
  if (pieces_.empty()) throw Error(Errc::InvalidArgument, "sample from an empty set");
  const auto& piece = pieces_[rng.below(pieces_.size())];
  if (piece.kind == Piece::Kind::Hull) {
    Point acc = Point::Zero(dim_);
    double total = 0.0;
    for (const auto& v : piece.vertices) {
      const double wgt = -std::log(rng.open_unit());
      acc += wgt * v;
      total += wgt;
    }
    return acc / total;
  }
  Point p(dim_);
  for (int i = 0; i < dim_; ++i) {
    const double lo = piece.lo[i], hi = piece.hi[i];
    const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
    if (flo && fhi) {
      p[i] = rng.uniform(lo, hi);
    } else if (flo) {
      p[i] = lo + spread * -std::log(rng.open_unit());
    } else if (fhi) {
      p[i] = hi - spread * -std::log(rng.open_unit());
    } else {
      p[i] = spread * rng.normal();
    }
  }
  return p;
}

std::string SubdiffSet::describe() const {
  if (pieces_.empty()) return "{}";
  std::string out;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (k) out += " U ";
    const auto& p = pieces_[k];
    if (p.kind == Piece::Kind::Hull) {
      out += "conv{";
      for (std::size_t j = 0; j < p.vertices.size(); ++j) {
        if (j) out += ", ";
        out += "(" + format_point(p.vertices[j]) + ")";
      }
      out += "}";
    } else if (p.lo == p.hi) {
      out += "{(" + format_point(p.lo) + ")}";
    } else {
      out += "[(" + format_point(p.lo) + "), (" + format_point(p.hi) + ")]";
    }
  }
  return out;
}

}  // namespace varkit
