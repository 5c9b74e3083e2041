#include "varkit/types.hpp"

#include <cmath>

#include "varkit/errors.hpp"
#include "varkit/ext_real.hpp"

namespace varkit {

Box::Box(Point lo_, Point hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw Error(Errc::DimensionMismatch, "box bounds must have equal positive dimension");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i])
      throw Error(Errc::DegenerateBox, "box bounds must be finite with lo <= hi");
  }
}

Box Box::cube(int dim, double lo, double hi) {
  return Box(Point::Constant(dim, lo), Point::Constant(dim, hi));
}

bool Box::contains(const Point& x) const {
  if (x.size() != lo.size()) return false;
  return ((x.array() >= lo.array()) && (x.array() <= hi.array())).all();
}

std::string format_point(const Point& p) {
  std::string out;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) out += ';';
    out += format_double(p[i]);
  }
  return out;
}

}  // namespace varkit
