#include "varkit/ext_real.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "varkit/errors.hpp"

namespace varkit {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CapabilityMissing: return "CapabilityMissing";
    case Errc::ProxDiverged: return "ProxDiverged";
    case Errc::InnerSolverFailed: return "InnerSolverFailed";
    case Errc::UnknownName: return "UnknownName";
    case Errc::NoAnalyticForm: return "NoAnalyticForm";
    case Errc::BasePointInfeasible: return "BasePointInfeasible";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::PointNotOnGraph: return "PointNotOnGraph";
    case Errc::NotASubgradient: return "NotASubgradient";
    case Errc::DegenerateBox: return "DegenerateBox";
    case Errc::SpecParseError: return "SpecParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ExtReal::ExtReal(double v) {
  if (std::isnan(v)) throw Error(Errc::InvalidArgument, "ExtReal from NaN");
  if (v == -std::numeric_limits<double>::infinity())
    throw Error(Errc::InvalidArgument, "ExtReal cannot hold -infinity");
  if (std::isinf(v)) {
    inf_ = true;
  } else {
    v_ = v;
  }
}

double ExtReal::value() const {
  if (inf_) throw Error(Errc::InvalidArgument, "value() of +infinity");
  return v_;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) noexcept {
  if (a.inf_ || b.inf_) return ExtReal::infinity();
  return ExtReal(a.v_ + b.v_);
}

ExtReal operator+(const ExtReal& a, double b) noexcept {
  if (a.inf_) return a;
  return ExtReal(a.v_ + b);
}

std::string ExtReal::to_string() const { return inf_ ? "+inf" : format_double(v_); }

std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << x.to_string(); }

SecondOrderValue::SecondOrderValue(double v) {
  if (std::isnan(v)) throw Error(Errc::InvalidArgument, "SecondOrderValue from NaN");
  if (std::isinf(v)) {
    kind_ = v > 0 ? Kind::PlusInf : Kind::MinusInf;
  } else {
    v_ = v;
  }
}

double SecondOrderValue::value() const {
  if (kind_ != Kind::Finite) throw Error(Errc::InvalidArgument, "value() of an infinite second-order value");
  return v_;
}

std::string SecondOrderValue::to_string() const {
  switch (kind_) {
    case Kind::PlusInf: return "+inf";
    case Kind::MinusInf: return "-inf";
    default: return format_double(v_);
  }
}

std::ostream& operator<<(std::ostream& os, const SecondOrderValue& x) { return os << x.to_string(); }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

}  // namespace varkit
