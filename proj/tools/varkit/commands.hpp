#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace varkit::cli {

struct CertifyOptions {
  std::string function;
  std::string method = "all";
  std::optional<double> kappa;
  int samples = 64;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  double lambda = 1.0;
  int triples = 10000;
  std::string out;
  /// 0 means the default worker count.
  int workers = 0;
  bool timings = false;
};

/// Exit code: 0 consistent/proved, 1 refuted, 2 inconclusive/gate_failed,
/// 3 error.
int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err);

struct ProbeOptions {
  std::string function;
  std::string what;
  std::string at;
  std::string v;
  std::string w;
  std::optional<double> tau;
  double lambda = 1.0;
  int samples = 64;
  std::uint64_t seed = 1;
};

/// CSV headers:
///   delta2, d2: row,x,v,w,tau,u,value
///   graphical:  x,v,w,t,w_probe,z,pairing
///   envelope:   x,lambda,prox,envelope,gradient
/// Points are ';'-joined coordinates.
int cmd_probe(const ProbeOptions& opt, std::ostream& out, std::ostream& err);

int cmd_zoo_list(std::ostream& out);
int cmd_zoo_show(const std::string& name, std::ostream& out, std::ostream& err);

/// Full command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// One RFC-4180 field.
std::string csv_field(const std::string& s);

}  // namespace varkit::cli
