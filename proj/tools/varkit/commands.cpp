#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "spec_doc.hpp"
#include "varkit/certifier.hpp"
#include "varkit/errors.hpp"
#include "varkit/estimators.hpp"
#include "varkit/moreau.hpp"
#include "varkit/parallel.hpp"
#include "varkit/sampling.hpp"
#include "varkit/zoo.hpp"

#ifndef VARKIT_VERSION
#define VARKIT_VERSION "0.0.0"
#endif

namespace varkit::cli {
namespace {

constexpr int kErrorExit = 3;

int resolve_workers(int requested) {
  const int cap = default_workers();
  return requested > 0 ? std::min(requested, cap) : cap;
}

Point parse_point(const std::string& text, int dim, const std::string& flag) {
  if (text.empty()) throw Error(Errc::InvalidArgument, flag + " is required");
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, flag + ": cannot read '" + item + "' as a number");
    }
  }
  if (static_cast<int>(vals.size()) != dim)
    throw Error(Errc::DimensionMismatch, flag + " has " + std::to_string(vals.size()) + " coordinates, expected " +
                                             std::to_string(dim));
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = vals[static_cast<std::size_t>(i)];
  return p;
}

std::string cell(double x) { return csv_field(format_double(x)); }
std::string cell(const Point& p) { return csv_field(format_point(p)); }
std::string cell(const SecondOrderValue& v) { return csv_field(v.to_string()); }

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const FunctionSpecDoc spec = load_spec_file(opt.function);
    const BuiltFunction fn = build_function(spec);
    CertifyConfig cfg;
    cfg.box = fn.box;
    cfg.method = opt.method;
    cfg.samples = opt.samples;
    cfg.seed = opt.seed;
    cfg.tol = opt.tol;
    cfg.lambda = opt.lambda;
    cfg.triples = opt.triples;
    cfg.workers = resolve_workers(opt.workers);
    if (opt.kappa && *opt.kappa < 0) throw Error(Errc::InvalidArgument, "--kappa must be nonnegative");

    const auto t0 = std::chrono::steady_clock::now();
    const CertificateReport rep = opt.kappa && *opt.kappa > 0 ? certify_strong(fn.oracle, *opt.kappa, cfg)
                                                              : certify_convexity(fn.oracle, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Timings timings{{"certify", secs}};
    const std::string doc = render_report(report_to_json(rep, spec, cfg, opt.timings ? &timings : nullptr));
    if (opt.out.empty()) {
      out << doc;
    } else {
      std::ofstream f(opt.out, std::ios::binary);
      if (!f) throw Error(Errc::InvalidArgument, "cannot write '" + opt.out + "'");
      f << doc;
      out << to_string(rep.overall) << ": " << rep.summary << "\n";
    }
    return rep.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kErrorExit;
  }
}

int cmd_probe(const ProbeOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const FunctionSpecDoc spec = load_spec_file(opt.function);
    const BuiltFunction fn = build_function(spec);
    const int n = fn.oracle.dimension();
    const Point x = parse_point(opt.at, n, "--at");
    const GridConfig g;

    if (opt.what == "envelope") {
      const EnvelopeHandle h(fn.oracle, opt.lambda, fn.box);
      out << "x,lambda,prox,envelope,gradient\n";
      out << cell(x) << ',' << cell(opt.lambda) << ',' << cell(h.prox(x)) << ',' << cell(h.envelope(x)) << ','
          << cell(h.gradient(x)) << "\n";
      return 0;
    }

    const Point v = parse_point(opt.v, n, "--v");
    const Point w = parse_point(opt.w, n, "--w");
    if (opt.what == "delta2") {
      out << "row,x,v,w,tau,u,value\n";
      std::vector<double> taus;
      if (opt.tau) {
        taus.push_back(*opt.tau);
      } else {
        for (int k = 0; k < g.depth; ++k) taus.push_back(g.tau(k));
      }
      for (std::size_t k = 0; k < taus.size(); ++k) {
        const ExtReal q = delta2(fn.oracle, x, v, taus[k], w);
        out << k << ',' << cell(x) << ',' << cell(v) << ',' << cell(w) << ',' << cell(taus[k]) << ',' << cell(w) << ','
            << csv_field(q.to_string()) << "\n";
      }
      return 0;
    }
    if (opt.what == "d2") {
      const D2Estimate est = second_subderivative(fn.oracle, x, v, w, g);
      out << "row,x,v,w,tau,u,value\n";
      for (std::size_t k = 0; k < est.trace.size(); ++k) {
        const auto& l = est.trace[k];
        out << k << ',' << cell(x) << ',' << cell(v) << ',' << cell(w) << ',' << cell(l.tau) << ','
            << cell(l.argmin_u) << ',' << cell(l.level_min) << "\n";
      }
      out << "estimate," << cell(x) << ',' << cell(v) << ',' << cell(w) << ',' << cell(est.tau) << ',' << cell(est.u)
          << ',' << cell(est.value) << "\n";
      return 0;
    }
    if (opt.what == "graphical") {
      std::vector<SubgradientPair> pairs;
      if (!fn.oracle.has_subdiff())
        pairs = sample_subgradient_pairs(fn.oracle, fn.box, opt.lambda, opt.samples, opt.seed);
      const SubgradientPair base{x, v, 0.0};
      const auto probes =
          graphical_derivative_probe(fn.oracle.has_subdiff() ? &fn.oracle : nullptr, pairs, base, w, g);
      out << "x,v,w,t,w_probe,z,pairing\n";
      for (const auto& r : probes)
        out << cell(x) << ',' << cell(v) << ',' << cell(w) << ',' << cell(r.t) << ',' << cell(r.w_probe) << ','
            << cell(r.z) << ',' << cell(r.pairing) << "\n";
      return 0;
    }
    throw Error(Errc::InvalidArgument, "--what must be one of delta2, d2, graphical, envelope");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kErrorExit;
  }
}

int cmd_zoo_list(std::ostream& out) {
  for (const auto& name : zoo_names()) out << name << '\t' << zoo_description(name) << "\n";
  return 0;
}

int cmd_zoo_show(const std::string& name, std::ostream& out, std::ostream& err) {
  try {
    const ZooEntry e = zoo_get(name);
    out << "name: " << e.name << "\n";
    out << "description: " << e.description << "\n";
    out << "dimension: " << e.oracle.dimension() << "\n";
    out << "truth: " << e.truth.describe() << "\n";
    out << "default box: [" << format_point(e.default_box.lo) << "] x [" << format_point(e.default_box.hi) << "]\n";
    out << "capabilities: value" << (e.oracle.has_subdiff() ? ", subdifferential" : "")
        << (e.oracle.has_prox() ? ", prox" : "") << (e.oracle.piecewise() ? ", piecewise" : "") << "\n";
    if (!e.impossibility_witness.empty()) out << "witness: " << e.impossibility_witness << "\n";
    return 0;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kErrorExit;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convexity certification for extended-real-valued functions", "varkit"};
  app.set_version_flag("--version", VARKIT_VERSION);
  app.require_subcommand(1);

  CertifyOptions copt;
  auto* certify = app.add_subcommand("certify", "Certify convexity, or strong convexity with --kappa");
  certify->add_option("--function", copt.function, "Function spec (JSON)")->required();
  certify->add_option("--method", copt.method, "Route")
      ->check(CLI::IsMember({"all", "graphical", "subderivative", "coderivative", "moreau", "segment", "exact1d"}));
  certify->add_option("--kappa", copt.kappa, "Strong convexity modulus");
  certify->add_option("--samples", copt.samples, "Subgradient pairs per route")->check(CLI::PositiveNumber);
  certify->add_option("--seed", copt.seed, "Seed");
  certify->add_option("--tol", copt.tol, "Tolerance")->check(CLI::NonNegativeNumber);
  certify->add_option("--lambda", copt.lambda, "Moreau parameter")->check(CLI::PositiveNumber);
  certify->add_option("--triples", copt.triples, "Segment triples")->check(CLI::PositiveNumber);
  certify->add_option("--out", copt.out, "Report path (default: stdout)");
  certify->add_option("--workers", copt.workers, "Worker threads (capped by VARKIT_WORKERS)");
  certify->add_flag("--timings", copt.timings, "Include wall-clock timings in the report");

  ProbeOptions popt;
  auto* probe = app.add_subcommand("probe", "Emit estimator probes as CSV");
  probe->add_option("--function", popt.function, "Function spec (JSON)")->required();
  probe->add_option("--what", popt.what, "delta2 | d2 | graphical | envelope")
      ->required()
      ->check(CLI::IsMember({"delta2", "d2", "graphical", "envelope"}));
  probe->add_option("--at", popt.at, "Base point x (comma-separated)")->required();
  probe->add_option("--v", popt.v, "Subgradient v");
  probe->add_option("--w", popt.w, "Direction w");
  probe->add_option("--tau", popt.tau, "Single tau for delta2")->check(CLI::PositiveNumber);
  probe->add_option("--lambda", popt.lambda, "Moreau parameter")->check(CLI::PositiveNumber);
  probe->add_option("--samples", popt.samples, "Sampled pairs without a subdifferential");
  probe->add_option("--seed", popt.seed, "Seed");

  auto* zoo = app.add_subcommand("zoo", "Registered test functions");
  zoo->require_subcommand(1);
  zoo->add_subcommand("list", "List entries");
  std::string show_name;
  auto* show = zoo->add_subcommand("show", "Show one entry");
  show->add_option("name", show_name, "Entry name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << VARKIT_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kErrorExit;
  }
  if (certify->parsed()) return cmd_certify(copt, out, err);
  if (probe->parsed()) return cmd_probe(popt, out, err);
  if (show->parsed()) return cmd_zoo_show(show_name, out, err);
  return cmd_zoo_list(out);
}

}  // namespace varkit::cli
