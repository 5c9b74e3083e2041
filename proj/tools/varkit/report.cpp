#include "report.hpp"

#include <cmath>

#include "varkit/ext_real.hpp"

#ifndef VARKIT_VERSION
#define VARKIT_VERSION "0.0.0"
#endif

namespace varkit::cli {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json point(const Point& p) { return numbers({p.data(), p.data() + p.size()}); }

Json config_to_json(const CertifyConfig& c) {
  return Json{{"method", c.method},
              {"samples", c.samples},
              {"seed", c.seed},
              {"tol", c.tol},
              {"lambda", c.lambda},
              {"triples", c.triples},
              {"rho_max", c.rho_max},
              {"d2_pairs", c.d2_pairs},
              {"envelope_points", c.envelope_points},
              {"fd_step", c.fd_step},
              {"moreau_pairs", c.moreau_pairs},
              {"tilt_cross_check", c.tilt_cross_check},
              {"grid",
               {{"tau0", c.grid.tau0},
                {"ratio", c.grid.ratio},
                {"depth", c.grid.depth},
                {"delta", c.grid.delta},
                {"samples", c.grid.samples},
                {"z_radius", c.grid.z_radius},
                {"tail", c.grid.tail},
                {"divergence", c.grid.divergence}}},
              {"box", {{"lo", point(c.box.lo)}, {"hi", point(c.box.hi)}}}};
}

}  // namespace

Json witness_to_json(const Witness& w) {
  Json data = Json::object();
  for (const auto& f : w.data) data[f.key] = numbers(f.values);
  Json j{{"kind", w.kind},
         {"value", number(w.value)},
         {"threshold", number(w.threshold)},
         {"recipe", w.recipe},
         {"data", data}};
  if (!w.exact.empty()) {
    Json ex = Json::object();
    for (const auto& [k, v] : w.exact) ex[k] = v;
    j["exact"] = ex;
  }
  return j;
}

Json modulus_to_json(const ModulusEstimate& m, double tol) {
  const auto rho = m.rho_hat();
  return Json{{"s_hat", number(m.s_hat)},
              {"tolerance", tol},
              {"rounding_bound", number(m.rounding_bound)},
              {"evidence", m.evidence_name()},
              {"rho_hat", rho ? number(*rho) : Json(nullptr)},
              {"triple", {{"x", point(m.x)}, {"y", point(m.y)}, {"lambda", m.lambda}}},
              {"samples", m.samples},
              {"seed", m.seed},
              {"refinement", numbers(m.refinement)},
              {"diverging", m.diverging}};
}

Json report_to_json(const CertificateReport& rep, const FunctionSpecDoc& spec, const CertifyConfig& cfg,
                    const Timings* timings) {
  Json j = Json::object();
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", "varkit"}, {"version", VARKIT_VERSION}};
  j["oracle"] = {{"name", rep.oracle_name}, {"dimension", rep.dimension}};
  j["function"] = spec_to_json(spec);
  j["mode"] = rep.mode;
  j["kappa"] = number(rep.kappa);
  j["seed"] = rep.seed;
  j["config"] = config_to_json(cfg);
  j["overall"] = {{"verdict", to_string(rep.overall)},
                  {"summary", rep.summary},
                  {"exit_code", rep.exit_code()},
                  {"gate_passed", rep.gate_passed}};
  j["modulus"] = rep.modulus ? modulus_to_json(*rep.modulus, cfg.tol) : Json(nullptr);
  Json methods = Json::array();
  for (const auto& m : rep.methods) {
    Json params = Json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    Json e{{"method", m.method},
           {"verdict", to_string(m.verdict)},
           {"probe_count", m.probe_count},
           {"statistic",
            {{"name", m.statistic_name},
             {"value", m.statistic ? number(*m.statistic) : Json(nullptr)},
             {"tolerance", m.tolerance}}},
           {"params", params},
           {"note", m.note},
           {"witness", m.witness ? witness_to_json(*m.witness) : Json(nullptr)}};
    methods.push_back(std::move(e));
  }
  j["methods"] = methods;
  j["tilt_agreement"] = rep.tilt_agreement ? Json(*rep.tilt_agreement) : Json(nullptr);
  j["notes"] = rep.notes;
  if (timings) {
    Json t = Json::object();
    for (const auto& [k, v] : *timings) t[k] = v;
    j["timings_seconds"] = t;
  }
  return j;
}

std::string render_report(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace varkit::cli
