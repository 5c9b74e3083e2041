#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spec_doc.hpp"
#include "varkit/certifier.hpp"

namespace varkit::cli {

inline constexpr const char* kReportSchema = "varkit.report/1";

using Timings = std::vector<std::pair<std::string, double>>;

/// Non-finite numbers become the strings "inf", "-inf" and "nan".
Json number(double x);

Json witness_to_json(const Witness& w);
Json modulus_to_json(const ModulusEstimate& m, double tol);

/// Report document. Worker count is not echoed so that the document does
/// not depend on it; timings are included only when given.
Json report_to_json(const CertificateReport& rep, const FunctionSpecDoc& spec, const CertifyConfig& cfg,
                    const Timings* timings = nullptr);

std::string render_report(const Json& j);

}  // namespace varkit::cli
