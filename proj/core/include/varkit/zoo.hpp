#pragma once

#include <map>
#include <string>
#include <vector>

#include "varkit/exact_calculus.hpp"
#include "varkit/oracle.hpp"

namespace varkit {

/// Named numeric parameters as text, so that rationals like "1/3" stay exact
/// for 1-D entries. Vectors and matrices are flattened row-major.
using ZooParams = std::map<std::string, std::vector<std::string>>;

struct ZooEntry {
  std::string name;
  std::string description;
  FunctionOracle oracle;
  Truth truth;
  Box default_box;
  /// Human-readable reason for a "not weakly convex" truth, if any.
  std::string impossibility_witness;
};

/// Registered names in listing order.
const std::vector<std::string>& zoo_names();

/// One-line description of a registered name. Throws UnknownName.
const std::string& zoo_description(const std::string& name);

/// Builds an entry. `dimension` 0 means the entry's default (1, or the size
/// implied by the parameters). Throws UnknownName or InvalidArgument.
ZooEntry zoo_get(const std::string& name, const ZooParams& params = {}, int dimension = 0);

/// Exact limiting subdifferential of an entry. Throws NoAnalyticForm.
SubdiffSet subdiff_analytic(const ZooEntry& entry, const Point& x);

/// gph of the subdifferential of the function that is 1 off the origin and 0
/// at it: the horizontal axis together with the vertical axis.
SubdiffGraph1D unit_except_origin_graph();

}  // namespace varkit
