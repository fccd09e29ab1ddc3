#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccn/model.hpp"

namespace ccn::verify {

enum class Level { quick, full };

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // counterexample description on failure
};

struct Check {
    std::string name;
    std::function<CheckResult(Level)> run;
};

/// The registered property suites, one per proposition-backed invariant.
const std::vector<Check>& checks();

/// The expected suite names; checks() must match it exactly so a new
/// operation cannot ship without a registered property check.
std::vector<std::string> manifest();

/// Runs every suite, printing one line per check; returns false on any
/// failure or on a manifest mismatch.
bool run_all(Level level, std::ostream& out);

/// Straight-loop label-propagation reference for the zeroth-order path
/// (closed neighborhoods, shared weights, ReLU, sum readout). Kept free of
/// the tensor machinery so it can serve as an independent oracle.
std::vector<real_t> zeroth_order_reference(const Graph& g, const CcnModel& model,
                                           const FeatureMatrix& features);

} // namespace ccn::verify
