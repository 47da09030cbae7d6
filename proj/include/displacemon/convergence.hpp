#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "displacemon/core.hpp"

namespace displacemon::convergence {

using Observables = std::map<std::string, double>;
using Scenario = std::function<Observables(int dim)>;

struct ConvergenceReport {
    std::vector<int> dims;
    std::vector<Observables> values;
    double max_deviation = 0.0;
    std::string worst_observable;
    bool passed = false;
};

// Rerun a scenario across truncation dimensions (typically dim and 2*dim)
// and report the largest drift of any observable between consecutive runs.
inline ConvergenceReport converge_check(const Scenario& scenario,
                                        const std::vector<int>& dims, double tol,
                                        bool throw_on_failure = true) {
    if (dims.size() < 2) throw SimError("converge_check: need at least two dims");
    ConvergenceReport report;
    report.dims = dims;
    for (int dim : dims) report.values.push_back(scenario(dim));
    for (std::size_t i = 1; i < report.values.size(); ++i) {
        for (const auto& [name, value] : report.values[i]) {
            const auto prev = report.values[i - 1].find(name);
            if (prev == report.values[i - 1].end())
                throw SimError("converge_check: observable sets differ between dims");
            const double dev = std::abs(value - prev->second);
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.worst_observable = name;
            }
        }
    }
    report.passed = report.max_deviation < tol;
    if (!report.passed && throw_on_failure)
        throw NotConverged("converge_check: '" + report.worst_observable + "' drifts by " +
                           std::to_string(report.max_deviation));
    return report;
}

} // namespace displacemon::convergence
