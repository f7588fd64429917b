#ifndef SFCM_REPORT_HPP
#define SFCM_REPORT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sfcm/engines.hpp"

namespace sfcm {

using Json = nlohmann::ordered_json;

struct RunMetrics {
    double misclassification_rate = 0.0;
    std::size_t isolated_pixels = 0;
};

/// Summary of one engine run, as written to *_report.json and inside compare reports.
struct RunReport {
    std::string algorithm;
    ClusterParams params;
    std::size_t iterations_run = 0;
    bool converged = false;
    double final_objective = 0.0;
    double final_max_delta = 0.0;
    std::vector<double> centroids;
    Diagnostics diagnostics;
    /// Set only when timing was requested.
    std::optional<double> wall_time_ms;
    /// Role -> path, in insertion order.
    std::vector<std::pair<std::string, std::string>> outputs;
    /// Present iff a truth map was supplied.
    std::optional<RunMetrics> metrics;
};

RunReport make_report(Algorithm algo, const SegmentationResult& result);

Json to_json(const ClusterParams& params);
Json to_json(const RunReport& report);

/// Serializes with every floating-point number in plain decimal notation.
std::string dump_json(const Json& value, int indent = 2);

}  // namespace sfcm

#endif  // SFCM_REPORT_HPP
