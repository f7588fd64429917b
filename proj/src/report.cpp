#include "sfcm/report.hpp"

#include "sfcm/imageio.hpp"

namespace sfcm {

RunReport make_report(Algorithm algo, const SegmentationResult& result) {
    RunReport r;
    r.algorithm = std::string(algorithm_name(algo));
    r.params = result.params;
    r.iterations_run = result.iterations_run;
    r.converged = result.converged;
    if (!result.trace.empty()) {
        r.final_objective = result.trace.back().objective;
        r.final_max_delta = result.trace.back().max_delta;
    }
    r.centroids = result.centroids.values;
    r.diagnostics = result.diagnostics;
    return r;
}

Json to_json(const ClusterParams& params) {
    Json init;
    if (const auto* list = std::get_if<ExplicitInit>(&params.init)) {
        init["kind"] = "list";
        init["values"] = list->values;
    } else {
        init["kind"] = "random";
    }
    return Json{{"clusters", params.clusters},
                {"fuzziness", params.fuzziness},
                {"p", params.membership_exponent},
                {"q", params.spatial_exponent},
                {"radius", params.radius},
                {"epsilon", params.epsilon},
                {"max_iter", params.max_iter},
                {"init", init},
                {"seed", params.seed}};
}

Json to_json(const RunReport& report) {
    Json j;
    j["algorithm"] = report.algorithm;
    j["params"] = to_json(report.params);
    j["iterations_run"] = report.iterations_run;
    j["converged"] = report.converged;
    j["final_objective"] = report.final_objective;
    j["final_max_delta"] = report.final_max_delta;
    j["centroids"] = report.centroids;
    j["wall_time_ms"] = report.wall_time_ms ? Json(*report.wall_time_ms) : Json(nullptr);
    Json outputs = Json::object();
    for (const auto& [role, path] : report.outputs) outputs[role] = path;
    j["outputs"] = outputs;
    j["diagnostics"] = {{"duplicate_init", report.diagnostics.duplicate_init},
                        {"modulation_fallback_rows", report.diagnostics.modulation_fallback_rows}};
    if (report.metrics) {
        j["metrics"] = {{"misclassification_rate", report.metrics->misclassification_rate},
                        {"isolated_pixels", report.metrics->isolated_pixels}};
    }
    return j;
}

namespace {

void dump(const Json& v, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };

    switch (v.type()) {
        case Json::value_t::number_float:
            out += format_decimal(v.get<double>());
            return;
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(key).dump();
                out += indent < 0 ? ":" : ": ";
                dump(item, indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump(item, indent, depth + 1, out);
            }
            newline(depth);
            out += ']';
            return;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
    std::string out;
    dump(value, indent, 0, out);
    out += '\n';
    return out;
}

}  // namespace sfcm
