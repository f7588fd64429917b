#include "sfcm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <future>
#include <limits>
#include <ostream>
#include <string_view>

#include "sfcm/core.hpp"
#include "sfcm/engines.hpp"
#include "sfcm/error.hpp"
#include "sfcm/imageio.hpp"
#include "sfcm/phantom.hpp"
#include "sfcm/report.hpp"

namespace sfcm {

namespace {

constexpr std::size_t kMaxScoredClusters = 8;

/// A flag value that parsed but does not make sense; maps to exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_real(std::string_view token, const std::string& flag) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw UsageError(flag + ": '" + std::string(token) + "' is not a number");
    }
    return value;
}

std::uint8_t parse_intensity(std::string_view token, const std::string& flag) {
    unsigned value = 0;
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != end || value > 255) {
        throw UsageError(flag + ": '" + std::string(token) + "' is not an intensity in 0..255");
    }
    return static_cast<std::uint8_t>(value);
}

CentroidInit parse_init(const std::string& text) {
    if (text == "random") return RandomInit{};
    constexpr std::string_view prefix = "list:";
    if (text.rfind(prefix, 0) != 0) throw UsageError("--init: expected 'random' or 'list:v1,v2,...'");
    ExplicitInit list;
    for (auto token : split(std::string_view(text).substr(prefix.size()), ',')) {
        list.values.push_back(parse_real(token, "--init"));
    }
    return list;
}

NoiseModel parse_noise(const std::string& text) {
    if (text == "none") return NoNoise{};
    const auto colon = text.find(':');
    const auto kind = text.substr(0, colon);
    if (colon == std::string::npos || (kind != "salt" && kind != "gauss")) {
        throw UsageError("--noise: expected none, salt:FRACTION or gauss:SIGMA");
    }
    const double value = parse_real(std::string_view(text).substr(colon + 1), "--noise");
    if (kind == "salt") {
        if (!(value >= 0.0 && value < 1.0)) throw UsageError("--noise: salt fraction must be in [0, 1)");
        return SaltNoise{value};
    }
    if (!(value >= 0.0)) throw UsageError("--noise: gaussian sigma must be >= 0");
    return GaussianNoise{value};
}

struct EngineFlags {
    std::size_t clusters = 0;
    double fuzziness = 2.0;
    std::size_t max_iter = 100;
    double epsilon = 1e-5;
    double p = 1.0;
    double q = 1.0;
    std::size_t radius = 1;
    std::string init = "random";
    std::uint64_t seed = 0;
    bool timing = false;

    ClusterParams params() const {
        ClusterParams out;
        out.clusters = clusters;
        out.fuzziness = fuzziness;
        out.max_iter = max_iter;
        out.epsilon = epsilon;
        out.membership_exponent = p;
        out.spatial_exponent = q;
        out.radius = radius;
        out.init = parse_init(init);
        out.seed = seed;
        if (const auto* list = std::get_if<ExplicitInit>(&out.init); list && list->values.size() != clusters) {
            throw UsageError("--init: list has " + std::to_string(list->values.size()) +
                             " values but --clusters is " + std::to_string(clusters));
        }
        return out;
    }
};

const CLI::Validator kAboveOne(
    [](std::string& s) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(s, v) || !(v > 1.0)) return "must be a number > 1";
        return {};
    },
    "> 1");

void add_engine_flags(CLI::App& cmd, EngineFlags& f) {
    cmd.add_option("--clusters", f.clusters, "number of clusters")->required()->check(CLI::Range(2, 256));
    cmd.add_option("--fuzziness", f.fuzziness, "fuzziness exponent m")->check(kAboveOne)->capture_default_str();
    cmd.add_option("--max-iter", f.max_iter, "iteration cap")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    cmd.add_option("--epsilon", f.epsilon, "membership-change tolerance")
        ->check(CLI::PositiveNumber)
        ->default_str("1e-5");
    cmd.add_option("--p", f.p, "membership exponent (sfcm)")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd.add_option("--q", f.q, "spatial exponent (sfcm)")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd.add_option("--radius", f.radius, "neighborhood radius (sfcm)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
        ->capture_default_str();
    cmd.add_option("--init", f.init, "random | list:v1,v2,... (raw intensity units)")->capture_default_str();
    cmd.add_option("--seed", f.seed, "seed for random initialization")->capture_default_str();
    cmd.add_flag("--timing", f.timing, "record wall time in reports (makes them non-reproducible)");
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "kmeans") return Algorithm::kmeans;
    if (name == "fcm") return Algorithm::fcm;
    return Algorithm::sfcm;
}

void check_sfcm_exponents(const EngineFlags& f) {
    if (f.p == 0.0 && f.q == 0.0) throw UsageError("--p/--q: exponents must not both be 0");
}

struct Truth {
    LabelMap labels;
    std::size_t classes = 0;
};

Truth load_truth(const std::string& path, const ImageGrid& input) {
    const auto image = load_grayscale_file(path);
    if (image.width != input.width || image.height != input.height) {
        throw ContractViolation("truth is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                                " but input is " + std::to_string(input.width) + "x" +
                                std::to_string(input.height));
    }
    Truth t{labels_from_gray_levels(image), 0};
    for (auto l : t.labels.labels) t.classes = std::max<std::size_t>(t.classes, l + 1);
    return t;
}

RunMetrics score(const LabelMap& pred, const Truth& truth, std::size_t clusters, std::size_t radius) {
    const std::size_t c = std::max(clusters, truth.classes);
    if (c > kMaxScoredClusters) {
        throw ParameterError("scoring against truth supports at most 8 classes, got " + std::to_string(c));
    }
    return {misclassification_rate(pred, truth.labels, c), isolated_pixel_count(pred, radius)};
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void print_summary(std::ostream& out, const RunReport& r, double ms) {
    out << r.algorithm << ": " << r.iterations_run << " iterations, converged=" << (r.converged ? "yes" : "no")
        << ", objective=" << format_significant(r.final_objective, 9);
    if (r.metrics) {
        out << ", misclassification=" << format_decimal(r.metrics->misclassification_rate)
            << ", isolated=" << r.metrics->isolated_pixels;
    }
    out << ", " << static_cast<long long>(ms + 0.5) << " ms\n";
}

struct SegmentFlags {
    std::string algo;
    std::string input;
    std::string out_prefix;
    std::string truth;
    EngineFlags engine;
};

int cmd_segment(const SegmentFlags& f, std::ostream& out) {
    const auto algo = parse_algorithm(f.algo);
    const auto params = f.engine.params();
    if (algo == Algorithm::sfcm) check_sfcm_exponents(f.engine);

    const auto image = load_grayscale_file(f.input);
    std::optional<Truth> truth;
    if (!f.truth.empty()) truth = load_truth(f.truth, image);

    const auto start = Clock::now();
    const auto result = run(algo, image, params);
    const double ms = elapsed_ms(start);

    auto report = make_report(algo, result);
    if (f.engine.timing) report.wall_time_ms = ms;
    if (truth) report.metrics = score(result.labels, *truth, params.clusters, params.radius);

    const std::string labels_path = f.out_prefix + "_labels.pgm";
    const std::string color_path = f.out_prefix + "_color.ppm";
    const std::string trace_path = f.out_prefix + "_trace.csv";
    const std::string report_path = f.out_prefix + "_report.json";

    write_file(labels_path, [&](std::ostream& o) { save_label_map(result.labels, params.clusters, o); });
    write_file(color_path,
               [&](std::ostream& o) { save_pseudocolor(result.labels, Palette::make_default(params.clusters), o); });
    report.outputs.emplace_back("labels", labels_path);
    report.outputs.emplace_back("color", color_path);
    if (algo != Algorithm::kmeans) {
        write_file(trace_path, [&](std::ostream& o) { write_convergence_csv(result.trace, o); });
        report.outputs.emplace_back("trace", trace_path);
    }
    report.outputs.emplace_back("report", report_path);
    write_file(report_path, [&](std::ostream& o) { o << dump_json(to_json(report)); });

    print_summary(out, report, ms);
    return kExitOk;
}

struct PhantomFlags {
    std::size_t width = 0;
    std::size_t height = 0;
    std::string bands;
    std::string discs;
    std::string noise = "none";
    std::uint64_t seed = 0;
    std::string out_image;
    std::string out_truth;
};

PhantomSpec phantom_spec(const PhantomFlags& f) {
    const auto noise = parse_noise(f.noise);
    if (!f.bands.empty()) {
        std::vector<std::uint8_t> levels;
        for (auto token : split(f.bands, ',')) levels.push_back(parse_intensity(token, "--bands"));
        if (levels.size() < 2) throw UsageError("--bands: need at least two bands");
        if (levels.size() > f.height) throw UsageError("--bands: more bands than image rows");
        return band_phantom(f.width, f.height, levels, noise, f.seed);
    }
    const auto tokens = split(f.discs, ',');
    const auto background = parse_intensity(tokens.front(), "--discs");
    std::vector<std::pair<double, std::uint8_t>> discs;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
        const auto colon = tokens[k].find(':');
        if (colon == std::string_view::npos) throw UsageError("--discs: expected RADIUS:INTENSITY after background");
        const double radius = parse_real(tokens[k].substr(0, colon), "--discs");
        if (!(radius > 0.0)) throw UsageError("--discs: radius must be positive");
        discs.emplace_back(radius, parse_intensity(tokens[k].substr(colon + 1), "--discs"));
    }
    if (discs.empty()) throw UsageError("--discs: need at least one disc besides the background");
    return disc_phantom(f.width, f.height, background, discs, noise, f.seed);
}

int cmd_phantom(const PhantomFlags& f, std::ostream& out) {
    Phantom phantom;
    std::size_t regions = 0;
    try {
        const auto spec = phantom_spec(f);
        regions = spec.regions.size();
        phantom = generate_phantom(spec);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    write_file(f.out_image, [&](std::ostream& o) { save_pgm(phantom.image, o); });
    write_file(f.out_truth, [&](std::ostream& o) { save_label_map(phantom.truth, regions, o); });
    out << "phantom " << f.width << "x" << f.height << " with " << regions << " regions written to " << f.out_image
        << "\n";
    return kExitOk;
}

struct CompareFlags {
    std::string input;
    std::string truth;
    std::string report;
    EngineFlags engine;
};

int cmd_compare(const CompareFlags& f, std::ostream& out) {
    const auto params = f.engine.params();
    check_sfcm_exponents(f.engine);

    const auto image = load_grayscale_file(f.input);
    const auto truth = load_truth(f.truth, image);
    const auto features = normalize_intensities(image);
    const auto init = init_centroids(params, features, image.bit_depth);

    constexpr std::array<Algorithm, 3> algos = {Algorithm::kmeans, Algorithm::fcm, Algorithm::sfcm};
    std::vector<std::future<std::pair<SegmentationResult, double>>> jobs;
    for (auto algo : algos) {
        jobs.push_back(std::async(std::launch::async, [&, algo] {
            const auto start = Clock::now();
            auto result = run(algo, features, image.width, image.height, params, init);
            return std::make_pair(std::move(result), elapsed_ms(start));
        }));
    }

    Json runs = Json::array();
    for (std::size_t k = 0; k < algos.size(); ++k) {
        const auto [result, ms] = jobs[k].get();
        auto report = make_report(algos[k], result);
        if (f.engine.timing) report.wall_time_ms = ms;
        report.metrics = score(result.labels, truth, params.clusters, params.radius);
        report.outputs.emplace_back("report", f.report);
        print_summary(out, report, ms);
        runs.push_back(to_json(report));
    }

    Json doc;
    doc["input"] = f.input;
    doc["truth"] = f.truth;
    doc["clusters"] = params.clusters;
    doc["shared_init"] = init.centroids.values;
    doc["runs"] = runs;
    write_file(f.report, [&](std::ostream& o) { o << dump_json(doc); });
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grayscale image segmentation with k-means, fuzzy c-means and spatial fuzzy c-means", "sfcm"};
    app.require_subcommand(1);

    SegmentFlags seg;
    auto* segment = app.add_subcommand("segment", "segment one image");
    segment->add_option("--algo", seg.algo, "kmeans | fcm | sfcm")
        ->required()
        ->check(CLI::IsMember({"kmeans", "fcm", "sfcm"}));
    segment->add_option("--input", seg.input, "grayscale PGM or PNG")->required();
    segment->add_option("--out-prefix", seg.out_prefix, "prefix for output files")->required();
    segment->add_option("--truth", seg.truth, "optional truth label map for scoring");
    add_engine_flags(*segment, seg.engine);

    PhantomFlags ph;
    auto* phantom = app.add_subcommand("phantom", "generate a synthetic phantom and its truth map");
    phantom->add_option("--width", ph.width)->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 15));
    phantom->add_option("--height", ph.height)->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 15));
    auto* bands = phantom->add_option("--bands", ph.bands, "band intensities top to bottom, e.g. 60,120,200");
    auto* discs = phantom->add_option("--discs", ph.discs, "BACKGROUND,RADIUS:INTENSITY,...");
    bands->excludes(discs);
    phantom->add_option("--noise", ph.noise, "none | salt:FRACTION | gauss:SIGMA")->capture_default_str();
    phantom->add_option("--seed", ph.seed)->capture_default_str();
    phantom->add_option("--out-image", ph.out_image)->required();
    phantom->add_option("--out-truth", ph.out_truth)->required();

    CompareFlags cmp;
    auto* compare = app.add_subcommand("compare", "run all three algorithms from one shared initialization");
    compare->add_option("--input", cmp.input)->required();
    compare->add_option("--truth", cmp.truth)->required();
    compare->add_option("--report", cmp.report, "JSON report path")->required();
    add_engine_flags(*compare, cmp.engine);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (phantom->parsed() && bands->empty() && discs->empty()) {
            throw UsageError("--bands or --discs is required");
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (segment->parsed()) return cmd_segment(seg, out);
        if (phantom->parsed()) return cmd_phantom(ph, out);
        return cmd_compare(cmp, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace sfcm
