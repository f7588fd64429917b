#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sfcm/core.hpp"
#include "sfcm/engines.hpp"
#include "sfcm/error.hpp"
#include "sfcm/imageio.hpp"
#include "sfcm/phantom.hpp"
#include "sfcm/spatial.hpp"

namespace py = pybind11;
using namespace sfcm;

namespace {

using F64 = py::array_t<double, py::array::c_style | py::array::forcecast>;
using U32 = py::array_t<Label, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const F64& a) {
    if (a.ndim() != 1) throw ParameterError("expected a 1-d array");
    return {a.data(), a.data() + a.size()};
}

template <class M>
M to_matrix(const F64& a) {
    if (a.ndim() != 2) throw ParameterError("expected a 2-d array");
    M m(a.shape(0), a.shape(1));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

template <class M>
py::array_t<double> from_matrix(const M& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

py::array_t<double> from_vector(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ImageGrid to_image(const py::array& a, std::optional<int> bit_depth) {
    if (a.ndim() != 2) throw ParameterError("image must be a 2-d array");
    const int depth = bit_depth.value_or(a.dtype().itemsize() == 1 ? 8 : 16);
    const auto arr = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>::ensure(a);
    if (!arr) throw ParameterError("image must hold unsigned integers");
    return ImageGrid::create(a.shape(1), a.shape(0), depth, {arr.data(), arr.data() + arr.size()});
}

py::array from_image(const ImageGrid& img) {
    const std::vector<py::ssize_t> shape = {static_cast<py::ssize_t>(img.height), static_cast<py::ssize_t>(img.width)};
    if (img.bit_depth == 8) {
        py::array_t<std::uint8_t> out(shape);
        std::copy(img.samples.begin(), img.samples.end(), out.mutable_data());
        return out;
    }
    py::array_t<std::uint16_t> out(shape);
    std::copy(img.samples.begin(), img.samples.end(), out.mutable_data());
    return out;
}

LabelMap to_labels(const U32& a) {
    if (a.ndim() != 2) throw ParameterError("label map must be a 2-d array");
    return {static_cast<std::size_t>(a.shape(1)), static_cast<std::size_t>(a.shape(0)),
            {a.data(), a.data() + a.size()}};
}

py::array_t<Label> from_labels(const LabelMap& l) {
    py::array_t<Label> out({l.height, l.width});
    std::copy(l.labels.begin(), l.labels.end(), out.mutable_data());
    return out;
}

NoiseModel parse_noise(const std::optional<std::pair<std::string, double>>& noise) {
    if (!noise) return NoNoise{};
    if (noise->first == "salt") return SaltNoise{noise->second};
    if (noise->first == "gauss") return GaussianNoise{noise->second};
    throw ParameterError("noise kind must be 'salt' or 'gauss'");
}

py::tuple from_phantom(const Phantom& ph) { return py::make_tuple(from_image(ph.image), from_labels(ph.truth)); }

py::dict segment(const py::array& image, const std::string& algorithm, std::size_t clusters, double fuzziness,
                 double p, double q, std::size_t radius, double epsilon, std::size_t max_iter,
                 std::optional<std::vector<double>> init, std::uint64_t seed, std::optional<int> bit_depth) {
    Algorithm algo;
    if (algorithm == "kmeans") algo = Algorithm::kmeans;
    else if (algorithm == "fcm") algo = Algorithm::fcm;
    else if (algorithm == "sfcm") algo = Algorithm::sfcm;
    else throw ParameterError("algorithm must be kmeans, fcm or sfcm");

    ClusterParams params;
    params.clusters = clusters;
    params.fuzziness = fuzziness;
    params.membership_exponent = p;
    params.spatial_exponent = q;
    params.radius = radius;
    params.epsilon = epsilon;
    params.max_iter = max_iter;
    if (init) params.init = ExplicitInit{*init};
    params.seed = seed;

    const auto img = to_image(image, bit_depth);
    SegmentationResult r;
    {
        py::gil_scoped_release release;
        r = run(algo, img, params);
    }
    py::list trace;
    for (const auto& t : r.trace) trace.append(py::make_tuple(t.iteration, t.objective, t.max_delta));
    py::dict out;
    out["labels"] = from_labels(r.labels);
    out["centroids"] = from_vector(r.centroids.values);
    out["memberships"] = r.memberships ? py::object(from_matrix(*r.memberships)) : py::none();
    out["trace"] = trace;
    out["iterations_run"] = r.iterations_run;
    out["converged"] = r.converged;
    out["duplicate_init"] = r.diagnostics.duplicate_init;
    out["modulation_fallback_rows"] = r.diagnostics.modulation_fallback_rows;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fuzzy and spatial fuzzy c-means segmentation of grayscale images";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
    py::register_exception<ContractViolation>(m, "ContractViolation", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<UnsupportedFormatError>(m, "UnsupportedFormatError", error.ptr());
    py::register_exception<DegenerateClusterError>(m, "DegenerateClusterError", error.ptr());
    py::register_exception<IoError>(m, "IoError", error.ptr());

    m.def("normalize", [](const py::array& image, std::optional<int> bit_depth) {
        return from_vector(normalize_intensities(to_image(image, bit_depth)).values);
    }, py::arg("image"), py::arg("bit_depth") = py::none(), "Flattened intensities scaled to [0, 1].");

    m.def("distance_matrix", [](const F64& x, const F64& c) {
        return from_matrix(distance_matrix(FeatureVector(to_vector(x)), Centroids(to_vector(c))));
    }, py::arg("features"), py::arg("centroids"));

    m.def("update_membership", [](const F64& d, double fuzziness) {
        return from_matrix(update_membership(to_matrix<DistanceMatrix>(d), fuzziness));
    }, py::arg("distances"), py::arg("fuzziness"));

    m.def("update_centroids", [](const F64& x, const F64& u, double fuzziness) {
        return from_vector(update_centroids(FeatureVector(to_vector(x)), to_matrix<MembershipMatrix>(u), fuzziness).values);
    }, py::arg("features"), py::arg("memberships"), py::arg("fuzziness"));

    m.def("objective", [](const F64& d, const F64& u, double fuzziness) {
        return objective(to_matrix<DistanceMatrix>(d), to_matrix<MembershipMatrix>(u), fuzziness);
    }, py::arg("distances"), py::arg("memberships"), py::arg("fuzziness"));

    m.def("window_indices", &window_indices, py::arg("index"), py::arg("width"), py::arg("height"), py::arg("radius"));

    m.def("spatial_function", [](const F64& u, std::size_t w, std::size_t h, std::size_t r) {
        return from_matrix(spatial_function(to_matrix<MembershipMatrix>(u), w, h, r));
    }, py::arg("memberships"), py::arg("width"), py::arg("height"), py::arg("radius"));

    m.def("modulate", [](const F64& u, const F64& h, double p, double q) {
        const auto mod = modulate(to_matrix<MembershipMatrix>(u), to_matrix<SpatialMatrix>(h), p, q);
        return py::make_tuple(from_matrix(mod.memberships), mod.fallback_rows);
    }, py::arg("memberships"), py::arg("spatial"), py::arg("p"), py::arg("q"),
       "Returns (modulated memberships, number of rows that fell back).");

    m.def("segment", &segment, py::arg("image"), py::arg("algorithm") = "sfcm", py::arg("clusters") = 2,
          py::arg("fuzziness") = 2.0, py::arg("p") = 1.0, py::arg("q") = 1.0, py::arg("radius") = 1,
          py::arg("epsilon") = 1e-5, py::arg("max_iter") = 100, py::arg("init") = py::none(), py::arg("seed") = 0,
          py::arg("bit_depth") = py::none());

    m.def("band_phantom", [](std::size_t w, std::size_t h, const std::vector<std::uint8_t>& levels,
                             std::optional<std::pair<std::string, double>> noise, std::uint64_t seed) {
        return from_phantom(generate_phantom(band_phantom(w, h, levels, parse_noise(noise), seed)));
    }, py::arg("width"), py::arg("height"), py::arg("intensities"), py::arg("noise") = py::none(),
       py::arg("seed") = 0, "Returns (image, truth labels).");

    m.def("disc_phantom", [](std::size_t w, std::size_t h, std::uint8_t background,
                             const std::vector<std::pair<double, std::uint8_t>>& discs,
                             std::optional<std::pair<std::string, double>> noise, std::uint64_t seed) {
        return from_phantom(generate_phantom(disc_phantom(w, h, background, discs, parse_noise(noise), seed)));
    }, py::arg("width"), py::arg("height"), py::arg("background"), py::arg("discs"), py::arg("noise") = py::none(),
       py::arg("seed") = 0);

    m.def("misclassification_rate", [](const U32& pred, const U32& truth, std::size_t c) {
        return misclassification_rate(to_labels(pred), to_labels(truth), c);
    }, py::arg("predicted"), py::arg("truth"), py::arg("clusters"));

    m.def("isolated_pixel_count", [](const U32& labels, std::size_t radius) {
        return isolated_pixel_count(to_labels(labels), radius);
    }, py::arg("labels"), py::arg("radius") = 1);

    m.def("load_grayscale", [](const std::string& path) {
        const auto img = load_grayscale_file(path);
        return py::make_tuple(from_image(img), img.bit_depth);
    }, py::arg("path"), "Reads a PGM or grayscale PNG file; returns (array, bit_depth).");

    m.def("decode_grayscale", [](const py::bytes& data) {
        const std::string s = data;
        const auto img = load_grayscale({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
        return py::make_tuple(from_image(img), img.bit_depth);
    }, py::arg("data"));
}
