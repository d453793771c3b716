#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <string>

#include "augens/augment/apps.hpp"
#include "augens/augment/spec.hpp"
#include "augens/ensemble/metrics.hpp"
#include "augens/ensemble/scores.hpp"
#include "augens/ensemble/wilcoxon.hpp"
#include "augens/error.hpp"
#include "augens/image_io.hpp"
#include "augens/spectral/radon.hpp"
#include "augens/spectral/transforms.hpp"
#include "augens/spectral/wavelet.hpp"

namespace py = pybind11;
using namespace augens;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Accepts H x W (one channel) or H x W x C.
Image to_image(const Array& a) {
    if (a.ndim() != 2 && a.ndim() != 3) throw Error(ErrorCode::dimension_mismatch, "expected an H x W or H x W x C array");
    const auto h = static_cast<std::size_t>(a.shape(0)), w = static_cast<std::size_t>(a.shape(1));
    const auto c = a.ndim() == 3 ? static_cast<std::size_t>(a.shape(2)) : std::size_t{1};
    Image img(h, w, c);
    std::copy(a.data(), a.data() + a.size(), img.data().begin());
    return img;
}

Array from_image(const Image& img) {
    Array out({img.height(), img.width(), img.channels()});
    std::copy(img.data().begin(), img.data().end(), out.mutable_data());
    return out;
}

Plane to_plane(const Array& a) {
    if (a.ndim() != 2) throw Error(ErrorCode::dimension_mismatch, "expected a 2-D array");
    Plane p(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), p.values.begin());
    return p;
}

Array from_plane(const Plane& p) {
    Array out({p.rows, p.cols});
    std::copy(p.values.begin(), p.values.end(), out.mutable_data());
    return out;
}

ensemble::ScoreMatrix to_scores(const Array& a, const std::string& tag) {
    const Plane p = to_plane(a);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < p.rows; ++i) ids.push_back(std::to_string(i));
    ensemble::ScoreMatrix m(std::move(ids), p.cols, tag);
    m.scores = p.values;
    return m;
}

std::vector<ensemble::ScoreMatrix> to_members(const std::vector<Array>& arrays) {
    std::vector<ensemble::ScoreMatrix> members;
    for (std::size_t j = 0; j < arrays.size(); ++j) members.push_back(to_scores(arrays[j], "m" + std::to_string(j)));
    return members;
}

std::vector<Array> run_app(const Array& image, int app_id, std::uint64_t seed, const std::vector<Array>& companions,
                           std::uint64_t sample_key, const py::dict& params, const std::string& backend) {
    std::map<std::string, std::string> kv{{"id", std::to_string(app_id)}, {"seed", std::to_string(seed)}};
    for (const auto& [k, v] : params) kv[py::str(k)] = py::str(v);
    augment::AugmentationSpec spec = augment::from_key_values(kv);
    if (backend == "dct") spec.transform_backend = std::make_shared<augment::DctTransform>();
    else if (backend == "haar") spec.transform_backend = std::make_shared<augment::HaarTransform>();
    else if (!backend.empty()) throw Error(ErrorCode::invalid_argument, "unknown backend '" + backend + "'");

    const Image img = to_image(image);
    std::vector<Image> comps;
    for (const auto& c : companions) comps.push_back(to_image(c));
    std::vector<Image> out;
    {
        py::gil_scoped_release release;
        out = augment::apply_app(spec, img, comps, sample_key);
    }
    std::vector<Array> arrays;
    for (const auto& o : out) arrays.push_back(from_image(o));
    return arrays;
}

py::dict report_dict(const ensemble::MetricReport& r) {
    py::dict d;
    d["accuracy"] = r.accuracy;
    d["euc"] = r.euc;
    d["per_class_auc"] = r.per_class_auc;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Image augmentation pipelines and ensemble evaluation";

    py::register_exception<Error>(m, "AugensError", PyExc_ValueError);

    m.def("augment", &run_app, py::arg("image"), py::arg("app_id"), py::arg("seed") = 0,
          py::arg("companions") = std::vector<Array>{}, py::arg("sample_key") = 0, py::arg("params") = py::dict(),
          py::arg("backend") = "",
          "Runs one APP on an H x W x C image in [0,1]; companions are same-class images first, then other-class.");
    m.def("output_count", &augment::output_count, py::arg("app_id"));
    m.def("is_color_only", &augment::is_color_only, py::arg("app_id"));
    m.def("companion_counts", [](int app_id) {
        const auto p = augment::companion_policy(app_id);
        return py::make_tuple(p.same_class, p.other_class);
    }, py::arg("app_id"));

    m.def("load_image", [](const std::string& path) { return from_image(load_image(path)); }, py::arg("path"));
    m.def("save_image", [](const Array& img, const std::string& path) { save_image(to_image(img), path); },
          py::arg("image"), py::arg("path"));

    m.def("dct2", [](const Array& a) { return from_plane(spectral::dct2(to_plane(a))); }, py::arg("plane"));
    m.def("idct2", [](const Array& a) { return from_plane(spectral::idct2(to_plane(a))); }, py::arg("coeffs"));
    m.def("haar_dwt2", [](const Array& a) {
        const auto w = spectral::haar_dwt2(to_plane(a));
        return py::make_tuple(from_plane(w.approx), from_plane(w.horizontal), from_plane(w.vertical),
                              from_plane(w.diagonal));
    }, py::arg("plane"), "Single-level Haar; returns (cA, cH, cV, cD).");
    m.def("radon", [](const Array& a, std::vector<double> angles) {
        if (angles.empty()) angles = spectral::all_angles();
        return from_plane(spectral::radon(to_plane(a), angles).projections);
    }, py::arg("plane"), py::arg("angles_deg") = std::vector<double>{}, "Sinogram, bins x angles.");

    m.def("sum_rule_fuse", [](const std::vector<Array>& members) {
        return from_plane([&] {
            const auto fused = ensemble::sum_rule_fuse(to_members(members));
            Plane p(fused.rows(), fused.classes);
            p.values = fused.scores;
            return p;
        }());
    }, py::arg("members"), "Elementwise sum of N x K score matrices.");
    m.def("metrics", [](const Array& scores, const std::vector<int>& labels) {
        return report_dict(ensemble::euc_multiclass(to_scores(scores, "s"), labels));
    }, py::arg("scores"), py::arg("labels"), "Accuracy, EUC and one-vs-rest AUC per class.");
    m.def("auc", [](const std::vector<double>& pos, const std::vector<double>& neg) {
        return ensemble::auc_binary(pos, neg);
    }, py::arg("pos"), py::arg("neg"));
    m.def("wilcoxon", [](const std::vector<double>& x, const std::vector<double>& y, const std::string& mode) {
        ensemble::WilcoxonMode wm = ensemble::WilcoxonMode::automatic;
        if (mode == "exact") wm = ensemble::WilcoxonMode::exact;
        else if (mode == "normal") wm = ensemble::WilcoxonMode::normal;
        else if (mode != "auto") throw Error(ErrorCode::invalid_argument, "mode is auto, exact or normal");
        const auto r = ensemble::wilcoxon_signed_rank(x, y, wm);
        py::dict d;
        d["statistic"] = r.statistic;
        d["w_plus"] = r.w_plus;
        d["p_two_sided"] = r.p_two_sided;
        d["n_effective"] = r.n_effective;
        d["exact"] = r.exact;
        return d;
    }, py::arg("x"), py::arg("y"), py::arg("mode") = "auto");
    m.def("cosine_diversity", [](const std::vector<Array>& members) {
        return ensemble::cosine_diversity(to_members(members));
    }, py::arg("members"), "Pairwise cosine similarity of flattened score matrices.");
}
