#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "npss/errors.hpp"
#include "npss/evaluate.hpp"
#include "npss/fgss.hpp"
#include "npss/matrix_io.hpp"
#include "npss/pvalues.hpp"
#include "npss/report.hpp"
#include "npss/scoring.hpp"
#include "npss/strategies.hpp"

namespace py = pybind11;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
    return ids;
}

void require_2d(const Array& a, const char* name) {
    if (a.ndim() != 2) throw npss::ShapeError(std::string(name) + " must be a 2-d array");
}

npss::ActivationMatrix to_matrix(const Array& a, const std::optional<std::vector<std::string>>& ids,
                                 const char* name) {
    require_2d(a, name);
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    std::vector<double> values(a.data(), a.data() + rows * cols);
    return npss::ActivationMatrix(rows, cols, std::move(values), ids ? *ids : default_ids(rows));
}

npss::PValueMatrix to_pvalues(const Array& a) {
    require_2d(a, "p");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return npss::PValueMatrix::from_values(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

py::array_t<double> plane(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
    py::array_t<double> out({rows, cols});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

npss::ScanConfig scan_config(const std::string& statistic, std::size_t restarts, std::uint64_t seed,
                             std::size_t max_alternations, double tolerance, bool gate,
                             const std::optional<std::vector<double>>& alpha_grid) {
    npss::ScanConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.max_alternations = max_alternations;
    cfg.score_tolerance = tolerance;
    cfg.score_cfg.statistic = npss::parse_statistic(statistic);
    cfg.score_cfg.one_sided_gate = gate;
    if (alpha_grid) cfg.score_cfg.alpha_grid = *alpha_grid;
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_npss, m) {
    m.doc() = "Non-parametric subset scanning of activation matrices";

    const auto base = py::register_exception<npss::Error>(m, "NpssError", PyExc_ValueError);
    py::register_exception<npss::IoError>(m, "NpssIoError", base.ptr());

    m.attr("SCHEMA_VERSION") = npss::kSchemaVersion;
    m.attr("DEFAULT_ALPHA_GRID") = npss::default_alpha_grid();

    m.def("hc_statistic", &npss::hc_statistic, py::arg("alpha"), py::arg("n_alpha"), py::arg("n"),
          py::arg("gate") = true);
    m.def("bj_statistic", &npss::bj_statistic, py::arg("alpha"), py::arg("n_alpha"), py::arg("n"),
          py::arg("gate") = true);

    m.def(
        "empirical_pvalues",
        [](const Array& reference, const Array& test, const std::string& tail, std::uint64_t seed) {
            const auto p = npss::empirical_pvalues(to_matrix(reference, std::nullopt, "reference"),
                                                   to_matrix(test, std::nullopt, "test"), npss::parse_tail(tail),
                                                   seed);
            py::dict out;
            out["p"] = plane(p.p(), p.rows(), p.cols());
            out["pmin"] = plane(p.pmin(), p.rows(), p.cols());
            out["pmax"] = plane(p.pmax(), p.rows(), p.cols());
            return out;
        },
        py::arg("reference"), py::arg("test"), py::arg("tail") = "right", py::arg("seed") = 0);

    m.def(
        "ks_uniform_distance", [](const std::vector<double>& v) { return npss::ks_uniform_distance(v); },
        py::arg("values"));
    m.def("ks_critical_value", &npss::ks_critical_value, py::arg("n"), py::arg("level") = 0.05);

    m.def(
        "score_subset",
        [](const Array& p, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
           const std::string& statistic, bool gate, const std::optional<std::vector<double>>& alpha_grid) {
            npss::ScoreConfig cfg;
            cfg.statistic = npss::parse_statistic(statistic);
            cfg.one_sided_gate = gate;
            if (alpha_grid) cfg.alpha_grid = *alpha_grid;
            const auto s = npss::score_subset(to_pvalues(p), rows, cols, cfg);
            return py::make_tuple(s.score, s.best_alpha);
        },
        py::arg("p"), py::arg("rows"), py::arg("cols"), py::arg("statistic") = "hc", py::arg("gate") = true,
        py::arg("alpha_grid") = std::nullopt);

    m.def(
        "scan_json",
        [](const Array& p, const std::string& statistic, std::size_t restarts, std::uint64_t seed,
           std::size_t max_alternations, double tolerance, bool gate,
           const std::optional<std::vector<double>>& alpha_grid) {
            const auto cfg = scan_config(statistic, restarts, seed, max_alternations, tolerance, gate, alpha_grid);
            const auto pv = to_pvalues(p);
            py::gil_scoped_release release;
            return npss::to_json(npss::scan(pv, cfg)).dump();
        },
        py::arg("p"), py::arg("statistic") = "hc", py::arg("restarts") = 20, py::arg("seed") = 0,
        py::arg("max_alternations") = 100, py::arg("tolerance") = 1e-12, py::arg("gate") = true,
        py::arg("alpha_grid") = std::nullopt);

    m.def(
        "run_json",
        [](const Array& reference, const Array& test, const std::optional<std::vector<std::string>>& test_ids,
           const std::string& method, std::size_t k, const std::string& statistic, std::size_t restarts,
           std::uint64_t seed) {
            const auto ref = to_matrix(reference, std::nullopt, "reference");
            const auto tst = to_matrix(test, test_ids, "test");
            const auto cfg = scan_config(statistic, restarts, seed, 100, 1e-12, true, std::nullopt);
            py::gil_scoped_release release;
            return npss::to_json(npss::run_strategy(ref, tst, {npss::parse_strategy(method), k, false}, cfg)).dump();
        },
        py::arg("reference"), py::arg("test"), py::arg("test_ids") = std::nullopt, py::arg("method") = "scan2",
        py::arg("k") = 3, py::arg("statistic") = "hc", py::arg("restarts") = 20, py::arg("seed") = 0);

    m.def(
        "experiment_json",
        [](const Array& reference, const Array& clean, const Array& anomalous, const std::string& method,
           std::size_t k, std::size_t trials, std::size_t test_size, double anom_frac, std::uint64_t seed,
           const std::string& statistic, std::size_t restarts) {
            const auto ref = to_matrix(reference, std::nullopt, "reference");
            const auto cl = to_matrix(clean, std::nullopt, "clean");
            const auto an = to_matrix(anomalous, std::nullopt, "anomalous");
            const auto cfg = scan_config(statistic, restarts, seed, 100, 1e-12, true, std::nullopt);
            const npss::ExperimentConfig config{trials, test_size, anom_frac, seed};
            py::gil_scoped_release release;
            const auto report =
                npss::run_experiment(ref, cl, an, {npss::parse_strategy(method), k, false}, config, cfg);
            return npss::to_json(report).dump();
        },
        py::arg("reference"), py::arg("clean"), py::arg("anomalous"), py::arg("method") = "scan2", py::arg("k") = 3,
        py::arg("trials") = 10, py::arg("test_size") = 800, py::arg("anom_frac") = 0.1, py::arg("seed") = 0,
        py::arg("statistic") = "hc", py::arg("restarts") = 20);

    m.def(
        "load_matrix",
        [](const std::filesystem::path& path) {
            const auto mat = npss::load_matrix(path, npss::format_from_path(path));
            return py::make_tuple(plane(mat.values(), mat.rows(), mat.cols()), mat.row_ids());
        },
        py::arg("path"));
    m.def(
        "save_matrix",
        [](const Array& values, const std::filesystem::path& path,
           const std::optional<std::vector<std::string>>& row_ids) {
            npss::save_matrix(to_matrix(values, row_ids, "values"), path, npss::format_from_path(path));
        },
        py::arg("values"), py::arg("path"), py::arg("row_ids") = std::nullopt);
}
