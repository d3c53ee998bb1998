#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mklsvm/admm.hpp"
#include "mklsvm/data.hpp"
#include "mklsvm/error.hpp"
#include "mklsvm/kernel.hpp"
#include "mklsvm/model.hpp"
#include "mklsvm/prox.hpp"
#include "mklsvm/stationarity.hpp"
#include "mklsvm/tuning.hpp"

namespace py = pybind11;
using namespace mklsvm;

namespace {

Dataset make_dataset(const PointMatrix& points, const Vector& labels) {
  Dataset d{points, labels};
  d.validate();
  return d;
}

std::span<const double> row_span(const Vector& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

TrainOptions make_options(double jitter, bool jacobi) {
  TrainOptions o;
  o.jitter = jitter;
  o.coupling = jacobi ? Coupling::Jacobi : Coupling::GaussSeidel;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiple kernel SVM with the (0,1) loss";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", base.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("points"), py::arg("labels"))
      .def_readwrite("points", &Dataset::points)
      .def_readwrite("labels", &Dataset::labels)
      .def("__len__", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim)
      .def("subset", &Dataset::subset);

  m.def("gen_quadrant_data", &gen_quadrant_data, py::arg("m"), py::arg("margin") = 0.05,
        py::arg("seed") = 0);
  m.def("split", &split, py::arg("data"), py::arg("train_fraction") = 0.5, py::arg("seed") = 0);
  m.def("read_csv", &read_csv);
  m.def("write_csv", &write_csv);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("gaussian", &KernelSpec::gaussian, py::arg("sigma"))
      .def_static("polynomial", &KernelSpec::polynomial, py::arg("degree"))
      .def_static("parse", &KernelSpec::parse)
      .def_property_readonly("is_gaussian", &KernelSpec::is_gaussian)
      .def("__str__", &KernelSpec::to_string)
      .def("__repr__", [](const KernelSpec& k) { return "KernelSpec('" + k.to_string() + "')"; })
      .def(py::self == py::self);

  py::class_<KernelBank>(m, "KernelBank")
      .def(py::init<std::vector<KernelSpec>>())
      .def_static("reference_gaussians", &KernelBank::reference_gaussians)
      .def("__len__", &KernelBank::size)
      .def("__getitem__",
           [](const KernelBank& b, std::size_t l) {
             if (l >= b.size()) throw py::index_error();
             return b[l];
           })
      .def_property_readonly("specs", &KernelBank::specs);
  m.def("read_kernel_bank", &read_kernel_bank);
  m.def("kernel_value", [](const KernelSpec& k, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw InvalidArgument("kernel arguments differ in dimension");
    return eval_kernel(k, row_span(x), row_span(y));
  });
  m.def("gram_matrix", [](const KernelSpec& k, const PointMatrix& points) {
    return GramStack::build(KernelBank({k}), points).matrix(0);
  });

  py::class_<ProxParams>(m, "ProxParams")
      .def(py::init<double, double>(), py::arg("gamma"), py::arg("c"))
      .def_property_readonly("gamma", &ProxParams::gamma)
      .def_property_readonly("c", &ProxParams::c)
      .def_property_readonly("threshold", &ProxParams::threshold);
  m.def("prox", [](double z, double gamma, double c) { return prox_scalar(z, ProxParams(gamma, c)); },
        py::arg("z"), py::arg("gamma"), py::arg("c"));
  m.def("prox_vector",
        [](const Vector& z, double gamma, double c) { return prox_vector(z, ProxParams(gamma, c)); },
        py::arg("z"), py::arg("gamma"), py::arg("c"));
  m.def("step_loss", [](const Vector& v) { return step_loss(v); });

  py::class_<Hyperparams>(m, "Hyperparams")
      .def(py::init([](double c, double rho, double tol, int max_iter) {
             return Hyperparams::uniform(c, rho, tol, max_iter);
           }),
           py::arg("c") = 1.0, py::arg("rho") = 1.0, py::arg("tol") = 1e-3,
           py::arg("max_iter") = 1000)
      .def_readwrite("c", &Hyperparams::c)
      .def_readwrite("rho1", &Hyperparams::rho1)
      .def_readwrite("rho2", &Hyperparams::rho2)
      .def_readwrite("rho3", &Hyperparams::rho3)
      .def_readwrite("tol", &Hyperparams::tol)
      .def_readwrite("max_iter", &Hyperparams::max_iter)
      .def_property_readonly("gamma", &Hyperparams::gamma)
      .def_property_readonly("threshold", &Hyperparams::threshold);

  py::class_<SolverState>(m, "SolverState")
      .def_readonly("vf", &SolverState::vf)
      .def_readonly("d", &SolverState::d)
      .def_readonly("b", &SolverState::b)
      .def_readonly("u", &SolverState::u)
      .def_readonly("z", &SolverState::z)
      .def_readonly("lambda_", &SolverState::lambda)
      .def_readonly("theta", &SolverState::theta)
      .def_readonly("alpha", &SolverState::alpha)
      .def_readonly("iter", &SolverState::iter)
      .def("f_values", &SolverState::f_values);

  py::class_<StopReport>(m, "StopReport")
      .def_readonly("betas", &StopReport::betas)
      .def_readonly("converged", &StopReport::converged)
      .def_readonly("iterations", &StopReport::iterations)
      .def_property_readonly("max_beta", &StopReport::max_beta);

  py::class_<TrainedModel>(m, "TrainedModel")
      .def_readonly("anchors", &TrainedModel::anchors)
      .def_readonly("lambda_star", &TrainedModel::lambda_star)
      .def_readonly("d_star", &TrainedModel::d_star)
      .def_readonly("b_star", &TrainedModel::b_star)
      .def_readonly("support_idx", &TrainedModel::support_idx)
      .def_readonly("bank", &TrainedModel::bank)
      .def("active_kernels", &TrainedModel::active_kernels, py::arg("cutoff") = 1e-4)
      .def("decision_value",
           [](const TrainedModel& mdl, const Vector& x) { return decision_value(mdl, row_span(x)); })
      .def("predict", [](const TrainedModel& mdl, const PointMatrix& points) {
        if (points.cols() != mdl.dim()) throw InvalidArgument("input dimension does not match the model");
        Eigen::VectorXi out(points.rows());
        for (Index i = 0; i < points.rows(); ++i)
          out(i) = predict(mdl, {points.row(i).data(), static_cast<std::size_t>(points.cols())});
        return out;
      })
      .def("save", [](const TrainedModel& mdl, const std::filesystem::path& p) { save_model(mdl, p); });
  m.def("load_model", &load_model);

  py::class_<EvalMetrics>(m, "EvalMetrics")
      .def_readonly("tacc", &EvalMetrics::tacc)
      .def_readonly("nsv", &EvalMetrics::nsv);
  m.def("evaluate", &evaluate, py::arg("model"), py::arg("test"));

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("model", &TrainResult::model)
      .def_readonly("report", &TrainResult::report)
      .def_readonly("state", &TrainResult::state);
  m.def(
      "train",
      [](const Dataset& data, const KernelBank& bank, const Hyperparams& hp, double jitter,
         bool jacobi) {
        py::gil_scoped_release release;
        return train(data, bank, hp, make_options(jitter, jacobi));
      },
      py::arg("data"), py::arg("bank"), py::arg("hp"), py::arg("jitter") = 0.0,
      py::arg("jacobi") = false);

  py::class_<StationarityReport>(m, "StationarityReport")
      .def_readonly("residuals", &StationarityReport::residuals)
      .def_readonly("max_residual", &StationarityReport::max_residual)
      .def_readonly("gamma", &StationarityReport::gamma)
      .def("__getitem__", &StationarityReport::operator[])
      .def("certified", &StationarityReport::certified, py::arg("threshold") = 1e-2);
  m.def(
      "check_pstationary",
      [](const TrainResult& r, const Dataset& data, const Hyperparams& hp, double jitter,
         std::optional<double> gamma) {
        const GramStack gram = GramStack::build(r.model.bank, data.points, jitter);
        return check_pstationary(r.state, gram, data.labels, hp, gamma.value_or(hp.gamma()));
      },
      py::arg("result"), py::arg("data"), py::arg("hp"), py::arg("jitter") = 0.0,
      py::arg("gamma") = py::none());

  py::class_<Fold>(m, "Fold")
      .def_readonly("train", &Fold::train)
      .def_readonly("validation", &Fold::validation);
  m.def(
      "kfold_split",
      [](const Vector& labels, int folds, std::uint64_t seed, bool stratify) {
        return kfold_split(labels, folds, seed, stratify);
      },
      py::arg("labels"), py::arg("folds") = 10, py::arg("seed") = 0, py::arg("stratify") = true);

  py::class_<CvCell>(m, "CvCell")
      .def_readonly("c", &CvCell::c)
      .def_readonly("rho", &CvCell::rho)
      .def_readonly("mean_tacc", &CvCell::mean_tacc)
      .def_readonly("std_tacc", &CvCell::std_tacc)
      .def_readonly("failures", &CvCell::failures);
  py::class_<CvResult>(m, "CvResult")
      .def_readonly("best_c", &CvResult::best_c)
      .def_readonly("best_rho", &CvResult::best_rho)
      .def_readonly("best_score", &CvResult::best_score)
      .def_readonly("table", &CvResult::table);
  m.def("default_c_grid", &default_c_grid);
  m.def("default_rho_grid", &default_rho_grid);
  m.def(
      "grid_search_cv",
      [](const Dataset& data, const KernelBank& bank, std::vector<double> c_grid,
         std::vector<double> rho_grid, int folds, std::uint64_t seed, bool stratify, double tol,
         int max_iter, double jitter, unsigned threads) {
        GridSpec g;
        g.c_grid = std::move(c_grid);
        g.rho_grid = std::move(rho_grid);
        g.folds = folds;
        g.seed = seed;
        g.stratify = stratify;
        Hyperparams base;
        base.tol = tol;
        base.max_iter = max_iter;
        py::gil_scoped_release release;
        return grid_search_cv(data, bank, g, base, make_options(jitter, false), threads);
      },
      py::arg("data"), py::arg("bank"), py::arg("c_grid") = default_c_grid(),
      py::arg("rho_grid") = default_rho_grid(), py::arg("folds") = 10, py::arg("seed") = 0,
      py::arg("stratify") = true, py::arg("tol") = 1e-3, py::arg("max_iter") = 1000,
      py::arg("jitter") = 0.0, py::arg("threads") = 0);
}
