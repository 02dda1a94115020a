#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stabgreedy/analysis.hpp"
#include "stabgreedy/error.hpp"
#include "stabgreedy/geometry.hpp"
#include "stabgreedy/greedy.hpp"
#include "stabgreedy/interpolant.hpp"
#include "stabgreedy/io.hpp"
#include "stabgreedy/kernels.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace stabgreedy;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Accepts (n,) for one-dimensional clouds or (n, d).
PointCloud to_cloud(const Array& a) {
    if (a.ndim() == 1) {
        return PointCloud(1, std::vector<double>(a.data(), a.data() + a.shape(0)));
    }
    if (a.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "expected an (n, d) array");
    return PointCloud(static_cast<std::size_t>(a.shape(1)),
                      std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const PointCloud& c) {
    py::array_t<double> out({c.size(), c.dim()});
    std::copy(c.coords().begin(), c.coords().end(), out.mutable_data());
    return out;
}

std::span<const double> as_point(const Array& a) {
    return {a.data(), static_cast<std::size_t>(a.size())};
}

py::dict trace_to_dict(const RunTrace& t) {
    return py::dict("stop_reason"_a = std::string(stop_reason_name(t.stop_reason)),
                    "kernel"_a = t.kernel, "rule"_a = t.rule, "gamma"_a = t.gamma, "seed"_a = t.seed,
                    "indices"_a = t.indices(), "p_max"_a = t.p_max(), "r_max"_a = t.r_max(),
                    "fill"_a = t.fill(), "sep"_a = t.sep());
}

}  // namespace

PYBIND11_MODULE(_stabgreedy, m) {
    m.doc() = "gamma-stabilized greedy kernel interpolation";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    py::enum_<KernelFamily>(m, "KernelFamily")
        .value("BasicMatern", KernelFamily::BasicMatern)
        .value("LinearMatern", KernelFamily::LinearMatern)
        .value("Gaussian", KernelFamily::Gaussian);

    py::class_<Kernel>(m, "Kernel")
        .def(py::init<KernelFamily, double>(), "family"_a, "shape"_a = 1.0)
        .def_static("parse", &Kernel::parse, "text"_a)
        .def_property_readonly("family", &Kernel::family)
        .def_property_readonly("shape", &Kernel::shape)
        .def("descriptor", &Kernel::descriptor)
        .def("eval", [](const Kernel& k, const Array& x, const Array& y) { return k.eval(as_point(x), as_point(y)); })
        .def("eval_grad1", [](const Kernel& k, const Array& x, const Array& y, std::size_t axis) {
            return k.eval_grad1(as_point(x), as_point(y), axis);
        })
        .def("eval_hess12", [](const Kernel& k, const Array& x, const Array& y, std::size_t axis) {
            return k.eval_hess12(as_point(x), as_point(y), axis);
        })
        .def("theoretical_power_rate", &Kernel::theoretical_power_rate, "dim"_a)
        .def("__repr__", [](const Kernel& k) { return "Kernel('" + k.descriptor() + "')"; });

    m.def("sample_cube", [](std::size_t dim, std::size_t n, std::uint64_t seed, double lo, double hi) {
        return to_array(DomainSampler::cube(lo, hi, dim, seed).sample(n));
    }, "dim"_a, "n"_a, "seed"_a = 0, "lo"_a = 0.0, "hi"_a = 1.0);
    m.def("sample_blob", [](std::size_t n, std::uint64_t seed) {
        return to_array(DomainSampler::blob_with_hole(seed).sample(n));
    }, "n"_a, "seed"_a = 0);
    m.def("blob_contains", [](const Array& p) { return blob_with_hole_contains(as_point(p)); });
    m.def("fill_distance", [](const Array& c, const Array& x) { return fill_distance(to_cloud(c), to_cloud(x)); },
          "candidates"_a, "centers"_a);
    m.def("separation_distance", [](const Array& x) { return separation_distance(to_cloud(x)); });
    m.def("uniformity_constant", [](const Array& c, const Array& x) {
        return uniformity_constant(to_cloud(c), to_cloud(x));
    }, "candidates"_a, "centers"_a);

    py::class_<TargetFunction>(m, "TargetFunction")
        .def_static("falpha", &TargetFunction::falpha, "alpha"_a)
        .def_static("inverse_square", &TargetFunction::inverse_square, "a"_a = std::vector<double>{0.17, 0.17})
        .def_static("motivating_example", &TargetFunction::motivating_example)
        .def_static("tabulated", &TargetFunction::tabulated, "values"_a)
        .def_static("parse", &TargetFunction::parse, "text"_a)
        .def("descriptor", &TargetFunction::descriptor)
        .def("values", [](const TargetFunction& f, const Array& x) { return f.values(to_cloud(x)); });

    py::class_<ConditionDiagnostics>(m, "ConditionDiagnostics")
        .def_readonly("lambda_min", &ConditionDiagnostics::lambda_min)
        .def_readonly("lambda_max", &ConditionDiagnostics::lambda_max)
        .def_readonly("cond", &ConditionDiagnostics::cond)
        .def_readonly("lambda_min_upper", &ConditionDiagnostics::lambda_min_upper)
        .def_readonly("spd", &ConditionDiagnostics::spd);

    py::class_<GreedyModel>(m, "GreedyModel")
        .def(py::init([](const Kernel& k, const Array& candidates, std::optional<TargetFunction> f) {
            return GreedyModel(k, to_cloud(candidates), std::move(f));
        }), "kernel"_a, "candidates"_a, "target"_a = py::none())
        .def("add_center", &GreedyModel::add_center, "index"_a)
        .def("__len__", &GreedyModel::size)
        .def_property_readonly("center_indices", &GreedyModel::center_indices)
        .def_property_readonly("centers", [](const GreedyModel& g) { return to_array(g.centers()); })
        .def_property_readonly("power_sq", &GreedyModel::power_sq)
        .def_property_readonly("interp_values", &GreedyModel::interp_values)
        .def_property_readonly("coefficients", &GreedyModel::coefficients)
        .def("power_max", &GreedyModel::power_max)
        .def("residual_max", &GreedyModel::residual_max)
        .def("evaluate", [](const GreedyModel& g, const Array& x) { return g.evaluate(to_cloud(x)); })
        .def("power_sq_at", [](const GreedyModel& g, const Array& x) { return g.power_sq_at(to_cloud(x)); })
        .def("cardinal_functions", [](const GreedyModel& g, const Array& x) { return g.cardinal_functions(to_cloud(x)); })
        .def("lebesgue_constant", [](const GreedyModel& g, const Array& x) { return g.lebesgue_constant(to_cloud(x)); })
        .def("derivative_power", [](const GreedyModel& g, const Array& x, std::size_t axis) {
            return g.derivative_power(as_point(x), axis);
        }, "x"_a, "axis"_a = 0)
        .def("condition_diagnostics", &GreedyModel::condition_diagnostics)
        .def("to_json", [](const GreedyModel& g) { return io::model_to_json(g).dump(); });

    py::class_<GreedyConfig>(m, "GreedyConfig")
        .def(py::init([](const std::string& rule, double gamma, std::size_t max_n, double power_tol,
                         double residual_tol, std::optional<double> cond_bound, std::uint64_t seed) {
            GreedyConfig c;
            c.rule = parse_rule(rule);
            c.gamma = gamma;
            c.max_n = max_n;
            c.power_tol = power_tol;
            c.residual_tol = residual_tol;
            c.cond_bound = cond_bound;
            c.seed = seed;
            return c;
        }), "rule"_a = "p", "gamma"_a = 1.0, "max_n"_a = 100, "power_tol"_a = 0.0,
             "residual_tol"_a = 0.0, "cond_bound"_a = py::none(), "seed"_a = 0)
        .def_readwrite("gamma", &GreedyConfig::gamma)
        .def_readwrite("max_n", &GreedyConfig::max_n)
        .def_readwrite("seed", &GreedyConfig::seed);

    m.def("run", [](const GreedyConfig& c, const Kernel& k, const Array& candidates,
                    std::optional<TargetFunction> f) {
        RunResult r = run(c, k, to_cloud(candidates), f);
        py::dict trace = trace_to_dict(r.trace);
        return py::make_tuple(std::move(r.model), trace);
    }, "config"_a, "kernel"_a, "candidates"_a, "target"_a = py::none());

    m.def("restricted_set", [](const Array& power_sq, double gamma) {
        return restricted_set(Eigen::Map<const Eigen::VectorXd>(power_sq.data(), power_sq.size()), gamma);
    }, "power_sq"_a, "gamma"_a);

    m.def("fit_loglog", [](const std::vector<double>& v, std::size_t a, std::size_t b) {
        const LineFit f = fit_loglog(v, {a, b});
        return py::make_tuple(f.intercept, f.slope);
    }, "values"_a, "first"_a, "last"_a);
    m.def("nine_window_rate", [](const std::vector<double>& v) {
        const RateFit f = nine_window_rate(v);
        std::vector<double> slopes;
        for (const auto& l : f.fits) slopes.push_back(l.slope);
        return py::dict("mean"_a = f.mean_slope, "std"_a = f.std_slope, "slopes"_a = slopes);
    }, "values"_a);
}
