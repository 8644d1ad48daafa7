#include <memory>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maslov/evans.hpp"
#include "maslov/exterior.hpp"
#include "maslov/index.hpp"
#include "maslov/models.hpp"
#include "maslov/verdict.hpp"

namespace py = pybind11;
using namespace maslov;

namespace {

using DynMat = Eigen::MatrixXd;
using DynVec = Eigen::VectorXd;

// A system together with the objects its closures refer to.
struct PySystem {
    SystemDefinition sys;
    TruncationChoice trunc;
    std::shared_ptr<const KdvbModel> kdvb;
};

py::dict shelf_dict(const ShelfResult& s) {
    py::list crossings;
    for (const auto& e : s.crossings) {
        crossings.append(py::make_tuple(e.location, e.direction));
    }
    py::dict d;
    d["index"] = s.index;
    d["broken"] = s.broken;
    d["invariance_min"] = s.invariance_min;
    d["crossings"] = crossings;
    return d;
}

py::dict report_dict(const StabilityReport& r) {
    py::dict d;
    d["status"] = verdict_name(r.status);
    d["message"] = r.message;
    d["right_full"] = r.right_full ? py::object(py::int_(*r.right_full)) : py::object(py::none());
    d["left_full"] = r.left_full;
    d["bottom"] = r.box.bottom.index;
    d["m"] = r.box.m ? py::object(py::int_(*r.box.m)) : py::object(py::none());
    d["corner"] = r.corner;
    d["bound"] = r.bound ? py::object(py::int_(*r.bound)) : py::object(py::none());
    py::list ev;
    for (const auto& e : r.eigenvalues) ev.append(e.location);
    d["eigenvalues"] = ev;
    py::list lp;
    for (const auto& l : r.curves.loss_points) lp.append(py::make_tuple(l.lambda, l.x));
    d["loss_points"] = lp;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hyperplane index and Evans function computations";

    m.def("wedge_top", [](const DynVec& v, const DynVec& V) { return wedge_top(v, V); });
    m.def("induced_matrix", [](const DynMat& A) { return DynMat(induced_matrix(A)); });
    m.def("columns_to_coform", [](const DynMat& Y) { return DynVec(columns_to_coform(Y)); });
    m.def("coform_pushforward",
          [](const DynMat& M, const DynVec& C) { return DynVec(coform_pushforward(M, C)); });

    py::class_<GkdvModel>(m, "GkdvModel")
        .def(py::init<double, double>(), py::arg("p"), py::arg("s"))
        .def_readonly("p", &GkdvModel::p)
        .def_readonly("s", &GkdvModel::s)
        .def_readonly("alpha", &GkdvModel::alpha)
        .def_readonly("gamma", &GkdvModel::gamma)
        .def("jet", [](const GkdvModel& g, double x) {
            const WaveJet j = g.jet(x);
            return py::make_tuple(j.u, j.u1, j.u2, j.u3);
        });
    m.def("gkdv_quadratic_roots", &gkdv_quadratic_roots);
    m.def("gkdv_d2prime0", &evans_d2prime0_gkdv);

    py::class_<KdvbModel, std::shared_ptr<KdvbModel>>(m, "KdvbModel")
        .def(py::init<double, double>(), py::arg("nu"), py::arg("L") = 60.0)
        .def_property_readonly("nu", &KdvbModel::nu)
        .def_property_readonly("c_sup", &KdvbModel::c_sup)
        .def_property_readonly("saddle_rate", &KdvbModel::saddle_rate)
        .def("jet", [](const KdvbModel& k, double x) {
            const WaveJet j = k.jet(x);
            return py::make_tuple(j.u, j.u1, j.u2, j.u3);
        });
    m.def("kdvb_left_shelf_bound", py::overload_cast<double, double>(&kdvb_left_shelf_bound),
          py::arg("nu"), py::arg("C"));

    py::class_<PySystem>(m, "System")
        .def_property_readonly("label", [](const PySystem& s) { return s.sys.label; })
        .def_property_readonly("L", [](const PySystem& s) { return s.trunc.L_plus; });

    m.def("gkdv_system", [](double p, double s) {
        PySystem out;
        out.sys = gkdv_system(GkdvModel(p, s));
        out.trunc = default_truncation(out.sys);
        return out;
    }, py::arg("p"), py::arg("s"));
    m.def("kdvb_system", [](double nu) {
        PySystem out;
        out.kdvb = std::make_shared<const KdvbModel>(nu, 60.0);
        out.sys = kdvb_system(out.kdvb);
        out.trunc = default_truncation(out.sys);
        return out;
    }, py::arg("nu"));

    m.def("evans", [](const PySystem& s, double lambda, double x_match) {
        return evans_at(s.sys, lambda, x_match, s.trunc).value;
    }, py::arg("system"), py::arg("lam"), py::arg("x_match") = 0.0);

    m.def("right_shelf", [](const PySystem& s, double lambda, double x0, double x1) {
        return shelf_dict(vertical_shelf(s.sys, lambda, x0, x1, s.trunc));
    }, py::arg("system"), py::arg("lam"), py::arg("x0"), py::arg("x1"));

    m.def("box", [](const PySystem& s, double l0, double l1, double x0, double x1, std::size_t nl,
                    std::size_t nx) {
        py::gil_scoped_release release;
        const BoxResult b = maslov_box(s.sys, l0, l1, x0, x1, {nl, nx}, s.trunc);
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["bottom"] = shelf_dict(b.bottom);
        d["right"] = shelf_dict(b.right);
        d["top"] = shelf_dict(b.top);
        d["left"] = shelf_dict(b.left);
        d["m"] = b.m ? py::object(py::int_(*b.m)) : py::object(py::none());
        return d;
    }, py::arg("system"), py::arg("l0"), py::arg("l1"), py::arg("x0"), py::arg("x1"),
       py::arg("n_lambda") = 129, py::arg("n_x") = 129);

    m.def("gkdv_verdict", [](double p, double s) {
        const GkdvModel g(p, s);
        return report_dict(gkdv_verdict(g, BoxWindow{}, default_truncation(gkdv_system(g))));
    }, py::arg("p"), py::arg("s"));

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "IndexComputationError", PyExc_RuntimeError);
}
