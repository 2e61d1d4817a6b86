#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "hamder/expr.hpp"
#include "hamder/verify.hpp"

namespace py = pybind11;
using namespace hamder;

namespace {

Params make_params(std::uint32_t p, int m, int n, std::optional<std::vector<int>> t, bool relaxed) {
    Params params;
    params.p = p;
    params.m = m;
    params.n = n;
    params.t = t ? *t : std::vector<int>(static_cast<std::size_t>(std::max(0, 2 * m)), 1);
    params.relaxed = relaxed;
    validate(params);
    return params;
}

// Holds an algebra with its parameters; the Python-facing handle.
class Session {
public:
    explicit Session(Params params) : alg_(std::move(params)) {}
    const Algebra& alg() const { return alg_; }

    std::string dims() const {
        const auto d = space_dims(alg_);
        nlohmann::ordered_json j = {{"O", d.o}, {"W", d.w}, {"Weven", d.w_even}, {"H", d.h},
                                    {"Heven", d.h_even}, {"N", d.n}, {"G", d.g}};
        return j.dump();
    }
    std::string eval(const std::string& expr) const { return print_element(alg_, parse_element(alg_, expr)); }
    std::string bracket_of(const std::string& a, const std::string& b) const {
        const Element x = parse_element(alg_, a);
        const Element y = parse_element(alg_, b);
        if (!x.is_field || !y.is_field) throw std::invalid_argument("bracket operands must be vector fields");
        return print_field(alg_, bracket(alg_, x.field, y.field));
    }
    std::string hamiltonian(const std::string& expr) const {
        const Element f = parse_element(alg_, expr);
        if (f.is_field) throw std::invalid_argument("D_H takes a polynomial");
        return print_field(alg_, d_h(alg_, f.poly));
    }
    std::optional<int> degree(const std::string& expr) const {
        const Element e = parse_element(alg_, expr);
        return e.is_field ? field_zdeg(alg_, e.field) : zdeg(alg_, e.poly);
    }
    std::string classify(const std::string& map_json) const {
        const LinearMapOnBasis d = map_from_json(alg_, nlohmann::json::parse(map_json));
        return to_json(alg_, classify_derivation(alg_, d)).dump();
    }
    std::size_t der_space_dim(int degree, const std::string& domain, std::size_t budget) const {
        const auto kind = parse_space_kind(domain);
        if (!kind || (*kind != SpaceKind::N && *kind != SpaceKind::H_even)) {
            throw std::invalid_argument("domain must be N or Heven");
        }
        const BasisPtr dom = std::make_shared<SubspaceBasis>(build_space(alg_, *kind));
        return der_space_homogeneous(alg_, dom, build_space(alg_, SpaceKind::W_even), degree, budget).size();
    }

private:
    Algebra alg_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Derivations of Hamiltonian Lie superalgebras into Witt superalgebras over F_p";

    py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ExprError", PyExc_ValueError);
    py::register_exception<NotApplicable>(m, "NotApplicable", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<MatchError>(m, "MatchError", PyExc_RuntimeError);

    py::class_<Session>(m, "Algebra")
        .def(py::init([](std::uint32_t p, int mm, int n, std::optional<std::vector<int>> t, bool relaxed) {
                 return Session(make_params(p, mm, n, std::move(t), relaxed));
             }),
             py::arg("p") = 5, py::arg("m") = 2, py::arg("n") = 4, py::arg("t") = py::none(),
             py::arg("relaxed") = false)
        .def_property_readonly("dim", [](const Session& s) { return s.alg().dim(); })
        .def("_dims_json", &Session::dims)
        .def("eval", &Session::eval, py::arg("expr"), "canonical form of an expression")
        .def("bracket", &Session::bracket_of, py::arg("a"), py::arg("b"))
        .def("d_h", &Session::hamiltonian, py::arg("f"), "D_H of a polynomial expression")
        .def("degree", &Session::degree, py::arg("expr"), "Z-degree, None when inhomogeneous or zero")
        .def("_classify_json", &Session::classify, py::arg("map_json"))
        .def("der_space_dim", &Session::der_space_dim, py::arg("degree"), py::arg("domain") = "N",
             py::arg("budget") = 4000000);

    m.def("check_ids", [] {
        std::vector<std::string> ids;
        for (const auto id : all_check_ids()) ids.push_back(to_string(id));
        return ids;
    });
    m.def(
        "_run_check_json",
        [](const std::string& name, std::uint32_t p, int mm, int n, std::optional<std::vector<int>> t, bool relaxed,
           std::uint64_t seed, std::size_t samples, int cap, std::size_t budget, bool timing) {
            const auto id = parse_check_id(name);
            if (!id) throw std::invalid_argument("unknown check id '" + name + "'");
            CheckPolicy policy{seed, samples, cap, budget, timing};
            const Params params = make_params(p, mm, n, std::move(t), relaxed);
            py::gil_scoped_release release;
            return to_json(run_check(*id, params, policy)).dump();
        },
        py::arg("name"), py::arg("p"), py::arg("m"), py::arg("n"), py::arg("t"), py::arg("relaxed"), py::arg("seed"),
        py::arg("samples"), py::arg("cap"), py::arg("budget"), py::arg("timing"));
}
