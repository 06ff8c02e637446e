// pybind11 module exposing the main operations. The boundary speaks JSON
// strings (the same schemas the CLI emits); the python package wraps them in
// a friendlier surface.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "liftsl2/acceptance.hpp"
#include "liftsl2/json_io.hpp"

namespace py = pybind11;
using namespace liftsl2;

namespace {

FieldPtr field_of(const std::string& field_json) {
    return field_from_json(Json::parse(field_json));
}

Fe fe_of(const FieldPtr& f, const std::string& j) { return fe_from_json(f, Json::parse(j)); }

Mat2 mat_of(const std::string& j) { return mat_from_json(Json::parse(j)); }

std::string dump(const Json& j) { return j.dump(); }

Quad quad_of(const std::vector<std::string>& mats) {
    if (mats.size() != 4) throw UsageError("a quadruple needs 4 matrices");
    return Quad{mat_of(mats[0]), mat_of(mats[1]), mat_of(mats[2]), mat_of(mats[3])};
}

} // namespace

PYBIND11_MODULE(_liftsl2, m) {
    m.doc() = "exact SL2/PSL2 lifting toolkit over non-archimedean local fields";

    py::register_exception<PrecisionExhausted>(m, "PrecisionExhausted");
    py::register_exception<DivisionByZero>(m, "DivisionByZero");
    static py::exception<Error> base_exc(m, "LiftError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const PrecisionExhausted&) {
            std::rethrow_exception(p);
        } catch (const DivisionByZero&) {
            std::rethrow_exception(p);
        } catch (const Error& e) {
            base_exc(e.what());
        }
    });

    m.def("make_field", [](int charc, int p, int r, int N) {
        return dump(field_to_json(*Field::make(charc, p, r, N)));
    });
    m.def("field_describe", [](const std::string& f) { return field_of(f)->describe(); });

    m.def("fe_from_literal", [](const std::string& f, const std::string& lit) {
        FieldPtr fp = field_of(f);
        return dump(fe_to_json(parse_fe_literal(fp, lit)));
    });
    m.def("fe_arith", [](const std::string& f, const std::string& a, const std::string& b,
                         const std::string& op) {
        FieldPtr fp = field_of(f);
        FieldOp o;
        if (op == "add") o = FieldOp::Add;
        else if (op == "sub") o = FieldOp::Sub;
        else if (op == "mul") o = FieldOp::Mul;
        else if (op == "div") o = FieldOp::Div;
        else if (op == "neg") o = FieldOp::Neg;
        else if (op == "inv") o = FieldOp::Inv;
        else throw UsageError("bad op " + op);
        return dump(fe_to_json(field_arith(fe_of(fp, a), fe_of(fp, b), o)));
    });
    m.def("fe_eq", [](const std::string& f, const std::string& a, const std::string& b) {
        FieldPtr fp = field_of(f);
        return Fe::eq(fe_of(fp, a), fe_of(fp, b));
    });
    m.def("fe_valuation", [](const std::string& f, const std::string& a) -> py::object {
        auto v = fe_of(field_of(f), a).valuation_or_inf();
        if (!v) return py::none();
        return py::int_(*v);
    });
    m.def("fe_str", [](const std::string& f, const std::string& a) {
        return fe_of(field_of(f), a).str();
    });
    m.def("fe_is_square", [](const std::string& f, const std::string& a) {
        return is_square(fe_of(field_of(f), a));
    });
    m.def("fe_sqrt", [](const std::string& f, const std::string& a) {
        return dump(fe_to_json(sqrt(fe_of(field_of(f), a))));
    });
    m.def("teichmuller", [](const std::string& f, int c, py::object order) {
        std::optional<int64_t> oc;
        if (!order.is_none()) oc = order.cast<int64_t>();
        return dump(fe_to_json(teichmuller(field_of(f), c, oc)));
    });

    m.def("mat_from_entries",
          [](const std::string& f, bool ext, const std::vector<std::string>& entries) {
              FieldPtr fp = field_of(f);
              if (entries.size() != 4) throw UsageError("need 4 entries");
              std::array<Scalar, 4> e;
              for (size_t i = 0; i < 4; ++i)
                  e[i] = scalar_from_json(fp, ext, Json::parse(entries[i]));
              return dump(mat_to_json(Mat2::from_entries(e[0], e[1], e[2], e[3])));
          });
    m.def("mat_mul", [](const std::string& a, const std::string& b) {
        return dump(mat_to_json(mat_of(a) * mat_of(b)));
    });
    m.def("mat_inv", [](const std::string& a) { return dump(mat_to_json(mat_of(a).inv())); });
    m.def("mat_neg", [](const std::string& a) { return dump(mat_to_json(-mat_of(a))); });
    m.def("mat_pow", [](const std::string& a, int64_t e) {
        return dump(mat_to_json(mat_of(a).pow(e)));
    });
    m.def("mat_eq", [](const std::string& a, const std::string& b) {
        return Mat2::eq(mat_of(a), mat_of(b));
    });
    m.def("mat_trace", [](const std::string& a) { return dump(scalar_to_json(mat_of(a).trace())); });

    m.def("classify", [](const std::string& a) {
        return dump(element_class_to_json(classify(mat_of(a))));
    });
    m.def("translation_length", [](const std::string& a, int depth) {
        TranslationLength t = translation_length_bfs(mat_of(a), depth);
        return dump(Json{{"length", t.length}, {"determined", t.determined}});
    });
    m.def("order", [](const std::string& a, int64_t bound) -> py::object {
        auto o = order(mat_of(a), bound);
        if (!o) return py::none();
        return py::int_(*o);
    });
    m.def("proj_order", [](const std::string& a, int64_t bound) -> py::object {
        auto o = proj_order(ProjMat(mat_of(a)), bound);
        if (!o) return py::none();
        return py::int_(*o);
    });
    m.def("is_unipotent", [](const std::string& a) { return is_unipotent(mat_of(a)); });
    m.def("eval_word", [](const std::string& word, const std::vector<std::string>& mats) {
        return dump(mat_to_json(eval_word(Word4::parse(word), quad_of(mats))));
    });

    m.def("act", [](const std::string& mat, const std::string& vertex) {
        Mat2 g = mat_of(mat);
        TreeVertex v = vertex_from_json(g.base(), Json::parse(vertex));
        return dump(vertex_to_json(act(g, v)));
    });
    m.def("tree_distance", [](const std::string& f, const std::string& v1, const std::string& v2) {
        FieldPtr fp = field_of(f);
        return distance(vertex_from_json(fp, Json::parse(v1)), vertex_from_json(fp, Json::parse(v2)));
    });
    m.def("tree_ball", [](const std::string& f, int radius, int64_t cap) {
        FieldPtr fp = field_of(f);
        std::vector<std::string> out;
        for (const TreeVertex& v : ball(fp, TreeVertex::standard(fp), radius, cap))
            out.push_back(dump(vertex_to_json(v)));
        return out;
    });
    m.def("fixed_set", [](const std::string& a, int depth) {
        return dump(descriptor_to_json(fixed_set(ProjMat(mat_of(a)), depth)));
    });
    m.def("nesting_check", [](const std::string& a, const std::string& b, int depth) {
        return dump(nesting_to_json(nesting_check(ProjMat(mat_of(a)), ProjMat(mat_of(b)), depth)));
    });

    m.def("lift_element", [](const std::string& a, int64_t bound) {
        Mat2 g = mat_of(a);
        int64_t bd = bound > 0 ? bound : default_order_bound(*g.base());
        return dump(mat_to_json(lift_element(ProjMat(g), bd)));
    });
    m.def("lift_subgroup", [](const std::vector<std::string>& gens, int64_t cap) {
        std::vector<ProjMat> pg;
        for (const std::string& g : gens) pg.emplace_back(mat_of(g));
        FiniteGroupTable t = enumerate_finite_group(pg, cap);
        Json j{{"order", t.size()}};
        using Kind = FiniteGroupTable::Classification::Kind;
        switch (t.classification().kind) {
            case Kind::Cyclic: j["kind"] = "cyclic"; j["n"] = t.classification().order; break;
            case Kind::BorelType:
                j["kind"] = "borel";
                j["p_part"] = t.classification().p_part;
                j["cyclic_part"] = t.classification().cyclic_part;
                break;
            case Kind::HasTwoTorsion: j["kind"] = "has_two_torsion"; break;
            case Kind::Unrecognized: j["kind"] = "unrecognized"; break;
        }
        if (t.classification().kind == Kind::Cyclic ||
            t.classification().kind == Kind::BorelType) {
            Json lifts = Json::array();
            for (const Mat2& mlift : lift_finite_subgroup(t)) lifts.push_back(mat_to_json(mlift));
            j["lifts"] = std::move(lifts);
        }
        return dump(j);
    });
    m.def("lift_gog", [](const std::string& gog) {
        return dump(lift_report_to_json(lift_graph_of_groups(gog_from_json(Json::parse(gog)))));
    });

    m.def("build_family", [](const std::string& name, const std::string& f) {
        Quad q = build_family(parse_family(name), field_of(f));
        std::vector<std::string> out{dump(mat_to_json(q.A)), dump(mat_to_json(q.B)),
                                     dump(mat_to_json(q.C)), dump(mat_to_json(q.D))};
        return out;
    });
    m.def("verify_no_lift", [](const std::vector<std::string>& mats) {
        return dump(no_lift_report_to_json(verify_no_lift(quad_of(mats))));
    });
    m.def("build_dense",
          [](const std::string& f, const std::string& lambda, const std::string& b) {
              FieldPtr fp = field_of(f);
              DenseBuild db = build_dense(
                  fp, {parse_fe_literal(fp, lambda), parse_fe_literal(fp, b), std::nullopt,
                       std::nullopt});
              Json j{{"field", field_to_json(*db.quad.A.base())},
                     {"alpha", fe_to_json(db.alpha)},
                     {"beta", fe_to_json(db.beta)},
                     {"gamma", fe_to_json(db.gamma)},
                     {"delta", fe_to_json(db.delta)},
                     {"quad", Json::array({mat_to_json(db.quad.A), mat_to_json(db.quad.B),
                                           mat_to_json(db.quad.C), mat_to_json(db.quad.D)})}};
              return dump(j);
          });
    m.def("trace_scan",
          [](const std::vector<std::string>& mats, int max_len, bool entries, int jobs) {
              return dump(trace_scan_to_json(trace_scan(quad_of(mats), max_len, entries, jobs),
                                             entries));
          });
    m.def("parity_check", [](const std::string& family, const std::string& word,
                             const std::string& f) {
        ParityCheckReport r =
            parity_normal_form_check(parse_family(family), Word4::parse(word), field_of(f));
        return dump(Json{{"parities", r.parities},
                         {"normal_form_class", r.normal_form_class},
                         {"evaluation", r.evaluation},
                         {"consistent", r.consistent}});
    });

    m.def("selftest", [](int criterion, int jobs) {
        AcceptanceOptions opt;
        if (criterion > 0) opt.only_criterion = criterion;
        opt.jobs = (unsigned)std::max(1, jobs);
        auto results = run_acceptance(opt);
        bool all = !results.empty();
        std::string text;
        for (const auto& r : results) {
            text += format_result_line(r) + "\n";
            all = all && r.pass;
        }
        return py::make_tuple(all, text);
    });

    m.attr("__version__") = "0.1.0";
}
