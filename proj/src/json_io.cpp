#include "liftsl2/json_io.hpp"

#include <algorithm>

namespace liftsl2 {

Json field_to_json(const Field& f) {
    return Json{{"char", f.characteristic()}, {"p", f.p()}, {"r", f.r()}, {"N", f.precision()}};
}

FieldPtr field_from_json(const Json& j) {
    return Field::make(j.at("char").get<int>(), j.at("p").get<int>(), j.at("r").get<int>(),
                       j.at("N").get<int>());
}

Json fe_to_json(const Fe& x) {
    const FieldPtr& f = x.field();
    Json j;
    if (x.is_exact_zero()) {
        j["val"] = "inf";
        j["digits"] = Json::array();
        return j;
    }
    if (x.is_near_zero()) {
        j["val"] = "inf";
        j["approx"] = x.valuation_lower_bound();
        j["digits"] = Json::array();
        return j;
    }
    j["val"] = x.valuation();
    Json digits = Json::array();
    const auto& d = x.digits();
    int N = f->precision();
    for (int k = 0; k < N; ++k) {
        int code = (size_t)k < d.size() ? d[(size_t)k] : 0;
        for (int c : f->residue().coords(code)) digits.push_back(c);
    }
    j["digits"] = std::move(digits);
    j["m"] = (int)d.size();
    if (x.exact()) j["exact"] = true;
    if (x.negative_flag()) j["neg"] = true;
    return j;
}

Fe fe_from_json(const FieldPtr& f, const Json& j) {
    if (j.at("val").is_string()) {
        if (j.at("val").get<std::string>() != "inf") throw ParseError("bad valuation");
        if (j.contains("approx")) return Fe::near_zero(f, j.at("approx").get<int>());
        return Fe::zero(f);
    }
    int val = j.at("val").get<int>();
    const Json& digits = j.at("digits");
    int r = f->r();
    if ((int)digits.size() % r != 0) throw ParseError("digit array length must be a multiple of r");
    std::vector<int32_t> codes;
    for (size_t i = 0; i + r <= digits.size(); i += (size_t)r) {
        std::vector<int> coords;
        for (int k = 0; k < r; ++k) coords.push_back(digits[i + (size_t)k].get<int>());
        codes.push_back(f->residue().from_coords(coords));
    }
    int m = j.contains("m") ? j.at("m").get<int>() : (int)codes.size();
    if (m < 0 || m > (int)codes.size()) throw ParseError("bad certified digit count");
    codes.resize((size_t)m);
    bool exact = j.value("exact", false);
    bool neg = j.value("neg", false);
    if (exact)
        while (!codes.empty() && codes.back() == 0) codes.pop_back();
    return Fe::from_parts(f, Fe::State::Val, val, std::move(codes), exact, neg);
}

Json scalar_to_json(const Scalar& s) {
    if (!s.ext()) return fe_to_json(s.re());
    return Json{{"re", fe_to_json(s.re())}, {"im", fe_to_json(s.im())}};
}

Scalar scalar_from_json(const FieldPtr& f, bool ext, const Json& j) {
    if (!ext) return Scalar::from_fe(f, false, fe_from_json(f, j));
    if (!j.contains("re")) throw ParseError("extension scalar needs re/im parts");
    return Scalar(f, true, fe_from_json(f, j.at("re")), fe_from_json(f, j.at("im")));
}

Json mat_to_json(const Mat2& m) {
    Json j;
    j["schema"] = 1;
    j["field"] = field_to_json(*m.base());
    j["ext"] = m.ext();
    Json entries = Json::array();
    for (int i = 0; i < 4; ++i) entries.push_back(scalar_to_json(m.entry(i)));
    j["entries"] = std::move(entries);
    return j;
}

Mat2 mat_from_json(const Json& j) {
    FieldPtr f = field_from_json(j.at("field"));
    bool ext = j.value("ext", false);
    const Json& e = j.at("entries");
    if (e.size() != 4) throw ParseError("matrix needs 4 entries");
    return Mat2::from_entries(scalar_from_json(f, ext, e[0]), scalar_from_json(f, ext, e[1]),
                              scalar_from_json(f, ext, e[2]), scalar_from_json(f, ext, e[3]));
}

Json vertex_to_json(const TreeVertex& v) {
    return Json{{"n", v.n}, {"b", fe_to_json(v.b)}};
}

TreeVertex vertex_from_json(const FieldPtr& f, const Json& j) {
    return make_vertex(f, j.at("n").get<int>(), fe_from_json(f, j.at("b")));
}

namespace {
Json proj_point_to_json(const ProjPoint& p) {
    return Json{{"x", scalar_to_json(p.x)}, {"y", scalar_to_json(p.y)}};
}
} // namespace

Json descriptor_to_json(const FixedSetDescriptor& d) {
    Json j;
    j["schema"] = 1;
    if (d.kind == FixedSetDescriptor::Kind::Horoball) {
        j["kind"] = "horoball";
        j["end"] = proj_point_to_json(*d.end);
        j["level"] = d.level;
        j["apex"] = vertex_to_json(d.apex);
        return j;
    }
    j["kind"] = "band";
    switch (d.nerve) {
        case FixedSetDescriptor::Nerve::Vertex: j["nerve"] = "vertex"; break;
        case FixedSetDescriptor::Nerve::Edge: j["nerve"] = "edge"; break;
        case FixedSetDescriptor::Nerve::Line: j["nerve"] = "line"; break;
    }
    Json nv = Json::array();
    for (const TreeVertex& v : d.nerve_vertices) nv.push_back(vertex_to_json(v));
    j["nerve_vertices"] = std::move(nv);
    if (d.ends) {
        j["ends"] = Json::array({proj_point_to_json(d.ends->first),
                                 proj_point_to_json(d.ends->second)});
    }
    j["radius2"] = d.radius2;
    return j;
}

Json nesting_to_json(const NestingReport& r) {
    const char* outcome = nullptr;
    switch (r.outcome) {
        case NestingOutcome::Disjoint: outcome = "disjoint"; break;
        case NestingOutcome::GSubsetH: outcome = "g_subset_h"; break;
        case NestingOutcome::HSubsetG: outcome = "h_subset_g"; break;
        case NestingOutcome::SameNerve: outcome = "same_nerve"; break;
        case NestingOutcome::Crossing: outcome = "crossing"; break;
    }
    return Json{{"schema", 1},
                {"outcome", outcome},
                {"same_nerve", r.same_nerve},
                {"g_subset_h", r.g_subset_h},
                {"h_subset_g", r.h_subset_g},
                {"fix_g", descriptor_to_json(r.fix_g)},
                {"fix_h", descriptor_to_json(r.fix_h)}};
}

Json element_class_to_json(const ElementClass& c) {
    return Json{{"kind", c.kind == ElementClass::Kind::Hyperbolic ? "hyperbolic" : "elliptic"},
                {"length", c.translation_length}};
}

Json gog_to_json(const GraphOfGroups& g) {
    Json j;
    j["schema"] = 1;
    j["field"] = field_to_json(*g.field);
    j["ext"] = g.ext;
    Json vs = Json::array();
    for (const GogVertex& v : g.vertices) {
        Json gens = Json::array();
        for (const ProjMat& m : v.gens) gens.push_back(mat_to_json(m.rep()));
        vs.push_back(Json{{"id", v.id}, {"gens", std::move(gens)}});
    }
    j["vertices"] = std::move(vs);
    Json es = Json::array();
    for (const GogEdge& e : g.edges) {
        Json je{{"id", e.id},     {"reverse", e.reverse_id}, {"from", e.from},
                {"to", e.to},     {"in_tree", e.in_tree}};
        Json gens = Json::array(), se = Json::array(), seb = Json::array();
        for (const ProjMat& m : e.edge_gens) gens.push_back(mat_to_json(m.rep()));
        for (const ProjMat& m : e.sigma_e) se.push_back(mat_to_json(m.rep()));
        for (const ProjMat& m : e.sigma_ebar) seb.push_back(mat_to_json(m.rep()));
        je["edge_gens"] = std::move(gens);
        je["sigma_e"] = std::move(se);
        je["sigma_ebar"] = std::move(seb);
        je["stable_letter"] = e.stable_letter ? mat_to_json(e.stable_letter->rep()) : Json();
        es.push_back(std::move(je));
    }
    j["edges"] = std::move(es);
    j["relators"] = g.relators;
    return j;
}

GraphOfGroups gog_from_json(const Json& j) {
    GraphOfGroups g;
    g.field = field_from_json(j.at("field"));
    g.ext = j.value("ext", false);
    if (j.contains("cap")) g.cap = j.at("cap").get<int64_t>();
    for (const Json& jv : j.at("vertices")) {
        GogVertex v;
        v.id = jv.at("id").get<std::string>();
        for (const Json& jm : jv.at("gens")) v.gens.emplace_back(mat_from_json(jm));
        g.vertices.push_back(std::move(v));
    }
    if (j.contains("edges"))
        for (const Json& je : j.at("edges")) {
            GogEdge e;
            e.id = je.at("id").get<std::string>();
            e.reverse_id = je.value("reverse", e.id + "_rev");
            e.from = je.at("from").get<std::string>();
            e.to = je.at("to").get<std::string>();
            e.in_tree = je.value("in_tree", false);
            if (je.contains("edge_gens"))
                for (const Json& jm : je.at("edge_gens")) e.edge_gens.emplace_back(mat_from_json(jm));
            if (je.contains("sigma_e"))
                for (const Json& jm : je.at("sigma_e")) e.sigma_e.emplace_back(mat_from_json(jm));
            if (je.contains("sigma_ebar"))
                for (const Json& jm : je.at("sigma_ebar"))
                    e.sigma_ebar.emplace_back(mat_from_json(jm));
            if (je.contains("stable_letter") && !je.at("stable_letter").is_null())
                e.stable_letter = ProjMat(mat_from_json(je.at("stable_letter")));
            g.edges.push_back(std::move(e));
        }
    if (j.contains("relators"))
        for (const Json& jr : j.at("relators")) g.relators.push_back(jr.get<std::string>());
    return g;
}

Json lift_report_to_json(const LiftReport& r) {
    Json j;
    j["schema"] = 1;
    j["verdict"] = r.verdict == LiftReport::Verdict::Lift ? "lift" : "fail";
    Json lifted = Json::object();
    for (const auto& [k, m] : r.lifted) lifted[k] = mat_to_json(m);
    j["lifted"] = std::move(lifted);
    Json ec = Json::array();
    for (const auto& c : r.edge_checks)
        ec.push_back(Json{{"edge", c.edge}, {"gen", c.gen_index}, {"ok", c.ok}});
    j["edge_checks"] = std::move(ec);
    Json rc = Json::array();
    for (const auto& c : r.relator_checks)
        rc.push_back(Json{{"word", c.word}, {"result", c.result}, {"ok", c.ok}});
    j["relator_checks"] = std::move(rc);
    return j;
}

Json no_lift_report_to_json(const NoLiftReport& r) {
    return Json{{"schema", 1},
                {"verdict", r.verdict == NoLiftReport::Verdict::NoLift ? "no_lift" : "liftable"},
                {"relator", r.relator.str()},
                {"minus_count", r.minus_count},
                {"sign_lifts", 16}};
}

Json trace_scan_to_json(const TraceScanReport& r, bool with_entries) {
    Json j{{"schema", 1},
           {"max_len", r.max_len},
           {"total_words", r.total_words},
           {"counts",
            Json{{"zero", r.zero_count}, {"pm2", r.pm2_count}, {"other", r.other_count}}},
           {"any_projective_involution", r.any_projective_involution},
           {"any_unipotent", r.any_unipotent}};
    if (with_entries) {
        Json es = Json::array();
        for (const auto& e : r.entries) es.push_back(Json{{"word", e.word}, {"trace", e.trace_class}});
        j["entries"] = std::move(es);
    }
    return j;
}

namespace {

// "u", "t", "u^k" (optionally with a leading '-'); returns the power
std::optional<int> uniformizer_power(const std::string& tok) {
    std::string t = tok;
    if (!t.empty() && t[0] == '-') t = t.substr(1);
    if (t.empty() || (t[0] != 'u' && t[0] != 't')) return std::nullopt;
    if (t.size() == 1) return 1;
    if (t[1] != '^') return std::nullopt;
    try {
        return std::stoi(t.substr(2));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace

// product of '*'-separated factors: integers, fractions (the denominator may
// itself be a uniformizer power) and uniformizer powers; e.g. "-3/4*u^2",
// "1/u", "u^-1", "7".
Fe parse_fe_literal(const FieldPtr& f, const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw ParseError("empty field-element literal");
    Fe acc = Fe::one(f);
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t star = s.find('*', pos);
        std::string tok = s.substr(pos, star == std::string::npos ? star : star - pos);
        pos = star == std::string::npos ? s.size() + 1 : star + 1;
        if (tok.empty()) throw ParseError("empty factor in literal " + text);
        if (auto k = uniformizer_power(tok)) {
            acc = acc * Fe::uniformizer_pow(f, *k);
            if (tok[0] == '-') acc = -acc;
            continue;
        }
        size_t slash = tok.find('/');
        try {
            if (slash == std::string::npos) {
                acc = acc * Fe::from_int(f, std::stoll(tok));
            } else {
                std::string den = tok.substr(slash + 1);
                Fe num = Fe::from_int(f, std::stoll(tok.substr(0, slash)));
                if (auto k = uniformizer_power(den)) {
                    if (den[0] == '-') num = -num;
                    acc = acc * num * Fe::uniformizer_pow(f, -*k);
                } else {
                    Fe d = Fe::from_int(f, std::stoll(den));
                    if (d.is_exact_zero()) throw DivisionByZero("denominator vanishes");
                    acc = acc * num / d;
                }
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("bad numeric literal " + tok);
        } catch (const std::out_of_range&) {
            throw ParseError("numeric literal out of range " + tok);
        }
    }
    return acc;
}

} // namespace liftsl2
