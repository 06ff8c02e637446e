// liftsl2 command line: exact local-field arithmetic, tree geometry and the
// PSL2 -> SL2 lifting machinery behind one JSON-first interface.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "liftsl2/acceptance.hpp"
#include "liftsl2/json_io.hpp"

using namespace liftsl2;

namespace {

struct Common {
    int charc = 0;
    int p = 5;
    int r = 1;
    int N = 32;
    int depth = 6;
    int64_t cap = 1000000;
    uint64_t seed = 1;
    int jobs = 1;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--char", c.charc, "field characteristic: 0 or p")->envname("LIFTSL2_CHAR");
    cmd->add_option("--p", c.p, "residue characteristic")->envname("LIFTSL2_P");
    cmd->add_option("--r", c.r, "residue degree (q = p^r)")->envname("LIFTSL2_R");
    cmd->add_option("--N", c.N, "working precision in uniformizer digits")->envname("LIFTSL2_N");
    cmd->add_option("--depth", c.depth, "tree search depth")->envname("LIFTSL2_DEPTH");
    cmd->add_option("--cap", c.cap, "enumeration cap")->envname("LIFTSL2_CAP");
    cmd->add_option("--seed", c.seed, "deterministic sampling seed")->envname("LIFTSL2_SEED");
    cmd->add_option("--jobs", c.jobs, "worker threads where supported")->envname("LIFTSL2_JOBS");
    cmd->add_option("--out", c.out, "write the JSON artifact here instead of stdout")
        ->envname("LIFTSL2_OUT");
}

FieldPtr make_field(const Common& c) { return Field::make(c.charc, c.p, c.r, c.N); }

std::string slurp_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw UsageError("cannot read " + arg.substr(1));
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

Json parse_json_arg(const std::string& arg) {
    try {
        return Json::parse(slurp_arg(arg));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad JSON input: ") + e.what());
    }
}

void emit(const Common& c, const Json& artifact, const std::string& summary) {
    if (c.out.empty()) {
        std::cout << artifact.dump(2) << std::endl;
    } else {
        std::ofstream of(c.out);
        if (!of) throw UsageError("cannot write " + c.out);
        of << artifact.dump(2) << "\n";
    }
    std::cerr << summary << std::endl;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream of(path);
    if (!of) throw UsageError("cannot write " + path);
    of << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact SL2/PSL2 lifting toolkit over non-archimedean local fields"};
    app.require_subcommand(1);

    // ---------------- classify
    Common ccl;
    std::string cl_matrix;
    auto* cl = app.add_subcommand("classify", "elliptic/hyperbolic classification of a matrix");
    add_common(cl, ccl);
    cl->add_option("--matrix", cl_matrix, "matrix JSON (inline or @file)")->required();
    cl->callback([&] {
        Mat2 m = mat_from_json(parse_json_arg(cl_matrix));
        ElementClass c = classify(m);
        Json j{{"schema", 1}};
        j.update(element_class_to_json(c));
        if (!m.ext()) {
            TranslationLength t = translation_length_bfs(m, ccl.depth);
            j["bfs"] = Json{{"length", t.length}, {"determined", t.determined}};
        }
        emit(ccl, j,
             std::string(c.kind == ElementClass::Kind::Hyperbolic ? "hyperbolic" : "elliptic") +
                 ", translation length " + std::to_string(c.translation_length));
    });

    // ---------------- fixset
    Common cfx;
    std::string fx_matrix;
    auto* fx = app.add_subcommand("fixset", "fixed-point-set descriptor of an elliptic element");
    add_common(fx, cfx);
    fx->add_option("--matrix", fx_matrix, "matrix JSON (inline or @file)")->required();
    fx->callback([&] {
        Mat2 m = mat_from_json(parse_json_arg(fx_matrix));
        FixedSetDescriptor d = fixed_set(ProjMat(m), cfx.depth, cfx.cap);
        Json j = descriptor_to_json(d);
        emit(cfx, j, d.str());
    });

    // ---------------- lift
    Common clf;
    std::string lf_matrix, lf_gens;
    int64_t lf_bound = 0;
    auto* lf = app.add_subcommand("lift", "order-preserving lift of an element or a finite subgroup");
    add_common(lf, clf);
    lf->add_option("--matrix", lf_matrix, "single element to lift (JSON)");
    lf->add_option("--gens", lf_gens, "JSON array of generators for a subgroup lift");
    lf->add_option("--bound", lf_bound, "order search bound (default 2 p (q^2-1))");
    lf->callback([&] {
        if (lf_matrix.empty() == lf_gens.empty())
            throw UsageError("provide exactly one of --matrix or --gens");
        if (!lf_matrix.empty()) {
            Mat2 m = mat_from_json(parse_json_arg(lf_matrix));
            int64_t bound = lf_bound > 0 ? lf_bound : default_order_bound(*m.base());
            Mat2 lifted = lift_element(ProjMat(m), bound);
            Json j{{"schema", 1}, {"lift", mat_to_json(lifted)}};
            emit(clf, j, "lifted an element of order " + std::to_string(*order(lifted, bound)));
            return;
        }
        Json gj = parse_json_arg(lf_gens);
        std::vector<ProjMat> gens;
        for (const Json& m : gj) gens.emplace_back(mat_from_json(m));
        FiniteGroupTable t = enumerate_finite_group(gens, clf.cap);
        Json j{{"schema", 1}, {"order", t.size()}};
        using Kind = FiniteGroupTable::Classification::Kind;
        switch (t.classification().kind) {
            case Kind::Cyclic:
                j["classification"] = Json{{"kind", "cyclic"}, {"n", t.classification().order}};
                break;
            case Kind::BorelType:
                j["classification"] = Json{{"kind", "borel"},
                                           {"p_part", t.classification().p_part},
                                           {"cyclic_part", t.classification().cyclic_part}};
                break;
            case Kind::HasTwoTorsion: j["classification"] = Json{{"kind", "has_two_torsion"}}; break;
            case Kind::Unrecognized: j["classification"] = Json{{"kind", "unrecognized"}}; break;
        }
        std::vector<Mat2> lifts = lift_finite_subgroup(t); // raises on 2-torsion
        Json jl = Json::array();
        for (const Mat2& m : lifts) jl.push_back(mat_to_json(m));
        j["lifts"] = std::move(jl);
        emit(clf, j, "lifted a group of order " + std::to_string(t.size()));
    });

    // ---------------- lift-gog
    Common cgg;
    std::string gg_in;
    auto* gg = app.add_subcommand("lift-gog", "lift a graph of groups and verify the relations");
    add_common(gg, cgg);
    gg->add_option("--in", gg_in, "graph-of-groups JSON (inline or @file)")->required();
    gg->callback([&] {
        GraphOfGroups g = gog_from_json(parse_json_arg(gg_in));
        if (g.cap > cgg.cap) g.cap = cgg.cap;
        LiftReport r = lift_graph_of_groups(g);
        emit(cgg, lift_report_to_json(r),
             r.verdict == LiftReport::Verdict::Lift ? "lift verified" : "lift failed");
    });

    // ---------------- gallery build/scan/dense
    auto* ga = app.add_subcommand("gallery", "explicit quadruple families and scans");
    ga->require_subcommand(1);

    Common cgb;
    std::string gb_family = "F1";
    bool gb_verify = false;
    auto* gb = ga->add_subcommand("build", "construct a displayed family and verify it");
    add_common(gb, cgb);
    gb->add_option("--family", gb_family, "F1..F5 or flat")->required();
    gb->add_flag("--verify-no-lift", gb_verify, "run the 16-sign exhaustion");
    gb->callback([&] {
        FieldPtr f = make_field(cgb);
        Quad q = build_family(parse_family(gb_family), f);
        Json j{{"schema", 1},
               {"family", family_name(parse_family(gb_family))},
               {"quad", Json::array({mat_to_json(q.A), mat_to_json(q.B), mat_to_json(q.C),
                                     mat_to_json(q.D)})}};
        std::string summary = "built " + gb_family + " over " + f->describe();
        if (gb_verify) {
            NoLiftReport r = verify_no_lift(q);
            j["no_lift"] = no_lift_report_to_json(r);
            summary += r.verdict == NoLiftReport::Verdict::NoLift
                           ? ": 16/16 sign lifts evaluate to -I"
                           : ": liftable";
            if (r.verdict != NoLiftReport::Verdict::NoLift)
                throw VerificationError("family unexpectedly liftable");
        }
        emit(cgb, j, summary);
    });

    Common cgs;
    std::string gs_family = "flat";
    int gs_len = 8;
    bool gs_entries = false;
    auto* gs = ga->add_subcommand("scan", "trace scan of all reduced words up to a length");
    add_common(gs, cgs);
    gs->add_option("--family", gs_family, "F1..F5 or flat");
    gs->add_option("--max-len", gs_len, "maximum reduced word length");
    gs->add_flag("--entries", gs_entries, "include the per-word classification in the artifact");
    gs->callback([&] {
        FieldPtr f = make_field(cgs);
        Quad q = build_family(parse_family(gs_family), f);
        TraceScanReport r = trace_scan(q, gs_len, gs_entries, cgs.jobs, cgs.cap > 0 ? cgs.cap : kDefaultWordCap);
        emit(cgs, trace_scan_to_json(r, gs_entries),
             "scanned " + std::to_string(r.total_words) + " words: " +
                 std::to_string(r.zero_count) + " zero, " + std::to_string(r.pm2_count) +
                 " pm2, " + std::to_string(r.other_count) + " other");
    });

    Common cgd;
    std::string gd_lambda, gd_b = "1";
    auto* gd = ga->add_subcommand("dense", "build the rational family from lambda and b");
    add_common(gd, cgd);
    gd->add_option("--lambda", gd_lambda, "field element literal, e.g. 2 or -3/4*u^2")->required();
    gd->add_option("--b", gd_b, "field element literal");
    gd->callback([&] {
        FieldPtr f = make_field(cgd);
        DenseFamilyParams p{parse_fe_literal(f, gd_lambda), parse_fe_literal(f, gd_b),
                            std::nullopt, std::nullopt};
        DenseBuild b = build_dense(f, p);
        Json j{{"schema", 1},
               {"alpha", fe_to_json(b.alpha)},
               {"beta", fe_to_json(b.beta)},
               {"gamma", fe_to_json(b.gamma)},
               {"delta", fe_to_json(b.delta)},
               {"quad", Json::array({mat_to_json(b.quad.A), mat_to_json(b.quad.B),
                                     mat_to_json(b.quad.C), mat_to_json(b.quad.D)})}};
        emit(cgd, j, "rational family built; central relation verified");
    });

    Common cgp;
    std::string gp_word;
    std::string gp_family = "F1";
    auto* gp = ga->add_subcommand("parity", "normal-form parity check of a word on a family");
    add_common(gp, cgp);
    gp->add_option("--family", gp_family, "family with the supported presentation (F1)");
    gp->add_option("--word", gp_word, "word over AaBbCcDd")->required();
    gp->callback([&] {
        FieldPtr f = make_field(cgp);
        ParityCheckReport r =
            parity_normal_form_check(parse_family(gp_family), Word4::parse(gp_word), f);
        Json j{{"schema", 1},
               {"word", gp_word},
               {"parities", r.parities},
               {"normal_form_class", r.normal_form_class},
               {"evaluation", r.evaluation},
               {"consistent", r.consistent}};
        emit(cgp, j, r.normal_form_class + " -> " + r.evaluation +
                         (r.consistent ? " (consistent)" : " (INCONSISTENT)"));
        if (!r.consistent) throw VerificationError("parity dichotomy violated");
    });

    // ---------------- scan (top-level alias)
    Common csc;
    std::string sc_family = "flat";
    int sc_len = 8;
    bool sc_entries = false;
    auto* sc = app.add_subcommand("scan", "alias of gallery scan");
    add_common(sc, csc);
    sc->add_option("--family", sc_family, "F1..F5 or flat");
    sc->add_option("--max-len", sc_len, "maximum reduced word length");
    sc->add_flag("--entries", sc_entries, "include per-word classifications");
    sc->callback([&] {
        FieldPtr f = make_field(csc);
        Quad q = build_family(parse_family(sc_family), f);
        TraceScanReport r = trace_scan(q, sc_len, sc_entries, csc.jobs, csc.cap > 0 ? csc.cap : kDefaultWordCap);
        emit(csc, trace_scan_to_json(r, sc_entries),
             "scanned " + std::to_string(r.total_words) + " words");
    });

    // ---------------- tree-ball
    Common ctb;
    int tb_radius = 2;
    std::string tb_center, tb_matrix, tb_dot;
    auto* tb = app.add_subcommand("tree-ball", "enumerate a ball in the Bruhat-Tits tree");
    add_common(tb, ctb);
    tb->add_option("--radius", tb_radius, "ball radius");
    tb->add_option("--center", tb_center, "center vertex JSON (default standard vertex)");
    tb->add_option("--matrix", tb_matrix, "highlight vertices fixed by this matrix");
    tb->add_option("--dot", tb_dot, "also write a DOT dump here");
    tb->callback([&] {
        FieldPtr f = make_field(ctb);
        TreeVertex center = tb_center.empty() ? TreeVertex::standard(f)
                                              : vertex_from_json(f, parse_json_arg(tb_center));
        std::optional<Mat2> hl;
        if (!tb_matrix.empty()) hl = mat_from_json(parse_json_arg(tb_matrix));
        std::vector<TreeVertex> B = ball(f, center, tb_radius, ctb.cap);
        Json verts = Json::array();
        for (const TreeVertex& v : B) {
            Json jv = vertex_to_json(v);
            if (hl) jv["fixed"] = (act(*hl, v) == v);
            verts.push_back(std::move(jv));
        }
        Json j{{"schema", 1},
               {"field", field_to_json(*f)},
               {"radius", tb_radius},
               {"count", B.size()},
               {"vertices", std::move(verts)}};
        if (!tb_dot.empty()) write_text(tb_dot, ball_dot(f, center, tb_radius, hl ? &*hl : nullptr, ctb.cap));
        emit(ctb, j, std::to_string(B.size()) + " vertices");
    });

    // ---------------- selftest
    Common cst;
    int st_criterion = 0;
    auto* st = app.add_subcommand("selftest", "run the acceptance battery");
    add_common(st, cst);
    st->add_option("--criterion", st_criterion, "run a single criterion (1..11)");
    st->callback([&] {
        AcceptanceOptions opt;
        if (st_criterion > 0) opt.only_criterion = st_criterion;
        if (st->count("--p") > 0) opt.only_p = cst.p;
        opt.jobs = (unsigned)std::max(1, cst.jobs);
        auto results = run_acceptance(opt);
        bool all = !results.empty();
        Json arr = Json::array();
        for (const auto& r : results) {
            std::cerr << format_result_line(r) << "\n";
            arr.push_back(Json{{"criterion", r.index},
                               {"name", r.name},
                               {"pass", r.pass},
                               {"seconds", r.seconds},
                               {"detail", r.detail}});
            all = all && r.pass;
        }
        emit(cst, Json{{"schema", 1}, {"results", std::move(arr)}, {"pass", all}},
             all ? "selftest passed" : "selftest FAILED");
        if (!all) throw VerificationError("acceptance criteria failed");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return exit_code_for(e.family());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << std::endl;
        return exit_code_for(ErrorFamily::Input);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
