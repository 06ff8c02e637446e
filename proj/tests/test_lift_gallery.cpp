#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "liftsl2/gallery.hpp"
#include "liftsl2/json_io.hpp"
#include "liftsl2/lift.hpp"

using namespace liftsl2;

namespace {

FieldPtr Q(int p, int N) { return Field::make(0, p, 1, N); }
FieldPtr L(int p, int r, int N) { return Field::make(p, p, r, N); }

Scalar sc(const FieldPtr& f, int64_t n) { return Scalar::from_int(f, false, n); }

Mat2 mat(const FieldPtr& f, int64_t a, int64_t b, int64_t c, int64_t d) {
    return Mat2::from_entries(sc(f, a), sc(f, b), sc(f, c), sc(f, d));
}

Mat2 diag_fe(const FieldPtr& f, const Fe& x) {
    Scalar s = Scalar::from_fe(f, false, x);
    Scalar z = Scalar::zero(f, false);
    return Mat2::from_entries(s, z, z, s.inv());
}

Mat2 diag_u(const FieldPtr& f, int k = 1) {
    Scalar s = Scalar::uniformizer_pow(f, false, k);
    Scalar z = Scalar::zero(f, false);
    return Mat2::from_entries(s, z, z, s.inv());
}

// independent exact-rational oracle for the dense-family formulas
struct Rat {
    long long n, d;
    Rat(long long nn, long long dd) : n(nn), d(dd) {
        if (d < 0) { n = -n; d = -d; }
        long long g = std::__gcd(std::abs(n), d);
        if (g > 1) { n /= g; d /= g; }
    }
    Rat operator+(const Rat& o) const { return {n * o.d + o.n * d, d * o.d}; }
    Rat operator-(const Rat& o) const { return {n * o.d - o.n * d, d * o.d}; }
    Rat operator*(const Rat& o) const { return {n * o.n, d * o.d}; }
    Rat operator/(const Rat& o) const { return {n * o.d, d * o.n}; }
    bool operator==(const Rat& o) const { return n == o.n && d == o.d; }
};

Fe rat_to_fe(const FieldPtr& f, const Rat& r) { return Fe::from_fraction(f, r.n, r.d); }

Fe rand_unit(const FieldPtr& f, std::mt19937_64& rng) {
    std::uniform_int_distribution<int64_t> dd(0, f->q() - 1);
    std::vector<int32_t> digits(f->precision());
    digits[0] = (int32_t)(1 + dd(rng) % (f->q() - 1));
    for (size_t i = 1; i < digits.size(); ++i) digits[i] = (int32_t)dd(rng);
    while (digits.back() == 0) digits.pop_back();
    return Fe::from_parts(f, Fe::State::Val, 0, digits, true, false);
}

Mat2 rand_sl2(const FieldPtr& f, std::mt19937_64& rng) {
    for (int tries = 0; tries < 100; ++tries) {
        Fe a = rand_unit(f, rng);
        Fe b = rand_unit(f, rng);
        Fe c = rand_unit(f, rng);
        Fe d = (Fe::one(f) + b * c) / a;
        if (d.is_zeroish()) continue;
        return Mat2::from_entries(Scalar::from_fe(f, false, a), Scalar::from_fe(f, false, b),
                                  Scalar::from_fe(f, false, c), Scalar::from_fe(f, false, d));
    }
    throw InternalError("sampling failed");
}

} // namespace

TEST_CASE("lift_element picks the odd-order preimage") {
    auto f = Q(7, 16);
    Mat2 I = Mat2::identity(f, false);
    CHECK(Mat2::eq(lift_element(ProjMat(I), 10), I));

    Fe w = teichmuller(f, 2, 3);
    Mat2 A = diag_fe(f, w);
    Mat2 lifted = lift_element(ProjMat(A), 10);
    CHECK(*order(lifted, 10) == 3);
    CHECK(*order(-lifted, 10) == 6);
    CHECK(ProjMat::eq(ProjMat(lifted), ProjMat(A)));
    // exactly one of {M, -M} has odd order: the canonical rep may be -A
    CHECK((Mat2::eq(lifted, A) || Mat2::eq(lifted, -A)));

    CHECK_THROWS_AS(lift_element(ProjMat(mat(f, 0, 1, -1, 0)), 10), EvenOrder);
    CHECK_THROWS_AS(lift_element(ProjMat(diag_u(f)), 10), UnboundedOrder);
}

TEST_CASE("EvenOrder exactly on trace-zero inputs") {
    auto f = Q(7, 16);
    std::mt19937_64 rng(5);
    Fe w = teichmuller(f, 2, 3);
    for (int it = 0; it < 20; ++it) {
        Mat2 s = rand_sl2(f, rng);
        for (const Mat2& g : {s * diag_fe(f, w) * s.inv(), s * mat(f, 0, 1, -1, 0) * s.inv()}) {
            ProjMat pg(g);
            bool invol = proj_is_involution(pg);
            bool threw = false;
            try {
                lift_element(pg, 100);
            } catch (const EvenOrder&) {
                threw = true;
            }
            CHECK(invol == threw);
        }
    }
}

TEST_CASE("group enumeration and classification") {
    auto f = Q(7, 16);
    Fe w = teichmuller(f, 2, 3);
    FiniteGroupTable cyc = enumerate_finite_group({ProjMat(diag_fe(f, w))}, 100);
    CHECK(cyc.size() == 3);
    CHECK(cyc.classification().kind == FiniteGroupTable::Classification::Kind::Cyclic);
    CHECK(cyc.classification().order == 3);

    auto g7 = L(7, 1, 12);
    FiniteGroupTable borel =
        enumerate_finite_group({ProjMat(mat(g7, 1, 1, 0, 1)), ProjMat(mat(g7, 2, 0, 0, 4))}, 100);
    CHECK(borel.size() == 21);
    CHECK(borel.classification().kind == FiniteGroupTable::Classification::Kind::BorelType);
    CHECK(borel.classification().p_part == 7);
    CHECK(borel.classification().cyclic_part == 3);

    FiniteGroupTable q8 = enumerate_finite_group({ProjMat(mat(f, 0, 1, -1, 0))}, 100);
    CHECK(q8.classification().kind == FiniteGroupTable::Classification::Kind::HasTwoTorsion);

    CHECK_THROWS_AS(enumerate_finite_group({ProjMat(diag_u(f))}, 50), CapExceeded);
}

TEST_CASE("finite subgroup lifts") {
    auto f = Q(7, 16);
    Fe w = teichmuller(f, 2, 3);
    FiniteGroupTable cyc = enumerate_finite_group({ProjMat(diag_fe(f, w))}, 100);
    std::vector<Mat2> lifts = lift_finite_subgroup(cyc);
    CHECK(lifts.size() == 3);
    for (size_t i = 0; i < lifts.size(); ++i) {
        auto o = order(lifts[i], 10);
        REQUIRE(o);
        CHECK(*o % 2 == 1);
    }

    // trivial group lifts to {I}
    FiniteGroupTable triv = enumerate_finite_group({ProjMat(Mat2::identity(f, false))}, 10);
    CHECK(lift_finite_subgroup(triv).size() == 1);

    // the 21-element table: closure check covers all 441 products
    auto g7 = L(7, 1, 12);
    FiniteGroupTable borel =
        enumerate_finite_group({ProjMat(mat(g7, 1, 1, 0, 1)), ProjMat(mat(g7, 2, 0, 0, 4))}, 100);
    std::vector<Mat2> blifts = lift_finite_subgroup(borel);
    CHECK(blifts.size() == 21);
    Mat2 minusI = -Mat2::identity(g7, false);
    for (const Mat2& m : blifts) CHECK(!Mat2::eq(m, minusI));

    FiniteGroupTable bad = enumerate_finite_group({ProjMat(mat(f, 0, 1, -1, 0))}, 100);
    CHECK_THROWS_AS(lift_finite_subgroup(bad), HasTwoTorsion);
}

TEST_CASE("graph of groups lifts: the three basic shapes") {
    auto f = Q(7, 16);
    Fe w = teichmuller(f, 2, 3);
    Mat2 gen = diag_fe(f, w);

    // (a) single vertex with a cyclic group, no edges
    GraphOfGroups a;
    a.field = f;
    a.vertices.push_back({"v0", {ProjMat(gen)}});
    LiftReport ra = lift_graph_of_groups(a);
    CHECK(ra.verdict == LiftReport::Verdict::Lift);
    CHECK(ra.lifted.count("g:v0:0") == 1);
    CHECK(*order(ra.lifted.at("g:v0:0"), 10) == 3);

    // (b) trivial vertex groups, one tree edge plus one non-tree edge:
    // a rank-one free group on a hyperbolic stable letter
    GraphOfGroups b;
    b.field = f;
    b.vertices.push_back({"v0", {}});
    b.vertices.push_back({"v1", {}});
    GogEdge tree{"e0", "e0r", "v0", "v1", true, {}, {}, {}, std::nullopt};
    GogEdge loop{"e1", "e1r", "v1", "v0", false, {}, {}, {}, ProjMat(diag_u(f))};
    b.edges = {tree, loop};
    LiftReport rb = lift_graph_of_groups(b);
    CHECK(rb.verdict == LiftReport::Verdict::Lift);
    CHECK(rb.lifted.count("t:e1") == 1);

    // (c) cyclic vertex group with a conjugation-compatible self-edge
    GraphOfGroups c;
    c.field = f;
    c.vertices.push_back({"v0", {ProjMat(gen)}});
    GogEdge e{"e0", "e0r", "v0", "v0", false,
              {ProjMat(gen)}, {ProjMat(gen)}, {ProjMat(gen)},
              ProjMat(diag_u(f))};
    c.edges = {e};
    c.relators = {"t:e0 g:v0:0 t:e0^-1 g:v0:0^-1"};
    LiftReport rc = lift_graph_of_groups(c);
    CHECK(rc.verdict == LiftReport::Verdict::Lift);
    for (const auto& chk : rc.edge_checks) CHECK(chk.ok);
    for (const auto& chk : rc.relator_checks) CHECK(chk.ok);

    // injecting a trace-zero generator raises
    GraphOfGroups bad = a;
    bad.vertices[0].gens.push_back(ProjMat(mat(f, 0, 1, -1, 0)));
    CHECK_THROWS_AS(lift_graph_of_groups(bad), TwoTorsionInVertexGroup);
}

TEST_CASE("graph of groups: incompatible edge raises") {
    auto f = Q(7, 16);
    Fe w = teichmuller(f, 2, 3);
    Mat2 gen = diag_fe(f, w);
    GraphOfGroups g;
    g.field = f;
    g.vertices.push_back({"v0", {ProjMat(gen)}});
    // sigma_ebar sends the generator to its square: the relation
    // t sigma_e(x) t^-1 = sigma_ebar(x) fails in PSL2 for diagonal t
    GogEdge e{"e0", "e0r", "v0", "v0", false,
              {ProjMat(gen)}, {ProjMat(gen)}, {ProjMat(gen * gen)},
              ProjMat(diag_u(f))};
    g.edges = {e};
    CHECK_THROWS_AS(lift_graph_of_groups(g), Error);
}

TEST_CASE("verify_no_lift on explicit quadruples") {
    auto f5 = Q(5, 32); // q = 1 mod 4: K(i) = K
    Quad f1 = build_family(QuadFamilyId::F1, f5);
    NoLiftReport r = verify_no_lift(f1);
    CHECK(r.verdict == NoLiftReport::Verdict::NoLift);
    CHECK(r.minus_count == 16);

    Mat2 I = Mat2::identity(f5, false);
    NoLiftReport triv = verify_no_lift({I, I, I, I});
    CHECK(triv.verdict == NoLiftReport::Verdict::Liftable);
    CHECK(triv.minus_count == 0);

    Quad flat = build_family(QuadFamilyId::Flat, f5);
    NoLiftReport rf = verify_no_lift({I, I, flat.C, flat.D});
    CHECK(rf.verdict == NoLiftReport::Verdict::NoLift);

    // [A,B][C,D] lands outside {I, -I}: not a central relation
    Mat2 du = Mat2::from_entries(Scalar::uniformizer_pow(f5, false, 1), Scalar::zero(f5, false),
                                 Scalar::zero(f5, false), Scalar::uniformizer_pow(f5, false, -1));
    Mat2 up = Mat2::from_entries(sc(f5, 1), sc(f5, 1), Scalar::zero(f5, false), sc(f5, 1));
    CHECK_THROWS_AS(verify_no_lift({du, up, I, I}), RelationNotCentral);
}

TEST_CASE("sign exhaustion parity on even-exponent words") {
    auto f = Q(5, 24);
    std::mt19937_64 rng(7);
    Quad q{rand_sl2(f, rng), rand_sl2(f, rng), rand_sl2(f, rng), rand_sl2(f, rng)};
    Word4 w = Word4::parse("AABBccDDcc"); // even exponent sums everywhere
    Mat2 ref = eval_word(w, q);
    for (int mask = 1; mask < 16; ++mask) {
        Quad sq{(mask & 1) ? -q.A : q.A, (mask & 2) ? -q.B : q.B, (mask & 4) ? -q.C : q.C,
                (mask & 8) ? -q.D : q.D};
        CHECK(Mat2::eq(eval_word(w, sq), ref));
    }
}

TEST_CASE("family construction everywhere it should work") {
    // base field when q = 1 mod 4 (5, 13, 9), unramified K(i) otherwise
    for (auto f : {Q(5, 32), Q(13, 32), Q(3, 32), Q(7, 32), FieldPtr(L(3, 2, 16)),
                   FieldPtr(L(7, 1, 16)), FieldPtr(L(3, 1, 16))}) {
        for (auto id : {QuadFamilyId::F1, QuadFamilyId::F2, QuadFamilyId::F3, QuadFamilyId::F4,
                        QuadFamilyId::F5, QuadFamilyId::Flat}) {
            Quad q = build_family(id, f);
            CHECK(Mat2::eq(eval_word(Word4::parse("ABabCDcd"), q),
                           -Mat2::identity(q.A.base(), q.A.ext())));
        }
    }
    CHECK_THROWS_AS(build_family(QuadFamilyId::F1, Q(2, 16)), UnsupportedExtension);
}

TEST_CASE("dense family with the frozen rational values") {
    auto f = Q(5, 24);
    DenseFamilyParams p{Fe::from_int(f, 2), Fe::one(f), std::nullopt, std::nullopt};
    DenseBuild b = build_dense(f, p);

    // independent rational oracle: lambda = 2
    Rat l2{4, 1};
    Rat alpha = Rat{1, 1} + (Rat{2, 1} * l2 + Rat{6, 1}) / (Rat{1, 1} - l2); // 1 + 14/-3 = -11/3
    Rat delta = Rat{5, 1} - (Rat{2, 1} * l2 + Rat{6, 1}) / (Rat{1, 1} - l2); // 5 + 14/3 = 29/3
    CHECK(alpha == Rat{-11, 3});
    CHECK(delta == Rat{29, 3});
    CHECK((Rat{0, 1} - (Rat{1, 1} + delta) / (Rat{1, 1} + alpha)) == l2);

    CHECK(Fe::eq(b.alpha, rat_to_fe(f, alpha)));
    CHECK(Fe::eq(b.delta, rat_to_fe(f, delta)));
    CHECK(Fe::eq(p.lambda * p.lambda, -((Fe::one(f) + b.delta) / (Fe::one(f) + b.alpha))));

    CHECK_THROWS_AS(build_dense(f, {Fe::one(f), Fe::one(f), std::nullopt, std::nullopt}),
                    ConditionViolated);
    CHECK_THROWS_AS(build_dense(f, {Fe::from_int(f, 2), Fe::zero(f), std::nullopt, std::nullopt}),
                    ConditionViolated);
}

TEST_CASE("dense family on random parameters") {
    std::mt19937_64 rng(11);
    for (auto f : {Q(5, 24), Q(13, 24), FieldPtr(L(3, 2, 16))}) {
        int built = 0;
        for (int it = 0; it < 100; ++it) {
            Fe lambda = rand_unit(f, rng);
            Fe b = rand_unit(f, rng);
            try {
                DenseBuild db = build_dense(f, {lambda, b, std::nullopt, std::nullopt});
                ++built;
                CHECK(Mat2::eq(eval_word(Word4::parse("ABabCDcd"), db.quad),
                               -Mat2::identity(db.quad.A.base(), false)));
            } catch (const ConditionViolated&) {
            } catch (const ExclusionHit&) {
            } catch (const NotASquareForLambda&) {
            }
        }
        CHECK(built > 50);
    }
}

TEST_CASE("trace scan on the flat family") {
    auto f = Q(5, 24);
    Quad flat = build_family(QuadFamilyId::Flat, f);
    TraceScanReport r = trace_scan(flat, 4, true);
    CHECK(r.total_words == 1 + 8 * (1 + 7 + 49 + 343));
    CHECK(r.other_count == 0);
    CHECK(r.zero_count + r.pm2_count == r.total_words);
    CHECK((int64_t)r.entries.size() == r.total_words);
    CHECK(r.entries[0].word.empty());
    CHECK(r.entries[0].trace_class == "pm2");

    // L = 1 on F1: A -> 0, B -> 0, C -> other, D -> 2
    Quad f1 = build_family(QuadFamilyId::F1, f);
    TraceScanReport r1 = trace_scan(f1, 1, true);
    auto cls = [&](const std::string& w) {
        for (const auto& e : r1.entries)
            if (e.word == w) return e.trace_class;
        return std::string("missing");
    };
    CHECK(cls("A") == "zero");
    CHECK(cls("B") == "zero");
    CHECK(cls("C") == "other");
    CHECK(cls("D") == "pm2");

    // determinism: parallel equals serial
    TraceScanReport rp = trace_scan(flat, 4, true, 4);
    CHECK(rp.zero_count == r.zero_count);
    CHECK(rp.pm2_count == r.pm2_count);
    REQUIRE(rp.entries.size() == r.entries.size());
    for (size_t i = 0; i < r.entries.size(); ++i) {
        CHECK(rp.entries[i].word == r.entries[i].word);
        CHECK(rp.entries[i].trace_class == r.entries[i].trace_class);
    }
    CHECK_THROWS_AS(trace_scan(flat, 10, false, 1, 1000), CapExceeded);
}

TEST_CASE("no trace-zero word up to length 8 on a sampled rational quadruple"
          * doctest::skip(true)) {
    // Supports (without proving) the absence of projective involutions in
    // the group generated by a generic rational quadruple; a find would be a
    // build-breaking counterexample. Small integer parameters are
    // algebraically special and do admit trace-zero words (lambda = 2, b = 1
    // has 694 of them up to length 8); full random digit sampling makes a
    // zero improbable. Runs for about a minute; enabled with -ns or through
    // the scan_depth8 ctest entry.
    auto f = Q(5, 32);
    std::mt19937_64 rng(20257);
    DenseBuild db = [&] {
        for (;;) {
            try {
                return build_dense(f, {rand_unit(f, rng), rand_unit(f, rng), std::nullopt,
                                       std::nullopt});
            } catch (const ConditionViolated&) {
            } catch (const ExclusionHit&) {
            }
        }
    }();
    TraceScanReport r = trace_scan(db.quad, 8, false, 8);
    CHECK(r.total_words == 1 + 8 * ((std::int64_t)5764801 - 1) / 6);
    CHECK(!r.any_projective_involution);
    CHECK(r.zero_count == 0);
}

TEST_CASE("parity normal-form dichotomy on the first family") {
    auto f = Q(5, 24);
    ParityCheckReport a = parity_normal_form_check(QuadFamilyId::F1, Word4::parse("A"), f);
    CHECK(a.parities == std::array<int, 4>{1, 0, 0, 0});
    CHECK(a.evaluation == "involution");
    CHECK(a.consistent);
    ParityCheckReport c = parity_normal_form_check(QuadFamilyId::F1, Word4::parse("C"), f);
    CHECK(c.normal_form_class == "gamma^k");
    CHECK(c.evaluation == "hyperbolic");
    CHECK(c.consistent);
    ParityCheckReport e = parity_normal_form_check(QuadFamilyId::F1, Word4::parse(""), f);
    CHECK(e.evaluation == "identity");
    CHECK(e.consistent);
    ParityCheckReport ab = parity_normal_form_check(QuadFamilyId::F1, Word4::parse("AB"), f);
    CHECK(ab.normal_form_class == "alpha beta gamma^k");
    CHECK(ab.consistent);
    CHECK_THROWS_AS(parity_normal_form_check(QuadFamilyId::F2, Word4::parse("A"), f),
                    UnsupportedFamily);
}

TEST_CASE("json round trips") {
    auto f = Q(5, 8);
    std::mt19937_64 rng(13);
    for (int it = 0; it < 50; ++it) {
        Fe x = rand_unit(f, rng) * Fe::uniformizer_pow(f, (int)(rng() % 5) - 2);
        Json j = fe_to_json(x);
        Fe y = fe_from_json(f, j);
        CHECK(Fe::compare(x, y) == Fe::Cmp::Equal);
        CHECK(fe_to_json(y) == j);
    }
    // inexact and zero states round-trip bit-exactly
    Fe third = Fe::from_fraction(f, 1, 3);
    CHECK(fe_to_json(fe_from_json(f, fe_to_json(third))) == fe_to_json(third));
    CHECK(Fe::eq(third, fe_from_json(f, fe_to_json(third))));
    CHECK(fe_from_json(f, fe_to_json(Fe::zero(f))).is_exact_zero());
    CHECK(fe_from_json(f, fe_to_json(Fe::near_zero(f, 3))).is_near_zero());
    Fe neg = Fe::from_int(f, -7);
    CHECK(Fe::compare(neg, fe_from_json(f, fe_to_json(neg))) == Fe::Cmp::Equal);

    Mat2 m = rand_sl2(f, rng);
    Mat2 m2 = mat_from_json(mat_to_json(m));
    CHECK(Mat2::eq(m, m2));
    CHECK(mat_to_json(m2) == mat_to_json(m));

    // residue degree r = 2: digit slots carry r coordinates row-major
    auto f9 = L(3, 2, 8);
    std::mt19937_64 rng9(29);
    for (int it = 0; it < 20; ++it) {
        Fe x = rand_unit(f9, rng9) * Fe::uniformizer_pow(f9, (int)(rng9() % 5) - 2);
        Json j = fe_to_json(x);
        CHECK(j.at("digits").size() == (size_t)(2 * 8));
        CHECK(Fe::compare(x, fe_from_json(f9, j)) == Fe::Cmp::Equal);
    }

    // extension matrices round trip through re/im pairs
    auto f7 = Q(7, 8);
    Quad q = build_family(QuadFamilyId::F1, f7);
    CHECK(Mat2::eq(mat_from_json(mat_to_json(q.A)), q.A));

    TreeVertex v = act(diag_u(f), TreeVertex::standard(f));
    CHECK(vertex_from_json(f, vertex_to_json(v)) == v);

    CHECK(Fe::eq(parse_fe_literal(f, "-3/4"), Fe::from_fraction(f, -3, 4)));
    CHECK(Fe::eq(parse_fe_literal(f, "u^2"), Fe::uniformizer_pow(f, 2)));
    CHECK(Fe::eq(parse_fe_literal(f, "2/3*u^-1"),
                 Fe::from_fraction(f, 2, 3) * Fe::uniformizer_pow(f, -1)));
    CHECK_THROWS_AS(parse_fe_literal(f, "x+y"), ParseError);
}

TEST_CASE("gog json round trip") {
    auto f = Q(7, 16);
    Fe w = teichmuller(f, 2, 3);
    GraphOfGroups g;
    g.field = f;
    g.vertices.push_back({"v0", {ProjMat(diag_fe(f, w))}});
    GogEdge e{"e0", "e0r", "v0", "v0", false,
              {ProjMat(diag_fe(f, w))}, {ProjMat(diag_fe(f, w))}, {ProjMat(diag_fe(f, w))},
              ProjMat(diag_u(f))};
    g.edges = {e};
    g.relators = {"t:e0 g:v0:0 t:e0^-1 g:v0:0^-1"};
    Json j = gog_to_json(g);
    GraphOfGroups g2 = gog_from_json(j);
    CHECK(gog_to_json(g2) == j);
    LiftReport r = lift_graph_of_groups(g2);
    CHECK(r.verdict == LiftReport::Verdict::Lift);
    Json jr = lift_report_to_json(r);
    CHECK(jr.at("verdict") == "lift");
}
