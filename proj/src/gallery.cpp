#include "liftsl2/gallery.hpp"

#include <algorithm>
#include <thread>

namespace liftsl2 {

QuadFamilyId parse_family(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "f1") return QuadFamilyId::F1;
    if (n == "f2") return QuadFamilyId::F2;
    if (n == "f3") return QuadFamilyId::F3;
    if (n == "f4") return QuadFamilyId::F4;
    if (n == "f5") return QuadFamilyId::F5;
    if (n == "flat") return QuadFamilyId::Flat;
    throw UsageError("unknown family " + name + " (use F1..F5 or flat)");
}

std::string family_name(QuadFamilyId id) {
    switch (id) {
        case QuadFamilyId::F1: return "F1";
        case QuadFamilyId::F2: return "F2";
        case QuadFamilyId::F3: return "F3";
        case QuadFamilyId::F4: return "F4";
        case QuadFamilyId::F5: return "F5";
        case QuadFamilyId::Flat: return "flat";
    }
    return "?";
}

namespace {

struct Ctx {
    FieldPtr f;
    bool ext;
    Scalar i, u, one, zero, two;
};

Ctx make_ctx(const FieldPtr& f) {
    if (f->q() % 2 == 0)
        throw UnsupportedExtension("the quadruple families need odd residue characteristic");
    bool ext = !f->minus_one_is_square();
    Ctx c{f,
          ext,
          Scalar::sqrt_minus_one(f, ext),
          Scalar::uniformizer_pow(f, ext, 1),
          Scalar::one(f, ext),
          Scalar::zero(f, ext),
          Scalar::from_int(f, ext, 2)};
    return c;
}

Mat2 m2(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d) {
    return Mat2::from_entries(a, b, c, d);
}

void require(bool cond, const std::string& what) {
    if (!cond) throw VerificationError(what);
}

void check_q8(const Mat2& X, const Mat2& Y, const std::string& fam) {
    Mat2 mid = -Mat2::identity(X.base(), X.ext());
    require(Mat2::eq(X * X, mid), fam + ": X^2 != -I in the quaternion pair");
    require(Mat2::eq(Y * Y, mid), fam + ": Y^2 != -I in the quaternion pair");
    require(Mat2::eq((X * Y).pow(2), mid), fam + ": (XY)^2 != -I in the quaternion pair");
}

void check_central_relation(const Quad& q, const std::string& fam) {
    Mat2 val = eval_word(Word4::parse("ABabCDcd"), q);
    require(Mat2::eq(val, -Mat2::identity(q.A.base(), q.A.ext())),
            fam + ": central relation does not evaluate to -I");
}

void check_a_diagonal(const Quad& q, const std::string& fam) {
    require(q.A.a12().is_zero_at_precision() && q.A.a21().is_zero_at_precision(),
            fam + ": A is not diagonal");
}

void check_hyperbolic(const Mat2& m, const std::string& fam) {
    require(classify(m).kind == ElementClass::Kind::Hyperbolic,
            fam + ": designated element is not hyperbolic");
}

// (1/2u) [[u^2+1, u^2-1], [u^2-1, u^2+1]]
Mat2 symmetric_hyperbolic(const Ctx& c) {
    Scalar inv2u = (c.two * c.u).inv();
    Scalar u2 = c.u * c.u;
    Scalar p = (u2 + c.one) * inv2u;
    Scalar m = (u2 - c.one) * inv2u;
    return m2(p, m, m, p);
}

} // namespace

Quad build_family(QuadFamilyId id, const FieldPtr& field) {
    Ctx c = make_ctx(field);
    Mat2 I = Mat2::identity(c.f, c.ext);
    Mat2 diag_i = m2(c.i, c.zero, c.zero, -c.i);
    Mat2 rot = m2(c.zero, c.one, -c.one, c.zero);
    Mat2 diag_u = m2(c.u, c.zero, c.zero, c.u.inv());
    Mat2 antidiag_i = m2(c.zero, -c.i, -c.i, c.zero);

    Quad q;
    std::string fam = family_name(id);
    switch (id) {
        case QuadFamilyId::F1: {
            q = {diag_i, rot, symmetric_hyperbolic(c), I};
            check_q8(q.A, q.B, fam);
            require(Mat2::eq(q.A * q.C * q.A.inv(), q.C.inv()), fam + ": ACA^-1 != C^-1");
            require(Mat2::eq(q.B * q.C * q.B.inv(), q.C.inv()), fam + ": BCB^-1 != C^-1");
            check_hyperbolic(q.C, fam);
            break;
        }
        case QuadFamilyId::F2: {
            q = {I, symmetric_hyperbolic(c), diag_i, rot};
            check_q8(q.C, q.D, fam);
            require(Mat2::eq(q.C * q.B * q.C.inv(), q.B.inv()), fam + ": CBC^-1 != B^-1");
            require(Mat2::eq(q.D * q.B * q.D.inv(), q.B.inv()), fam + ": DBD^-1 != B^-1");
            check_hyperbolic(q.B, fam);
            break;
        }
        case QuadFamilyId::F3: {
            q = {diag_u, I, antidiag_i, rot};
            check_q8(q.C, q.D, fam);
            require(Mat2::eq(q.C * q.A * q.C.inv(), q.A.inv()), fam + ": CAC^-1 != A^-1");
            require(Mat2::eq(q.D * q.A * q.D.inv(), q.A.inv()), fam + ": DAD^-1 != A^-1");
            check_hyperbolic(q.A, fam);
            break;
        }
        case QuadFamilyId::F4: {
            q = {diag_i, rot, diag_u, I};
            check_q8(q.A, q.B, fam);
            require(Mat2::eq(q.A * q.C * q.A.inv(), q.C), fam + ": ACA^-1 != C");
            require(Mat2::eq(q.B * q.C.inv() * q.B.inv(), q.C), fam + ": BC^-1B^-1 != C");
            check_hyperbolic(q.C, fam);
            break;
        }
        case QuadFamilyId::F5: {
            Scalar inv2u = (c.two * c.u).inv();
            Scalar u2 = c.u * c.u;
            Scalar p = -((u2 + c.one) * inv2u);
            Mat2 C = m2(p, -(c.i * (c.one - u2) * inv2u), -(c.i * (u2 - c.one) * inv2u), p);
            q = {diag_i, rot, C, I};
            check_q8(q.A, q.B, fam);
            require(Mat2::eq(q.A * q.C.inv() * q.A.inv(), q.C), fam + ": AC^-1A^-1 != C");
            require(Mat2::eq(q.B * q.C * q.B.inv(), q.C), fam + ": BCB^-1 != C");
            check_hyperbolic(q.C, fam);
            break;
        }
        case QuadFamilyId::Flat: {
            q = {I, I, antidiag_i, rot};
            check_q8(q.C, q.D, fam);
            break;
        }
    }
    check_a_diagonal(q, fam);
    check_central_relation(q, fam);
    return q;
}

namespace {

DenseBuild build_dense_at(const FieldPtr& field, const DenseFamilyParams& params) {
    bool derive_lambda = params.lambda.is_exact_zero() && (params.C || params.D);
    Fe lambda = params.lambda;
    Fe one = Fe::one(field);
    if (!derive_lambda) {
        if (lambda.is_zeroish()) throw ConditionViolated("lambda must avoid {0, 1, -1}");
        if (Fe::eq(lambda, one) || Fe::eq(lambda, -one))
            throw ConditionViolated("lambda must avoid {0, 1, -1}");
    }
    if (params.b.is_zeroish()) throw ConditionViolated("b must be nonzero");
    if ((bool)params.C != (bool)params.D)
        throw UsageError("supply both C and D or neither");

    auto sc = [&](const Fe& x) { return Scalar::from_fe(field, false, x); };
    Mat2 C, D;
    if (params.C) {
        C = *params.C;
        D = *params.D;
        if (C.ext() || D.ext()) throw UsageError("the rational family lives over the base field");
        if (C.a12().is_zero_at_precision() || D.a12().is_zero_at_precision())
            throw ConditionViolated("beta_1 and beta_2 must be nonzero");
    } else {
        Fe l2 = lambda * lambda;
        Fe denom = one - l2;
        if (denom.is_zeroish()) throw ConditionViolated("lambda must avoid {0, 1, -1}");
        Fe excl = (l2 + Fe::from_int(field, 3)).pow(2) - Fe::from_int(field, 8);
        if (excl.is_zeroish()) throw ExclusionHit("(lambda^2+3)^2 = 8 is excluded for the default pair");
        C = Mat2::from_entries(sc((l2 + Fe::from_int(field, 3)) / denom), sc(one), sc(-one),
                               Scalar::zero(field, false));
        D = Mat2::from_entries(sc(one), sc(Fe::from_int(field, 2)), Scalar::zero(field, false),
                               sc(one));
    }

    Mat2 com = C * D * C.inv() * D.inv();
    Fe alpha = com.a11().re();
    Fe beta = com.a12().re();
    Fe gamma = com.a21().re();
    Fe delta = com.a22().re();

    // conditions (2)
    Fe denom2 = alpha + delta + Fe::from_int(field, 2);
    if (denom2.is_zeroish()) throw ConditionViolated("alpha + delta = -2");
    if (beta.is_zeroish()) throw ConditionViolated("beta = 0");
    if ((alpha + one).is_zeroish()) throw ConditionViolated("alpha = -1");
    if ((delta + one).is_zeroish()) throw ConditionViolated("delta = -1");

    if (!params.C) {
        // displayed closed forms for the default pair:
        // alpha = 1 + (2 lambda^2 + 6)/(1 - lambda^2), delta = 5 - (same)
        Fe l2 = lambda * lambda;
        Fe frac = (Fe::from_int(field, 2) * l2 + Fe::from_int(field, 6)) / (one - l2);
        if (!Fe::eq(alpha, one + frac) || !Fe::eq(delta, Fe::from_int(field, 5) - frac))
            throw VerificationError("commutator entries disagree with their closed forms");
    }

    Fe rhs = -((one + delta) / (one + alpha));
    if (derive_lambda) {
        if (!is_square(rhs))
            throw NotASquareForLambda("-(1+delta)/(1+alpha) is not a square in this field");
        lambda = sqrt(rhs);
        if (Fe::eq(lambda, one) || Fe::eq(lambda, -one))
            throw ConditionViolated("derived lambda hits {1, -1}");
    } else if (!Fe::eq(lambda * lambda, rhs)) {
        throw ConditionViolated("lambda^2 != -(1+delta)/(1+alpha) for the supplied pair");
    }

    Fe a = -(beta * (one + alpha)) / (params.b * denom2);
    Fe cc = -((alpha + one) * (delta + one)) / (params.b * denom2);
    Fe d = (params.b * (alpha * delta - one)) / (beta * (one + alpha));

    Mat2 A = Mat2::from_entries(sc(lambda), Scalar::zero(field, false), Scalar::zero(field, false),
                                sc(lambda).inv());
    Mat2 B = Mat2::from_entries(sc(a), sc(params.b), sc(cc), sc(d));
    Quad quad{A, B, C, D};
    Mat2 val = eval_word(Word4::parse("ABabCDcd"), quad);
    if (!Mat2::eq(val, -Mat2::identity(field, false)))
        throw VerificationError("the rational family does not satisfy the central relation");
    return DenseBuild{quad, alpha, beta, gamma, delta, a, cc, d};
}

} // namespace

DenseBuild build_dense(const FieldPtr& field, const DenseFamilyParams& params) {
    // Near-degenerate parameters (lambda close to +-1) blow up the entry
    // valuations and can exhaust the working precision in the postcondition
    // checks. The inputs are exact, so the build escalates its internal
    // precision and returns the first level that certifies everything.
    const int N = field->precision();
    for (int mult = 1;; mult *= 2) {
        FieldPtr fp = mult == 1 ? field : field->with_precision(N * mult);
        DenseFamilyParams p2{params.lambda.to_precision(fp), params.b.to_precision(fp),
                             std::nullopt, std::nullopt};
        if (params.C) p2.C = params.C->to_precision(fp);
        if (params.D) p2.D = params.D->to_precision(fp);
        try {
            return build_dense_at(fp, p2);
        } catch (const PrecisionExhausted&) {
            if (mult >= 16) throw;
        }
    }
}

namespace {

struct ScanCounters {
    int64_t zero = 0, pm2 = 0, other = 0;
    bool involution = false, unipotent = false;
    std::vector<TraceScanReport::Entry> entries;
};

void classify_trace(const Mat2& m, const std::string& word, bool collect, ScanCounters& out) {
    Scalar t = m.trace();
    Scalar zero = Scalar::zero(m.base(), m.ext());
    Scalar two = Scalar::from_int(m.base(), m.ext(), 2);
    std::string cls;
    if (Scalar::eq(t, zero)) {
        out.zero++;
        out.involution = true;
        cls = "zero";
    } else if (Scalar::eq(t, two) || Scalar::eq(t, -two)) {
        out.pm2++;
        if (!m.pm_identity()) out.unipotent = true;
        cls = "pm2";
    } else {
        out.other++;
        cls = "other";
    }
    if (collect) out.entries.push_back({word, cls});
}

void scan_subtree(const std::array<Mat2, 8>& gens, const Mat2& prefix, std::string& word,
                  int8_t last, int remaining, bool collect, ScanCounters& out) {
    if (remaining == 0) return;
    static const char* letters = "AaBbCcDd";
    for (int li = 0; li < 8; ++li) {
        int8_t signed_letter = (int8_t)((li % 2 == 0) ? (li / 2 + 1) : -(li / 2 + 1));
        if (last != 0 && signed_letter == -last) continue; // free reduction
        Mat2 next = prefix.mul_unchecked(gens[(size_t)li]);
        word.push_back(letters[li]);
        classify_trace(next, word, collect, out);
        scan_subtree(gens, next, word, signed_letter, remaining - 1, collect, out);
        word.pop_back();
    }
}

} // namespace

TraceScanReport trace_scan(const Quad& quad, int max_len, bool collect_entries, int jobs,
                           int64_t cap) {
    if (max_len < 1) throw UsageError("max_len must be >= 1");
    int64_t total = 1, pow7 = 1;
    for (int l = 1; l <= max_len; ++l) {
        total += 8 * pow7;
        if (total > cap) throw CapExceeded("word count exceeds the scan cap");
        pow7 *= 7;
    }

    // gens in letter order A a B b C c D d
    std::array<Mat2, 8> gens = {quad.A,        quad.A.inv(), quad.B,        quad.B.inv(),
                                quad.C,        quad.C.inv(), quad.D,        quad.D.inv()};
    Mat2 I = Mat2::identity(quad.A.base(), quad.A.ext());

    TraceScanReport rep;
    rep.max_len = max_len;
    rep.total_words = total;

    ScanCounters root;
    classify_trace(I, "", collect_entries, root);

    std::array<ScanCounters, 8> parts;
    auto run_letter = [&](int li) {
        static const char* letters = "AaBbCcDd";
        int8_t signed_letter = (int8_t)((li % 2 == 0) ? (li / 2 + 1) : -(li / 2 + 1));
        Mat2 first = gens[(size_t)li];
        std::string word(1, letters[li]);
        classify_trace(first, word, collect_entries, parts[(size_t)li]);
        scan_subtree(gens, first, word, signed_letter, max_len - 1, collect_entries,
                     parts[(size_t)li]);
    };
    if (jobs > 1) {
        std::array<std::exception_ptr, 8> errs{};
        std::vector<std::thread> threads;
        for (int li = 0; li < 8; ++li)
            threads.emplace_back([&, li] {
                try {
                    run_letter(li);
                } catch (...) {
                    errs[(size_t)li] = std::current_exception();
                }
            });
        for (auto& t : threads) t.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    } else {
        for (int li = 0; li < 8; ++li) run_letter(li);
    }

    rep.zero_count = root.zero;
    rep.pm2_count = root.pm2;
    rep.other_count = root.other;
    rep.any_projective_involution = root.involution;
    rep.any_unipotent = root.unipotent;
    if (collect_entries) rep.entries = std::move(root.entries);
    for (auto& p : parts) {
        rep.zero_count += p.zero;
        rep.pm2_count += p.pm2;
        rep.other_count += p.other;
        rep.any_projective_involution = rep.any_projective_involution || p.involution;
        rep.any_unipotent = rep.any_unipotent || p.unipotent;
        if (collect_entries)
            rep.entries.insert(rep.entries.end(), p.entries.begin(), p.entries.end());
    }
    if (collect_entries) {
        std::stable_sort(rep.entries.begin(), rep.entries.end(),
                         [](const TraceScanReport::Entry& a, const TraceScanReport::Entry& b) {
                             if (a.word.size() != b.word.size())
                                 return a.word.size() < b.word.size();
                             return a.word < b.word;
                         });
    }
    if (rep.zero_count + rep.pm2_count + rep.other_count != rep.total_words)
        throw InternalError("word count mismatch in the trace scan");
    return rep;
}

ParityCheckReport parity_normal_form_check(QuadFamilyId id, const Word4& w, const FieldPtr& field) {
    if (id != QuadFamilyId::F1)
        throw UnsupportedFamily("the parity normal-form check supports family F1");
    Quad q = build_family(id, field);
    ParityCheckReport rep{};
    rep.parities = w.parities();
    int a = rep.parities[0], b = rep.parities[1];
    Mat2 val = eval_word(w, q);

    Scalar t = val.trace();
    bool is_id = val.pm_identity().has_value();
    bool invol = !is_id && Scalar::eq(t, Scalar::zero(val.base(), val.ext()));
    bool hyper = false;
    if (!is_id && !invol) hyper = classify(val).kind == ElementClass::Kind::Hyperbolic;
    rep.evaluation = is_id ? "identity" : invol ? "involution" : hyper ? "hyperbolic" : "other";

    if (a == 0 && b == 0) {
        rep.normal_form_class = "gamma^k";
        rep.consistent = is_id || hyper;
    } else if (a == 1 && b == 0) {
        rep.normal_form_class = "alpha gamma^k";
        rep.consistent = invol;
    } else if (a == 0 && b == 1) {
        rep.normal_form_class = "beta gamma^k";
        rep.consistent = invol;
    } else {
        rep.normal_form_class = "alpha beta gamma^k";
        rep.consistent = invol || hyper;
    }
    return rep;
}

} // namespace liftsl2
