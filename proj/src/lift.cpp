#include "liftsl2/lift.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "liftsl2/tree.hpp"

namespace liftsl2 {

std::optional<size_t> FiniteGroupTable::find(const ProjMat& m) const {
    auto it = buckets_.find(m.key());
    if (it == buckets_.end()) return std::nullopt;
    for (size_t i : it->second)
        if (ProjMat::eq(elements_[i], m)) return i;
    return std::nullopt;
}

size_t FiniteGroupTable::index_of(const ProjMat& m) const {
    auto i = find(m);
    if (!i) throw ClosureFailure("element not present in the group table");
    return *i;
}

size_t FiniteGroupTable::insert(const ProjMat& m) {
    elements_.push_back(m);
    buckets_[m.key()].push_back(elements_.size() - 1);
    return elements_.size() - 1;
}

namespace {

// does g fix the projective point e?
bool fixes_end(const Mat2& g, const ProjPoint& e) {
    Scalar ix = g.a11() * e.x + g.a12() * e.y;
    Scalar iy = g.a21() * e.x + g.a22() * e.y;
    Scalar cross = ix * e.y - iy * e.x;
    try {
        return cross.is_zero_at_precision();
    } catch (const PrecisionExhausted&) {
        return false;
    }
}

std::vector<ProjPoint> rational_eigen_ends(const Mat2& g) {
    std::vector<ProjPoint> out;
    const FieldPtr& f = g.base();
    if (g.ext()) return out; // end analysis only used over the base field
    if (auto us = unipotent_sign(g)) {
        Mat2 w = *us > 0 ? g : -g;
        Scalar one = Scalar::one(f, false);
        Scalar c1 = w.a12();
        Scalar c2 = one - w.a11();
        bool z1 = true, z2 = true;
        try {
            z1 = c1.is_zero_at_precision();
            z2 = c2.is_zero_at_precision();
        } catch (const PrecisionExhausted&) {
        }
        if (!(z1 && z2))
            out.push_back(ProjPoint::of(c1, c2));
        else
            out.push_back(ProjPoint::of(one - w.a22(), w.a21()));
        return out;
    }
    Scalar tr = g.trace();
    Scalar disc = tr * tr - Scalar::from_int(f, false, 4);
    if (disc.is_zero_at_precision()) return out;
    if (!is_square(disc.re())) return out;
    Scalar s = Scalar::from_fe(f, false, sqrt(disc.re()));
    Scalar two = Scalar::from_int(f, false, 2);
    for (Scalar lambda : {(tr + s) / two, (tr - s) / two}) {
        Scalar c1 = g.a12();
        Scalar c2 = lambda - g.a11();
        bool z1 = true, z2 = true;
        try {
            z1 = c1.is_zero_at_precision();
            z2 = c2.is_zero_at_precision();
        } catch (const PrecisionExhausted&) {
        }
        if (!(z1 && z2))
            out.push_back(ProjPoint::of(c1, c2));
        else
            out.push_back(ProjPoint::of(lambda - g.a22(), g.a21()));
    }
    return out;
}

} // namespace

FiniteGroupTable enumerate_finite_group(const std::vector<ProjMat>& gens, int64_t cap) {
    if (cap < 1) throw UsageError("cap must be >= 1");
    if (gens.empty()) throw UsageError("need at least one generator");
    const FieldPtr& f = gens[0].rep().base();
    bool ext = gens[0].rep().ext();
    FiniteGroupTable t;
    t.insert(ProjMat(Mat2::identity(f, ext)));
    for (const ProjMat& g : gens) {
        auto idx = t.find(g);
        if (!idx) idx = t.insert(g);
        t.gen_idx_.push_back(*idx);
    }
    // right-multiplication closure
    for (size_t i = 0; i < t.elements_.size(); ++i) {
        for (size_t gi : t.gen_idx_) {
            ProjMat prod(t.elements_[i].rep().mul_unchecked(t.elements_[gi].rep()));
            if (!t.find(prod)) {
                if ((int64_t)t.elements_.size() >= cap)
                    throw CapExceeded("group closure exceeded the cap (group may be infinite)");
                t.insert(prod);
            }
        }
    }

    // classification
    FiniteGroupTable::Classification cls;
    bool two_torsion = false;
    for (const ProjMat& m : t.elements_)
        if (!m.rep().pm_identity() && proj_is_involution(m)) two_torsion = true;
    if (two_torsion) {
        cls.kind = FiniteGroupTable::Classification::Kind::HasTwoTorsion;
        t.cls_ = cls;
        return t;
    }
    int64_t n = (int64_t)t.elements_.size();
    for (const ProjMat& m : t.elements_) {
        auto o = proj_order(m, n);
        if (o && *o == n) {
            cls.kind = FiniteGroupTable::Classification::Kind::Cyclic;
            cls.order = n;
            t.cls_ = cls;
            return t;
        }
    }
    // Borel type: positive characteristic and a common fixed end
    if (!f->char0() && !ext) {
        std::vector<ProjPoint> candidates;
        for (const ProjMat& m : t.elements_) {
            if (m.rep().pm_identity()) continue;
            candidates = rational_eigen_ends(m.rep());
            if (!candidates.empty()) break;
        }
        std::vector<ProjPoint> common;
        for (const ProjPoint& e : candidates) {
            bool all = true;
            for (const ProjMat& m : t.elements_)
                if (!fixes_end(m.rep(), e)) {
                    all = false;
                    break;
                }
            if (all) common.push_back(e);
        }
        if (!common.empty()) {
            int64_t p_part = 1;
            for (const ProjMat& m : t.elements_)
                if (is_unipotent(m.rep())) ++p_part;
            int64_t m_part = n / std::max<int64_t>(p_part, 1);
            bool p_power = p_part > 1;
            for (int64_t x = p_part; x > 1; x /= f->p())
                if (x % f->p() != 0) p_power = false;
            if (p_power && p_part * m_part == n && (f->q() - 1) % m_part == 0) {
                cls.kind = FiniteGroupTable::Classification::Kind::BorelType;
                cls.p_part = p_part;
                cls.cyclic_part = m_part;
                t.cls_ = cls;
                return t;
            }
        }
    }
    cls.kind = FiniteGroupTable::Classification::Kind::Unrecognized;
    t.cls_ = cls;
    return t;
}

Mat2 lift_element(const ProjMat& g, int64_t bound) {
    auto n = proj_order(g, bound);
    if (!n) throw UnboundedOrder("element order exceeds the bound (or the element is hyperbolic)");
    if (*n % 2 == 0) throw EvenOrder("2-torsion in the projective order: no order-preserving lift");
    const Mat2& m = g.rep();
    auto om = order(m, 2 * *n);
    if (!om) throw InternalError("representative order not found below twice the projective order");
    Mat2 lift = (*om == *n) ? m : -m;
    // exactly one of {M, -M} has the odd projective order
    auto check = order(*om == *n ? -m : m, 2 * *n);
    if (*om != *n && *om != 2 * *n) throw InternalError("representative order inconsistent");
    if (check && *check == *n) throw InternalError("both preimages share the odd order");
    return lift;
}

std::vector<Mat2> lift_finite_subgroup(const FiniteGroupTable& table) {
    using Kind = FiniteGroupTable::Classification::Kind;
    Kind k = table.classification().kind;
    if (k == Kind::HasTwoTorsion)
        throw HasTwoTorsion("table contains an involution; no lift exists");
    if (k == Kind::Unrecognized)
        throw ClosureFailure("table is not Cyclic(odd) or BorelType");
    const FieldPtr& f = table.elements()[0].rep().base();
    int64_t bound = default_order_bound(*f);
    std::vector<Mat2> lifts;
    lifts.reserve(table.size());
    for (const ProjMat& m : table.elements()) lifts.push_back(lift_element(m, bound));
    // full multiplication-table closure, -I free, projecting back correctly
    Mat2 minus_id = -Mat2::identity(f, table.elements()[0].rep().ext());
    for (size_t i = 0; i < lifts.size(); ++i) {
        if (Mat2::eq(lifts[i], minus_id)) throw ClosureFailure("-I appeared in the lift");
        if (!ProjMat::eq(ProjMat(lifts[i]), table.elements()[i]))
            throw ClosureFailure("lift does not project back to the table element");
    }
    for (size_t i = 0; i < lifts.size(); ++i)
        for (size_t j = 0; j < lifts.size(); ++j) {
            ProjMat prod(table.elements()[i].rep().mul_unchecked(table.elements()[j].rep()));
            size_t kk = table.index_of(prod);
            if (!Mat2::eq(lifts[i].mul_unchecked(lifts[j]), lifts[kk]))
                throw ClosureFailure("lift is not closed under multiplication");
        }
    return lifts;
}

// ----------------------------------------------------------------------
// Graph of groups

const GogVertex& GraphOfGroups::vertex(const std::string& id) const {
    for (const GogVertex& v : vertices)
        if (v.id == id) return v;
    throw UsageError("unknown vertex id " + id);
}

const GogEdge& GraphOfGroups::edge(const std::string& id) const {
    for (const GogEdge& e : edges)
        if (e.id == id) return e;
    throw UsageError("unknown edge id " + id);
}

namespace {

// extend a generator map multiplicatively over the closure; verifies that it
// is a well-defined injective homomorphism into the target table
std::vector<size_t> extend_monomorphism(const FiniteGroupTable& domain,
                                        const std::vector<ProjMat>& domain_gens,
                                        const std::vector<ProjMat>& images,
                                        const FiniteGroupTable& target, const std::string& what) {
    if (domain_gens.size() != images.size())
        throw UsageError(what + ": generator/image count mismatch");
    size_t n = domain.size();
    const size_t kUnset = (size_t)-1;
    std::vector<size_t> img(n, kUnset);
    img[0] = 0; // identity
    for (size_t gi = 0; gi < domain_gens.size(); ++gi) {
        size_t di = domain.index_of(domain_gens[gi]);
        auto ti = target.find(images[gi]);
        if (!ti) throw EdgeCompatibilityFailure(what + ": image lies outside the vertex group");
        if (img[di] != kUnset && img[di] != *ti)
            throw EdgeCompatibilityFailure(what + ": inconsistent generator images");
        img[di] = *ti;
    }
    // BFS over right multiplication by generators
    std::deque<size_t> work;
    for (size_t i = 0; i < n; ++i)
        if (img[i] != kUnset) work.push_back(i);
    while (!work.empty()) {
        size_t i = work.front();
        work.pop_front();
        for (size_t gi = 0; gi < domain_gens.size(); ++gi) {
            size_t di = domain.index_of(domain_gens[gi]);
            size_t j = domain.index_of(
                ProjMat(domain.elements()[i].rep().mul_unchecked(domain.elements()[di].rep())));
            ProjMat im(target.elements()[img[i]].rep().mul_unchecked(
                target.elements()[img[domain.index_of(domain_gens[gi])]].rep()));
            size_t tj = target.index_of(im);
            if (img[j] == kUnset) {
                img[j] = tj;
                work.push_back(j);
            } else if (img[j] != tj) {
                throw EdgeCompatibilityFailure(what + ": generator map is not a homomorphism");
            }
        }
    }
    for (size_t i = 0; i < n; ++i)
        if (img[i] == kUnset)
            throw UsageError(what + ": edge generators do not generate the edge group");
    std::vector<bool> seen(target.size(), false);
    for (size_t i = 0; i < n; ++i) {
        if (seen[img[i]]) throw EdgeCompatibilityFailure(what + ": generator map is not injective");
        seen[img[i]] = true;
    }
    return img;
}

struct Token {
    bool is_stable;
    std::string id;
    size_t gen_index = 0;
    bool inverse = false;
};

std::vector<Token> parse_relator(const std::string& word) {
    std::vector<Token> out;
    std::istringstream is(word);
    std::string tok;
    while (is >> tok) {
        Token t{};
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            t.inverse = true;
            tok = tok.substr(0, tok.size() - 3);
        }
        if (tok.rfind("t:", 0) == 0) {
            t.is_stable = true;
            t.id = tok.substr(2);
        } else if (tok.rfind("g:", 0) == 0) {
            size_t colon = tok.rfind(':');
            if (colon == 1) throw ParseError("bad relator token " + tok);
            t.is_stable = false;
            t.id = tok.substr(2, colon - 2);
            t.gen_index = (size_t)std::stoul(tok.substr(colon + 1));
        } else {
            throw ParseError("bad relator token " + tok);
        }
        out.push_back(t);
    }
    return out;
}

} // namespace

LiftReport lift_graph_of_groups(const GraphOfGroups& gog) {
    LiftReport report;
    const FieldPtr& f = gog.field;
    bool ext = gog.ext;
    Mat2 id = Mat2::identity(f, ext);

    // vertex group tables and their unique lifts
    std::map<std::string, FiniteGroupTable> vtab;
    std::map<std::string, std::vector<Mat2>> vlift;
    for (const GogVertex& v : gog.vertices) {
        FiniteGroupTable t =
            v.gens.empty() ? enumerate_finite_group({ProjMat(id)}, gog.cap)
                           : enumerate_finite_group(v.gens, gog.cap);
        if (t.classification().kind == FiniteGroupTable::Classification::Kind::HasTwoTorsion)
            throw TwoTorsionInVertexGroup("vertex group " + v.id + " contains an involution");
        std::vector<Mat2> lifts;
        try {
            lifts = lift_finite_subgroup(t);
        } catch (const HasTwoTorsion&) {
            throw TwoTorsionInVertexGroup("vertex group " + v.id + " contains an involution");
        }
        for (size_t gi = 0; gi < v.gens.size(); ++gi)
            report.lifted.emplace("g:" + v.id + ":" + std::to_string(gi),
                                  lifts[t.index_of(v.gens[gi])]);
        vtab.emplace(v.id, std::move(t));
        vlift.emplace(v.id, std::move(lifts));
    }

    // stable letters
    std::map<std::string, Mat2> tlift;
    for (const GogEdge& e : gog.edges) {
        if (e.in_tree) {
            if (e.stable_letter && !e.stable_letter->rep().pm_identity())
                throw UsageError("tree edge " + e.id + " carries a nontrivial stable letter");
            tlift.emplace(e.id, id);
            tlift.emplace(e.reverse_id, id);
        } else {
            if (!e.stable_letter) throw UsageError("non-tree edge " + e.id + " needs a stable letter");
            Mat2 t = e.stable_letter->rep(); // canonical-sign representative
            tlift.emplace(e.id, t);
            tlift.emplace(e.reverse_id, t.inv()); // phi(t_ebar) = phi(t_e)^-1
            report.lifted.emplace("t:" + e.id, t);
        }
    }

    // edge compatibility: phi(t_e) phi(sigma_e(g)) phi(t_e)^-1 = phi(sigma_ebar(g))
    bool all_ok = true;
    for (const GogEdge& e : gog.edges) {
        const FiniteGroupTable& from_tab = vtab.at(e.from);
        const FiniteGroupTable& to_tab = vtab.at(e.to);
        if (!e.edge_gens.empty()) {
            FiniteGroupTable etab = enumerate_finite_group(e.edge_gens, gog.cap);
            if (etab.classification().kind ==
                FiniteGroupTable::Classification::Kind::HasTwoTorsion)
                throw TwoTorsionInVertexGroup("edge group " + e.id + " contains an involution");
            extend_monomorphism(etab, e.edge_gens, e.sigma_e, from_tab, "sigma_e[" + e.id + "]");
            extend_monomorphism(etab, e.edge_gens, e.sigma_ebar, to_tab,
                                "sigma_ebar[" + e.id + "]");
        }
        const Mat2& t = tlift.at(e.id);
        for (size_t gi = 0; gi < e.edge_gens.size(); ++gi) {
            // the defining relation must already hold in PSL2
            Mat2 lhs_p = t.mul_unchecked(e.sigma_e[gi].rep()).mul_unchecked(t.inv());
            if (!ProjMat::eq(ProjMat(lhs_p), e.sigma_ebar[gi]))
                throw UsageError("edge relation fails in PSL2 for edge " + e.id);
            const Mat2& se = vlift.at(e.from)[from_tab.index_of(e.sigma_e[gi])];
            const Mat2& sebar = vlift.at(e.to)[to_tab.index_of(e.sigma_ebar[gi])];
            bool ok = Mat2::eq(t.mul_unchecked(se).mul_unchecked(t.inv()), sebar);
            report.edge_checks.push_back({e.id, gi, ok});
            if (!ok) {
                all_ok = false;
                throw EdgeCompatibilityFailure("edge " + e.id + ", generator " +
                                               std::to_string(gi) +
                                               ": the two lifts of the edge group disagree");
            }
        }
    }

    // relators evaluate to I exactly
    for (const std::string& word : gog.relators) {
        LiftReport::RelatorCheck rc{word, "", false};
        try {
            Mat2 acc = id;
            for (const Token& tk : parse_relator(word)) {
                Mat2 m = id;
                if (tk.is_stable) {
                    m = tlift.at(tk.id);
                } else {
                    const GogVertex& v = gog.vertex(tk.id);
                    if (tk.gen_index >= v.gens.size())
                        throw UsageError("relator generator index out of range");
                    m = vlift.at(tk.id)[vtab.at(tk.id).index_of(v.gens[tk.gen_index])];
                }
                acc = acc.mul_unchecked(tk.inverse ? m.inv() : m);
            }
            auto pm = acc.pm_identity();
            rc.result = pm ? (*pm > 0 ? "I" : "-I") : "other";
            rc.ok = pm && *pm > 0;
        } catch (const Error& err) {
            rc.result = std::string("error: ") + err.what();
            rc.ok = false;
        }
        if (!rc.ok) all_ok = false;
        report.relator_checks.push_back(std::move(rc));
        if (!report.relator_checks.back().ok)
            throw RelatorFailure("relator does not lift to the identity: " + word);
    }

    report.verdict = all_ok ? LiftReport::Verdict::Lift : LiftReport::Verdict::Fail;
    return report;
}

NoLiftReport verify_no_lift(const Quad& quad) {
    Word4 relator = Word4::parse("ABabCDcd");
    Mat2 base = eval_word(relator, quad);
    if (!base.pm_identity())
        throw RelationNotCentral("the defining relator does not evaluate to +-I");
    int minus = 0, plus = 0;
    for (int mask = 0; mask < 16; ++mask) {
        Quad signed_quad{(mask & 1) ? -quad.A : quad.A, (mask & 2) ? -quad.B : quad.B,
                         (mask & 4) ? -quad.C : quad.C, (mask & 8) ? -quad.D : quad.D};
        Mat2 val = eval_word(relator, signed_quad);
        auto pm = val.pm_identity();
        if (!pm) throw RelationNotCentral("a sign lift evaluates to neither I nor -I");
        (*pm > 0 ? plus : minus)++;
    }
    if (minus != 0 && plus != 0)
        throw InternalError("sign lifts disagree on a relator with even exponent sums");
    NoLiftReport rep{};
    rep.minus_count = minus;
    rep.relator = relator;
    rep.verdict = minus == 16 ? NoLiftReport::Verdict::NoLift : NoLiftReport::Verdict::Liftable;
    return rep;
}

} // namespace liftsl2
