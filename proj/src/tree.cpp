#include "liftsl2/tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace liftsl2 {

namespace {

void require_base(const Mat2& g) {
    if (g.ext()) throw UsageError("tree operations run over the base field K");
}

const Fe& fe(const Scalar& s) { return s.re(); }

// certified test of v(a) <= v(b); nullopt when the precision cannot decide
std::optional<bool> val_leq(const Fe& a, const Fe& b) {
    if (a.is_exact_zero()) return b.is_exact_zero();
    if (b.is_exact_zero()) return true;
    if (a.is_value() && b.is_value()) return a.valuation() <= b.valuation();
    if (a.is_value())
        return a.valuation() <= b.valuation_lower_bound() ? std::optional<bool>(true) : std::nullopt;
    if (b.is_value())
        return b.valuation() < a.valuation_lower_bound() ? std::optional<bool>(false) : std::nullopt;
    return std::nullopt;
}

} // namespace

bool operator==(const TreeVertex& a, const TreeVertex& b) {
    return a.n == b.n && Fe::compare(a.b, b.b) == Fe::Cmp::Equal;
}

std::string TreeVertex::key() const {
    std::ostringstream os;
    os << n << "@";
    if (b.is_exact_zero()) {
        os << "0";
    } else {
        os << b.valuation() << ":";
        for (int32_t d : b.digits()) os << d << ",";
    }
    return os.str();
}

std::string TreeVertex::str() const {
    std::ostringstream os;
    os << "(" << n << ",";
    if (b.is_exact_zero()) {
        os << "0";
    } else {
        os << "u^" << b.valuation() << "*[";
        for (size_t i = 0; i < b.digits().size(); ++i) os << (i ? "," : "") << b.digits()[i];
        os << "]";
    }
    os << ")";
    return os.str();
}

TreeVertex make_vertex(const FieldPtr& f, int n, const Fe& b) {
    if (b.is_exact_zero()) return {n, Fe::zero(f)};
    if (b.is_near_zero()) {
        if (b.valuation_lower_bound() >= n) return {n, Fe::zero(f)};
        throw PrecisionExhausted("vertex coordinate not certified modulo u^n");
    }
    int v = b.valuation();
    if (v >= n) return {n, Fe::zero(f)};
    if (b.cert_abs() < n) throw PrecisionExhausted("vertex coordinate not certified modulo u^n");
    std::vector<int32_t> window = b.expansion_window(n - v);
    while (!window.empty() && window.back() == 0) window.pop_back();
    if (window.empty()) return {n, Fe::zero(f)};
    if ((int)window.size() > f->precision())
        throw PrecisionExhausted("vertex coordinate needs more digits than precision N");
    return {n, Fe::from_parts(f, Fe::State::Val, v, std::move(window), true, false)};
}

namespace {

// canonical form of the lattice class spanned by the two columns
TreeVertex class_of_columns(const FieldPtr& f, Fe m11, Fe m12, Fe m21, Fe m22) {
    std::optional<bool> le = val_leq(m22, m21);
    if (!le) throw PrecisionExhausted("column reduction cannot certify pivot valuations");
    if (!*le) {
        std::swap(m11, m12);
        std::swap(m21, m22);
    }
    if (!m22.is_value())
        throw PrecisionExhausted("column reduction cannot certify pivot valuations");
    // eliminate the second row of column 1; the multiplier makes the true
    // entry zero
    Fe lambda = m21 / m22;
    Fe top = m11 - lambda * m12;
    if (!top.is_value())
        throw PrecisionExhausted("column reduction cannot certify pivot valuations");
    int n = top.valuation() - m22.valuation();
    return make_vertex(f, n, m12 / m22);
}

} // namespace

TreeVertex act(const Mat2& g, const TreeVertex& v) {
    require_base(g);
    const FieldPtr& f = g.base();
    Fe un = Fe::uniformizer_pow(f, v.n);
    return class_of_columns(f, fe(g.a11()) * un, fe(g.a11()) * v.b + fe(g.a12()),
                            fe(g.a21()) * un, fe(g.a21()) * v.b + fe(g.a22()));
}

TreeVertex act(const ProjMat& g, const TreeVertex& v) { return act(g.rep(), v); }

int distance(const TreeVertex& v, const TreeVertex& w) {
    // change of basis [[u^{nw-nv}, (bw-bv) u^{-nv}], [0, 1]]
    int e1 = w.n - v.n;
    Fe diff = w.b - v.b;
    int d1 = std::min(0, e1);
    if (!diff.is_exact_zero()) d1 = std::min(d1, diff.valuation() - v.n);
    return std::abs(e1 - 2 * d1);
}

std::vector<TreeVertex> neighbors(const FieldPtr& f, const TreeVertex& v) {
    std::vector<TreeVertex> out;
    out.reserve((size_t)f->q() + 1);
    out.push_back(make_vertex(f, v.n - 1, v.b));
    for (int c = 0; c < f->q(); ++c) {
        Fe b = c == 0 ? v.b : v.b + Fe::from_residue(f, c, v.n);
        out.push_back(make_vertex(f, v.n + 1, b));
    }
    return out;
}

std::vector<TreeVertex> ball(const FieldPtr& f, const TreeVertex& center, int radius, int64_t cap) {
    if (radius < 0) throw UsageError("ball radius must be >= 0");
    std::vector<TreeVertex> out{center};
    std::unordered_set<std::string> seen{center.key()};
    size_t layer_begin = 0;
    for (int r = 0; r < radius; ++r) {
        size_t layer_end = out.size();
        for (size_t i = layer_begin; i < layer_end; ++i) {
            for (TreeVertex& nb : neighbors(f, out[i])) {
                if ((int64_t)out.size() >= cap) throw CapExceeded("ball cap exceeded");
                if (seen.insert(nb.key()).second) out.push_back(std::move(nb));
            }
        }
        layer_begin = layer_end;
    }
    return out;
}

int displacement(const Mat2& g, const TreeVertex& v) { return distance(v, act(g, v)); }

TranslationLength translation_length_bfs(const Mat2& g, int depth) {
    require_base(g);
    if (depth < 1) throw UsageError("depth must be >= 1");
    const FieldPtr& f = g.base();
    TreeVertex v = TreeVertex::standard(f);
    int cur = displacement(g, v);
    for (int step = 0; step < depth; ++step) {
        if (cur == 0) return {0, true};
        bool moved = false;
        for (TreeVertex& nb : neighbors(f, v)) {
            int d = displacement(g, nb);
            if (d < cur) {
                v = std::move(nb);
                cur = d;
                moved = true;
                break;
            }
        }
        // displacement has no non-global local minima on a tree
        if (!moved) return {cur, true};
    }
    if (cur == 0) return {0, true};
    for (TreeVertex& nb : neighbors(f, v))
        if (displacement(g, nb) < cur) return {cur, false};
    return {cur, true};
}

// ----------------------------------------------------------------------
// Projective points and apartments

ProjPoint ProjPoint::of(const Scalar& x, const Scalar& y) {
    bool xz = x.is_zero_at_precision();
    bool yz = y.is_zero_at_precision();
    if (xz && yz) throw ZeroInput("projective point needs a nonzero coordinate");
    ProjPoint p;
    if (xz) {
        p.x = x / y;
        p.y = Scalar::one(y.base(), y.ext());
        p.x_is_one = false;
    } else if (yz) {
        p.x = Scalar::one(x.base(), x.ext());
        p.y = y / x;
        p.x_is_one = true;
    } else if (x.valuation() <= y.valuation()) {
        p.x = Scalar::one(x.base(), x.ext());
        p.y = y / x;
        p.x_is_one = true;
    } else {
        p.x = x / y;
        p.y = Scalar::one(y.base(), y.ext());
        p.x_is_one = false;
    }
    return p;
}

std::string ProjPoint::str() const { return "(" + x.str() + " : " + y.str() + ")"; }

bool proj_point_eq(const ProjPoint& a, const ProjPoint& b) {
    Scalar cross = a.x * b.y - a.y * b.x;
    try {
        return cross.is_zero_at_precision();
    } catch (const PrecisionExhausted&) {
        return false;
    }
}

namespace {

std::pair<Fe, Fe> primitive(const ProjPoint& p) { return {fe(p.x), fe(p.y)}; }

std::pair<Fe, Fe> completion(const FieldPtr& f, const ProjPoint& p) {
    if (p.x_is_one) return {Fe::zero(f), Fe::one(f)};
    return {Fe::one(f), Fe::zero(f)};
}

TreeVertex apartment_vertex(const FieldPtr& f, const std::pair<Fe, Fe>& xi,
                            const std::pair<Fe, Fe>& eta, int k) {
    Fe uk = Fe::uniformizer_pow(f, k);
    return class_of_columns(f, xi.first, eta.first * uk, xi.second, eta.second * uk);
}

} // namespace

std::vector<TreeVertex> apartment_segment(const FieldPtr& f, const ProjPoint& toward,
                                          const ProjPoint& away, int kmin, int kmax) {
    auto xi = primitive(toward);
    auto eta = primitive(away);
    std::vector<TreeVertex> out;
    out.reserve((size_t)(kmax - kmin + 1));
    for (int k = kmin; k <= kmax; ++k) out.push_back(apartment_vertex(f, xi, eta, k));
    return out;
}

// ----------------------------------------------------------------------
// Fixed sets

namespace {

ProjPoint eigen_end(const Mat2& g, const Scalar& lambda) {
    Scalar c1 = g.a12();
    Scalar c2 = lambda - g.a11();
    bool z1, z2;
    try {
        z1 = c1.is_zero_at_precision();
        z2 = c2.is_zero_at_precision();
    } catch (const PrecisionExhausted&) {
        z1 = z2 = true;
    }
    if (!(z1 && z2)) return ProjPoint::of(c1, c2);
    return ProjPoint::of(lambda - g.a22(), g.a21());
}

bool vertex_fixed(const Mat2& g, const TreeVertex& v) { return act(g, v) == v; }

int horoball_level(const Mat2& g, const FieldPtr& f, const std::pair<Fe, Fe>& xi,
                   const std::pair<Fe, Fe>& eta, int search_bound) {
    if (vertex_fixed(g, apartment_vertex(f, xi, eta, 0))) {
        int k = 0;
        while (k > -search_bound) {
            if (!vertex_fixed(g, apartment_vertex(f, xi, eta, k - 1))) return k;
            --k;
        }
        throw DepthInsufficient("horoball level below search bound");
    }
    for (int k = 1; k <= search_bound; ++k)
        if (vertex_fixed(g, apartment_vertex(f, xi, eta, k))) return k;
    throw DepthInsufficient("horoball level beyond search bound");
}

TreeVertex descend_to_fixed(const Mat2& g, int depth) {
    const FieldPtr& f = g.base();
    TreeVertex v = TreeVertex::standard(f);
    int cur = displacement(g, v);
    for (int step = 0; step <= depth && cur > 0; ++step) {
        bool moved = false;
        for (TreeVertex& nb : neighbors(f, v)) {
            int d = displacement(g, nb);
            if (d < cur) {
                v = std::move(nb);
                cur = d;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    if (cur != 0) throw DepthInsufficient("no fixed vertex within the search depth");
    return v;
}

// Band radius around a line nerve, measured by expanding a tube around the
// visible segment until a layer carries no fixed vertex at its nerve
// distance. Distances to the nerve are computed against an extended segment
// so that end effects cannot skew them. The band law is re-checked on the
// whole explored tube.
int measure_band_radius(const Mat2& g, const FieldPtr& f, const ProjPoint& e1, const ProjPoint& e2,
                        int depth, int64_t cap) {
    std::vector<TreeVertex> nerve_ext =
        apartment_segment(f, e1, e2, -(2 * depth + 4), 2 * depth + 4);
    auto nerve_dist = [&](const TreeVertex& w) {
        int best = distance(w, nerve_ext[0]);
        for (size_t i = 1; i < nerve_ext.size() && best > 0; ++i)
            best = std::min(best, distance(w, nerve_ext[i]));
        return best;
    };
    struct Rec {
        TreeVertex v;
        int nd;
        bool fixed;
    };
    std::vector<Rec> records;
    std::unordered_set<std::string> seen;
    std::vector<TreeVertex> layer;
    for (int k = -(depth + 2); k <= depth + 2; ++k) {
        TreeVertex v = nerve_ext[(size_t)(k + 2 * depth + 4)];
        if (!seen.insert(v.key()).second) continue;
        if (!vertex_fixed(g, v)) throw VerificationError("nerve vertices are not fixed");
        records.push_back({v, 0, true});
        layer.push_back(std::move(v));
    }
    int radius = 0;
    for (int k = 1; k <= depth + 1; ++k) {
        std::vector<TreeVertex> next;
        bool fixed_at_k = false;
        for (const TreeVertex& v : layer)
            for (TreeVertex& nb : neighbors(f, v)) {
                if ((int64_t)seen.size() >= cap) throw CapExceeded("band tube cap exceeded");
                if (!seen.insert(nb.key()).second) continue;
                int nd = nerve_dist(nb);
                bool fx = vertex_fixed(g, nb);
                if (fx) {
                    radius = std::max(radius, nd);
                    if (nd == k) fixed_at_k = true;
                }
                records.push_back({nb, nd, fx});
                next.push_back(std::move(nb));
            }
        if (!fixed_at_k) break;
        if (k == depth + 1) throw DepthInsufficient("band radius reaches the search depth");
        layer = std::move(next);
    }
    for (const Rec& r : records)
        if ((r.nd <= radius) != r.fixed)
            throw VerificationError("fixed set is not a band around the nerve");
    return radius;
}

} // namespace

std::string FixedSetDescriptor::str() const {
    std::ostringstream os;
    if (kind == Kind::Horoball) {
        os << "horoball toward " << (end ? end->str() : "?") << " level " << level;
        return os.str();
    }
    os << "band radius " << (radius2 / 2) << (radius2 % 2 ? ".5" : "") << " nerve ";
    switch (nerve) {
        case Nerve::Vertex:
            os << "vertex " << (nerve_vertices.empty() ? "?" : nerve_vertices[0].str());
            break;
        case Nerve::Edge: os << "edge"; break;
        case Nerve::Line: os << "line"; break;
    }
    return os.str();
}

namespace {

bool same_nerve_data(const FixedSetDescriptor& a, const FixedSetDescriptor& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == FixedSetDescriptor::Kind::Horoball)
        return a.end && b.end && proj_point_eq(*a.end, *b.end);
    if (a.nerve != b.nerve) return false;
    switch (a.nerve) {
        case FixedSetDescriptor::Nerve::Vertex:
            return !a.nerve_vertices.empty() && !b.nerve_vertices.empty() &&
                   a.nerve_vertices[0] == b.nerve_vertices[0];
        case FixedSetDescriptor::Nerve::Edge:
            return (a.nerve_vertices[0] == b.nerve_vertices[0] &&
                    a.nerve_vertices[1] == b.nerve_vertices[1]) ||
                   (a.nerve_vertices[0] == b.nerve_vertices[1] &&
                    a.nerve_vertices[1] == b.nerve_vertices[0]);
        case FixedSetDescriptor::Nerve::Line:
            if (!a.ends || !b.ends) return false;
            return (proj_point_eq(a.ends->first, b.ends->first) &&
                    proj_point_eq(a.ends->second, b.ends->second)) ||
                   (proj_point_eq(a.ends->first, b.ends->second) &&
                    proj_point_eq(a.ends->second, b.ends->first));
    }
    return false;
}

} // namespace

bool descriptor_eq(const FixedSetDescriptor& a, const FixedSetDescriptor& b) {
    if (!same_nerve_data(a, b)) return false;
    if (a.kind == FixedSetDescriptor::Kind::Horoball) return a.level == b.level;
    return a.radius2 == b.radius2;
}

FixedSetDescriptor fixed_set(const ProjMat& pm, int depth, int64_t cap) {
    const Mat2& g = pm.rep();
    require_base(g);
    const FieldPtr& f = g.base();
    if (g.pm_identity()) throw CentralElement("fixed_set of the identity is the whole tree");
    if (classify(g).kind == ElementClass::Kind::Hyperbolic)
        throw NotElliptic("hyperbolic elements have empty fixed set");
    if (!proj_order(pm, default_order_bound(*f)))
        throw NotFiniteOrder("element is elliptic of unbounded order");
    if (depth < 1) throw UsageError("depth must be >= 1");

    FixedSetDescriptor d{};
    if (auto us = unipotent_sign(g)) {
        Mat2 w = *us > 0 ? g : -g;
        ProjPoint end = eigen_end(w, Scalar::one(f, false));
        auto xi = primitive(end);
        auto eta = completion(f, end);
        d.kind = FixedSetDescriptor::Kind::Horoball;
        d.end = end;
        d.level = horoball_level(g, f, xi, eta, depth + 8);
        d.apex = apartment_vertex(f, xi, eta, d.level);
        return d;
    }

    Scalar tr = g.trace();
    Scalar disc = tr * tr - Scalar::from_int(f, false, 4);
    if (disc.is_zero_at_precision())
        throw PrecisionExhausted("discriminant vanishes at precision N but the trace is not exactly +-2");
    if (is_square(fe(disc))) {
        Scalar s = Scalar::from_fe(f, false, sqrt(fe(disc)));
        Scalar two = Scalar::from_int(f, false, 2);
        ProjPoint e1 = eigen_end(g, (tr + s) / two);
        ProjPoint e2 = eigen_end(g, (tr - s) / two);
        d.kind = FixedSetDescriptor::Kind::Band;
        d.nerve = FixedSetDescriptor::Nerve::Line;
        d.ends = {e1, e2};
        d.nerve_vertices = apartment_segment(f, e1, e2, -2, 2);
        d.radius2 = 2 * measure_band_radius(g, f, e1, e2, depth, cap);
        return d;
    }

    // non-split semisimple: finite fixed subtree centered on a vertex or edge
    TreeVertex v0 = descend_to_fixed(g, depth);
    std::vector<TreeVertex> fixed{v0};
    std::unordered_map<std::string, int> index{{v0.key(), 0}};
    std::vector<int> dist{0};
    std::vector<std::vector<int>> adj{{}};
    for (size_t i = 0; i < fixed.size(); ++i) {
        if ((int64_t)fixed.size() > cap) throw CapExceeded("fixed subtree cap exceeded");
        if (dist[i] >= depth) throw DepthInsufficient("fixed subtree reaches the search boundary");
        for (TreeVertex& nb : neighbors(f, fixed[i])) {
            if (!vertex_fixed(g, nb)) continue;
            auto it = index.find(nb.key());
            if (it == index.end()) {
                int id = (int)fixed.size();
                index.emplace(nb.key(), id);
                fixed.push_back(nb);
                dist.push_back(dist[i] + 1);
                adj.push_back({});
                adj[i].push_back(id);
                adj[(size_t)id].push_back((int)i);
            }
        }
    }
    auto bfs_far = [&](int start) {
        std::vector<int> dd(fixed.size(), -1);
        std::deque<int> qd{start};
        dd[(size_t)start] = 0;
        int far = start;
        while (!qd.empty()) {
            int x = qd.front();
            qd.pop_front();
            if (dd[(size_t)x] > dd[(size_t)far]) far = x;
            for (int y : adj[(size_t)x])
                if (dd[(size_t)y] < 0) {
                    dd[(size_t)y] = dd[(size_t)x] + 1;
                    qd.push_back(y);
                }
        }
        return std::make_pair(far, dd);
    };
    int a = bfs_far(0).first;
    auto [b, db] = bfs_far(a);
    int diam = db[(size_t)b];
    std::vector<int> path;
    {
        auto da = bfs_far(b).second; // distances from b
        int cur = a;
        path.push_back(cur);
        while (cur != b) {
            for (int y : adj[(size_t)cur])
                if (da[(size_t)y] == da[(size_t)cur] - 1) {
                    cur = y;
                    break;
                }
            path.push_back(cur);
        }
    }
    d.kind = FixedSetDescriptor::Kind::Band;
    d.radius2 = diam;
    if (diam % 2 == 0) {
        d.nerve = FixedSetDescriptor::Nerve::Vertex;
        d.nerve_vertices = {fixed[(size_t)path[path.size() / 2]]};
    } else {
        d.nerve = FixedSetDescriptor::Nerve::Edge;
        d.nerve_vertices = {fixed[(size_t)path[path.size() / 2 - 1]],
                            fixed[(size_t)path[path.size() / 2]]};
    }
    return d;
}

bool descriptor_contains(const FieldPtr& f, const FixedSetDescriptor& d, const TreeVertex& w,
                         int depth) {
    switch (d.kind) {
        case FixedSetDescriptor::Kind::Horoball: {
            // increasing union of the balls B(r_j, j) along the ray; the
            // membership test truncates the union at j = depth
            auto xi = primitive(*d.end);
            auto eta = completion(f, *d.end);
            TreeVertex rj = apartment_vertex(f, xi, eta, d.level + depth);
            return distance(w, rj) <= depth;
        }
        case FixedSetDescriptor::Kind::Band: {
            if (d.nerve == FixedSetDescriptor::Nerve::Vertex)
                return 2 * distance(w, d.nerve_vertices[0]) <= d.radius2;
            if (d.nerve == FixedSetDescriptor::Nerve::Edge)
                return 2 * std::min(distance(w, d.nerve_vertices[0]),
                                    distance(w, d.nerve_vertices[1])) -
                           1 <=
                       d.radius2;
            auto xi = primitive(d.ends->first);
            auto eta = primitive(d.ends->second);
            int lim = depth + 2;
            int best = distance(w, apartment_vertex(f, xi, eta, 0));
            for (int k = 1; k <= lim && best > 0; ++k) {
                best = std::min(best, distance(w, apartment_vertex(f, xi, eta, k)));
                best = std::min(best, distance(w, apartment_vertex(f, xi, eta, -k)));
            }
            return 2 * best <= d.radius2;
        }
    }
    return false;
}

namespace {

std::pair<FixedSetDescriptor, Mat2> maximal_power_fix(const ProjMat& g, int depth, int64_t cap) {
    const Mat2& m = g.rep();
    int64_t ord = *proj_order(g, default_order_bound(*m.base()));
    FixedSetDescriptor best = fixed_set(g, depth, cap);
    Mat2 best_mat = m;
    Mat2 x = m;
    for (int64_t i = 2; i < ord; ++i) {
        x = x.mul_unchecked(m);
        if (x.pm_identity()) continue;
        FixedSetDescriptor di = fixed_set(ProjMat(x), depth, cap);
        if (di.kind != best.kind) throw VerificationError("powers disagree on fixed-set kind");
        bool bigger = di.kind == FixedSetDescriptor::Kind::Horoball ? di.level < best.level
                                                                    : di.radius2 > best.radius2;
        if (bigger) {
            best = di;
            best_mat = x;
        }
    }
    return {best, best_mat};
}

} // namespace

NestingReport nesting_check(const ProjMat& g, const ProjMat& h, int depth, int64_t cap) {
    const FieldPtr& f = g.rep().base();
    NestingReport rep{};
    rep.fix_g = fixed_set(g, depth, cap);
    rep.fix_h = fixed_set(h, depth, cap);
    Mat2 Fg_mat = maximal_power_fix(g, depth, cap).second;
    Mat2 Fh_mat = maximal_power_fix(h, depth, cap).second;
    rep.same_nerve = same_nerve_data(rep.fix_g, rep.fix_h);

    std::vector<TreeVertex> B = ball(f, TreeVertex::standard(f), depth, cap);
    size_t ng = 0, nh = 0;
    bool g_sub_h = true, h_sub_g = true, F_disjoint = true;
    for (const TreeVertex& w : B) {
        bool ig = vertex_fixed(g.rep(), w);
        bool ih = vertex_fixed(h.rep(), w);
        ng += ig;
        nh += ih;
        if (ig && !ih) g_sub_h = false;
        if (ih && !ig) h_sub_g = false;
        if (F_disjoint && vertex_fixed(Fg_mat, w) && vertex_fixed(Fh_mat, w)) F_disjoint = false;
    }
    if (ng == 0 || nh == 0) throw DepthInsufficient("fixed sets invisible in the searched ball");

    rep.g_subset_h = g_sub_h;
    rep.h_subset_g = h_sub_g;
    if (g_sub_h && h_sub_g)
        rep.outcome = NestingOutcome::SameNerve;
    else if (g_sub_h)
        rep.outcome = NestingOutcome::GSubsetH;
    else if (h_sub_g)
        rep.outcome = NestingOutcome::HSubsetG;
    else if (F_disjoint)
        rep.outcome = NestingOutcome::Disjoint;
    else
        rep.outcome = NestingOutcome::Crossing;
    return rep;
}

std::string ball_dot(const FieldPtr& f, const TreeVertex& center, int radius,
                     const Mat2* highlight, int64_t cap) {
    std::vector<TreeVertex> B = ball(f, center, radius, cap);
    std::unordered_map<std::string, size_t> idx;
    for (size_t i = 0; i < B.size(); ++i) idx.emplace(B[i].key(), i);
    std::ostringstream os;
    os << "graph ball {\n  node [shape=circle, fontsize=8];\n";
    for (size_t i = 0; i < B.size(); ++i) {
        bool fixed = highlight && vertex_fixed(*highlight, B[i]);
        os << "  v" << i << " [label=\"" << B[i].str() << "\""
           << (fixed ? ", style=filled, fillcolor=lightblue" : "") << "];\n";
    }
    for (size_t i = 0; i < B.size(); ++i)
        for (TreeVertex& nb : neighbors(f, B[i])) {
            auto it = idx.find(nb.key());
            if (it != idx.end() && it->second > i) os << "  v" << i << " -- v" << it->second << ";\n";
        }
    os << "}\n";
    return os.str();
}

} // namespace liftsl2
