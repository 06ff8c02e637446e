#include "liftsl2/mat2.hpp"

#include <sstream>

namespace liftsl2 {

Mat2 Mat2::identity(const FieldPtr& f, bool ext) {
    Mat2 m;
    m.f_ = f;
    m.ext_ = ext;
    Scalar one = Scalar::one(f, ext), zero = Scalar::zero(f, ext);
    m.e_ = {one, zero, zero, one};
    return m;
}

Mat2 Mat2::from_entries(Scalar a11, Scalar a12, Scalar a21, Scalar a22, bool verify_det) {
    if (!a11.same_domain(a12) || !a11.same_domain(a21) || !a11.same_domain(a22))
        throw UsageError("matrix entries from different coefficient domains");
    Mat2 m;
    m.f_ = a11.base();
    m.ext_ = a11.ext();
    m.e_ = {std::move(a11), std::move(a12), std::move(a21), std::move(a22)};
    if (verify_det) m.verify_det_one();
    return m;
}

Scalar Mat2::det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
Scalar Mat2::trace() const { return e_[0] + e_[3]; }

void Mat2::verify_det_one() const {
    if (!Scalar::eq(det(), Scalar::one(f_, ext_)))
        throw DeterminantDrift("determinant differs from 1 at working precision");
}

Mat2 Mat2::mul_unchecked(const Mat2& o) const {
    Mat2 m;
    m.f_ = f_;
    m.ext_ = ext_;
    m.e_ = {e_[0] * o.e_[0] + e_[1] * o.e_[2], e_[0] * o.e_[1] + e_[1] * o.e_[3],
            e_[2] * o.e_[0] + e_[3] * o.e_[2], e_[2] * o.e_[1] + e_[3] * o.e_[3]};
    return m;
}

Mat2 Mat2::operator*(const Mat2& o) const {
    Mat2 m = mul_unchecked(o);
    m.verify_det_one();
    return m;
}

Mat2 Mat2::inv() const {
    // adjugate of a determinant-1 matrix
    Mat2 m;
    m.f_ = f_;
    m.ext_ = ext_;
    m.e_ = {e_[3], -e_[1], -e_[2], e_[0]};
    return m;
}

Mat2 Mat2::operator-() const {
    Mat2 m;
    m.f_ = f_;
    m.ext_ = ext_;
    m.e_ = {-e_[0], -e_[1], -e_[2], -e_[3]};
    return m;
}

Mat2 Mat2::pow(int64_t e) const {
    if (e < 0) return inv().pow(-e);
    Mat2 acc = identity(f_, ext_);
    Mat2 base = *this;
    while (e > 0) {
        if (e & 1) acc = acc.mul_unchecked(base);
        if ((e >>= 1) > 0) base = base.mul_unchecked(base);
    }
    return acc;
}

Mat2 Mat2::to_precision(const FieldPtr& f2) const {
    Mat2 m;
    m.f_ = f2;
    m.ext_ = ext_;
    for (int i = 0; i < 4; ++i) m.e_[(size_t)i] = e_[(size_t)i].to_precision(f2);
    return m;
}

bool Mat2::eq(const Mat2& a, const Mat2& b) {
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = Scalar::eq(a.e_[(size_t)i], b.e_[(size_t)i]) && ok;
    return ok;
}

std::optional<int> Mat2::pm_identity() const {
    Mat2 id = identity(f_, ext_);
    if (eq(*this, id)) return 1;
    if (eq(*this, -id)) return -1;
    return std::nullopt;
}

std::string Mat2::str() const {
    std::ostringstream os;
    os << "[[" << e_[0].str() << ", " << e_[1].str() << "], [" << e_[2].str() << ", "
       << e_[3].str() << "]]";
    return os.str();
}

ProjMat::ProjMat(const Mat2& m) {
    for (int i = 0; i < 4; ++i) {
        const Scalar& s = m.entry(i);
        if (s.is_zero_at_precision()) continue;
        rep_ = s.is_canonical_sign() ? m : -m;
        return;
    }
    throw PrecisionExhausted("matrix has no entry certified nonzero");
}

std::string ProjMat::key() const {
    std::ostringstream os;
    // states and digit prefixes are canonicalized so that elements equal at
    // precision agree on the key (exactness and certification width do not
    // leak in); residual collisions are resolved by eq
    auto emit_fe = [&](const Fe& x) {
        if (x.is_zeroish()) {
            os << "z;";
            return;
        }
        os << "v" << x.valuation() << ":";
        int depth = x.exact() ? 12 : (int)std::min<size_t>(x.digits().size(), 12);
        std::vector<int32_t> w = x.expansion_window(depth);
        while (!w.empty() && w.back() == 0) w.pop_back();
        for (int32_t d : w) os << d << ",";
        os << ";";
    };
    for (int i = 0; i < 4; ++i) {
        emit_fe(rep_.entry(i).re());
        if (rep_.ext()) emit_fe(rep_.entry(i).im());
        os << "|";
    }
    return os.str();
}

ElementClass classify(const Mat2& g) {
    if (g.pm_identity()) throw CentralElement("classify is undefined on +-I");
    Scalar t = g.trace();
    if (t.is_exact_zero()) return {ElementClass::Kind::Elliptic, 0};
    std::optional<int> v;
    try {
        v = t.valuation();
    } catch (const PrecisionExhausted&) {
        v = std::nullopt;
    }
    if (v) {
        if (*v < 0) return {ElementClass::Kind::Hyperbolic, -2 * *v};
        return {ElementClass::Kind::Elliptic, 0};
    }
    if (t.valuation_lower_bound() >= 0) return {ElementClass::Kind::Elliptic, 0};
    throw PrecisionExhausted("trace valuation sign not certified at precision N");
}

std::optional<int64_t> order(const Mat2& g, int64_t bound) {
    if (bound < 1) throw UsageError("order bound must be >= 1");
    if (!g.pm_identity() && classify(g).kind == ElementClass::Kind::Hyperbolic)
        return std::nullopt;
    Mat2 id = Mat2::identity(g.base(), g.ext());
    Mat2 x = g;
    for (int64_t n = 1; n <= bound; ++n) {
        if (Mat2::eq(x, id)) return n;
        if (n < bound) x = x.mul_unchecked(g);
    }
    return std::nullopt;
}

std::optional<int64_t> proj_order(const ProjMat& g, int64_t bound) {
    if (bound < 1) throw UsageError("order bound must be >= 1");
    const Mat2& m = g.rep();
    if (!m.pm_identity() && classify(m).kind == ElementClass::Kind::Hyperbolic)
        return std::nullopt;
    Mat2 x = m;
    for (int64_t n = 1; n <= bound; ++n) {
        if (x.pm_identity()) return n;
        if (n < bound) x = x.mul_unchecked(m);
    }
    return std::nullopt;
}

bool proj_is_involution(const ProjMat& g) {
    Scalar t = g.rep().trace();
    return Scalar::eq(t, Scalar::zero(g.rep().base(), g.rep().ext()));
}

std::optional<int> unipotent_sign(const Mat2& g) {
    if (g.pm_identity()) return std::nullopt;
    Scalar two = Scalar::from_int(g.base(), g.ext(), 2);
    if (Scalar::eq(g.trace(), two)) return 1;
    if (Scalar::eq(g.trace(), -two)) return -1;
    return std::nullopt;
}

bool is_unipotent(const Mat2& g) { return unipotent_sign(g).has_value(); }

int64_t default_order_bound(const Field& f) {
    int64_t q = f.q();
    return 2 * (int64_t)f.p() * (q * q - 1);
}

Word4 Word4::parse(const std::string& s) {
    std::vector<int8_t> ls;
    for (char c : s) {
        switch (c) {
            case 'A': ls.push_back(1); break;
            case 'a': ls.push_back(-1); break;
            case 'B': ls.push_back(2); break;
            case 'b': ls.push_back(-2); break;
            case 'C': ls.push_back(3); break;
            case 'c': ls.push_back(-3); break;
            case 'D': ls.push_back(4); break;
            case 'd': ls.push_back(-4); break;
            case ' ': break;
            default: throw ParseError(std::string("bad word letter '") + c + "'");
        }
    }
    return from_letters(ls);
}

Word4 Word4::from_letters(const std::vector<int8_t>& letters) {
    Word4 w;
    for (int8_t l : letters) {
        if (l == 0 || l > 4 || l < -4) throw ParseError("word letter out of range");
        if (!w.ls_.empty() && w.ls_.back() == -l)
            w.ls_.pop_back();
        else
            w.ls_.push_back(l);
    }
    return w;
}

Word4 Word4::inverse() const {
    Word4 w;
    w.ls_.reserve(ls_.size());
    for (size_t i = ls_.size(); i-- > 0;) w.ls_.push_back((int8_t)-ls_[i]);
    return w;
}

Word4 Word4::operator*(const Word4& o) const {
    std::vector<int8_t> all = ls_;
    all.insert(all.end(), o.ls_.begin(), o.ls_.end());
    return from_letters(all);
}

std::string Word4::str() const {
    static const char* up = "ABCD";
    static const char* lo = "abcd";
    std::string s;
    for (int8_t l : ls_) s += l > 0 ? up[l - 1] : lo[-l - 1];
    return s;
}

std::array<int, 4> Word4::parities() const {
    std::array<int, 4> par{0, 0, 0, 0};
    for (int8_t l : ls_) par[(size_t)(std::abs(l) - 1)] ^= 1;
    return par;
}

Mat2 eval_word(const Word4& w, const Quad& q) {
    Mat2 acc = Mat2::identity(q.A.base(), q.A.ext());
    std::array<Mat2, 4> gen = {q.A, q.B, q.C, q.D};
    std::array<Mat2, 4> inv = {q.A.inv(), q.B.inv(), q.C.inv(), q.D.inv()};
    for (int8_t l : w.letters()) {
        const Mat2& m = l > 0 ? gen[(size_t)(l - 1)] : inv[(size_t)(-l - 1)];
        acc = acc.mul_unchecked(m);
    }
    return acc;
}

} // namespace liftsl2
