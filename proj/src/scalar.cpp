#include "liftsl2/scalar.hpp"

#include <sstream>

namespace liftsl2 {

Scalar::Scalar(FieldPtr base, bool ext, Fe re, Fe im)
    : f_(std::move(base)), ext_(ext), re_(std::move(re)), im_(std::move(im)) {
    if (!ext_ && !im_.is_exact_zero())
        throw UsageError("imaginary part on a base-field scalar");
}

void Scalar::validate_ext(const FieldPtr& f) {
    if (f->char0() && f->p() == 2)
        throw UnsupportedExtension("K(i) over residue characteristic 2 is ramified; not supported");
    if (f->minus_one_is_square())
        throw UnsupportedExtension("-1 is already a square: K(i) = K, use the base field");
}

Scalar Scalar::zero(const FieldPtr& f, bool ext) {
    if (ext) validate_ext(f);
    return Scalar(f, ext, Fe::zero(f), Fe::zero(f));
}

Scalar Scalar::one(const FieldPtr& f, bool ext) { return from_int(f, ext, 1); }

Scalar Scalar::from_int(const FieldPtr& f, bool ext, int64_t n) {
    if (ext) validate_ext(f);
    return Scalar(f, ext, Fe::from_int(f, n), Fe::zero(f));
}

Scalar Scalar::from_fraction(const FieldPtr& f, bool ext, int64_t num, int64_t den) {
    if (ext) validate_ext(f);
    return Scalar(f, ext, Fe::from_fraction(f, num, den), Fe::zero(f));
}

Scalar Scalar::uniformizer_pow(const FieldPtr& f, bool ext, int k) {
    if (ext) validate_ext(f);
    return Scalar(f, ext, Fe::uniformizer_pow(f, k), Fe::zero(f));
}

Scalar Scalar::from_fe(const FieldPtr& f, bool ext, Fe x) {
    if (ext) validate_ext(f);
    return Scalar(f, ext, std::move(x), Fe::zero(f));
}

Scalar Scalar::sqrt_minus_one(const FieldPtr& f, bool ext) {
    if (ext) {
        validate_ext(f);
        return Scalar(f, ext, Fe::zero(f), Fe::one(f));
    }
    if (!f->minus_one_is_square())
        throw NotASquare("-1 is not a square in this field; work over K(i)");
    return Scalar(f, false, sqrt(Fe::from_int(f, -1)), Fe::zero(f));
}

bool Scalar::same_domain(const Scalar& o) const {
    return f_ && o.f_ && f_->same_as(*o.f_) && ext_ == o.ext_;
}

void Scalar::check_domain(const Scalar& o) const {
    if (!same_domain(o)) throw UsageError("scalars from different coefficient domains");
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_domain(o);
    return Scalar(f_, ext_, re_ + o.re_, im_ + o.im_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_domain(o);
    return Scalar(f_, ext_, re_ - o.re_, im_ - o.im_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_domain(o);
    if (!ext_) return Scalar(f_, false, re_ * o.re_, im_);
    return Scalar(f_, true, re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
}

Scalar Scalar::operator-() const { return Scalar(f_, ext_, -re_, -im_); }

Scalar Scalar::conj() const {
    if (!ext_) return *this;
    return Scalar(f_, true, re_, -im_);
}

Scalar Scalar::inv() const {
    if (!ext_) return Scalar(f_, false, re_.inv(), im_);
    // Norm re^2 + im^2 never cancels below min valuation: -1 is a
    // non-residue, so the leading digits cannot satisfy x^2 = -y^2.
    Fe norm = re_ * re_ + im_ * im_;
    return Scalar(f_, true, re_ / norm, (-im_) / norm);
}

Scalar Scalar::operator/(const Scalar& o) const {
    check_domain(o);
    if (!ext_) return Scalar(f_, false, re_ / o.re_, im_);
    return *this * o.inv();
}

Scalar Scalar::pow(int64_t e) const {
    if (e < 0) return inv().pow(-e);
    Scalar acc = one(f_, ext_);
    Scalar base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        if ((e >>= 1) > 0) base = base * base;
    }
    return acc;
}

bool Scalar::is_zero_at_precision() const {
    return re_.is_zero_at_precision() && im_.is_zero_at_precision();
}

int Scalar::valuation() const {
    if (!ext_) return re_.valuation();
    if (re_.is_exact_zero()) return im_.valuation();
    if (im_.is_exact_zero()) return re_.valuation();
    if (re_.is_value() && im_.is_value()) return std::min(re_.valuation(), im_.valuation());
    // one component is only known to be small: the min is certified only if
    // the other sits strictly below the bound
    const Fe& v = re_.is_value() ? re_ : im_;
    const Fe& n = re_.is_value() ? im_ : re_;
    if (!v.is_value()) throw PrecisionExhausted("valuation of a scalar that is zero at precision N");
    if (v.valuation() < n.valuation_lower_bound()) return v.valuation();
    throw PrecisionExhausted("extension valuation not certified at precision N");
}

int Scalar::valuation_lower_bound() const {
    return std::min(re_.valuation_lower_bound(), im_.valuation_lower_bound());
}

bool Scalar::eq(const Scalar& a, const Scalar& b) {
    bool r = Fe::eq(a.re_, b.re_);
    bool i = Fe::eq(a.im_, b.im_);
    return r && i;
}

Fe::Cmp Scalar::compare(const Scalar& a, const Scalar& b) {
    Fe::Cmp r = Fe::compare(a.re_, b.re_);
    Fe::Cmp i = Fe::compare(a.im_, b.im_);
    if (r == Fe::Cmp::Distinct || i == Fe::Cmp::Distinct) return Fe::Cmp::Distinct;
    if (r == Fe::Cmp::Equal && i == Fe::Cmp::Equal) return Fe::Cmp::Equal;
    return Fe::Cmp::AtPrecision;
}

const Fe& Scalar::sign_component() const {
    if (!ext_) return re_;
    bool r_val = re_.is_value(), i_val = im_.is_value();
    if (r_val && !i_val) return re_;
    if (i_val && !r_val) return im_;
    if (!r_val && !i_val) throw ZeroInput("sign of a scalar that is zero at precision N");
    return re_.valuation() <= im_.valuation() ? re_ : im_;
}

std::string Scalar::str() const {
    if (!ext_) return re_.str();
    std::ostringstream os;
    os << re_.str() << " + i*" << im_.str();
    return os.str();
}

Scalar ext_arith(const Scalar& x, const Scalar& y, FieldOp op) {
    Scalar out;
    switch (op) {
        case FieldOp::Add: out = x + y; break;
        case FieldOp::Sub: out = x - y; break;
        case FieldOp::Mul: return x * y;
        case FieldOp::Div: return x / y;
        case FieldOp::Neg: return -x;
        case FieldOp::Inv: return x.inv();
    }
    if (out.re().is_near_zero() || out.im().is_near_zero())
        throw PrecisionExhausted("cancellation left zero significant digits at precision N");
    return out;
}

} // namespace liftsl2
