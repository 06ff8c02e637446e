#pragma once

#include "liftsl2/field.hpp"

namespace liftsl2 {

// Coefficient domain for matrices: K itself, or the unramified quadratic
// extension K(i) when -1 is not a square in K. Extension elements are pairs
// re + im*i with i^2 = -1; the base case keeps im pinned to exact zero.
class Scalar {
public:
    Scalar() = default;
    Scalar(FieldPtr base, bool ext, Fe re, Fe im);

    static Scalar zero(const FieldPtr& f, bool ext);
    static Scalar one(const FieldPtr& f, bool ext);
    static Scalar from_int(const FieldPtr& f, bool ext, int64_t n);
    static Scalar from_fraction(const FieldPtr& f, bool ext, int64_t num, int64_t den);
    static Scalar uniformizer_pow(const FieldPtr& f, bool ext, int k);
    static Scalar from_fe(const FieldPtr& f, bool ext, Fe x);
    // sqrt(-1): the pair (0, 1) over K(i), a Hensel root over K when q = 1 mod 4.
    static Scalar sqrt_minus_one(const FieldPtr& f, bool ext);
    // Throws UnsupportedExtension unless K(i) is a genuine unramified extension.
    static void validate_ext(const FieldPtr& f);

    const FieldPtr& base() const { return f_; }
    bool ext() const { return ext_; }
    const Fe& re() const { return re_; }
    const Fe& im() const { return im_; }
    bool same_domain(const Scalar& o) const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const;
    Scalar pow(int64_t e) const;
    Scalar conj() const;

    bool is_exact_zero() const { return re_.is_exact_zero() && im_.is_exact_zero(); }
    bool is_zero_at_precision() const;
    bool exact() const { return re_.exact() && im_.exact(); }

    // min of the component valuations (unramified extension rule)
    int valuation() const;
    int valuation_lower_bound() const;

    static bool eq(const Scalar& a, const Scalar& b);
    static Fe::Cmp compare(const Scalar& a, const Scalar& b);

    Scalar to_precision(const FieldPtr& f2) const {
        return Scalar(f2, ext_, re_.to_precision(f2), im_.to_precision(f2));
    }

    // Component used for sign decisions: the one of smallest valuation
    // (re on ties); negating the scalar never changes which one is picked.
    const Fe& sign_component() const;
    bool is_canonical_sign() const { return sign_component().is_canonical_sign(); }

    std::string str() const;

private:
    FieldPtr f_;
    bool ext_ = false;
    Fe re_, im_;
    void check_domain(const Scalar& o) const;
};

// Op-level dispatcher over K(i) with the same surface contract as
// field_arith: componentwise arithmetic with i^2 = -1, PrecisionExhausted
// when add/sub cancellation leaves a component with no significant digits.
Scalar ext_arith(const Scalar& x, const Scalar& y, FieldOp op);

} // namespace liftsl2
