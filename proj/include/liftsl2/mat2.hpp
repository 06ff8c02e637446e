#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftsl2/scalar.hpp"

namespace liftsl2 {

// 2x2 matrix over K or K(i) with determinant 1 at working precision.
class Mat2 {
public:
    Mat2() = default;
    static Mat2 identity(const FieldPtr& f, bool ext);
    static Mat2 from_entries(Scalar a11, Scalar a12, Scalar a21, Scalar a22,
                             bool verify_det = true);

    const Scalar& a11() const { return e_[0]; }
    const Scalar& a12() const { return e_[1]; }
    const Scalar& a21() const { return e_[2]; }
    const Scalar& a22() const { return e_[3]; }
    const Scalar& entry(int i) const { return e_[(size_t)i]; }
    const FieldPtr& base() const { return f_; }
    bool ext() const { return ext_; }

    Mat2 operator*(const Mat2& o) const; // re-verifies det = 1
    Mat2 mul_unchecked(const Mat2& o) const;
    Mat2 inv() const;
    Mat2 operator-() const;
    Mat2 pow(int64_t e) const;
    Scalar trace() const;
    Scalar det() const;

    Mat2 to_precision(const FieldPtr& f2) const;

    static bool eq(const Mat2& a, const Mat2& b);
    // +1 for I, -1 for -I, nullopt otherwise. PrecisionExhausted when the
    // comparison is inconclusive at precision N.
    std::optional<int> pm_identity() const;

    void verify_det_one() const; // DeterminantDrift on failure

    std::string str() const;

private:
    FieldPtr f_;
    bool ext_ = false;
    std::array<Scalar, 4> e_;
};

// PSL2 element: the canonical-sign representative among {M, -M}. The sign is
// decided by the first entry (scanning a11, a12, a21, a22) that is nonzero at
// precision, via the residue-digit half-interval rule on field elements.
class ProjMat {
public:
    ProjMat() = default;
    explicit ProjMat(const Mat2& m);

    const Mat2& rep() const { return rep_; }
    static bool eq(const ProjMat& a, const ProjMat& b) { return Mat2::eq(a.rep_, b.rep_); }
    // Digit-prefix key: equal projective elements share it. Collisions are
    // resolved by eq in the hash-table users.
    std::string key() const;

private:
    Mat2 rep_;
};

struct ElementClass {
    enum class Kind { Elliptic, Hyperbolic };
    Kind kind;
    int translation_length; // max(0, -2 v(tr)); 0 iff elliptic
};

// trace-valuation classification; CentralElement on +-I
ElementClass classify(const Mat2& g);

// least n <= bound with g^n = I, nullopt for unbounded (hyperbolic elements
// short-circuit). PrecisionExhausted when a power cannot be separated from I.
std::optional<int64_t> order(const Mat2& g, int64_t bound);
std::optional<int64_t> proj_order(const ProjMat& g, int64_t bound);
bool proj_is_involution(const ProjMat& g); // exact trace-zero test

bool is_unipotent(const Mat2& g); // tr = +-2 exactly and g != +-I
// +1 when tr = 2, -1 when tr = -2 (and g != +-I); nullopt otherwise
std::optional<int> unipotent_sign(const Mat2& g);

// Default search bound for finite orders: 2 p (q^2 - 1) covers every finite
// subgroup shape that can stabilize a vertex.
int64_t default_order_bound(const Field& f);

// Freely reduced word over {A,B,C,D} and inverses ("AaBbCcDd", lowercase =
// inverse).
class Word4 {
public:
    Word4() = default;
    static Word4 parse(const std::string& s);
    static Word4 from_letters(const std::vector<int8_t>& letters);

    const std::vector<int8_t>& letters() const { return ls_; } // +-1..+-4
    size_t size() const { return ls_.size(); }
    Word4 inverse() const;
    Word4 operator*(const Word4& o) const; // concatenate + free reduction
    std::string str() const;
    // exponent-sum parities of (A,B,C,D)
    std::array<int, 4> parities() const;

private:
    std::vector<int8_t> ls_;
};

struct Quad {
    Mat2 A, B, C, D;
    const Mat2& operator[](size_t i) const { return i == 0 ? A : i == 1 ? B : i == 2 ? C : D; }
};

Mat2 eval_word(const Word4& w, const Quad& q);

} // namespace liftsl2
