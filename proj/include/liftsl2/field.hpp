#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liftsl2/errors.hpp"
#include "liftsl2/residue.hpp"

namespace liftsl2 {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// A non-archimedean local field at working precision N: either Q_p
// (characteristic 0, uniformizer p, residue degree 1 in this version) or
// F_q((t)) (characteristic p, q = p^r, uniformizer t). Elements carry at
// most N significant uniformizer digits.
class Field {
public:
    static FieldPtr make(int characteristic, int p, int r, int N);

    int characteristic() const { return char_; }
    int p() const { return p_; }
    int r() const { return r_; }
    int precision() const { return N_; }
    int64_t q() const { return residue_.q(); }
    bool char0() const { return char_ == 0; }
    const ResidueField& residue() const { return residue_; }

    // Same field at a different working precision (shares the residue field).
    FieldPtr with_precision(int N) const;

    bool same_as(const Field& o) const {
        return char_ == o.char_ && p_ == o.p_ && r_ == o.r_ && N_ == o.N_;
    }
    bool minus_one_is_square() const;
    std::string describe() const;

private:
    Field(int characteristic, int p, int r, int N);
    int char_;
    int p_;
    int r_;
    int N_;
    ResidueField residue_;
};

// One field element, in the capped-relative precision model.
//
// Three states:
//   Zero  — provably zero (constructed constants, exact cancellations);
//   Near  — indistinguishable from zero: the value is O(u^bound) and nothing
//           more is certified;
//   Val   — nonzero with known valuation and a window of certified digits.
//
// Val invariants: 1 <= digits.size() <= N, digits[0] != 0. When exact, the
// stored digits are the whole expansion (trailing zeros stripped) and, over
// Q_p, a sign flag may mark an exact negative. When inexact the digit window
// is exactly the certified range [val, val + digits.size()) and the sign is
// normalized away (negatives are stored as their complement expansion).
class Fe {
public:
    enum class State : uint8_t { Zero, Near, Val };
    enum class Cmp : uint8_t { Distinct, AtPrecision, Equal };

    Fe() = default;

    static Fe zero(const FieldPtr& f);
    static Fe near_zero(const FieldPtr& f, int bound);
    static Fe one(const FieldPtr& f) { return from_int(f, 1); }
    static Fe from_int(const FieldPtr& f, int64_t n);
    static Fe from_fraction(const FieldPtr& f, int64_t num, int64_t den);
    static Fe uniformizer_pow(const FieldPtr& f, int k);
    // Exact constant with the given residue (a Teichmuller-digit literal).
    static Fe from_residue(const FieldPtr& f, int code, int shift = 0);
    // Assemble from raw data; validates the representation invariants.
    static Fe from_parts(const FieldPtr& f, State st, int val,
                         std::vector<int32_t> digits, bool exact, bool neg);

    const FieldPtr& field() const { return f_; }
    State state() const { return st_; }
    bool is_exact_zero() const { return st_ == State::Zero; }
    bool is_near_zero() const { return st_ == State::Near; }
    bool is_value() const { return st_ == State::Val; }
    // True when nothing at working precision separates this from zero.
    bool is_zeroish() const { return st_ != State::Val; }
    bool exact() const { return st_ == State::Zero || (st_ == State::Val && exact_); }
    bool negative_flag() const { return neg_; }
    const std::vector<int32_t>& digits() const { return dig_; }

    // Valuation of a provably nonzero element.
    int valuation() const;
    // +infinity is represented as nullopt (exact zero only).
    std::optional<int> valuation_or_inf() const;
    // Largest k such that the value is certified to be O(u^k)-close to the
    // stored representative. INT_MAX/2 when exact.
    int cert_abs() const;
    // v with "value = O(u^v)" certified; INT_MAX/2 for exact zero.
    int valuation_lower_bound() const;

    Fe operator+(const Fe& o) const;
    Fe operator-(const Fe& o) const;
    Fe operator*(const Fe& o) const;
    Fe operator/(const Fe& o) const;
    Fe operator-() const;
    Fe inv() const;
    Fe pow(int64_t e) const;

    static Cmp compare(const Fe& a, const Fe& b);
    // Relation-check equality: certified digit agreement at working
    // precision. Distinct digits -> false; provable equality -> true;
    // agreement with an empty certified window -> PrecisionExhausted.
    static bool eq(const Fe& a, const Fe& b);
    bool is_zero_at_precision() const;

    int residue_digit() const; // leading digit (Val only)
    // First `count` digits of the canonical nonnegative expansion, starting
    // at the valuation. PrecisionExhausted beyond the certified window.
    std::vector<int32_t> expansion_window(int count) const;
    // Canonical-sign test: lexicographically first of {x, -x}.
    bool is_canonical_sign() const;

    // Move to a field with different working precision.
    Fe to_precision(const FieldPtr& f2) const;

    std::string str() const; // human-readable digit expansion

private:
    State st_ = State::Zero;
    bool exact_ = true;
    bool neg_ = false;
    int val_ = 0; // Val: valuation; Near: O(u^val) bound
    std::vector<int32_t> dig_;
    FieldPtr f_;

    friend struct FeKernel;
};

// field_arith / valuation ops dispatcher used by the CLI and bindings; the
// surface contract raises PrecisionExhausted where operators would return a
// near-zero (total cancellation at precision N).
enum class FieldOp { Add, Sub, Mul, Div, Neg, Inv };
Fe field_arith(const Fe& x, const Fe& y, FieldOp op);

bool is_square(const Fe& a);
Fe sqrt(const Fe& a);
// The (q-1)-th root of unity with residue c; optionally verifies its
// multiplicative order.
Fe teichmuller(const FieldPtr& f, int residue_code,
               std::optional<int64_t> order_check = std::nullopt);

} // namespace liftsl2
