#include "liftsl2/field.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace liftsl2 {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;
constexpr long long kInfLL = kInf;

long long sat_add(long long a, long long b) {
    if (a >= kInfLL || b >= kInfLL) return kInfLL;
    long long s = a + b;
    return s >= kInfLL ? kInfLL : s;
}

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; (int64_t)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// --- base-p magnitude kernel (characteristic 0 representatives) ---
// Little-endian digit vectors over [0,p), no zeros at the high end.

using Mag = std::vector<int32_t>;

void mag_strip(Mag& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int mag_cmp(const Mag& a, const Mag& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

Mag mag_add(const Mag& a, const Mag& b, int p) {
    Mag c(std::max(a.size(), b.size()) + 1, 0);
    int carry = 0;
    for (size_t i = 0; i < c.size(); ++i) {
        int s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        c[i] = s % p;
        carry = s / p;
    }
    mag_strip(c);
    return c;
}

Mag mag_sub(const Mag& a, const Mag& b, int p) { // requires a >= b
    Mag c(a.size(), 0);
    int borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int s = a[i] - borrow - (i < b.size() ? b[i] : 0);
        if (s < 0) {
            s += p;
            borrow = 1;
        } else {
            borrow = 0;
        }
        c[i] = s;
    }
    if (borrow != 0) throw InternalError("magnitude subtraction underflow");
    mag_strip(c);
    return c;
}

Mag mag_mul(const Mag& a, const Mag& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<long long> acc(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] += (long long)a[i] * b[j];
    Mag c(acc.size(), 0);
    long long carry = 0;
    for (size_t i = 0; i < acc.size(); ++i) {
        long long s = acc[i] + carry;
        c[i] = (int32_t)(s % p);
        carry = s / p;
    }
    while (carry > 0) {
        c.push_back((int32_t)(carry % p));
        carry /= p;
    }
    mag_strip(c);
    return c;
}

struct Signed {
    bool neg = false;
    Mag mag;
};

Signed s_combine(bool na, const Mag& a, bool nb, const Mag& b, int p) {
    if (na == nb) return {na, mag_add(a, b, p)};
    int c = mag_cmp(a, b);
    if (c == 0) return {false, {}};
    if (c > 0) return {na, mag_sub(a, b, p)};
    return {nb, mag_sub(b, a, p)};
}

// --- F_q coefficient kernel (positive characteristic representatives) ---

using Vq = std::vector<int32_t>;

void vq_strip(Vq& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Vq vq_combine(const Vq& a, const Vq& b, bool sub_b, const ResidueField& R) {
    Vq c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        int x = i < a.size() ? a[i] : 0;
        int y = i < b.size() ? b[i] : 0;
        c[i] = sub_b ? R.sub(x, y) : R.add(x, y);
    }
    vq_strip(c);
    return c;
}

Vq vq_mul(const Vq& a, const Vq& b, const ResidueField& R) {
    if (a.empty() || b.empty()) return {};
    Vq c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
    }
    vq_strip(c);
    return c;
}

constexpr size_t kRepLimit = 1 << 20;

} // namespace

// ----------------------------------------------------------------------
// Field

Field::Field(int characteristic, int p, int r, int N)
    : char_(characteristic), p_(p), r_(r), N_(N), residue_(p, r) {}

FieldPtr Field::make(int characteristic, int p, int r, int N) {
    if (!is_prime(p)) throw UnsupportedField("p must be prime");
    if (N < 1 || N > 4096) throw UnsupportedField("precision N out of range");
    if (characteristic == 0) {
        if (r != 1) throw UnsupportedField("characteristic 0 base fields are Q_p (residue degree 1)");
    } else if (characteristic == p) {
        if (p == 2) throw UnsupportedField("characteristic 2 Laurent series fields are not supported");
        if (r < 1) throw UnsupportedField("residue degree must be >= 1");
    } else {
        throw UnsupportedField("characteristic must be 0 or p");
    }
    return FieldPtr(new Field(characteristic, p, r, N));
}

FieldPtr Field::with_precision(int N) const {
    if (N == N_) return FieldPtr(new Field(*this));
    return make(char_, p_, r_, N);
}

bool Field::minus_one_is_square() const {
    if (char0() && p_ == 2) return false;
    return residue_.is_square(residue_.neg(residue_.from_int(1)));
}

std::string Field::describe() const {
    std::ostringstream os;
    if (char0())
        os << "Q_" << p_;
    else
        os << "F_" << q() << "((t))";
    os << " @N=" << N_;
    return os.str();
}

// ----------------------------------------------------------------------
// Fe construction and normalization

struct FeKernel {
    // Build a normalized element from a representative digit vector starting
    // at exponent v0. cert is the certified absolute precision (kInfLL when
    // every input was exact). For characteristic 0 the digits are base-p with
    // a separate sign; in characteristic p any sign is already folded in.
    static Fe make(const FieldPtr& f, bool neg, long long v0, std::vector<int32_t> d,
                   long long cert) {
        // strip certified-zero low digits (they only move the valuation)
        size_t lead = 0;
        while (lead < d.size() && d[lead] == 0) ++lead;
        if (lead > 0) {
            d.erase(d.begin(), d.begin() + (long)lead);
            v0 += (long long)lead;
        }
        Fe out;
        out.f_ = f;
        if (d.empty()) {
            if (cert >= kInfLL) {
                out.st_ = Fe::State::Zero;
                return out;
            }
            out.st_ = Fe::State::Near;
            out.val_ = (int)std::min<long long>(cert, kInfLL);
            return out;
        }
        if (v0 >= cert) {
            out.st_ = Fe::State::Near;
            out.val_ = (int)cert;
            return out;
        }
        const int N = f->precision();
        out.st_ = Fe::State::Val;
        out.val_ = (int)v0;
        if (cert >= kInfLL) {
            if ((int)d.size() <= N) {
                while (!d.empty() && d.back() == 0) d.pop_back();
                out.dig_ = std::move(d);
                out.exact_ = true;
                out.neg_ = neg && f->char0();
                return out;
            }
            cert = v0 + N; // exact value wider than the window: truncate
        }
        long long window = std::min<long long>(cert - v0, N);
        d.resize((size_t)window, 0);
        if (neg && f->char0()) {
            // complement expansion on the window: -x = p^window - x;
            // the nonzero leading digit absorbs the borrow
            const int p = f->p();
            for (size_t i = 0; i < d.size(); ++i) d[i] = (i == 0 ? p - d[i] : p - 1 - d[i]);
        } else if (neg) {
            for (auto& c : d) c = f->residue().neg(c);
        }
        out.dig_ = std::move(d);
        out.exact_ = false;
        out.neg_ = false;
        return out;
    }

    static void check_same_field(const Fe& a, const Fe& b) {
        if (!a.f_ || !b.f_ || !a.f_->same_as(*b.f_))
            throw UsageError("operands belong to different fields");
    }

    static long long cert_ll(const Fe& x) {
        switch (x.st_) {
            case Fe::State::Zero: return kInfLL;
            case Fe::State::Near: return x.val_;
            case Fe::State::Val: return x.exact_ ? kInfLL : (long long)x.val_ + (long long)x.dig_.size();
        }
        return kInfLL;
    }

    static Fe add(const Fe& x, const Fe& y, bool subtract) {
        check_same_field(x, y);
        const FieldPtr& f = x.f_;
        if (x.st_ == Fe::State::Zero) return subtract ? neg(y) : y;
        if (y.st_ == Fe::State::Zero) return x;
        long long cert = std::min(cert_ll(x), cert_ll(y));
        if (x.st_ == Fe::State::Near && y.st_ == Fe::State::Near)
            return Fe::near_zero(f, (int)std::min(cert, kInfLL));
        if (x.st_ == Fe::State::Near || y.st_ == Fe::State::Near) {
            const Fe& v = x.st_ == Fe::State::Val ? x : y;
            bool flip = subtract && (&v == &y);
            if (!flip) return make(f, v.neg_, v.val_, v.dig_, cert);
            if (f->char0()) return make(f, !v.neg_, v.val_, v.dig_, cert);
            return make(f, false, v.val_, negate_digits(f, v.dig_), cert);
        }
        long long v0 = std::min<long long>(x.val_, y.val_);
        long long spanx = (long long)x.val_ - v0 + (long long)x.dig_.size();
        long long spany = (long long)y.val_ - v0 + (long long)y.dig_.size();
        if (std::max(spanx, spany) > (long long)kRepLimit)
            throw InternalError("representative span too large");
        if (f->char0()) {
            Mag X((size_t)spanx, 0), Y((size_t)spany, 0);
            std::copy(x.dig_.begin(), x.dig_.end(), X.begin() + (x.val_ - v0));
            std::copy(y.dig_.begin(), y.dig_.end(), Y.begin() + (y.val_ - v0));
            mag_strip(X);
            mag_strip(Y);
            Signed r = s_combine(x.neg_, X, subtract ? !y.neg_ : y.neg_, Y, f->p());
            return make(f, r.neg, v0, std::move(r.mag), cert);
        }
        Vq X((size_t)spanx, 0), Y((size_t)spany, 0);
        std::copy(x.dig_.begin(), x.dig_.end(), X.begin() + (x.val_ - v0));
        std::copy(y.dig_.begin(), y.dig_.end(), Y.begin() + (y.val_ - v0));
        Vq r = vq_combine(X, Y, subtract, f->residue());
        return make(f, false, v0, std::move(r), cert);
    }

    static std::vector<int32_t> negate_digits(const FieldPtr& f, std::vector<int32_t> d) {
        for (auto& c : d) c = f->residue().neg(c);
        return d;
    }

    static Fe neg(const Fe& x) {
        const FieldPtr& f = x.f_;
        switch (x.st_) {
            case Fe::State::Zero:
            case Fe::State::Near: return x;
            case Fe::State::Val: break;
        }
        if (!f->char0())
            return make(f, false, x.val_, negate_digits(f, x.dig_), cert_ll(x));
        return make(f, !x.neg_, x.val_, x.dig_, cert_ll(x));
    }

    static Fe mul(const Fe& x, const Fe& y) {
        check_same_field(x, y);
        const FieldPtr& f = x.f_;
        if (x.st_ == Fe::State::Zero || y.st_ == Fe::State::Zero) return Fe::zero(f);
        if (x.st_ == Fe::State::Near || y.st_ == Fe::State::Near) {
            // val_ is the O(u^val) bound for Near and the valuation for Val;
            // either way it bounds the factor from below
            return Fe::near_zero(f, (int)std::min<long long>((long long)x.val_ + y.val_, kInfLL));
        }
        long long v0 = (long long)x.val_ + y.val_;
        long long cert = std::min(sat_add(cert_ll(x), y.val_), sat_add(cert_ll(y), x.val_));
        if (f->char0()) {
            Mag r = mag_mul(x.dig_, y.dig_, f->p());
            return make(f, x.neg_ != y.neg_, v0, std::move(r), cert);
        }
        Vq r = vq_mul(x.dig_, y.dig_, f->residue());
        return make(f, false, v0, std::move(r), cert);
    }

    // Long division producing up to L quotient digits; exact when the
    // remainder vanishes and both inputs were exact.
    static Fe div(const Fe& x, const Fe& y) {
        check_same_field(x, y);
        const FieldPtr& f = x.f_;
        if (y.st_ == Fe::State::Zero) throw DivisionByZero("division by exact zero");
        if (y.st_ == Fe::State::Near)
            throw PrecisionExhausted("divisor is indistinguishable from zero at precision N");
        if (x.st_ == Fe::State::Zero) return Fe::zero(f);
        if (x.st_ == Fe::State::Near)
            return Fe::near_zero(f, (int)std::min<long long>((long long)x.val_ - y.val_, kInfLL));
        const int N = f->precision();
        long long relx = x.exact_ ? kInfLL : (long long)x.dig_.size();
        long long rely = y.exact_ ? kInfLL : (long long)y.dig_.size();
        long long L = std::min<long long>(std::min(relx, rely), N);
        bool exact_rem = false;
        std::vector<int32_t> Q;
        Q.reserve((size_t)L);
        if (f->char0()) {
            const int p = f->p();
            const ResidueField& R = f->residue();
            int inv0 = R.inv(y.dig_[0] % p);
            Signed rem{false, x.dig_};
            mag_strip(rem.mag); // certified trailing zeros are not magnitude digits
            for (long long j = 0; j < L; ++j) {
                if (rem.mag.empty()) {
                    exact_rem = true;
                    break;
                }
                int r0 = rem.mag[0];
                if (rem.neg) r0 = (p - r0) % p;
                int qj = (int)((long long)r0 * inv0 % p);
                Q.push_back(qj);
                if (qj != 0) {
                    Mag step = mag_mul(y.dig_, Mag{qj}, p);
                    rem = s_combine(rem.neg, rem.mag, true, step, p);
                }
                if (!rem.mag.empty()) {
                    if (rem.mag[0] != 0) throw InternalError("long division drift");
                    rem.mag.erase(rem.mag.begin());
                    mag_strip(rem.mag);
                }
            }
            if (rem.mag.empty()) exact_rem = true;
            long long cert = (exact_rem && x.exact_ && y.exact_) ? kInfLL
                                                                 : (long long)x.val_ - y.val_ + Q.size();
            return make(f, x.neg_ != y.neg_, (long long)x.val_ - y.val_, std::move(Q), cert);
        }
        const ResidueField& R = f->residue();
        int inv0 = R.inv(y.dig_[0]);
        Vq rem = x.dig_;
        for (long long j = 0; j < L; ++j) {
            if (rem.empty()) {
                exact_rem = true;
                break;
            }
            int qj = R.mul(rem[0], inv0);
            Q.push_back(qj);
            if (qj != 0) {
                Vq step(y.dig_.size(), 0);
                for (size_t i = 0; i < y.dig_.size(); ++i) step[i] = R.mul(y.dig_[i], qj);
                rem = vq_combine(rem, step, true, R);
            }
            if (!rem.empty()) {
                if (rem[0] != 0) throw InternalError("long division drift");
                rem.erase(rem.begin());
                vq_strip(rem);
            }
        }
        if (rem.empty()) exact_rem = true;
        long long cert = (exact_rem && x.exact_ && y.exact_) ? kInfLL
                                                             : (long long)x.val_ - y.val_ + Q.size();
        return make(f, false, (long long)x.val_ - y.val_, std::move(Q), cert);
    }
};

Fe Fe::zero(const FieldPtr& f) {
    Fe out;
    out.f_ = f;
    out.st_ = State::Zero;
    return out;
}

Fe Fe::near_zero(const FieldPtr& f, int bound) {
    Fe out;
    out.f_ = f;
    out.st_ = State::Near;
    out.val_ = bound;
    return out;
}

Fe Fe::from_int(const FieldPtr& f, int64_t n) {
    if (n == 0) return zero(f);
    if (f->char0()) {
        bool neg = n < 0;
        uint64_t m = neg ? (uint64_t)(-(n + 1)) + 1 : (uint64_t)n;
        Mag d;
        while (m > 0) {
            d.push_back((int32_t)(m % (uint64_t)f->p()));
            m /= (uint64_t)f->p();
        }
        return FeKernel::make(f, neg, 0, std::move(d), kInfLL);
    }
    int64_t c = n % f->p();
    if (c < 0) c += f->p();
    if (c == 0) return zero(f);
    return FeKernel::make(f, false, 0, {(int32_t)c}, kInfLL);
}

Fe Fe::from_fraction(const FieldPtr& f, int64_t num, int64_t den) {
    if (den == 0) throw DivisionByZero("fraction with zero denominator");
    Fe d = from_int(f, den);
    if (d.is_exact_zero()) throw DivisionByZero("denominator vanishes in this field");
    return from_int(f, num) / d;
}

Fe Fe::uniformizer_pow(const FieldPtr& f, int k) {
    return FeKernel::make(f, false, k, {f->char0() ? (int32_t)1 : (int32_t)f->residue().from_int(1)},
                          kInfLL);
}

Fe Fe::from_residue(const FieldPtr& f, int code, int shift) {
    if (code == 0) return zero(f);
    if (code < 0 || code >= f->q()) throw ParseError("residue code out of range");
    return FeKernel::make(f, false, shift, {(int32_t)code}, kInfLL);
}

Fe Fe::from_parts(const FieldPtr& f, State st, int val, std::vector<int32_t> digits, bool exact,
                  bool neg) {
    Fe out;
    out.f_ = f;
    out.st_ = st;
    if (st == State::Zero) {
        if (!digits.empty()) throw ParseError("zero element with digits");
        return out;
    }
    if (st == State::Near) {
        if (!digits.empty()) throw ParseError("near-zero element with digits");
        out.val_ = val;
        return out;
    }
    if (digits.empty() || digits[0] == 0) throw ParseError("leading digit must be nonzero");
    if ((int)digits.size() > f->precision()) throw ParseError("more digits than precision N");
    for (int32_t c : digits)
        if (c < 0 || c >= f->q()) throw ParseError("digit out of range");
    if (exact && digits.back() == 0) throw ParseError("exact element with trailing zero digits");
    if (neg && (!exact || !f->char0())) throw ParseError("sign flag only valid on exact Q_p elements");
    out.val_ = val;
    out.dig_ = std::move(digits);
    out.exact_ = exact;
    out.neg_ = neg;
    return out;
}

int Fe::valuation() const {
    if (st_ == State::Val) return val_;
    if (st_ == State::Zero) throw ZeroInput("valuation of exact zero is +inf");
    throw PrecisionExhausted("valuation not certified: element is zero at precision N");
}

std::optional<int> Fe::valuation_or_inf() const {
    if (st_ == State::Val) return val_;
    if (st_ == State::Zero) return std::nullopt;
    throw PrecisionExhausted("valuation not certified: element is zero at precision N");
}

int Fe::cert_abs() const { return (int)std::min(FeKernel::cert_ll(*this), kInfLL); }

int Fe::valuation_lower_bound() const {
    switch (st_) {
        case State::Zero: return kInf;
        case State::Near: return val_;
        case State::Val: return val_;
    }
    return kInf;
}

Fe Fe::operator+(const Fe& o) const { return FeKernel::add(*this, o, false); }
Fe Fe::operator-(const Fe& o) const { return FeKernel::add(*this, o, true); }
Fe Fe::operator*(const Fe& o) const { return FeKernel::mul(*this, o); }
Fe Fe::operator/(const Fe& o) const { return FeKernel::div(*this, o); }
Fe Fe::operator-() const { return FeKernel::neg(*this); }
Fe Fe::inv() const { return FeKernel::div(one(f_), *this); }

Fe Fe::pow(int64_t e) const {
    if (e < 0) return inv().pow(-e);
    Fe acc = one(f_);
    Fe base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        if ((e >>= 1) > 0) base = base * base;
    }
    return acc;
}

namespace {
// Width of the certified agreement window, relative to the scale of the
// values compared (their valuation, or the unit scale for zeroish pairs).
std::pair<Fe::Cmp, int> compare_width(const Fe& a, const Fe& b) {
    if (a.exact() && b.exact()) {
        Fe d = a - b;
        return {d.is_exact_zero() ? Fe::Cmp::Equal : Fe::Cmp::Distinct, kInf};
    }
    Fe d = a - b;
    if (d.is_value()) return {Fe::Cmp::Distinct, 0};
    int bound = d.is_exact_zero() ? kInf : d.valuation_lower_bound();
    int vref = 0;
    bool have = false;
    if (a.is_value()) {
        vref = a.valuation();
        have = true;
    }
    if (b.is_value()) vref = have ? std::min(vref, b.valuation()) : b.valuation();
    long long width = (long long)bound - vref;
    return {Fe::Cmp::AtPrecision, (int)std::min<long long>(width, kInf)};
}
} // namespace

Fe::Cmp Fe::compare(const Fe& a, const Fe& b) { return compare_width(a, b).first; }

bool Fe::eq(const Fe& a, const Fe& b) {
    auto [cmp, width] = compare_width(a, b);
    switch (cmp) {
        case Cmp::Equal: return true;
        case Cmp::Distinct: return false;
        case Cmp::AtPrecision:
            if (width >= 1) return true;
            throw PrecisionExhausted("equality inconclusive: no certified digits overlap");
    }
    return false;
}

bool Fe::is_zero_at_precision() const {
    if (st_ == State::Val) return false;
    if (st_ == State::Zero) return true;
    if (val_ >= 1) return true;
    throw PrecisionExhausted("zero test inconclusive at precision N");
}

int Fe::residue_digit() const {
    if (st_ != State::Val) throw ZeroInput("no leading digit on a zeroish element");
    if (neg_ && f_->char0()) return (f_->p() - dig_[0]) % f_->p(); // canonical expansion digit
    return dig_[0];
}

std::vector<int32_t> Fe::expansion_window(int count) const {
    if (st_ != State::Val) throw ZeroInput("expansion window of a zeroish element");
    if (count < 0) throw UsageError("negative window size");
    std::vector<int32_t> out((size_t)count, 0);
    bool comp = neg_ && f_->char0(); // complement stream of an exact negative
    for (int k = 0; k < count; ++k) {
        int32_t d;
        if ((size_t)k < dig_.size())
            d = dig_[(size_t)k];
        else if (exact_)
            d = 0;
        else
            throw PrecisionExhausted("expansion digit beyond the certified window");
        if (comp) d = (int32_t)(k == 0 ? f_->p() - d : f_->p() - 1 - d);
        out[(size_t)k] = d;
    }
    return out;
}

bool Fe::is_canonical_sign() const {
    if (st_ != State::Val) throw ZeroInput("canonical sign undefined on zeroish element");
    const auto& R = f_->residue();
    if (!f_->char0()) {
        int d0 = dig_[0];
        return d0 <= R.neg(d0);
    }
    // digit streams of x and -x first differ at index 0 (p odd) or 1 (p = 2)
    const int p = f_->p();
    auto digit_at = [&](bool negated, size_t k) -> int {
        bool effneg = neg_ != negated;
        if (!effneg) {
            if (k < dig_.size()) return dig_[k];
            if (exact_) return 0;
            throw PrecisionExhausted("canonical sign not certified at this precision");
        }
        // complement stream of the stored digits
        if (k == 0) return (p - dig_[0]) % p;
        if (k < dig_.size()) return p - 1 - dig_[k];
        if (exact_) return p - 1;
        throw PrecisionExhausted("canonical sign not certified at this precision");
    };
    for (size_t k = 0;; ++k) {
        int dx = digit_at(false, k);
        int dy = digit_at(true, k);
        if (dx != dy) return dx < dy;
    }
}

Fe Fe::to_precision(const FieldPtr& f2) const {
    if (!f2 || f2->characteristic() != f_->characteristic() || f2->p() != f_->p() ||
        f2->r() != f_->r())
        throw UsageError("to_precision must stay within the same field");
    Fe out = *this;
    out.f_ = f2;
    if (st_ != State::Val) return out;
    long long cert = FeKernel::cert_ll(*this);
    return FeKernel::make(f2, neg_, val_, dig_, cert);
}

std::string Fe::str() const {
    std::ostringstream os;
    switch (st_) {
        case State::Zero: os << "0"; return os.str();
        case State::Near: os << "O(u^" << val_ << ")"; return os.str();
        case State::Val: break;
    }
    if (neg_) os << "-";
    os << "[v=" << val_ << (exact_ ? " exact;" : ";");
    for (size_t i = 0; i < dig_.size(); ++i) os << (i ? "," : " ") << dig_[i];
    os << "]";
    return os.str();
}

Fe field_arith(const Fe& x, const Fe& y, FieldOp op) {
    Fe out;
    switch (op) {
        case FieldOp::Add: out = x + y; break;
        case FieldOp::Sub: out = x - y; break;
        case FieldOp::Mul: return x * y;
        case FieldOp::Div: return x / y;
        case FieldOp::Neg: return -x;
        case FieldOp::Inv: return x.inv();
    }
    if (out.is_near_zero())
        throw PrecisionExhausted("cancellation left zero significant digits at precision N");
    return out;
}

// ----------------------------------------------------------------------
// Squares, square roots, Teichmuller representatives

bool is_square(const Fe& a) {
    if (a.is_exact_zero()) throw ZeroInput("is_square requires a nonzero input");
    if (a.is_near_zero()) throw PrecisionExhausted("is_square on an element that is zero at precision N");
    const FieldPtr& f = a.field();
    if (a.valuation() % 2 != 0) return false;
    const ResidueField& R = f->residue();
    if (f->q() % 2 == 1) return R.is_square(a.residue_digit());
    // residue characteristic 2 (Q_2): search for a unit square s = t^2 with
    // v(w/s - 1) >= 4, i.e. compare the unit part with t^2 modulo 2^4.
    const auto& d = a.digits();
    auto expansion_digit = [&](size_t k) -> int {
        // canonical nonnegative expansion of the unit part
        if (!(a.exact() && a.negative_flag())) {
            if (k < d.size()) return d[k];
            if (a.exact()) return 0;
            throw PrecisionExhausted("is_square over Q_2 needs at least 4 certified digits");
        }
        int dk = k < d.size() ? d[k] : 0;
        return k == 0 ? (2 - dk) % 2 : 1 - dk; // complement stream, d[0] = 1
    };
    int w16 = 0;
    for (int k = 0; k < 4; ++k) w16 |= expansion_digit((size_t)k) << k;
    for (int t = 1; t < 16; t += 2)
        if (w16 == (t * t) % 16) return true;
    return false;
}

Fe sqrt(const Fe& a) {
    if (a.is_exact_zero()) return a;
    if (!is_square(a)) throw NotASquare("sqrt of a non-square");
    const FieldPtr& f = a.field();
    const int N = f->precision();
    const bool two = f->char0() && f->p() == 2;
    FieldPtr fp = f->with_precision(N + (two ? 10 : 2));
    Fe w = a.to_precision(fp);
    int v = w.valuation();
    Fe unit = w / Fe::uniformizer_pow(fp, v);
    Fe x;
    if (f->q() % 2 == 1) {
        int s0 = f->residue().sqrt(unit.residue_digit());
        if (s0 < 0) throw NotASquare("residue is not a quadratic residue");
        x = Fe::from_residue(fp, s0);
    } else {
        std::vector<int32_t> w4 = unit.expansion_window(4); // canonical digits
        int w16 = 0;
        for (int k = 0; k < 4; ++k) w16 |= (w4[(size_t)k] & 1) << k;
        int t0 = -1;
        for (int t = 1; t < 16 && t0 < 0; t += 2)
            if ((t * t) % 16 == w16) t0 = t;
        if (t0 < 0) throw NotASquare("unit is not congruent to a square modulo 16");
        x = Fe::from_int(fp, t0);
    }
    Fe half = Fe::from_int(fp, 2).inv();
    for (int it = 0; it < 64; ++it) {
        Fe next = (x + unit / x) * half;
        if (Fe::compare(next, x) != Fe::Cmp::Distinct) {
            x = next;
            break;
        }
        x = next;
        if (it == 63) throw InternalError("square-root iteration did not stabilize");
    }
    Fe root = (x * Fe::uniformizer_pow(fp, v / 2)).to_precision(f);
    if (a.exact() && !root.exact() && root.is_value()) {
        // try to recover an exact root (perfect squares of short expansions)
        std::vector<int32_t> d = root.digits();
        while (!d.empty() && d.back() == 0) d.pop_back();
        if (!d.empty()) {
            Fe cand = Fe::from_parts(f, Fe::State::Val, root.valuation(), d, true, false);
            if (Fe::compare(cand * cand, a) == Fe::Cmp::Equal) root = cand;
            else {
                Fe candn = -cand;
                if (Fe::compare(candn * candn, a) == Fe::Cmp::Equal) root = candn;
            }
        }
    }
    if (!root.is_canonical_sign()) root = -root;
    if (!Fe::eq(root * root, a)) throw InternalError("square-root verification failed");
    return root;
}

Fe teichmuller(const FieldPtr& f, int residue_code, std::optional<int64_t> order_check) {
    if (residue_code <= 0 || residue_code >= f->q())
        throw ZeroInput("teichmuller requires a nonzero residue");
    Fe x;
    if (!f->char0()) {
        x = Fe::from_residue(f, residue_code);
    } else {
        x = Fe::from_int(f, residue_code);
        for (int it = 0; it < f->precision() + 8; ++it) {
            Fe next = x.pow(f->p());
            if (Fe::compare(next, x) != Fe::Cmp::Distinct) {
                x = next;
                break;
            }
            x = next;
        }
    }
    if (order_check) {
        int64_t m = *order_check;
        if (m < 1) throw UsageError("order_check must be positive");
        Fe one = Fe::one(f);
        if (!Fe::eq(x.pow(m), one)) throw OrderMismatch("element does not have the requested order");
        for (int64_t ell = 2; ell <= m; ++ell) {
            if (m % ell != 0) continue;
            bool prime = true;
            for (int64_t d = 2; d * d <= ell; ++d)
                if (ell % d == 0) prime = false;
            if (!prime) continue;
            if (Fe::eq(x.pow(m / ell), one))
                throw OrderMismatch("order divides a proper divisor of the requested order");
        }
    }
    return x;
}

} // namespace liftsl2
