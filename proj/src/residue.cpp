#include "liftsl2/residue.hpp"

#include <algorithm>

namespace liftsl2 {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; (int64_t)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Polynomials over F_p as little-endian coefficient vectors.
using Poly = std::vector<int>;

Poly poly_mod(Poly a, const Poly& m, int p) {
    int dm = (int)m.size() - 1;
    while ((int)a.size() - 1 >= dm) {
        int da = (int)a.size() - 1;
        int lead = a[da] % p;
        if (lead != 0) {
            for (int i = 0; i <= dm; ++i) {
                int idx = da - dm + i;
                a[idx] = ((a[idx] - lead * m[i]) % p + p * p) % p;
            }
        }
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
        if (a.empty()) break;
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

Poly decode(int64_t code, int p) {
    Poly c;
    while (code > 0) {
        c.push_back((int)(code % p));
        code /= p;
    }
    return c;
}

int encode(const Poly& c, int p) {
    int64_t v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return (int)v;
}

// Trial division by all monic polynomials of degree <= deg(f)/2.
bool poly_irreducible(const Poly& f, int p) {
    int d = (int)f.size() - 1;
    if (d < 1) return false;
    if (f[0] == 0) return d == 1; // divisible by x
    for (int dd = 1; dd <= d / 2; ++dd) {
        int64_t count = 1;
        for (int i = 0; i < dd; ++i) count *= p;
        for (int64_t code = 0; code < count; ++code) {
            Poly g = decode(code, p);
            g.resize(dd + 1, 0);
            g[dd] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

} // namespace

ResidueField::ResidueField(int p, int r) : p_(p), r_(r) {
    if (!is_prime(p)) throw UnsupportedField("residue characteristic must be prime, got " + std::to_string(p));
    if (r < 1) throw UnsupportedField("residue degree must be >= 1");
    q_ = 1;
    for (int i = 0; i < r; ++i) {
        q_ *= p;
        if (q_ > (int64_t)1 << 30) throw UnsupportedField("residue field too large");
    }
    if (r == 1) {
        irred_ = {0, 1}; // x, unused
    } else {
        int64_t count = 1;
        for (int i = 0; i < r; ++i) count *= p;
        bool found = false;
        for (int64_t code = 0; code < count && !found; ++code) {
            Poly f = decode(code, p);
            f.resize(r + 1, 0);
            f[r] = 1;
            if (poly_irreducible(f, p)) {
                irred_ = f;
                found = true;
            }
        }
        if (!found) throw InternalError("no irreducible polynomial found");
    }
    if (q_ <= kTableLimit) {
        mul_table_.assign((size_t)(q_ * q_), 0);
        for (int a = 0; a < q_; ++a)
            for (int b = a; b < q_; ++b) {
                int m = mul_poly(a, b);
                mul_table_[(size_t)a * q_ + b] = m;
                mul_table_[(size_t)b * q_ + a] = m;
            }
    }
}

int ResidueField::add(int a, int b) const {
    if (r_ == 1) return (a + b) % p_;
    int out = 0, mult = 1;
    for (int i = 0; i < r_; ++i) {
        out += ((a % p_ + b % p_) % p_) * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return out;
}

int ResidueField::neg(int a) const {
    if (r_ == 1) return (p_ - a) % p_;
    int out = 0, mult = 1;
    for (int i = 0; i < r_; ++i) {
        out += ((p_ - a % p_) % p_) * mult;
        a /= p_;
        mult *= p_;
    }
    return out;
}

int ResidueField::sub(int a, int b) const { return add(a, neg(b)); }

int ResidueField::mul_poly(int a, int b) const {
    if (r_ == 1) return (int)((int64_t)a * b % p_);
    Poly pa = decode(a, p_), pb = decode(b, p_);
    Poly c = poly_mod(poly_mul(pa, pb, p_), irred_, p_);
    return encode(c, p_);
}

int ResidueField::mul(int a, int b) const {
    if (!mul_table_.empty()) return mul_table_[(size_t)a * q_ + b];
    return mul_poly(a, b);
}

int ResidueField::pow(int a, int64_t e) const {
    if (a == 0) return 0;
    e %= (q_ - 1);
    if (e < 0) e += q_ - 1;
    int acc = from_int(1);
    int base = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

int ResidueField::inv(int a) const {
    if (a == 0) throw DivisionByZero("residue inverse of zero");
    return pow(a, q_ - 2);
}

int ResidueField::order(int a) const {
    if (a == 0) throw ZeroInput("order of zero residue");
    int one = from_int(1);
    int x = a;
    int n = 1;
    while (x != one) {
        x = mul(x, a);
        ++n;
        if (n > q_) throw InternalError("residue order runaway");
    }
    return n;
}

bool ResidueField::is_square(int a) const {
    if (a == 0) return true;
    if (p_ == 2) return true;
    return pow(a, (q_ - 1) / 2) == from_int(1);
}

int ResidueField::sqrt(int a) const {
    if (a == 0) return 0;
    for (int x = 1; x < q_; ++x)
        if (mul(x, x) == a) return x;
    return -1;
}

int ResidueField::frobenius(int a) const { return pow(a, p_); }

int ResidueField::from_int(int64_t n) const {
    int64_t m = n % p_;
    if (m < 0) m += p_;
    return (int)m;
}

std::vector<int> ResidueField::coords(int a) const {
    std::vector<int> c(r_);
    for (int i = 0; i < r_; ++i) {
        c[i] = a % p_;
        a /= p_;
    }
    return c;
}

int ResidueField::from_coords(const std::vector<int>& c) const {
    if ((int)c.size() != r_) throw ParseError("residue coordinate count mismatch");
    int64_t v = 0;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] < 0 || c[i] >= p_) throw ParseError("residue coordinate out of range");
        v = v * p_ + c[i];
    }
    return (int)v;
}

} // namespace liftsl2
