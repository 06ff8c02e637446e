#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "liftsl2/field.hpp"
#include "liftsl2/scalar.hpp"

using namespace liftsl2;

namespace {

FieldPtr Q(int p, int N) { return Field::make(0, p, 1, N); }
FieldPtr L(int p, int r, int N) { return Field::make(p, p, r, N); }

// brute-force residue oracle: squares modulo p^k
std::set<int64_t> square_table(int64_t p, int k) {
    int64_t mod = 1;
    for (int i = 0; i < k; ++i) mod *= p;
    std::set<int64_t> sq;
    for (int64_t x = 0; x < mod; ++x) sq.insert(x * x % mod);
    return sq;
}

Fe random_element(const FieldPtr& f, std::mt19937_64& rng, int vmin, int vmax) {
    std::uniform_int_distribution<int> vd(vmin, vmax);
    std::uniform_int_distribution<int64_t> dd(0, f->q() - 1);
    std::vector<int32_t> digits(f->precision());
    digits[0] = (int32_t)(1 + dd(rng) % (f->q() - 1));
    for (size_t i = 1; i < digits.size(); ++i) digits[i] = (int32_t)dd(rng);
    while (!digits.empty() && digits.back() == 0) digits.pop_back();
    return Fe::from_parts(f, Fe::State::Val, vd(rng), digits, true, false);
}

} // namespace

TEST_CASE("field construction guards") {
    CHECK_NOTHROW(Q(5, 32));
    CHECK_NOTHROW(L(3, 2, 16));
    CHECK_THROWS_AS(Field::make(0, 4, 1, 8), UnsupportedField);   // p not prime
    CHECK_THROWS_AS(Field::make(0, 5, 2, 8), UnsupportedField);   // char 0 needs r = 1
    CHECK_THROWS_AS(Field::make(2, 2, 1, 8), UnsupportedField);   // char 2 Laurent
    CHECK_THROWS_AS(Field::make(3, 5, 1, 8), UnsupportedField);   // char must be 0 or p
    CHECK(L(3, 2, 16)->q() == 9);
}

TEST_CASE("arithmetic identities and the frozen digit example") {
    auto f = Q(5, 4);
    Fe one = Fe::one(f);
    Fe zero = Fe::zero(f);
    CHECK(Fe::eq(one + zero, one));
    CHECK(Fe::eq(Fe::uniformizer_pow(f, 1) * Fe::from_fraction(f, 1, 5), one));

    // 6 - 1 in Q_5 at N = 4: valuation 1, digits (1,0,0,0)
    Fe six = Fe::from_int(f, 6);
    Fe d = six - one;
    CHECK(d.valuation() == 1);
    CHECK(d.exact());
    CHECK(d.digits() == std::vector<int32_t>{1});
    CHECK(Fe::eq(d, Fe::uniformizer_pow(f, 1)));
}

TEST_CASE("valuation op") {
    auto f = Q(5, 8);
    CHECK(Fe::one(f).valuation() == 0);
    CHECK(Fe::uniformizer_pow(f, 1).valuation() == 1);
    CHECK(Fe::from_int(f, 50).valuation() == 2); // 50 = 2 * 5^2
    CHECK(!Fe::zero(f).valuation_or_inf().has_value());
    CHECK_THROWS_AS(Fe::zero(f).valuation(), ZeroInput);
}

TEST_CASE("exact zero vs zero at precision") {
    auto f = Q(5, 6);
    Fe one = Fe::one(f);
    CHECK((one - one).is_exact_zero());
    Fe third = Fe::from_fraction(f, 1, 3);
    CHECK(!third.exact());
    Fe d = third - third; // identical representatives, inexact inputs
    CHECK(d.is_near_zero());
    CHECK(d.is_zero_at_precision());
    CHECK_THROWS_AS(field_arith(third, third, FieldOp::Sub), PrecisionExhausted);
    CHECK_THROWS_AS(d.valuation(), PrecisionExhausted);
    // division by a near-zero is a precision failure, not DivisionByZero
    CHECK_THROWS_AS(one / d, PrecisionExhausted);
    CHECK_THROWS_AS(one / Fe::zero(f), DivisionByZero);
}

TEST_CASE("negative exact values over Q_p") {
    auto f = Q(5, 6);
    Fe m1 = Fe::from_int(f, -1);
    CHECK(m1.exact());
    CHECK(m1.negative_flag());
    CHECK((m1 + Fe::one(f)).is_exact_zero());
    CHECK(Fe::eq(m1 * m1, Fe::one(f)));
    // inexact negatives are stored as complement expansions
    Fe x = Fe::from_fraction(f, -1, 3);
    CHECK(!x.negative_flag());
    CHECK(Fe::eq(x * Fe::from_int(f, 3), m1));
}

TEST_CASE("valuation laws on random pairs") {
    for (auto f : {Q(5, 12), Q(2, 12), FieldPtr(L(3, 2, 10))}) {
        std::mt19937_64 rng(7);
        for (int it = 0; it < 1000; ++it) {
            Fe x = random_element(f, rng, -3, 3);
            Fe y = random_element(f, rng, -3, 3);
            CHECK((x * y).valuation() == x.valuation() + y.valuation());
            Fe s = x + y;
            int lb = std::min(x.valuation(), y.valuation());
            if (!s.is_zeroish()) CHECK(s.valuation() >= lb);
            if (x.valuation() != y.valuation()) {
                REQUIRE(s.is_value());
                CHECK(s.valuation() == lb);
            }
        }
    }
}

TEST_CASE("division is exact on exact quotients") {
    auto f = Q(5, 8);
    Fe six = Fe::from_int(f, 6);
    Fe three = Fe::from_int(f, 3);
    Fe q = six / Fe::from_int(f, 2);
    CHECK(q.exact());
    CHECK(Fe::eq(q, three));
    CHECK(Fe::eq(six * six.inv(), Fe::one(f)));
    auto g = L(7, 1, 8);
    Fe t = Fe::uniformizer_pow(g, 1);
    Fe num = Fe::one(g) - t * t;       // 1 - t^2
    Fe den = Fe::one(g) + t;           // 1 + t
    Fe quot = num / den;               // 1 - t, exactly
    CHECK(quot.exact());
    CHECK(Fe::eq(quot, Fe::one(g) - t));
}

TEST_CASE("is_square matches the brute-force residue oracle") {
    // all units modulo p^8 for p in {3, 5}
    for (int p : {3, 5}) {
        auto f = Q(p, 8);
        auto sq = square_table(p, 8);
        int64_t mod = 1;
        for (int i = 0; i < 8; ++i) mod *= p;
        for (int64_t w = 1; w < mod; ++w) {
            if (w % p == 0) continue;
            CHECK(is_square(Fe::from_int(f, w)) == (sq.count(w) > 0));
        }
    }
    // all odd residues modulo 2^10
    {
        auto f = Q(2, 10);
        auto sq = square_table(2, 10);
        for (int64_t w = 1; w < 1024; w += 2)
            CHECK(is_square(Fe::from_int(f, w)) == (sq.count(w) > 0));
    }
}

TEST_CASE("open neighbourhood conditions force squares") {
    auto f5 = Q(5, 8);
    CHECK(is_square(Fe::from_int(f5, 6)));  // v(6-1) = 1 > 0
    CHECK(!is_square(Fe::from_int(f5, 2))); // QRs mod 5 are {1,4}
    auto f2 = Q(2, 10);
    CHECK(is_square(Fe::from_int(f2, 17))); // |17-1| = 2^-4 < 2^-3
    std::mt19937_64 rng(11);
    for (int it = 0; it < 1000; ++it) {
        Fe eps = random_element(f5, rng, 1, 4);
        CHECK(is_square(Fe::one(f5) + eps));
    }
    for (int it = 0; it < 1000; ++it) {
        Fe eps = random_element(f2, rng, 4, 8);
        CHECK(is_square(Fe::one(f2) + eps));
    }
}

TEST_CASE("sqrt soundness and determinism") {
    auto f = Q(5, 8);
    CHECK(Fe::eq(sqrt(Fe::one(f)), Fe::one(f)));
    Fe six = Fe::from_int(f, 6);
    Fe r = sqrt(six);
    CHECK(Fe::eq(r * r, six));
    CHECK(r.residue_digit() == 1); // Hensel root in the canonical half
    CHECK_THROWS_AS(sqrt(Fe::from_int(f, 2)), NotASquare);

    auto g = L(7, 1, 8);
    Fe a = Fe::one(g) + Fe::uniformizer_pow(g, 1);
    Fe s = sqrt(a);
    CHECK(s.residue_digit() == 1);
    CHECK(Fe::eq(s * s, a));

    // q = 2: 17 = (1 + 2^4)
    auto f2 = Q(2, 12);
    Fe a2 = Fe::from_int(f2, 17);
    Fe s2 = sqrt(a2);
    CHECK(Fe::eq(s2 * s2, a2));
    // exact negatives: -7 = 1 mod 8 is a square in Q_2
    Fe m7 = Fe::from_int(f2, -7);
    CHECK(is_square(m7));
    Fe sm7 = sqrt(m7);
    CHECK(Fe::eq(sm7 * sm7, m7));
    CHECK(!is_square(Fe::from_int(f2, 7)));

    std::mt19937_64 rng(3);
    for (auto fld : {Q(5, 10), Q(13, 10), FieldPtr(L(3, 2, 10))}) {
        for (int it = 0; it < 200; ++it) {
            Fe x = random_element(fld, rng, -2, 2);
            Fe x2 = x * x;
            CHECK(is_square(x2));
            Fe rr = sqrt(x2);
            CHECK(Fe::eq(rr * rr, x2));
        }
    }
}

TEST_CASE("squares have index-two unit signature") {
    // exactly one of {w, eps w} is a square for a fixed non-residue unit eps
    for (int p : {5, 7, 13}) {
        auto f = Q(p, 8);
        int eps_res = -1;
        for (int c = 2; c < p; ++c)
            if (!f->residue().is_square(c)) {
                eps_res = c;
                break;
            }
        REQUIRE(eps_res > 0);
        Fe eps = Fe::from_int(f, eps_res);
        std::mt19937_64 rng(19);
        for (int it = 0; it < 200; ++it) {
            Fe w = random_element(f, rng, 0, 0);
            CHECK((is_square(w) ^ is_square(eps * w)));
        }
    }
}

TEST_CASE("teichmuller representatives") {
    CHECK(Fe::eq(teichmuller(Q(7, 8), 1), Fe::one(Q(7, 8))));
    auto f = Q(7, 8);
    Fe w = teichmuller(f, 2, 3); // 2^3 = 8 = 1 mod 7
    CHECK(Fe::eq(w.pow(3), Fe::one(f)));
    CHECK(w.residue_digit() == 2);
    CHECK(Fe::eq(w.pow(f->q() - 1), Fe::one(f)));
    CHECK_THROWS_AS(teichmuller(f, 2, 2), OrderMismatch);

    auto g = L(7, 1, 8);
    Fe c = teichmuller(g, 3, 6); // 3 generates F_7^x
    CHECK(c.exact());
    CHECK(Fe::eq(c, Fe::from_int(g, 3)));

    std::mt19937_64 rng(5);
    for (auto fld : {Q(5, 10), FieldPtr(L(3, 2, 10))}) {
        for (int c = 1; c < fld->q(); ++c) {
            Fe t = teichmuller(fld, c);
            CHECK(Fe::eq(t.pow(fld->q() - 1), Fe::one(fld)));
            CHECK(t.residue_digit() == c);
        }
    }
}

TEST_CASE("extension arithmetic over K(i)") {
    auto f = Q(7, 8);
    Scalar i = Scalar::sqrt_minus_one(f, true);
    CHECK(Scalar::eq(i * i, Scalar::from_int(f, true, -1)));
    Scalar one = Scalar::one(f, true);
    Scalar z = one + i;  // 1 + i
    Scalar zb = one - i; // 1 - i
    CHECK(Scalar::eq(z * zb, Scalar::from_int(f, true, 2)));
    // valuation(7 + 7i) = 1, the min rule in the unramified extension
    Scalar s = Scalar::from_int(f, true, 7) * (one + i);
    CHECK(s.valuation() == 1);
    CHECK(Scalar::eq(z / z, one));
    CHECK_THROWS_AS(Scalar::zero(Q(5, 8), true), UnsupportedExtension); // K(i) = K
    CHECK_THROWS_AS(Scalar::zero(Q(2, 8), true), UnsupportedExtension); // ramified
    // q = 9: -1 is already a square in the residue field
    auto g = L(3, 2, 8);
    CHECK(g->minus_one_is_square());
    Scalar ig = Scalar::sqrt_minus_one(g, false);
    CHECK(Scalar::eq(ig * ig, Scalar::from_int(g, false, -1)));
    CHECK(ig.re().exact());
}

TEST_CASE("field arithmetic is a homomorphism from the rationals") {
    // differential oracle: exact arithmetic on small fractions must commute
    // with the embedding into the field
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int64_t> nd(-40, 40), dd(1, 40);
    for (auto f : {Q(5, 16), Q(2, 16), FieldPtr(L(3, 2, 12)), FieldPtr(L(7, 1, 12))}) {
        for (int it = 0; it < 400; ++it) {
            int64_t a = nd(rng), b = dd(rng), c = nd(rng), d = dd(rng);
            if (!f->char0()) {
                // denominators must stay invertible in characteristic p
                if (b % f->p() == 0 || d % f->p() == 0) continue;
            }
            Fe x = Fe::from_fraction(f, a, b);
            Fe y = Fe::from_fraction(f, c, d);
            Fe sum = Fe::from_fraction(f, a * d + c * b, b * d);
            Fe prod = Fe::from_fraction(f, a * c, b * d);
            if (sum.is_exact_zero())
                CHECK((x + y).is_zeroish());
            else
                CHECK(Fe::eq(x + y, sum));
            if (prod.is_exact_zero())
                CHECK((x * y).is_exact_zero());
            else
                CHECK(Fe::eq(x * y, prod));
            if (c != 0 && !Fe::from_int(f, c).is_exact_zero()) {
                Fe quot = Fe::from_fraction(f, a * d, b * c);
                if (quot.is_exact_zero())
                    CHECK((x / y).is_zeroish());
                else
                    CHECK(Fe::eq(x / y, quot));
            }
            Fe diff = Fe::from_fraction(f, a * d - c * b, b * d);
            if (diff.is_exact_zero())
                CHECK((x - y).is_zeroish());
            else
                CHECK(Fe::eq(x - y, diff));
        }
    }
}

TEST_CASE("ext_arith dispatcher") {
    auto f = Q(7, 8);
    Scalar i = Scalar::sqrt_minus_one(f, true);
    Scalar one = Scalar::one(f, true);
    CHECK(Scalar::eq(ext_arith(i, i, FieldOp::Mul), Scalar::from_int(f, true, -1)));
    CHECK(Scalar::eq(ext_arith(one + i, one - i, FieldOp::Mul), Scalar::from_int(f, true, 2)));
    CHECK(Scalar::eq(ext_arith(one, one + i, FieldOp::Div) * (one + i), one));
    // total cancellation in a component raises, as over the base field
    Scalar third = Scalar::from_fraction(f, true, 1, 3) * i;
    CHECK_THROWS_AS(ext_arith(third, third, FieldOp::Sub), PrecisionExhausted);
    CHECK_THROWS_AS(ext_arith(one, Scalar::zero(f, true), FieldOp::Div), DivisionByZero);
}

TEST_CASE("json-free round trip through parts") {
    auto f = Q(5, 6);
    std::mt19937_64 rng(23);
    for (int it = 0; it < 100; ++it) {
        Fe x = random_element(f, rng, -2, 2);
        Fe y = Fe::from_parts(f, x.state(), x.valuation(), x.digits(), x.exact(),
                              x.negative_flag());
        CHECK(Fe::compare(x, y) == Fe::Cmp::Equal);
    }
}
