#pragma once

#include <cstdint>
#include <vector>

#include "liftsl2/errors.hpp"

namespace liftsl2 {

// The finite field F_q, q = p^r, realised as F_p[x]/(f) for the first monic
// irreducible f of degree r in the coefficient-lexicographic order.
// Elements are encoded as integers in [0, q): the base-p digits of the code
// are the polynomial coefficients, least significant first.
class ResidueField {
public:
    ResidueField(int p, int r);

    int p() const { return p_; }
    int r() const { return r_; }
    int64_t q() const { return q_; }
    const std::vector<int>& modulus() const { return irred_; }

    int add(int a, int b) const;
    int sub(int a, int b) const;
    int neg(int a) const;
    int mul(int a, int b) const;
    int inv(int a) const;
    int pow(int a, int64_t e) const;

    // Multiplicative order of a nonzero element.
    int order(int a) const;
    // q odd: Euler criterion. q even: every element is a square (Frobenius).
    bool is_square(int a) const;
    // Some square root, or -1 when a is a non-residue.
    int sqrt(int a) const;
    // x -> x^p.
    int frobenius(int a) const;

    // Scalar action of F_p and decomposition into F_p coordinates.
    int from_int(int64_t n) const; // image of an integer under F_p -> F_q
    std::vector<int> coords(int a) const;          // r base-p coefficients
    int from_coords(const std::vector<int>& c) const;

private:
    int p_;
    int r_;
    int64_t q_;
    std::vector<int> irred_; // monic, length r+1, irred_[r] = 1

    std::vector<int> mul_table_; // built for q <= kTableLimit
    static constexpr int64_t kTableLimit = 512;

    int mul_poly(int a, int b) const;
};

} // namespace liftsl2
