#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftsl2/mat2.hpp"

namespace liftsl2 {

// The explicit quadruple families: five displayed sets plus the flat
// quadruple (A = B = I) used by the trace argument.
enum class QuadFamilyId { F1, F2, F3, F4, F5, Flat };

QuadFamilyId parse_family(const std::string& name);
std::string family_name(QuadFamilyId id);

// Builds the displayed quadruple over K (q = 1 mod 4) or over unramified
// K(i). Postconditions are hard: det 1, A diagonal, the central relation,
// the stated conjugation identities, Q8 relations where claimed, and
// hyperbolicity of the designated element.
Quad build_family(QuadFamilyId id, const FieldPtr& field);

// Parameters of the rational family: A = diag(lambda, 1/lambda),
// B determined by the displayed entry formulas, C and D either the default
// pair or caller-supplied.
struct DenseFamilyParams {
    Fe lambda;
    Fe b;
    std::optional<Mat2> C, D; // default pair when absent
};

struct DenseBuild {
    Quad quad;
    Fe alpha, beta, gamma, delta; // entries of C D C^-1 D^-1
    Fe a, c, d;                   // computed entries of B
};

DenseBuild build_dense(const FieldPtr& field, const DenseFamilyParams& params);

struct TraceScanReport {
    int max_len = 0;
    int64_t total_words = 0; // freely reduced words of length <= L, incl. empty
    int64_t zero_count = 0;
    int64_t pm2_count = 0;
    int64_t other_count = 0;
    bool any_projective_involution = false; // some word has trace exactly 0
    bool any_unipotent = false;             // trace +-2 but not +-I
    struct Entry {
        std::string word;
        std::string trace_class; // "zero", "pm2", "other"
    };
    std::vector<Entry> entries; // filled when collect_entries is set
};

inline constexpr int64_t kDefaultWordCap = 20000000;

// Evaluates every freely reduced word of length <= max_len on the quadruple
// and classifies its trace exactly. Deterministic: words are enumerated in
// length-lexicographic order; with jobs > 1 the eight first-letter subtrees
// are scanned in parallel and merged back in canonical order.
TraceScanReport trace_scan(const Quad& quad, int max_len, bool collect_entries = false,
                           int jobs = 1, int64_t cap = kDefaultWordCap);

struct ParityCheckReport {
    std::array<int, 4> parities;
    std::string normal_form_class; // "gamma^k", "alpha gamma^k", ...
    std::string evaluation;        // "involution", "hyperbolic", "identity", "other"
    bool consistent;
};

// Desk-scale check of the normal-form dichotomy in the first family's
// presentation: parity classes forcing involutions must evaluate to trace 0,
// and the gamma^k class must evaluate hyperbolic or trivial.
ParityCheckReport parity_normal_form_check(QuadFamilyId id, const Word4& w, const FieldPtr& field);

} // namespace liftsl2
