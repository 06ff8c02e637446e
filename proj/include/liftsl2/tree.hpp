#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liftsl2/mat2.hpp"

namespace liftsl2 {

// Vertex of the Bruhat-Tits tree over the base field K, as the homothety
// class of the lattice with column basis [[u^n, b], [0, 1]]. The class is
// canonical once b is reduced modulo u^n: b is stored as an exact element
// whose digits live strictly below exponent n.
struct TreeVertex {
    int n = 0;
    Fe b; // exact; reduced mod u^n

    static TreeVertex standard(const FieldPtr& f) { return {0, Fe::zero(f)}; }
    std::string key() const;
    std::string str() const;
};

bool operator==(const TreeVertex& a, const TreeVertex& b);

// Canonical vertex from arbitrary (n, b): reduces b modulo u^n. Requires b's
// digits below u^n to be certified; PrecisionExhausted otherwise.
TreeVertex make_vertex(const FieldPtr& f, int n, const Fe& b);

// Image of a vertex under g (column reduction of g * basis to normal form).
// The action factors through PSL2.
TreeVertex act(const Mat2& g, const TreeVertex& v);
TreeVertex act(const ProjMat& g, const TreeVertex& v);

// |d1 - d2| for the elementary divisors u^{d1}, u^{d2} of the change of
// basis matrix. Exact.
int distance(const TreeVertex& v, const TreeVertex& w);

// parent (n-1) plus the q children (n+1); valency q + 1
std::vector<TreeVertex> neighbors(const FieldPtr& f, const TreeVertex& v);

inline constexpr int64_t kDefaultBallCap = 1000000;

std::vector<TreeVertex> ball(const FieldPtr& f, const TreeVertex& center, int radius,
                             int64_t cap = kDefaultBallCap);

int displacement(const Mat2& g, const TreeVertex& v);

struct TranslationLength {
    int length;      // min displacement over the searched ball
    bool determined; // the minimum was certified (achieved off the boundary)
};

// Minimum of d(v, g v) over the radius-`depth` ball around the standard
// vertex. Implemented as monotone descent along the displacement function,
// which reaches the same minimum as full enumeration; `determined` is set
// when the minimizing vertex lies strictly inside the ball, which certifies
// it as the global translation length.
TranslationLength translation_length_bfs(const Mat2& g, int depth);

// Projective eigen-end (1-dim eigenspace) data: a point of P^1(K) stored as
// a normalized coordinate pair.
struct ProjPoint {
    Scalar x, y;         // normalized: the min-valuation coordinate equals 1
    bool x_is_one = true;
    static ProjPoint of(const Scalar& x, const Scalar& y);
    std::string str() const;
};
bool proj_point_eq(const ProjPoint& a, const ProjPoint& b);

struct FixedSetDescriptor {
    enum class Kind { Band, Horoball };
    enum class Nerve { Vertex, Edge, Line };
    Kind kind;

    // Band data
    Nerve nerve = Nerve::Vertex;
    std::vector<TreeVertex> nerve_vertices; // 1 vertex, 2 edge endpoints, or a line sample
    std::optional<std::pair<ProjPoint, ProjPoint>> ends; // Line nerve
    int radius2 = 0; // twice the band radius (edge nerves carry half-integers)

    // Horoball data
    std::optional<ProjPoint> end;
    int level = 0;          // index of the first ray vertex on the canonical ray
    TreeVertex apex;        // that vertex
    std::string str() const;
};

bool descriptor_eq(const FixedSetDescriptor& a, const FixedSetDescriptor& b);

// Fixed-point set of an elliptic finite-order element, searched to `depth`.
FixedSetDescriptor fixed_set(const ProjMat& g, int depth,
                             int64_t cap = kDefaultBallCap);

// Membership predicate derived from a descriptor (horoball: distance checks
// along the stored ray, truncated at `depth`; band: distance to the nerve).
bool descriptor_contains(const FieldPtr& f, const FixedSetDescriptor& d, const TreeVertex& w,
                         int depth);

enum class NestingOutcome { Disjoint, GSubsetH, HSubsetG, SameNerve, Crossing };

struct NestingReport {
    NestingOutcome outcome;
    bool same_nerve;
    bool g_subset_h;
    bool h_subset_g;
    FixedSetDescriptor fix_g, fix_h;
};

// Relation between Fix(g) and Fix(h) (and between the unions F(g), F(h) over
// nontrivial powers), computed from descriptors and verified pointwise on the
// radius-`depth` ball around the standard vertex.
NestingReport nesting_check(const ProjMat& g, const ProjMat& h, int depth,
                            int64_t cap = kDefaultBallCap);

// Apartment between two ends: vertex k is the class of [xi | u^k eta].
std::vector<TreeVertex> apartment_segment(const FieldPtr& f, const ProjPoint& toward,
                                          const ProjPoint& away, int kmin, int kmax);

// DOT dump of a ball; vertices fixed by `highlight` (if given) are marked.
std::string ball_dot(const FieldPtr& f, const TreeVertex& center, int radius,
                     const Mat2* highlight, int64_t cap = kDefaultBallCap);

} // namespace liftsl2
