#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liftsl2/mat2.hpp"

namespace liftsl2 {

// Closure of a finite set of PSL2 generators, with the shape classification
// used by the lifting engine.
class FiniteGroupTable {
public:
    struct Classification {
        enum class Kind { Cyclic, BorelType, HasTwoTorsion, Unrecognized };
        Kind kind = Kind::Unrecognized;
        int64_t order = 0;       // Cyclic: n = |G|
        int64_t p_part = 0;      // BorelType: size of the elementary abelian part
        int64_t cyclic_part = 0; // BorelType: order of the cyclic quotient
    };

    const std::vector<ProjMat>& elements() const { return elements_; }
    const std::vector<size_t>& generator_indices() const { return gen_idx_; }
    const Classification& classification() const { return cls_; }
    size_t size() const { return elements_.size(); }

    // index of an element equal (at precision) to m; nullopt when absent
    std::optional<size_t> find(const ProjMat& m) const;
    size_t index_of(const ProjMat& m) const; // ClosureFailure when absent

    friend FiniteGroupTable enumerate_finite_group(const std::vector<ProjMat>& gens, int64_t cap);

private:
    std::vector<ProjMat> elements_; // elements_[0] is the identity
    std::vector<size_t> gen_idx_;
    std::unordered_map<std::string, std::vector<size_t>> buckets_;
    Classification cls_;
    size_t insert(const ProjMat& m);
};

// Closure of gens under multiplication; CapExceeded when the closure passes
// `cap` elements (indiscrete input or a bad generator list).
FiniteGroupTable enumerate_finite_group(const std::vector<ProjMat>& gens, int64_t cap);

// The unique order-preserving preimage of a finite odd-order element.
Mat2 lift_element(const ProjMat& g, int64_t bound);

// Elementwise order-preserving lift of a Cyclic(odd) or BorelType table,
// verified to be closed under multiplication; parallel to table.elements().
std::vector<Mat2> lift_finite_subgroup(const FiniteGroupTable& table);

// ----------------------------------------------------------------------
// Graph-of-groups lifting

struct GogVertex {
    std::string id;
    std::vector<ProjMat> gens;
};

// One edge pair {e, ebar}: sigma_e lands in the `from` vertex group,
// sigma_ebar in the `to` vertex group, images listed parallel to edge_gens.
// Tree edges carry no stable letter (it is the identity); the reverse edge
// implicitly carries the inverse letter.
struct GogEdge {
    std::string id;
    std::string reverse_id;
    std::string from, to;
    bool in_tree = false;
    std::vector<ProjMat> edge_gens;
    std::vector<ProjMat> sigma_e;
    std::vector<ProjMat> sigma_ebar;
    std::optional<ProjMat> stable_letter;
};

struct GraphOfGroups {
    FieldPtr field;
    bool ext = false;
    std::vector<GogVertex> vertices;
    std::vector<GogEdge> edges;
    // Words over tokens "g:<vertex>:<genindex>" and "t:<edge>", each
    // optionally suffixed "^-1"; all must lift to the identity.
    std::vector<std::string> relators;
    int64_t cap = 100000;

    const GogVertex& vertex(const std::string& id) const;
    const GogEdge& edge(const std::string& id) const;
};

struct LiftReport {
    enum class Verdict { Lift, Fail };
    Verdict verdict = Verdict::Fail;
    // lifted generators keyed "g:<vertex>:<genindex>" / "t:<edge>"
    std::map<std::string, Mat2> lifted;
    struct EdgeCheck {
        std::string edge;
        size_t gen_index;
        bool ok;
    };
    std::vector<EdgeCheck> edge_checks;
    struct RelatorCheck {
        std::string word;
        std::string result; // "I", "-I", or "error: ..."
        bool ok;
    };
    std::vector<RelatorCheck> relator_checks;
};

LiftReport lift_graph_of_groups(const GraphOfGroups& gog);

// ----------------------------------------------------------------------
// Sign-lift exhaustion for quadruples satisfying the central relation

struct NoLiftReport {
    enum class Verdict { NoLift, Liftable };
    Verdict verdict;
    int minus_count; // how many of the 16 sign choices evaluate to -I
    Word4 relator;
};

// Evaluates A B A^-1 B^-1 C D C^-1 D^-1 under all 16 sign assignments.
// NoLift when every assignment yields exactly -I, Liftable when every one
// yields I; RelationNotCentral otherwise.
NoLiftReport verify_no_lift(const Quad& quad);

} // namespace liftsl2
