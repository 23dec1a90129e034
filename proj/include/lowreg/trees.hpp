#ifndef LOWREG_TREES_HPP
#define LOWREG_TREES_HPP

#include "lowreg/equation.hpp"
#include "lowreg/freqpoly.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

// Decorated planted trees indexing the iterated Duhamel terms of the two
// model equations. Each tree node sits above one edge; the edge carries a
// kind (free propagation vs. a time-integrated oscillation) and a conjugation
// bit, and the node carries a signed frequency combination of the leaf
// variables. Inner-node frequencies obey a Kirchhoff rule: the signed
// frequency below an edge equals the signed sum over the children, with the
// conjugation bit flipping the sign of a branch.
//
// On top of the plain combinatorics this header provides the resonance
// bookkeeping used by the time-discretization analysis: per-tree dominant and
// low frequency polynomials, the admissible-cut coproduct, the splitting map
// that flattens nested cuts, and the numerical symmetry test for scheme
// coefficient families.

namespace lowreg {

enum class EdgeKind : std::uint8_t {
    t1,  // free propagation
    t2,  // time-integrated oscillation
};

struct EdgeDeco {
    EdgeKind kind = EdgeKind::t1;
    int conj = 0;  // conjugation bit, 0 or 1
    auto operator<=>(const EdgeDeco&) const = default;
};

struct DecoratedTree {
    EdgeDeco edge;
    LinearFreq freq;                      // frequency of the node above the edge
    std::vector<DecoratedTree> children;  // canonically ordered

    bool is_leaf() const { return children.empty(); }
    int node_count() const;
    bool operator==(const DecoratedTree&) const = default;
};

// Multiset of planted trees, canonically ordered.
struct Forest {
    std::vector<DecoratedTree> trees;
    bool empty() const { return trees.empty(); }
    bool operator==(const Forest&) const = default;
};

// One admissible multi-cut of a tree: the part containing the original root
// (empty exactly when the tree itself is t2-rooted and cut at its root edge)
// plus the detached t2-rooted satellites, nested cuts flattened.
struct Splitting {
    Forest root_part;
    std::vector<DecoratedTree> satellites;
    bool operator==(const Splitting&) const = default;
};

// --- construction -----------------------------------------------------------

DecoratedTree make_leaf(EdgeDeco edge, const LinearFreq& freq);
// Derives the node frequency from the children via the Kirchhoff rule.
DecoratedTree make_node(EdgeDeco edge, std::vector<DecoratedTree> children);

// Total order used for canonical child/forest ordering (shape before
// frequency; oscillation nodes sort after propagation nodes, inner nodes
// before leaves, conjugated before plain). Returns <0, 0, >0.
int tree_compare(const DecoratedTree& a, const DecoratedTree& b);
void canonicalize(DecoratedTree& t);
void canonicalize(Forest& f);

// Structural identity ignoring node frequencies; this is the equivalence the
// symmetry factor counts.
bool shape_equal(const DecoratedTree& a, const DecoratedTree& b);

// Recomputes inner frequencies bottom-up and compares with the stored ones.
bool verify_kirchhoff(const DecoratedTree& t);

// --- catalogues --------------------------------------------------------------

// All trees required for a scheme of order r+1 of the given equation,
// canonical form, leaf variables k1..kn assigned left to right.
// r = 0 and r = 1 are supported; anything else throws.
std::vector<DecoratedTree> generate_trees(Equation eq, int r);

// Seeded random tree from the NLS grammar with at most max_osc oscillation
// edges (used as property-test fodder).
DecoratedTree random_nls_tree(std::mt19937_64& rng, int max_osc);

// --- per-tree quantities ------------------------------------------------------

// Symmetry factor: product over sibling groups of identical decorated shapes
// of (group size)! times the members' own factors. Node frequencies do not
// participate.
long long symmetry_factor(const DecoratedTree& t);
long long symmetry_factor(const Forest& f);

// Sum over leaves of the signed propagation polynomial of the leaf edge
// applied to the leaf frequency.
FreqPoly leaf_phase_sum(Equation eq, const DecoratedTree& t);

// Dominant frequency polynomial; f_low is defined for t2-rooted trees as the
// remainder of the oscillation polynomial after the dominant projection.
FreqPoly f_dom(Equation eq, const DecoratedTree& t);
FreqPoly f_dom(Equation eq, const Forest& f);
FreqPoly f_low(Equation eq, const DecoratedTree& t);

// Exact identity test on a propagation-rooted grammar tree:
//   f_dom(T) + sum over oscillation edges e of f_low(T^e) == leaf_phase_sum(T).
bool lemma_check(Equation eq, const DecoratedTree& t);

// --- coproduct and splittings -------------------------------------------------

// Admissible-cut coproduct. Left parts keep their original node frequencies
// (a pruned node keeps the frequency it had, so cut stumps become decorated
// leaves); right parts collect the detached t2-rooted subtrees.
std::vector<std::pair<Forest, Forest>> bck_coproduct(const DecoratedTree& t);

// All splittings of a planted tree: one per subset of its oscillation edges.
std::vector<Splitting> splittings(const DecoratedTree& t);

// --- serialization ------------------------------------------------------------

// S-expression form, e.g. "(t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3))".
// '+' / '-' is the conjugation bit; node frequencies print as signed variable
// combinations. parse_sexpr validates the Kirchhoff rule on inner nodes and
// round-trips bit-exactly with to_sexpr on canonical trees.
std::string to_sexpr(const DecoratedTree& t);
DecoratedTree parse_sexpr(const std::string& text, int nvars);

// --- scheme coefficient symmetry ----------------------------------------------

// A coefficient family for the single-oscillation cubic tree: one complex
// coefficient b_{a,chi}(tau, z) per occupied slot, where a is the low-part
// phase exponent and chi the per-leaf endpoint selector.
struct BFamilyEntry {
    int a = 0;
    std::array<int, 3> chi{0, 0, 0};
    std::function<std::complex<double>(double tau, std::complex<double> z)> b;
};

struct BFamily {
    std::string name;
    std::vector<BFamilyEntry> entries;
    bool expected_symmetric = false;  // catalogued expectation
};

// Time-symmetry condition for a coefficient family,
//   -e^z b_{a,chi}(-tau, -z) == b_{1-a,1-chi}(tau, z),
// checked over all slots at one (tau, z) to 1e-12 relative accuracy.
bool symmetry_condition_check(const BFamily& fam, double tau, std::complex<double> z);
// Sweep over the documented 20-point sample set (z on the imaginary axis,
// two small real step sizes).
bool symmetry_condition_check(const BFamily& fam);

// The three catalogued families: the first-order symmetric two-term family,
// the midpoint sixteenth-weight family, and the explicit one-sided family
// (which must fail the condition).
std::vector<BFamily> catalogued_bfamilies();

}  // namespace lowreg

#endif
