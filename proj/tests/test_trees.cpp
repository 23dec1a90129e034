#include "doctest.h"
#include "lowreg/trees.hpp"

#include <algorithm>
#include <complex>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace lowreg;

// Catalogue quantities (symmetry factors, phase sums, coproduct/splitting
// term lists) asserted below were enumerated by hand on paper before the
// implementation existed. The coproduct and splitting routines are further
// checked against brute-force oracles that enumerate edge subsets directly,
// with no shared logic beyond the canonical ordering.

namespace {

// --- path-addressed brute-force machinery -------------------------------------

using Path = std::vector<int>;

const DecoratedTree* at_path(const DecoratedTree& t, const Path& p) {
    const DecoratedTree* cur = &t;
    for (int i : p) cur = &cur->children[static_cast<size_t>(i)];
    return cur;
}

void collect_t2_paths(const DecoratedTree& t, Path& cur, std::vector<Path>& out) {
    if (t.edge.kind == EdgeKind::t2) out.push_back(cur);
    for (int i = 0; i < static_cast<int>(t.children.size()); ++i) {
        cur.push_back(i);
        collect_t2_paths(t.children[static_cast<size_t>(i)], cur, out);
        cur.pop_back();
    }
}

std::vector<Path> t2_paths(const DecoratedTree& t) {
    Path cur;
    std::vector<Path> out;
    collect_t2_paths(t, cur, out);
    return out;
}

bool strict_prefix(const Path& a, const Path& b) {
    return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// copy of t with every subtree whose (absolute) path is in cuts removed;
// node frequencies are left untouched
DecoratedTree prune(const DecoratedTree& t, Path& cur, const std::set<Path>& cuts) {
    DecoratedTree out{t.edge, t.freq, {}};
    for (int i = 0; i < static_cast<int>(t.children.size()); ++i) {
        cur.push_back(i);
        if (!cuts.count(cur)) out.children.push_back(prune(t.children[static_cast<size_t>(i)], cur, cuts));
        cur.pop_back();
    }
    return out;
}

std::string forest_str(Forest f) {
    canonicalize(f);
    std::string s = "[";
    for (size_t i = 0; i < f.trees.size(); ++i) {
        if (i) s += ' ';
        s += to_sexpr(f.trees[i]);
    }
    return s + "]";
}

std::string delta_term_str(const std::pair<Forest, Forest>& term) {
    return forest_str(term.first) + "|" + forest_str(term.second);
}

std::string splitting_str(const Splitting& s) {
    return forest_str(s.root_part) + "|" + forest_str(Forest{s.satellites});
}

std::vector<std::string> sorted_delta(const std::vector<std::pair<Forest, Forest>>& terms) {
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(delta_term_str(t));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> sorted_splittings(const std::vector<Splitting>& sp) {
    std::vector<std::string> out;
    out.reserve(sp.size());
    for (const auto& s : sp) out.push_back(splitting_str(s));
    std::sort(out.begin(), out.end());
    return out;
}

// coproduct by direct antichain enumeration: one term per subset of the
// t2 edges in which no edge sits above another
std::vector<std::string> oracle_delta(const DecoratedTree& t) {
    const std::vector<Path> edges = t2_paths(t);
    const size_t n = edges.size();
    REQUIRE(n <= 16);
    std::vector<std::string> out;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        std::set<Path> cuts;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ul << i)) cuts.insert(edges[i]);
        bool antichain = true;
        for (const auto& a : cuts)
            for (const auto& b : cuts)
                if (strict_prefix(a, b)) antichain = false;
        if (!antichain) continue;
        Forest left, right;
        if (!cuts.count(Path{})) {
            Path cur;
            left.trees.push_back(prune(t, cur, cuts));
        }
        for (const auto& p : cuts) right.trees.push_back(*at_path(t, p));
        out.push_back(delta_term_str({left, right}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// splittings by direct enumeration: one term per arbitrary subset of the
// t2 edges, all cut simultaneously, each detached component listed flat
std::vector<std::string> oracle_splittings(const DecoratedTree& t) {
    const std::vector<Path> edges = t2_paths(t);
    const size_t n = edges.size();
    REQUIRE(n <= 16);
    std::vector<std::string> out;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        std::set<Path> cuts;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ul << i)) cuts.insert(edges[i]);
        Splitting sp;
        if (!cuts.count(Path{})) {
            Path cur;
            sp.root_part.trees.push_back(prune(t, cur, cuts));
        }
        for (const auto& p : cuts) {
            Path cur = p;
            sp.satellites.push_back(prune(*at_path(t, p), cur, cuts));
        }
        out.push_back(splitting_str(sp));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void shuffle_children(DecoratedTree& t, std::mt19937_64& rng) {
    for (auto& c : t.children) shuffle_children(c, rng);
    std::shuffle(t.children.begin(), t.children.end(), rng);
}

FreqPoly fp(const std::string& s, int nvars) { return parse_freqpoly(s, nvars); }

}  // namespace

TEST_CASE("tree catalogue: counts, node counts, Kirchhoff consistency") {
    auto nls0 = generate_trees(Equation::nls, 0);
    auto nls1 = generate_trees(Equation::nls, 1);
    auto kdv0 = generate_trees(Equation::kdv, 0);
    auto kdv1 = generate_trees(Equation::kdv, 1);
    CHECK(nls0.size() == 2);
    CHECK(nls1.size() == 4);
    CHECK(kdv0.size() == 2);
    CHECK(kdv1.size() == 3);
    CHECK_THROWS_AS(generate_trees(Equation::nls, 2), std::invalid_argument);
    CHECK_THROWS_AS(generate_trees(Equation::kdv, -1), std::invalid_argument);

    // the r=0 catalogue is a prefix of the r=1 catalogue
    CHECK(nls1[0] == nls0[0]);
    CHECK(nls1[1] == nls0[1]);
    CHECK(kdv1[0] == kdv0[0]);
    CHECK(kdv1[1] == kdv0[1]);

    CHECK(nls1[0].node_count() == 1);
    CHECK(nls1[1].node_count() == 5);
    CHECK(nls1[2].node_count() == 9);
    CHECK(nls1[3].node_count() == 9);
    CHECK(kdv1[1].node_count() == 4);
    CHECK(kdv1[2].node_count() == 7);

    for (const auto& t : nls1) CHECK(verify_kirchhoff(t));
    for (const auto& t : kdv1) CHECK(verify_kirchhoff(t));
}

TEST_CASE("tree catalogue: exact canonical serializations") {
    auto nls = generate_trees(Equation::nls, 1);
    auto kdv = generate_trees(Equation::kdv, 1);

    CHECK(to_sexpr(nls[0]) == "(t1+ k1)");
    CHECK(to_sexpr(nls[1]) ==
          "(t1+ -k1+k2+k3 (t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3)))");
    CHECK(to_sexpr(nls[2]) ==
          "(t1+ -k1+k2+k3-k4+k5 (t2+ -k1+k2+k3-k4+k5"
          " (t1+ -k1+k2+k3 (t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3)))"
          " (t1- k4) (t1+ k5)))");
    CHECK(to_sexpr(nls[3]) ==
          "(t1+ -k1-k2+k3+k4+k5 (t2+ -k1-k2+k3+k4+k5"
          " (t1- k1+k2-k3 (t2- k1+k2-k3 (t1- k1) (t1- k2) (t1+ k3)))"
          " (t1+ k4) (t1+ k5)))");

    CHECK(to_sexpr(kdv[0]) == "(t1+ k1)");
    CHECK(to_sexpr(kdv[1]) == "(t1+ k1+k2 (t2+ k1+k2 (t1+ k1) (t1+ k2)))");
    CHECK(to_sexpr(kdv[2]) ==
          "(t1+ k1+k2+k3 (t2+ k1+k2+k3"
          " (t1+ k1+k2 (t2+ k1+k2 (t1+ k1) (t1+ k2))) (t1+ k3)))");

    // round trips are bit-exact
    CHECK(parse_sexpr(to_sexpr(nls[2]), 5) == nls[2]);
    CHECK(parse_sexpr(to_sexpr(nls[3]), 5) == nls[3]);
    CHECK(parse_sexpr(to_sexpr(kdv[2]), 3) == kdv[2]);

    // a stated inner frequency that contradicts the children is rejected
    CHECK_THROWS_AS(parse_sexpr("(t2+ k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3))", 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sexpr("(t3+ k1)", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_sexpr("(t1+ k1) junk", 1), std::invalid_argument);
}

TEST_CASE("symmetry factors of the catalogue") {
    auto nls = generate_trees(Equation::nls, 1);
    auto kdv = generate_trees(Equation::kdv, 1);
    CHECK(symmetry_factor(nls[0]) == 1);  // bare leaf
    CHECK(symmetry_factor(nls[1]) == 2);  // two interchangeable plain leaves
    CHECK(symmetry_factor(nls[2]) == 2);  // repetition sits in the nested part
    CHECK(symmetry_factor(nls[3]) == 4);  // nested pair times outer plain pair
    CHECK(symmetry_factor(kdv[0]) == 1);
    CHECK(symmetry_factor(kdv[1]) == 2);
    CHECK(symmetry_factor(kdv[2]) == 2);
}

TEST_CASE("leaf phase sums of the catalogue") {
    auto nls = generate_trees(Equation::nls, 1);
    auto kdv = generate_trees(Equation::kdv, 1);
    CHECK(leaf_phase_sum(Equation::nls, nls[0]) == fp("-k1^2", 1));
    CHECK(leaf_phase_sum(Equation::nls, nls[1]) == fp("k1^2 - k2^2 - k3^2", 3));
    CHECK(leaf_phase_sum(Equation::nls, nls[2]) ==
          fp("k1^2 + k4^2 - k2^2 - k3^2 - k5^2", 5));
    CHECK(leaf_phase_sum(Equation::kdv, kdv[0]) == fp("-k1^3", 1));
    CHECK(leaf_phase_sum(Equation::kdv, kdv[1]) == fp("-k1^3 - k2^3", 2));
}

TEST_CASE("dominant and low parts of the single-oscillation subtrees") {
    auto nls = generate_trees(Equation::nls, 1);
    const DecoratedTree& osc = nls[1].children[0];  // t2-rooted cubic subtree
    CHECK(f_dom(Equation::nls, osc) == fp("2*k1^2", 3));
    CHECK(f_low(Equation::nls, osc) == fp("-2*k1*k2 - 2*k1*k3 + 2*k2*k3", 3));

    auto kdv = generate_trees(Equation::kdv, 1);
    const DecoratedTree& kosc = kdv[1].children[0];
    // (k1+k2)^3 - k1^3 - k2^3 has no pure top-degree power: dominant part is 0
    CHECK(f_dom(Equation::kdv, kosc).is_zero());
    CHECK(f_low(Equation::kdv, kosc) == fp("3*k1^2*k2 + 3*k1*k2^2", 2));

    // f_low is only defined below an oscillation edge
    CHECK_THROWS_AS(f_low(Equation::nls, nls[1]), std::invalid_argument);

    // forest evaluation is additive
    Forest both{{nls[1], osc}};
    CHECK(f_dom(Equation::nls, both) ==
          f_dom(Equation::nls, nls[1]) + f_dom(Equation::nls, osc));
}

TEST_CASE("dominant-plus-low identity on catalogue and random trees") {
    for (const auto& t : generate_trees(Equation::nls, 1))
        if (!t.is_leaf()) CHECK(lemma_check(Equation::nls, t));
    for (const auto& t : generate_trees(Equation::kdv, 1))
        if (!t.is_leaf()) CHECK(lemma_check(Equation::kdv, t));

    // leaves satisfy it trivially (no oscillation edges at all)
    CHECK(lemma_check(Equation::nls, generate_trees(Equation::nls, 0)[0]));

    // oscillation-rooted input is a contract violation
    auto nls = generate_trees(Equation::nls, 1);
    CHECK_THROWS_AS(lemma_check(Equation::nls, nls[1].children[0]), std::invalid_argument);

    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 100; ++trial) {
        DecoratedTree t = random_nls_tree(rng, 3);
        CHECK(verify_kirchhoff(t));
        CHECK(lemma_check(Equation::nls, t));
        CHECK(parse_sexpr(to_sexpr(t), t.freq.nvars()) == t);
    }
}

TEST_CASE("canonical order and symmetry factor ignore sibling permutation") {
    std::mt19937_64 rng(987654321);
    auto pool = generate_trees(Equation::nls, 1);
    auto kdv = generate_trees(Equation::kdv, 1);
    pool.insert(pool.end(), kdv.begin(), kdv.end());
    for (int trial = 0; trial < 60; ++trial) pool.push_back(random_nls_tree(rng, 3));

    for (const auto& t : pool) {
        DecoratedTree shuffled = t;
        shuffle_children(shuffled, rng);
        CHECK(symmetry_factor(shuffled) == symmetry_factor(t));
        canonicalize(shuffled);
        CHECK(shuffled == t);
    }

    // the order is antisymmetric and reflexive on catalogue pairs
    for (const auto& a : pool)
        for (const auto& b : pool) {
            if (a.freq.nvars() != b.freq.nvars()) continue;
            CHECK(tree_compare(a, a) == 0);
            int ab = tree_compare(a, b), ba = tree_compare(b, a);
            CHECK(((ab > 0) == (ba < 0)));
            CHECK(((ab == 0) == (ba == 0)));
        }
}

TEST_CASE("coproduct: frozen small cases") {
    auto nls = generate_trees(Equation::nls, 1);

    auto leaf_terms = bck_coproduct(nls[0]);
    REQUIRE(leaf_terms.size() == 1);
    CHECK(delta_term_str(leaf_terms[0]) == "[(t1+ k1)]|[]");

    // cutting the single oscillation edge leaves a stump that keeps its
    // original node frequency
    auto t1_terms = bck_coproduct(nls[1]);
    auto got = sorted_delta(t1_terms);
    std::vector<std::string> want = {
        "[(t1+ -k1+k2+k3 (t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3)))]|[]",
        "[(t1+ -k1+k2+k3)]|[(t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3))]",
    };
    std::sort(want.begin(), want.end());
    CHECK(got == want);

    // an oscillation-rooted tree additionally admits the root cut
    const DecoratedTree& osc = nls[1].children[0];
    auto osc_terms = bck_coproduct(osc);
    CHECK(osc_terms.size() == 2);
    bool has_empty_left = false;
    for (const auto& [l, r] : osc_terms)
        if (l.empty()) {
            has_empty_left = true;
            CHECK(r == Forest{{osc}});
        }
    CHECK(has_empty_left);

    CHECK(bck_coproduct(nls[2]).size() == 3);  // nested cuts are inadmissible together
    CHECK(bck_coproduct(nls[3]).size() == 3);
}

TEST_CASE("coproduct matches the antichain oracle") {
    std::mt19937_64 rng(5550123);
    std::vector<DecoratedTree> pool = generate_trees(Equation::nls, 1);
    auto kdv = generate_trees(Equation::kdv, 1);
    pool.insert(pool.end(), kdv.begin(), kdv.end());
    pool.push_back(pool[1].children[0]);  // oscillation-rooted input
    for (int trial = 0; trial < 50; ++trial) pool.push_back(random_nls_tree(rng, 3));

    for (const auto& t : pool) CHECK(sorted_delta(bck_coproduct(t)) == oracle_delta(t));
}

TEST_CASE("splittings: frozen counts and the all-subsets oracle") {
    auto nls = generate_trees(Equation::nls, 1);
    auto kdv = generate_trees(Equation::kdv, 1);

    CHECK(splittings(nls[0]).size() == 1);
    CHECK(splittings(nls[1]).size() == 2);
    CHECK(splittings(nls[2]).size() == 4);
    CHECK(splittings(nls[3]).size() == 4);
    CHECK(splittings(kdv[2]).size() == 4);

    // an oscillation-rooted tree has the cut-everything term with empty root part
    const DecoratedTree& osc = nls[1].children[0];
    auto osp = splittings(osc);
    REQUIRE(osp.size() == 2);
    auto got = sorted_splittings(osp);
    std::vector<std::string> want = {
        "[(t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3))]|[]",
        "[]|[(t2+ -k1+k2+k3 (t1- k1) (t1+ k2) (t1+ k3))]",
    };
    std::sort(want.begin(), want.end());
    CHECK(got == want);

    std::mt19937_64 rng(777001);
    std::vector<DecoratedTree> pool = nls;
    pool.insert(pool.end(), kdv.begin(), kdv.end());
    pool.push_back(osc);
    for (int trial = 0; trial < 50; ++trial) pool.push_back(random_nls_tree(rng, 3));

    for (const auto& t : pool) {
        auto sp = splittings(t);
        CHECK(sp.size() == (1ull << t2_paths(t).size()));
        CHECK(sorted_splittings(sp) == oracle_splittings(t));
    }
}

TEST_CASE("coefficient family symmetry: catalogue verdicts") {
    auto fams = catalogued_bfamilies();
    REQUIRE(fams.size() == 3);

    CHECK(fams[0].name == "nls_sym1");
    CHECK(fams[0].entries.size() == 2);
    CHECK(fams[0].expected_symmetric);

    CHECK(fams[1].name == "nls_mid1");
    CHECK(fams[1].entries.size() == 16);
    CHECK(fams[1].expected_symmetric);

    CHECK(fams[2].name == "nls_os18");
    CHECK(fams[2].entries.size() == 1);
    CHECK(!fams[2].expected_symmetric);

    for (const auto& fam : fams)
        CHECK(symmetry_condition_check(fam) == fam.expected_symmetric);

    // single-point spot check away from the sweep grid
    const std::complex<double> z{0.0, 0.3};
    CHECK(symmetry_condition_check(fams[0], 0.1, z));
    CHECK(symmetry_condition_check(fams[1], 0.1, z));
    CHECK(!symmetry_condition_check(fams[2], 0.1, z));
}
