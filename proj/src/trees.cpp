#include "lowreg/trees.hpp"

#include "lowreg/phi.hpp"

#include <algorithm>
#include <cctype>

namespace lowreg {

using cplx = std::complex<double>;

int DecoratedTree::node_count() const {
    int n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

DecoratedTree make_leaf(EdgeDeco edge, const LinearFreq& freq) {
    return DecoratedTree{edge, freq, {}};
}

namespace {

LinearFreq kirchhoff_freq(EdgeDeco edge, const std::vector<DecoratedTree>& children) {
    if (children.empty()) throw std::invalid_argument("kirchhoff_freq: inner node needs children");
    const int n = children.front().freq.nvars();
    std::vector<int> acc(n, 0);
    for (const auto& c : children) {
        if (c.freq.nvars() != n)
            throw std::invalid_argument("kirchhoff_freq: mixed variable counts");
        const int s = c.edge.conj ? -1 : 1;
        for (int i = 0; i < n; ++i) acc[i] += s * c.freq.c[i];
    }
    if (edge.conj)
        for (int& v : acc) v = -v;
    return LinearFreq(std::move(acc));  // validates the {-1,0,1} range
}

}  // namespace

DecoratedTree make_node(EdgeDeco edge, std::vector<DecoratedTree> children) {
    DecoratedTree t{edge, LinearFreq{}, std::move(children)};
    std::sort(t.children.begin(), t.children.end(),
              [](const DecoratedTree& a, const DecoratedTree& b) { return tree_compare(a, b) < 0; });
    t.freq = kirchhoff_freq(edge, t.children);
    return t;
}

int tree_compare(const DecoratedTree& a, const DecoratedTree& b) {
    if (a.edge.kind != b.edge.kind) return a.edge.kind < b.edge.kind ? -1 : 1;  // propagation first
    if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? 1 : -1;                // inner nodes first
    if (a.edge.conj != b.edge.conj) return a.edge.conj > b.edge.conj ? -1 : 1;  // conjugated first
    if (a.children.size() != b.children.size())
        return a.children.size() > b.children.size() ? -1 : 1;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (int c = tree_compare(a.children[i], b.children[i])) return c;
    if (a.freq.c != b.freq.c) return a.freq.c > b.freq.c ? -1 : 1;
    return 0;
}

void canonicalize(DecoratedTree& t) {
    for (auto& c : t.children) canonicalize(c);
    std::sort(t.children.begin(), t.children.end(),
              [](const DecoratedTree& a, const DecoratedTree& b) { return tree_compare(a, b) < 0; });
}

void canonicalize(Forest& f) {
    for (auto& t : f.trees) canonicalize(t);
    std::sort(f.trees.begin(), f.trees.end(),
              [](const DecoratedTree& a, const DecoratedTree& b) { return tree_compare(a, b) < 0; });
}

bool shape_equal(const DecoratedTree& a, const DecoratedTree& b) {
    if (a.edge != b.edge || a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!shape_equal(a.children[i], b.children[i])) return false;
    return true;
}

bool verify_kirchhoff(const DecoratedTree& t) {
    if (t.is_leaf()) return true;
    for (const auto& c : t.children)
        if (!verify_kirchhoff(c)) return false;
    try {
        return kirchhoff_freq(t.edge, t.children) == t.freq;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

// --- catalogues --------------------------------------------------------------

namespace {

LinearFreq unit_var(int nvars, int var) { return LinearFreq::unit(nvars, var); }

constexpr EdgeDeco T1P{EdgeKind::t1, 0}, T1C{EdgeKind::t1, 1};
constexpr EdgeDeco T2P{EdgeKind::t2, 0}, T2C{EdgeKind::t2, 1};

}  // namespace

std::vector<DecoratedTree> generate_trees(Equation eq, int r) {
    if (r < 0 || r > 1) throw std::invalid_argument("generate_trees: catalogue covers r in {0,1}");
    std::vector<DecoratedTree> out;
    if (eq == Equation::nls) {
        out.push_back(make_leaf(T1P, unit_var(1, 0)));
        out.push_back(make_node(
            T1P, {make_node(T2P, {make_leaf(T1C, unit_var(3, 0)), make_leaf(T1P, unit_var(3, 1)),
                                  make_leaf(T1P, unit_var(3, 2))})}));
        if (r == 1) {
            // square-nested tree: the inner oscillation hangs off a plain branch
            DecoratedTree nested = make_node(
                T1P, {make_node(T2P, {make_leaf(T1C, unit_var(5, 0)), make_leaf(T1P, unit_var(5, 1)),
                                      make_leaf(T1P, unit_var(5, 2))})});
            out.push_back(make_node(
                T1P, {make_node(T2P, {nested, make_leaf(T1C, unit_var(5, 3)),
                                      make_leaf(T1P, unit_var(5, 4))})}));
            // conjugate-nested tree: the inner oscillation hangs off a conjugated branch
            DecoratedTree nested_c = make_node(
                T1C, {make_node(T2C, {make_leaf(T1C, unit_var(5, 0)), make_leaf(T1C, unit_var(5, 1)),
                                      make_leaf(T1P, unit_var(5, 2))})});
            out.push_back(make_node(
                T1P, {make_node(T2P, {nested_c, make_leaf(T1P, unit_var(5, 3)),
                                      make_leaf(T1P, unit_var(5, 4))})}));
        }
    } else {
        out.push_back(make_leaf(T1P, unit_var(1, 0)));
        out.push_back(make_node(
            T1P, {make_node(T2P, {make_leaf(T1P, unit_var(2, 0)), make_leaf(T1P, unit_var(2, 1))})}));
        if (r == 1) {
            DecoratedTree nested = make_node(
                T1P,
                {make_node(T2P, {make_leaf(T1P, unit_var(3, 0)), make_leaf(T1P, unit_var(3, 1))})});
            out.push_back(
                make_node(T1P, {make_node(T2P, {nested, make_leaf(T1P, unit_var(3, 2))})}));
        }
    }
    return out;
}

namespace {

// shape of a random grammar subtree hanging below a (t1, conj) edge;
// frequencies are assigned afterwards
DecoratedTree random_nls_shape(std::mt19937_64& rng, int conj, int& osc_budget) {
    const EdgeDeco lift{EdgeKind::t1, conj};
    if (osc_budget <= 0 || rng() % 5 < 2) return DecoratedTree{lift, LinearFreq{}, {}};
    --osc_budget;
    std::vector<DecoratedTree> kids;
    kids.push_back(random_nls_shape(rng, 1 - conj, osc_budget));
    kids.push_back(random_nls_shape(rng, conj, osc_budget));
    kids.push_back(random_nls_shape(rng, conj, osc_budget));
    DecoratedTree osc{EdgeDeco{EdgeKind::t2, conj}, LinearFreq{}, std::move(kids)};
    return DecoratedTree{lift, LinearFreq{}, {std::move(osc)}};
}

int count_leaves(const DecoratedTree& t) {
    if (t.is_leaf()) return 1;
    int n = 0;
    for (const auto& c : t.children) n += count_leaves(c);
    return n;
}

DecoratedTree assign_and_derive(const DecoratedTree& t, int nvars, int& next) {
    if (t.is_leaf()) return make_leaf(t.edge, LinearFreq::unit(nvars, next++));
    std::vector<DecoratedTree> kids;
    kids.reserve(t.children.size());
    for (const auto& c : t.children) kids.push_back(assign_and_derive(c, nvars, next));
    return make_node(t.edge, std::move(kids));
}

}  // namespace

DecoratedTree random_nls_tree(std::mt19937_64& rng, int max_osc) {
    int budget = max_osc;
    DecoratedTree shape = random_nls_shape(rng, 0, budget);
    canonicalize(shape);
    int next = 0;
    return assign_and_derive(shape, count_leaves(shape), next);
}

// --- per-tree quantities ------------------------------------------------------

long long symmetry_factor(const Forest& f) {
    const size_t n = f.trees.size();
    std::vector<bool> grouped(n, false);
    long long total = 1;
    for (size_t i = 0; i < n; ++i) {
        if (grouped[i]) continue;
        long long beta = 1;
        for (size_t j = i + 1; j < n; ++j)
            if (!grouped[j] && shape_equal(f.trees[i], f.trees[j])) {
                grouped[j] = true;
                ++beta;
            }
        const long long s = symmetry_factor(f.trees[i]);
        for (long long b = 0; b < beta; ++b) total *= s;
        for (long long b = 2; b <= beta; ++b) total *= b;
    }
    return total;
}

long long symmetry_factor(const DecoratedTree& t) {
    return symmetry_factor(Forest{t.children});
}

namespace {

// signed propagation polynomial of one edge applied to a node frequency:
// NLS trades in squares, KdV in cubes; t1 carries the minus sign and the
// conjugation bit flips it
FreqPoly edge_phase(Equation eq, EdgeDeco deco, const LinearFreq& freq) {
    const int deg = eq == Equation::nls ? 2 : 3;
    long long sign = deco.kind == EdgeKind::t1 ? -1 : 1;
    if (deco.conj) sign = -sign;
    return FreqPoly::constant(freq.nvars(), sign) * pow(FreqPoly::from_linear(freq), deg);
}

FreqPoly osc_poly(Equation eq, const DecoratedTree& t) {
    FreqPoly acc = edge_phase(eq, t.edge, t.freq);
    for (const auto& c : t.children) acc += f_dom(eq, c);
    return acc;
}

}  // namespace

FreqPoly leaf_phase_sum(Equation eq, const DecoratedTree& t) {
    if (t.is_leaf()) return edge_phase(eq, t.edge, t.freq);
    FreqPoly acc(t.freq.nvars());
    for (const auto& c : t.children) acc += leaf_phase_sum(eq, c);
    return acc;
}

FreqPoly f_dom(Equation eq, const DecoratedTree& t) {
    if (t.edge.kind == EdgeKind::t2) return p_dom(osc_poly(eq, t));
    FreqPoly acc = edge_phase(eq, t.edge, t.freq);
    for (const auto& c : t.children) acc += f_dom(eq, c);
    return acc;
}

FreqPoly f_dom(Equation eq, const Forest& f) {
    if (f.trees.empty()) throw std::invalid_argument("f_dom: empty forest has no variable context");
    FreqPoly acc(f.trees.front().freq.nvars());
    for (const auto& t : f.trees) acc += f_dom(eq, t);
    return acc;
}

FreqPoly f_low(Equation eq, const DecoratedTree& t) {
    if (t.edge.kind != EdgeKind::t2)
        throw std::invalid_argument("f_low: defined for oscillation-rooted trees");
    return p_low(osc_poly(eq, t));
}

namespace {

void collect_osc_subtrees(const DecoratedTree& t, std::vector<const DecoratedTree*>& out) {
    if (t.edge.kind == EdgeKind::t2) out.push_back(&t);
    for (const auto& c : t.children) collect_osc_subtrees(c, out);
}

}  // namespace

bool lemma_check(Equation eq, const DecoratedTree& t) {
    if (t.edge.kind != EdgeKind::t1)
        throw std::invalid_argument("lemma_check: expects a propagation-rooted grammar tree");
    std::vector<const DecoratedTree*> osc;
    collect_osc_subtrees(t, osc);
    FreqPoly lhs = f_dom(eq, t);
    for (const auto* e : osc) lhs += f_low(eq, *e);
    return lhs == leaf_phase_sum(eq, t);
}

// --- coproduct and splittings -------------------------------------------------

std::vector<std::pair<Forest, Forest>> bck_coproduct(const DecoratedTree& t) {
    std::vector<std::pair<Forest, Forest>> out;
    // multiplicative extension over the children (a leaf yields the single
    // term with itself on the left)
    std::vector<std::pair<std::vector<DecoratedTree>, Forest>> combos{{{}, Forest{}}};
    for (const auto& child : t.children) {
        auto terms = bck_coproduct(child);
        std::vector<std::pair<std::vector<DecoratedTree>, Forest>> next;
        next.reserve(combos.size() * terms.size());
        for (const auto& [lefts, right] : combos)
            for (const auto& [tl, tr] : terms) {
                auto l2 = lefts;
                l2.insert(l2.end(), tl.trees.begin(), tl.trees.end());
                Forest r2 = right;
                r2.trees.insert(r2.trees.end(), tr.trees.begin(), tr.trees.end());
                next.push_back({std::move(l2), std::move(r2)});
            }
        combos = std::move(next);
    }
    for (auto& [lefts, right] : combos) {
        // the pruned node keeps its original frequency
        DecoratedTree left{t.edge, t.freq, std::move(lefts)};
        std::sort(left.children.begin(), left.children.end(),
                  [](const DecoratedTree& a, const DecoratedTree& b) { return tree_compare(a, b) < 0; });
        canonicalize(right);
        out.push_back({Forest{{std::move(left)}}, std::move(right)});
    }
    if (t.edge.kind == EdgeKind::t2) out.push_back({Forest{}, Forest{{t}}});
    return out;
}

namespace {

std::vector<Forest> flatten_cuts(const Forest& f);

// All flat satellite lists obtainable from an already detached tree by
// additionally cutting any subset of its internal oscillation edges. Each
// subset decomposes uniquely into its topmost edges (an admissible cut that
// keeps the root, hence a coproduct term with nonempty left part) plus
// independent subsets inside the detached parts, so every subset is produced
// exactly once.
std::vector<Forest> flatten_cuts_tree(const DecoratedTree& t) {
    std::vector<Forest> out;
    for (const auto& [left, right] : bck_coproduct(t)) {
        if (left.empty()) continue;  // re-cutting the root edge would recurse forever
        for (const auto& below : flatten_cuts(right)) {
            Forest merged = left;
            merged.trees.insert(merged.trees.end(), below.trees.begin(), below.trees.end());
            out.push_back(std::move(merged));
        }
    }
    return out;
}

std::vector<Forest> flatten_cuts(const Forest& f) {
    std::vector<Forest> out{Forest{}};
    for (const auto& t : f.trees) {
        auto terms = flatten_cuts_tree(t);
        std::vector<Forest> next;
        next.reserve(out.size() * terms.size());
        for (const auto& acc : out)
            for (const auto& term : terms) {
                Forest merged = acc;
                merged.trees.insert(merged.trees.end(), term.trees.begin(), term.trees.end());
                next.push_back(std::move(merged));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

std::vector<Splitting> splittings(const DecoratedTree& t) {
    std::vector<Splitting> out;
    for (const auto& [left, right] : bck_coproduct(t))
        for (auto& sats : flatten_cuts(right)) {
            canonicalize(sats);
            out.push_back(Splitting{left, std::move(sats.trees)});
        }
    return out;
}

// --- serialization ------------------------------------------------------------

std::string to_sexpr(const DecoratedTree& t) {
    std::string s = "(";
    s += t.edge.kind == EdgeKind::t1 ? "t1" : "t2";
    s += t.edge.conj ? '-' : '+';
    s += ' ';
    s += to_string(t.freq);
    for (const auto& c : t.children) {
        s += ' ';
        s += to_sexpr(c);
    }
    s += ')';
    return s;
}

namespace {

struct SexprParser {
    const std::string& s;
    size_t i = 0;
    int nvars;

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("sexpr parse error at position " + std::to_string(i) + ": " + what);
    }
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    void expect(char c) {
        skip_ws();
        if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
        ++i;
    }
    DecoratedTree node() {
        expect('(');
        skip_ws();
        if (i + 2 >= s.size() || s[i] != 't') fail("expected edge tag");
        EdgeKind kind;
        if (s[i + 1] == '1')
            kind = EdgeKind::t1;
        else if (s[i + 1] == '2')
            kind = EdgeKind::t2;
        else
            fail("unknown edge kind");
        int conj;
        if (s[i + 2] == '+')
            conj = 0;
        else if (s[i + 2] == '-')
            conj = 1;
        else
            fail("expected conjugation sign");
        i += 3;
        skip_ws();
        size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '+' || s[i] == '-'))
            ++i;
        if (i == start) fail("expected frequency");
        LinearFreq freq = parse_linearfreq(s.substr(start, i - start), nvars);
        DecoratedTree t{EdgeDeco{kind, conj}, freq, {}};
        skip_ws();
        while (i < s.size() && s[i] == '(') {
            t.children.push_back(node());
            skip_ws();
        }
        expect(')');
        return t;
    }
};

bool inner_freqs_consistent(const DecoratedTree& t) {
    if (t.is_leaf()) return true;
    for (const auto& c : t.children)
        if (!inner_freqs_consistent(c)) return false;
    try {
        return kirchhoff_freq(t.edge, t.children) == t.freq;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

}  // namespace

DecoratedTree parse_sexpr(const std::string& text, int nvars) {
    SexprParser p{text, 0, nvars};
    DecoratedTree t = p.node();
    p.skip_ws();
    if (p.i != text.size()) p.fail("trailing content");
    canonicalize(t);
    if (!inner_freqs_consistent(t)) throw std::invalid_argument("parse_sexpr: Kirchhoff rule violated");
    return t;
}

// --- scheme coefficient symmetry ----------------------------------------------

bool symmetry_condition_check(const BFamily& fam, double tau, cplx z) {
    auto lookup = [&fam](int a, const std::array<int, 3>& chi) -> const BFamilyEntry* {
        for (const auto& e : fam.entries)
            if (e.a == a && e.chi == chi) return &e;
        return nullptr;
    };
    for (int a = 0; a <= 1; ++a)
        for (int mask = 0; mask < 8; ++mask) {
            const std::array<int, 3> chi{mask & 1, (mask >> 1) & 1, (mask >> 2) & 1};
            const std::array<int, 3> flipped{1 - chi[0], 1 - chi[1], 1 - chi[2]};
            const BFamilyEntry* here = lookup(a, chi);
            const BFamilyEntry* partner = lookup(1 - a, flipped);
            const cplx lhs = here ? -std::exp(z) * here->b(-tau, -z) : cplx{0.0, 0.0};
            const cplx rhs = partner ? partner->b(tau, z) : cplx{0.0, 0.0};
            const double tol = 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
            if (std::abs(lhs - rhs) > tol) return false;
        }
    return true;
}

bool symmetry_condition_check(const BFamily& fam) {
    static const double ys[] = {0.3, -0.3, 0.7, -0.7, 1.1, -1.1, 1.9, -1.9, 2.7, -2.7};
    for (double tau : {0.05, 0.1})
        for (double y : ys)
            if (!symmetry_condition_check(fam, tau, cplx{0.0, y})) return false;
    return true;
}

std::vector<BFamily> catalogued_bfamilies() {
    const cplx mi{0.0, -1.0};
    std::vector<BFamily> out;

    BFamily sym1{"nls_sym1", {}, true};
    sym1.entries.push_back({0, {0, 0, 0}, [mi](double tau, cplx z) { return mi * 0.5 * tau * phi1(0.5 * z); }});
    sym1.entries.push_back(
        {1, {1, 1, 1}, [mi](double tau, cplx z) { return mi * 0.5 * tau * std::exp(z) * phi1(-0.5 * z); }});
    out.push_back(std::move(sym1));

    BFamily mid1{"nls_mid1", {}, true};
    for (int a = 0; a <= 1; ++a)
        for (int mask = 0; mask < 8; ++mask)
            mid1.entries.push_back({a,
                                    {mask & 1, (mask >> 1) & 1, (mask >> 2) & 1},
                                    [mi](double tau, cplx z) { return mi * tau / 16.0 * phi1(z); }});
    out.push_back(std::move(mid1));

    BFamily os18{"nls_os18", {}, false};
    os18.entries.push_back({0, {0, 0, 0}, [mi](double tau, cplx z) { return mi * tau * phi1(z); }});
    out.push_back(std::move(os18));

    return out;
}

}  // namespace lowreg
