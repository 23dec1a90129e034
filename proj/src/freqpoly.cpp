#include "lowreg/freqpoly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace lowreg {

namespace {

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("freqpoly: int64 overflow in +");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("freqpoly: int64 overflow in *");
    return r;
}

void require_same_vars(const FreqPoly& a, const FreqPoly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("freqpoly: mismatched variable counts");
}

}  // namespace

LinearFreq::LinearFreq(std::vector<int> coeffs) : c(std::move(coeffs)) {
    for (int v : c)
        if (v < -1 || v > 1) throw std::invalid_argument("LinearFreq: coefficients must be in {-1,0,1}");
}

LinearFreq LinearFreq::unit(int nvars, int var) {
    if (var < 0 || var >= nvars) throw std::invalid_argument("LinearFreq::unit: variable out of range");
    LinearFreq f;
    f.c.assign(nvars, 0);
    f.c[var] = 1;
    return f;
}

FreqPoly FreqPoly::constant(int nvars, long long a) {
    FreqPoly p(nvars);
    p.add_term(std::vector<int>(nvars, 0), a);
    return p;
}

FreqPoly FreqPoly::variable(int nvars, int var) {
    if (var < 0 || var >= nvars) throw std::invalid_argument("FreqPoly::variable: variable out of range");
    FreqPoly p(nvars);
    std::vector<int> e(nvars, 0);
    e[var] = 1;
    p.add_term(e, 1);
    return p;
}

FreqPoly FreqPoly::from_linear(const LinearFreq& f) {
    FreqPoly p(f.nvars());
    for (int i = 0; i < f.nvars(); ++i) {
        if (f.c[i] == 0) continue;
        std::vector<int> e(f.nvars(), 0);
        e[i] = 1;
        p.add_term(e, f.c[i]);
    }
    return p;
}

int FreqPoly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

long long FreqPoly::coeff(const std::vector<int>& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? 0 : it->second;
}

void FreqPoly::add_term(const std::vector<int>& exps, long long coeff) {
    if (static_cast<int>(exps.size()) != nvars_)
        throw std::invalid_argument("FreqPoly::add_term: exponent vector size mismatch");
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(exps, coeff);
    if (!inserted) {
        it->second = checked_add(it->second, coeff);
        if (it->second == 0) terms_.erase(it);
    }
}

FreqPoly FreqPoly::operator-() const {
    FreqPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (c == std::numeric_limits<long long>::min())
            throw std::overflow_error("freqpoly: int64 overflow in negate");
        r.terms_[e] = -c;
    }
    return r;
}

FreqPoly operator+(const FreqPoly& a, const FreqPoly& b) {
    require_same_vars(a, b);
    FreqPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

FreqPoly operator-(const FreqPoly& a, const FreqPoly& b) {
    return a + (-b);
}

FreqPoly operator*(const FreqPoly& a, const FreqPoly& b) {
    require_same_vars(a, b);
    FreqPoly r(a.nvars());
    std::vector<int> e(a.nvars());
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.nvars(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, checked_mul(ca, cb));
        }
    return r;
}

FreqPoly pow(const FreqPoly& p, int e) {
    if (e < 0) throw std::invalid_argument("freqpoly: negative exponent");
    FreqPoly r = FreqPoly::constant(p.nvars(), 1);
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

FreqPoly substitute_linear(const FreqPoly& p, int var, const LinearFreq& repl) {
    if (var < 0 || var >= p.nvars()) throw std::invalid_argument("substitute_linear: variable out of range");
    if (repl.nvars() != p.nvars()) throw std::invalid_argument("substitute_linear: variable counts differ");
    FreqPoly rp = FreqPoly::from_linear(repl);
    FreqPoly out(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        std::vector<int> rest = e;
        int k = rest[var];
        rest[var] = 0;
        FreqPoly term(p.nvars());
        term.add_term(rest, c);
        out += term * pow(rp, k);
    }
    return out;
}

FreqPoly p_dom(const FreqPoly& p) {
    if (p.is_zero()) return FreqPoly::zero(p.nvars());
    int m = p.total_degree();
    if (m == 0) return FreqPoly::zero(p.nvars());
    // pure powers a*k_i^m at top degree, sharing one coefficient a
    LinearFreq sum;
    sum.c.assign(p.nvars(), 0);
    long long a = 0;
    bool found = false;
    for (const auto& [e, c] : p.terms()) {
        int nz = -1, deg = 0;
        bool pure = true;
        for (int i = 0; i < p.nvars(); ++i) {
            deg += e[i];
            if (e[i] != 0) {
                if (nz >= 0) pure = false;
                nz = i;
            }
        }
        if (deg != m || !pure) continue;
        if (!found) {
            a = c;
            found = true;
        } else if (c != a) {
            return FreqPoly::zero(p.nvars());
        }
        sum.c[nz] = 1;
    }
    if (!found) return FreqPoly::zero(p.nvars());
    return FreqPoly::constant(p.nvars(), a) * pow(FreqPoly::from_linear(sum), m);
}

FreqPoly p_low(const FreqPoly& p) {
    return p - p_dom(p);
}

long long eval_at(const FreqPoly& p, const std::vector<long long>& point) {
    if (static_cast<int>(point.size()) != p.nvars())
        throw std::invalid_argument("eval_at: point dimension mismatch");
    long long total = 0;
    for (const auto& [e, c] : p.terms()) {
        long long v = c;
        for (int i = 0; i < p.nvars(); ++i)
            for (int j = 0; j < e[i]; ++j) v = checked_mul(v, point[i]);
        total = checked_add(total, v);
    }
    return total;
}

namespace {

// descending graded-lex: higher total degree first, ties broken by
// lexicographically larger exponent vector first
bool print_before(const std::vector<int>& a, const std::vector<int>& b) {
    int da = 0, db = 0;
    for (int x : a) da += x;
    for (int x : b) db += x;
    if (da != db) return da > db;
    return a > b;
}

void append_monomial(std::string& out, const std::vector<int>& e) {
    bool first = true;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!first) out += '*';
        first = false;
        out += 'k';
        out += std::to_string(i + 1);
        if (e[i] > 1) {
            out += '^';
            out += std::to_string(e[i]);
        }
    }
}

}  // namespace

std::string to_string(const FreqPoly& p) {
    if (p.is_zero()) return "0";
    std::vector<const FreqPoly::TermMap::value_type*> order;
    for (const auto& t : p.terms()) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](auto* a, auto* b) { return print_before(a->first, b->first); });
    std::string out;
    bool first = true;
    for (auto* t : order) {
        const auto& [e, c] = *t;
        unsigned long long mag = c < 0 ? -static_cast<unsigned long long>(c) : c;
        if (first) {
            if (c < 0) out += '-';
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
        }
        bool constant_term = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
        if (mag != 1 || constant_term) {
            out += std::to_string(mag);
            if (!constant_term) out += '*';
        }
        append_monomial(out, e);
    }
    return out;
}

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;
    int nvars;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("freqpoly parse error at position " + std::to_string(i) + ": " + what);
    }
    long long integer() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected integer");
        try {
            return std::stoll(s.substr(start, i - start));
        } catch (const std::out_of_range&) {
            throw std::overflow_error("freqpoly parse: integer literal out of int64 range");
        }
    }
    // k<idx>[^<exp>]
    std::pair<int, int> var_factor() {
        skip_ws();
        if (peek() != 'k') fail("expected variable");
        ++i;
        long long idx = integer();
        if (idx < 1 || idx > nvars) fail("variable index out of range");
        int exp = 1;
        if (peek() == '^') {
            ++i;
            long long e = integer();
            if (e < 1 || e > 1000) fail("unreasonable exponent");
            exp = static_cast<int>(e);
        }
        return {static_cast<int>(idx - 1), exp};
    }
    void term(FreqPoly& acc, long long sign) {
        long long coeff = sign;
        std::vector<int> exps(nvars, 0);
        bool any_factor = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = checked_mul(coeff, integer());
            any_factor = true;
            if (peek() == '*') {
                ++i;
                auto [v, e] = var_factor();
                exps[v] += e;
            } else {
                acc.add_term(exps, coeff);
                return;  // pure constant term
            }
        } else {
            auto [v, e] = var_factor();
            exps[v] += e;
            any_factor = true;
        }
        while (peek() == '*') {
            ++i;
            auto [v, e] = var_factor();
            exps[v] += e;
        }
        if (!any_factor) fail("empty term");
        acc.add_term(exps, coeff);
    }
    FreqPoly parse() {
        FreqPoly acc(nvars);
        long long sign = 1;
        char c = peek();
        if (c == '+' || c == '-') {
            sign = c == '-' ? -1 : 1;
            ++i;
        }
        term(acc, sign);
        while (!eof()) {
            char op = peek();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            ++i;
            term(acc, op == '-' ? -1 : 1);
        }
        return acc;
    }
};

}  // namespace

FreqPoly parse_freqpoly(const std::string& text, int nvars) {
    Parser p{text, 0, nvars};
    if (p.eof()) p.fail("empty input");
    if (p.peek() == '0') {
        size_t save = p.i;
        ++p.i;
        if (p.eof()) return FreqPoly::zero(nvars);
        p.i = save;
    }
    return p.parse();
}

std::string to_string(const LinearFreq& f) {
    std::string out;
    for (int i = 0; i < f.nvars(); ++i) {
        if (f.c[i] == 0) continue;
        if (f.c[i] < 0)
            out += '-';
        else if (!out.empty())
            out += '+';
        out += 'k';
        out += std::to_string(i + 1);
    }
    return out.empty() ? "0" : out;
}

LinearFreq parse_linearfreq(const std::string& text, int nvars) {
    FreqPoly p = parse_freqpoly(text, nvars);
    LinearFreq f;
    f.c.assign(nvars, 0);
    for (const auto& [e, c] : p.terms()) {
        int nz = -1;
        for (int i = 0; i < nvars; ++i) {
            if (e[i] == 0) continue;
            if (e[i] != 1 || nz >= 0)
                throw std::invalid_argument("parse_linearfreq: not a linear combination");
            nz = i;
        }
        if (nz < 0 || c < -1 || c > 1)
            throw std::invalid_argument("parse_linearfreq: coefficients must be in {-1,0,1}");
        f.c[nz] = static_cast<int>(c);
    }
    return f;
}

}  // namespace lowreg
