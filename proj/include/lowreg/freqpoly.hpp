#ifndef LOWREG_FREQPOLY_HPP
#define LOWREG_FREQPOLY_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Exact multivariate polynomial arithmetic over integer frequency variables
// k1..kn. Everything here is exact int64 with overflow detection: these
// polynomials feed symbolic identity checks, so a silent wrap would turn a
// structural failure into a bogus pass (or vice versa). All operations throw
// std::overflow_error when a coefficient leaves the int64 range.

namespace lowreg {

// A signed {-1,0,1} combination of the frequency variables, e.g. -k1+k2+k3.
// This is the shape node/leaf frequencies take: sums of leaf variables with
// orientation signs.
struct LinearFreq {
    std::vector<int> c;  // c[i] in {-1,0,1}, coefficient of k_{i+1}

    LinearFreq() = default;
    explicit LinearFreq(std::vector<int> coeffs);
    int nvars() const { return static_cast<int>(c.size()); }

    // single variable k_{var+1} over nvars variables
    static LinearFreq unit(int nvars, int var);

    bool operator==(const LinearFreq&) const = default;
};

class FreqPoly {
  public:
    // exponent vector (length nvars) -> nonzero coefficient
    using TermMap = std::map<std::vector<int>, long long>;

    explicit FreqPoly(int nvars = 0) : nvars_(nvars) {}

    static FreqPoly zero(int nvars) { return FreqPoly(nvars); }
    static FreqPoly constant(int nvars, long long a);
    static FreqPoly variable(int nvars, int var);
    static FreqPoly from_linear(const LinearFreq& f);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    // total degree; -1 for the zero polynomial
    int total_degree() const;
    const TermMap& terms() const { return terms_; }
    long long coeff(const std::vector<int>& exps) const;

    void add_term(const std::vector<int>& exps, long long coeff);

    FreqPoly operator-() const;
    friend FreqPoly operator+(const FreqPoly& a, const FreqPoly& b);
    friend FreqPoly operator-(const FreqPoly& a, const FreqPoly& b);
    friend FreqPoly operator*(const FreqPoly& a, const FreqPoly& b);
    FreqPoly& operator+=(const FreqPoly& o) { return *this = *this + o; }
    FreqPoly& operator-=(const FreqPoly& o) { return *this = *this - o; }
    FreqPoly& operator*=(const FreqPoly& o) { return *this = *this * o; }
    bool operator==(const FreqPoly&) const = default;

  private:
    int nvars_;
    TermMap terms_;
};

FreqPoly pow(const FreqPoly& p, int e);

// Substitute the linear form `repl` for variable `var` (0-based) and expand.
FreqPoly substitute_linear(const FreqPoly& p, int var, const LinearFreq& repl);

// Dominant-part projection. With m the total degree of p, collect the pure
// power monomials a_i * k_i^m present at degree m; when that set is nonempty
// and all a_i share one value a, the dominant part is a*(sum of those k_i)^m,
// expanded; otherwise (including p = 0) it is the zero polynomial.
FreqPoly p_dom(const FreqPoly& p);

// Remainder p - p_dom(p).
FreqPoly p_low(const FreqPoly& p);

// Exact evaluation at an integer point (point.size() == nvars).
long long eval_at(const FreqPoly& p, const std::vector<long long>& point);

// Canonical text form: monomials sorted by descending total degree, ties by
// descending lexicographic exponent order, e.g. "2*k1^2 - 2*k1*k2". The zero
// polynomial prints as "0". parse_freqpoly accepts exactly this grammar
// (whitespace-insensitive) and round-trips bit-exactly with to_string.
std::string to_string(const FreqPoly& p);
FreqPoly parse_freqpoly(const std::string& text, int nvars);

// Same canonical text form restricted to linear {-1,0,1} combinations,
// e.g. "-k1+k2+k3" (no '*' coefficients, no spaces); "0" when empty.
std::string to_string(const LinearFreq& f);
LinearFreq parse_linearfreq(const std::string& text, int nvars);

}  // namespace lowreg

#endif
