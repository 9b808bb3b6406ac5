#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympq/space.hpp"

namespace sympq {

// One term basis element: x^exps * trig(freq . theta), where trig is cos or
// sin. Canonical representative: the first nonzero frequency is positive
// (cos(-k.th) = cos(k.th), sin(-k.th) = -sin(k.th)); sin with freq = 0 is the
// zero function and never stored.
struct Monomial {
    std::vector<int> exps;  // size = dims.lin
    std::vector<int> freq;  // size = dims.ang
    bool sin_part = false;

    int degree() const {
        int d = 0;
        for (int e : exps) d += e;
        return d;
    }
    int freq_l1() const {
        int f = 0;
        for (int k : freq) f += k < 0 ? -k : k;
        return f;
    }
    bool trig_trivial() const {
        for (int k : freq)
            if (k != 0) return false;
        return true;
    }

    // Graded lexicographic: total linear degree first, then exponents, then
    // frequencies, then cos < sin. Gives a stable canonical term order.
    bool operator<(const Monomial& o) const {
        int d = degree(), od = o.degree();
        if (d != od) return d < od;
        if (exps != o.exps) return exps < o.exps;
        int f = freq_l1(), of = o.freq_l1();
        if (f != of) return f < of;
        if (freq != o.freq) return freq < o.freq;
        return sin_part < o.sin_part;
    }
    bool operator==(const Monomial& o) const {
        return exps == o.exps && freq == o.freq && sin_part == o.sin_part;
    }
};

// Precomputed powers of a Point, so that grids of exact evaluations do not
// recompute x^k and cos/sin(k th) term by term.
class PowerTable {
  public:
    PowerTable(const Point& p, int max_exp, int max_freq);

    const Rational& lin_pow(int coord, int e) const { return lin_[coord][e]; }
    // cos/sin of k*theta_j for k >= 0.
    const std::pair<Rational, Rational>& ang_pow(int j, int k) const { return ang_[j][k]; }
    int max_exp() const { return (int)lin_.empty() ? 0 : (int)lin_[0].size() - 1; }

  private:
    std::vector<std::vector<Rational>> lin_;
    std::vector<std::vector<std::pair<Rational, Rational>>> ang_;
};

// Exact multivariate polynomial with rational coefficients in the linear
// coordinates and finite Fourier (trigonometric polynomial) dependence on the
// angle coordinates. Terms with zero coefficient are never stored.
class Poly {
  public:
    Poly() = default;
    explicit Poly(SpaceDims d) : dims_(d) {}

    static Poly zero(SpaceDims d) { return Poly(d); }
    static Poly constant(SpaceDims d, const Rational& c);
    static Poly var(SpaceDims d, int lin_coord, int power = 1);
    static Poly trig(SpaceDims d, const std::vector<int>& freq, bool sin_part);
    static Poly monomial(SpaceDims d, Monomial m, const Rational& c);

    const SpaceDims& dims() const { return dims_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // 0 if zero, throws if non-constant
    int degree() const;               // max total linear degree, -1 for zero
    int max_abs_freq() const;         // max L1 frequency
    bool is_homogeneous(int* deg_out = nullptr) const;

    void add_term(const Monomial& m, const Rational& c);

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator-() const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly& operator*=(const Rational& c);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    bool operator==(const Poly& o) const { return dims_ == o.dims_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // d/d(coordinate i): power rule for linear i, cos -> -k sin etc. for
    // angles.
    Poly derivative(int coord) const;

    Rational eval(const Point& p) const;
    Rational eval(const PowerTable& t) const;
    double eval_double(const PointD& p) const;

    // Integrate the linear coordinate `coord` over [0,1] and remove it from
    // the support (the result no longer involves that coordinate).
    Poly integrate01(int coord) const;

    // Extend/embed into a larger space: old linear coords map to lin_map[i],
    // old angles to ang_map[j] (indices within the new dims).
    Poly remap(SpaceDims newdims, const std::vector<int>& lin_map,
               const std::vector<int>& ang_map) const;

    std::string str(const std::vector<std::string>& names = {}) const;

  private:
    SpaceDims dims_;
    std::map<Monomial, Rational> terms_;
};

std::string coord_name(const SpaceDims& d, int i, const std::vector<std::string>& names);

}  // namespace sympq
