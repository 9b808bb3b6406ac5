#pragma once

#include <map>
#include <vector>

#include "sympq/poly.hpp"

namespace sympq {

using IndexList = std::vector<int>;  // strictly increasing coordinate indices

// Polynomial vector field: one coefficient per coordinate (angle components
// mean multiples of d/dth).
struct VectorField {
    SpaceDims dims;
    std::vector<Poly> comp;  // size dims.total()

    static VectorField zero(SpaceDims d);
};

// Graded exterior form with Poly coefficients indexed by increasing covector
// index lists. Zero components are never stored; the zero form of any degree
// is an empty component map.
class Form {
  public:
    Form() = default;
    Form(SpaceDims d, int degree) : dims_(d), degree_(degree) {}

    static Form zero(SpaceDims d, int degree) { return Form(d, degree); }
    static Form from_poly(const Poly& p);              // degree 0
    static Form covector(SpaceDims d, int coord);      // dx_i / dth_j
    static Form monomial(SpaceDims d, const IndexList& idx, const Poly& coeff);

    const SpaceDims& dims() const { return dims_; }
    int degree() const { return degree_; }
    bool is_zero() const { return comps_.empty(); }
    const std::map<IndexList, Poly>& components() const { return comps_; }
    const Poly* component(const IndexList& idx) const;
    int coeff_degree() const;  // max linear degree over components, -1 if zero
    int max_abs_freq() const;
    bool coeff_homogeneous(int* deg_out = nullptr) const;

    void add_component(const IndexList& idx, const Poly& p);

    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form operator-() const;
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    Form& operator*=(const Rational& c);
    friend Form operator*(Form a, const Rational& c) { return a *= c; }
    friend Form operator*(const Rational& c, Form a) { return a *= c; }
    bool operator==(const Form& o) const;
    bool operator!=(const Form& o) const { return !(*this == o); }

    std::string str(const std::vector<std::string>& names = {}) const;

  private:
    SpaceDims dims_;
    int degree_ = 0;
    std::map<IndexList, Poly> comps_;
};

Form wedge(const Form& a, const Form& b);
Form ext_d(const Form& a);
Form interior(const VectorField& v, const Form& a);
Form lie_derivative(const VectorField& v, const Form& a);  // d i(v) + i(v) d
Form mul(const Poly& f, const Form& a);

// Exact evaluation of a k-form on k tangent vectors at a point. Vectors are
// coordinate vectors (angle entries are d/dth components).
Rational evaluate(const Form& a, const Point& p, const std::vector<std::vector<Rational>>& vecs);
Rational evaluate(const Form& a, const PowerTable& t,
                  const std::vector<std::vector<Rational>>& vecs);

// Polynomial map between coordinate spaces, with three component kinds:
// a Poly in the source coordinates (linear targets), the identity onto a
// source angle (angle targets), or nothing else. Supports pullback and
// composition.
class PolyMap {
  public:
    struct Comp {
        bool angle_identity = false;
        int src_angle = -1;  // when angle_identity
        Poly poly;           // when !angle_identity
    };

    PolyMap(SpaceDims src, SpaceDims dst) : src_(src), dst_(dst), comps_(dst.total()) {}

    static PolyMap identity(SpaceDims d);
    // Linear map on a purely linear space given by matrix m (dst x src).
    static PolyMap linear(SpaceDims src, SpaceDims dst,
                          const std::vector<std::vector<Rational>>& m);

    const SpaceDims& src() const { return src_; }
    const SpaceDims& dst() const { return dst_; }
    void set_poly(int target_coord, const Poly& p);
    void set_angle_identity(int target_coord, int src_angle);
    const Comp& comp(int target_coord) const { return comps_[target_coord]; }

    Poly apply_poly(const Poly& p) const;   // p |-> p o phi
    Form pullback(const Form& a) const;     // phi^* a
    Point apply_point(const Point& p) const;

    PolyMap compose_after(const PolyMap& inner) const;  // this o inner

  private:
    SpaceDims src_, dst_;
    std::vector<Comp> comps_;
};

// Substitute exact values for a subset of coordinates (dropping them and
// their covectors) and reinterpret over the smaller space. Used for
// restriction maps such as "set t = 0" or "restrict to the fibre".
struct CoordinateRestriction {
    SpaceDims src;
    // For each source coordinate: keep (mapped index) or substitute a value.
    struct Slot {
        bool keep = true;
        Rational lin_value;     // when dropped linear coord
        CirclePoint ang_value;  // when dropped angle coord
    };
    std::vector<Slot> slots;

    SpaceDims reduced_dims() const;
    Form apply(const Form& a) const;
    Poly apply_poly(const Poly& p) const;
};

// Insert extra coordinates (the inverse direction of a restriction): embed a
// form on a subspace into the bigger space, coefficients independent of the
// new coordinates.
Form promote(const Form& a, SpaceDims newdims, const std::vector<int>& lin_map,
             const std::vector<int>& ang_map);

}  // namespace sympq
