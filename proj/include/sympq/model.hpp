#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sympq/form.hpp"
#include "sympq/linalg.hpp"

namespace sympq {

// A rotation plane: indices of its (x, y) linear coordinates.
struct Plane {
    int xc, yc;
};

// One circle generator acting diagonally: plane j rotates clockwise with
// integer speed plane_w[j] (z -> e^{-iwt} z), angle coordinate a shifts with
// speed ang_v[a] (th -> th + v t).
struct DiagonalGen {
    std::vector<int> plane_w;
    std::vector<int> ang_v;
};

// Finite cyclic symmetry given as the k-torsion of a diagonal circle.
// Invariance of a complex monomial is the congruence charge == 0 mod k.
struct CyclicDiag {
    int k = 1;
    DiagonalGen gen;
};

struct StabilizerDescriptor {
    int torus_rank = 0;            // dimension of the identity component
    std::vector<Int> divisors;     // finite elementary divisors (> 1 only)
    IMat weight_hnf;               // canonical key: HNF of the active weight lattice
    std::vector<int> element_ids;  // finite matrix group case
    std::string name;

    bool same_as(const StabilizerDescriptor& o) const {
        return torus_rank == o.torus_rank && divisors == o.divisors &&
               weight_hnf == o.weight_hnf && element_ids == o.element_ids;
    }
};

struct Sample {
    Point point;
    std::vector<QVec> tangent;
    int stratum = -1;
};

enum class ParamKind { Circle, Slope, Scale, Free };

// Exact rational parametrization of a dense patch of one stratum, with the
// degree bookkeeping needed for interpolation-complete evaluation grids.
struct PatchSampler {
    std::vector<ParamKind> kinds;
    // candidate value for parameter i, slot n (deterministic stream)
    std::function<Rational(int, long long)> candidate;
    // per-parameter physical validity (e.g. radii nonzero)
    std::function<bool(int, const Rational&)> valid;
    std::function<Point(const QVec&)> point;
    std::function<std::vector<QVec>(const QVec&)> frame;
    // true when every linear coordinate and frame entry is homogeneous in the
    // Scale parameters (cone case), enabling single-node scale grids
    bool homogeneous_scale = false;

    int nparams() const { return (int)kinds.size(); }
    bool available() const { return (bool)point; }
};

struct StratumDef {
    std::string id;
    StabilizerDescriptor stab;
    std::vector<std::vector<int>> supports;  // torus: plane support patterns
    int dim = 0;
    bool principal = false;
    PatchSampler sampler;
    std::vector<int> below;  // strata strictly below in the closure order
    bool possibly_disconnected = false;
};

// Everything the quotient-complex machinery needs about one reduced space:
// the ambient chart, the group data acting on it, the moment quadrics cutting
// out Z, and the stratification with exact samplers.
struct ReductionModel {
    std::string name;
    SpaceDims dims;
    std::vector<std::string> coord_names;

    std::vector<Plane> planes;
    std::vector<int> bare;  // linear coordinates not in any plane

    // Connected symmetry: torus generators (their charges pin invariance) and
    // the induced vector fields paired with the moment components.
    std::vector<DiagonalGen> torus;
    std::vector<VectorField> g_fields;  // same order as `torus`
    std::vector<Poly> moment;           // Phi components minus level; Z = common zeros

    // Finite symmetry: exact matrix generators and their closure, or a
    // cyclic diagonal datum (when the rotation matrix is irrational).
    std::vector<QMat> finite_gens;
    std::vector<QMat> finite_elements;  // closure, identity first
    std::optional<CyclicDiag> cyclic;

    // Bundle-quotient constraints: fields whose Lie derivative and interior
    // product must vanish identically for a chart form to represent a form
    // downstairs (H-basic condition in the associated-bundle chart).
    std::vector<VectorField> basic_fields;
    std::vector<DiagonalGen> basic_charges;  // charge data matching basic_fields

    bool graded = false;  // Z invariant under scaling of linear coordinates
    int max_freq_cap = 0; // truncation cap for angle frequencies (0: no angles)

    std::vector<StratumDef> strata;
    int principal = -1;
    std::vector<std::string> warnings;

    int nplanes() const { return (int)planes.size(); }
    const StratumDef& principal_stratum() const {
        if (principal < 0) throw error(name + ": empty stratification (no principal stratum)");
        return strata[principal];
    }
    VectorField field_of(const DiagonalGen& g) const;
    Poly plane_radius2(int j) const;  // x_j^2 + y_j^2
};

// Charge of a complex monomial datum under a diagonal generator:
//   L_gen (e^{i m.th} z^a zbar^b dz_S dzbar_T)
//     = i (sum_a v_a m_a - sum_j w_j (a_j - b_j + 1_S(j) - 1_T(j))) (...).
// Plane datum entries: per plane (a_j, b_j) and the S/T covector counts.
struct ComplexWeightData {
    std::vector<int> a, b;       // per plane
    std::vector<int> dz, dzbar;  // 0/1 per plane
    std::vector<int> m;          // per angle
};
long long charge_of(const ComplexWeightData& d, const DiagonalGen& g);

// Invariant-form enumeration: exact rational basis of the forms of form
// degree k and coefficient degree in [pmin, pmax] (and |freq| <= freq_cap)
// invariant under all torus generators, basic for all basic charges/fields,
// and invariant under the finite symmetry.
//
// Each basis element is the real or imaginary part of a single complex
// monomial form, hence an eigenvector of the full per-plane phase torus up
// to conjugation. `signatures`, when requested, receives the conjugation
// class of that multicharge (used to block-diagonalize later kernels).
struct FastForm;
std::vector<Form> invariant_basis(const ReductionModel& M, int k, int pmin, int pmax,
                                  std::vector<std::vector<int>>* signatures = nullptr,
                                  std::vector<FastForm>* fast = nullptr);

// True when every moment quadric is invariant under each separate plane
// rotation (all built-in models are), so charge classes never mix in the
// membership conditions.
bool phase_torus_symmetric(const ReductionModel& M);

// Fast exact evaluation of enumerated basis elements. A basis element is
// c * Re/Im(e^{i m.th} z^a zbar^b u^e dz_S dzbar_T ...); evaluating in the
// complex picture costs a handful of complex-rational products instead of
// expanding 2^deg real terms.
struct CRat {
    Rational re, im;
    CRat() = default;
    CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    CRat operator*(const CRat& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
    CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
    bool is_zero() const { return re == 0 && im == 0; }
};

struct FastMonomial {
    ComplexWeightData wd;       // per-plane exponents and covector flags, freqs
    std::vector<int> bare_exp;  // per bare coordinate
    std::vector<int> atoms;     // atom ids in wedge order (see enumerate.cpp)
    bool imaginary_part = false;
    int degree() const;
};

struct FastForm {
    std::vector<std::pair<Rational, FastMonomial>> terms;
    int coeff_degree() const;
    int max_abs_freq() const;
};

// Complex power tables at one evaluation point.
struct CEvalContext {
    const ReductionModel* M = nullptr;
    Point pt;
    std::vector<std::vector<CRat>> zpow;       // per plane, z^e
    std::vector<std::vector<CRat>> theta_pow;  // per angle, e^{i k th}
    std::vector<std::vector<Rational>> bare_pow;

    void init(const ReductionModel& model, const Point& point, int max_exp, int max_freq);
};

// Value of the (real) basis element on the given tangent vectors.
Rational eval_fast(const FastForm& f, const CEvalContext& ctx,
                   const std::vector<const QVec*>& vecs);

// Span-membership test against the invariant space of the matching blocks.
bool model_invariant(const ReductionModel& M, const Form& f);

// Stratification builders (torus support-pattern enumeration and finite
// fixed-space enumeration) with exact samplers attached where a rational
// parametrization is available.
void attach_torus_strata(ReductionModel& M, const std::vector<std::vector<int>>& weights,
                         const QVec& level);
void attach_finite_strata(ReductionModel& M);

// Deterministic injective rational streams used by samplers.
Rational nth_fraction(long long n);  // proper fractions in (0, 1)
Rational nth_signed(long long n);    // nonzero, mixed signs
Rational nth_positive(long long n);  // positive
// Feasibility of { u > 0 : A u = b } over the rationals (Fourier-Motzkin).
bool positive_feasible(const QMat& A, const QVec& b);

}  // namespace sympq
