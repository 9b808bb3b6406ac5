#pragma once

#include <variant>

#include "sympq/model.hpp"

namespace sympq {

// Conventions used throughout:
//   omega = sum_i dx_i /\ dy_i on the standard symplectic R^{2n};
//   a weight-w circle factor rotates the plane clockwise, z -> e^{-iwt} z,
//   so the induced field is xi = w (y d/dx - x d/dy);
//   moment components satisfy d Phi^xi = i(xi) omega with
//   Phi^xi(v) = 1/2 omega(xi v, v) = sum_j (w_j / 2) (x_j^2 + y_j^2),
//   and the level is subtracted: the zero fibre is Phi^xi = <level, xi>.

struct SymplecticSpace {
    int n = 0;  // half-dimension

    SpaceDims dims() const { return SpaceDims{2 * n, 0}; }
    Form omega() const;
    QMat J() const;  // rotation by +pi/2 in each plane
};

struct TorusData {
    int rank = 0;
    std::vector<std::vector<int>> weights;  // rank rows, n columns
};

struct FiniteData {
    std::vector<QMat> generators;  // rational symplectic 2n x 2n matrices
    int order_cap = 10000;
};

struct LinearAction {
    SymplecticSpace space;
    std::variant<TorusData, FiniteData> group;
    QVec level;  // rank entries for a torus; empty/zero for finite groups

    bool is_torus() const { return std::holds_alternative<TorusData>(group); }
    const TorusData& torus() const { return std::get<TorusData>(group); }
    const FiniteData& finite() const { return std::get<FiniteData>(group); }
    int rank() const { return is_torus() ? torus().rank : 0; }
};

struct MomentMapData {
    std::vector<Poly> components;  // Phi^{xi_j} - <level, xi_j>
};

struct MomentReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// Validates invariants (symplectic generators, finite closure within the
// cap, integer weights, level arity) and throws on violation.
void validate(const LinearAction& a);

VectorField induced_vector_field(const LinearAction& a, const QVec& xi);
MomentMapData moment_map(const LinearAction& a);
MomentReport verify_moment_condition(const LinearAction& a);
// Same identity check against caller-supplied components (negative controls).
MomentReport verify_moment_condition(const LinearAction& a, const std::vector<Poly>& phi);
bool is_invariant(const LinearAction& a, const Form& f);
Form average(const LinearAction& a, const Form& f);  // finite groups only
std::vector<Poly> zero_fibre_quadrics(const LinearAction& a);

// Closure of the generated matrix group; identity first. Throws when the
// cap is exceeded.
std::vector<QMat> group_closure(const std::vector<QMat>& gens, int cap);

// Named examples: "cone11", "cp1", "teardrop", "zk-cone" with k in
// {2, 3, 4, 6} spelled z2-cone, z3-cone, z4-cone, z6-cone.
LinearAction builtin_action(const std::string& name);
std::vector<std::string> builtin_names();

// Build the full reduction model (moment data, stratification, samplers).
ReductionModel build_model(const LinearAction& a, const std::string& name = "action");
ReductionModel builtin_model(const std::string& name);

// Stratification queries.
StabilizerDescriptor orbit_type(const LinearAction& a, const QVec& point);
StabilizerDescriptor orbit_type(const ReductionModel& M, const Point& point);
int locate_stratum(const ReductionModel& M, const Point& p);  // -1 if off Z
std::vector<Sample> sample_points(const ReductionModel& M, int stratum, int count,
                                  uint64_t seed);
// Exact kernel of the moment differentials at p intersected with the fixed
// subspace of the stabilizer. Throws when p is not on Z.
std::vector<QVec> tangent_basis(const ReductionModel& M, const Point& p);

}  // namespace sympq
