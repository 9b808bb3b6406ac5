#pragma once

#include "sympq/model.hpp"

namespace sympq {

// Vanishing of a polynomial expression on a stratum is decided by exact
// evaluation on a tensor grid of patch parameters whose per-parameter node
// counts exceed the parameter degrees of the pulled-back expression. Such a
// grid is unisolvent for the numerator polynomial, so all-zero evaluations
// prove vanishing on the whole (dense) patch, and a single nonzero value is
// an exact witness of non-membership.
struct MembershipPolicy {
    uint64_t seed = 0;
    int stagnation = 3;  // kernel candidate rows: stop after this many idle nodes
};

struct EvalEvidence {
    Point point;
    std::vector<int> frame_subset;
    Rational value;
};

struct Certificate {
    bool member = false;
    std::string kind;
    bool exact = true;
    bool interpolation_complete = true;
    long long evaluations = 0;
    int degree_bound = 0;         // max parameter degree covered by the grid
    std::vector<long long> grid;  // nodes per parameter
    std::vector<EvalEvidence> evidence;  // witness first when non-member
    std::string detail;
};

struct ExprProfile {
    int coeff_deg = 0;
    int maxfreq = 0;
    int nvec = 0;
    bool homogeneous = false;
};

ExprProfile profile_of(const Form& f, int nvec);

// Per-parameter node counts for an interpolation-complete grid.
std::vector<long long> grid_sizes(const PatchSampler& ps, const ExprProfile& prof);

// Exact vanishing test of `f` against all nvec-subsets of the stratum frame
// over the full grid. Fills certificate data.
bool vanishes_on_stratum(const ReductionModel& M, int stratum, const Form& f, int nvec,
                         const MembershipPolicy& pol, Certificate* cert);

Certificate is_invariant_cert(const ReductionModel& M, const Form& f);
Certificate is_horizontal_on_principal(const ReductionModel& M, const Form& f,
                                       const MembershipPolicy& pol = {});
Certificate is_phi_basic(const ReductionModel& M, const Form& f,
                         const MembershipPolicy& pol = {});
// Throws when f is not invariant (the ideal lives inside the invariants).
Certificate in_ideal(const ReductionModel& M, const Form& f, const MembershipPolicy& pol = {});

// Streaming access to grid nodes (used for kernel candidates).
struct GridCursor {
    const ReductionModel* M = nullptr;
    const StratumDef* sd = nullptr;
    std::vector<long long> sizes;
    std::vector<long long> idx;
    std::vector<std::vector<Rational>> node_values;  // resolved per parameter
    bool done = false;

    void advance();
    QVec params() const;
};
GridCursor grid_cursor(const ReductionModel& M, int stratum, const ExprProfile& prof,
                       uint64_t seed);

}  // namespace sympq
