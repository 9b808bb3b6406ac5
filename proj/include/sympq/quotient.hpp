#pragma once

#include <random>

#include "sympq/membership.hpp"

namespace sympq {

struct QuotientFormClass {
    Form representative;
    int k = 0;
    int D = 0;
};

struct QuotientBasis {
    int k = 0, D = 0;
    std::vector<Form> basic;  // basis of the Phi-basic subspace (coeff deg <= D)
    std::vector<Form> ideal;  // basis of the ideal subspace
    std::vector<Form> reps;   // coset representatives of basic/ideal
    int dim() const { return (int)reps.size(); }
};

QuotientBasis quotient_basis(const ReductionModel& M, int k, int D,
                             const MembershipPolicy& pol = {});

struct CohomologyReport {
    int D = 0;
    std::vector<int> dim;     // quotient dimension per form degree (grade-truncated)
    std::vector<int> rank_d;  // rank of d_k per k
    std::vector<int> betti;
    std::string truncation_note;
};

// Betti numbers of the truncated quotient complex. The truncation keeps form
// degree k together with coefficient degree <= D - k, so the differential
// (which lowers coefficient degree by one) stays inside the truncation and
// the scaling homotopy of cone models does too.
CohomologyReport cohomology(const ReductionModel& M, int D, const MembershipPolicy& pol = {});

// d on the quotient: d of the representative; optionally certify the output
// is Phi-basic and that d maps the ideal into the ideal at this degree.
QuotientFormClass differential(const ReductionModel& M, const QuotientFormClass& c,
                               bool check = false, const MembershipPolicy& pol = {});

struct StratumRestriction {
    int stratum = -1;
    bool contractions_vanish = true;  // i(xi) parts vanish on stratum tangents
    bool all_zero = true;             // the form itself evaluates to zero there
    struct Row {
        Point point;
        std::vector<Rational> values;
    };
    std::vector<Row> rows;
};

// Evaluations of a representative on tangent multivectors at stratum samples.
StratumRestriction restrict_to_stratum(const ReductionModel& M, const Form& rep, int stratum,
                                       int samples = 20, uint64_t seed = 0);

// Deterministic random rational combination of basis forms.
Form random_combination(const std::vector<Form>& basis, std::mt19937_64& rng, int max_coeff = 5);

}  // namespace sympq
