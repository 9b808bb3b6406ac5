#include <doctest.h>

#include "sympq/action.hpp"
#include "sympq/quotient.hpp"

using namespace sympq;

TEST_CASE("degree-0 truncation-0 basis is the constants") {
    for (const auto& name : {"cone11", "cp1", "teardrop", "z3-cone"}) {
        ReductionModel M = builtin_model(name);
        QuotientBasis q = quotient_basis(M, 0, 0);
        CHECK(q.dim() == 1);
        CHECK(q.ideal.empty());
    }
}

TEST_CASE("degrees beyond the ambient dimension are empty") {
    ReductionModel M = builtin_model("cone11");
    CHECK(quotient_basis(M, 5, 4).dim() == 0);
}

TEST_CASE("cone11 k=1 quotient dimension is seed-independent") {
    ReductionModel M = builtin_model("cone11");
    QuotientBasis a = quotient_basis(M, 1, 1, MembershipPolicy{0, 3});
    QuotientBasis b = quotient_basis(M, 1, 1, MembershipPolicy{6, 3});
    CHECK(a.dim() == b.dim());
    CHECK(a.basic.size() == b.basic.size());
    CHECK(a.ideal.size() == b.ideal.size());
}

TEST_CASE("subcomplex property: d of basic is basic, d of ideal is ideal") {
    for (const auto& name : {"cone11", "teardrop"}) {
        ReductionModel M = builtin_model(name);
        std::mt19937_64 rng(11);
        for (int k = 0; k <= 2; ++k) {
            QuotientBasis q = quotient_basis(M, k, 2);
            for (int t = 0; t < 3 && !q.basic.empty(); ++t) {
                Form f = random_combination(q.basic, rng);
                CHECK(is_phi_basic(M, ext_d(f)).member);
            }
            for (int t = 0; t < 3 && !q.ideal.empty(); ++t) {
                Form f = random_combination(q.ideal, rng);
                CHECK(in_ideal(M, ext_d(f)).member);
            }
        }
    }
}

TEST_CASE("d[omega] = 0 and d[Phi alpha] = Phi d[alpha] mod ideal") {
    ReductionModel M = builtin_model("cp1");
    Form w = builtin_action("cp1").space.omega();
    QuotientFormClass cls{w, 2, 4};
    QuotientFormClass dw = differential(M, cls);
    CHECK(dw.representative.is_zero());

    // d(Phi a) - Phi da = dPhi /\ a lies in the ideal
    QuotientBasis q1 = quotient_basis(M, 1, 1);
    std::mt19937_64 rng(5);
    REQUIRE(!q1.basic.empty());
    Form a = random_combination(q1.basic, rng);
    Form lhs = ext_d(mul(M.moment[0], a));
    Form rhs = mul(M.moment[0], ext_d(a));
    CHECK(in_ideal(M, lhs - rhs).member);
}

TEST_CASE("restriction to lower strata: ideal vanishes, omega is horizontal data") {
    ReductionModel M = builtin_model("teardrop");
    int lower = M.principal == 0 ? 1 : 0;
    QuotientBasis q2 = quotient_basis(M, 2, 2);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5 && !q2.ideal.empty(); ++t) {
        Form f = random_combination(q2.ideal, rng);
        StratumRestriction r = restrict_to_stratum(M, f, lower, 10, 1);
        CHECK(r.all_zero);
        CHECK(r.contractions_vanish);
    }
    // omega restricted to the Z2 circle stratum: the stratum is 1-dimensional,
    // so 2-form evaluations are empty, but 0/1-form data is meaningful; use
    // the moment function: invariant, constant (= 0) on Z
    Form phi = Form::from_poly(M.moment[0]);
    StratumRestriction r0 = restrict_to_stratum(M, phi, lower, 5, 0);
    CHECK(r0.all_zero);  // Phi vanishes on Z
}

TEST_CASE("basic forms contract to zero on every stratum (restrict lemma)") {
    for (const auto& name : {"cone11", "teardrop"}) {
        ReductionModel M = builtin_model(name);
        std::mt19937_64 rng(23);
        QuotientBasis q = quotient_basis(M, 2, 2);
        REQUIRE(!q.basic.empty());
        for (int s = 0; s < (int)M.strata.size(); ++s) {
            for (int t = 0; t < 5; ++t) {
                Form f = random_combination(q.basic, rng);
                StratumRestriction r = restrict_to_stratum(M, f, s, 8, 2);
                CHECK(r.contractions_vanish);
            }
        }
    }
}

TEST_CASE("cone11 truncated betti numbers are (1,0,0,0,0)") {
    ReductionModel M = builtin_model("cone11");
    CohomologyReport rep = cohomology(M, 4);
    REQUIRE(rep.betti.size() == 5);
    CHECK(rep.betti[0] == 1);
    for (int k = 1; k <= 4; ++k) CHECK(rep.betti[k] == 0);
}

TEST_CASE("z3-cone truncated betti numbers are (1,0,0)") {
    ReductionModel M = builtin_model("z3-cone");
    CohomologyReport rep = cohomology(M, 6);
    REQUIRE(rep.betti.size() == 3);
    CHECK(rep.betti[0] == 1);
    CHECK(rep.betti[1] == 0);
    CHECK(rep.betti[2] == 0);
}

TEST_CASE("compact model cohomology keeps b0 = 1 and sees the symplectic class") {
    ReductionModel M = builtin_model("cp1");
    CohomologyReport rep = cohomology(M, 4);
    CHECK(rep.betti[0] == 1);
    // the reduced symplectic class survives: H^2 of the model is nonzero
    CHECK(rep.betti[2] >= 1);
}
