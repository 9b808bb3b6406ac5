#include <doctest.h>

#include "sympq/action.hpp"
#include <random>

#include "sympq/membership.hpp"

using namespace sympq;

namespace {
Form omega_of(const std::string& name) { return builtin_action(name).space.omega(); }
}  // namespace

TEST_CASE("omega is Phi-basic for every built-in action") {
    for (const auto& name : {"cone11", "cp1", "teardrop", "z3-cone", "z4-cone"}) {
        ReductionModel M = builtin_model(name);
        Certificate c = is_phi_basic(M, omega_of(name));
        CHECK(c.member);
        CHECK(c.exact);
    }
}

TEST_CASE("dPhi wedge an invariant form vanishes on Z (level-set tangency)") {
    ReductionModel M = builtin_model("cone11");
    Form dphi = ext_d(Form::from_poly(M.moment[0]));
    // dPhi itself is in the ideal
    CHECK(in_ideal(M, dphi).member);
    // dPhi /\ omega too
    Form w = omega_of("cone11");
    CHECK(in_ideal(M, wedge(dphi, w)).member);
    // and it is horizontal in particular
    CHECK(is_horizontal_on_principal(M, wedge(dphi, w)).member);
}

TEST_CASE("dx1 is not horizontal on cone11, with an exact witness") {
    ReductionModel M = builtin_model("cone11");
    Form dx1 = Form::covector(M.dims, 0);
    Certificate c = is_horizontal_on_principal(M, dx1);
    CHECK_FALSE(c.member);
    REQUIRE(!c.evidence.empty());
    CHECK(c.evidence[0].value != 0);
    // and x1 dx1 is not invariant, hence not basic
    Form f = mul(Poly::var(M.dims, 0), dx1);
    Certificate b = is_phi_basic(M, f);
    CHECK_FALSE(b.member);
}

TEST_CASE("Phi times an invariant form lies in the ideal") {
    for (const auto& name : {"cone11", "cp1", "teardrop"}) {
        ReductionModel M = builtin_model(name);
        Form w = omega_of(name);
        Form f = mul(M.moment[0], w);
        Certificate c = in_ideal(M, f);
        CHECK(c.member);
    }
}

TEST_CASE("omega is not in the ideal on cp1") {
    ReductionModel M = builtin_model("cp1");
    Certificate c = in_ideal(M, omega_of("cp1"));
    CHECK_FALSE(c.member);
    REQUIRE(!c.evidence.empty());
    CHECK(c.evidence[0].value != 0);
}

TEST_CASE("in_ideal rejects non-invariant input") {
    ReductionModel M = builtin_model("cone11");
    Form dx1 = Form::covector(M.dims, 0);
    CHECK_THROWS_AS(in_ideal(M, dx1), error);
}

TEST_CASE("zero form is a member everywhere") {
    ReductionModel M = builtin_model("teardrop");
    Form z = Form::zero(M.dims, 2);
    CHECK(is_phi_basic(M, z).member);
    CHECK(in_ideal(M, z).member);
}

TEST_CASE("finite-group ideal is zero: invariant forms vanish only if zero") {
    ReductionModel M = builtin_model("z3-cone");
    auto basis = invariant_basis(M, 1, 1, 3);
    REQUIRE(!basis.empty());
    for (const auto& f : basis) {
        CHECK_FALSE(in_ideal(M, f).member);
        CHECK(is_phi_basic(M, f).member);  // no contraction directions
    }
}

TEST_CASE("membership verdicts agree across disjoint seeded grids") {
    ReductionModel M = builtin_model("teardrop");
    std::mt19937_64 rng(3);
    auto basis = invariant_basis(M, 1, 0, 3);
    REQUIRE(!basis.empty());
    std::uniform_int_distribution<int> c(-3, 3);
    for (int t = 0; t < 40; ++t) {
        Form f = Form::zero(M.dims, 1);
        for (const auto& b : basis)
            f += b * Rational(c(rng));
        MembershipPolicy p1{1, 3}, p2{5, 3};
        CHECK(is_horizontal_on_principal(M, f, p1).member ==
              is_horizontal_on_principal(M, f, p2).member);
        CHECK(in_ideal(M, f, p1).member == in_ideal(M, f, p2).member);
    }
}

TEST_CASE("degenerate fibre {0}: membership collapses to the origin") {
    LinearAction a;
    a.space.n = 1;
    a.group = TorusData{1, {{1}}};
    a.level = {Rational(0)};
    ReductionModel M = build_model(a, "definite1");
    // any 1-form is in the ideal (no tangent directions at the origin)
    Form dx = Form::covector(M.dims, 0);
    // dx is not invariant; use an invariant one
    auto b1 = invariant_basis(M, 1, 1, 1);
    for (const auto& f : b1) CHECK(in_ideal(M, f).member);
    // invariant functions vanishing at 0 are in the ideal; constants are not
    Form one = Form::from_poly(Poly::constant(M.dims, 1));
    CHECK_FALSE(in_ideal(M, one).member);
    Form r2 = Form::from_poly(M.moment[0]);
    CHECK(in_ideal(M, r2).member);
}
