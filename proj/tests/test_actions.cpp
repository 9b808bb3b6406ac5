#include <doctest.h>

#include "sympq/action.hpp"

using namespace sympq;

TEST_CASE("induced vector field and moment map conventions") {
    LinearAction a = builtin_action("cp1");  // weights (1,1), level 1
    // weight-1 plane: xdot = y, ydot = -x (clockwise rotation)
    VectorField v = induced_vector_field(a, {1});
    SpaceDims d = a.space.dims();
    CHECK(v.comp[0] == Poly::var(d, 1));
    CHECK(v.comp[1] == -Poly::var(d, 0));

    // zero xi gives the zero field
    VectorField z = induced_vector_field(a, {0});
    for (const auto& c : z.comp) CHECK(c.is_zero());

    // weights (1,-1): second plane rotates the other way
    LinearAction c11 = builtin_action("cone11");
    VectorField w = induced_vector_field(c11, {1});
    CHECK(w.comp[2] == -Poly::var(d, 3));
    CHECK(w.comp[3] == Poly::var(d, 2));

    // moment components: Phi = 1/2 sum w_j (x_j^2 + y_j^2) - level
    MomentMapData mm = moment_map(a);
    Poly expect = (Poly::var(d, 0) * Poly::var(d, 0) + Poly::var(d, 1) * Poly::var(d, 1) +
                   Poly::var(d, 2) * Poly::var(d, 2) + Poly::var(d, 3) * Poly::var(d, 3)) *
                      Rational(1, 2) -
                  Poly::constant(d, 1);
    CHECK(mm.components[0] == expect);
}

TEST_CASE("moment identity holds for every built-in torus action") {
    for (const auto& name : {"cone11", "cp1", "teardrop"}) {
        LinearAction a = builtin_action(name);
        CHECK(verify_moment_condition(a).ok);
    }
    // rank-0 torus: vacuously true
    LinearAction zero;
    zero.space.n = 1;
    zero.group = TorusData{0, {}};
    zero.level = {};
    CHECK(verify_moment_condition(zero).ok);
    CHECK(zero_fibre_quadrics(zero).empty());
}

TEST_CASE("corrupted moment map is rejected") {
    LinearAction a = builtin_action("teardrop");
    auto phi = moment_map(a).components;
    phi[0] *= Rational(-1);
    CHECK_FALSE(verify_moment_condition(a, phi).ok);
}

TEST_CASE("level shift subtracts a constant") {
    LinearAction a = builtin_action("teardrop");
    LinearAction b = a;
    b.level = {Rational(0)};
    Poly diff = moment_map(b).components[0] - moment_map(a).components[0];
    CHECK(diff == Poly::constant(a.space.dims(), 1));
}

TEST_CASE("omega is invariant; coordinates are not") {
    for (const auto& name : {"cone11", "cp1", "teardrop", "z3-cone"}) {
        LinearAction a = builtin_action(name);
        CHECK(is_invariant(a, a.space.omega()));
    }
    LinearAction c11 = builtin_action("cone11");
    Form dx1 = Form::covector(c11.space.dims(), 0);
    CHECK_FALSE(is_invariant(c11, dx1));
    // moment components are invariant
    for (const auto& phi : moment_map(c11).components)
        CHECK(is_invariant(c11, Form::from_poly(phi)));
}

TEST_CASE("finite group machinery") {
    LinearAction z2 = builtin_action("z2-cone");
    auto elems = group_closure(z2.finite().generators, 100);
    CHECK(elems.size() == 2);
    LinearAction z3 = builtin_action("z3-cone");
    CHECK(group_closure(z3.finite().generators, 100).size() == 3);
    LinearAction z6 = builtin_action("z6-cone");
    CHECK(group_closure(z6.finite().generators, 100).size() == 6);

    // averaging: dx over Z2 = {+-id} vanishes; averaging is idempotent
    SpaceDims d = z2.space.dims();
    Form dx = Form::covector(d, 0);
    CHECK(average(z2, dx).is_zero());
    Form f = wedge(Form::covector(d, 0), Form::covector(d, 1));
    Form av = average(z3, f);
    CHECK(av == f);  // area form is invariant
    CHECK(average(z3, av) == av);
    CHECK(is_invariant(z3, av));
    // torus averaging is not implemented symbolically
    CHECK_THROWS_AS(average(builtin_action("cp1"), dx), error);

    // closure cap
    LinearAction bad = z3;
    bad.group = FiniteData{z3.finite().generators, 2};
    CHECK_THROWS_AS(validate(bad), error);
}

TEST_CASE("zero fibre quadrics of built-ins") {
    LinearAction c11 = builtin_action("cone11");
    SpaceDims d = c11.space.dims();
    auto q = zero_fibre_quadrics(c11);
    REQUIRE(q.size() == 1);
    Poly expect = (Poly::var(d, 0) * Poly::var(d, 0) + Poly::var(d, 1) * Poly::var(d, 1)) *
                      Rational(1, 2) -
                  (Poly::var(d, 2) * Poly::var(d, 2) + Poly::var(d, 3) * Poly::var(d, 3)) *
                      Rational(1, 2);
    CHECK(q[0] == expect);

    auto qt = zero_fibre_quadrics(builtin_action("teardrop"));
    REQUIRE(qt.size() == 1);
    // 1/2 (x1^2+y1^2) + (x2^2+y2^2) - 1
    Poly et = (Poly::var(d, 0) * Poly::var(d, 0) + Poly::var(d, 1) * Poly::var(d, 1)) *
                  Rational(1, 2) +
              Poly::var(d, 2) * Poly::var(d, 2) + Poly::var(d, 3) * Poly::var(d, 3) -
              Poly::constant(d, 1);
    CHECK(qt[0] == et);

    CHECK(zero_fibre_quadrics(builtin_action("z3-cone")).empty());
}

TEST_CASE("validation errors") {
    LinearAction bad;
    bad.space.n = 1;
    bad.group = TorusData{1, {{1}}};
    bad.level = {};  // wrong arity
    CHECK_THROWS_AS(validate(bad), error);

    LinearAction nonsymp;
    nonsymp.space.n = 1;
    QMat g{{Rational(2), Rational(0)}, {Rational(0), Rational(1)}};  // det 2
    nonsymp.group = FiniteData{{g}, 100};
    CHECK_THROWS_AS(validate(nonsymp), error);
}

TEST_CASE("invariant basis via weights matches averaging for z4") {
    // The z4-cone matrix model is the honest rotation by pi/2, which is also
    // the 4-torsion of the weight-1 circle. Compare both enumerations.
    ReductionModel mat = builtin_model("z4-cone");
    ReductionModel chr;
    chr.name = "z4-char";
    chr.dims = SpaceDims{2, 0};
    chr.coord_names = {"x1", "y1"};
    chr.planes = {Plane{0, 1}};
    chr.cyclic = CyclicDiag{4, DiagonalGen{{1}, {}}};
    chr.graded = true;
    for (int k = 0; k <= 2; ++k)
        for (int p = 0; p <= 3; ++p) {
            auto a = invariant_basis(mat, k, p, p);
            auto b = invariant_basis(chr, k, p, p);
            CHECK(a.size() == b.size());
        }
}

TEST_CASE("model invariance test agrees with action-level test") {
    ReductionModel M = builtin_model("cone11");
    LinearAction a = builtin_action("cone11");
    auto basis = invariant_basis(M, 1, 1, 1);
    CHECK(basis.size() > 0);
    for (const auto& f : basis) {
        CHECK(is_invariant(a, f));
        CHECK(model_invariant(M, f));
    }
    Form dx = Form::covector(M.dims, 0);
    CHECK_FALSE(model_invariant(M, dx));
}
