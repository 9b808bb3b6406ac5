#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sympq/form.hpp"

using namespace sympq;

namespace {

const SpaceDims R2{2, 0};
const SpaceDims R4{4, 0};

Poly x(SpaceDims d, int i) { return Poly::var(d, i); }

Form random_form(SpaceDims d, int deg, int coeff_deg, std::mt19937_64& rng, int nterms = 4) {
    Form f(d, deg);
    std::uniform_int_distribution<int> coord(0, d.total() - 1), e(0, coeff_deg),
        c(-5, 5);
    for (int t = 0; t < nterms; ++t) {
        IndexList idx;
        while ((int)idx.size() < deg) {
            int k = coord(rng);
            if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
        }
        std::sort(idx.begin(), idx.end());
        Monomial m{std::vector<int>(d.lin, 0), std::vector<int>(d.ang, 0), false};
        for (int i = 0; i < d.lin; ++i) m.exps[i] = e(rng) % 3;
        if (d.ang > 0) {
            for (int j = 0; j < d.ang; ++j) m.freq[j] = c(rng) % 3;
            m.sin_part = c(rng) % 2 == 0;
        }
        int cc = c(rng);
        if (cc == 0) cc = 1;
        f.add_component(idx, Poly::monomial(d, m, cc));
    }
    return f;
}

VectorField random_field(SpaceDims d, std::mt19937_64& rng) {
    VectorField v = VectorField::zero(d);
    std::uniform_int_distribution<int> c(-3, 3), e(0, 2);
    for (int i = 0; i < d.total(); ++i) {
        Monomial m{std::vector<int>(d.lin, 0), std::vector<int>(d.ang, 0), false};
        for (int j = 0; j < d.lin; ++j) m.exps[j] = e(rng) % 2;
        v.comp[i] = Poly::monomial(d, m, c(rng));
    }
    return v;
}

}  // namespace

TEST_CASE("poly arithmetic and canonical order") {
    Poly p = x(R2, 0) * x(R2, 0) + x(R2, 1) * Rational(3);
    Poly q = x(R2, 0) * x(R2, 1);
    CHECK((p + q - p) == q);
    CHECK(p.degree() == 2);
    CHECK((p - p).is_zero());
    CHECK((p * Poly::zero(R2)).is_zero());

    Point pt{{Rational(2), Rational(-1, 2)}, {}};
    CHECK(p.eval(pt) == Rational(4) + Rational(-3, 2));
    CHECK(q.eval(pt) == Rational(-1));
}

TEST_CASE("trig polynomial products stay exact") {
    SpaceDims d{0, 1};
    Poly c1 = Poly::trig(d, {1}, false), s1 = Poly::trig(d, {1}, true);
    // cos^2 + sin^2 = 1
    CHECK((c1 * c1 + s1 * s1) == Poly::constant(d, 1));
    // sin(2th) = 2 sin cos
    CHECK((s1 * c1 * Rational(2)) == Poly::trig(d, {2}, true));
    // derivative: d/dth cos = -sin
    CHECK(c1.derivative(0) == -s1);
    CHECK(s1.derivative(0) == c1);

    // exact evaluation at a rational circle point
    Point pt{{}, {circle_from_t(Rational(1, 2))}};
    CHECK(pt.ang[0].on_circle());
    Poly c2 = Poly::trig(d, {2}, false);
    Rational c = pt.ang[0].c, s = pt.ang[0].s;
    CHECK(c2.eval(pt) == c * c - s * s);
}

TEST_CASE("wedge basics") {
    Form dx = Form::covector(R2, 0), dy = Form::covector(R2, 1);
    Form area = wedge(dx, dy);
    CHECK(area.degree() == 2);
    CHECK(area.component({0, 1}) != nullptr);

    // a /\ a = 0 for odd degree
    Form a = mul(x(R2, 0), dx) + mul(x(R2, 1) * x(R2, 1), dy);
    CHECK(wedge(a, a).is_zero());

    // (x dx) /\ (y dy) = x y dx/\dy, checked against a hand multiplier
    Form left = wedge(mul(x(R2, 0), dx), mul(x(R2, 1), dy));
    Form expect = mul(x(R2, 0) * x(R2, 1), area);
    CHECK(left == expect);

    // graded anticommutativity on random pairs
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        int ka = t % 3, kb = (t / 3) % 3;
        Form u = random_form(R4, ka, 2, rng), v = random_form(R4, kb, 2, rng);
        Form uv = wedge(u, v), vu = wedge(v, u);
        if ((ka * kb) % 2 == 1) vu *= Rational(-1);
        CHECK(uv == vu);
        // associativity
        Form w = random_form(R4, 1, 1, rng);
        CHECK(wedge(wedge(u, v), w) == wedge(u, wedge(v, w)));
    }
}

TEST_CASE("exterior derivative") {
    Form dx = Form::covector(R2, 0), dy = Form::covector(R2, 1);
    // d(x dy) = dx/\dy
    CHECK(ext_d(mul(x(R2, 0), dy)) == wedge(dx, dy));
    // d(constant) = 0
    CHECK(ext_d(Form::from_poly(Poly::constant(R2, 5))).is_zero());
    // d(1/2 (x dy - y dx)) = dx/\dy
    Form half = mul(x(R2, 0) * Rational(1, 2), dy) - mul(x(R2, 1) * Rational(1, 2), dx);
    CHECK(ext_d(half) == wedge(dx, dy));
    // d o d = 0 on random forms
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        Form f = random_form(SpaceDims{6, 1}, t % 4, 3, rng);
        CHECK(ext_d(ext_d(f)).is_zero());
    }
}

TEST_CASE("interior product") {
    Form dx = Form::covector(R2, 0), dy = Form::covector(R2, 1);
    Form area = wedge(dx, dy);
    VectorField ex = VectorField::zero(R2);
    ex.comp[0] = Poly::constant(R2, 1);
    CHECK(interior(ex, area) == dy);
    CHECK(interior(ex, Form::from_poly(x(R2, 0))).is_zero());

    // rotation field (-y, x) against dx/\dy -> -y dy - x dx
    VectorField rot = VectorField::zero(R2);
    rot.comp[0] = -x(R2, 1);
    rot.comp[1] = x(R2, 0);
    Form got = interior(rot, area);
    Form expect = mul(-x(R2, 1), dy) - mul(x(R2, 0), dx);
    CHECK(got == expect);

    // i(v) i(v) = 0
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        Form f = random_form(R4, 2 + t % 2, 2, rng);
        VectorField v = random_field(R4, rng);
        CHECK(interior(v, interior(v, f)).is_zero());
    }
}

TEST_CASE("Cartan formula is the definition and is consistent") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        Form f0 = random_form(R4, 0, 3, rng);
        VectorField v = random_field(R4, rng);
        // L_v f = i(v) df for functions
        CHECK(lie_derivative(v, f0) == interior(v, ext_d(f0)));
        // L_v(df) = d(L_v f)
        CHECK(lie_derivative(v, ext_d(f0)) == ext_d(lie_derivative(v, f0)));
    }
}

TEST_CASE("pullback") {
    // identity
    std::mt19937_64 rng(23);
    PolyMap id = PolyMap::identity(R4);
    for (int t = 0; t < 20; ++t) {
        Form f = random_form(R4, t % 3, 2, rng);
        CHECK(id.pullback(f) == f);
    }

    // dilation v -> t v with t an extra coordinate: pullback of dx1 is
    // t dx1 + x1 dt.
    SpaceDims src{3, 0};  // (x, y, t)
    PolyMap dil(src, R2);
    dil.set_poly(0, x(src, 0) * x(src, 2));
    dil.set_poly(1, x(src, 1) * x(src, 2));
    Form dx = Form::covector(R2, 0);
    Form pb = dil.pullback(dx);
    Form expect = mul(x(src, 2), Form::covector(src, 0)) + mul(x(src, 0), Form::covector(src, 2));
    CHECK(pb == expect);

    // functoriality (phi o psi)^* = psi^* o phi^*
    for (int t = 0; t < 25; ++t) {
        std::uniform_int_distribution<int> c(-2, 2);
        PolyMap phi(R2, R2), psi(R2, R2);
        for (int i = 0; i < 2; ++i) {
            phi.set_poly(i, x(R2, 0) * c(rng) + x(R2, 1) * c(rng) + x(R2, 0) * x(R2, 1) * c(rng));
            psi.set_poly(i, x(R2, 0) * c(rng) + x(R2, 1) * x(R2, 1) * c(rng));
        }
        Form f = random_form(R2, 1 + t % 2, 2, rng);
        CHECK(psi.pullback(phi.pullback(f)) == phi.compose_after(psi).pullback(f));
        // commutes with d
        CHECK(ext_d(phi.pullback(f)) == phi.pullback(ext_d(f)));
        Form g = random_form(R2, 1, 2, rng);
        CHECK(phi.pullback(wedge(f, g)) == wedge(phi.pullback(f), phi.pullback(g)));
    }
}

TEST_CASE("evaluation is multilinear alternating") {
    Form area = wedge(Form::covector(R2, 0), Form::covector(R2, 1));
    Point p{{Rational(0), Rational(0)}, {}};
    std::vector<Rational> e1{1, 0}, e2{0, 1};
    CHECK(evaluate(area, p, {e1, e2}) == 1);
    CHECK(evaluate(area, p, {e2, e1}) == -1);

    Form xdx = mul(x(R2, 0), Form::covector(R2, 0));
    Point p2{{Rational(2), Rational(0)}, {}};
    CHECK(evaluate(xdx, p2, {e1}) == 2);

    CHECK_THROWS_AS(evaluate(area, p, {e1}), error);

    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int t = 0; t < 40; ++t) {
        Form f = random_form(R4, 2, 2, rng);
        Point q{{c(rng), c(rng), c(rng), c(rng)}, {}};
        std::vector<Rational> u{c(rng), c(rng), c(rng), c(rng)};
        std::vector<Rational> v{c(rng), c(rng), c(rng), c(rng)};
        std::vector<Rational> w(4);
        Rational a = c(rng), b = c(rng);
        for (int i = 0; i < 4; ++i) w[i] = a * u[i] + b * v[i];
        CHECK(evaluate(f, q, {u, v}) == -evaluate(f, q, {v, u}));
        CHECK(evaluate(f, q, {w, v}) == a * evaluate(f, q, {u, v}));
    }
}

TEST_CASE("coordinate restriction and angle substitution") {
    SpaceDims d{1, 1};  // (a, th)
    Poly p = Poly::var(d, 0) * Poly::trig(d, {2}, false);
    CoordinateRestriction r;
    r.src = d;
    r.slots.resize(2);
    r.slots[0].keep = true;
    r.slots[1].keep = false;
    r.slots[1].ang_value = circle_from_t(Rational(1, 3));  // (4/5, 3/5)
    Poly q = r.apply_poly(p);
    // cos(2 th) at (4/5,3/5): c^2 - s^2 = 16/25 - 9/25 = 7/25
    SpaceDims rd{1, 0};
    CHECK(q == Poly::var(rd, 0) * Rational(7, 25));

    Form f = mul(p, Form::covector(d, 1)) + mul(p, Form::covector(d, 0));
    Form g = r.apply(f);
    // dth component dies, da survives
    CHECK(g.degree() == 1);
    CHECK(g.component({0}) != nullptr);
    CHECK(g.components().size() == 1);
}
