#include <doctest.h>

#include "sympq/model.hpp"

using namespace sympq;

TEST_CASE("row reduction, rank, kernel") {
    RowReducer rr(3);
    CHECK(rr.add_row({1, 2, 3}));
    CHECK(rr.add_row({0, 1, 1}));
    CHECK_FALSE(rr.add_row({1, 3, 4}));  // dependent
    CHECK(rr.rank() == 2);
    auto k = rr.kernel();
    REQUIRE(k.size() == 1);
    // kernel vector satisfies both rows
    CHECK(k[0][0] + 2 * k[0][1] + 3 * k[0][2] == 0);
    CHECK(k[0][1] + k[0][2] == 0);
}

TEST_CASE("span solver coordinates") {
    SpanSolver ss(3);
    CHECK(ss.add({1, 0, 0}) == 0);
    CHECK(ss.add({1, 1, 0}) == 1);
    CHECK(ss.add({2, 1, 0}) == -1);  // dependent
    auto c = ss.solve({3, 2, 0});
    REQUIRE(c.has_value());
    // 3,2,0 = 1*(1,0,0) + 2*(1,1,0)
    CHECK((*c)[0] == 1);
    CHECK((*c)[1] == 2);
    CHECK_FALSE(ss.solve({0, 0, 1}).has_value());
}

TEST_CASE("hnf and smith") {
    IMat m{{Int(2), Int(0)}, {Int(0), Int(2)}, {Int(1), Int(1)}};
    IMat h = hnf_rows(m);
    REQUIRE(h.size() == 2);
    CHECK(h[0][0] == 1);  // lattice contains (1,1) and (2,0) => index 4... HNF [[1,1],[0,2]]
    CHECK(h[0][1] == 1);
    CHECK(h[1][0] == 0);
    CHECK(h[1][1] == 2);

    auto d = smith_divisors(IMat{{Int(2), Int(0)}, {Int(0), Int(3)}});
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 1);
    CHECK(d[1] == 6);

    auto d2 = smith_divisors(IMat{{Int(2)}});
    REQUIRE(d2.size() == 1);
    CHECK(d2[0] == 2);
}

TEST_CASE("positive feasibility") {
    // u1 - u2 = 0 has positive solutions
    CHECK(positive_feasible({{1, -1}}, {0}));
    // u1 + u2 = 0 does not
    CHECK_FALSE(positive_feasible({{1, 1}}, {0}));
    // u1 + 2 u2 = 1 does
    CHECK(positive_feasible({{1, 2}}, {1}));
    // u = -1 does not
    CHECK_FALSE(positive_feasible({{1}}, {-1}));
    // empty support: feasible iff level zero
    CHECK(positive_feasible(QMat{QVec{}}, {0}));
    CHECK_FALSE(positive_feasible(QMat{QVec{}}, {1}));
}

TEST_CASE("fraction streams are injective") {
    std::vector<Rational> seen;
    for (int i = 0; i < 40; ++i) {
        Rational f = nth_fraction(i);
        CHECK(f > 0);
        CHECK(f < 1);
        for (const auto& s : seen) CHECK(s != f);
        seen.push_back(f);
    }
    std::vector<Rational> seen2;
    for (int i = 0; i < 40; ++i) {
        Rational f = nth_positive(i);
        CHECK(f > 0);
        for (const auto& s : seen2) CHECK(s != f);
        seen2.push_back(f);
    }
}
