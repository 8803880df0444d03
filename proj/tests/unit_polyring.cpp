#include "doctest.h"
#include "dynres/polyring.hpp"

using namespace dynres;

namespace {

RingPtr xy_ring() {
    return make_ring(2, {"x", "y"}, {{1, 0}, {0, 1}});
}

/// Generic skew 4x4 on variables p12..p34 (row-major upper triangle).
PolyMatrix skew4(RingPtr& ring) {
    std::vector<std::string> names;
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            names.push_back("p" + std::to_string(i) + std::to_string(j));
    ring = make_ring(1, names, std::vector<std::vector<int>>(6, {1}));
    PolyMatrix m(ring, 4, 4);
    int v = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j, ++v) {
            m.set(i, j, SparsePoly::variable(ring, v));
            m.set(j, i, SparsePoly::variable(ring, v, Rat(-1)));
        }
    return m;
}

}  // namespace

TEST_CASE("polynomial arithmetic is exact") {
    auto r = xy_ring();
    auto x = SparsePoly::variable(r, 0);
    auto y = SparsePoly::variable(r, 1);
    auto p = (x + y) * (x + y);
    auto q = x * x + rat(2) * x * y + y * y;
    CHECK(p == q);
    CHECK((p - q).is_zero());
    CHECK(p.term_count() == 3);
    CHECK((x - x).is_zero());
    CHECK((-x + x).is_zero());
}

TEST_CASE("printing uses descending graded-lex with signs folded in") {
    auto r = xy_ring();
    auto x = SparsePoly::variable(r, 0);
    auto y = SparsePoly::variable(r, 1);
    auto p = x * x + rat(2) * x * y - SparsePoly::constant(r, rat(3));
    CHECK(p.str() == "x^2 + 2*x*y - 3");
    CHECK((-x).str() == "-x");
    CHECK(SparsePoly::zero(r).str() == "0");
    CHECK(SparsePoly::constant(r, rat(-1, 2)).str() == "-1/2");
    CHECK((rat(1, 2) * x * y).str() == "1/2*x*y");
}

TEST_CASE("derivatives and variable killing") {
    auto r = xy_ring();
    auto x = SparsePoly::variable(r, 0);
    auto y = SparsePoly::variable(r, 1);
    auto p = x * x * y + rat(3) * y;
    CHECK(p.derivative(0) == rat(2) * x * y);
    CHECK(p.derivative(1) == x * x + SparsePoly::constant(r, rat(3)));
    CHECK(p.kill_variables({0}) == rat(3) * y);
    CHECK(p.kill_variables({1}).is_zero());
}

TEST_CASE("multidegrees and homogeneity") {
    auto r = xy_ring();
    auto x = SparsePoly::variable(r, 0);
    auto y = SparsePoly::variable(r, 1);
    auto h = is_homogeneous(x * y);
    CHECK(h.kind == Homogeneity::Homogeneous);
    CHECK(h.degree == std::vector<int>{1, 1});
    CHECK(is_homogeneous(x + y).kind == Homogeneity::Inhomogeneous);
    CHECK(is_homogeneous(SparsePoly::zero(r)).kind == Homogeneity::ZeroAnyDegree);
    CHECK(is_homogeneous(x * x + x * x * y).kind == Homogeneity::Inhomogeneous);
}

TEST_CASE("coarse degrees weight each variable") {
    auto r = make_ring(1, {"a", "b"}, {{1}, {2}}, {1, 2});
    auto a = SparsePoly::variable(r, 0);
    auto b = SparsePoly::variable(r, 1);
    auto m = (a * a * b).terms.begin()->first;
    CHECK(SparsePoly::zero(r).coarse_degree(m) == 4);
}

TEST_CASE("matrix product, transpose and term counts") {
    auto r = xy_ring();
    auto x = SparsePoly::variable(r, 0);
    auto y = SparsePoly::variable(r, 1);
    PolyMatrix m(r, 2, 2);
    m.set(0, 0, x);
    m.set(0, 1, y);
    m.set(1, 0, -y);
    m.set(1, 1, x);
    PolyMatrix mt = m.transpose();
    PolyMatrix prod = m * mt;
    CHECK(prod.at(0, 0) == x * x + y * y);
    CHECK(prod.at(0, 1).is_zero());
    CHECK(prod.at(1, 0).is_zero());
    CHECK(prod.at(1, 1) == x * x + y * y);
    auto counts = m.term_count_table();
    CHECK(counts == std::vector<std::vector<int>>{{1, 1}, {1, 1}});
}

TEST_CASE("pfaffians expand along the first row") {
    RingPtr ring;
    PolyMatrix m = skew4(ring);
    auto var = [&](const std::string& n) {
        return SparsePoly::variable(ring, ring->var(n));
    };
    SparsePoly pf = pfaffian(m);
    SparsePoly expect =
        var("p12") * var("p34") - var("p13") * var("p24") + var("p14") * var("p23");
    CHECK(pf == expect);
    CHECK(sub_pfaffian(m, {0, 1}) == var("p12"));
    CHECK(sub_pfaffian(m, {1, 3}) == var("p24"));
    CHECK(sub_pfaffian(m, {}) == SparsePoly::constant(ring, rat(1)));

    // Pf^2 = det, exactly.
    CHECK(pf * pf == det_symbolic(m));

    CHECK_THROWS_AS(sub_pfaffian(m, {0, 1, 2}), ValidationError);
    CHECK_THROWS_AS(sub_pfaffian(m, {1, 0}), ValidationError);
    PolyMatrix bad(ring, 2, 2);
    bad.set(0, 1, var("p12"));
    CHECK_THROWS_AS(pfaffian(bad), ValidationError);  // not skew
}

TEST_CASE("finite-field evaluation and rank") {
    RingPtr ring;
    PolyMatrix m = skew4(ring);
    // Generic point: full rank 4; dropping to the zero matrix kills the rank.
    std::vector<std::int64_t> pt{3, 1, 4, 1, 5, 9};
    CHECK(rank_at_point(m, pt) == 4);
    CHECK(rank_at_point(m, {0, 0, 0, 0, 0, 0}) == 0);

    auto r = xy_ring();
    auto x = SparsePoly::variable(r, 0);
    auto y = SparsePoly::variable(r, 1);
    auto p = x * x - y;
    CHECK(p.eval_mod_p({5, 3}, 7) == 1);  // 25 - 3 = 22 = 1 (mod 7)
    CHECK(p.eval({rat(1, 2), rat(1, 4)}).get_num() == 0);
    CHECK((rat(1, 3) * x).eval_mod_p({1, 0}, 7) == 5);  // 3 * 5 = 15 = 1 (mod 7)
}
