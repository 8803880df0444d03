#include "doctest.h"

#include "dynres/catalog.hpp"

#include <set>
#include <string>
#include <vector>

using namespace dynres;

namespace {

// Skew matrix whose (i, j) entry for i < j is sign * the ring variable
// named <prefix><i><j> (printed 1-based indices).
PolyMatrix skew_of_variables(const RingPtr& ring, const std::string& prefix, int n, int sign) {
    PolyMatrix B(ring, n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const int v = ring->var(prefix + std::to_string(i) + std::to_string(j));
            SparsePoly x = SparsePoly::variable(ring, v, Rat(sign));
            B.set(i - 1, j - 1, x);
            B.set(j - 1, i - 1, -x);
        }
    return B;
}

// Principal sub-Pfaffian over a 1-based index set.
SparsePoly P(const PolyMatrix& B, const std::vector<int>& I) {
    std::vector<int> idx;
    for (int v : I) idx.push_back(v - 1);
    return sub_pfaffian(B, idx);
}

// [1..n] minus the listed indices.
std::vector<int> without(int n, std::vector<int> drop) {
    std::vector<int> out;
    for (int v = 1; v <= n; ++v)
        if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
    return out;
}

// The whole matrix must equal scalar * expected for one nonzero rational.
void check_matches_up_to_scalar(const PolyMatrix& built, const PolyMatrix& expected) {
    REQUIRE(built.rows == expected.rows);
    REQUIRE(built.cols == expected.cols);
    REQUIRE(!expected.entries.empty());
    Rat s;
    bool have = false;
    for (const auto& [rc, e] : expected.entries) {
        SparsePoly b = built.at(rc.first, rc.second);
        CAPTURE(rc.first);
        CAPTURE(rc.second);
        REQUIRE(!b.is_zero());
        if (!have) {
            s = b.terms.begin()->second / e.terms.begin()->second;
            have = true;
        }
        SparsePoly want = e * s;
        const std::string bs = b.str(), ws = want.str();
        CAPTURE(bs);
        CAPTURE(ws);
        CHECK(b == want);
    }
    for (const auto& [rc, b] : built.entries) {
        CAPTURE(rc.first);
        CAPTURE(rc.second);
        SparsePoly e = expected.at(rc.first, rc.second);
        CHECK(!e.is_zero());
    }
}

void check_composes_to_zero(const GradedComplex& gc) {
    for (size_t k = 0; k + 1 < gc.d.size(); ++k) {
        if (!gc.built[k] || !gc.built[k + 1]) continue;
        PolyMatrix prod = gc.d[k] * gc.d[k + 1];
        CHECK(prod.is_zero());
    }
}

// Every entry is multihomogeneous of degree (column twist - row twist).
void check_twist_degrees(const GradedComplex& gc) {
    for (size_t k = 0; k < gc.d.size(); ++k) {
        if (!gc.built[k]) continue;
        for (const auto& [rc, p] : gc.d[k].entries) {
            Homogeneity h = is_homogeneous(p);
            CAPTURE(k);
            CAPTURE(rc.first);
            CAPTURE(rc.second);
            REQUIRE(h.kind == Homogeneity::Homogeneous);
            std::vector<int> want(gc.ring->rank, 0);
            for (int i = 0; i < gc.ring->rank; ++i)
                want[i] = gc.twists[k + 1][rc.second][i] - gc.twists[k][rc.first][i];
            CHECK(h.degree == want);
        }
    }
}

}  // namespace

TEST_CASE("catalog lists every supported format exactly once") {
    auto cat = format_catalog();
    CHECK(cat.size() == 20);
    std::set<std::string> ids;
    for (const auto& f : cat) {
        CHECK(ids.insert(f.id).second);
        CHECK((f.length == 3 ? f.plans.size() == 3 : f.plans.size() == 2));
        CHECK(f.betti.size() == static_cast<size_t>(f.length + 1));
    }
    CHECK(find_format("D6:6,5").id == "D6:6,5");
    CHECK_THROWS_AS(find_format("Z9:1,1"), ValidationError);
}

TEST_CASE("even orthogonal pair formats match the bordered skew normal form") {
    for (int n : {4, 6, 8}) {
        CAPTURE(n);
        FormatSpec fmt = dn_pair_format(n);
        GradedComplex gc = build_format(fmt);
        REQUIRE(gc.complete());

        const RingPtr& ring = gc.ring;
        PolyMatrix B = skew_of_variables(ring, "b", n, +1);

        // Middle matrix: the first n-1 columns of -B, then a constant column.
        PolyMatrix e2(ring, n, n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n - 1; ++j) e2.set(i - 1, j - 1, -B.at(i - 1, j - 1));
        e2.set(n - 1, n - 1, SparsePoly::constant(ring, Rat(-1)));
        check_matches_up_to_scalar(gc.d[1], e2);

        // Last matrix: alternating sub-Pfaffians over [n-1], then the full one.
        PolyMatrix e3(ring, n, 1);
        for (int i = 1; i <= n - 1; ++i) {
            SparsePoly p = P(B, without(n - 1, {i}));
            e3.set(i - 1, 0, i % 2 == 1 ? p : -p);
        }
        e3.set(n - 1, 0, P(B, without(n, {})));
        check_matches_up_to_scalar(gc.d[2], e3);

        // First matrix: the complementary alternating sub-Pfaffian row.
        PolyMatrix e1(ring, 1, n);
        for (int i = 1; i <= n - 1; ++i) {
            SparsePoly p = P(B, without(n - 1, {i}));
            e1.set(0, i - 1, i % 2 == 1 ? -p : p);
        }
        check_matches_up_to_scalar(gc.d[0], e1);

        check_composes_to_zero(gc);
        check_twist_degrees(gc);
    }
}

TEST_CASE("odd orthogonal pair formats are skew with sub-Pfaffian outer maps") {
    for (int n : {5, 7}) {
        CAPTURE(n);
        FormatSpec fmt = dn_pair_format(n);
        GradedComplex gc = build_format(fmt);
        REQUIRE(gc.complete());

        const RingPtr& ring = gc.ring;
        const PolyMatrix& d2 = gc.d[1];
        REQUIRE(d2.rows == n);
        REQUIRE(d2.cols == n);

        // The middle matrix is skew with every pair variable appearing once.
        for (int i = 0; i < n; ++i) {
            CHECK(d2.at(i, i).is_zero());
            for (int j = i + 1; j < n; ++j) {
                CAPTURE(i);
                CAPTURE(j);
                SparsePoly sum = d2.at(i, j) + d2.at(j, i);
                CHECK(sum.is_zero());
                SparsePoly x = SparsePoly::variable(
                    ring, ring->var("b" + std::to_string(i + 1) + std::to_string(j + 1)));
                CHECK((d2.at(i, j) == x || d2.at(i, j) == -x));
            }
        }

        // Outer maps: alternating sub-Pfaffians of the middle matrix itself.
        PolyMatrix e3(ring, n, 1);
        for (int i = 1; i <= n; ++i) {
            SparsePoly p = P(d2, without(n, {i}));
            e3.set(i - 1, 0, i % 2 == 1 ? p : -p);
        }
        check_matches_up_to_scalar(gc.d[2], e3);
        check_matches_up_to_scalar(gc.d[0], e3.transpose());

        check_composes_to_zero(gc);
        check_twist_degrees(gc);
    }
}

TEST_CASE("even orthogonal skew formats match the printed sub-Pfaffian matrices") {
    for (int n : {4, 6, 8}) {
        CAPTURE(n);
        FormatSpec fmt = dn_skew_format(n);
        GradedComplex gc = build_format(fmt);
        REQUIRE(gc.complete());

        const RingPtr& ring = gc.ring;
        PolyMatrix B = skew_of_variables(ring, "x", n, -1);

        // Last matrix: the trailing n-3 columns of B.
        PolyMatrix e3(ring, n, n - 3);
        for (int i = 1; i <= n; ++i)
            for (int k = 4; k <= n; ++k) e3.set(i - 1, k - 4, B.at(i - 1, k - 1));
        check_matches_up_to_scalar(gc.d[2], e3);

        // Middle matrix: three alternating sub-Pfaffian rows and one row of
        // sub-Pfaffians avoiding the first three indices.
        PolyMatrix e2(ring, 4, n);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                SparsePoly p = P(B, without(n, {i, j}));
                int sgn = ((i + j + 1) % 2 == 0 ? 1 : -1) * (j > i ? 1 : -1);
                e2.set(i - 1, j - 1, sgn == 1 ? p : -p);
            }
        for (int j = 4; j <= n; ++j) {
            SparsePoly p = P(B, without(n, {1, 2, 3, j}));
            e2.set(3, j - 1, j % 2 == 0 ? p : -p);
        }
        check_matches_up_to_scalar(gc.d[1], e2);

        // First matrix.
        PolyMatrix e1(ring, 1, 4);
        e1.set(0, 0, -P(B, without(n, {2, 3})));
        e1.set(0, 1, -P(B, without(n, {1, 3})));
        e1.set(0, 2, -P(B, without(n, {1, 2})));
        e1.set(0, 3, P(B, without(n, {})));
        check_matches_up_to_scalar(gc.d[0], e1);

        check_composes_to_zero(gc);
        check_twist_degrees(gc);
    }
}

TEST_CASE("odd orthogonal skew formats match the printed sub-Pfaffian matrices") {
    for (int n : {5, 7}) {
        CAPTURE(n);
        FormatSpec fmt = dn_skew_format(n);
        GradedComplex gc = build_format(fmt);
        REQUIRE(gc.complete());

        const RingPtr& ring = gc.ring;
        PolyMatrix B = skew_of_variables(ring, "x", n, -1);

        // Last matrix: the trailing n-3 columns of B.
        PolyMatrix e3(ring, n, n - 3);
        for (int i = 1; i <= n; ++i)
            for (int k = 4; k <= n; ++k) e3.set(i - 1, k - 4, B.at(i - 1, k - 1));
        check_matches_up_to_scalar(gc.d[2], e3);

        // Middle matrix: one full alternating sub-Pfaffian row and three rows
        // avoiding pairs from the first three indices.
        PolyMatrix e2(ring, 4, n);
        for (int j = 1; j <= n; ++j) {
            SparsePoly p = P(B, without(n, {j}));
            e2.set(0, j - 1, j % 2 == 1 ? p : -p);
        }
        for (int j = 3; j <= n; ++j) {
            SparsePoly p = P(B, without(n, {1, 2, j}));
            e2.set(1, j - 1, j % 2 == 1 ? p : -p);
        }
        e2.set(2, 1, P(B, without(n, {1, 2, 3})));
        for (int j = 4; j <= n; ++j) {
            SparsePoly p = P(B, without(n, {1, 3, j}));
            e2.set(2, j - 1, j % 2 == 0 ? p : -p);
        }
        e2.set(3, 0, P(B, without(n, {1, 2, 3})));
        for (int j = 4; j <= n; ++j) {
            SparsePoly p = P(B, without(n, {2, 3, j}));
            e2.set(3, j - 1, j % 2 == 1 ? p : -p);
        }
        check_matches_up_to_scalar(gc.d[1], e2);

        // First matrix.
        PolyMatrix e1(ring, 1, 4);
        e1.set(0, 0, -P(B, without(n, {1, 2, 3})));
        e1.set(0, 1, P(B, without(n, {3})));
        e1.set(0, 2, P(B, without(n, {2})));
        e1.set(0, 3, P(B, without(n, {1})));
        check_matches_up_to_scalar(gc.d[0], e1);

        check_composes_to_zero(gc);
        check_twist_degrees(gc);
    }
}
