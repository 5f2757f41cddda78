#include "plumblat/fupoly.hpp"
#include "plumblat/gf2.hpp"
#include "plumblat/monomial.hpp"
#include "plumblat/rational.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace plumblat;

TEST_CASE("rational parsing and printing") {
    CHECK(rat_to_string(rat_from_string("-3/6")) == "-1/2");
    CHECK(rat_from_string("7") == Rational(7));
    CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("x"), std::invalid_argument);
}

TEST_CASE("exact linear algebra") {
    QMat m = {{Rational(-1), Rational(1)}, {Rational(1), Rational(-3)}};
    CHECK(det(m) == Rational(2));
    QMat inv = inverse(m);
    QVec e = mat_vec(inv, {Rational(1), Rational(0)});
    CHECK(e[0] == Rational(-3, 2));
    CHECK(e[1] == Rational(-1, 2));
    CHECK(signature(m) == -2);
    CHECK(negative_definite(m));
    QMat pos = {{Rational(2)}};
    CHECK_FALSE(negative_definite(pos));
    CHECK(isqrt_floor(Int(35)) == 5);
    CHECK(isqrt_floor(Int(36)) == 6);
}

TEST_CASE("f2 rank and kernel: identity") {
    F2Matrix m(2, 2);
    m.set(0, 0);
    m.set(1, 1);
    auto rk = f2_rank_kernel(m);
    CHECK(rk.rank == 2);
    CHECK(rk.kernel.empty());
}

TEST_CASE("f2 rank and kernel: parity row") {
    F2Matrix m(1, 2);
    m.set(0, 0);
    m.set(0, 1);
    auto rk = f2_rank_kernel(m);
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel.size() == 1);
    CHECK(rk.kernel[0].get(0));
    CHECK(rk.kernel[0].get(1));
}

namespace {

// independent dense row-reduction oracle
size_t naive_rank(std::vector<std::vector<int>> rows) {
    size_t rank = 0;
    size_t cols = rows.empty() ? 0 : rows[0].size();
    for (size_t c = 0; c < cols; ++c) {
        size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && rows[r][c]) {
                for (size_t k = 0; k < cols; ++k) rows[r][k] ^= rows[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("f2 rank agrees with naive row reduction on random matrices") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        size_t r = 1 + rng() % 10, c = 1 + rng() % 10;
        F2Matrix m(r, c);
        std::vector<std::vector<int>> dense(r, std::vector<int>(c, 0));
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j)
                if (rng() & 1) {
                    m.set(i, j);
                    dense[i][j] = 1;
                }
        auto rk = f2_rank_kernel(m);
        CHECK(rk.rank == naive_rank(dense));
        CHECK(rk.rank + rk.kernel.size() == c);
        // kernel vectors annihilate the matrix
        auto cols = m.columns();
        for (const auto& kv : rk.kernel) {
            BitVec img(r);
            for (size_t j : kv.ones()) img ^= cols[j];
            CHECK_FALSE(img.any());
        }
    }
}

TEST_CASE("FUPoly arithmetic") {
    FUPoly a = FUPoly::monomial(3) + FUPoly::monomial(0);  // U^3 + 1
    FUPoly b = FUPoly::monomial(2) + FUPoly::monomial(1);  // U^2 + U
    auto [q, rem] = FUPoly::divmod(a, b);
    CHECK((q * b + rem) == a);
    CHECK(rem.zero() == false);
    CHECK(rem.max_deg() < b.max_deg());
    CHECK((b * b) == (FUPoly::monomial(4) + FUPoly::monomial(2)));
    // (U+1)^2 = U^2 + 1 over F2, so U^2+1 is divisible by U+1
    FUPoly c = FUPoly::monomial(2) + FUPoly::monomial(0);
    FUPoly d = FUPoly::monomial(1) + FUPoly::monomial(0);
    auto [q2, rem2] = FUPoly::divmod(c, d);
    CHECK(rem2.zero());
    CHECK(q2 == d);
}

TEST_CASE("fu_module_decompose: zero differential, one generator in grading 0") {
    std::vector<PolyUMatrix> d;  // single spot, no maps
    std::vector<std::vector<Rational>> grades = {{Rational(0)}};
    auto s = fu_module_decompose(d, grades, 0);
    CHECK(s.free_rank == 1);
    REQUIRE(s.free_tops.size() == 1);
    CHECK(s.free_tops[0] == Rational(0));
    CHECK(s.torsion.empty());
}

TEST_CASE("fu_module_decompose: U^2 map gives cyclic torsion") {
    // F2[U] -> F2[U] by U^2; homology at spot 0 is F2[U]/U^2
    std::vector<PolyUMatrix> d(1);
    d[0] = PolyUMatrix(1, 1);
    d[0].at(0, 0) = FUPoly::monomial(2);
    std::vector<std::vector<Rational>> grades = {{Rational(0)}, {Rational(-3)}};
    auto s0 = fu_module_decompose(d, grades, 0);
    CHECK(s0.free_rank == 0);
    REQUIRE(s0.torsion.size() == 1);
    CHECK(s0.torsion[0].first == 2);
    CHECK(s0.torsion[0].second == Rational(0));
    auto s1 = fu_module_decompose(d, grades, 1);
    CHECK(s1.free_rank == 0);
    CHECK(s1.torsion.empty());
}

TEST_CASE("fu_module_decompose: Hopf boundary piece leaves one tower") {
    // d[K,E2] = [K,E1] + U^n [K+2v0*,E1] with n = 1: two towers glued into one
    std::vector<PolyUMatrix> d(1);
    d[0] = PolyUMatrix(2, 1);
    d[0].at(0, 0) = FUPoly::monomial(0);
    d[0].at(1, 0) = FUPoly::monomial(1);
    std::vector<std::vector<Rational>> grades = {{Rational(-2), Rational(0)}, {Rational(-1)}};
    auto s = fu_module_decompose(d, grades, 0);
    CHECK(s.free_rank == 1);
    CHECK(s.free_tops == std::vector<Rational>{Rational(0)});
    CHECK(s.torsion.empty());
}

TEST_CASE("fu decomposition invariant under random F2[U]-basis change") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        // random graded 2-term complex: grades descending chains
        size_t n1 = 1 + rng() % 3, n0 = 1 + rng() % 3;
        std::vector<std::vector<Rational>> grades(2);
        for (size_t i = 0; i < n0; ++i) grades[0].push_back(Rational(int64_t(rng() % 5) * -2));
        for (size_t i = 0; i < n1; ++i) grades[1].push_back(Rational(int64_t(rng() % 5) * -2 - 1));
        std::vector<PolyUMatrix> d(1);
        d[0] = PolyUMatrix(n0, n1);
        for (size_t r = 0; r < n0; ++r)
            for (size_t c = 0; c < n1; ++c) {
                Rational diff = grades[1][c] - 1 - grades[0][r];
                if (is_integer(diff) && rat_num(diff) % 2 == 0 && diff <= 0 && (rng() & 1))
                    d[0].at(r, c) = FUPoly::monomial(uint32_t(-int64_t(rat_num(diff)) / 2));
            }
        auto base0 = fu_module_decompose(d, grades, 0);
        auto base1 = fu_module_decompose(d, grades, 1);
        // graded row operation row_j += U^{(g_j-g_i)/2} row_i (grade-compatible)
        auto d2 = d;
        for (int k = 0; k < 4; ++k) {
            size_t i = rng() % n0, j = rng() % n0;
            if (i == j) continue;
            Rational diff = grades[0][j] - grades[0][i];
            if (!is_integer(diff) || rat_num(diff) % 2 != 0 || diff < 0) continue;
            FUPoly f = FUPoly::monomial(uint32_t(int64_t(rat_num(diff)) / 2));
            for (size_t c = 0; c < n1; ++c) d2[0].at(j, c) += f * d2[0].at(i, c);
        }
        auto got0 = fu_module_decompose(d2, grades, 0);
        auto got1 = fu_module_decompose(d2, grades, 1);
        CHECK(base0.free_tops == got0.free_tops);
        CHECK(base0.torsion == got0.torsion);
        CHECK(base1.free_tops == got1.free_tops);
        CHECK(base1.torsion == got1.torsion);
    }
}

TEST_CASE("monomial degree law and u-weight") {
    Monomial a = Monomial::U(2, 0) * Monomial::V(2, 0);  // U1 V1
    CHECK(a.u_weight() == 1);
    CHECK(a.alexander(0) == 0);
    CHECK(a.gr_w() == -2);
    CHECK(a.gr_z() == -2);

    Monomial one = Monomial::one(2);
    CHECK((one * a) == a);

    // U1 V2 * U2 V1 = U1 V1 U2 V2, A = (0,0)
    Monomial x = Monomial::U(2, 0) * Monomial::V(2, 1);
    Monomial y = Monomial::U(2, 1) * Monomial::V(2, 0);
    Monomial z = monomial_mul(x, y);
    CHECK(z.alexander(0) == 0);
    CHECK(z.alexander(1) == 0);
    CHECK(z.u_weight() == 2);
    CHECK_THROWS_AS(monomial_mul(Monomial::one(1), Monomial::one(2)), std::invalid_argument);

    // degree law: gr_w - gr_z = 2 sum A on random monomials
    std::mt19937 rng(3);
    for (int t = 0; t < 100; ++t) {
        Monomial m = Monomial::one(3);
        for (size_t k = 0; k < 3; ++k) {
            m.u[k] = rng() % 4;
            m.v[k] = rng() % 4;
        }
        int64_t suma = m.alexander(0) + m.alexander(1) + m.alexander(2);
        CHECK(m.gr_w() - m.gr_z() == 2 * suma);
    }
}

TEST_CASE("multidegree invariants") {
    MultiDegree d{{Rational(1, 2), Rational(-1, 2)}, Rational(3)};
    CHECK(d.maslov_z() == Rational(3));
    Monomial m = Monomial::U(2, 0);
    MultiDegree s = d.shifted(m);
    CHECK(s.maslov_w == Rational(1));
    CHECK(s.alexander[0] == Rational(-1, 2));
    CHECK(s.torder() == d.torder() + 1);
}

TEST_CASE("graded vector space rejects duplicate labels") {
    GradedVectorSpace v;
    MultiDegree d{{Rational(0)}, Rational(0)};
    v.add(d, "x");
    CHECK_THROWS_AS(v.add(d, "x"), std::invalid_argument);
    CHECK(v.dim(d) == 1);
}
