#pragma once

// Hand-entered resolution fixtures: the explicit T(3,3) and T(4,4) free
// complexes, and the two-generator/three-generator F2[U,V] complexes used to
// certify inequivalence detection.

#include "plumblat/presentation.hpp"
#include "plumblat/resolution.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace fixtures {

using namespace plumblat;

// Derives the degrees of a stage from its map into the previous stage,
// checking homogeneity of every column.
inline FreeStage derive_stage(const FreeStage& prev, const FreeMap& mp,
                              const std::vector<std::string>& labels) {
    FreeStage st;
    st.labels = labels;
    for (const auto& col : mp.columns) {
        if (col.zero()) throw std::logic_error("fixture column is zero");
        MultiDegree d = prev.degrees[col.terms[0].first].shifted(col.terms[0].second);
        for (const auto& [g, m] : col.terms)
            if (!(prev.degrees[g].shifted(m) == d))
                throw std::logic_error("fixture column not homogeneous");
        st.degrees.push_back(d);
    }
    return st;
}

// ---- T(3,3), the explicit free complex ----
// C0 = R^3 (X1,X2,X3); C1 = R^8 (b1..b3, B1..B3, Z1, Z2) with Z3 = Z1+Z2;
// C2 = R^6 (c1..c3, d1..d3); C3 = R (e).
inline FreeResolution t33_fixture() {
    const size_t n = 3;
    FreeResolution r;
    r.ell = n;
    ModulePresentation base = torus_presentation(3);
    FreeStage c0;
    for (const auto& g : base.generators) {
        c0.labels.push_back(g.label);
        c0.degrees.push_back(g.degree);
    }

    auto U = [&](size_t i) { return Monomial::U(n, i - 1); };
    auto V = [&](size_t i) { return Monomial::V(n, i - 1); };
    const size_t X1 = 0, X2 = 1, X3 = 2;

    FreeMap d1;
    std::map<std::string, size_t> c1i;
    auto add1 = [&](const std::string& label, FreeElement e) {
        c1i[label] = d1.columns.size();
        e.normalize();
        d1.columns.push_back(std::move(e));
    };
    for (size_t i = 1; i <= 3; ++i) {
        size_t j = (i % 3) + 1, k = (j % 3) + 1;  // the two others
        FreeElement b;
        b.add(X1, U(i));
        b.add(X2, V(j) * V(k));
        add1("b" + std::to_string(i), b);
    }
    for (size_t i = 1; i <= 3; ++i) {
        size_t j = (i % 3) + 1, k = (j % 3) + 1;
        FreeElement B;
        B.add(X3, V(i));
        B.add(X2, U(j) * U(k));
        add1("B" + std::to_string(i), B);
    }
    {
        FreeElement z1;
        z1.add(X2, U(2) * V(2));
        z1.add(X2, U(3) * V(3));
        add1("Z1", z1);
        FreeElement z2;
        z2.add(X2, U(1) * V(1));
        z2.add(X2, U(3) * V(3));
        add1("Z2", z2);
    }
    std::vector<std::string> c1labels = {"b1", "b2", "b3", "B1", "B2", "B3", "Z1", "Z2"};
    FreeStage c1 = derive_stage(c0, d1, c1labels);

    // Z_k as elements of C1 (Z3 is the sum of the two generators)
    auto Z = [&](size_t k) {
        FreeElement e;
        if (k == 1) e.add(c1i.at("Z1"), Monomial::one(n));
        else if (k == 2) e.add(c1i.at("Z2"), Monomial::one(n));
        else {
            e.add(c1i.at("Z1"), Monomial::one(n));
            e.add(c1i.at("Z2"), Monomial::one(n));
        }
        return e;
    };

    FreeMap d2;
    std::map<std::string, size_t> c2i;
    std::vector<std::string> c2labels;
    auto add2 = [&](const std::string& label, FreeElement e) {
        c2i[label] = d2.columns.size();
        c2labels.push_back(label);
        e.normalize();
        d2.columns.push_back(std::move(e));
    };
    for (size_t k = 1; k <= 3; ++k) {
        size_t i = (k % 3) + 1, j = (i % 3) + 1;  // {i,j,k} = {1,2,3}
        FreeElement c;
        c.add(c1i.at("b" + std::to_string(j)), U(i));
        c.add(c1i.at("b" + std::to_string(i)), U(j));
        for (const auto& [g, m] : Z(k).terms) c.add(g, m * V(k));
        add2("c" + std::to_string(k), c);
    }
    for (size_t k = 1; k <= 3; ++k) {
        size_t i = (k % 3) + 1, j = (i % 3) + 1;
        FreeElement d;
        d.add(c1i.at("B" + std::to_string(j)), V(i));
        d.add(c1i.at("B" + std::to_string(i)), V(j));
        for (const auto& [g, m] : Z(k).terms) d.add(g, m * U(k));
        add2("d" + std::to_string(k), d);
    }
    FreeStage c2 = derive_stage(c1, d2, c2labels);

    FreeMap d3;
    {
        FreeElement e;
        for (size_t i = 1; i <= 3; ++i) {
            e.add(c2i.at("c" + std::to_string(i)), U(i));
            e.add(c2i.at("d" + std::to_string(i)), V(i));
        }
        e.normalize();
        d3.columns.push_back(std::move(e));
    }
    FreeStage c3 = derive_stage(c2, d3, {"e"});

    r.stages = {c0, c1, c2, c3};
    r.maps = {d1, d2, d3};
    r.box = default_box(base, 4);
    return r;
}

// ---- T(4,4), the explicit free complex ----
inline FreeResolution t44_fixture() {
    const size_t n = 4;
    FreeResolution r;
    r.ell = n;
    ModulePresentation base = torus_presentation(4);
    FreeStage c0;
    for (const auto& g : base.generators) {
        c0.labels.push_back(g.label);
        c0.degrees.push_back(g.degree);
    }
    auto U = [&](size_t i) { return Monomial::U(n, i - 1); };
    auto V = [&](size_t i) { return Monomial::V(n, i - 1); };
    const size_t X1 = 0, X2 = 1, X3 = 2, X4 = 3;

    // --- C1 ---
    FreeMap d1;
    std::map<std::string, size_t> c1i;
    std::vector<std::string> c1labels;
    auto add1 = [&](const std::string& label, FreeElement e) {
        c1i[label] = d1.columns.size();
        c1labels.push_back(label);
        e.normalize();
        d1.columns.push_back(std::move(e));
    };
    for (size_t k : {2, 3})
        for (size_t i = 1; i <= 3; ++i) {
            FreeElement z;
            Monomial uv1 = U(i) * V(i), uv2 = U(i + 1) * V(i + 1);
            size_t X = (k == 2) ? X2 : X3;
            z.add(X, uv1);
            z.add(X, uv2);
            add1("Z" + std::to_string(k) + "_" + std::to_string(i) + std::to_string(i + 1), z);
        }
    for (size_t i = 1; i <= 4; ++i) {
        FreeElement a;
        a.add(X1, U(i));
        Monomial vs = Monomial::one(n);
        for (size_t j = 1; j <= 4; ++j)
            if (j != i) vs = vs * V(j);
        a.add(X2, vs);
        add1("a" + std::to_string(i), a);
    }
    for (size_t i = 1; i <= 4; ++i)
        for (size_t j = i + 1; j <= 4; ++j) {
            FreeElement B;
            B.add(X2, U(i) * U(j));
            Monomial vs = Monomial::one(n);
            for (size_t t = 1; t <= 4; ++t)
                if (t != i && t != j) vs = vs * V(t);
            B.add(X3, vs);
            add1("B" + std::to_string(i) + std::to_string(j), B);
        }
    for (size_t i = 1; i <= 4; ++i) {
        FreeElement A;
        Monomial us = Monomial::one(n);
        for (size_t j = 1; j <= 4; ++j)
            if (j != i) us = us * U(j);
        A.add(X3, us);
        A.add(X4, V(i));
        add1("A" + std::to_string(i), A);
    }
    FreeStage c1 = derive_stage(c0, d1, c1labels);
    if (c1.size() != 20) throw std::logic_error("T44 C1 size");

    // Z^k_{ij} for arbitrary i<j as elements of C1 (telescoping sums), and the
    // symmetric-index convention B_{ij} = B_{ji}
    auto Zel = [&](size_t k, size_t i, size_t j) {
        FreeElement e;
        for (size_t t = i; t < j; ++t)
            e.add(c1i.at("Z" + std::to_string(k) + "_" + std::to_string(t) + std::to_string(t + 1)),
                  Monomial::one(n));
        return e;
    };
    auto Bidx = [&](size_t i, size_t j) {
        if (i > j) std::swap(i, j);
        return c1i.at("B" + std::to_string(i) + std::to_string(j));
    };

    // --- C2 ---
    FreeMap d2;
    std::map<std::string, size_t> c2i;
    std::vector<std::string> c2labels;
    auto add2 = [&](const std::string& label, FreeElement e) {
        c2i[label] = d2.columns.size();
        c2labels.push_back(label);
        e.normalize();
        d2.columns.push_back(std::move(e));
    };
    for (size_t i = 1; i <= 4; ++i)
        for (size_t j = i + 1; j <= 4; ++j) {
            FreeElement a;
            a.add(c1i.at("a" + std::to_string(i)), U(j));
            a.add(c1i.at("a" + std::to_string(j)), U(i));
            Monomial vs = Monomial::one(n);
            for (size_t t = 1; t <= 4; ++t)
                if (t != i && t != j) vs = vs * V(t);
            for (const auto& [g, m] : Zel(2, i, j).terms) a.add(g, m * vs);
            add2("a" + std::to_string(i) + std::to_string(j), a);
        }
    for (size_t i = 1; i <= 4; ++i)
        for (size_t j = i + 1; j <= 4; ++j) {
            FreeElement A;
            A.add(c1i.at("A" + std::to_string(i)), V(j));
            A.add(c1i.at("A" + std::to_string(j)), V(i));
            Monomial us = Monomial::one(n);
            for (size_t t = 1; t <= 4; ++t)
                if (t != i && t != j) us = us * U(t);
            for (const auto& [g, m] : Zel(3, i, j).terms) A.add(g, m * us);
            add2("A" + std::to_string(i) + std::to_string(j), A);
        }
    // generator choices for c^{ij}_k and C^k_{ij}
    auto cname = [](size_t k, size_t i, size_t j) {
        return "c^" + std::to_string(i) + std::to_string(j) + "_" + std::to_string(k);
    };
    auto Cname = [](size_t k, size_t i, size_t j) {
        return "C^" + std::to_string(k) + "_" + std::to_string(i) + std::to_string(j);
    };
    auto build_c = [&](size_t k, size_t i, size_t j) {
        // d2 c^{ij}_k = V_i B_{ik} + V_j B_{jk} + U_k Z^2_{ij}
        FreeElement e;
        e.add(Bidx(i, k), V(i));
        e.add(Bidx(j, k), V(j));
        for (const auto& [g, m] : Zel(2, i, j).terms) e.add(g, m * U(k));
        return e;
    };
    auto build_C = [&](size_t k, size_t i, size_t j) {
        // d2 C^k_{ij} = U_j B_{ik} + U_i B_{jk} + V_l Z^3_{ij}
        size_t l = 10 - k - i - j;
        FreeElement e;
        e.add(Bidx(i, k), U(j));
        e.add(Bidx(j, k), U(i));
        for (const auto& [g, m] : Zel(3, i, j).terms) e.add(g, m * V(l));
        return e;
    };
    // chosen c-generators: c^{23}_1, c^{34}_1, c^{13}_2, c^{34}_2, c^{12}_3,
    // c^{24}_3, c^{12}_4, c^{23}_4
    const std::vector<std::array<size_t, 3>> cgens = {
        {1, 2, 3}, {1, 3, 4}, {2, 1, 3}, {2, 3, 4}, {3, 1, 2}, {3, 2, 4}, {4, 1, 2}, {4, 2, 3}};
    for (auto [k, i, j] : cgens) add2(cname(k, i, j), build_c(k, i, j));
    // chosen C-generators: C^1_23, C^2_13, C^1_24, C^4_12, C^1_34, C^3_14,
    // C^2_34, C^3_24
    const std::vector<std::array<size_t, 3>> Cgens = {
        {1, 2, 3}, {2, 1, 3}, {1, 2, 4}, {4, 1, 2}, {1, 3, 4}, {3, 1, 4}, {2, 3, 4}, {3, 2, 4}};
    for (auto [k, i, j] : Cgens) add2(Cname(k, i, j), build_C(k, i, j));
    FreeStage c2 = derive_stage(c1, d2, c2labels);
    if (c2.size() != 28) throw std::logic_error("T44 C2 size");

    // non-generator c/C indices as sums of the two generators with the same
    // subscript / superscript family
    auto cel = [&](size_t k, size_t i, size_t j) {
        FreeElement e;
        auto it = c2i.find(cname(k, i, j));
        if (it != c2i.end()) {
            e.add(it->second, Monomial::one(n));
            return e;
        }
        // the missing pair is the sum of the two chosen ones for this k
        for (auto [kk, ii, jj] : cgens)
            if (kk == k) e.add(c2i.at(cname(kk, ii, jj)), Monomial::one(n));
        return e;
    };
    auto Cel = [&](size_t k, size_t i, size_t j) {
        FreeElement e;
        auto it = c2i.find(Cname(k, i, j));
        if (it != c2i.end()) {
            e.add(it->second, Monomial::one(n));
            return e;
        }
        // grouped by the 3-element set {i,j,k}: the missing permutation is
        // the sum of the two chosen ones
        for (auto [kk, ii, jj] : Cgens)
            if (kk + ii + jj == k + i + j && kk * ii * jj == k * i * j)
                e.add(c2i.at(Cname(kk, ii, jj)), Monomial::one(n));
        return e;
    };

    // --- C3 ---
    FreeMap d3;
    std::map<std::string, size_t> c3i;
    std::vector<std::string> c3labels;
    auto add3 = [&](const std::string& label, FreeElement e) {
        c3i[label] = d3.columns.size();
        c3labels.push_back(label);
        e.normalize();
        d3.columns.push_back(std::move(e));
    };
    auto aidx2 = [&](size_t i, size_t j) {
        if (i > j) std::swap(i, j);
        return c2i.at("a" + std::to_string(i) + std::to_string(j));
    };
    auto Aidx2 = [&](size_t i, size_t j) {
        if (i > j) std::swap(i, j);
        return c2i.at("A" + std::to_string(i) + std::to_string(j));
    };
    for (size_t i = 1; i <= 4; ++i)
        for (size_t j = i + 1; j <= 4; ++j)
            for (size_t k = j + 1; k <= 4; ++k) {
                size_t l = 10 - i - j - k;
                FreeElement e;
                e.add(aidx2(j, k), U(i));
                e.add(aidx2(i, k), U(j));
                e.add(aidx2(i, j), U(k));
                // V_l (V_i c^{jk}_i + V_j c^{ik}_j + V_k c^{ij}_k)
                for (const auto& [g, m] : cel(i, j, k).terms) e.add(g, m * V(l) * V(i));
                for (const auto& [g, m] : cel(j, i, k).terms) e.add(g, m * V(l) * V(j));
                for (const auto& [g, m] : cel(k, i, j).terms) e.add(g, m * V(l) * V(k));
                add3("a" + std::to_string(i) + std::to_string(j) + std::to_string(k), e);
            }
    for (size_t i = 1; i <= 4; ++i)
        for (size_t j = i + 1; j <= 4; ++j)
            for (size_t k = j + 1; k <= 4; ++k) {
                size_t l = 10 - i - j - k;
                FreeElement e;
                e.add(Aidx2(j, k), V(i));
                e.add(Aidx2(i, k), V(j));
                e.add(Aidx2(i, j), V(k));
                // U_l (U_i C^l_{jk} + U_j C^l_{ik} + U_k C^l_{ij})
                for (const auto& [g, m] : Cel(l, j, k).terms) e.add(g, m * U(l) * U(i));
                for (const auto& [g, m] : Cel(l, i, k).terms) e.add(g, m * U(l) * U(j));
                for (const auto& [g, m] : Cel(l, i, j).terms) e.add(g, m * U(l) * U(k));
                add3("A" + std::to_string(i) + std::to_string(j) + std::to_string(k), e);
            }
    for (size_t i = 1; i <= 4; ++i)
        for (size_t j = i + 1; j <= 4; ++j) {
            // {k,l} = complement of {i,j}, k < l
            size_t k = 0, l = 0;
            for (size_t t = 1; t <= 4; ++t)
                if (t != i && t != j) (k ? l : k) = t;
            FreeElement e;
            for (const auto& [g, m] : Cel(k, i, j).terms) e.add(g, m * V(k));
            for (const auto& [g, m] : Cel(l, i, j).terms) e.add(g, m * V(l));
            for (const auto& [g, m] : cel(j, k, l).terms) e.add(g, m * U(i));
            for (const auto& [g, m] : cel(i, k, l).terms) e.add(g, m * U(j));
            add3("B'" + std::to_string(i) + std::to_string(j), e);
        }
    FreeStage c3 = derive_stage(c2, d3, c3labels);
    if (c3.size() != 14) throw std::logic_error("T44 C3 size");

    // --- C4 ---
    FreeMap d4;
    {
        FreeElement d;
        for (size_t i = 1; i <= 4; ++i) {
            std::string rest;
            for (size_t t = 1; t <= 4; ++t)
                if (t != i) rest += std::to_string(t);
            d.add(c3i.at("a" + rest), U(i));
        }
        for (size_t i = 1; i <= 4; ++i)
            for (size_t j = i + 1; j <= 4; ++j)
                d.add(c3i.at("B'" + std::to_string(i) + std::to_string(j)), V(i) * V(j));
        d.normalize();
        d4.columns.push_back(std::move(d));

        FreeElement D;
        for (size_t i = 1; i <= 4; ++i) {
            std::string rest;
            for (size_t t = 1; t <= 4; ++t)
                if (t != i) rest += std::to_string(t);
            D.add(c3i.at("A" + rest), V(i));
        }
        for (size_t i = 1; i <= 4; ++i)
            for (size_t j = i + 1; j <= 4; ++j) {
                size_t k = 0, l = 0;
                for (size_t t = 1; t <= 4; ++t)
                    if (t != i && t != j) (k ? l : k) = t;
                D.add(c3i.at("B'" + std::to_string(k) + std::to_string(l)), U(i) * U(j));
            }
        D.normalize();
        d4.columns.push_back(std::move(D));
    }
    FreeStage c4 = derive_stage(c3, d4, {"d1234", "D1234"});

    r.stages = {c0, c1, c2, c3, c4};
    r.maps = {d1, d2, d3, d4};
    r.box = default_box(base, 5);
    return r;
}

// ---- the two F2[U,V] complexes with isomorphic homology but different
// mod-(U,V) ranks ----
inline FreeResolution square_complex_C() {
    FreeResolution r;
    r.ell = 1;
    FreeStage s0, s1, s2;
    s0.labels = {"z", "u"};
    s0.degrees = {MultiDegree{{Rational(0)}, Rational(0)},
                  MultiDegree{{Rational(0)}, Rational(-1)}};
    s1.labels = {"x", "y"};
    s1.degrees = {MultiDegree{{Rational(1)}, Rational(0)},
                  MultiDegree{{Rational(-1)}, Rational(-2)}};
    s2.labels = {"w"};
    s2.degrees = {MultiDegree{{Rational(0)}, Rational(-2)}};
    FreeMap m1, m2;
    FreeElement dx;
    dx.add(0, Monomial::V(1, 0));
    FreeElement dy;
    dy.add(0, Monomial::U(1, 0));
    m1.columns = {dx, dy};
    FreeElement dw;
    dw.add(0, Monomial::U(1, 0));
    dw.add(1, Monomial::V(1, 0));
    m2.columns = {dw};
    r.stages = {s0, s1, s2};
    r.maps = {m1, m2};
    return r;
}

inline FreeResolution vee_complex_D() {
    FreeResolution r;
    r.ell = 1;
    FreeStage s0, s1;
    s0.labels = {"b"};
    s0.degrees = {MultiDegree{{Rational(0)}, Rational(0)}};
    s1.labels = {"a", "c"};
    s1.degrees = {MultiDegree{{Rational(1)}, Rational(0)},
                  MultiDegree{{Rational(-1)}, Rational(-2)}};
    FreeMap m1;
    FreeElement da;
    da.add(0, Monomial::V(1, 0));
    FreeElement dc;
    dc.add(0, Monomial::U(1, 0));
    m1.columns = {da, dc};
    r.stages = {s0, s1};
    r.maps = {m1};
    return r;
}

}  // namespace fixtures
