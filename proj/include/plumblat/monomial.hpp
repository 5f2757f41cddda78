#pragma once

// Monomials in R_l = F2[U_1,V_1,...,U_l,V_l], multidegrees, and graded
// vector-space bookkeeping shared by the presentation and resolution layers.

#include "plumblat/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

struct Monomial {
    std::vector<uint32_t> u, v;

    static Monomial one(size_t ell) { return {std::vector<uint32_t>(ell, 0), std::vector<uint32_t>(ell, 0)}; }
    static Monomial U(size_t ell, size_t i) {
        Monomial m = one(ell);
        m.u[i] = 1;
        return m;
    }
    static Monomial V(size_t ell, size_t i) {
        Monomial m = one(ell);
        m.v[i] = 1;
        return m;
    }

    size_t ell() const { return u.size(); }
    bool is_one() const {
        for (auto x : u) if (x) return false;
        for (auto x : v) if (x) return false;
        return true;
    }
    uint32_t total_degree() const {
        return std::accumulate(u.begin(), u.end(), 0u) + std::accumulate(v.begin(), v.end(), 0u);
    }
    // w_U = sum_k min(i_k, j_k)
    uint32_t u_weight() const {
        uint32_t w = 0;
        for (size_t k = 0; k < u.size(); ++k) w += std::min(u[k], v[k]);
        return w;
    }
    // A(monomial)_k = j_k - i_k ; gr_w = -2 sum i ; gr_z = -2 sum j
    int64_t alexander(size_t k) const { return int64_t(v[k]) - int64_t(u[k]); }
    int64_t gr_w() const {
        int64_t s = 0;
        for (auto x : u) s += x;
        return -2 * s;
    }
    int64_t gr_z() const {
        int64_t s = 0;
        for (auto x : v) s += x;
        return -2 * s;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        if (a.ell() != b.ell()) throw std::invalid_argument("monomial arity mismatch");
        Monomial out = a;
        for (size_t k = 0; k < b.u.size(); ++k) { out.u[k] += b.u[k]; out.v[k] += b.v[k]; }
        return out;
    }

    friend Monomial gcd(const Monomial& a, const Monomial& b) {
        Monomial out = a;
        for (size_t k = 0; k < b.u.size(); ++k) {
            out.u[k] = std::min(out.u[k], b.u[k]);
            out.v[k] = std::min(out.v[k], b.v[k]);
        }
        return out;
    }

    auto operator<=>(const Monomial& o) const = default;

    std::string str() const {
        std::string s;
        for (size_t k = 0; k < u.size(); ++k) {
            if (u[k]) {
                s += "U" + std::to_string(k + 1);
                if (u[k] > 1) s += "^" + std::to_string(u[k]);
            }
            if (v[k]) {
                s += "V" + std::to_string(k + 1);
                if (v[k] > 1) s += "^" + std::to_string(v[k]);
            }
        }
        return s.empty() ? "1" : s;
    }
};

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) { return a * b; }

struct MultiDegree {
    QVec alexander;
    Rational maslov_w;

    Rational maslov_z() const {
        Rational s = 0;
        for (const auto& a : alexander) s += a;
        return maslov_w - 2 * s;
    }
    // additive "monomial length" order: T = -gr_w + sum A; T(mu * x) = T(x) + deg(mu)
    Rational torder() const {
        Rational s = 0;
        for (const auto& a : alexander) s += a;
        return -maslov_w + s;
    }
    MultiDegree shifted(const Monomial& m) const {
        MultiDegree out = *this;
        for (size_t k = 0; k < alexander.size(); ++k) out.alexander[k] += m.alexander(k);
        out.maslov_w += m.gr_w();
        return out;
    }
    bool operator==(const MultiDegree& o) const {
        return alexander == o.alexander && maslov_w == o.maslov_w;
    }
    bool operator<(const MultiDegree& o) const {
        if (maslov_w != o.maslov_w) return maslov_w < o.maslov_w;
        for (size_t i = 0; i < alexander.size(); ++i)
            if (alexander[i] != o.alexander[i]) return alexander[i] < o.alexander[i];
        return false;
    }
    std::string str() const {
        std::string s = "A=(";
        for (size_t i = 0; i < alexander.size(); ++i) {
            if (i) s += ",";
            s += rat_to_string(alexander[i]);
        }
        s += "), gr_w=" + rat_to_string(maslov_w);
        return s;
    }
};

// Finitely supported graded vector space: per multidegree a dimension with
// basis labels. Every label appears in exactly one piece.
struct GradedVectorSpace {
    std::map<MultiDegree, std::vector<std::string>> pieces;

    size_t dim(const MultiDegree& d) const {
        auto it = pieces.find(d);
        return it == pieces.end() ? 0 : it->second.size();
    }
    void add(const MultiDegree& d, std::string label) {
        for (auto& [deg, labels] : pieces)
            for (auto& l : labels)
                if (l == label) throw std::invalid_argument("duplicate basis label " + label);
        pieces[d].push_back(std::move(label));
    }
    size_t total_dim() const {
        size_t s = 0;
        for (auto& [d, l] : pieces) s += l.size();
        return s;
    }
};

}  // namespace plumblat
