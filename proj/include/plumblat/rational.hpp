#pragma once

// Exact arithmetic substrate: arbitrary-precision integers and rationals,
// plus the small dense linear algebra over Q used for incidence-matrix
// inverses, signatures and lattice solves. No floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

inline std::string rat_to_string(const Rational& r) {
    if (is_integer(r)) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on malformed input.
inline Rational rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

using QVec = std::vector<Rational>;
using QMat = std::vector<std::vector<Rational>>;

inline Rational dot(const QVec& a, const QVec& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline QVec mat_vec(const QMat& m, const QVec& x) {
    QVec y(m.size(), Rational(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
    return y;
}

inline Rational det(QMat a) {
    const size_t n = a.size();
    Rational d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) { std::swap(a[p], a[c]); d = -d; }
        d *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return d;
}

// Inverse of a nonsingular square matrix; throws std::domain_error if singular.
inline QMat inverse(QMat a) {
    const size_t n = a.size();
    QMat inv(n, QVec(n, Rational(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw std::domain_error("singular matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        Rational piv = a[c][c];
        for (size_t k = 0; k < n; ++k) { a[c][k] /= piv; inv[c][k] /= piv; }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

inline QVec solve(const QMat& a, const QVec& b) { return mat_vec(inverse(a), b); }

// Signature of a symmetric matrix by congruence diagonalization.
inline int signature(QMat a) {
    const size_t n = a.size();
    int pos = 0, neg = 0;
    for (size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            for (size_t j = k + 1; j < n; ++j) {
                if (a[j][k] != 0) {
                    for (size_t c = 0; c < n; ++c) a[k][c] += a[j][c];
                    for (size_t r = 0; r < n; ++r) a[r][k] += a[r][j];
                    break;
                }
            }
        }
        Rational d = a[k][k];
        if (d == 0) continue;
        if (d > 0) ++pos; else ++neg;
        for (size_t r = k + 1; r < n; ++r) {
            if (a[r][k] == 0) continue;
            Rational f = a[r][k] / d;
            for (size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
        }
        for (size_t c = k + 1; c < n; ++c) a[k][c] = 0;
    }
    return pos - neg;
}

// Negative definiteness via leading principal minors: (-1)^k det_k > 0.
inline bool negative_definite(const QMat& a) {
    const size_t n = a.size();
    for (size_t k = 1; k <= n; ++k) {
        QMat sub(k, QVec(k));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) sub[i][j] = a[i][j];
        Rational d = det(std::move(sub));
        if ((k % 2 == 1 && d >= 0) || (k % 2 == 0 && d <= 0)) return false;
    }
    return true;
}

// Integer square root, rounded down. x must be nonnegative.
inline Int isqrt_floor(const Int& x) {
    if (x < 0) throw std::domain_error("isqrt of negative");
    if (x == 0) return 0;
    Int lo = 0, hi = x + 1;
    while (hi - lo > 1) {
        Int mid = (lo + hi) / 2;
        if (mid * mid <= x) lo = mid; else hi = mid;
    }
    return lo;
}

}  // namespace plumblat
