#pragma once

// F2[U] polynomial arithmetic and chain-complex homology over F2[U].
// F2[U] is a graded PID; every bounded complex of free modules decomposes
// into free towers and U^k torsion blocks, which is exactly what the
// lattice homology engine needs per (Spin^c, Alexander) sector.

#include "plumblat/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

// Polynomial over F2 in one variable U, stored as sorted exponents.
class FUPoly {
public:
    FUPoly() = default;
    static FUPoly monomial(uint32_t k) {
        FUPoly p;
        p.exps_ = {k};
        return p;
    }
    static FUPoly one() { return monomial(0); }

    bool zero() const { return exps_.empty(); }
    bool is_monomial() const { return exps_.size() == 1; }
    uint32_t min_deg() const { return exps_.front(); }
    uint32_t max_deg() const { return exps_.back(); }
    const std::vector<uint32_t>& exps() const { return exps_; }

    void add_term(uint32_t k) {  // XOR semantics
        auto it = std::lower_bound(exps_.begin(), exps_.end(), k);
        if (it != exps_.end() && *it == k) exps_.erase(it);
        else exps_.insert(it, k);
    }

    friend FUPoly operator+(const FUPoly& a, const FUPoly& b) {
        FUPoly out;
        std::set_symmetric_difference(a.exps_.begin(), a.exps_.end(), b.exps_.begin(),
                                      b.exps_.end(), std::back_inserter(out.exps_));
        return out;
    }
    void operator+=(const FUPoly& o) { *this = *this + o; }

    friend FUPoly operator*(const FUPoly& a, const FUPoly& b) {
        FUPoly out;
        for (uint32_t x : a.exps_)
            for (uint32_t y : b.exps_) out.add_term(x + y);
        return out;
    }

    FUPoly shifted(uint32_t k) const {
        FUPoly out;
        out.exps_.reserve(exps_.size());
        for (uint32_t x : exps_) out.exps_.push_back(x + k);
        return out;
    }

    // Euclidean quotient, remainder has degree < deg(b).
    static std::pair<FUPoly, FUPoly> divmod(FUPoly a, const FUPoly& b) {
        if (b.zero()) throw std::domain_error("division by zero poly");
        FUPoly q;
        while (!a.zero() && a.max_deg() >= b.max_deg()) {
            uint32_t sh = a.max_deg() - b.max_deg();
            q.add_term(sh);
            a += b.shifted(sh);
        }
        return {q, a};
    }

    bool operator==(const FUPoly& o) const { return exps_ == o.exps_; }

    std::string str() const {
        if (zero()) return "0";
        std::string s;
        for (size_t i = exps_.size(); i-- > 0;) {
            if (!s.empty()) s += "+";
            if (exps_[i] == 0) s += "1";
            else if (exps_[i] == 1) s += "U";
            else s += "U^" + std::to_string(exps_[i]);
        }
        return s;
    }

private:
    std::vector<uint32_t> exps_;
};

using FUVec = std::vector<FUPoly>;

// Matrix over F2[U] with optional gradings: grade(row r) of its U^0 generator.
// Homogeneity convention: a term U^k in entry (r,c) is admissible when
// grade(c) - shift = grade(r) - 2k for the map's fixed grade shift.
struct PolyUMatrix {
    size_t rows = 0, cols = 0;
    std::vector<FUVec> m;  // row-major

    PolyUMatrix() = default;
    PolyUMatrix(size_t r, size_t c) : rows(r), cols(c), m(r, FUVec(c)) {}

    FUPoly& at(size_t r, size_t c) { return m[r][c]; }
    const FUPoly& at(size_t r, size_t c) const { return m[r][c]; }

    FUVec col(size_t c) const {
        FUVec v(rows);
        for (size_t r = 0; r < rows; ++r) v[r] = m[r][c];
        return v;
    }
};

inline bool vec_zero(const FUVec& v) {
    for (const auto& p : v)
        if (!p.zero()) return false;
    return true;
}

// y += q * x
inline void vec_addmul(FUVec& y, const FUPoly& q, const FUVec& x) {
    for (size_t i = 0; i < y.size(); ++i)
        if (!x[i].zero()) y[i] += q * x[i];
}

// Column echelon reduction over F2[U] with combination tracking.
// After reduce(), each pivot row has exactly one nonzero among all columns.
// Pivot selection prefers the lowest U-degree entry (minimal fill-in, and on
// graded input keeps every entry a monomial).
class FUColumnReducer {
public:
    explicit FUColumnReducer(PolyUMatrix a) : a_(std::move(a)) {
        t_ = PolyUMatrix(a_.cols, a_.cols);
        for (size_t j = 0; j < a_.cols; ++j) t_.at(j, j) = FUPoly::one();
        run();
    }

    // Kernel basis: columns (in ambient source coordinates) of the transform
    // whose reduced image column vanished.
    std::vector<FUVec> kernel() const {
        std::vector<FUVec> out;
        for (size_t j = 0; j < a_.cols; ++j) {
            bool z = true;
            for (size_t r = 0; r < a_.rows && z; ++r) z = a_.at(r, j).zero();
            if (z) out.push_back(t_.col(j));
        }
        return out;
    }

    size_t rank() const { return pivots_.size(); }

    // Solves A_original * x = v. Returns nullopt if v is not in the column span.
    std::optional<FUVec> solve(const FUVec& v) const {
        FUVec y(a_.cols);
        FUVec resid = v;
        for (auto [pr, pc] : pivots_) {
            if (resid[pr].zero()) continue;
            auto [q, rem] = FUPoly::divmod(resid[pr], a_.at(pr, pc));
            if (!rem.zero()) return std::nullopt;
            y[pc] = q;
            for (size_t r = 0; r < a_.rows; ++r)
                if (!a_.at(r, pc).zero()) resid[r] += q * a_.at(r, pc);
        }
        if (!vec_zero(resid)) return std::nullopt;
        FUVec x(a_.cols);
        for (size_t j = 0; j < a_.cols; ++j)
            if (!y[j].zero())
                for (size_t i = 0; i < a_.cols; ++i)
                    if (!t_.at(i, j).zero()) x[i] += y[j] * t_.at(i, j);
        return x;
    }

private:
    void run() {
        std::vector<bool> row_done(a_.rows, false), col_done(a_.cols, false);
        while (true) {
            // global minimum-degree pivot among unprocessed rows/cols
            long pr = -1, pc = -1;
            uint32_t best = 0;
            for (size_t r = 0; r < a_.rows; ++r) {
                if (row_done[r]) continue;
                for (size_t c = 0; c < a_.cols; ++c) {
                    if (col_done[c] || a_.at(r, c).zero()) continue;
                    uint32_t d = a_.at(r, c).min_deg();
                    if (pr < 0 || d < best) { best = d; pr = long(r); pc = long(c); }
                }
            }
            if (pr < 0) break;
            clear_row(size_t(pr), size_t(pc), col_done);
            row_done[size_t(pr)] = true;
            col_done[size_t(pc)] = true;
            pivots_.push_back({size_t(pr), size_t(pc)});
        }
    }

    void clear_row(size_t pr, size_t pc, const std::vector<bool>& col_done) {
        for (;;) {
            bool changed = false;
            for (size_t c = 0; c < a_.cols; ++c) {
                if (c == pc || col_done[c] || a_.at(pr, c).zero()) continue;
                auto [q, rem] = FUPoly::divmod(a_.at(pr, c), a_.at(pr, pc));
                if (!q.zero()) {
                    add_col(c, q, pc);
                    changed = true;
                }
                if (!a_.at(pr, c).zero() && a_.at(pr, c).max_deg() < a_.at(pr, pc).max_deg()) {
                    swap_col(c, pc);
                    changed = true;
                }
            }
            if (!changed) break;
        }
    }

    void add_col(size_t dst, const FUPoly& q, size_t src) {
        for (size_t r = 0; r < a_.rows; ++r)
            if (!a_.at(r, src).zero()) a_.at(r, dst) += q * a_.at(r, src);
        for (size_t r = 0; r < a_.cols; ++r)
            if (!t_.at(r, src).zero()) t_.at(r, dst) += q * t_.at(r, src);
    }

    void swap_col(size_t c1, size_t c2) {
        for (size_t r = 0; r < a_.rows; ++r) std::swap(a_.at(r, c1), a_.at(r, c2));
        for (size_t r = 0; r < a_.cols; ++r) std::swap(t_.at(r, c1), t_.at(r, c2));
    }

    PolyUMatrix a_, t_;
    std::vector<std::pair<size_t, size_t>> pivots_;
};

// Smith reduction over F2[U] with inverse-row-transform tracking: computes
// S = L*A*R diagonal and maintains Linv so that coker generators pull back
// through Linv columns.
struct FUSmith {
    std::vector<FUPoly> diag;   // nonzero diagonal entries d_1,...,d_r
    PolyUMatrix linv;           // k x k, columns are the new basis in old coordinates
    std::vector<size_t> diag_rows;  // row index (in the new basis order) of each d_i
};

inline FUSmith fu_smith(PolyUMatrix a) {
    const size_t k = a.rows, mcols = a.cols;
    FUSmith out;
    out.linv = PolyUMatrix(k, k);
    for (size_t i = 0; i < k; ++i) out.linv.at(i, i) = FUPoly::one();

    std::vector<bool> row_done(k, false), col_done(mcols, false);
    auto add_row = [&](size_t dst, const FUPoly& q, size_t src) {
        // row_dst += q*row_src ; Linv: col_src += q*col_dst
        for (size_t c = 0; c < mcols; ++c)
            if (!a.at(src, c).zero()) a.at(dst, c) += q * a.at(src, c);
        for (size_t r = 0; r < k; ++r)
            if (!out.linv.at(r, dst).zero()) out.linv.at(r, src) += q * out.linv.at(r, dst);
    };
    auto add_col = [&](size_t dst, const FUPoly& q, size_t src) {
        for (size_t r = 0; r < k; ++r)
            if (!a.at(r, src).zero()) a.at(r, dst) += q * a.at(r, src);
    };

    while (true) {
        long pr = -1, pc = -1;
        uint32_t best = 0;
        for (size_t r = 0; r < k; ++r) {
            if (row_done[r]) continue;
            for (size_t c = 0; c < mcols; ++c) {
                if (col_done[c] || a.at(r, c).zero()) continue;
                uint32_t d = a.at(r, c).min_deg();
                if (pr < 0 || d < best) { best = d; pr = long(r); pc = long(c); }
            }
        }
        if (pr < 0) break;
        // clear row pr and column pc
        for (;;) {
            bool changed = false;
            for (size_t c = 0; c < mcols; ++c) {
                if (long(c) == pc || col_done[c] || a.at(size_t(pr), c).zero()) continue;
                auto [q, rem] = FUPoly::divmod(a.at(size_t(pr), c), a.at(size_t(pr), size_t(pc)));
                if (!q.zero()) { add_col(c, q, size_t(pc)); changed = true; }
                if (!a.at(size_t(pr), c).zero() &&
                    a.at(size_t(pr), c).max_deg() < a.at(size_t(pr), size_t(pc)).max_deg()) {
                    for (size_t r = 0; r < k; ++r) std::swap(a.at(r, c), a.at(r, size_t(pc)));
                    std::swap(col_done[c], col_done[size_t(pc)]);
                    changed = true;
                }
            }
            for (size_t r = 0; r < k; ++r) {
                if (long(r) == pr || row_done[r] || a.at(r, size_t(pc)).zero()) continue;
                auto [q, rem] = FUPoly::divmod(a.at(r, size_t(pc)), a.at(size_t(pr), size_t(pc)));
                if (!q.zero()) { add_row(r, q, size_t(pr)); changed = true; }
                if (!a.at(r, size_t(pc)).zero() &&
                    a.at(r, size_t(pc)).max_deg() < a.at(size_t(pr), size_t(pc)).max_deg()) {
                    // swap rows r, pr (and Linv columns)
                    for (size_t c = 0; c < mcols; ++c) std::swap(a.at(r, c), a.at(size_t(pr), c));
                    for (size_t rr = 0; rr < k; ++rr)
                        std::swap(out.linv.at(rr, r), out.linv.at(rr, size_t(pr)));
                    changed = true;
                }
            }
            if (!changed) break;
        }
        row_done[size_t(pr)] = true;
        col_done[size_t(pc)] = true;
        out.diag.push_back(a.at(size_t(pr), size_t(pc)));
        out.diag_rows.push_back(size_t(pr));
    }
    return out;
}

// One homology summand of a complex over F2[U].
struct FUSummand {
    bool free = false;
    uint32_t torsion_order = 0;    // meaningful when !free
    Rational top_grading;          // grade of the summand's top generator
    FUVec rep;                     // representative cycle in ambient spot coordinates
    size_t spot = 0;
};

// Grade of a homogeneous F2[U]-vector given generator grades; checks homogeneity.
inline std::optional<Rational> vec_grade(const FUVec& v, const std::vector<Rational>& grades) {
    std::optional<Rational> g;
    for (size_t i = 0; i < v.size(); ++i) {
        for (uint32_t k : v[i].exps()) {
            Rational gg = grades[i] - 2 * int64_t(k);
            if (!g) g = gg;
            else if (*g != gg) throw std::logic_error("inhomogeneous F2[U] vector");
        }
    }
    return g;
}

// Homology of a bounded complex  C_n -> ... -> C_1 -> C_0  of free F2[U]
// modules. d[q] maps spot q+1 to spot q (so d.size() = spots-1).
// grades[q][i] is the grading of generator i of spot q.
// Throws std::invalid_argument if the maps do not compose to zero.
inline std::vector<FUSummand> fu_chain_homology(const std::vector<PolyUMatrix>& d,
                                                const std::vector<std::vector<Rational>>& grades) {
    const size_t spots = grades.size();
    std::vector<FUSummand> out;
    for (size_t q = 0; q < spots; ++q) {
        const size_t n = grades[q].size();
        if (n == 0) continue;

        // kernel of the outgoing map (everything, if none)
        std::vector<FUVec> ker;
        std::optional<FUColumnReducer> red;
        if (q > 0 && d[q - 1].rows > 0) {
            red.emplace(d[q - 1]);
            ker = red->kernel();
        } else {
            for (size_t i = 0; i < n; ++i) {
                FUVec e(n);
                e[i] = FUPoly::one();
                ker.push_back(std::move(e));
            }
        }
        if (ker.empty()) continue;

        // incoming map in kernel coordinates
        size_t m = (q + 1 < spots) ? grades[q + 1].size() : 0;
        PolyUMatrix mm(ker.size(), m);
        if (m > 0) {
            FUColumnReducer kred = [&] {
                PolyUMatrix km(n, ker.size());
                for (size_t j = 0; j < ker.size(); ++j)
                    for (size_t r = 0; r < n; ++r) km.at(r, j) = ker[j][r];
                return FUColumnReducer(std::move(km));
            }();
            for (size_t c = 0; c < m; ++c) {
                auto x = kred.solve(d[q].col(c));
                if (!x) throw std::invalid_argument("not a complex: image not contained in kernel");
                for (size_t r = 0; r < ker.size(); ++r) mm.at(r, c) = (*x)[r];
            }
        }

        FUSmith sm = fu_smith(std::move(mm));
        std::vector<bool> used(ker.size(), false);
        auto basis_vec = [&](size_t newrow) {
            FUVec v(n);
            for (size_t i = 0; i < ker.size(); ++i)
                if (!sm.linv.at(i, newrow).zero())
                    vec_addmul(v, sm.linv.at(i, newrow), ker[i]);
            return v;
        };
        for (size_t i = 0; i < sm.diag.size(); ++i) {
            used[sm.diag_rows[i]] = true;
            if (sm.diag[i].min_deg() == 0) continue;  // unit: summand dies
            FUSummand s;
            s.free = false;
            if (!sm.diag[i].is_monomial())
                throw std::logic_error("non-monomial torsion order in graded complex");
            s.torsion_order = sm.diag[i].min_deg();
            s.rep = basis_vec(sm.diag_rows[i]);
            auto g = vec_grade(s.rep, grades[q]);
            if (!g) continue;
            s.top_grading = *g;
            s.spot = q;
            out.push_back(std::move(s));
        }
        for (size_t i = 0; i < ker.size(); ++i) {
            if (used[i]) continue;
            FUSummand s;
            s.free = true;
            s.rep = basis_vec(i);
            auto g = vec_grade(s.rep, grades[q]);
            if (!g) continue;
            s.top_grading = *g;
            s.spot = q;
            out.push_back(std::move(s));
        }
    }
    return out;
}

// Summary decomposition for a two-term-or-longer complex: free ranks with top
// gradings plus torsion blocks.
struct FUModuleSummary {
    size_t free_rank = 0;
    std::vector<Rational> free_tops;
    std::vector<std::pair<uint32_t, Rational>> torsion;  // (order, top grading)
};

inline FUModuleSummary fu_module_decompose(const std::vector<PolyUMatrix>& d,
                                           const std::vector<std::vector<Rational>>& grades,
                                           size_t spot) {
    FUModuleSummary s;
    for (const auto& sum : fu_chain_homology(d, grades)) {
        if (sum.spot != spot) continue;
        if (sum.free) {
            ++s.free_rank;
            s.free_tops.push_back(sum.top_grading);
        } else {
            s.torsion.push_back({sum.torsion_order, sum.top_grading});
        }
    }
    std::sort(s.free_tops.begin(), s.free_tops.end());
    std::sort(s.torsion.begin(), s.torsion.end());
    return s;
}

}  // namespace plumblat
