#pragma once

// The link lattice complex of an arrow-decorated plumbing tree: generators
// [K,E] with V_arrow <= E, the f/g weight functions, the differential, the
// U_i/V_i actions, Maslov and Alexander gradings, the conjugation J, the
// reframing isomorphism, and sound finite truncations by gr_w floor.

#include "plumblat/fupoly.hpp"
#include "plumblat/monomial.hpp"
#include "plumblat/plumbing.hpp"
#include "plumblat/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace plumblat {

using EMask = uint32_t;  // subset of vertices; bit v set iff v in E

struct LatticeGenerator {
    CharVector k;
    EMask emask = 0;
    uint32_t u_power = 0;
};

// One F2[U]-linear combination term: U^power * [K,E].
struct LatticeTerm {
    uint32_t u_power;
    CharVector k;
    EMask emask;
};

struct CharHash {
    size_t operator()(const CharVector& k) const {
        size_t h = 1469598103934665603ull;
        for (int64_t v : k) {
            h ^= size_t(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// f/g engine for a fixed weighted graph. For each characteristic vector it
// tabulates f over all vertex subsets once (incremental over masks) and then
// g = min over subsets by a subset-min sweep; both tables are memoized per K.
class GEngine {
public:
    explicit GEngine(const PlumbingGraph& g) : g_(&g) {
        n_ = g.size();
        if (n_ > 22) throw std::domain_error("graph too large for subset enumeration");
        full_ = (EMask(1) << n_) - 1;
        arrow_mask_ = 0;
        for (size_t a : g.arrows()) arrow_mask_ |= EMask(1) << a;
    }

    const PlumbingGraph& graph() const { return *g_; }
    EMask arrow_mask() const { return arrow_mask_; }
    EMask full_mask() const { return full_; }

    int64_t f(const CharVector& k, EMask imask) { return table(k).f[imask]; }
    int64_t g(const CharVector& k, EMask emask) { return table(k).g[emask]; }

    // B_v(K,E) = min{ f(K,I) : v in I subset E } via the translation identity
    // B_v(K,E) = (K(v)+v.v)/2 + g(K+2v*, E-v).
    int64_t B(const CharVector& k, EMask emask, size_t v) {
        CharVector k2 = shift_vstar(k, v);
        return (k[v] + g_->pairing(v, v)) / 2 + g(k2, emask & ~(EMask(1) << v));
    }

    CharVector shift_vstar(const CharVector& k, size_t v, int64_t c = 1) const {
        CharVector k2 = k;
        for (size_t w = 0; w < n_; ++w) k2[w] += 2 * c * g_->pairing(v, w);
        return k2;
    }

    CharVector shift_mustar(const CharVector& k, size_t arrow_index, int64_t c = 1) const {
        CharVector k2 = k;
        k2[g_->arrows().at(arrow_index)] += 2 * c;
        return k2;
    }

    size_t memo_size() const { return memo_.size(); }

private:
    struct Tables {
        std::vector<int64_t> f, g;
    };

    const Tables& table(const CharVector& k) {
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        Tables t;
        const size_t nmask = size_t(1) << n_;
        t.f.assign(nmask, 0);
        // 2f(I+v) = 2f(I) + K(v) + v.v + 2 * sum_{w in I} w.v
        for (EMask m = 1; m < nmask; ++m) {
            size_t v = size_t(__builtin_ctz(m));
            EMask rest = m & (m - 1);
            int64_t cross = 0;
            for (EMask r = rest; r; r &= r - 1)
                cross += g_->pairing(size_t(__builtin_ctz(r)), v);
            int64_t two_f = 2 * t.f[rest] + k[v] + g_->pairing(v, v) + 2 * cross;
            t.f[m] = two_f / 2;
        }
        t.g = t.f;
        for (EMask m = 1; m < nmask; ++m)
            for (EMask bits = m; bits; bits &= bits - 1) {
                EMask sub = m & ~(bits & (-int64_t(bits)));
                t.g[m] = std::min(t.g[m], t.g[sub]);
            }
        return memo_.emplace(k, std::move(t)).first->second;
    }

    const PlumbingGraph* g_;
    size_t n_ = 0;
    EMask full_ = 0, arrow_mask_ = 0;
    std::unordered_map<CharVector, Tables, CharHash> memo_;
};

inline int64_t f_value(GEngine& e, const CharVector& k, EMask imask) { return e.f(k, imask); }
inline int64_t g_value(GEngine& e, const CharVector& k, EMask emask) { return e.g(k, emask); }

// Grading and action calculator. Alexander gradings follow the rational-lift
// formula; gr_w uses the restriction K|_{X_G} squared through Q_G^{-1} with
// the cobordism constant -3 sigma - 2 |V_G|, the normalization under which
// the differential is homogeneous of degree -1.
class LatticeCalculator {
public:
    explicit LatticeCalculator(const PlumbingGraph& g) : eng_(g) {
        const auto& gr = graph();
        const size_t ell = gr.num_arrows();
        lifts_.resize(ell);
        aconst_.assign(ell, Rational(0));
        for (size_t i = 0; i < ell; ++i) {
            if (gr.num_solids()) lifts_[i] = gr.rational_lift(i);
            size_t vi = gr.arrows()[i];
            // sum over arrows b of v_b . (v_i - vhat_i)
            for (size_t bi = 0; bi < ell; ++bi) {
                size_t b = gr.arrows()[bi];
                Rational t = Rational(gr.pairing(b, vi));
                for (size_t j = 0; j < gr.num_solids(); ++j)
                    t -= lifts_[i][j] * Rational(gr.pairing(b, gr.solids()[j]));
                aconst_[i] += t;
            }
        }
        // scale so that scaled Alexander coordinates are integers
        ascale_.assign(ell, Int(1));
        for (size_t i = 0; i < ell; ++i) {
            Int l = 2;
            for (const auto& c : lifts_[i]) l = boost::multiprecision::lcm(l, rat_den(c));
            l = boost::multiprecision::lcm(l, rat_den(aconst_[i]));
            ascale_[i] = l;
        }
        if (gr.num_solids() && gr.solid_nonsingular()) {
            grw_const_ = Rational(-3 * gr.solid_signature() - 2 * int64_t(gr.num_solids()), 4);
        }
    }

    GEngine& engine() { return eng_; }
    const PlumbingGraph& graph() const { return eng_.graph(); }
    size_t ell() const { return graph().num_arrows(); }

    QVec alexander(const CharVector& k) const {
        const auto& gr = graph();
        QVec out(ell());
        for (size_t i = 0; i < ell(); ++i) {
            Rational t = Rational(k[gr.arrows()[i]]) + aconst_[i];
            for (size_t j = 0; j < gr.num_solids(); ++j)
                t -= lifts_[i][j] * Rational(k[gr.solids()[j]]);
            out[i] = t / 2;
        }
        return out;
    }

    // Integer sector key for the Alexander vector (per-component scaling).
    std::vector<Int> alexander_scaled(const QVec& a) const {
        std::vector<Int> out(a.size());
        for (size_t i = 0; i < a.size(); ++i) {
            Rational t = a[i] * Rational(ascale_[i]);
            if (!is_integer(t)) throw std::logic_error("Alexander scaling failed");
            out[i] = rat_num(t);
        }
        return out;
    }
    const std::vector<Int>& alexander_scales() const { return ascale_; }

    // Normalized coordinates a_i = A_i - (1/2) sum_{j != i} lk(L_i, L_j); the
    // convention in which the Hopf generators sit at (0,0) and (-1,-1).
    QVec normalize_alexander(const QVec& a) const {
        QVec out = a;
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < a.size(); ++j)
                if (j != i) out[i] -= graph().linking(i, j) / 2;
        return out;
    }

    Rational quadratic_form(const CharVector& k) {
        const auto& gr = graph();
        if (!gr.num_solids()) return Rational(0);
        CharVector kg(gr.num_solids());
        for (size_t j = 0; j < gr.num_solids(); ++j) kg[j] = k[gr.solids()[j]];
        auto it = qcache_.find(kg);
        if (it != qcache_.end()) return it->second;
        const QMat& inv = gr.solid_inverse();
        Rational q = 0;
        for (size_t i = 0; i < kg.size(); ++i) {
            Rational row = 0;
            for (size_t j = 0; j < kg.size(); ++j) row += inv[i][j] * Rational(kg[j]);
            q += Rational(kg[i]) * row;
        }
        return qcache_.emplace(std::move(kg), q).first->second;
    }

    Rational gr_w(const CharVector& k, EMask emask, uint32_t u_power = 0) {
        int64_t base = 2 * eng_.g(k, emask) + int64_t(__builtin_popcount(emask)) -
                       int64_t(ell()) - 2 * int64_t(u_power);
        return Rational(base) + quadratic_form(k) / 4 + grw_const_;
    }

    MultiDegree degree(const LatticeGenerator& gen) {
        return MultiDegree{alexander(gen.k), gr_w(gen.k, gen.emask, gen.u_power)};
    }

    // A-terms and B-terms of the differential, restricted to solid vertices.
    std::vector<LatticeTerm> differential(const CharVector& k, EMask emask) {
        std::vector<LatticeTerm> out;
        int64_t gke = eng_.g(k, emask);
        for (size_t v : graph().solids()) {
            EMask bit = EMask(1) << v;
            if (!(emask & bit)) continue;
            EMask e2 = emask & ~bit;
            int64_t a = eng_.g(k, e2) - gke;
            out.push_back({uint32_t(a), k, e2});
            CharVector k2 = eng_.shift_vstar(k, v);
            int64_t b = (k[v] + graph().pairing(v, v)) / 2 + eng_.g(k2, e2) - gke;
            out.push_back({uint32_t(b), std::move(k2), e2});
        }
        return out;
    }

    // U_i.[K,E] = U^{g(K-2mu*,E)-g(K,E)+1} [K-2mu*,E]
    LatticeTerm act_u(size_t i, const CharVector& k, EMask emask) {
        CharVector k2 = eng_.shift_mustar(k, i, -1);
        int64_t p = eng_.g(k2, emask) - eng_.g(k, emask) + 1;
        return {uint32_t(p), std::move(k2), emask};
    }

    // V_i.[K,E] = U^{g(K+2mu*,E)-g(K,E)} [K+2mu*,E]
    LatticeTerm act_v(size_t i, const CharVector& k, EMask emask) {
        CharVector k2 = eng_.shift_mustar(k, i, +1);
        int64_t p = eng_.g(k2, emask) - eng_.g(k, emask);
        return {uint32_t(p), std::move(k2), emask};
    }

    // J(U^p [K,E]) = U^p [-K - sum_{v in E} 2v*, E]
    LatticeGenerator j_map(const LatticeGenerator& gen) const {
        CharVector k2(gen.k.size());
        for (size_t w = 0; w < gen.k.size(); ++w) {
            int64_t t = -gen.k[w];
            for (EMask m = gen.emask; m; m &= m - 1)
                t -= 2 * graph().pairing(size_t(__builtin_ctz(m)), w);
            k2[w] = t;
        }
        return {std::move(k2), gen.emask, gen.u_power};
    }

    Rational grw_const() const { return grw_const_; }

private:
    GEngine eng_;
    std::vector<QVec> lifts_;
    QVec aconst_;
    std::vector<Int> ascale_;
    Rational grw_const_ = 0;
    std::unordered_map<CharVector, Rational, CharHash> qcache_;
};

// F_{G,G'}: the canonical identification of complexes for two framing choices,
// Phi_{G'}^{-1} o Phi_G on characteristic vectors.
inline CharVector reframe_iso(const PlumbingGraph& from, const PlumbingGraph& to,
                              const CharVector& k) {
    return to.lattice_to_char(from.char_to_lattice(k));
}

// ---------------- truncated complexes ----------------

struct TruncationBox {
    QVec a_lo, a_hi;       // inclusive Alexander window, one entry per arrow
    Rational floor;        // gr_w floor: all generators with gr_w >= floor are kept
};

struct SectorKey {
    size_t spinc = 0;
    std::vector<Int> alex_scaled;
    bool operator<(const SectorKey& o) const {
        if (spinc != o.spinc) return spinc < o.spinc;
        return alex_scaled < o.alex_scaled;
    }
    bool operator==(const SectorKey& o) const {
        return spinc == o.spinc && alex_scaled == o.alex_scaled;
    }
};

struct SectorComplex {
    QVec alexander;
    size_t spinc = 0;
    // generators grouped by cube level q = |E| - |V_arrow|
    std::vector<std::vector<LatticeGenerator>> levels;
    std::vector<std::vector<Rational>> grades;   // parallel to levels
    std::vector<PolyUMatrix> diff;               // diff[q]: level q+1 -> level q
    size_t boundary_losses = 0;                  // differential terms dropped at the floor
};

struct GradedComplex {
    const PlumbingGraph* graph = nullptr;
    TruncationBox box;
    std::map<SectorKey, SectorComplex> sectors;
    size_t boundary_losses = 0;
    // homology gradings >= certified_floor are unaffected by the truncation
    Rational certified_floor;
};

struct InsufficientBox : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct GenLookup {
    std::map<std::pair<CharVector, EMask>, std::pair<size_t, size_t>> pos;  // -> (level, index)
};

}  // namespace detail

// Enumerates every generator [K,E] with gr_w >= floor whose Alexander degree
// lies in the window, and assembles per-sector differentials. Soundness of the
// floor needs Q_G negative definite (then the K-region is a provably complete
// ellipsoid slice); otherwise the certification cannot terminate and we error.
inline GradedComplex build_truncated_complex(LatticeCalculator& calc, const TruncationBox& box,
                                             std::optional<size_t> only_spinc = std::nullopt) {
    const PlumbingGraph& gr = calc.graph();
    const size_t ngv = gr.num_solids();
    const size_t ell = gr.num_arrows();
    if (!gr.solid_nonsingular()) throw SingularError("incidence matrix Q_G is singular");
    if (ngv && !gr.solid_negative_definite())
        throw InsufficientBox(
            "cannot certify gr_w floor: Q_G is not negative definite, the generator region "
            "with gr_w above the floor is unbounded");
    if (box.a_lo.size() != ell || box.a_hi.size() != ell)
        throw std::invalid_argument("Alexander window has wrong arity");

    GradedComplex out;
    out.graph = &gr;
    out.box = box;
    out.certified_floor = box.floor + 2;

    // bound on the solid part: q(k) >= 4*floor + 3*sigma - 2*|V_G|
    Rational qbound = 4 * box.floor + Rational(3 * gr.solid_signature() - 2 * int64_t(ngv));
    Rational C = -qbound;  // -q(k) <= C over the admissible region
    std::vector<int64_t> kmax(ngv, 0);
    if (C >= 0) {
        for (size_t j = 0; j < ngv; ++j) {
            Rational cap = C * Rational(-gr.pairing(gr.solids()[j], gr.solids()[j]));
            Int num = rat_num(cap), den = rat_den(cap);
            kmax[j] = int64_t(isqrt_floor(num / den)) + 1;
        }
    }

    // recursive enumeration of solid coordinates
    CharVector k(gr.size(), 0);
    std::vector<CharVector> admissible;
    std::function<void(size_t)> rec_solid = [&](size_t j) {
        if (C < 0) return;
        if (j == ngv) {
            admissible.push_back(k);
            return;
        }
        size_t v = gr.solids()[j];
        int64_t lam = gr.pairing(v, v);
        int64_t base = ((lam % 2) + 2) % 2;  // parity of K(v)
        for (int64_t val = -kmax[j]; val <= kmax[j]; ++val) {
            if ((((val - lam) % 2) + 2) % 2 != 0) continue;
            (void)base;
            k[v] = val;
            rec_solid(j + 1);
        }
        k[v] = 0;
    };
    rec_solid(0);

    // per solid part: filter by the exact ellipsoid, then enumerate arrow coords
    detail::GenLookup lookup;
    std::vector<std::pair<CharVector, EMask>> all;
    for (CharVector& ks : admissible) {
        if (ngv && calc.quadratic_form(ks) < qbound) continue;
        // K(v_i) window from the Alexander window: A_i = (K(v_i) - lift.k_G + c_i)/2
        std::vector<std::pair<int64_t, int64_t>> ranges(ell);
        bool empty = false;
        for (size_t i = 0; i < ell && !empty; ++i) {
            Rational shift = 0;  // A_i = (K(v_i) + shift)/2
            {
                QVec a0 = calc.alexander(ks);  // ks has zero arrow entries
                shift = 2 * a0[i];
            }
            Rational lo = 2 * box.a_lo[i] - shift, hi = 2 * box.a_hi[i] - shift;
            // integer K(v_i) in [lo,hi] with parity of the framing
            Int lo_i = rat_num(lo) / rat_den(lo) - 2, hi_i = rat_num(hi) / rat_den(hi) + 2;
            while (Rational(lo_i) < lo) ++lo_i;
            while (Rational(hi_i) > hi) --hi_i;
            int64_t fr = gr.pairing(gr.arrows()[i], gr.arrows()[i]);
            int64_t a = int64_t(lo_i), b = int64_t(hi_i);
            while (a <= b && (((a - fr) % 2) + 2) % 2 != 0) ++a;
            if (a > b) empty = true;
            ranges[i] = {a, b};
        }
        if (empty) continue;
        std::function<void(size_t)> rec_arrow = [&](size_t i) {
            if (i == ell) {
                EMask amask = calc.engine().arrow_mask();
                EMask solid_all = calc.engine().full_mask() & ~amask;
                for (EMask sub = solid_all;; sub = (sub - 1) & solid_all) {
                    EMask emask = amask | sub;
                    if (calc.gr_w(ks, emask) >= box.floor) all.push_back({ks, emask});
                    if (sub == 0) break;
                }
                return;
            }
            size_t v = gr.arrows()[i];
            for (int64_t val = ranges[i].first; val <= ranges[i].second; val += 2) {
                ks[v] = val;
                rec_arrow(i + 1);
            }
            ks[v] = 0;
        };
        rec_arrow(0);
    }

    // group into sectors
    for (auto& [kk, emask] : all) {
        SectorKey key;
        QVec a = calc.alexander(kk);
        key.alex_scaled = calc.alexander_scaled(a);
        key.spinc = gr.spinc_index(kk);
        if (only_spinc && key.spinc != *only_spinc) continue;
        SectorComplex& sec = out.sectors[key];
        if (sec.levels.empty()) {
            sec.levels.resize(ngv + 1);
            sec.grades.resize(ngv + 1);
            sec.alexander = a;
            sec.spinc = key.spinc;
        }
        size_t level = size_t(__builtin_popcount(emask)) - ell;
        lookup.pos[{kk, emask}] = {level, sec.levels[level].size()};
        sec.levels[level].push_back({kk, emask, 0});
        sec.grades[level].push_back(calc.gr_w(kk, emask));
    }

    // differentials
    for (auto& [key, sec] : out.sectors) {
        sec.diff.resize(sec.levels.size() > 0 ? sec.levels.size() - 1 : 0);
        for (size_t q = 0; q + 1 < sec.levels.size(); ++q) {
            sec.diff[q] = PolyUMatrix(sec.levels[q].size(), sec.levels[q + 1].size());
            for (size_t c = 0; c < sec.levels[q + 1].size(); ++c) {
                const auto& gen = sec.levels[q + 1][c];
                for (const LatticeTerm& t : calc.differential(gen.k, gen.emask)) {
                    auto it = lookup.pos.find({t.k, t.emask});
                    if (it == lookup.pos.end()) {
                        ++sec.boundary_losses;
                        ++out.boundary_losses;
                        continue;
                    }
                    sec.diff[q].at(it->second.second, c).add_term(t.u_power);
                }
            }
        }
    }
    return out;
}

// Exact d^2 = 0 check for every sector. The truncated object is the quotient
// complex spanned by elements with gr_w >= floor, so composite terms are zero
// exactly when they land strictly below the floor.
inline bool check_d_squared(const GradedComplex& cx) {
    for (const auto& [key, sec] : cx.sectors) {
        for (size_t q = 0; q + 1 < sec.diff.size(); ++q) {
            const PolyUMatrix& a = sec.diff[q];
            const PolyUMatrix& b = sec.diff[q + 1];
            for (size_t i = 0; i < a.rows; ++i)
                for (size_t j = 0; j < b.cols; ++j) {
                    FUPoly s;
                    for (size_t t = 0; t < a.cols; ++t)
                        if (!a.at(i, t).zero() && !b.at(t, j).zero()) s += a.at(i, t) * b.at(t, j);
                    for (uint32_t e : s.exps())
                        if (sec.grades[q][i] - 2 * int64_t(e) >= cx.box.floor) return false;
                }
        }
    }
    return true;
}

}  // namespace plumblat
