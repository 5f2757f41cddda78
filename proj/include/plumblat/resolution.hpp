#pragma once

// Minimal multigraded free resolutions over R_l = F2[U_1,V_1,...,U_l,V_l],
// computed degreewise: every multigraded piece of a free module is a finite
// F2 vector space, so kernels and minimal generators come from bit-packed
// Gaussian elimination, walked in increasing monomial-length order. Also:
// degreewise exactness verification, the Koszul model on V_1..V_l, and the
// mod-V homology of a resolution.
//
// Degrees are scaled to integer vectors internally; exact rationals appear
// only at the API boundary.

#include "plumblat/gf2.hpp"
#include "plumblat/monomial.hpp"
#include "plumblat/presentation_types.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace plumblat {

struct FreeStage {
    std::vector<std::string> labels;
    std::vector<MultiDegree> degrees;
    size_t size() const { return degrees.size(); }
};

// maps[k].columns[c] = the image in stage k of generator c of stage k+1.
struct FreeMap {
    std::vector<FreeElement> columns;
};

struct DegreeBox {
    QVec a_lo, a_hi;     // per-component Alexander window
    Rational t_max;      // cells with torder() <= t_max are processed
};

struct FreeResolution {
    size_t ell = 0;
    std::vector<FreeStage> stages;
    std::vector<FreeMap> maps;  // maps[k]: stage k+1 -> stage k
    DegreeBox box;
    std::vector<size_t> betti() const {
        std::vector<size_t> b;
        for (const auto& s : stages)
            if (s.size()) b.push_back(s.size());
        return b;
    }
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Scaled integer degrees: a multidegree becomes (a_1*D_1,...,a_l*D_l, w*W).
struct Scaler {
    size_t ell = 0;
    std::vector<int64_t> ascale;
    int64_t wscale = 1;
    std::vector<int64_t> tmul;  // torder multipliers: T*L = sum a_k*tmul_k - w*tw
    int64_t tw = 1;

    using SDeg = std::vector<int64_t>;  // length ell+1, last entry scaled w

    static Scaler from_degrees(size_t ell, const std::vector<MultiDegree>& degs) {
        Scaler s;
        s.ell = ell;
        s.ascale.assign(ell, 1);
        Int w = 1;
        for (const auto& d : degs) {
            for (size_t k = 0; k < ell; ++k) {
                Int den = rat_den(d.alexander[k]);
                s.ascale[k] = int64_t(boost::multiprecision::lcm(Int(s.ascale[k]), den));
            }
            w = boost::multiprecision::lcm(w, rat_den(d.maslov_w));
        }
        s.wscale = int64_t(w);
        int64_t L = s.wscale;
        for (size_t k = 0; k < ell; ++k) L = std::lcm(L, s.ascale[k]);
        s.tmul.assign(ell, 0);
        for (size_t k = 0; k < ell; ++k) s.tmul[k] = L / s.ascale[k];
        s.tw = L / s.wscale;
        return s;
    }

    SDeg scale(const MultiDegree& d) const {
        SDeg out(ell + 1);
        for (size_t k = 0; k < ell; ++k) {
            Rational t = d.alexander[k] * ascale[k];
            if (!is_integer(t)) throw std::invalid_argument("degree outside the scaled lattice");
            out[k] = int64_t(rat_num(t));
        }
        Rational t = d.maslov_w * wscale;
        if (!is_integer(t)) throw std::invalid_argument("degree outside the scaled lattice");
        out[ell] = int64_t(rat_num(t));
        return out;
    }

    MultiDegree unscale(const SDeg& s) const {
        MultiDegree d;
        d.alexander.resize(ell);
        for (size_t k = 0; k < ell; ++k) d.alexander[k] = Rational(s[k], ascale[k]);
        d.maslov_w = Rational(s[ell], wscale);
        return d;
    }

    int64_t torder_scaled(const SDeg& s) const {
        int64_t t = -s[ell] * tw;
        for (size_t k = 0; k < ell; ++k) t += s[k] * tmul[k];
        return t;
    }

    // difference delta - gen in monomial exponents: adiff integer vector and
    // u-depth; returns false when no monomial connects them
    bool monomial_gap(const SDeg& gen, const SDeg& delta, std::vector<int64_t>& adiff,
                      int64_t& depth) const {
        int64_t dw = gen[ell] - delta[ell];
        if (dw < 0 || dw % (2 * wscale) != 0) return false;
        int64_t base = 0;
        for (size_t k = 0; k < ell; ++k) {
            int64_t d = delta[k] - gen[k];
            if (d % ascale[k] != 0) return false;
            adiff[k] = d / ascale[k];
            base += std::max(-adiff[k], int64_t(0));
        }
        depth = dw / (2 * wscale) - base;
        return depth >= 0;
    }
};

struct SDegHash {
    size_t operator()(const std::vector<int64_t>& v) const {
        size_t h = 1469598103934665603ull;
        for (int64_t x : v) {
            h ^= size_t(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

inline void enumerate_monomials(const std::vector<int64_t>& adiff, int64_t depth, size_t ell,
                                const std::function<void(const Monomial&)>& fn) {
    // u_k = max(-a_k,0)+t_k, v_k = max(a_k,0)+t_k, sum t = depth
    Monomial m = Monomial::one(ell);
    std::function<void(size_t, int64_t)> rec = [&](size_t k, int64_t rem) {
        if (k + 1 == ell) {
            m.u[k] = uint32_t(std::max(-adiff[k], int64_t(0)) + rem);
            m.v[k] = uint32_t(std::max(adiff[k], int64_t(0)) + rem);
            fn(m);
            return;
        }
        for (int64_t t = 0; t <= rem; ++t) {
            m.u[k] = uint32_t(std::max(-adiff[k], int64_t(0)) + t);
            m.v[k] = uint32_t(std::max(adiff[k], int64_t(0)) + t);
            rec(k + 1, rem - t);
        }
    };
    if (ell == 0) {
        if (depth == 0) fn(m);
        return;
    }
    rec(0, depth);
}

struct LabelHash {
    size_t operator()(const std::pair<size_t, Monomial>& x) const {
        size_t h = 1469598103934665603ull ^ x.first;
        for (uint32_t e : x.second.u) h = (h ^ e) * 1099511628211ull;
        for (uint32_t e : x.second.v) h = (h ^ (e + 0x9e37)) * 1099511628211ull;
        return h;
    }
};

struct CellBasis {
    std::vector<std::pair<size_t, Monomial>> labels;
    std::unordered_map<std::pair<size_t, Monomial>, size_t, LabelHash> index;

    size_t find(size_t gen, const Monomial& m) const {
        auto it = index.find({gen, m});
        return it == index.end() ? size_t(-1) : it->second;
    }
};

// Stage with pre-scaled generator degrees.
struct ScaledStage {
    std::vector<Scaler::SDeg> gens;

    ScaledStage() = default;
    ScaledStage(const Scaler& s, const FreeStage& st) {
        gens.reserve(st.size());
        for (const auto& d : st.degrees) gens.push_back(s.scale(d));
    }
};

inline CellBasis cell_basis(const Scaler& sc, const ScaledStage& st, const Scaler::SDeg& delta) {
    CellBasis out;
    std::vector<int64_t> adiff(sc.ell);
    int64_t depth;
    for (size_t g = 0; g < st.gens.size(); ++g) {
        if (!sc.monomial_gap(st.gens[g], delta, adiff, depth)) continue;
        enumerate_monomials(adiff, depth, sc.ell, [&](const Monomial& m) {
            out.index[{g, m}] = out.labels.size();
            out.labels.push_back({g, m});
        });
    }
    return out;
}

// Image of (gen, monomial) under a map, as a bit vector over the target cell.
inline BitVec apply_map(const FreeMap& mp, size_t gen, const Monomial& m, const CellBasis& target) {
    BitVec out(target.labels.size());
    for (const auto& [tg, tm] : mp.columns[gen].terms) {
        size_t idx = target.find(tg, tm * m);
        if (idx == size_t(-1)) throw std::logic_error("map image misses target cell basis");
        out.flip(idx);
    }
    return out;
}

// Deterministic walk over the degree cells of the box, in increasing
// monomial-length order (all module multiples of an earlier cell land
// strictly later).
struct CellWalk {
    Scaler sc;
    std::vector<Scaler::SDeg> cells;
    int64_t tmax_scaled = 0;

    CellWalk(const DegreeBox& box, const std::vector<MultiDegree>& seeds, const Scaler& scaler)
        : sc(scaler) {
        if (seeds.empty()) return;
        const size_t ell = sc.ell;
        Scaler::SDeg seed0 = sc.scale(seeds[0]);
        std::vector<std::vector<int64_t>> avals(ell);
        for (size_t k = 0; k < ell; ++k) {
            // lattice values in the window, stepping by 1 through the coset of
            // the seed degree (scaled step = ascale[k])
            Rational lo = box.a_lo[k] * sc.ascale[k], hi = box.a_hi[k] * sc.ascale[k];
            int64_t start = seed0[k];
            while (Rational(start - sc.ascale[k]) >= lo) start -= sc.ascale[k];
            for (int64_t a = start; Rational(a) <= hi; a += sc.ascale[k])
                if (Rational(a) >= lo) avals[k].push_back(a);
        }
        int64_t wmax = seed0[ell];
        for (const auto& s : seeds) wmax = std::max(wmax, sc.scale(s)[ell]);
        {
            Rational t = box.t_max * (sc.tw * sc.wscale);
            Int fl = rat_num(t) / rat_den(t);
            tmax_scaled = int64_t(fl);
        }
        Scaler::SDeg cur(ell + 1);
        std::function<void(size_t)> rec = [&](size_t k) {
            if (k == ell) {
                int64_t asum = 0;
                for (size_t i = 0; i < ell; ++i) asum += cur[i] * sc.tmul[i];
                // T*L = asum - w*tw <= tmax_scaled  =>  w >= (asum - tmax)/tw
                for (int64_t w = wmax; asum - w * sc.tw <= tmax_scaled; w -= sc.wscale) {
                    cur[ell] = w;
                    cells.push_back(cur);
                }
                return;
            }
            for (int64_t a : avals[k]) {
                cur[k] = a;
                rec(k + 1);
            }
        };
        rec(0);
        std::stable_sort(cells.begin(), cells.end(),
                         [&](const Scaler::SDeg& x, const Scaler::SDeg& y) {
                             int64_t tx = sc.torder_scaled(x), ty = sc.torder_scaled(y);
                             if (tx != ty) return tx < ty;
                             return x < y;
                         });
    }
};

inline std::vector<MultiDegree> presentation_seeds(const ModulePresentation& p) {
    std::vector<MultiDegree> seeds;
    for (const auto& g : p.generators) seeds.push_back(g.degree);
    for (const auto& r : p.relations) seeds.push_back(p.generators[r.a].degree.shifted(r.alpha));
    return seeds;
}

}  // namespace detail

// Graded piece dimensions of the presented module (cokernel of the relation
// span), needed both for exactness verification and the Koszul comparison.
class ModulePieces {
public:
    ModulePieces(const ModulePresentation& p, const detail::Scaler& sc) : sc_(sc) {
        for (const auto& g : p.generators) {
            stage0_.labels.push_back(g.label);
            stage0_.degrees.push_back(g.degree);
        }
        sstage0_ = detail::ScaledStage(sc_, stage0_);
        rel_elems_ = p.relation_elements();
        for (size_t r = 0; r < rel_elems_.size(); ++r) {
            const auto& e = rel_elems_[r];
            std::optional<MultiDegree> d;
            for (const auto& [g, m] : e.terms) {
                MultiDegree t = stage0_.degrees[g].shifted(m);
                if (!d) d = t;
                else if (!(*d == t)) throw std::invalid_argument("relation not degree-homogeneous");
            }
            rel_degrees_.push_back(sc_.scale(*d));
        }
    }

    const FreeStage& stage0() const { return stage0_; }
    const detail::ScaledStage& scaled_stage0() const { return sstage0_; }
    const std::vector<FreeElement>& relation_elements() const { return rel_elems_; }
    const std::vector<detail::Scaler::SDeg>& relation_degrees() const { return rel_degrees_; }

    struct Piece {
        detail::CellBasis basis;
        F2Eliminator span;          // reduced relation span inside the cell
        std::vector<size_t> coset;  // label indices forming a basis of the quotient
    };

    const Piece& piece(const detail::Scaler::SDeg& delta) {
        auto it = cache_.find(delta);
        if (it != cache_.end()) return it->second;
        Piece pc;
        pc.basis = detail::cell_basis(sc_, sstage0_, delta);
        std::vector<int64_t> adiff(sc_.ell);
        int64_t depth;
        for (size_t r = 0; r < rel_elems_.size(); ++r) {
            if (!sc_.monomial_gap(rel_degrees_[r], delta, adiff, depth)) continue;
            detail::enumerate_monomials(adiff, depth, sc_.ell, [&](const Monomial& mu) {
                BitVec v(pc.basis.labels.size());
                for (const auto& [g, m] : rel_elems_[r].terms) {
                    size_t idx = pc.basis.find(g, m * mu);
                    if (idx == size_t(-1)) throw std::logic_error("relation multiple escapes cell");
                    v.flip(idx);
                }
                pc.span.add(std::move(v));
            });
        }
        F2Eliminator full = pc.span;
        for (size_t i = 0; i < pc.basis.labels.size(); ++i) {
            BitVec e(pc.basis.labels.size());
            e.set(i);
            if (full.add(e)) pc.coset.push_back(i);
        }
        return cache_.emplace(delta, std::move(pc)).first->second;
    }

    size_t dim(const detail::Scaler::SDeg& delta) { return piece(delta).coset.size(); }

private:
    detail::Scaler sc_;
    FreeStage stage0_;
    detail::ScaledStage sstage0_;
    std::vector<FreeElement> rel_elems_;
    std::vector<detail::Scaler::SDeg> rel_degrees_;
    std::unordered_map<detail::Scaler::SDeg, Piece, detail::SDegHash> cache_;
};

// Default degree box: the generator span padded by `margin` in each Alexander
// coordinate and by `margin` in monomial length.
inline DegreeBox default_box(const ModulePresentation& p, int64_t margin) {
    DegreeBox box;
    const size_t ell = p.ell;
    box.a_lo.assign(ell, Rational(0));
    box.a_hi.assign(ell, Rational(0));
    for (size_t k = 0; k < ell; ++k) {
        Rational lo = p.generators.front().degree.alexander[k];
        Rational hi = lo;
        for (const auto& g : p.generators) {
            lo = std::min(lo, g.degree.alexander[k]);
            hi = std::max(hi, g.degree.alexander[k]);
        }
        box.a_lo[k] = lo - margin;
        box.a_hi[k] = hi + margin;
    }
    Rational tmax = p.generators.front().degree.torder();
    for (const auto& g : p.generators) tmax = std::max(tmax, g.degree.torder());
    box.t_max = tmax + margin;
    return box;
}

// The minimal free resolution of the presented module within the box.
// Stage 1 is the minimal generating set of the relation submodule; stage k+1
// the minimal generators of ker(d_k), found cell by cell in monomial-length
// order. A generator appearing on the outermost length shell aborts with
// "enlarge box", since completeness past the shell is then uncertified.
inline FreeResolution free_resolution(const ModulePresentation& p, const DegreeBox& box) {
    if (p.generators.empty()) throw std::invalid_argument("empty presentation");
    p.validate();
    FreeResolution res;
    res.ell = p.ell;
    res.box = box;

    std::vector<MultiDegree> seeds = detail::presentation_seeds(p);
    detail::Scaler sc = detail::Scaler::from_degrees(p.ell, seeds);
    ModulePieces mod(p, sc);
    res.stages.push_back(mod.stage0());
    detail::CellWalk walk(box, seeds, sc);

    const size_t max_stage = 2 * p.ell + 1;
    std::vector<int64_t> adiff(p.ell);
    int64_t depth;
    for (size_t stage = 1; stage <= max_stage + 1; ++stage) {
        FreeStage next;
        detail::ScaledStage snext;
        FreeMap mp;
        const detail::ScaledStage scur =
            (stage == 1) ? mod.scaled_stage0() : detail::ScaledStage(sc, res.stages[stage - 1]);
        const detail::ScaledStage sprev =
            (stage >= 2) ? detail::ScaledStage(sc, res.stages[stage - 2]) : detail::ScaledStage();
        for (const detail::Scaler::SDeg& delta : walk.cells) {
            detail::CellBasis bas = detail::cell_basis(sc, scur, delta);
            if (bas.labels.empty()) continue;

            // kernel of d_{stage-1} at this cell (stage 1: candidates are the
            // input relations instead)
            std::vector<BitVec> candidates;
            if (stage == 1) {
                for (size_t r = 0; r < mod.relation_elements().size(); ++r) {
                    if (mod.relation_degrees()[r] != delta) continue;
                    BitVec v(bas.labels.size());
                    for (const auto& [g, m] : mod.relation_elements()[r].terms)
                        v.flip(bas.index.at({g, m}));
                    candidates.push_back(std::move(v));
                }
                if (candidates.empty()) continue;
            } else {
                detail::CellBasis target = detail::cell_basis(sc, sprev, delta);
                std::vector<BitVec> cols;
                cols.reserve(bas.labels.size());
                for (const auto& [g, m] : bas.labels)
                    cols.push_back(detail::apply_map(res.maps[stage - 2], g, m, target));
                auto rk = f2_rank_kernel_cols(cols, bas.labels.size());
                candidates = std::move(rk.kernel);
                if (candidates.empty()) continue;
            }

            // span of monomial multiples of generators already chosen this stage
            F2Eliminator span;
            for (size_t g = 0; g < snext.gens.size(); ++g) {
                if (!sc.monomial_gap(snext.gens[g], delta, adiff, depth)) continue;
                detail::enumerate_monomials(adiff, depth, p.ell, [&](const Monomial& mu) {
                    BitVec v(bas.labels.size());
                    for (const auto& [tg, tm] : mp.columns[g].terms)
                        v.flip(bas.index.at({tg, tm * mu}));
                    span.add(std::move(v));
                });
            }

            for (BitVec& cand : candidates) {
                if (!span.add(cand)) continue;
                if (sc.torder_scaled(delta) > walk.tmax_scaled - int64_t(sc.tw * sc.wscale))
                    throw ResolutionError("kernel generator on trust boundary at " +
                                          sc.unscale(delta).str() + "; enlarge box");
                FreeElement col;
                for (size_t i : cand.ones()) {
                    const auto& [g, m] = bas.labels[i];
                    col.add(g, m);
                }
                col.normalize();
                next.degrees.push_back(sc.unscale(delta));
                next.labels.push_back("s" + std::to_string(stage) + "_" +
                                      std::to_string(next.size()));
                snext.gens.push_back(delta);
                mp.columns.push_back(std::move(col));
            }
        }
        if (next.size() == 0) break;
        if (stage == max_stage + 1)
            throw ResolutionError("resolution exceeds the syzygy-theorem length bound");
        res.stages.push_back(std::move(next));
        res.maps.push_back(std::move(mp));
    }
    return res;
}

// Symbolic d o d = 0 (monomial-level cancellation over F2).
inline bool compose_is_zero(const FreeResolution& r) {
    for (size_t k = 0; k + 1 < r.maps.size(); ++k) {
        for (const auto& col : r.maps[k + 1].columns) {
            FreeElement out;
            for (const auto& [g, m] : col.terms)
                for (const auto& [tg, tm] : r.maps[k].columns[g].terms) out.add(tg, tm * m);
            if (!out.zero()) return false;
        }
    }
    return true;
}

// Minimality: no unit entries anywhere.
inline bool is_minimal(const FreeResolution& r) {
    for (const auto& mp : r.maps)
        for (const auto& col : mp.columns)
            for (const auto& [g, m] : col.terms)
                if (m.is_one()) return false;
    return true;
}

struct ExactnessReport {
    bool exact = true;
    bool complex = true;
    std::string failure;  // human-readable (stage, degree) pinpoint
};

// Degreewise exactness: at each cell, dim ker d_k == rank d_{k+1}, and the
// stage-0 cokernel has the module's graded dimensions.
inline ExactnessReport verify_exact(const FreeResolution& r, const ModulePresentation& p,
                                    const DegreeBox& box) {
    ExactnessReport rep;
    if (!compose_is_zero(r)) {
        rep.exact = rep.complex = false;
        rep.failure = "maps do not compose to zero";
        return rep;
    }
    std::vector<MultiDegree> seeds = detail::presentation_seeds(p);
    for (const auto& st : r.stages)
        for (const auto& d : st.degrees) seeds.push_back(d);
    detail::Scaler sc = detail::Scaler::from_degrees(p.ell, seeds);
    ModulePieces mod(p, sc);
    detail::CellWalk walk(box, seeds, sc);
    std::vector<detail::ScaledStage> sstages;
    for (const auto& st : r.stages) sstages.push_back(detail::ScaledStage(sc, st));

    for (const detail::Scaler::SDeg& delta : walk.cells) {
        std::vector<detail::CellBasis> bases(r.stages.size());
        for (size_t k = 0; k < r.stages.size(); ++k)
            bases[k] = detail::cell_basis(sc, sstages[k], delta);
        std::vector<size_t> rank(r.maps.size() + 1, 0);
        std::vector<size_t> kerdim(r.stages.size(), 0);
        for (size_t k = 0; k < r.stages.size(); ++k) {
            if (bases[k].labels.empty()) continue;
            if (k == 0) {
                kerdim[0] = bases[0].labels.size();
                continue;
            }
            std::vector<BitVec> cols;
            for (const auto& [g, m] : bases[k].labels)
                cols.push_back(detail::apply_map(r.maps[k - 1], g, m, bases[k - 1]));
            auto rk = f2_rank_kernel_cols(cols, bases[k].labels.size());
            rank[k - 1] = rk.rank;
            kerdim[k] = rk.kernel.size();
        }
        size_t mdim = mod.dim(delta);
        if (bases[0].labels.size() - rank[0] != mdim) {
            rep.exact = false;
            rep.failure = "stage 0 cokernel mismatch at " + sc.unscale(delta).str();
            return rep;
        }
        for (size_t k = 1; k < r.stages.size(); ++k) {
            size_t im_next = (k < r.maps.size()) ? rank[k] : 0;
            if (kerdim[k] != im_next) {
                rep.exact = false;
                rep.failure = "inexact at stage " + std::to_string(k) + ", " +
                              sc.unscale(delta).str();
                return rep;
            }
        }
    }
    return rep;
}

// Graded dimensions keyed by (multidegree, homological degree).
using GradedDims = std::map<std::pair<MultiDegree, size_t>, size_t>;

inline size_t total_dim(const GradedDims& d) {
    size_t s = 0;
    for (const auto& [k, v] : d) s += v;
    return s;
}

// Homology of M tensor Lambda(xi_1..xi_l) with d(xi_i) = V_i, i.e. the Koszul
// model on the V variables; dims per (multidegree, cube degree).
inline GradedDims koszul_homology(const ModulePresentation& p, const DegreeBox& box) {
    p.validate();
    const size_t ell = p.ell;
    std::vector<MultiDegree> seeds = detail::presentation_seeds(p);
    detail::Scaler sc = detail::Scaler::from_degrees(ell, seeds);
    ModulePieces mod(p, sc);
    detail::CellWalk walk(box, seeds, sc);

    // V_i as a matrix between module pieces, in the coset bases
    auto action = [&](size_t i, const detail::Scaler::SDeg& from) {
        detail::Scaler::SDeg to = from;
        to[i] += sc.ascale[i];
        std::vector<BitVec> cols;
        std::vector<size_t> src_coset;
        {
            const auto& src = mod.piece(from);
            src_coset = src.coset;
            for (size_t ci : src_coset)
                cols.push_back(BitVec());  // placeholder, fill below
            // copy labels now; src reference may be invalidated by piece(to)
            std::vector<std::pair<size_t, Monomial>> labels;
            for (size_t ci : src_coset) labels.push_back(src.basis.labels[ci]);
            const auto& dst = mod.piece(to);
            for (size_t t = 0; t < labels.size(); ++t) {
                auto [g, m] = labels[t];
                BitVec img(dst.basis.labels.size());
                size_t idx = dst.basis.find(g, m * Monomial::V(ell, i));
                if (idx != size_t(-1)) img.flip(idx);
                img = dst.span.reduce(std::move(img));
                BitVec out(dst.coset.size());
                for (size_t c = 0; c < dst.coset.size(); ++c)
                    if (img.get(dst.coset[c])) out.set(c);
                cols[t] = std::move(out);
            }
        }
        return cols;
    };

    GradedDims out;
    std::vector<std::vector<size_t>> subsets(ell + 1);
    for (size_t s = 0; s < (size_t(1) << ell); ++s)
        subsets[size_t(__builtin_popcountll(s))].push_back(s);

    for (const detail::Scaler::SDeg& delta : walk.cells) {
        auto mdeg = [&](size_t s) {
            detail::Scaler::SDeg d = delta;
            for (size_t i = 0; i < ell; ++i)
                if (s >> i & 1) d[i] -= sc.ascale[i];  // subtract deg(V_i)
            return d;
        };
        std::vector<std::vector<std::pair<size_t, size_t>>> basis(ell + 1);
        for (size_t q = 0; q <= ell; ++q)
            for (size_t s : subsets[q]) {
                size_t dim = mod.dim(mdeg(s));
                for (size_t t = 0; t < dim; ++t) basis[q].push_back({s, t});
            }
        auto build = [&](size_t qq) {
            std::vector<BitVec> cols;
            if (qq == 0 || qq > ell || basis[qq].empty()) return cols;
            std::map<std::pair<size_t, size_t>, size_t> tgt;
            for (size_t r2 = 0; r2 < basis[qq - 1].size(); ++r2) tgt[basis[qq - 1][r2]] = r2;
            for (auto [s, t] : basis[qq]) {
                BitVec col(basis[qq - 1].size());
                for (size_t i = 0; i < ell; ++i) {
                    if (!(s >> i & 1)) continue;
                    size_t s2 = s & ~(size_t(1) << i);
                    auto cols_i = action(i, mdeg(s));
                    if (t < cols_i.size())
                        for (size_t rb : cols_i[t].ones()) col.flip(tgt.at({s2, rb}));
                }
                cols.push_back(std::move(col));
            }
            return cols;
        };
        for (size_t q = 0; q <= ell; ++q) {
            if (basis[q].empty()) continue;
            size_t kdim = basis[q].size();
            if (q > 0) {
                auto out_cols = build(q);
                kdim = f2_rank_kernel_cols(out_cols, basis[q].size()).kernel.size();
            }
            size_t rank_in = 0;
            if (q + 1 <= ell && !basis[q + 1].empty()) {
                auto in_cols = build(q + 1);
                rank_in = f2_rank_kernel_cols(in_cols, basis[q + 1].size()).rank;
            }
            size_t dim = kdim - rank_in;
            if (dim) out[{sc.unscale(delta), q}] = dim;
        }
    }
    return out;
}

// Homology of the resolution with all V_i set to zero, per (multidegree,
// homological stage): the lattice-side term of the Gorsky-Nemethi comparison.
inline GradedDims mod_v_homology(const FreeResolution& r, const DegreeBox& box) {
    const size_t ell = r.ell;
    std::vector<MultiDegree> seeds;
    for (const auto& st : r.stages)
        for (const auto& d : st.degrees) seeds.push_back(d);
    detail::Scaler sc = detail::Scaler::from_degrees(ell, seeds);
    detail::CellWalk walk(box, seeds, sc);
    std::vector<detail::ScaledStage> sstages;
    for (const auto& st : r.stages) sstages.push_back(detail::ScaledStage(sc, st));

    // cell basis restricted to U-only monomials
    auto ucell = [&](const detail::ScaledStage& st, const detail::Scaler::SDeg& delta) {
        detail::CellBasis out;
        for (size_t g = 0; g < st.gens.size(); ++g) {
            int64_t dw = st.gens[g][ell] - delta[ell];
            if (dw < 0 || dw % (2 * sc.wscale) != 0) continue;
            Monomial m = Monomial::one(ell);
            bool ok = true;
            int64_t total = 0;
            for (size_t k = 0; k < ell && ok; ++k) {
                int64_t d = st.gens[g][k] - delta[k];
                if (d < 0 || d % sc.ascale[k] != 0) ok = false;
                else {
                    m.u[k] = uint32_t(d / sc.ascale[k]);
                    total += d / sc.ascale[k];
                }
            }
            if (!ok || total != dw / (2 * sc.wscale)) continue;
            out.index[{g, m}] = out.labels.size();
            out.labels.push_back({g, m});
        }
        return out;
    };
    auto apply_modv = [&](const FreeMap& mp, size_t gen, const Monomial& m,
                          const detail::CellBasis& target) {
        BitVec out(target.labels.size());
        for (const auto& [tg, tm] : mp.columns[gen].terms) {
            bool hasv = false;
            for (uint32_t x : tm.v)
                if (x) { hasv = true; break; }
            if (hasv) continue;
            size_t idx = target.find(tg, tm * m);
            if (idx != size_t(-1)) out.flip(idx);
        }
        return out;
    };

    GradedDims out;
    for (const detail::Scaler::SDeg& delta : walk.cells) {
        std::vector<detail::CellBasis> bases(r.stages.size());
        for (size_t k = 0; k < r.stages.size(); ++k) bases[k] = ucell(sstages[k], delta);
        for (size_t k = 0; k < r.stages.size(); ++k) {
            if (bases[k].labels.empty()) continue;
            size_t kdim, rank_in = 0;
            if (k == 0) kdim = bases[0].labels.size();
            else {
                std::vector<BitVec> cols;
                for (const auto& [g, m] : bases[k].labels)
                    cols.push_back(apply_modv(r.maps[k - 1], g, m, bases[k - 1]));
                kdim = f2_rank_kernel_cols(cols, bases[k].labels.size()).kernel.size();
            }
            if (k + 1 < r.stages.size() && !bases[k + 1].labels.empty()) {
                std::vector<BitVec> cols;
                for (const auto& [g, m] : bases[k + 1].labels)
                    cols.push_back(apply_modv(r.maps[k], g, m, bases[k]));
                rank_in = f2_rank_kernel_cols(cols, bases[k + 1].labels.size()).rank;
            }
            size_t dim = kdim - rank_in;
            if (dim) out[{sc.unscale(delta), k}] = dim;
        }
    }
    return out;
}

// Homology with every variable set to zero: only unit entries of the maps
// survive. For a minimal complex this counts generators per degree; two free
// complexes with different mod-(U,V) ranks cannot be homotopy equivalent.
inline GradedDims mod_uv_homology(const FreeResolution& r) {
    GradedDims out;
    auto unit_rank = [&](size_t k, const MultiDegree& delta) {
        std::map<size_t, size_t> rows;
        std::vector<BitVec> cols;
        for (size_t c = 0; c < r.maps[k].columns.size(); ++c) {
            if (!(r.stages[k + 1].degrees[c] == delta)) continue;
            std::vector<size_t> hits;
            for (const auto& [g, m] : r.maps[k].columns[c].terms)
                if (m.is_one()) {
                    if (!rows.count(g)) rows[g] = rows.size();
                    hits.push_back(rows[g]);
                }
            BitVec col(r.stages[k].size());
            for (size_t h : hits) col.flip(h);
            cols.push_back(std::move(col));
        }
        return f2_rank_kernel_cols(cols, cols.size()).rank;
    };
    for (size_t k = 0; k < r.stages.size(); ++k) {
        std::map<MultiDegree, size_t> counts;
        for (const auto& d : r.stages[k].degrees) ++counts[d];
        for (const auto& [d, c] : counts) {
            size_t dim = c;
            if (k < r.maps.size()) dim -= unit_rank(k, d);
            if (k > 0) dim -= unit_rank(k - 1, d);
            if (dim) out[{d, k}] += dim;
        }
    }
    return out;
}

}  // namespace plumblat
