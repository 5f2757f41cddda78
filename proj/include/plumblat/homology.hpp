#pragma once

// Graded homology of a truncated link lattice complex: F2[U]-module
// decompositions per (Spin^c, Alexander) sector, H-function extraction,
// L-space detection, and the d = 2g cross-check.
//
// A truncated sector is the quotient complex spanned by U^p [K,E] with
// gr_w >= floor. Homology is computed gradewise over F2 and the U-action is
// decomposed into towers by a descending-grade matching (the structure
// theorem for graded F2[U]-modules); towers reaching the window bottom are
// the nontorsion part.

#include "plumblat/gf2.hpp"
#include "plumblat/lattice.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

struct SectorTower {
    Rational top;
    uint32_t order = 0;        // U-order when !reaches_bottom
    bool reaches_bottom = false;  // survives U down to the truncation window edge
};

namespace detail_hom {

// Chain bases of the quotient complex per grade, with the differential and
// the U-shift realized on bit vectors.
struct SectorExpansion {
    // element = (level, generator index, U-power)
    struct El {
        size_t lvl, idx;
        uint32_t p;
    };
    std::map<Rational, std::vector<El>> bygrade;
    std::map<Rational, std::map<std::tuple<size_t, size_t, uint32_t>, size_t>> index;

    SectorExpansion(const SectorComplex& sec, const Rational& floor) {
        for (size_t q = 0; q < sec.levels.size(); ++q)
            for (size_t i = 0; i < sec.levels[q].size(); ++i) {
                Rational g = sec.grades[q][i];
                for (uint32_t p = 0;; ++p) {
                    Rational d = g - 2 * int64_t(p);
                    if (d < floor) break;
                    auto& vec = bygrade[d];
                    index[d][{q, i, p}] = vec.size();
                    vec.push_back({q, i, p});
                }
            }
    }

    size_t dim(const Rational& d) const {
        auto it = bygrade.find(d);
        return it == bygrade.end() ? 0 : it->second.size();
    }

    // columns of the differential from grade d to d-1
    std::vector<BitVec> boundary_cols(const SectorComplex& sec, const Rational& d) const {
        auto its = bygrade.find(d);
        auto itt = bygrade.find(d - 1);
        std::vector<BitVec> cols;
        if (its == bygrade.end()) return cols;
        size_t tdim = itt == bygrade.end() ? 0 : itt->second.size();
        const auto* tindex = itt == bygrade.end() ? nullptr : &index.at(d - 1);
        for (const El& e : its->second) {
            BitVec col(tdim);
            if (e.lvl > 0 && tdim) {
                const PolyUMatrix& m = sec.diff[e.lvl - 1];
                for (size_t r = 0; r < m.rows; ++r) {
                    for (uint32_t c : m.at(r, e.idx).exps()) {
                        auto it = tindex->find({e.lvl - 1, r, e.p + c});
                        if (it != tindex->end()) col.flip(it->second);
                    }
                }
            }
            cols.push_back(std::move(col));
        }
        return cols;
    }

    // U: grade d -> d-2 on chain level (shift the U-power)
    BitVec u_shift(const BitVec& v, const Rational& d) const {
        auto its = bygrade.find(d);
        auto itt = bygrade.find(d - 2);
        size_t tdim = itt == bygrade.end() ? 0 : itt->second.size();
        BitVec out(tdim);
        if (its == bygrade.end() || !tdim) return out;
        const auto& tindex = index.at(d - 2);
        for (size_t i : v.ones()) {
            const El& e = its->second[i];
            auto it = tindex.find({e.lvl, e.idx, e.p + 1});
            if (it != tindex.end()) out.flip(it->second);
        }
        return out;
    }
};

}  // namespace detail_hom

// Tower decomposition of one sector. Grades in a sector must lie in a single
// coset of Z (they do for any connected complex; asserted).
inline std::vector<SectorTower> sector_towers(const SectorComplex& sec, const Rational& floor) {
    detail_hom::SectorExpansion ex(sec, floor);
    std::vector<SectorTower> out;
    if (ex.bygrade.empty()) return out;

    // cycle spaces and boundary images per grade
    struct GradeData {
        std::vector<BitVec> cycles;   // basis of ker(d) in chain coordinates
        F2Eliminator boundaries;      // im(d) from one grade above
    };
    std::map<Rational, GradeData> data;
    for (const auto& [d, els] : ex.bygrade) {
        GradeData gd;
        auto cols = ex.boundary_cols(sec, d);
        auto rk = f2_rank_kernel_cols(cols, els.size());
        for (const auto& combo : rk.kernel) {
            BitVec v(els.size());
            for (size_t j : combo.ones()) v.flip(j);
            gd.cycles.push_back(std::move(v));
        }
        data[d] = std::move(gd);
    }
    for (const auto& [d, els] : ex.bygrade) {
        auto up = data.find(d + 1);
        if (up == data.end()) continue;
        auto cols = ex.boundary_cols(sec, d + 1);
        for (size_t j = 0; j < cols.size(); ++j) data[d].boundaries.add(cols[j]);
    }

    // descending-grade matching of the U-action, independently per parity
    struct Bar {
        Rational birth;
        BitVec rep;  // chain-level cycle at the current grade
    };
    std::map<Rational, std::vector<Bar>> alive_at;  // keyed by current grade
    // the full grade ladder down to the floor, stepping by 1 through the
    // coset(s) of the observed grades (empty grades kill passing bars)
    std::vector<Rational> grades;
    {
        std::set<Rational> fracs;
        Rational top = ex.bygrade.rbegin()->first;
        for (const auto& [d, els] : ex.bygrade) {
            Rational f = d - top;
            while (f < 0) f += 1;
            while (f >= 1) f -= 1;
            fracs.insert(f);
        }
        std::set<Rational> ladder;
        for (const Rational& f : fracs)
            for (Rational d = top + f; d >= floor; d -= 1) ladder.insert(d);
        grades.assign(ladder.rbegin(), ladder.rend());
    }

    for (const Rational& d : grades) {
        GradeData& gd = data[d];  // default-constructed at empty grades
        F2Eliminator elim = gd.boundaries;  // boundaries first
        std::vector<Bar> alive_here;
        // bars arriving from grade d+2, oldest birth first
        auto incoming = alive_at.find(d);
        if (incoming != alive_at.end()) {
            std::stable_sort(incoming->second.begin(), incoming->second.end(),
                             [](const Bar& a, const Bar& b) { return a.birth > b.birth; });
            for (Bar& bar : incoming->second) {
                BitVec res = elim.reduce(bar.rep);
                if (!res.any()) {
                    // dies entering d: torsion of order (birth - d)/2
                    SectorTower t;
                    t.top = bar.birth;
                    Rational ord = (bar.birth - d) / 2;
                    t.order = uint32_t(int64_t(rat_num(ord)));
                    t.reaches_bottom = false;
                    out.push_back(t);
                } else {
                    elim.add(res);
                    alive_here.push_back({bar.birth, std::move(res)});
                }
            }
        }
        // newcomers: cycle classes independent of boundaries and older bars
        for (const BitVec& z : gd.cycles) {
            BitVec res = elim.reduce(z);
            if (res.any()) {
                elim.add(res);
                alive_here.push_back({d, std::move(res)});
            }
        }
        // push survivors through U; below the window they are nontorsion
        bool below_window = (d - 2 < floor);
        for (Bar& bar : alive_here) {
            if (!below_window) {
                alive_at[d - 2].push_back({bar.birth, ex.u_shift(bar.rep, d)});
            } else {
                SectorTower t;
                t.top = bar.birth;
                t.reaches_bottom = true;
                out.push_back(t);
            }
        }
    }
    return out;
}

struct HomologyPiece {
    size_t spinc = 0;
    QVec alexander;             // H(L) coordinates (rational-lift convention)
    QVec alexander_normalized;  // shifted by -lk(L_i, L-L_i)/2
    size_t free_rank = 0;       // bottom-reaching towers with certified top
    Rational top_grading;       // max top grading over bottom-reaching towers
    std::vector<std::pair<uint32_t, Rational>> torsion;  // (U-order, top grading)
    bool certified = false;
};

inline std::vector<HomologyPiece> homology(LatticeCalculator& calc, const GradedComplex& cx) {
    std::vector<HomologyPiece> out;
    for (const auto& [key, sec] : cx.sectors) {
        auto towers = sector_towers(sec, cx.box.floor);
        if (towers.empty()) continue;
        HomologyPiece p;
        p.spinc = sec.spinc;
        p.alexander = sec.alexander;
        p.alexander_normalized = calc.normalize_alexander(sec.alexander);
        bool have_top = false;
        for (const auto& t : towers) {
            if (t.reaches_bottom) {
                if (!have_top || t.top > p.top_grading) {
                    p.top_grading = t.top;
                    have_top = true;
                }
                if (t.top >= cx.certified_floor) ++p.free_rank;
            } else {
                p.torsion.push_back({t.order, t.top});
            }
        }
        std::sort(p.torsion.begin(), p.torsion.end());
        p.certified = have_top && p.top_grading >= cx.certified_floor;
        out.push_back(std::move(p));
    }
    return out;
}

struct LSpaceWitness {
    size_t spinc = 0;
    QVec alexander;
    uint32_t torsion_order = 0;
    Rational top_grading;
};

// True iff no U-torsion block is fully visible in the certified region.
inline std::pair<bool, std::optional<LSpaceWitness>> is_lspace_link(LatticeCalculator& calc,
                                                                    const GradedComplex& cx) {
    for (const auto& p : homology(calc, cx)) {
        for (const auto& [order, top] : p.torsion) {
            if (top >= cx.certified_floor && top - 2 * int64_t(order) >= cx.certified_floor) {
                return {false, LSpaceWitness{p.spinc, p.alexander, order, top}};
            }
        }
    }
    return {true, std::nullopt};
}

struct HFunction {
    size_t ell = 0;
    std::vector<Int> scales;   // per-component Alexander scaling
    Rational certified_floor;
    struct Point {
        QVec alexander;
        QVec alexander_normalized;
        Rational H;
        bool certified = false;
    };
    std::map<SectorKey, Point> points;

    std::optional<Rational> at(size_t spinc, const QVec& a) const {
        SectorKey key;
        key.spinc = spinc;
        key.alex_scaled.resize(a.size());
        for (size_t i = 0; i < a.size(); ++i) {
            Rational t = a[i] * Rational(scales[i]);
            if (!is_integer(t)) return std::nullopt;
            key.alex_scaled[i] = rat_num(t);
        }
        auto it = points.find(key);
        if (it == points.end() || !it->second.certified) return std::nullopt;
        return it->second.H;
    }
};

struct NotLSpace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// H(s): -2H = top gr_w of the nontorsion part of the sector homology. Errors
// on a certified torsion witness; points whose towers dip under the certified
// floor are reported uncertified rather than guessed.
inline HFunction h_function(LatticeCalculator& calc, const GradedComplex& cx) {
    auto [lspace, witness] = is_lspace_link(calc, cx);
    if (!lspace) {
        std::ostringstream os;
        os << "not an L-space link in certified region: U^" << witness->torsion_order
           << " torsion at gr_w " << rat_to_string(witness->top_grading);
        throw NotLSpace(os.str());
    }
    HFunction h;
    h.ell = calc.ell();
    h.scales = calc.alexander_scales();
    h.certified_floor = cx.certified_floor;
    for (const auto& p : homology(calc, cx)) {
        if (p.free_rank > 1) {
            throw NotLSpace("sector homology has free rank > 1; H-function undefined");
        }
        SectorKey key;
        key.spinc = p.spinc;
        key.alex_scaled = calc.alexander_scaled(p.alexander);
        HFunction::Point pt;
        pt.alexander = p.alexander;
        pt.alexander_normalized = p.alexander_normalized;
        pt.certified = p.certified;
        if (p.certified) pt.H = -p.top_grading / 2;
        h.points[key] = std::move(pt);
    }
    return h;
}

// Lemma-style cross-check value: d(L_E, phi_E(K)) = 2 g(K,E), exposed for
// arrowless graphs.
inline Rational d_from_g(GEngine& eng, const CharVector& k, EMask emask) {
    return Rational(2 * eng.g(k, emask));
}

// Graded dimensions of the per-sector homology with U set to zero: the hat
// flavor of the large-surgery subcomplex. For an L-space link every sector
// carries a single one-dimensional class.
inline std::map<Rational, size_t> sector_hat_dims(const SectorComplex& sec) {
    std::map<Rational, std::vector<std::pair<size_t, size_t>>> bygrade;
    for (size_t q = 0; q < sec.levels.size(); ++q)
        for (size_t i = 0; i < sec.levels[q].size(); ++i)
            bygrade[sec.grades[q][i]].push_back({q, i});
    std::map<Rational, size_t> dims;
    for (const auto& [d, basis] : bygrade) {
        auto below = bygrade.find(d - 1);
        auto above = bygrade.find(d + 1);
        std::map<std::pair<size_t, size_t>, size_t> rowidx;
        for (size_t r = 0; r < basis.size(); ++r) rowidx[basis[r]] = r;
        std::map<std::pair<size_t, size_t>, size_t> belowidx;
        if (below != bygrade.end())
            for (size_t r = 0; r < below->second.size(); ++r) belowidx[below->second[r]] = r;
        size_t rank_out = 0, rank_in = 0;
        {
            std::vector<BitVec> cols;
            for (auto [q, i] : basis) {
                BitVec col(below != bygrade.end() ? below->second.size() : 0);
                if (q > 0 && below != bygrade.end()) {
                    const PolyUMatrix& m = sec.diff[q - 1];
                    for (size_t r = 0; r < m.rows; ++r) {
                        const FUPoly& e = m.at(r, i);
                        if (!e.zero() && e.exps().front() == 0) {
                            auto it = belowidx.find({q - 1, r});
                            if (it != belowidx.end()) col.flip(it->second);
                        }
                    }
                }
                cols.push_back(std::move(col));
            }
            rank_out = f2_rank_kernel_cols(cols, basis.size()).rank;
        }
        if (above != bygrade.end()) {
            std::vector<BitVec> cols;
            for (auto [q, i] : above->second) {
                BitVec col(basis.size());
                if (q > 0) {
                    const PolyUMatrix& m = sec.diff[q - 1];
                    for (size_t r = 0; r < m.rows; ++r) {
                        const FUPoly& e = m.at(r, i);
                        if (!e.zero() && e.exps().front() == 0) {
                            auto it = rowidx.find({q - 1, r});
                            if (it != rowidx.end()) col.flip(it->second);
                        }
                    }
                }
                cols.push_back(std::move(col));
            }
            rank_in = f2_rank_kernel_cols(cols, above->second.size()).rank;
        }
        size_t dim = basis.size() - rank_out - rank_in;
        if (dim) dims[d] = dim;
    }
    return dims;
}

}  // namespace plumblat
