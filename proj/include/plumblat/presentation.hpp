#pragma once

// Minimal generators and relations of the link Floer module of an L-space
// link from its H-function, plus the closed-form T(n,n) data used as oracles.

#include "plumblat/homology.hpp"
#include "plumblat/presentation_types.hpp"
#include "plumblat/resolution.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

struct InconclusiveBox : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// H(s - e_i) - H(s) must lie in {0,1} and H must be non-increasing in each
// coordinate wherever both points are certified.
inline bool validate_h_steps(const HFunction& h, size_t spinc) {
    for (const auto& [key, pt] : h.points) {
        if (key.spinc != spinc || !pt.certified) continue;
        for (size_t i = 0; i < h.ell; ++i) {
            QVec down = pt.alexander;
            down[i] -= 1;
            auto hd = h.at(spinc, down);
            if (hd && (*hd - pt.H != 0 && *hd - pt.H != 1)) return false;
        }
    }
    return true;
}

// All s in the certified window satisfying H(s-e_i)-H(s)=1 and
// H(s)-H(s+e_i)=0 for every i. Candidates whose neighborhood leaves the
// certified window raise InconclusiveBox.
inline std::vector<PresGenerator> minimal_generators(const HFunction& h, size_t spinc) {
    std::vector<std::pair<QVec, Rational>> found;
    for (const auto& [key, pt] : h.points) {
        if (key.spinc != spinc || !pt.certified) continue;
        bool all_pass = true, any_missing = false;
        for (size_t i = 0; i < h.ell && all_pass; ++i) {
            QVec down = pt.alexander, up = pt.alexander;
            down[i] -= 1;
            up[i] += 1;
            auto hd = h.at(spinc, down), hu = h.at(spinc, up);
            if (!hd) any_missing = true;
            else if (*hd - pt.H != 1) all_pass = false;
            if (!hu) any_missing = true;
            else if (pt.H - *hu != 0) all_pass = false;
        }
        if (all_pass && any_missing)
            throw InconclusiveBox("generator candidate on box boundary; enlarge box");
        if (all_pass && !any_missing) found.push_back({pt.alexander, -2 * pt.H});
    }
    // deterministic labels: descending lexicographic Alexander degree (the
    // torus-link convention X_1, X_2, ...)
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    std::vector<PresGenerator> out;
    for (size_t i = 0; i < found.size(); ++i)
        out.push_back({"X" + std::to_string(i + 1), MultiDegree{found[i].first, found[i].second}});
    return out;
}

// The finite relation list: for each generator pair, the monomial splittings
// with matching gr_w, plus (U_i V_i + U_j V_j) X for all i<j and every X.
inline std::vector<Relation> relations_full(const HFunction& h, size_t spinc,
                                            const std::vector<PresGenerator>& gens) {
    (void)h;
    (void)spinc;
    const size_t ell = gens.empty() ? 0 : gens[0].degree.alexander.size();
    std::vector<Relation> out;
    for (size_t p = 0; p < gens.size(); ++p) {
        for (size_t q = p + 1; q < gens.size(); ++q) {
            const QVec& s = gens[p].degree.alexander;
            const QVec& s2 = gens[q].degree.alexander;
            std::vector<int64_t> diff(ell);
            bool ok = true;
            for (size_t k = 0; k < ell && ok; ++k) {
                Rational d = s[k] - s2[k];
                if (!is_integer(d)) ok = false;
                else diff[k] = int64_t(rat_num(d));
            }
            if (!ok) continue;
            // exponent splittings i_k + j_k = |diff_k|; P_k acts on X_p, Q_k on X_q
            std::vector<uint32_t> split(ell, 0);
            std::function<void(size_t)> rec = [&](size_t k) {
                if (k == ell) {
                    Monomial a = Monomial::one(ell), b = Monomial::one(ell);
                    for (size_t t = 0; t < ell; ++t) {
                        uint32_t i = split[t], j = uint32_t(std::abs(diff[t])) - split[t];
                        if (diff[t] > 0) { a.u[t] = i; b.v[t] = j; }      // s_t > s'_t
                        else if (diff[t] < 0) { a.v[t] = i; b.u[t] = j; } // s_t < s'_t
                    }
                    MultiDegree da = gens[p].degree.shifted(a);
                    MultiDegree db = gens[q].degree.shifted(b);
                    if (da == db) out.push_back({a, p, b, q});
                    return;
                }
                for (uint32_t i = 0; i <= uint32_t(std::abs(diff[k])); ++i) {
                    split[k] = i;
                    rec(k + 1);
                }
            };
            rec(0);
        }
    }
    for (size_t g = 0; g < gens.size(); ++g)
        for (size_t i = 0; i < ell; ++i)
            for (size_t j = i + 1; j < ell; ++j) {
                Monomial a = Monomial::one(ell), b = Monomial::one(ell);
                a.u[i] = a.v[i] = 1;
                b.u[j] = b.v[j] = 1;
                out.push_back({a, g, b, g});
            }
    return out;
}

// Indices of a minimal generating subset of the relation submodule,
// determined degreewise (the redundancy pruning of the relation list).
inline std::vector<size_t> minimal_relation_indices(const ModulePresentation& p,
                                                    const DegreeBox& box) {
    p.validate();
    std::vector<size_t> chosen;
    std::vector<FreeElement> elems = p.relation_elements();
    std::vector<MultiDegree> seeds = detail::presentation_seeds(p);
    detail::Scaler sc = detail::Scaler::from_degrees(p.ell, seeds);
    std::vector<detail::Scaler::SDeg> degs;
    for (const auto& r : p.relations)
        degs.push_back(sc.scale(p.generators[r.a].degree.shifted(r.alpha)));
    detail::CellWalk walk(box, seeds, sc);
    FreeStage st;
    for (const auto& g : p.generators) {
        st.labels.push_back(g.label);
        st.degrees.push_back(g.degree);
    }
    detail::ScaledStage sst(sc, st);
    std::vector<int64_t> adiff(p.ell);
    int64_t depth;
    for (const detail::Scaler::SDeg& delta : walk.cells) {
        std::vector<size_t> here;
        for (size_t r = 0; r < elems.size(); ++r)
            if (degs[r] == delta) here.push_back(r);
        if (here.empty()) continue;
        detail::CellBasis bas = detail::cell_basis(sc, sst, delta);
        F2Eliminator span;
        for (size_t cg : chosen) {
            // monomial multiples of already-chosen relations landing at delta
            if (!sc.monomial_gap(degs[cg], delta, adiff, depth)) continue;
            detail::enumerate_monomials(adiff, depth, p.ell, [&](const Monomial& mu) {
                BitVec v(bas.labels.size());
                for (const auto& [g, m] : elems[cg].terms) v.flip(bas.index.at({g, m * mu}));
                span.add(std::move(v));
            });
        }
        for (size_t r : here) {
            BitVec v(bas.labels.size());
            for (const auto& [g, m] : elems[r].terms) v.flip(bas.index.at({g, m}));
            if (span.add(std::move(v))) chosen.push_back(r);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

struct PresentationPair {
    ModulePresentation full;    // the complete finite relation list
    ModulePresentation pruned;  // minimal generating subset of the relations
};

inline PresentationPair presentation_from_h(const HFunction& h, size_t spinc, int64_t box_margin) {
    PresentationPair out;
    auto gens = minimal_generators(h, spinc);
    if (gens.empty()) throw InconclusiveBox("no generators found in certified window");
    out.full.ell = h.ell;
    out.full.generators = gens;
    out.full.relations = relations_full(h, spinc, gens);
    out.full.validate();
    out.pruned.ell = h.ell;
    out.pruned.generators = gens;
    DegreeBox box = default_box(out.full, box_margin);
    for (size_t idx : minimal_relation_indices(out.full, box))
        out.pruned.relations.push_back(out.full.relations[idx]);
    return out;
}

// ---- closed-form T(n,n) data ----

inline Rational unknot_h(const Rational& s) { return s >= 0 ? Rational(0) : -s; }

// H-function of the torus link T(n,n) (symmetric in the s_i).
inline Rational torus_h(size_t n, QVec s) {
    if (s.size() != n) throw std::invalid_argument("torus_h arity");
    std::sort(s.begin(), s.end());
    Rational total = 0;
    for (size_t k = 0; k < n; ++k)
        total += unknot_h(s[k] - Rational(int64_t(n) - 1, 2) + int64_t(k));
    return total;
}

// The n-generator presentation of the T(n,n) module: staircase relations
// (prod_{i in I} U_i) X_k = (prod_{j not in I} V_j) X_{k+1} over all |I| = k,
// plus (U_i V_i + U_j V_j) X_k.
inline ModulePresentation torus_presentation(size_t n) {
    if (n < 2) throw std::invalid_argument("torus_presentation needs n >= 2");
    ModulePresentation p;
    p.ell = n;
    for (size_t k = 1; k <= n; ++k) {
        QVec a(n, Rational(int64_t(n) + 1, 2) - int64_t(k));
        p.generators.push_back(
            {"X" + std::to_string(k), MultiDegree{a, Rational(-int64_t(k) * (int64_t(k) - 1))}});
    }
    for (size_t k = 1; k < n; ++k) {
        // subsets I of {0..n-1} with |I| = k
        for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
            if (size_t(__builtin_popcountll(mask)) != k) continue;
            Monomial a = Monomial::one(n), b = Monomial::one(n);
            for (size_t i = 0; i < n; ++i) {
                if (mask >> i & 1) a.u[i] = 1;
                else b.v[i] = 1;
            }
            p.relations.push_back({a, k - 1, b, k});
        }
    }
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                Monomial a = Monomial::one(n), b = Monomial::one(n);
                a.u[i] = a.v[i] = 1;
                b.u[j] = b.v[j] = 1;
                p.relations.push_back({a, k, b, k});
            }
    p.validate();
    return p;
}

// Relation spans compared degreewise: same generators (after matching by
// degree) and equal piece ranks for p, q and their union.
inline bool presentations_equivalent(const ModulePresentation& p, const ModulePresentation& q,
                                     int64_t box_margin) {
    if (p.ell != q.ell || p.generators.size() != q.generators.size()) return false;
    auto degs = [](const ModulePresentation& m) {
        std::vector<MultiDegree> d;
        for (const auto& g : m.generators) d.push_back(g.degree);
        std::sort(d.begin(), d.end());
        return d;
    };
    std::vector<MultiDegree> dp = degs(p), dq = degs(q);
    for (size_t i = 0; i < dp.size(); ++i)
        if (!(dp[i] == dq[i])) return false;
    // remap q's generators onto p's by degree (greedy; degrees may repeat)
    std::vector<size_t> map_q(q.generators.size(), size_t(-1));
    std::vector<bool> used(p.generators.size(), false);
    for (size_t j = 0; j < q.generators.size(); ++j) {
        for (size_t i = 0; i < p.generators.size(); ++i) {
            if (!used[i] && p.generators[i].degree == q.generators[j].degree) {
                map_q[j] = i;
                used[i] = true;
                break;
            }
        }
        if (map_q[j] == size_t(-1)) return false;
    }
    ModulePresentation qm = p;
    qm.relations.clear();
    for (const auto& r : q.relations) qm.relations.push_back({r.alpha, map_q[r.a], r.beta, map_q[r.b]});
    ModulePresentation both = p;
    for (const auto& r : qm.relations) both.relations.push_back(r);
    DegreeBox box = default_box(p, box_margin);
    std::vector<MultiDegree> seeds = detail::presentation_seeds(both);
    detail::Scaler sc = detail::Scaler::from_degrees(p.ell, seeds);
    ModulePieces mp(p, sc), mq(qm, sc), mb(both, sc);
    detail::CellWalk walk(box, seeds, sc);
    for (const detail::Scaler::SDeg& delta : walk.cells) {
        size_t a = mp.dim(delta), b = mq.dim(delta), c = mb.dim(delta);
        if (a != b || a != c) return false;
    }
    return true;
}

}  // namespace plumblat
