#pragma once

// Multivariable Alexander polynomial ingestion and the H-function via
// inclusion-exclusion over sublinks. Input data is the classical Delta of
// each sublink; chi(HFL-hat) and chi(HFL^-) normalizations are derived:
//   |L'| >= 2 : chi(HFL^-) = Delta * prod_i t_i^{1/2}   (finite support)
//   |L'| == 1: chi(HFL^-) = Delta * sum_{k <= 0} t^k    (counted in closed form)
// with HFL^-(Y, empty set) = 0 by convention.

#include "plumblat/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

struct AlexanderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AlexanderData {
    size_t ell = 0;
    std::vector<std::string> components;
    QMat lk;  // pairwise linking numbers, zero diagonal

    struct Sublink {
        std::vector<size_t> comps;  // sorted component indices
        size_t spinc = 0;
        std::vector<std::pair<QVec, int64_t>> terms;  // Delta coefficients
    };
    std::vector<Sublink> sublinks;

    const Sublink* find(const std::vector<size_t>& comps, size_t spinc) const {
        for (const auto& s : sublinks)
            if (s.comps == comps && s.spinc == spinc) return &s;
        return nullptr;
    }

    static AlexanderData from_json(const nlohmann::json& j) {
        AlexanderData d;
        if (!j.contains("components")) throw AlexanderError("missing 'components'");
        for (const auto& c : j.at("components")) d.components.push_back(c.get<std::string>());
        d.ell = d.components.size();
        d.lk.assign(d.ell, QVec(d.ell, Rational(0)));
        if (j.contains("lk")) {
            const auto& m = j.at("lk");
            for (size_t i = 0; i < d.ell; ++i)
                for (size_t k = 0; k < d.ell; ++k)
                    d.lk[i][k] = rat_from_string(m.at(i).at(k).get<std::string>());
        }
        auto comp_index = [&](const std::string& id) {
            for (size_t i = 0; i < d.ell; ++i)
                if (d.components[i] == id) return i;
            throw AlexanderError("unknown component '" + id + "'");
        };
        for (const auto& js : j.at("sublinks")) {
            Sublink s;
            for (const auto& c : js.at("sublink")) s.comps.push_back(comp_index(c.get<std::string>()));
            std::sort(s.comps.begin(), s.comps.end());
            s.spinc = js.value("spinc", 0);
            for (const auto& t : js.at("terms")) {
                QVec pt;
                for (const auto& x : t.at("s")) pt.push_back(rat_from_string(x.get<std::string>()));
                if (pt.size() != s.comps.size()) throw AlexanderError("term arity mismatch");
                s.terms.push_back({pt, t.at("c").get<int64_t>()});
            }
            d.sublinks.push_back(std::move(s));
        }
        return d;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["components"] = components;
        nlohmann::json m = nlohmann::json::array();
        for (size_t i = 0; i < ell; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (size_t k = 0; k < ell; ++k) row.push_back(rat_to_string(lk[i][k]));
            m.push_back(row);
        }
        j["lk"] = m;
        j["sublinks"] = nlohmann::json::array();
        for (const auto& s : sublinks) {
            nlohmann::json js;
            js["sublink"] = nlohmann::json::array();
            for (size_t c : s.comps) js["sublink"].push_back(components[c]);
            js["spinc"] = s.spinc;
            js["terms"] = nlohmann::json::array();
            for (const auto& [pt, c] : s.terms) {
                nlohmann::json t;
                t["s"] = nlohmann::json::array();
                for (const auto& x : pt) t["s"].push_back(rat_to_string(x));
                t["c"] = c;
                js["terms"].push_back(t);
            }
            j["sublinks"].push_back(js);
        }
        return j;
    }
};

// Forgetful projection H(Y,L) -> H(Y,L_keep): drop the other coordinates and
// shift each kept one by half the linking numbers with the dropped components.
inline QVec forgetful(const AlexanderData& d, const QVec& s, const std::vector<size_t>& keep) {
    QVec out;
    out.reserve(keep.size());
    for (size_t i : keep) {
        Rational v = s.at(i);
        for (size_t j = 0; j < d.ell; ++j) {
            if (std::find(keep.begin(), keep.end(), j) == keep.end()) v -= d.lk[i][j] / 2;
        }
        out.push_back(v);
    }
    return out;
}

namespace detail_alex {

// Upward-orthant sum of chi(HFL^-(L')) starting at x.
inline Rational orthant_sum(const AlexanderData::Sublink& sub, const QVec& x) {
    Rational total = 0;
    if (sub.comps.size() == 1) {
        for (const auto& [pt, c] : sub.terms) {
            Rational reach = pt[0] - x[0];  // count of u in [x, a], step 1
            if (reach < 0) continue;
            if (!is_integer(reach)) {
                Int fl = rat_num(reach) / rat_den(reach);
                reach = Rational(fl);
            }
            total += Rational(c) * (reach + 1);
        }
    } else {
        for (const auto& [pt, c] : sub.terms) {
            bool ge = true;
            for (size_t k = 0; k < pt.size() && ge; ++k)
                ge = (pt[k] + Rational(1, 2) >= x[k]);  // support shift t^{1/2} per variable
            if (ge) total += c;
        }
    }
    return total;
}

}  // namespace detail_alex

// H_L(s, t) by the inclusion-exclusion formula over nonempty sublinks; needs
// Delta data for every nonempty sublink at the given Spin^c class.
inline Rational h_from_alexander(const AlexanderData& d, const QVec& s, size_t spinc = 0) {
    if (s.size() != d.ell) throw AlexanderError("point arity mismatch");
    Rational total = 0;
    for (size_t mask = 1; mask < (size_t(1) << d.ell); ++mask) {
        std::vector<size_t> keep;
        for (size_t i = 0; i < d.ell; ++i)
            if (mask >> i & 1) keep.push_back(i);
        const auto* sub = d.find(keep, spinc);
        if (!sub) {
            std::ostringstream os;
            os << "missing Alexander data for sublink {";
            for (size_t i : keep) os << " " << d.components[i];
            os << " }";
            throw AlexanderError(os.str());
        }
        QVec splus = s;
        for (auto& v : splus) v += 1;
        QVec x = forgetful(d, splus, keep);
        Rational term = detail_alex::orthant_sum(*sub, x);
        total += (keep.size() % 2 == 1) ? term : -term;
    }
    return total;
}

// Truncated expansion of chi(HFL^-(L')) = Delta * prod (1 - t_i)^{-1} on a
// query window [lo, hi] per kept coordinate.
inline std::vector<std::pair<QVec, int64_t>> hfl_minus_euler(const AlexanderData& d,
                                                             const std::vector<size_t>& comps,
                                                             size_t spinc, const QVec& lo,
                                                             const QVec& hi) {
    if (comps.empty()) return {};  // HFL^-(Y, empty) = 0
    const auto* sub = d.find(comps, spinc);
    if (!sub) throw AlexanderError("missing Alexander data for requested sublink");
    std::map<QVec, int64_t> acc;
    if (comps.size() == 1) {
        for (const auto& [pt, c] : sub->terms) {
            for (Rational u = pt[0]; u >= lo[0]; u -= 1)
                if (u <= hi[0]) acc[{u}] += c;
        }
    } else {
        for (const auto& [pt, c] : sub->terms) {
            QVec shifted = pt;
            bool in = true;
            for (size_t k = 0; k < shifted.size(); ++k) {
                shifted[k] += Rational(1, 2);
                if (shifted[k] < lo[k] || shifted[k] > hi[k]) in = false;
            }
            if (in) acc[shifted] += c;
        }
    }
    std::vector<std::pair<QVec, int64_t>> out;
    for (auto& [pt, c] : acc)
        if (c != 0) out.push_back({pt, c});
    return out;
}

// Delta symmetry: support symmetric about its center with coefficients equal
// up to one global sign (the Euler-characteristic symmetry, modulo the
// monomial-and-sign ambiguity of Delta).
inline bool check_symmetry(const AlexanderData::Sublink& sub) {
    if (sub.terms.empty()) return true;
    QVec lo = sub.terms[0].first, hi = sub.terms[0].first;
    for (const auto& [pt, c] : sub.terms)
        for (size_t k = 0; k < pt.size(); ++k) {
            lo[k] = std::min(lo[k], pt[k]);
            hi[k] = std::max(hi[k], pt[k]);
        }
    std::map<QVec, int64_t> m;
    for (const auto& [pt, c] : sub.terms) m[pt] += c;
    int sign = 0;
    for (const auto& [pt, c] : m) {
        QVec mirror(pt.size());
        for (size_t k = 0; k < pt.size(); ++k) mirror[k] = lo[k] + hi[k] - pt[k];
        auto it = m.find(mirror);
        if (it == m.end()) return false;
        if (c == 0 && it->second == 0) continue;
        int s = (it->second == c) ? 1 : (it->second == -c ? -1 : 0);
        if (s == 0) return false;
        if (sign == 0) sign = s;
        else if (sign != s) return false;
    }
    return true;
}

}  // namespace plumblat
