#pragma once

// Generators-and-relations presentations of multigraded modules over R_l.

#include "plumblat/monomial.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

// An element of a free module: F2-sum of monomial * generator terms.
struct FreeElement {
    std::vector<std::pair<size_t, Monomial>> terms;

    void add(size_t gen, const Monomial& m) {
        for (auto it = terms.begin(); it != terms.end(); ++it) {
            if (it->first == gen && it->second == m) {
                terms.erase(it);
                return;
            }
        }
        terms.push_back({gen, m});
    }
    bool zero() const { return terms.empty(); }
    void normalize() { std::sort(terms.begin(), terms.end()); }
    bool operator==(const FreeElement& o) const { return terms == o.terms; }
    bool operator<(const FreeElement& o) const { return terms < o.terms; }
};

struct PresGenerator {
    std::string label;
    MultiDegree degree;
};

// Binomial relation alpha X_a + beta X_b; a == b covers the
// (U_i V_i + U_j V_j) X relations.
struct Relation {
    Monomial alpha;
    size_t a = 0;
    Monomial beta;
    size_t b = 0;

    std::string str(const std::vector<PresGenerator>& gens) const {
        return alpha.str() + "*" + gens[a].label + " + " + beta.str() + "*" + gens[b].label;
    }
};

struct ModulePresentation {
    size_t ell = 0;
    std::vector<PresGenerator> generators;
    std::vector<Relation> relations;

    std::vector<FreeElement> relation_elements() const {
        std::vector<FreeElement> out;
        out.reserve(relations.size());
        for (const auto& r : relations) {
            FreeElement e;
            e.add(r.a, r.alpha);
            e.add(r.b, r.beta);
            e.normalize();
            if (e.zero()) throw std::invalid_argument("degenerate relation");
            out.push_back(std::move(e));
        }
        return out;
    }

    void validate() const {
        for (const auto& r : relations) {
            MultiDegree da = generators.at(r.a).degree.shifted(r.alpha);
            MultiDegree db = generators.at(r.b).degree.shifted(r.beta);
            if (!(da == db))
                throw std::invalid_argument("relation not degree-homogeneous: " + r.str(generators));
        }
    }
};

}  // namespace plumblat
