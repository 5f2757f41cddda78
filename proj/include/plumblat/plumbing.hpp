#pragma once

// Plumbing-tree data model: parsing, incidence matrices, the dictionary
// between characteristic vectors and the linking lattice H(L), Spin^c
// enumeration, and rational lifts of arrow classes.

#include "plumblat/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plumblat {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Characteristic vector K, indexed by vertex order of the graph.
using CharVector = std::vector<int64_t>;
// Point of the linking lattice H(L), one rational per vertex.
using LatticePoint = QVec;

// Guard so that the int64 paths in f/g stay exact at desk scale.
inline constexpr int64_t kMaxWeight = 1 << 20;

class PlumbingGraph {
public:
    struct Vertex {
        std::string id;
        bool arrow = false;
        int64_t weight = 0;  // solid weight, or arrow framing (chosen, not intrinsic)
    };

    static PlumbingGraph parse(const std::string& text, bool strict = true) {
        PlumbingGraph g;
        std::istringstream in(text);
        std::string line;
        std::map<std::string, size_t> index;
        std::vector<std::pair<std::string, std::string>> edges;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw)) continue;
            auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
            if (kw == "vertex" || kw == "arrow") {
                std::string id;
                if (!(ls >> id)) throw ParseError("missing id" + where());
                if (!valid_id(id)) throw ParseError("bad id '" + id + "'" + where());
                if (index.count(id)) throw ParseError("duplicate id '" + id + "'" + where());
                Vertex v;
                v.id = id;
                v.arrow = (kw == "arrow");
                if (v.arrow) {
                    int64_t fr;
                    if (ls >> fr) {
                        if (strict) throw ParseError("arrow with weight in strict mode" + where());
                        v.weight = fr;
                    } else {
                        v.weight = -1;  // default framing; complex is independent of it
                    }
                } else {
                    if (!(ls >> v.weight)) throw ParseError("missing weight" + where());
                    if (v.weight > kMaxWeight || v.weight < -kMaxWeight)
                        throw ParseError("weight out of range" + where());
                }
                std::string extra;
                if (ls >> extra) throw ParseError("trailing tokens" + where());
                index[id] = g.verts_.size();
                g.verts_.push_back(v);
            } else if (kw == "edge") {
                std::string a, b;
                if (!(ls >> a >> b)) throw ParseError("edge needs two ids" + where());
                edges.push_back({a, b});
            } else {
                throw ParseError("unknown directive '" + kw + "'" + where());
            }
        }
        std::set<std::pair<size_t, size_t>> eset;
        for (auto& [a, b] : edges) {
            auto ia = index.find(a), ib = index.find(b);
            if (ia == index.end()) throw ParseError("edge endpoint '" + a + "' not declared");
            if (ib == index.end()) throw ParseError("edge endpoint '" + b + "' not declared");
            if (ia->second == ib->second) throw ParseError("self-loop at '" + a + "'");
            auto e = std::minmax(ia->second, ib->second);
            if (!eset.insert(e).second) throw ParseError("duplicate edge " + a + " " + b);
        }
        g.edges_.assign(eset.begin(), eset.end());
        if (g.verts_.empty()) throw ParseError("empty graph");
        if (g.edges_.size() != g.verts_.size() - 1) throw ParseError("not a tree");
        // connectivity
        std::vector<char> seen(g.verts_.size(), 0);
        std::vector<size_t> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            for (auto [a, b] : g.edges_) {
                size_t o = (a == v) ? b : (b == v ? a : v);
                if (o != v && !seen[o]) { seen[o] = 1; stack.push_back(o); }
            }
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw ParseError("not a tree");
        g.finish();
        return g;
    }

    size_t size() const { return verts_.size(); }
    const std::vector<Vertex>& vertices() const { return verts_; }
    const std::vector<std::pair<size_t, size_t>>& edges() const { return edges_; }
    const std::vector<size_t>& arrows() const { return arrows_; }
    const std::vector<size_t>& solids() const { return solids_; }
    size_t num_arrows() const { return arrows_.size(); }
    size_t num_solids() const { return solids_.size(); }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Extended pairing v_a . v_b, arrow framings included on the diagonal.
    int64_t pairing(size_t a, size_t b) const { return q_[a][b]; }
    const std::vector<std::vector<int64_t>>& incidence_full() const { return q_; }

    // Q_G over the solid vertices (Def-style incidence matrix).
    const QMat& incidence_solid() const { return qg_; }
    const Rational& det_solid() const { return detg_; }
    bool solid_nonsingular() const { return detg_ != 0; }
    const QMat& solid_inverse() const {
        if (!solid_nonsingular()) throw SingularError("incidence matrix Q_G is singular");
        return qginv_;
    }
    int solid_signature() const { return sigg_; }
    bool solid_negative_definite() const { return negdefg_; }

    // Replaces arrow framings. The lattice complex is canonically independent
    // of this choice; tests pin that via the reframing isomorphism.
    PlumbingGraph with_framings(const std::vector<int64_t>& framings) const {
        PlumbingGraph g = *this;
        if (framings.size() != arrows_.size())
            throw std::invalid_argument("framing count mismatch");
        for (size_t i = 0; i < arrows_.size(); ++i) g.verts_[arrows_[i]].weight = framings[i];
        g.finish();
        return g;
    }

    bool is_characteristic(const CharVector& k) const {
        if (k.size() != size()) return false;
        for (size_t v = 0; v < size(); ++v)
            if (((k[v] - q_[v][v]) % 2 + 2) % 2 != 0) return false;
        return true;
    }

    // Phi over the full weighted graph: s_i = (K(v_i) + v_Gamma . v_i)/2.
    LatticePoint char_to_lattice(const CharVector& k) const {
        if (!is_characteristic(k)) throw std::invalid_argument("vector is not characteristic");
        LatticePoint s(size());
        for (size_t i = 0; i < size(); ++i) s[i] = Rational(k[i] + vsum_dot_[i], 2);
        return s;
    }

    CharVector lattice_to_char(const LatticePoint& s) const {
        CharVector k(size());
        for (size_t i = 0; i < size(); ++i) {
            Rational val = 2 * s[i] - vsum_dot_[i];
            if (!is_integer(val)) throw std::invalid_argument("point not in the linking lattice");
            k[i] = int64_t(rat_num(val));
        }
        if (!is_characteristic(k)) throw std::invalid_argument("point not in the linking lattice");
        return k;
    }

    // Rational lift of arrow a: coefficients c over solids with Q_G c = adjacency(a).
    QVec rational_lift(size_t arrow_index) const {
        const size_t a = arrows_.at(arrow_index);
        QVec adj(num_solids());
        for (size_t j = 0; j < num_solids(); ++j) adj[j] = Rational(q_[a][solids_[j]]);
        return mat_vec(solid_inverse(), adj);
    }

    // Rational linking number of arrow components i != j in Y_G:
    // lk = (v_i - vhat_i) . v_j.
    Rational linking(size_t i, size_t j) const {
        const size_t a = arrows_.at(i), b = arrows_.at(j);
        Rational out = Rational(q_[a][b]);
        QVec lift = rational_lift(i);
        for (size_t w = 0; w < num_solids(); ++w) out -= lift[w] * Rational(q_[solids_[w]][b]);
        return out;
    }

    // ---- Spin^c over Y_G ----

    // Number of Spin^c classes = |det Q_G|.
    Int spinc_count() const {
        if (!solid_nonsingular()) throw SingularError("incidence matrix Q_G is singular");
        Int d = rat_num(detg_);
        return d < 0 ? -d : d;
    }

    // Canonical class index of K|_{V_G} in Char(X_G) / 2 im(Q_G). The class is
    // identified through Phi_G with Z^{V_G} / Q_G Z^{V_G}, reduced into the
    // Hermite-normal-form fundamental domain (documented total order: the HNF
    // coordinate vector, compared lexicographically).
    size_t spinc_index(const CharVector& k) const {
        ensure_spinc();
        std::vector<Int> x = solid_phi_integer(k);
        reduce_mod_hnf(x);
        auto it = spinc_lookup_.find(x);
        if (it == spinc_lookup_.end()) throw std::logic_error("spin-c reduction out of table");
        return it->second;
    }

    // Representative characteristic vectors restricted to V_G (one entry per
    // solid vertex, in solid order), one per class, deterministically ordered.
    const std::vector<std::vector<int64_t>>& spinc_representatives() const {
        ensure_spinc();
        return spinc_reps_;
    }

    // K restricted to solids, mapped through Phi_G minus its base offset
    // (an integer vector on which 2 im(Q_G) acts by Q_G translations).
    std::vector<Int> solid_phi_integer(const CharVector& k) const {
        std::vector<Int> x(num_solids());
        for (size_t j = 0; j < num_solids(); ++j) {
            size_t v = solids_[j];
            Int t = Int(k[v]) - Int(q_[v][v]);  // char condition: even
            if (t % 2 != 0) throw std::invalid_argument("vector is not characteristic");
            x[j] = t / 2;
        }
        return x;
    }

private:
    static bool valid_id(const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!(isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
        return true;
    }

    void finish() {
        warnings_.clear();
        solids_.clear();
        arrows_.clear();
        for (size_t v = 0; v < verts_.size(); ++v)
            (verts_[v].arrow ? arrows_ : solids_).push_back(v);
        q_.assign(size(), std::vector<int64_t>(size(), 0));
        for (size_t v = 0; v < size(); ++v) q_[v][v] = verts_[v].weight;
        for (auto [a, b] : edges_) q_[a][b] = q_[b][a] = 1;
        for (size_t a : arrows_) {
            size_t deg = 0;
            bool solid_neighbor = false;
            for (auto [x, y] : edges_) {
                if (x == a || y == a) {
                    ++deg;
                    size_t o = (x == a) ? y : x;
                    if (!verts_[o].arrow) solid_neighbor = true;
                }
            }
            if (deg != 1 || !solid_neighbor)
                warnings_.push_back("arrow '" + verts_[a].id +
                                    "' has nonstandard valence; gradings are unvalidated");
        }
        vsum_dot_.assign(size(), 0);
        for (size_t i = 0; i < size(); ++i)
            for (size_t j = 0; j < size(); ++j) vsum_dot_[i] += q_[j][i];

        qg_.assign(num_solids(), QVec(num_solids(), Rational(0)));
        for (size_t i = 0; i < num_solids(); ++i)
            for (size_t j = 0; j < num_solids(); ++j) qg_[i][j] = Rational(q_[solids_[i]][solids_[j]]);
        detg_ = num_solids() ? det(qg_) : Rational(1);
        if (detg_ != 0 && num_solids()) {
            qginv_ = inverse(qg_);
            negdefg_ = negative_definite(qg_);
        } else {
            negdefg_ = (num_solids() == 0);
        }
        sigg_ = num_solids() ? signature(qg_) : 0;
        spinc_built_ = false;
        hnf_.clear();
        spinc_lookup_.clear();
        spinc_reps_.clear();
    }

    void ensure_spinc() const {
        if (spinc_built_) return;
        if (!solid_nonsingular()) throw SingularError("incidence matrix Q_G is singular");
        if (spinc_count() > 1 << 20)
            throw std::domain_error("too many Spin^c classes to enumerate");
        const_cast<PlumbingGraph*>(this)->build_spinc();
    }

    void build_spinc() {
        spinc_built_ = true;
        const size_t n = num_solids();
        // column HNF of Q_G over Z: lower triangular, positive diagonal
        hnf_.assign(n, std::vector<Int>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) hnf_[i][j] = Int(q_[solids_[i]][solids_[j]]);
        for (size_t r = 0, c = 0; r < n && c < n; ++r) {
            // Euclid across columns c..n-1 on row r
            for (;;) {
                size_t nz = n;
                for (size_t j = c; j < n; ++j)
                    if (hnf_[r][j] != 0 && (nz == n || abs_int(hnf_[r][j]) < abs_int(hnf_[r][nz]))) nz = j;
                if (nz == n) break;
                if (nz != c)
                    for (size_t i = 0; i < n; ++i) std::swap(hnf_[i][nz], hnf_[i][c]);
                bool clean = true;
                for (size_t j = c + 1; j < n; ++j) {
                    if (hnf_[r][j] == 0) continue;
                    Int q = divide_floor(hnf_[r][j], hnf_[r][c]);
                    for (size_t i = 0; i < n; ++i) hnf_[i][j] -= q * hnf_[i][c];
                    if (hnf_[r][j] != 0) clean = false;
                }
                if (clean) break;
            }
            if (hnf_[r][c] != 0) {
                if (hnf_[r][c] < 0)
                    for (size_t i = 0; i < n; ++i) hnf_[i][c] = -hnf_[i][c];
                ++c;
            }
        }
        // enumerate fundamental domain 0 <= x_i < h_ii
        std::vector<Int> diag(n);
        for (size_t i = 0; i < n; ++i) diag[i] = hnf_[i][i];
        std::vector<Int> x(n, 0);
        spinc_lookup_.clear();
        spinc_reps_.clear();
        enumerate_domain(diag, x, 0);
    }

    void enumerate_domain(const std::vector<Int>& diag, std::vector<Int>& x, size_t i) {
        if (i == x.size()) {
            std::vector<Int> y = x;
            reduce_mod_hnf(y);
            if (!spinc_lookup_.count(y)) {
                size_t idx = spinc_reps_.size();
                spinc_lookup_[y] = idx;
                std::vector<int64_t> rep(num_solids());
                for (size_t j = 0; j < num_solids(); ++j)
                    rep[j] = int64_t(2 * y[j] + Int(q_[solids_[j]][solids_[j]]));
                spinc_reps_.push_back(std::move(rep));
            }
            return;
        }
        for (Int t = 0; t < diag[i]; ++t) {
            x[i] = t;
            enumerate_domain(diag, x, i + 1);
        }
        x[i] = 0;
    }

    void reduce_mod_hnf(std::vector<Int>& x) const {
        const size_t n = x.size();
        for (size_t i = 0; i < n; ++i) {
            if (hnf_[i][i] == 0) continue;
            Int q = divide_floor(x[i], hnf_[i][i]);
            if (q == 0) continue;
            for (size_t r = i; r < n; ++r) x[r] -= q * hnf_[r][i];
        }
    }

    static Int abs_int(const Int& v) { return v < 0 ? -v : v; }
    static Int divide_floor(const Int& a, const Int& b) {
        Int q = a / b, r = a % b;
        if (r != 0 && ((r < 0) != (b < 0))) --q;
        return q;
    }

    std::vector<Vertex> verts_;
    std::vector<std::pair<size_t, size_t>> edges_;
    std::vector<size_t> solids_, arrows_;
    std::vector<std::vector<int64_t>> q_;
    std::vector<int64_t> vsum_dot_;  // (sum of all v) . v_i
    QMat qg_, qginv_;
    Rational detg_;
    int sigg_ = 0;
    bool negdefg_ = false;
    bool spinc_built_ = false;
    std::vector<std::vector<Int>> hnf_;
    std::map<std::vector<Int>, size_t> spinc_lookup_;
    std::vector<std::vector<int64_t>> spinc_reps_;
    std::vector<std::string> warnings_;
};

}  // namespace plumblat
