#pragma once

// Dense bit-packed linear algebra over GF(2): rank, kernel, span membership.
// Matrices here stay in the hundreds-to-thousands range (graded pieces of
// free modules), so dense words beat any sparse format.

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

namespace plumblat {

// A GF(2) row vector packed into 64-bit words.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

    size_t size() const { return nbits_; }
    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    void operator^=(const BitVec& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    }

    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }

    // Index of the highest set bit, or -1 if zero.
    long top() const {
        for (size_t k = w_.size(); k-- > 0;) {
            if (w_[k]) return long(k) * 64 + (63 - __builtin_clzll(w_[k]));
        }
        return -1;
    }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : w_) c += size_t(__builtin_popcountll(w));
        return c;
    }

    std::vector<size_t> ones() const {
        std::vector<size_t> out;
        for (size_t k = 0; k < w_.size(); ++k) {
            uint64_t w = w_[k];
            while (w) {
                out.push_back(k * 64 + size_t(__builtin_ctzll(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    bool operator==(const BitVec& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

private:
    size_t nbits_ = 0;
    std::vector<uint64_t> w_;
};

// Incremental GF(2) eliminator: feed vectors, learn rank and independence.
class F2Eliminator {
public:
    // Reduces v against the current basis. Returns the residue (zero if dependent).
    BitVec reduce(BitVec v) const {
        long p;
        while ((p = v.top()) >= 0) {
            if (size_t(p) >= slot_.size() || slot_[size_t(p)] < 0) break;
            v ^= basis_[size_t(slot_[size_t(p)])];
        }
        return v;
    }

    // Adds v to the span. Returns true if it increased the rank.
    bool add(BitVec v) {
        v = reduce(std::move(v));
        long p = v.top();
        if (p < 0) return false;
        if (size_t(p) >= slot_.size()) slot_.resize(size_t(p) + 1, -1);
        slot_[size_t(p)] = long(basis_.size());
        basis_.push_back(std::move(v));
        return true;
    }

    bool contains(const BitVec& v) const { return !reduce(v).any(); }
    size_t rank() const { return basis_.size(); }

private:
    std::vector<long> slot_;  // pivot bit -> basis index, -1 if absent
    std::vector<BitVec> basis_;
};

// Rank and kernel of a GF(2) matrix presented column-wise: columns[j] is the
// image vector of basis element j (nrows bits). The kernel basis is returned
// as combination masks over the column indices.
struct F2RankKernel {
    size_t rank = 0;
    std::vector<BitVec> kernel;  // each has ncols bits
};

inline F2RankKernel f2_rank_kernel_cols(const std::vector<BitVec>& columns, size_t ncols_hint = 0) {
    const size_t ncols = columns.size() ? columns.size() : ncols_hint;
    F2RankKernel out;
    std::vector<long> slot;  // pivot bit -> basis index
    std::vector<BitVec> basis;
    std::vector<BitVec> combos;
    for (size_t j = 0; j < ncols; ++j) {
        BitVec v = columns[j];
        BitVec combo(ncols);
        combo.set(j);
        long p;
        bool dependent = true;
        while ((p = v.top()) >= 0) {
            if (size_t(p) >= slot.size() || slot[size_t(p)] < 0) {
                if (size_t(p) >= slot.size()) slot.resize(size_t(p) + 1, -1);
                slot[size_t(p)] = long(basis.size());
                basis.push_back(std::move(v));
                combos.push_back(std::move(combo));
                dependent = false;
                break;
            }
            size_t bi = size_t(slot[size_t(p)]);
            v ^= basis[bi];
            combo ^= combos[bi];
        }
        if (dependent) out.kernel.push_back(std::move(combo));
    }
    out.rank = basis.size();
    return out;
}

// Row-major GF(2) matrix for the public rank/kernel operation.
class F2Matrix {
public:
    F2Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows, BitVec(cols)) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    void set(size_t r, size_t c) { data_[r].set(c); }
    void flip(size_t r, size_t c) { data_[r].flip(c); }
    bool get(size_t r, size_t c) const { return data_[r].get(c); }

    // Column vectors (rows_ bits each).
    std::vector<BitVec> columns() const {
        std::vector<BitVec> cols(cols_, BitVec(rows_));
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c : data_[r].ones()) cols[c].set(r);
        return cols;
    }

private:
    size_t rows_, cols_;
    std::vector<BitVec> data_;
};

// rank + kernel basis of a matrix, kernel vectors as coefficient masks over columns.
inline F2RankKernel f2_rank_kernel(const F2Matrix& m) {
    return f2_rank_kernel_cols(m.columns(), m.cols());
}

}  // namespace plumblat
