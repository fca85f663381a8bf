// [n, k, alpha] linear vector codes over GF(2^w).
//
// A codeword is n symbols of alpha subsymbols each, stored as one contiguous
// vector in symbol-major order: subsymbol (i, j) — coordinate j of symbol i —
// sits at index i*alpha + j. Encoding is the row-vector product m * G with G
// of shape (k*alpha) x (n*alpha). MDS verification is exhaustive over all
// k-subsets of symbols; for systematic codes each subset check reduces by
// block elimination to invertibility of a (b*alpha)-square minor of the
// parity block, where b is the number of parity symbols picked — the same
// predicate, far fewer operations.

#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "convcode/matrix.hpp"
#include "convcode/subsets.hpp"

namespace convcode {

struct code_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class VectorCode {
public:
    VectorCode(Field field, std::size_t n, std::size_t k, std::size_t alpha, bool systematic,
               Matrix gen)
        : field_(std::move(field)),
          n_(n),
          k_(k),
          alpha_(alpha),
          systematic_(systematic),
          gen_(std::move(gen)) {
        if (n_ == 0 || k_ == 0 || alpha_ == 0 || k_ > n_) {
            throw code_error("invalid [n, k, alpha] parameters");
        }
        if (gen_.rows() != k_ * alpha_ || gen_.cols() != n_ * alpha_) {
            throw code_error("generator must be (k*alpha) x (n*alpha)");
        }
        if (gen_.field() != field_) {
            throw code_error("generator field mismatch");
        }
        if (gen_.rank() != k_ * alpha_) {
            throw code_error("generator is rank deficient");
        }
        if (systematic_ && !systematic_prefix_ok()) {
            throw code_error("systematic code must start with an identity block");
        }
    }

    const Field& field() const { return field_; }
    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t alpha() const { return alpha_; }
    bool systematic() const { return systematic_; }
    const Matrix& gen() const { return gen_; }

    std::size_t message_len() const { return k_ * alpha_; }
    std::size_t codeword_len() const { return n_ * alpha_; }

private:
    bool systematic_prefix_ok() const {
        for (std::size_t r = 0; r < k_ * alpha_; ++r) {
            for (std::size_t c = 0; c < k_ * alpha_; ++c) {
                if (gen_.at(r, c) != (r == c ? 1 : 0)) {
                    return false;
                }
            }
        }
        return true;
    }

    Field field_;
    std::size_t n_;
    std::size_t k_;
    std::size_t alpha_;
    bool systematic_;
    Matrix gen_;
};

inline std::span<const felem> symbol_of(const VectorCode& code, std::span<const felem> codeword,
                                        std::size_t i) {
    return codeword.subspan(i * code.alpha(), code.alpha());
}

inline std::vector<felem> encode(const VectorCode& code, std::span<const felem> message) {
    if (message.size() != code.message_len()) {
        throw code_error("message must have k*alpha subsymbols");
    }
    return vec_mat_mul(code.field(), message, code.gen());
}

namespace detail {

// Column indices of the generator covering the given symbols.
inline std::vector<std::size_t> symbol_columns(const VectorCode& code,
                                               std::span<const std::size_t> symbols) {
    std::vector<std::size_t> cols;
    cols.reserve(symbols.size() * code.alpha());
    for (std::size_t s : symbols) {
        for (std::size_t j = 0; j < code.alpha(); ++j) {
            cols.push_back(s * code.alpha() + j);
        }
    }
    return cols;
}

inline std::vector<std::size_t> all_rows(const VectorCode& code) {
    std::vector<std::size_t> rows(code.message_len());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i] = i;
    }
    return rows;
}

// For a systematic code and a k-subset of symbols, the kα x kα submatrix of G
// is invertible iff the parity minor P[rows of systematic symbols not picked,
// cols of parity symbols picked] is invertible.
inline Matrix parity_minor(const VectorCode& code, std::span<const std::size_t> picks) {
    const std::size_t k = code.k();
    const std::size_t alpha = code.alpha();
    std::vector<bool> picked_sys(k, false);
    std::vector<std::size_t> parity_cols;
    for (std::size_t s : picks) {
        if (s < k) {
            picked_sys[s] = true;
        } else {
            for (std::size_t j = 0; j < alpha; ++j) {
                parity_cols.push_back(s * alpha + j);
            }
        }
    }
    std::vector<std::size_t> missing_rows;
    for (std::size_t s = 0; s < k; ++s) {
        if (!picked_sys[s]) {
            for (std::size_t j = 0; j < alpha; ++j) {
                missing_rows.push_back(s * alpha + j);
            }
        }
    }
    return code.gen().select(missing_rows, parity_cols);
}

}  // namespace detail

inline void check_picks(const VectorCode& code, std::span<const std::size_t> picks) {
    if (picks.size() != code.k()) {
        throw code_error("need exactly k symbol indices");
    }
    std::set<std::size_t> uniq(picks.begin(), picks.end());
    if (uniq.size() != picks.size()) {
        throw code_error("symbol indices must be distinct");
    }
    if (*uniq.rbegin() >= code.n()) {
        throw code_error("symbol index out of range");
    }
}

// Recovers the message from the symbols listed in picks (chunks holds their
// contents concatenated in picks order). Throws singular_matrix_error when
// the submatrix is singular, which signals a non-MDS code for that subset.
inline std::vector<felem> decode_from(const VectorCode& code, std::span<const std::size_t> picks,
                                      std::span<const felem> chunks) {
    check_picks(code, picks);
    if (chunks.size() != code.k() * code.alpha()) {
        throw code_error("chunks must hold k*alpha subsymbols");
    }
    const Field& f = code.field();
    const std::size_t alpha = code.alpha();
    if (code.systematic()) {
        // Read picked systematic symbols straight into the message, then solve
        // the parity minor for the missing ones.
        std::vector<felem> message(code.message_len(), 0);
        std::vector<std::size_t> missing_rows;
        std::vector<std::size_t> parity_cols;
        std::vector<felem> parity_chunks;
        for (std::size_t idx = 0; idx < picks.size(); ++idx) {
            const std::size_t s = picks[idx];
            std::span<const felem> chunk = chunks.subspan(idx * alpha, alpha);
            if (s < code.k()) {
                std::copy(chunk.begin(), chunk.end(), message.begin() + s * alpha);
            } else {
                for (std::size_t j = 0; j < alpha; ++j) {
                    parity_cols.push_back(s * alpha + j);
                    parity_chunks.push_back(chunk[j]);
                }
            }
        }
        std::vector<bool> have(code.k(), false);
        for (std::size_t s : picks) {
            if (s < code.k()) {
                have[s] = true;
            }
        }
        for (std::size_t s = 0; s < code.k(); ++s) {
            if (!have[s]) {
                for (std::size_t j = 0; j < alpha; ++j) {
                    missing_rows.push_back(s * alpha + j);
                }
            }
        }
        if (missing_rows.empty()) {
            return message;
        }
        // parity_chunks = m_known * P[known, B] + m_missing * P[missing, B]
        std::vector<std::size_t> known_rows;
        for (std::size_t r = 0; r < code.message_len(); ++r) {
            if (!std::binary_search(missing_rows.begin(), missing_rows.end(), r)) {
                known_rows.push_back(r);
            }
        }
        std::vector<felem> known_vals;
        known_vals.reserve(known_rows.size());
        for (std::size_t r : known_rows) {
            known_vals.push_back(message[r]);
        }
        Matrix p_known = code.gen().select(known_rows, parity_cols);
        Matrix p_missing = code.gen().select(missing_rows, parity_cols);
        std::vector<felem> rhs = vec_mat_mul(f, known_vals, p_known);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            rhs[i] ^= parity_chunks[i];
        }
        std::vector<felem> solved = vec_mat_mul(f, rhs, p_missing.inverse());
        for (std::size_t i = 0; i < missing_rows.size(); ++i) {
            message[missing_rows[i]] = solved[i];
        }
        return message;
    }
    std::vector<std::size_t> cols = detail::symbol_columns(code, picks);
    std::vector<std::size_t> rows = detail::all_rows(code);
    Matrix sub = code.gen().select(rows, cols);
    return vec_mat_mul(f, chunks, sub.inverse());
}

// True iff every k-subset of symbols spans the message space.
inline bool is_mds(const VectorCode& code) {
    const std::size_t n = code.n();
    const std::size_t k = code.k();
    if (code.systematic()) {
        return for_each_subset(n, k, [&](const std::vector<std::size_t>& picks) {
            return detail::parity_minor(code, picks).invertible();
        });
    }
    std::vector<std::size_t> rows = detail::all_rows(code);
    return for_each_subset(n, k, [&](const std::vector<std::size_t>& picks) {
        std::vector<std::size_t> cols = detail::symbol_columns(code, picks);
        return code.gen().select(rows, cols).invertible();
    });
}

// Removes the given symbols from the code. MDS survives puncturing by up to
// n - k symbols.
inline VectorCode puncture(const VectorCode& code, const std::set<std::size_t>& drop) {
    if (drop.size() > code.n() - code.k()) {
        throw code_error("cannot puncture more than n - k symbols");
    }
    if (!drop.empty() && *drop.rbegin() >= code.n()) {
        throw code_error("puncture index out of range");
    }
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < code.n(); ++s) {
        if (drop.count(s) == 0) {
            keep.push_back(s);
        }
    }
    std::vector<std::size_t> cols = detail::symbol_columns(code, keep);
    std::vector<std::size_t> rows = detail::all_rows(code);
    bool systematic = code.systematic();
    if (systematic) {
        for (std::size_t s : drop) {
            if (s < code.k()) {
                systematic = false;
            }
        }
    }
    return VectorCode(code.field(), keep.size(), code.k(), code.alpha(), systematic,
                      code.gen().select(rows, cols));
}

}  // namespace convcode
