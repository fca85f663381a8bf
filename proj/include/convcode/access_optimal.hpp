// Access-optimal scalar convertible codes for the merge regime.
//
// A pair couples a systematic [kI + r, kI] initial code with a systematic
// [s*kI + r, s*kI] final code so that final parity i restricted to the
// stripe-s block of the message equals combine[i][s] * p_i, where p_i is the
// i-th initial parity column. Conversion then only reads parity i of every
// stripe to produce final parity i: s*r symbol reads and r writes, which
// meets the access lower bound with equality.
//
// Coefficients are sampled at random and verified exhaustively: a systematic
// code is MDS exactly when every square submatrix of its parity block is
// nonsingular, and total nonsingularity of the stacked final parity block
// also covers every truncation to fewer stripes and every puncture to fewer
// parities. Sampling retries on a fixed budget, then escalates to a wider
// field; the attempt count is kept for reporting.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "convcode/vector_code.hpp"

namespace convcode {

struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct construction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct conversion_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Merge-regime parameters: sigma initial [kI + rI, kI] stripes merge into one
// [sigma*kI + rF, sigma*kI] stripe.
struct MergeParams {
    std::size_t k_initial = 0;
    std::size_t r_initial = 0;
    std::size_t r_final = 0;
    std::size_t sigma = 0;

    std::size_t n_initial() const { return k_initial + r_initial; }
    std::size_t k_final() const { return sigma * k_initial; }
    std::size_t n_final() const { return k_final() + r_final; }
    std::size_t message_symbols() const { return k_final(); }  // M = lcm side

    void validate() const {
        if (sigma < 2) {
            throw parameter_error("merge regime needs sigma >= 2");
        }
        if (k_initial < 1 || r_initial < 1 || r_final < 1) {
            throw parameter_error("kI, rI and rF must all be >= 1");
        }
    }
};

struct AccessBound {
    std::size_t read_symbols;   // d1
    std::size_t write_symbols;  // d2
};

// Read/write access floor for linear MDS merge conversions. In the merge
// regime the mixed term of the general bound vanishes, leaving sigma*rF reads
// when rI >= rF and rF < kI, and a full re-read of M symbols otherwise.
inline AccessBound access_lower_bound(const MergeParams& p) {
    p.validate();
    const bool cheap = p.r_initial >= p.r_final && p.r_final < p.k_initial;
    return AccessBound{cheap ? p.sigma * p.r_final : p.message_symbols(), p.r_final};
}

// Every square submatrix nonsingular (superregularity). This single predicate
// certifies the MDS property of the systematic code together with all of its
// parity punctures and message-prefix truncations.
inline bool totally_nonsingular(const Matrix& m) {
    const std::size_t max_t = std::min(m.rows(), m.cols());
    for (std::size_t t = 1; t <= max_t; ++t) {
        bool ok = for_each_subset(m.rows(), t, [&](const std::vector<std::size_t>& rows) {
            return for_each_subset(m.cols(), t, [&](const std::vector<std::size_t>& cols) {
                return m.select(rows, cols).invertible();
            });
        });
        if (!ok) {
            return false;
        }
    }
    return true;
}

inline felem random_nonzero(const Field& f, std::mt19937_64& rng) {
    return static_cast<felem>(1 + rng() % (f.order() - 1));
}

inline Matrix systematic_gen(const Field& f, std::size_t k, const Matrix& parity) {
    Matrix gen(f, k, k + parity.cols());
    for (std::size_t i = 0; i < k; ++i) {
        gen.at(i, i) = 1;
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < parity.cols(); ++j) {
            gen.at(i, k + j) = parity.at(i, j);
        }
    }
    return gen;
}

struct AccessOptimalPair {
    std::size_t k_initial = 0;
    std::size_t sigma = 0;
    std::size_t r = 0;
    VectorCode initial_code;                     // [kI + r, kI, 1]
    VectorCode final_code;                       // [sigma*kI + r, sigma*kI, 1]
    std::vector<std::vector<felem>> parity_vectors;  // r columns p_i, each of length kI
    std::vector<std::vector<felem>> combine;         // combine[i][s], r x sigma
    unsigned attempts = 0;                       // sampling attempts across all fields tried
    unsigned field_width = 0;                    // width that finally succeeded

    const Field& field() const { return initial_code.field(); }
};

inline constexpr unsigned kConstructionRetries = 64;

namespace detail {

inline std::vector<unsigned> escalation_widths(unsigned start) {
    std::vector<unsigned> widths;
    for (unsigned w : {4u, 8u, 16u}) {
        if (w >= start) {
            widths.push_back(w);
        }
    }
    if (widths.empty()) {
        throw parameter_error("field width must be 4, 8 or 16");
    }
    return widths;
}

}  // namespace detail

inline AccessOptimalPair construct_access_optimal(std::size_t k_initial, std::size_t sigma,
                                                  std::size_t r, std::uint64_t seed,
                                                  unsigned field_width = 8) {
    if (sigma < 2 || k_initial < 1 || r < 1) {
        throw parameter_error("need sigma >= 2, kI >= 1, r >= 1");
    }
    std::mt19937_64 rng(seed);
    unsigned attempts = 0;
    for (unsigned width : detail::escalation_widths(field_width)) {
        Field f(width);
        for (unsigned trial = 0; trial < kConstructionRetries; ++trial) {
            ++attempts;
            std::vector<std::vector<felem>> parity_vectors(r, std::vector<felem>(k_initial));
            std::vector<std::vector<felem>> combine(r, std::vector<felem>(sigma));
            for (auto& col : parity_vectors) {
                for (auto& v : col) {
                    v = random_nonzero(f, rng);
                }
            }
            for (auto& row : combine) {
                for (auto& v : row) {
                    v = random_nonzero(f, rng);
                }
            }
            Matrix parity_initial(f, k_initial, r);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t t = 0; t < k_initial; ++t) {
                    parity_initial.at(t, i) = parity_vectors[i][t];
                }
            }
            Matrix parity_final(f, sigma * k_initial, r);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t s = 0; s < sigma; ++s) {
                    for (std::size_t t = 0; t < k_initial; ++t) {
                        parity_final.at(s * k_initial + t, i) =
                            f.mul(combine[i][s], parity_vectors[i][t]);
                    }
                }
            }
            if (!totally_nonsingular(parity_initial) || !totally_nonsingular(parity_final)) {
                continue;
            }
            VectorCode initial(f, k_initial + r, k_initial, 1, true,
                               systematic_gen(f, k_initial, parity_initial));
            VectorCode final_code(f, sigma * k_initial + r, sigma * k_initial, 1, true,
                                  systematic_gen(f, sigma * k_initial, parity_final));
            return AccessOptimalPair{k_initial,
                                     sigma,
                                     r,
                                     std::move(initial),
                                     std::move(final_code),
                                     std::move(parity_vectors),
                                     std::move(combine),
                                     attempts,
                                     width};
        }
    }
    throw construction_error("access-optimal construction failed after " +
                             std::to_string(attempts) + " attempts (field too small)");
}

// Plain systematic MDS code with a random superregular parity block; used by
// the default re-encode conversion path where no coupling is required.
inline VectorCode random_systematic_mds(std::size_t n, std::size_t k, std::uint64_t seed,
                                        unsigned field_width = 8) {
    if (k < 1 || n <= k) {
        throw parameter_error("need n > k >= 1");
    }
    std::mt19937_64 rng(seed);
    for (unsigned width : detail::escalation_widths(field_width)) {
        Field f(width);
        for (unsigned trial = 0; trial < kConstructionRetries; ++trial) {
            Matrix parity(f, k, n - k);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j + k < n; ++j) {
                    parity.at(i, j) = random_nonzero(f, rng);
                }
            }
            if (totally_nonsingular(parity)) {
                return VectorCode(f, n, k, 1, true, systematic_gen(f, k, parity));
            }
        }
    }
    throw construction_error("random MDS sampling exhausted its retry budget");
}

// Final code limited to the first sigma' stripes and the first r' parities;
// well defined thanks to property (4) of the pair.
inline VectorCode truncated_final(const AccessOptimalPair& pair, std::size_t sigma_prime,
                                  std::size_t r_prime) {
    if (sigma_prime < 1 || sigma_prime > pair.sigma || r_prime < 1 || r_prime > pair.r) {
        throw parameter_error("truncation outside the supported range");
    }
    const Field& f = pair.field();
    const std::size_t k = sigma_prime * pair.k_initial;
    Matrix parity(f, k, r_prime);
    for (std::size_t i = 0; i < r_prime; ++i) {
        for (std::size_t s = 0; s < sigma_prime; ++s) {
            for (std::size_t t = 0; t < pair.k_initial; ++t) {
                parity.at(s * pair.k_initial + t, i) =
                    f.mul(pair.combine[i][s], pair.parity_vectors[i][t]);
            }
        }
    }
    return VectorCode(f, k + r_prime, k, 1, true, systematic_gen(f, k, parity));
}

struct AccessOptimalConversion {
    std::vector<felem> codeword;  // codeword of truncated_final(pair, sigma', r')
    std::size_t symbols_read = 0;
    std::size_t symbols_written = 0;
};

inline void check_stripe(const VectorCode& code, std::span<const felem> stripe) {
    if (stripe.size() != code.codeword_len()) {
        throw conversion_error("stripe has the wrong length");
    }
    if (code.systematic()) {
        std::span<const felem> prefix = stripe.subspan(0, code.message_len());
        if (encode(code, prefix) != std::vector<felem>(stripe.begin(), stripe.end())) {
            throw conversion_error("stripe is not a codeword of the initial code");
        }
    }
}

// Merges sigma' initial stripes by combining their first r' parities; the
// systematic part is carried over unchanged. Reads sigma'*r' symbols, writes
// r' symbols.
inline AccessOptimalConversion convert_access_optimal(const AccessOptimalPair& pair,
                                                      const std::vector<std::vector<felem>>& stripes,
                                                      std::size_t r_prime, std::size_t sigma_prime) {
    if (sigma_prime != stripes.size()) {
        throw parameter_error("stripe count must equal sigma'");
    }
    if (sigma_prime < 1 || sigma_prime > pair.sigma || r_prime < 1 || r_prime > pair.r) {
        throw parameter_error("conversion target outside the supported range");
    }
    const Field& f = pair.field();
    const std::size_t k = pair.k_initial;
    for (const auto& stripe : stripes) {
        check_stripe(pair.initial_code, stripe);
    }
    AccessOptimalConversion out;
    out.codeword.assign(sigma_prime * k + r_prime, 0);
    for (std::size_t s = 0; s < sigma_prime; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            out.codeword[s * k + t] = stripes[s][t];  // unchanged symbols stay in place
        }
    }
    for (std::size_t i = 0; i < r_prime; ++i) {
        felem acc = 0;
        for (std::size_t s = 0; s < sigma_prime; ++s) {
            acc ^= f.mul(pair.combine[i][s], stripes[s][k + i]);
        }
        out.codeword[sigma_prime * k + i] = acc;
    }
    out.symbols_read = sigma_prime * r_prime;
    out.symbols_written = r_prime;
    return out;
}

inline AccessOptimalConversion convert_access_optimal(const AccessOptimalPair& pair,
                                                      const std::vector<std::vector<felem>>& stripes) {
    return convert_access_optimal(pair, stripes, pair.r, pair.sigma);
}

}  // namespace convcode
