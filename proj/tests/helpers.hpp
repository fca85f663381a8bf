// Shared test fixtures: known-good MDS constructions and small oracles that
// stay independent of the code paths under test.

#pragma once

#include <random>
#include <set>
#include <vector>

#include "convcode/vector_code.hpp"

namespace testutil {

using namespace convcode;

// Systematic scalar Cauchy code [n, k, 1]: parity P[i][j] = 1 / (x_i + y_j)
// with distinct points. Every Cauchy minor is nonsingular, so the code is MDS
// by construction — a ground truth that does not depend on the library's
// randomized constructions.
inline VectorCode cauchy_mds(const Field& f, std::size_t n, std::size_t k) {
    const std::size_t r = n - k;
    Matrix gen(f, k, n);
    for (std::size_t i = 0; i < k; ++i) {
        gen.at(i, i) = 1;
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const felem xi = static_cast<felem>(i);
            const felem yj = static_cast<felem>(k + j);
            gen.at(i, k + j) = f.inv(Field::add(xi, yj));
        }
    }
    return VectorCode(f, n, k, 1, true, std::move(gen));
}

inline std::vector<felem> random_message(const Field& f, std::size_t len, std::mt19937_64& rng) {
    std::vector<felem> m(len);
    for (auto& v : m) {
        v = static_cast<felem>(rng() & f.max_element());
    }
    return m;
}

// Brute-force minimum distance: enumerate every nonzero message and count
// nonzero symbols of its codeword. Only viable for tiny fields/dimensions.
inline std::size_t min_distance_exhaustive(const VectorCode& code) {
    const std::size_t mlen = code.message_len();
    const std::uint64_t q = code.field().order();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < mlen; ++i) {
        total *= q;
    }
    std::size_t best = code.n() + 1;
    std::vector<felem> msg(mlen, 0);
    for (std::uint64_t x = 1; x < total; ++x) {
        std::uint64_t t = x;
        for (std::size_t i = 0; i < mlen; ++i) {
            msg[i] = static_cast<felem>(t % q);
            t /= q;
        }
        std::vector<felem> cw = encode(code, msg);
        std::size_t weight = 0;
        for (std::size_t s = 0; s < code.n(); ++s) {
            auto sym = symbol_of(code, cw, s);
            for (felem v : sym) {
                if (v != 0) {
                    ++weight;
                    break;
                }
            }
        }
        best = std::min(best, weight);
    }
    return best;
}

}  // namespace testutil
