#include <random>
#include <set>

#include "convcode/vector_code.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace convcode;
using namespace testutil;

TEST_CASE("construction validates shape, rank and systematic prefix") {
    Field f(8);
    CHECK_THROWS_AS(VectorCode(f, 4, 2, 1, false, Matrix(f, 2, 4)), code_error);  // rank 0
    Matrix bad(f, 2, 8);  // wrong column count for n=5
    CHECK_THROWS_AS(VectorCode(f, 5, 2, 1, false, bad), code_error);
    Matrix not_sys(f, 2, 3, {0, 1, 1, 1, 0, 1});
    CHECK_THROWS_AS(VectorCode(f, 3, 2, 1, true, not_sys), code_error);
    CHECK_NOTHROW(VectorCode(f, 3, 2, 1, false, not_sys));
}

TEST_CASE("systematic encode spells the message in the prefix") {
    Field f(8);
    VectorCode code = cauchy_mds(f, 6, 4);
    std::mt19937_64 rng(11);
    std::vector<felem> msg = random_message(f, code.message_len(), rng);
    std::vector<felem> cw = encode(code, msg);
    for (std::size_t i = 0; i < code.message_len(); ++i) {
        CHECK(cw[i] == msg[i]);
    }

    std::vector<felem> zero(code.message_len(), 0);
    CHECK(encode(code, zero) == std::vector<felem>(code.codeword_len(), 0));

    CHECK_THROWS_AS(encode(code, std::vector<felem>(3)), code_error);
}

TEST_CASE("decode recovers the message from every k-subset") {
    Field f(8);
    VectorCode code = cauchy_mds(f, 6, 3);
    REQUIRE(is_mds(code));
    std::mt19937_64 rng(12);
    std::vector<felem> msg = random_message(f, code.message_len(), rng);
    std::vector<felem> cw = encode(code, msg);
    std::size_t subsets = 0;
    for_each_subset(code.n(), code.k(), [&](const std::vector<std::size_t>& picks) {
        std::vector<felem> chunks;
        for (std::size_t s : picks) {
            auto sym = symbol_of(code, cw, s);
            chunks.insert(chunks.end(), sym.begin(), sym.end());
        }
        CHECK(decode_from(code, picks, chunks) == msg);
        ++subsets;
        return true;
    });
    CHECK(subsets == 20);  // C(6,3)
}

TEST_CASE("systematic fast-path decode agrees with the generic inversion") {
    Field f(8);
    VectorCode sys = cauchy_mds(f, 7, 4);
    // Same generator, but decoded through the generic path.
    VectorCode generic(f, sys.n(), sys.k(), sys.alpha(), false, sys.gen());
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<felem> msg = random_message(f, sys.message_len(), rng);
        std::vector<felem> cw = encode(sys, msg);
        for_each_subset(sys.n(), sys.k(), [&](const std::vector<std::size_t>& picks) {
            std::vector<felem> chunks;
            for (std::size_t s : picks) {
                auto sym = symbol_of(sys, cw, s);
                chunks.insert(chunks.end(), sym.begin(), sym.end());
            }
            CHECK(decode_from(sys, picks, chunks) == decode_from(generic, picks, chunks));
            return true;
        });
    }
}

TEST_CASE("decode input validation") {
    Field f(8);
    VectorCode code = cauchy_mds(f, 5, 3);
    std::vector<felem> chunks(3, 0);
    CHECK_THROWS_AS(decode_from(code, std::vector<std::size_t>{0, 1}, chunks), code_error);
    CHECK_THROWS_AS(decode_from(code, std::vector<std::size_t>{0, 1, 1}, chunks), code_error);
    CHECK_THROWS_AS(decode_from(code, std::vector<std::size_t>{0, 1, 9}, chunks), code_error);
}

TEST_CASE("is_mds ground truths") {
    Field f(8);
    CHECK(is_mds(cauchy_mds(f, 6, 3)));
    CHECK(is_mds(VectorCode(f, 3, 3, 2, true, Matrix::identity(f, 6))));  // [k,k,alpha]

    // Two identical symbol column-blocks cannot be MDS for k < n.
    VectorCode base = cauchy_mds(f, 5, 3);
    Matrix gen = base.gen();
    gen.at(0, 4) = gen.at(0, 3);
    gen.at(1, 4) = gen.at(1, 3);
    gen.at(2, 4) = gen.at(2, 3);
    VectorCode repeated(f, 5, 3, 1, true, gen);
    CHECK_FALSE(is_mds(repeated));
}

TEST_CASE("is_mds matches brute-force minimum distance on tiny codes") {
    Field f(4);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 1 + rng() % 2;
        const std::size_t n = k + 1 + rng() % 3;
        const std::size_t alpha = 1 + rng() % 2;
        Matrix gen(f, k * alpha, n * alpha);
        for (std::size_t r = 0; r < gen.rows(); ++r) {
            for (std::size_t c = 0; c < gen.cols(); ++c) {
                gen.at(r, c) = static_cast<felem>(rng() & 0xF);
            }
        }
        if (gen.rank() != k * alpha) {
            continue;
        }
        VectorCode code(f, n, k, alpha, false, gen);
        const bool mds = is_mds(code);
        const std::size_t dist = min_distance_exhaustive(code);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(alpha);
        CHECK(mds == (dist == n - k + 1));
    }
}

TEST_CASE("systematic subset shortcut equals full-rank subset check") {
    Field f(8);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + rng() % 2;
        const std::size_t n = k + 1 + rng() % 3;
        const std::size_t alpha = 1 + rng() % 2;
        Matrix gen(f, k * alpha, n * alpha);
        for (std::size_t r = 0; r < k * alpha; ++r) {
            gen.at(r, r) = 1;
            for (std::size_t c = k * alpha; c < n * alpha; ++c) {
                gen.at(r, c) = static_cast<felem>(rng() & 0xFF);
            }
        }
        VectorCode sys(f, n, k, alpha, true, gen);
        VectorCode generic(f, n, k, alpha, false, gen);
        CHECK(is_mds(sys) == is_mds(generic));
    }
}

TEST_CASE("puncturing") {
    Field f(8);
    VectorCode code = cauchy_mds(f, 6, 4);
    REQUIRE(is_mds(code));

    VectorCode same = puncture(code, {});
    CHECK(same.gen() == code.gen());
    CHECK(same.n() == code.n());

    VectorCode shorter = puncture(code, {5});
    CHECK(shorter.n() == 5);
    CHECK(shorter.k() == 4);
    CHECK(is_mds(shorter));

    // MDS survives any puncture of up to n-k symbols.
    for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = a + 1; b < 6; ++b) {
            VectorCode p = puncture(code, {a, b});
            CHECK(is_mds(p));
        }
    }

    CHECK_THROWS_AS(puncture(code, {0, 1, 2}), code_error);
    CHECK_THROWS_AS(puncture(code, {17}), code_error);
}
