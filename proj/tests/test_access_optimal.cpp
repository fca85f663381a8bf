#include <random>
#include <set>

#include "convcode/access_optimal.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace convcode;
using namespace testutil;

TEST_CASE("access lower bound follows the two-case formula") {
    CHECK(access_lower_bound({4, 2, 2, 2}).read_symbols == 4);   // rI >= rF, rF < kI
    CHECK(access_lower_bound({4, 2, 2, 2}).write_symbols == 2);
    CHECK(access_lower_bound({4, 1, 2, 2}).read_symbols == 8);   // rI < rF: M
    CHECK(access_lower_bound({2, 3, 3, 2}).read_symbols == 4);   // rF >= kI: M
    CHECK(access_lower_bound({2, 3, 3, 2}).write_symbols == 3);
    CHECK_THROWS_AS(access_lower_bound({4, 1, 2, 1}), parameter_error);
}

TEST_CASE("totally_nonsingular accepts Cauchy blocks and rejects zeros") {
    Field f(8);
    VectorCode cauchy = cauchy_mds(f, 7, 4);
    std::vector<std::size_t> rows{0, 1, 2, 3};
    std::vector<std::size_t> cols{4, 5, 6};
    Matrix parity = cauchy.gen().select(rows, cols);
    CHECK(totally_nonsingular(parity));
    parity.at(1, 1) = 0;
    CHECK_FALSE(totally_nonsingular(parity));

    Matrix rank_deficient(f, 2, 2, {1, 2, 3, 6});  // second row = 3 * first
    CHECK_FALSE(totally_nonsingular(rank_deficient));
}

TEST_CASE("constructed pair is MDS on both sides and reproducible") {
    AccessOptimalPair pair = construct_access_optimal(4, 2, 2, 7);
    CHECK(pair.initial_code.n() == 6);
    CHECK(pair.initial_code.k() == 4);
    CHECK(pair.final_code.n() == 10);
    CHECK(pair.final_code.k() == 8);
    CHECK(is_mds(pair.initial_code));
    CHECK(is_mds(pair.final_code));

    AccessOptimalPair again = construct_access_optimal(4, 2, 2, 7);
    CHECK(pair.initial_code.gen() == again.initial_code.gen());
    CHECK(pair.final_code.gen() == again.final_code.gen());
    CHECK(pair.attempts == again.attempts);

    AccessOptimalPair other = construct_access_optimal(4, 2, 2, 8);
    CHECK(pair.initial_code.gen() != other.initial_code.gen());
}

TEST_CASE("k_initial = 1 replication-like pair works at the first attempt") {
    AccessOptimalPair pair = construct_access_optimal(1, 2, 1, 3);
    CHECK(pair.initial_code.n() == 2);
    CHECK(pair.final_code.n() == 3);
    CHECK(is_mds(pair.initial_code));
    CHECK(is_mds(pair.final_code));
}

TEST_CASE("property (4): every truncation and puncture stays MDS") {
    AccessOptimalPair pair = construct_access_optimal(4, 2, 2, 7);
    for (std::size_t r_prime = 1; r_prime <= pair.r; ++r_prime) {
        std::set<std::size_t> drop;
        for (std::size_t i = pair.k_initial + r_prime; i < pair.initial_code.n(); ++i) {
            drop.insert(i);
        }
        CHECK(is_mds(puncture(pair.initial_code, drop)));
        for (std::size_t sigma_prime = 1; sigma_prime <= pair.sigma; ++sigma_prime) {
            CHECK(is_mds(truncated_final(pair, sigma_prime, r_prime)));
        }
    }
}

TEST_CASE("conversion equals direct final encoding") {
    AccessOptimalPair pair = construct_access_optimal(4, 2, 2, 7);
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<felem> message = random_message(pair.field(), 8, rng);
        std::vector<std::vector<felem>> stripes;
        for (std::size_t s = 0; s < 2; ++s) {
            std::span<const felem> part(message.data() + s * 4, 4);
            stripes.push_back(encode(pair.initial_code, part));
        }
        AccessOptimalConversion conv = convert_access_optimal(pair, stripes);
        CHECK(conv.codeword == encode(pair.final_code, message));
        CHECK(conv.symbols_read == 4);
        CHECK(conv.symbols_written == 2);
    }
}

TEST_CASE("conversion with zeroed stripes and punctured parities stays correct") {
    AccessOptimalPair pair = construct_access_optimal(3, 3, 2, 5);
    std::mt19937_64 rng(43);
    for (std::size_t sigma_prime = 1; sigma_prime <= 3; ++sigma_prime) {
        for (std::size_t r_prime = 1; r_prime <= 2; ++r_prime) {
            std::vector<felem> message = random_message(pair.field(), sigma_prime * 3, rng);
            std::vector<std::vector<felem>> stripes;
            for (std::size_t s = 0; s < sigma_prime; ++s) {
                std::span<const felem> part(message.data() + s * 3, 3);
                stripes.push_back(encode(pair.initial_code, part));
            }
            AccessOptimalConversion conv =
                convert_access_optimal(pair, stripes, r_prime, sigma_prime);
            VectorCode target = truncated_final(pair, sigma_prime, r_prime);
            CHECK(conv.codeword == encode(target, message));
            CHECK(conv.symbols_read == sigma_prime * r_prime);
            CHECK(conv.symbols_written == r_prime);
        }
    }
}

TEST_CASE("all-zero stripes produce all-zero final parities") {
    AccessOptimalPair pair = construct_access_optimal(4, 2, 2, 7);
    std::vector<std::vector<felem>> stripes(2, std::vector<felem>(6, 0));
    AccessOptimalConversion conv = convert_access_optimal(pair, stripes);
    CHECK(conv.codeword == std::vector<felem>(10, 0));
}

TEST_CASE("converted output decodes from every k_final-subset") {
    AccessOptimalPair pair = construct_access_optimal(3, 2, 2, 9);
    std::mt19937_64 rng(44);
    std::vector<felem> message = random_message(pair.field(), 6, rng);
    std::vector<std::vector<felem>> stripes;
    for (std::size_t s = 0; s < 2; ++s) {
        std::span<const felem> part(message.data() + s * 3, 3);
        stripes.push_back(encode(pair.initial_code, part));
    }
    std::vector<felem> cw = convert_access_optimal(pair, stripes).codeword;
    for_each_subset(pair.final_code.n(), pair.final_code.k(),
                    [&](const std::vector<std::size_t>& picks) {
                        std::vector<felem> chunks;
                        for (std::size_t s : picks) {
                            chunks.push_back(cw[s]);
                        }
                        CHECK(decode_from(pair.final_code, picks, chunks) == message);
                        return true;
                    });
}

TEST_CASE("tampered stripe is rejected") {
    AccessOptimalPair pair = construct_access_optimal(4, 2, 2, 7);
    std::mt19937_64 rng(45);
    std::vector<felem> message = random_message(pair.field(), 8, rng);
    std::vector<std::vector<felem>> stripes;
    for (std::size_t s = 0; s < 2; ++s) {
        std::span<const felem> part(message.data() + s * 4, 4);
        stripes.push_back(encode(pair.initial_code, part));
    }
    stripes[1][5] ^= 1;
    CHECK_THROWS_AS(convert_access_optimal(pair, stripes), conversion_error);
}

TEST_CASE("random systematic MDS helper verifies its output") {
    VectorCode code = random_systematic_mds(9, 4, 11);
    CHECK(code.n() == 9);
    CHECK(code.k() == 4);
    CHECK(is_mds(code));
}
