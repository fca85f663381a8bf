#include <random>

#include "convcode/io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace convcode;
using namespace testutil;

TEST_CASE("hex round trip is fixed-width and lossless") {
    std::vector<felem> elems{0x0, 0x1, 0xAB, 0xFF};
    CHECK(elems_to_hex(elems, 8) == "0001abff");
    CHECK(hex_to_elems("0001abff", 8) == elems);

    std::vector<felem> wide{0x1234, 0x0, 0xFFFF};
    CHECK(elems_to_hex(wide, 16) == "12340000ffff");
    CHECK(hex_to_elems("12340000ffff", 16) == wide);

    CHECK(elems_to_hex(std::vector<felem>{0xA, 0x3}, 4) == "a3");
    CHECK_THROWS_AS(hex_to_elems("abc", 8), format_error);
    CHECK_THROWS_AS(hex_to_elems("zz", 8), format_error);
}

TEST_CASE("vector code JSON round trip is bit-exact") {
    Field f(8);
    VectorCode code = cauchy_mds(f, 6, 4);
    json j = code_to_json(code);
    const std::string once = j.dump();
    VectorCode back = code_from_json(j);
    CHECK(back.gen() == code.gen());
    CHECK(back.systematic() == code.systematic());
    CHECK(code_to_json(back).dump() == once);

    // schema fields present
    CHECK(j.at("field_width") == 8);
    CHECK(j.at("modulus_hex") == "0x11d");
    CHECK(j.at("n") == 6);
    CHECK(j.at("k") == 4);
    CHECK(j.at("alpha") == 1);
}

TEST_CASE("pair and multi-code documents round trip") {
    AccessOptimalPair pair = construct_access_optimal(4, 2, 2, 7);
    json pj = pair_to_json(pair);
    AccessOptimalPair pback = pair_from_json(pj);
    CHECK(pair_to_json(pback).dump() == pj.dump());
    CHECK(pback.combine == pair.combine);
    CHECK(pback.parity_vectors == pair.parity_vectors);

    MultiTargetCode multi = construct_multi(4, 1, 2, {1, 2, 3}, 7);
    json mj = multi_to_json(multi);
    MultiTargetCode mback = multi_from_json(mj);
    CHECK(multi_to_json(mback).dump() == mj.dump());
    CHECK(mback.piggy == multi.piggy);
    CHECK(mback.initial_code.gen() == multi.initial_code.gen());

    // reloaded codes convert identically
    std::mt19937_64 rng(42);
    std::vector<felem> message = random_message(multi.field(), 2 * 4 * 6, rng);
    std::vector<std::vector<felem>> stripes;
    for (std::size_t s = 0; s < 2; ++s) {
        std::span<const felem> part(message.data() + s * 24, 24);
        stripes.push_back(encode(multi.initial_code, part));
    }
    CHECK(convert_multi(multi, stripes, 2, 2).final_stripe ==
          convert_multi(mback, stripes, 2, 2).final_stripe);
}

TEST_CASE("converter documents cover all three regimes") {
    for (MergeParams p : {MergeParams{4, 1, 2, 2}, MergeParams{4, 2, 2, 2}, MergeParams{3, 1, 4, 2}}) {
        MergeConverter conv = construct_converter(p, 11);
        json j = converter_to_json(conv);
        MergeConverter back = converter_from_json(j);
        CHECK(converter_to_json(back).dump() == j.dump());
        CHECK(back.regime == conv.regime);
        CHECK(back.initial_code().gen() == conv.initial_code().gen());
    }
    CHECK_THROWS_AS(converter_from_json(json{{"format", "something-else"}}), format_error);
}

TEST_CASE("trace CSV and summary") {
    BandwidthOptimalCode code = construct_bandwidth_optimal(4, 1, 2, 2, 7);
    std::mt19937_64 rng(1);
    std::vector<felem> message = random_message(code.core.field(), 16, rng);
    std::vector<std::vector<felem>> stripes;
    for (std::size_t s = 0; s < 2; ++s) {
        std::span<const felem> part(message.data() + s * 8, 8);
        stripes.push_back(encode(code.core.initial_code, part));
    }
    MergeConversionResult res = convert(code, stripes);

    std::ostringstream csv;
    write_trace_csv(csv, res.trace);
    const std::string text = csv.str();
    CHECK(text.rfind("node_id,role,subsymbols_read,subsymbols_written\n", 0) == 0);
    CHECK(text.find("stripe0.data0,unchanged,1,0\n") != std::string::npos);
    CHECK(text.find("stripe0.parity0,retired,2,0\n") != std::string::npos);
    CHECK(text.find("final.parity1,new,0,2\n") != std::string::npos);

    json summary = trace_summary_json(res.trace, code.core.params_for(2, 2), 2, 2);
    CHECK(summary.at("gamma") == 16);
    CHECK(summary.at("bound") == 16);
    CHECK(summary.at("optimal") == true);
    CHECK(summary.at("default_gamma") == 20);
    CHECK(summary.at("savings_vs_default").get<double>() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(summary.at("beta1") == 2);
    CHECK(summary.at("beta2") == 1);
}
