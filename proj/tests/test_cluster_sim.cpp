#include <filesystem>
#include <fstream>
#include <random>

#include "convcode/cluster_sim.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace convcode;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    fs::path p = fs::temp_directory_path() /
                 ("convcode_test_" + std::to_string(::getpid()) + "_" + tag + "_" +
                  std::to_string(counter++));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<felem>> random_stripe_messages(const MultiTargetCode& code,
                                                       std::size_t sigma, std::size_t units,
                                                       std::mt19937_64& rng) {
    std::vector<std::vector<felem>> msgs;
    for (std::size_t s = 0; s < sigma; ++s) {
        msgs.push_back(
            random_message(code.field(), code.initial_code.message_len() * units, rng));
    }
    return msgs;
}

}  // namespace

TEST_CASE("write_stripes lays out one chunk per node with the exact size") {
    MultiTargetCode code = construct_multi(4, 1, 2, {2}, 7);  // worked-example shape, alpha = 2
    NodeStore store{fresh_dir("layout"), 1};
    std::mt19937_64 rng(1);
    auto msgs = random_stripe_messages(code, 2, 1, rng);
    Manifest manifest = write_stripes(store, code, msgs);
    CHECK(manifest.size() == 10);
    for (const ChunkInfo& c : manifest) {
        CHECK(c.bytes == 2);  // alpha * 1 unit * 1 byte
        CHECK(fs::file_size(store.root / c.path) == 2);
    }

    // zero message -> zero chunks
    NodeStore zstore{fresh_dir("zero"), 1};
    std::vector<std::vector<felem>> zero(2, std::vector<felem>(8, 0));
    write_stripes(zstore, code, zero);
    CHECK(slurp(zstore.root / "s0_n4.chunk") == std::vector<std::uint8_t>{0, 0});

    // read-back equals the in-memory encoding
    std::vector<felem> cw = encode(code.initial_code, msgs[0]);
    auto chunk = slurp(store.root / "s0_n4.chunk");
    CHECK(chunk[0] == (cw[4 * 2 + 0] & 0xFF));
    CHECK(chunk[1] == (cw[4 * 2 + 1] & 0xFF));
}

TEST_CASE("conversion over files moves exactly the analytical bytes") {
    MultiTargetCode code = construct_multi(4, 1, 2, {2}, 7);
    NodeStore store{fresh_dir("convert"), 1};
    std::mt19937_64 rng(2);
    auto msgs = random_stripe_messages(code, 2, 1, rng);
    write_stripes(store, code, msgs);

    auto before0 = slurp(store.root / "s0_n0.chunk");
    SimulatedConversion sim = run_conversion(store, code, 2, 2);

    std::size_t read_bytes = 0;
    std::size_t write_bytes = 0;
    for (const Transfer& t : sim.log.entries) {
        (t.dst == "coordinator" ? read_bytes : write_bytes) += t.bytes;
    }
    CHECK(read_bytes == 12);
    CHECK(write_bytes == 4);
    CHECK(sim.log.total_bytes() == 16);
    CHECK(sim.trace.gamma() == 16);

    // unchanged chunks untouched
    CHECK(slurp(store.root / "s0_n0.chunk") == before0);

    // new chunks hold the same parities as the in-memory conversion
    std::vector<std::vector<felem>> stripes;
    for (std::size_t s = 0; s < 2; ++s) {
        stripes.push_back(encode(code.initial_code, msgs[s]));
    }
    MergeConversionResult direct = convert_multi(code, stripes, 2, 2);
    for (std::size_t v = 0; v < 2; ++v) {
        auto chunk = slurp(store.root / detail::final_chunk_name(v));
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(chunk[j] == (direct.final_stripe[(8 + v) * 2 + j] & 0xFF));
        }
    }
}

TEST_CASE("payload scaling is exactly linear") {
    MultiTargetCode code = construct_multi(4, 1, 2, {2}, 7);
    std::mt19937_64 rng(3);
    for (std::size_t units : {1u, 1000u}) {
        NodeStore store{fresh_dir("scale" + std::to_string(units)), units};
        auto msgs = random_stripe_messages(code, 2, units, rng);
        write_stripes(store, code, msgs);
        SimulatedConversion sim = run_conversion(store, code, 2, 2);
        CHECK(sim.log.total_bytes() == 16 * units);
    }
}

TEST_CASE("failure drills on initial and final configurations") {
    MultiTargetCode code = construct_multi(4, 1, 2, {2}, 7);
    NodeStore store{fresh_dir("drill"), 3};
    std::mt19937_64 rng(4);
    auto msgs = random_stripe_messages(code, 2, 3, rng);
    write_stripes(store, code, msgs);
    SimulatedConversion sim = run_conversion(store, code, 2, 2);

    // initial stripe drill: erase the parity node, recover from data nodes
    std::vector<std::string> stripe0_paths;
    for (std::size_t i = 0; i < 5; ++i) {
        stripe0_paths.push_back(detail::chunk_name(0, i));
    }
    CHECK(failure_drill(store, code.initial_code, stripe0_paths, {4}) == msgs[0]);
    CHECK(failure_drill(store, code.initial_code, stripe0_paths, {}) == msgs[0]);
    CHECK_THROWS_AS(failure_drill(store, code.initial_code, stripe0_paths, {0, 4}),
                    parameter_error);  // rI + 1 erasures

    // final configuration drill over several erasure patterns
    VectorCode final_code = converted_final_code(code, 2, 2);
    std::vector<std::string> final_paths;
    for (const ChunkInfo& c : sim.final_manifest) {
        final_paths.push_back(c.path);
    }
    std::vector<felem> expected;
    for (const auto& m : msgs) {
        expected.insert(expected.end(), m.begin(), m.end());
    }
    for (std::set<std::size_t> erased :
         {std::set<std::size_t>{8, 9}, {0, 1}, {3, 9}, {}, {7}}) {
        CHECK(failure_drill(store, final_code, final_paths, erased) == expected);
    }
    CHECK_THROWS_AS(failure_drill(store, final_code, final_paths, {0, 1, 2}), parameter_error);
}

TEST_CASE("case-1 conversion reads no data chunks at all") {
    MultiTargetCode code = construct_multi(4, 2, 2, {2}, 19);  // rF = rI = 2, alpha = 1
    NodeStore store{fresh_dir("case1"), 2};
    std::mt19937_64 rng(5);
    auto msgs = random_stripe_messages(code, 2, 2, rng);
    write_stripes(store, code, msgs);
    SimulatedConversion sim = run_conversion(store, code, 2, 2);
    for (const Transfer& t : sim.log.entries) {
        CHECK(t.src.find(".data") == std::string::npos);
    }
    CHECK(sim.log.total_bytes() == sim.trace.gamma() * 2);
}

TEST_CASE("GF(2^16) chunks use two bytes per subsymbol") {
    MultiTargetCode code = construct_multi(4, 1, 2, {2}, 7, 16);
    CHECK(code.field().width() == 16);
    NodeStore store{fresh_dir("wide"), 1};
    std::mt19937_64 rng(6);
    auto msgs = random_stripe_messages(code, 2, 1, rng);
    Manifest manifest = write_stripes(store, code, msgs);
    CHECK(manifest[0].bytes == 4);  // alpha=2, 2 bytes per element
    SimulatedConversion sim = run_conversion(store, code, 2, 2);
    CHECK(sim.log.total_bytes() == 16 * 2);

    std::vector<std::string> stripe0_paths;
    for (std::size_t i = 0; i < 5; ++i) {
        stripe0_paths.push_back(detail::chunk_name(0, i));
    }
    CHECK(failure_drill(store, code.initial_code, stripe0_paths, {2}) == msgs[0]);
}
