#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("convcode_cli_" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path log = work_dir() / ("out" + std::to_string(counter++) + ".log");
    const std::string cmd = std::string(CONVCODE_CLI_PATH) + " " + args + " > " + log.string() +
                            " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(raw), buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("construct then convert reproduces the worked-example summary") {
    const fs::path code = work_dir() / "ex1.json";
    RunResult c = run_cli("construct --ki 4 --ri 1 --rf 2 --sigma 2 --seed 7 --out " +
                          code.string());
    CHECK(c.exit_code == 0);
    CHECK(c.output.find("GF(2^8)") != std::string::npos);

    const fs::path out = work_dir() / "ex1_run";
    RunResult v = run_cli("convert --code " + code.string() + " --seed 7 --out " + out.string());
    CHECK(v.exit_code == 0);
    json summary = json::parse(slurp(out / "summary.json"));
    CHECK(summary.at("gamma") == 16);
    CHECK(summary.at("bound") == 16);
    CHECK(summary.at("optimal") == true);
    CHECK(summary.at("reads") == 12);
    CHECK(summary.at("writes") == 4);
    CHECK(summary.at("savings_vs_default").get<double>() == doctest::Approx(0.2));

    const std::string trace = slurp(out / "trace.csv");
    CHECK(trace.rfind("node_id,role,subsymbols_read,subsymbols_written\n", 0) == 0);
    CHECK(trace.find("stripe1.parity0,retired,2,0") != std::string::npos);
}

TEST_CASE("construct output is byte-deterministic for a fixed seed") {
    const fs::path a = work_dir() / "det_a.json";
    const fs::path b = work_dir() / "det_b.json";
    const fs::path c = work_dir() / "det_c.json";
    CHECK(run_cli("construct --ki 3 --ri 1 --rf 2 --sigma 2 --seed 11 --out " + a.string())
              .exit_code == 0);
    CHECK(run_cli("construct --ki 3 --ri 1 --rf 2 --sigma 2 --seed 11 --out " + b.string())
              .exit_code == 0);
    CHECK(run_cli("construct --ki 3 --ri 1 --rf 2 --sigma 2 --seed 12 --out " + c.string())
              .exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
}

TEST_CASE("multi-target construct converts to every supported target") {
    const fs::path code = work_dir() / "multi.json";
    RunResult c = run_cli("construct --ki 4 --ri 1 --rf-set 1,2,3 --sigma 2 --seed 7 --out " +
                          code.string());
    CHECK(c.exit_code == 0);
    CHECK(c.output.find("alpha=6") != std::string::npos);

    const std::size_t expected[] = {18, 48, 62};
    for (int r = 1; r <= 3; ++r) {
        const fs::path out = work_dir() / ("multi_run" + std::to_string(r));
        RunResult v = run_cli("convert --code " + code.string() + " --rf " + std::to_string(r) +
                              " --seed 3 --out " + out.string());
        CHECK(v.exit_code == 0);
        json summary = json::parse(slurp(out / "summary.json"));
        CHECK(summary.at("gamma") == expected[r - 1]);
        CHECK(summary.at("optimal") == true);
    }
}

TEST_CASE("payload simulation reconciles bytes") {
    const fs::path code = work_dir() / "sim.json";
    CHECK(run_cli("construct --ki 4 --ri 1 --rf 2 --sigma 2 --seed 7 --out " + code.string())
              .exit_code == 0);
    const fs::path out = work_dir() / "sim_run";
    RunResult v = run_cli("convert --code " + code.string() +
                          " --seed 5 --payload-bytes 64 --out " + out.string());
    CHECK(v.exit_code == 0);
    json summary = json::parse(slurp(out / "summary.json"));
    CHECK(summary.at("sim").at("bytes_moved") == 16 * 64);
    CHECK(summary.at("sim").at("bytes_moved") == summary.at("sim").at("expected_bytes"));
    CHECK(fs::exists(out / "transfers.csv"));
    CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("sweep emits the documented CSV header and is deterministic") {
    const fs::path a = work_dir() / "sweep_a.csv";
    const fs::path b = work_dir() / "sweep_b.csv";
    CHECK(run_cli("sweep --out " + a.string()).exit_code == 0);
    CHECK(run_cli("sweep --out " + b.string()).exit_code == 0);
    const std::string text = slurp(a);
    CHECK(text.rfind("r_tilde_I,r_tilde_F,rho,region\n", 0) == 0);
    CHECK(text == slurp(b));

    RunResult custom = run_cli("sweep --rti-list 1.0 --rtf-min 0.5 --rtf-max 1.0 --rtf-steps 2 "
                               "--out " + (work_dir() / "sweep_c.csv").string());
    CHECK(custom.exit_code == 0);
    CHECK(slurp(work_dir() / "sweep_c.csv") ==
          "r_tilde_I,r_tilde_F,rho,region\n"
          "1,0.5,0.5,1\n"
          "1,1,0,3\n");
}

TEST_CASE("sigma defaults to 2 when omitted") {
    const fs::path code = work_dir() / "nosigma.json";
    CHECK(run_cli("construct --ki 4 --ri 1 --rf 2 --seed 7 --out " + code.string()).exit_code ==
          0);
    const fs::path out = work_dir() / "nosigma_run";
    CHECK(run_cli("convert --code " + code.string() + " --seed 7 --out " + out.string())
              .exit_code == 0);
    CHECK(json::parse(slurp(out / "summary.json")).at("chosen_sigma") == 2);
}

TEST_CASE("invalid parameters exit with code 2") {
    CHECK(run_cli("construct --ki 4 --ri 1 --rf 2 --sigma 1 --seed 7 --out " +
                  (work_dir() / "x.json").string())
              .exit_code == 2);
    CHECK(run_cli("construct --ki 4 --ri 1 --sigma 2 --out " + (work_dir() / "y.json").string())
              .exit_code == 2);  // neither --rf nor --rf-set
    CHECK(run_cli("construct --ki 4 --ri 1 --rf-set 4 --sigma 2 --out " +
                  (work_dir() / "z.json").string())
              .exit_code == 2);  // supported r must stay below kI
    CHECK(run_cli("convert --out missing_dir").exit_code == 2);  // --code required
    CHECK(run_cli("construct --ki 4 --ri 1 --rf 2 --rf-set 1,2 --sigma 2 --out " +
                  (work_dir() / "w.json").string())
              .exit_code == 2);  // --rf and --rf-set are mutually exclusive
}

TEST_CASE("default verification battery passes; tampering is caught with exit 3") {
    CHECK(run_cli("verify --seed 7").exit_code == 0);

    const fs::path code = work_dir() / "tamper.json";
    CHECK(run_cli("construct --ki 4 --ri 1 --rf 2 --sigma 2 --seed 7 --out " + code.string())
              .exit_code == 0);
    CHECK(run_cli("verify --code " + code.string()).exit_code == 0);

    // flip one generator entry of the stored initial code
    json doc = json::parse(slurp(code));
    std::string gen = doc["code"]["initial"]["gen_hex"].get<std::string>();
    gen[gen.size() - 1] = gen.back() == '0' ? '1' : '0';
    doc["code"]["initial"]["gen_hex"] = gen;
    std::ofstream(code) << doc.dump(2);
    RunResult v = run_cli("verify --code " + code.string());
    CHECK(v.exit_code == 3);
    CHECK(v.output.find("FAIL") != std::string::npos);
}
