// convcode: construct merge-regime convertible codes, run conversions, dump
// the savings table, and verify artifacts.
//
// Exit codes: 0 success, 2 invalid parameters, 3 construction or verification
// failure. All randomness flows from --seed; outputs are byte-deterministic
// for a given command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "convcode/io.hpp"

using namespace convcode;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadParams = 2;
constexpr int kExitVerifyFailed = 3;

std::vector<felem> seeded_message(const Field& field, std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xD1B54A32D192ED03ULL);
    std::vector<felem> m(len);
    for (auto& v : m) {
        v = static_cast<felem>(rng() & field.max_element());
    }
    return m;
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot write " + path.string());
    }
    out << text;
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot read " + path.string());
    }
    return json::parse(in);
}

// MDS report over the initial code and the converted final code of every
// reachable target; used by construct (embedded) and verify (checked).
json mds_report(const MultiTargetCode& code) {
    json finals = json::object();
    std::vector<std::size_t> targets;
    for (std::size_t r = 1; r <= code.r_initial; ++r) {
        targets.push_back(r);
    }
    for (std::size_t r : code.layer_r) {
        targets.push_back(r);
    }
    for (std::size_t r : targets) {
        VectorCode final_code = converted_final_code(code, r, code.sigma);
        finals[std::to_string(r)] =
            json{{"n", final_code.n()},
                 {"k", final_code.k()},
                 {"mds", is_mds(final_code)},
                 {"subsets", binomial(final_code.n(), final_code.k())}};
    }
    return json{{"initial_mds", is_mds(code.initial_code)},
                {"base_initial_mds", is_mds(code.base.initial_code)},
                {"base_final_mds", is_mds(code.base.final_code)},
                {"initial_subsets",
                 binomial(code.initial_code.n(), code.initial_code.k())},
                {"finals", finals}};
}

bool report_all_true(const json& report) {
    if (!report.at("initial_mds").get<bool>() || !report.at("base_initial_mds").get<bool>() ||
        !report.at("base_final_mds").get<bool>()) {
        return false;
    }
    for (const auto& [key, value] : report.at("finals").items()) {
        (void)key;
        if (!value.at("mds").get<bool>()) {
            return false;
        }
    }
    return true;
}

struct CheckSheet {
    bool ok = true;
    void check(const std::string& name, bool pass) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
        ok = ok && pass;
    }
};

std::vector<std::vector<felem>> make_stripes(const VectorCode& initial,
                                             std::span<const felem> message,
                                             std::size_t sigma) {
    std::vector<std::vector<felem>> stripes;
    const std::size_t stride = initial.message_len();
    for (std::size_t s = 0; s < sigma; ++s) {
        std::span<const felem> part(message.data() + s * stride, stride);
        stripes.push_back(encode(initial, part));
    }
    return stripes;
}

// ------------------------------------------------------------------ construct

int cmd_construct(std::size_t ki, std::size_t ri, std::size_t rf, std::vector<std::size_t> rf_set,
                  std::size_t sigma, std::uint64_t seed, unsigned field_width,
                  const std::string& out_path) {
    MergeParams params{ki, ri, rf_set.empty() ? rf : *std::max_element(rf_set.begin(), rf_set.end()),
                       sigma};
    params.validate();
    json doc;
    if (rf_set.empty() && classify_regime(params) == ConversionRegime::default_reencode) {
        std::cout << "note: rF >= kI, dispatching to the default re-encode regime\n";
        MergeConverter conv = construct_converter(params, seed, field_width);
        doc = converter_to_json(conv);
        const auto& pair = std::get<DefaultReencodePair>(conv.impl);
        doc["verification"] = json{{"initial_mds", is_mds(pair.initial_code)},
                                   {"final_mds", is_mds(pair.final_code)}};
    } else {
        std::vector<std::size_t> supported = rf_set.empty() ? std::vector<std::size_t>{rf} : rf_set;
        MultiTargetCode code = construct_multi(ki, ri, sigma, supported, seed, field_width);
        const ConversionRegime regime = supported.back() > ri ? ConversionRegime::piggyback
                                                              : ConversionRegime::access_optimal;
        MergeConverter conv{MergeParams{ki, ri, supported.back(), sigma}, regime, std::move(code)};
        doc = converter_to_json(conv);
        const auto& built = std::get<MultiTargetCode>(conv.impl);
        doc["verification"] = mds_report(built);
        std::cout << "constructed alpha=" << built.alpha << " over GF(2^"
                  << built.field().width() << ") in " << built.base.attempts << " attempt(s)\n";
        if (!report_all_true(doc["verification"])) {
            std::cerr << "error: constructed code failed its MDS verification\n";
            return kExitVerifyFailed;
        }
    }
    write_text_file(out_path, doc.dump(2) + "\n");
    std::cout << "wrote " << out_path << '\n';
    return kExitOk;
}

// -------------------------------------------------------------------- convert

int cmd_convert(const std::string& code_path, std::size_t chosen_r, std::size_t chosen_sigma,
                std::uint64_t seed, const std::string& out_dir, std::size_t payload_bytes) {
    json doc = load_json(code_path);
    MergeConverter conv = converter_from_json(doc);
    if (chosen_r == 0) {
        chosen_r = conv.params.r_final;
    }
    if (chosen_sigma == 0) {
        chosen_sigma = conv.params.sigma;
    }
    const VectorCode& initial = conv.initial_code();
    std::vector<felem> message =
        seeded_message(initial.field(), chosen_sigma * initial.message_len(), seed);
    auto stripes = make_stripes(initial, message, chosen_sigma);
    MergeConversionResult res = convert_with(conv, stripes, chosen_r, chosen_sigma);

    json summary = trace_summary_json(res.trace, conv.params, chosen_r, chosen_sigma);

    if (payload_bytes > 0) {
        if (const auto* multi = std::get_if<MultiTargetCode>(&conv.impl)) {
            const std::size_t esize = subsymbol_bytes(initial.field());
            if (payload_bytes % esize != 0) {
                throw parameter_error("--payload-bytes must be a multiple of the element size");
            }
            NodeStore store{fs::path(out_dir) / "store", payload_bytes / esize};
            std::vector<std::vector<felem>> payload_messages;
            for (std::size_t s = 0; s < chosen_sigma; ++s) {
                payload_messages.push_back(seeded_message(
                    initial.field(), initial.message_len() * store.payload_units, seed + 1 + s));
            }
            write_stripes(store, *multi, payload_messages);
            SimulatedConversion sim = run_conversion(store, *multi, chosen_r, chosen_sigma);
            std::ostringstream transfers;
            write_transfer_csv(transfers, sim.log);
            write_text_file(fs::path(out_dir) / "transfers.csv", transfers.str());
            write_text_file(fs::path(out_dir) / "manifest.json",
                            manifest_to_json(sim.final_manifest).dump(2) + "\n");
            summary["sim"] = json{{"bytes_moved", sim.log.total_bytes()},
                                  {"expected_bytes",
                                   res.trace.gamma() * store.payload_units * esize},
                                  {"payload_units", store.payload_units}};
        } else {
            throw parameter_error("--payload-bytes needs a piggyback or access-optimal code");
        }
    }

    std::ostringstream trace_csv;
    write_trace_csv(trace_csv, res.trace);
    write_text_file(fs::path(out_dir) / "trace.csv", trace_csv.str());
    write_text_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------- sweep

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
    if (steps < 2 || lo <= 0 || hi <= lo) {
        throw parameter_error("sweep grid must have min > 0, max > min, steps >= 2");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < steps; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return out;
}

int cmd_sweep(const std::string& out_path, std::vector<double> rti_list, double rti_min,
              double rti_max, std::size_t rti_steps, double rtf_min, double rtf_max,
              std::size_t rtf_steps) {
    if (rti_list.empty()) {
        rti_list = rti_steps > 0 ? linear_grid(rti_min, rti_max, rti_steps)
                                 : std::vector<double>{0.1, 0.25, 0.5, 0.75, 1.0};
    }
    std::vector<double> rtf_list = linear_grid(rtf_min, rtf_max, rtf_steps);
    std::ostringstream csv;
    write_savings_csv(csv, sweep_savings(rti_list, rtf_list));
    write_text_file(out_path, csv.str());
    std::cout << "wrote " << out_path << " (" << rti_list.size() * rtf_list.size() << " rows)\n";
    return kExitOk;
}

// --------------------------------------------------------------------- verify

int verify_code_document(const std::string& code_path, std::uint64_t seed) {
    CheckSheet sheet;
    json doc = load_json(code_path);
    MergeConverter conv = converter_from_json(doc);
    if (const auto* multi = std::get_if<MultiTargetCode>(&conv.impl)) {
        sheet.check("initial code is MDS (all k-subsets)", is_mds(multi->initial_code));
        VectorCode rebuilt =
            detail::build_piggybacked_initial(multi->base, multi->r_initial, multi->alpha,
                                              multi->piggy);
        sheet.check("stored generator matches the piggyback derivation",
                    rebuilt.gen() == multi->initial_code.gen());
        std::vector<felem> message = seeded_message(
            multi->field(), multi->sigma * multi->initial_code.message_len(), seed);
        auto stripes = make_stripes(multi->initial_code, message, multi->sigma);
        std::vector<std::size_t> targets;
        for (std::size_t r = 1; r <= multi->r_initial; ++r) {
            targets.push_back(r);
        }
        for (std::size_t r : multi->layer_r) {
            targets.push_back(r);
        }
        for (std::size_t r : targets) {
            MergeConversionResult res = convert_multi(*multi, stripes, r, multi->sigma);
            VectorCode final_code = converted_final_code(*multi, r, multi->sigma);
            const std::string tag = "r=" + std::to_string(r);
            sheet.check("final code MDS, " + tag, is_mds(final_code));
            sheet.check("conversion matches the final encoding, " + tag,
                        res.final_stripe == encode(final_code, message));
            const Rat bound = merge_bandwidth_lower_bound(
                static_cast<std::int64_t>(multi->k_initial),
                static_cast<std::int64_t>(multi->r_initial), static_cast<std::int64_t>(r),
                static_cast<std::int64_t>(multi->sigma), static_cast<std::int64_t>(multi->alpha));
            sheet.check("gamma meets the bound with equality, " + tag,
                        Rat(static_cast<std::int64_t>(res.trace.gamma())) == bound);
            sheet.check("trace passes the flow oracle, " + tag,
                        verify_trace_feasible(res.trace, multi->k_initial,
                                              multi->sigma * multi->k_initial));
        }
    } else {
        const auto& pair = std::get<DefaultReencodePair>(conv.impl);
        sheet.check("initial code is MDS", is_mds(pair.initial_code));
        sheet.check("final code is MDS", is_mds(pair.final_code));
    }
    return sheet.ok ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const std::string& code_path, std::uint64_t seed) {
    if (!code_path.empty()) {
        return verify_code_document(code_path, seed);
    }
    CheckSheet sheet;

    // bandwidth-optimal construction at the worked-example parameters
    BandwidthOptimalCode ex1 = construct_bandwidth_optimal(4, 1, 2, 2, seed);
    sheet.check("initial [5,4,2] is MDS", is_mds(ex1.core.initial_code));
    sheet.check("final [10,8,2] is MDS", is_mds(ex1.final_code));
    std::vector<felem> message = seeded_message(ex1.core.field(), 16, seed);
    auto stripes = make_stripes(ex1.core.initial_code, message, 2);
    MergeConversionResult res = convert(ex1, stripes);
    sheet.check("worked example reads 12 and writes 4 subsymbols",
                res.trace.total_read() == 12 && res.trace.total_written() == 4);
    sheet.check("conversion equals the direct final encoding",
                res.final_stripe == encode(ex1.final_code, message));
    bool decodes = true;
    for_each_subset(ex1.final_code.n(), ex1.final_code.k(),
                    [&](const std::vector<std::size_t>& picks) {
                        std::vector<felem> chunks;
                        for (std::size_t s : picks) {
                            auto sym = symbol_of(ex1.final_code, res.final_stripe, s);
                            chunks.insert(chunks.end(), sym.begin(), sym.end());
                        }
                        decodes = decode_from(ex1.final_code, picks, chunks) == message;
                        return decodes;
                    });
    sheet.check("converted stripe decodes from every k-subset", decodes);
    sheet.check("trace passes the flow oracle over all sink choices",
                verify_trace_feasible(res.trace, 4, 8));

    // scalar regime
    MergeConverter scalar = construct_converter({4, 2, 2, 2}, seed);
    std::vector<felem> smsg = seeded_message(scalar.initial_code().field(), 8, seed + 1);
    auto sstripes = make_stripes(scalar.initial_code(), smsg, 2);
    sheet.check("access-optimal regime meets its bound",
                Rat(static_cast<std::int64_t>(convert_with(scalar, sstripes, 2, 2).trace.gamma())) ==
                    merge_bandwidth_lower_bound(4, 2, 2, 2, 1));

    // multi-target costs
    MultiTargetCode multi = construct_multi(4, 1, 2, {1, 2, 3}, seed);
    std::vector<felem> mmsg = seeded_message(multi.field(), 48, seed + 2);
    auto mstripes = make_stripes(multi.initial_code, mmsg, 2);
    const std::size_t expect[] = {18, 48, 62};
    bool multi_ok = multi.alpha == 6;
    for (std::size_t r = 1; r <= 3; ++r) {
        multi_ok = multi_ok &&
                   convert_multi(multi, mstripes, r, 2).trace.gamma() == expect[r - 1];
    }
    sheet.check("multi-target costs are 18/48/62 for r=1/2/3", multi_ok);

    // LP closed form against a coarse grid search
    bool lp_ok = true;
    for (std::int64_t u = 2; u <= 4; ++u) {
        const std::int64_t kI = 4;
        const std::int64_t rF = 2;
        const std::int64_t r = kI + 1 - u;
        const std::int64_t s = std::min(rF, u);
        const std::int64_t alpha = rF;
        MergeLpSolution sol = solve_merge_lp(kI, {u}, {r}, {s}, alpha, rF);
        const std::int64_t denom = rF * kI;
        std::int64_t best = -1;
        for (std::int64_t i = 0; i <= u * denom; ++i) {
            for (std::int64_t jj = 0; jj <= r * denom; ++jj) {
                if (u * (kI + s - u) * denom <= s * i + u * jj) {
                    if (best < 0 || i + jj < best) {
                        best = i + jj;
                    }
                    break;
                }
            }
        }
        lp_ok = lp_ok && sol.per_stripe[0].read() == Rat(best * alpha, denom);
    }
    sheet.check("LP closed form equals grid brute force", lp_ok);

    // flow-oracle brute force at a small instance
    sheet.check("min-bandwidth search equals the closed-form bound at (2,1,2)",
                Rat(min_bandwidth_search(stable_layout(MergeParams{2, 1, 2, 2}), 2)) ==
                    merge_bandwidth_lower_bound(2, 1, 2, 2, 2));

    // uniform-download remark
    const Rat uniform = uniform_download_min_read(4, 1, 2, 3);
    const Rat optimal = optimal_per_stripe_read(4, 1, 2, 3);
    std::cout << "note: uniform download at (kI=4, rI=1, rF=2) needs " << uniform
              << " subsymbols per stripe vs optimal " << optimal << '\n';
    sheet.check("uniform download is strictly suboptimal", optimal < uniform);

    return sheet.ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"merge-regime convertible codes with bandwidth-optimal conversion"};
    app.require_subcommand(1);

    std::size_t ki = 0;
    std::size_t ri = 0;
    std::size_t rf = 0;
    std::vector<std::size_t> rf_set;
    std::size_t sigma = 2;
    std::uint64_t seed = 7;
    unsigned field_width = 8;
    std::string out_path;
    std::string code_path;
    std::size_t payload_bytes = 0;

    CLI::App* construct = app.add_subcommand("construct", "build and verify a convertible code");
    construct->add_option("--ki", ki, "initial dimension kI")->required();
    construct->add_option("--ri", ri, "initial parities rI")->required();
    CLI::Option* rf_opt = construct->add_option("--rf", rf, "final parities rF");
    construct->add_option("--rf-set", rf_set, "comma-separated supported rF values")
        ->delimiter(',')
        ->excludes(rf_opt);
    construct->add_option("--sigma", sigma, "stripes merged");
    construct->add_option("--seed", seed, "construction seed");
    construct->add_option("--field-width", field_width, "starting field width (4, 8, 16)");
    construct->add_option("--out", out_path, "output code JSON")->required();

    std::size_t convert_rf = 0;     // 0: use the construction rF
    std::size_t convert_sigma = 0;  // 0: use the construction sigma
    CLI::App* convert_cmd = app.add_subcommand("convert", "convert seeded stripes, emit the trace");
    convert_cmd->add_option("--code", code_path, "code JSON from construct")->required();
    convert_cmd->add_option("--rf", convert_rf, "conversion target rF (default: construction rF)");
    convert_cmd->add_option("--sigma", convert_sigma,
                            "stripes to merge (default: construction sigma)");
    convert_cmd->add_option("--seed", seed, "message seed");
    convert_cmd->add_option("--out", out_path, "output directory")->required();
    convert_cmd->add_option("--payload-bytes", payload_bytes,
                            "bytes per subsymbol slot; enables the chunk-file simulation");

    CLI::App* sweep = app.add_subcommand("sweep", "savings table over normalized redundancies");
    std::vector<double> rti_list;
    double rti_min = 0.1;
    double rti_max = 1.5;
    std::size_t rti_steps = 0;  // 0: use the default curve list
    double rtf_min = 0.0125;
    double rtf_max = 1.25;
    std::size_t rtf_steps = 100;
    sweep->add_option("--rti-list", rti_list, "explicit r~I values")->delimiter(',');
    sweep->add_option("--rti-min", rti_min, "smallest r~I for a generated grid");
    sweep->add_option("--rti-max", rti_max, "largest r~I for a generated grid");
    sweep->add_option("--rti-steps", rti_steps, "r~I grid points (0 keeps the default list)");
    sweep->add_option("--rtf-min", rtf_min, "smallest r~F");
    sweep->add_option("--rtf-max", rtf_max, "largest r~F");
    sweep->add_option("--rtf-steps", rtf_steps, "grid points");
    sweep->add_option("--out", out_path, "output CSV")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the verification battery");
    verify->add_option("--code", code_path, "verify a code document instead of the default suite");
    verify->add_option("--seed", seed, "seed for the default suite");

    try {
        app.parse(argc, argv);
        if (construct->parsed()) {
            if (rf == 0 && rf_set.empty()) {
                throw parameter_error("construct needs --rf or --rf-set");
            }
            return cmd_construct(ki, ri, rf, rf_set, sigma, seed, field_width, out_path);
        }
        if (convert_cmd->parsed()) {
            return cmd_convert(code_path, convert_rf, convert_sigma, seed, out_path,
                               payload_bytes);
        }
        if (sweep->parsed()) {
            return cmd_sweep(out_path, rti_list, rti_min, rti_max, rti_steps, rtf_min, rtf_max,
                             rtf_steps);
        }
        return cmd_verify(code_path, seed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadParams;
    } catch (const parameter_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadParams;
    } catch (const construction_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadParams;
    }
}
