// JSON and CSV serialization. Code documents round-trip bit-exactly: element
// data is fixed-width lowercase hex (w/4 digits per element, row-major) and
// keys serialize in sorted order, so serialize(parse(x)) == x.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "convcode/bounds.hpp"
#include "convcode/cluster_sim.hpp"
#include "convcode/flow.hpp"

namespace convcode {

using json = nlohmann::ordered_json;

struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string elems_to_hex(std::span<const felem> elems, unsigned width) {
    static const char* digits = "0123456789abcdef";
    const unsigned nibbles = width / 4;
    std::string out;
    out.reserve(elems.size() * nibbles);
    for (felem e : elems) {
        for (unsigned i = 0; i < nibbles; ++i) {
            out.push_back(digits[(e >> (4 * (nibbles - 1 - i))) & 0xF]);
        }
    }
    return out;
}

inline std::vector<felem> hex_to_elems(const std::string& hex, unsigned width) {
    const unsigned nibbles = width / 4;
    if (nibbles == 0 || hex.size() % nibbles != 0) {
        throw format_error("hex payload length does not match the field width");
    }
    std::vector<felem> out;
    out.reserve(hex.size() / nibbles);
    for (std::size_t pos = 0; pos < hex.size(); pos += nibbles) {
        felem v = 0;
        for (unsigned i = 0; i < nibbles; ++i) {
            const char c = hex[pos + i];
            v = static_cast<felem>(v << 4);
            if (c >= '0' && c <= '9') {
                v = static_cast<felem>(v | (c - '0'));
            } else if (c >= 'a' && c <= 'f') {
                v = static_cast<felem>(v | (c - 'a' + 10));
            } else {
                throw format_error("invalid hex digit in payload");
            }
        }
        out.push_back(v);
    }
    return out;
}

inline std::string modulus_hex(const Field& f) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%x", f.modulus());
    return buf;
}

inline std::uint32_t parse_modulus_hex(const std::string& s) {
    return static_cast<std::uint32_t>(std::stoul(s, nullptr, 16));
}

// --------------------------------------------------------------------- codes

inline json code_to_json(const VectorCode& code) {
    return json{{"field_width", code.field().width()},
                {"modulus_hex", modulus_hex(code.field())},
                {"n", code.n()},
                {"k", code.k()},
                {"alpha", code.alpha()},
                {"systematic", code.systematic()},
                {"gen_hex", elems_to_hex(code.gen().data(), code.field().width())}};
}

inline VectorCode code_from_json(const json& j) {
    const unsigned width = j.at("field_width").get<unsigned>();
    Field field(width, parse_modulus_hex(j.at("modulus_hex").get<std::string>()));
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::size_t k = j.at("k").get<std::size_t>();
    const std::size_t alpha = j.at("alpha").get<std::size_t>();
    std::vector<felem> data = hex_to_elems(j.at("gen_hex").get<std::string>(), width);
    Matrix gen(field, k * alpha, n * alpha, std::move(data));
    return VectorCode(field, n, k, alpha, j.at("systematic").get<bool>(), std::move(gen));
}

inline json pair_to_json(const AccessOptimalPair& pair) {
    json vectors = json::array();
    for (const auto& p : pair.parity_vectors) {
        vectors.push_back(elems_to_hex(p, pair.field().width()));
    }
    json combine = json::array();
    for (const auto& row : pair.combine) {
        combine.push_back(elems_to_hex(row, pair.field().width()));
    }
    return json{{"k_initial", pair.k_initial},
                {"sigma", pair.sigma},
                {"r", pair.r},
                {"attempts", pair.attempts},
                {"field_width", pair.field_width},
                {"initial", code_to_json(pair.initial_code)},
                {"final", code_to_json(pair.final_code)},
                {"parity_vectors_hex", vectors},
                {"combine_hex", combine}};
}

inline AccessOptimalPair pair_from_json(const json& j) {
    VectorCode initial = code_from_json(j.at("initial"));
    VectorCode final_code = code_from_json(j.at("final"));
    const unsigned width = initial.field().width();
    std::vector<std::vector<felem>> vectors;
    for (const auto& s : j.at("parity_vectors_hex")) {
        vectors.push_back(hex_to_elems(s.get<std::string>(), width));
    }
    std::vector<std::vector<felem>> combine;
    for (const auto& s : j.at("combine_hex")) {
        combine.push_back(hex_to_elems(s.get<std::string>(), width));
    }
    return AccessOptimalPair{j.at("k_initial").get<std::size_t>(),
                             j.at("sigma").get<std::size_t>(),
                             j.at("r").get<std::size_t>(),
                             std::move(initial),
                             std::move(final_code),
                             std::move(vectors),
                             std::move(combine),
                             j.at("attempts").get<unsigned>(),
                             j.at("field_width").get<unsigned>()};
}

inline json multi_to_json(const MultiTargetCode& code) {
    json piggy = json::array();
    for (const auto& node : code.piggy) {
        json per_node = json::array();
        for (const auto& coord : node) {
            json terms = json::array();
            for (const PiggybackTerm& t : coord) {
                terms.push_back(json::array({t.src_instance, t.parity_vec}));
            }
            per_node.push_back(std::move(terms));
        }
        piggy.push_back(std::move(per_node));
    }
    return json{{"k_initial", code.k_initial},
                {"r_initial", code.r_initial},
                {"sigma", code.sigma},
                {"supported_r", code.supported_r},
                {"alpha", code.alpha},
                {"layer_r", code.layer_r},
                {"base", pair_to_json(code.base)},
                {"piggyback", std::move(piggy)},
                {"initial", code_to_json(code.initial_code)}};
}

inline MultiTargetCode multi_from_json(const json& j) {
    PiggybackMap piggy;
    for (const auto& node : j.at("piggyback")) {
        std::vector<std::vector<PiggybackTerm>> per_node;
        for (const auto& coord : node) {
            std::vector<PiggybackTerm> terms;
            for (const auto& t : coord) {
                terms.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>()});
            }
            per_node.push_back(std::move(terms));
        }
        piggy.push_back(std::move(per_node));
    }
    return MultiTargetCode{j.at("k_initial").get<std::size_t>(),
                           j.at("r_initial").get<std::size_t>(),
                           j.at("sigma").get<std::size_t>(),
                           j.at("supported_r").get<std::vector<std::size_t>>(),
                           pair_from_json(j.at("base")),
                           j.at("alpha").get<std::size_t>(),
                           j.at("layer_r").get<std::vector<std::size_t>>(),
                           std::move(piggy),
                           code_from_json(j.at("initial"))};
}

inline json converter_to_json(const MergeConverter& conv) {
    json j{{"format", "convcode-code-v1"},
           {"params",
            {{"k_initial", conv.params.k_initial},
             {"r_initial", conv.params.r_initial},
             {"r_final", conv.params.r_final},
             {"sigma", conv.params.sigma}}}};
    switch (conv.regime) {
        case ConversionRegime::piggyback: j["regime"] = "piggyback"; break;
        case ConversionRegime::access_optimal: j["regime"] = "access_optimal"; break;
        default: j["regime"] = "default_reencode"; break;
    }
    if (const auto* multi = std::get_if<MultiTargetCode>(&conv.impl)) {
        j["code"] = multi_to_json(*multi);
    } else {
        const auto& pair = std::get<DefaultReencodePair>(conv.impl);
        j["code"] = json{{"initial", code_to_json(pair.initial_code)},
                         {"final", code_to_json(pair.final_code)}};
    }
    return j;
}

inline MergeConverter converter_from_json(const json& j) {
    if (j.value("format", "") != "convcode-code-v1") {
        throw format_error("not a convcode code document");
    }
    const auto& pj = j.at("params");
    MergeParams params{pj.at("k_initial").get<std::size_t>(),
                       pj.at("r_initial").get<std::size_t>(),
                       pj.at("r_final").get<std::size_t>(), pj.at("sigma").get<std::size_t>()};
    const std::string regime = j.at("regime").get<std::string>();
    if (regime == "default_reencode") {
        return MergeConverter{params, ConversionRegime::default_reencode,
                              DefaultReencodePair{code_from_json(j.at("code").at("initial")),
                                                  code_from_json(j.at("code").at("final"))}};
    }
    MergeConverter conv{params,
                        regime == "piggyback" ? ConversionRegime::piggyback
                                              : ConversionRegime::access_optimal,
                        multi_from_json(j.at("code"))};
    return conv;
}

// -------------------------------------------------------------------- traces

inline void write_trace_csv(std::ostream& os, const ConversionTrace& trace) {
    os << "node_id,role,subsymbols_read,subsymbols_written\n";
    for (const TraceEntry& e : trace.entries) {
        os << e.node_id << ',' << role_name(e.role) << ',' << e.subsymbols_read << ','
           << e.subsymbols_written << '\n';
    }
}

inline json trace_summary_json(const ConversionTrace& trace, const MergeParams& params,
                               std::size_t chosen_r, std::size_t chosen_sigma) {
    const Rat bound = chosen_sigma >= 2
                          ? merge_bandwidth_lower_bound(
                                static_cast<std::int64_t>(params.k_initial),
                                static_cast<std::int64_t>(params.r_initial),
                                static_cast<std::int64_t>(chosen_r),
                                static_cast<std::int64_t>(chosen_sigma),
                                static_cast<std::int64_t>(trace.alpha))
                          : Rat(0);
    const Rat dflt = default_conversion_bandwidth(static_cast<std::int64_t>(params.k_initial),
                                                  static_cast<std::int64_t>(chosen_r),
                                                  static_cast<std::int64_t>(chosen_sigma),
                                                  static_cast<std::int64_t>(trace.alpha));
    const Rat gamma = Rat(static_cast<std::int64_t>(trace.gamma()));
    json j{{"alpha", trace.alpha},
           {"beta1", trace.beta_retired},
           {"beta2", trace.beta_unchanged},
           {"gamma", trace.gamma()},
           {"reads", trace.total_read()},
           {"writes", trace.total_written()},
           {"chosen_r", chosen_r},
           {"chosen_sigma", chosen_sigma}};
    if (chosen_sigma >= 2) {
        j["bound"] = bound.is_integer() ? json(bound.as_integer()) : json(bound.as_double());
        j["optimal"] = gamma == bound;
        const AccessBound access =
            access_lower_bound({params.k_initial, params.r_initial, chosen_r, chosen_sigma});
        j["access_bound"] = json{{"read_symbols", access.read_symbols},
                                 {"write_symbols", access.write_symbols}};
    }
    j["default_gamma"] = dflt.as_integer();
    j["savings_vs_default"] = (Rat(1) - gamma / dflt).as_double();
    return j;
}

inline json manifest_to_json(const Manifest& manifest) {
    json arr = json::array();
    for (const ChunkInfo& c : manifest) {
        json entry{{"node", c.node}, {"role", c.role}, {"path", c.path}, {"bytes", c.bytes}};
        if (c.stripe != TraceEntry::npos) {
            entry["stripe"] = c.stripe;
        }
        arr.push_back(std::move(entry));
    }
    return arr;
}

}  // namespace convcode
