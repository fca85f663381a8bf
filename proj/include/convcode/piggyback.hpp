// Bandwidth-optimal merge conversion via piggybacking.
//
// The initial vector code is alpha instances of the punctured base code
// C'' = [kI + rI, kI] (parities p_1..p_rI of the access-optimal pair), with
// parity values of the punctured vectors p_j (rI < j <= rF) piggybacked onto
// later instances. A piggyback map entry (src, v) on parity node i at
// coordinate j means that coordinate additionally carries p_v^T M^(src),
// the instance-src submessage encoded with parity vector v. Entries always
// satisfy src < j, so instances decode sequentially and the MDS property of
// the base code carries over.
//
// Layout for one supported target r (> rI): coordinates split into r blocks
// of equal width; block i < rI carries the previous layer verbatim, block
// J >= rI additionally piggybacks p_J^T applied to block i of parity node i.
// Multiple targets r_1 < r_2 < ... stack this recursively (alpha = prod r_t);
// a copy of the layer-t code then occupies each alpha_t-wide slice.
//
// Conversion to a supported r downloads the trailing (r - rI)/r fraction of
// every unchanged node plus the full content of every parity node, rebuilds
// all punctured-parity values (recovering piggybacked ones by subtraction),
// and combines per coordinate exactly like the scalar access-optimal
// conversion. Every piggyback term whose source instance was downloaded is
// subtracted out; the remaining terms ride into the final stripe as leftover
// piggybacks, which keeps the final code MDS (they still point strictly
// backwards). Conversion to r <= rI reads the first r parity nodes whole and
// ignores piggybacks entirely.

#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "convcode/access_optimal.hpp"

namespace convcode {

struct PiggybackTerm {
    std::size_t src_instance;  // submessage index the term encodes
    std::size_t parity_vec;    // index into the base parity vectors
    bool operator==(const PiggybackTerm&) const = default;
};

// piggy[i][j] = extra terms stored on parity node i at coordinate j
using PiggybackMap = std::vector<std::vector<std::vector<PiggybackTerm>>>;

enum class NodeRole { unchanged, retired, new_node };

inline const char* role_name(NodeRole r) {
    switch (r) {
        case NodeRole::unchanged: return "unchanged";
        case NodeRole::retired: return "retired";
        default: return "new";
    }
}

struct TraceEntry {
    std::string node_id;
    NodeRole role;
    std::size_t stripe;     // stripe index for initial nodes, npos for new nodes
    std::size_t subsymbols_read = 0;
    std::size_t subsymbols_written = 0;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct ConversionTrace {
    std::vector<TraceEntry> entries;
    std::size_t alpha = 0;
    std::size_t beta_retired = 0;    // per-node download from read parities
    std::size_t beta_unchanged = 0;  // per-node download from unchanged nodes

    std::size_t total_read() const {
        std::size_t acc = 0;
        for (const auto& e : entries) {
            acc += e.subsymbols_read;
        }
        return acc;
    }
    std::size_t total_written() const {
        std::size_t acc = 0;
        for (const auto& e : entries) {
            acc += e.subsymbols_written;
        }
        return acc;
    }
    std::size_t gamma() const { return total_read() + total_written(); }

    // Downloads per initial node of one stripe, data nodes first then parity.
    std::vector<std::size_t> stripe_downloads(std::size_t stripe) const {
        std::vector<std::size_t> out;
        for (const auto& e : entries) {
            if (e.stripe == stripe) {
                out.push_back(e.subsymbols_read);
            }
        }
        return out;
    }
};

struct MultiTargetCode {
    std::size_t k_initial = 0;
    std::size_t r_initial = 0;
    std::size_t sigma = 0;                 // maximum supported stripe count
    std::vector<std::size_t> supported_r;  // sorted ascending
    AccessOptimalPair base;                // r = max(r_initial, max supported_r)
    std::size_t alpha = 1;
    std::vector<std::size_t> layer_r;      // supported values above r_initial, ascending
    PiggybackMap piggy;
    VectorCode initial_code;               // [kI + rI, kI, alpha]

    const Field& field() const { return initial_code.field(); }
    MergeParams params_for(std::size_t chosen_r, std::size_t chosen_sigma) const {
        return MergeParams{k_initial, r_initial, chosen_r, chosen_sigma};
    }
};

namespace detail {

inline PiggybackMap build_piggy_map(std::size_t r_initial, const std::vector<std::size_t>& layer_r,
                                    std::size_t alpha) {
    PiggybackMap piggy(r_initial, std::vector<std::vector<PiggybackTerm>>(alpha));
    std::size_t prev_alpha = 1;
    for (std::size_t rt : layer_r) {
        // replicate the previous layer into each of the rt blocks, then add
        // this layer's terms onto blocks rI..rt-1
        PiggybackMap next(r_initial, std::vector<std::vector<PiggybackTerm>>(alpha));
        for (std::size_t i = 0; i < r_initial; ++i) {
            for (std::size_t block = 0; block < rt; ++block) {
                const std::size_t off = block * prev_alpha;
                for (std::size_t j = 0; j < prev_alpha; ++j) {
                    for (const PiggybackTerm& term : piggy[i][j]) {
                        next[i][off + j].push_back({term.src_instance + off, term.parity_vec});
                    }
                }
            }
            for (std::size_t block = r_initial; block < rt; ++block) {
                const std::size_t off = block * prev_alpha;
                for (std::size_t l = 0; l < prev_alpha; ++l) {
                    next[i][off + l].push_back({i * prev_alpha + l, block});
                }
            }
        }
        piggy = std::move(next);
        prev_alpha *= rt;
    }
    return piggy;
}

inline VectorCode build_piggybacked_initial(const AccessOptimalPair& base, std::size_t r_initial,
                                            std::size_t alpha, const PiggybackMap& piggy) {
    const Field& f = base.field();
    const std::size_t k = base.k_initial;
    const std::size_t n = k + r_initial;
    Matrix gen(f, k * alpha, n * alpha);
    for (std::size_t row = 0; row < k * alpha; ++row) {
        gen.at(row, row) = 1;  // systematic nodes store plain instances
    }
    for (std::size_t i = 0; i < r_initial; ++i) {
        for (std::size_t j = 0; j < alpha; ++j) {
            const std::size_t col = (k + i) * alpha + j;
            for (std::size_t t = 0; t < k; ++t) {
                gen.at(t * alpha + j, col) ^= base.parity_vectors[i][t];
            }
            for (const PiggybackTerm& term : piggy[i][j]) {
                for (std::size_t t = 0; t < k; ++t) {
                    gen.at(t * alpha + term.src_instance, col) ^=
                        base.parity_vectors[term.parity_vec][t];
                }
            }
        }
    }
    return VectorCode(f, n, k, alpha, true, std::move(gen));
}

}  // namespace detail

inline MultiTargetCode construct_multi(std::size_t k_initial, std::size_t r_initial,
                                       std::size_t sigma, std::vector<std::size_t> supported_r,
                                       std::uint64_t seed, unsigned field_width = 8) {
    if (sigma < 2 || k_initial < 1 || r_initial < 1) {
        throw parameter_error("need sigma >= 2, kI >= 1, rI >= 1");
    }
    if (supported_r.empty()) {
        throw parameter_error("supported_r must not be empty");
    }
    std::sort(supported_r.begin(), supported_r.end());
    supported_r.erase(std::unique(supported_r.begin(), supported_r.end()), supported_r.end());
    for (std::size_t r : supported_r) {
        if (r < 1 || r >= k_initial) {
            throw parameter_error("every supported r must satisfy 1 <= r < kI");
        }
    }
    std::vector<std::size_t> layer_r;
    std::size_t alpha = 1;
    for (std::size_t r : supported_r) {
        if (r > r_initial) {
            layer_r.push_back(r);
            alpha *= r;
        }
    }
    const std::size_t r_base = std::max(r_initial, supported_r.back());
    AccessOptimalPair base = construct_access_optimal(k_initial, sigma, r_base, seed, field_width);
    PiggybackMap piggy = detail::build_piggy_map(r_initial, layer_r, alpha);
    VectorCode initial = detail::build_piggybacked_initial(base, r_initial, alpha, piggy);
    return MultiTargetCode{k_initial, r_initial,       sigma,
                           std::move(supported_r),     std::move(base),
                           alpha,     std::move(layer_r), std::move(piggy),
                           std::move(initial)};
}

// Single-target bandwidth-optimal code: alpha = rF instances of the punctured
// base plus one piggyback layer. Conversion output equals the plain final
// vector code (rF instances of the base final code) with no leftovers.
struct BandwidthOptimalCode {
    MultiTargetCode core;
    VectorCode final_code;  // [sigma*kI + rF, sigma*kI, rF]

    std::size_t r_final() const { return core.supported_r.back(); }
};

namespace detail {

inline VectorCode instances_of(const VectorCode& scalar, std::size_t alpha) {
    const Field& f = scalar.field();
    const std::size_t k = scalar.k();
    const std::size_t n = scalar.n();
    Matrix gen(f, k * alpha, n * alpha);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const felem v = scalar.gen().at(r, c);
            if (v == 0) {
                continue;
            }
            for (std::size_t j = 0; j < alpha; ++j) {
                gen.at(r * alpha + j, c * alpha + j) = v;
            }
        }
    }
    return VectorCode(f, n, k, alpha, scalar.systematic(), std::move(gen));
}

}  // namespace detail

inline BandwidthOptimalCode construct_bandwidth_optimal(std::size_t k_initial,
                                                        std::size_t r_initial, std::size_t r_final,
                                                        std::size_t sigma, std::uint64_t seed,
                                                        unsigned field_width = 8) {
    if (!(r_initial < r_final && r_final < k_initial)) {
        throw parameter_error(
            "piggyback construction needs rI < rF < kI; "
            "rF <= rI converts access-optimally and rF >= kI re-encodes");
    }
    MultiTargetCode core =
        construct_multi(k_initial, r_initial, sigma, {r_final}, seed, field_width);
    VectorCode final_code = detail::instances_of(core.base.final_code, core.alpha);
    return BandwidthOptimalCode{std::move(core), std::move(final_code)};
}

namespace detail {

// Submessage of one instance: entries message[t*alpha + j] for t in [0, k).
inline std::vector<felem> instance_submessage(std::span<const felem> message, std::size_t k,
                                              std::size_t alpha, std::size_t j) {
    std::vector<felem> out(k);
    for (std::size_t t = 0; t < k; ++t) {
        out[t] = message[t * alpha + j];
    }
    return out;
}

struct LayerGeometry {
    std::size_t copy_width;  // alpha_t: width of one copy of the layer-t code
    std::size_t inner;       // alpha_{t-1}: width of one block inside a copy
};

inline LayerGeometry layer_geometry(const MultiTargetCode& code, std::size_t chosen_r) {
    std::size_t width = 1;
    for (std::size_t rt : code.layer_r) {
        const std::size_t inner = width;
        width *= rt;
        if (rt == chosen_r) {
            return {width, inner};
        }
    }
    throw parameter_error("chosen r is not supported by this code");
}

}  // namespace detail

struct MergeConversionResult {
    std::vector<felem> final_stripe;  // (chosen_sigma*kI + chosen_r) * alpha subsymbols
    ConversionTrace trace;
};

// Coordinates read from every unchanged node when converting to chosen_r.
// Empty for chosen_r <= rI; otherwise the trailing blocks of each copy.
inline std::vector<std::size_t> unchanged_download_coords(const MultiTargetCode& code,
                                                          std::size_t chosen_r) {
    std::vector<std::size_t> coords;
    if (chosen_r <= code.r_initial) {
        return coords;
    }
    const detail::LayerGeometry geom = detail::layer_geometry(code, chosen_r);
    for (std::size_t j = 0; j < code.alpha; ++j) {
        if ((j % geom.copy_width) / geom.inner >= code.r_initial) {
            coords.push_back(j);
        }
    }
    return coords;
}

// Converts chosen_sigma initial stripes into one final stripe with
// n = chosen_sigma*kI + chosen_r nodes. chosen_r must be a supported target
// or at most rI; chosen_sigma at most the construction sigma. With
// validate_stripes off, only the subsymbols the procedure downloads are read
// from the inputs (the cluster simulator feeds partially populated stripes).
inline MergeConversionResult convert_multi(const MultiTargetCode& code,
                                           const std::vector<std::vector<felem>>& stripes,
                                           std::size_t chosen_r, std::size_t chosen_sigma,
                                           bool validate_stripes = true) {
    const std::size_t k = code.k_initial;
    const std::size_t rI = code.r_initial;
    const std::size_t alpha = code.alpha;
    const Field& f = code.field();
    if (chosen_sigma < 1 || chosen_sigma > code.sigma) {
        throw parameter_error("chosen sigma outside the supported range");
    }
    if (stripes.size() != chosen_sigma) {
        throw parameter_error("stripe count must equal chosen sigma");
    }
    const bool case1 = chosen_r <= rI;
    if (!case1 && std::find(code.layer_r.begin(), code.layer_r.end(), chosen_r) ==
                      code.layer_r.end()) {
        throw parameter_error("chosen r is not supported by this code");
    }
    if (chosen_r < 1) {
        throw parameter_error("chosen r must be at least 1");
    }
    for (const auto& stripe : stripes) {
        if (stripe.size() != code.initial_code.codeword_len()) {
            throw conversion_error("stripe has the wrong length");
        }
        if (validate_stripes) {
            check_stripe(code.initial_code, stripe);
        }
    }

    MergeConversionResult out;
    out.final_stripe.assign((chosen_sigma * k + chosen_r) * alpha, 0);
    // unchanged systematic nodes carry over in place
    for (std::size_t s = 0; s < chosen_sigma; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            for (std::size_t j = 0; j < alpha; ++j) {
                out.final_stripe[(s * k + t) * alpha + j] = stripes[s][t * alpha + j];
            }
        }
    }

    std::vector<std::size_t> unchanged_read(chosen_sigma * k, 0);
    std::vector<std::size_t> parity_read(chosen_sigma * rI, 0);

    if (case1) {
        // Access-optimal conversion per instance; piggybacks ride along.
        for (std::size_t v = 0; v < chosen_r; ++v) {
            for (std::size_t j = 0; j < alpha; ++j) {
                felem acc = 0;
                for (std::size_t s = 0; s < chosen_sigma; ++s) {
                    acc ^= f.mul(code.base.combine[v][s], stripes[s][(k + v) * alpha + j]);
                }
                out.final_stripe[(chosen_sigma * k + v) * alpha + j] = acc;
            }
        }
        for (std::size_t s = 0; s < chosen_sigma; ++s) {
            for (std::size_t v = 0; v < chosen_r; ++v) {
                parity_read[s * rI + v] = alpha;
            }
        }
        out.trace.beta_retired = alpha;
        out.trace.beta_unchanged = 0;
    } else {
        const detail::LayerGeometry geom = detail::layer_geometry(code, chosen_r);
        // Coordinates whose block index inside the copy is >= rI get their
        // systematic subsymbols downloaded.
        std::vector<bool> downloaded(alpha, false);
        for (std::size_t j = 0; j < alpha; ++j) {
            const std::size_t block = (j % geom.copy_width) / geom.inner;
            downloaded[j] = block >= rI;
        }
        // submessages per stripe and downloaded instance
        std::vector<std::vector<std::vector<felem>>> sub(chosen_sigma);
        for (std::size_t s = 0; s < chosen_sigma; ++s) {
            sub[s].resize(alpha);
            for (std::size_t j = 0; j < alpha; ++j) {
                if (downloaded[j]) {
                    sub[s][j] = detail::instance_submessage(stripes[s], k, alpha, j);
                }
            }
        }
        auto known_term = [&](std::size_t s, const PiggybackTerm& term) -> felem {
            return dot(f, code.base.parity_vectors[term.parity_vec], sub[s][term.src_instance]);
        };
        // W(s, v, j) ~ p_v^T M_s^(j), possibly plus piggyback terms whose
        // source was not downloaded (those become the leftovers).
        auto best_effort_parity = [&](std::size_t s, std::size_t v, std::size_t j) -> felem {
            if (downloaded[j]) {
                return dot(f, code.base.parity_vectors[v], sub[s][j]);
            }
            const std::size_t copy_base = (j / geom.copy_width) * geom.copy_width;
            const std::size_t block = (j % geom.copy_width) / geom.inner;  // < rI here
            if (v < rI) {
                felem acc = stripes[s][(k + v) * alpha + j];
                for (const PiggybackTerm& term : code.piggy[v][j]) {
                    if (downloaded[term.src_instance]) {
                        acc ^= known_term(s, term);
                    }
                }
                return acc;
            }
            // The value p_v^T M^(j) was piggybacked onto parity node `block`
            // at the matching position inside block v of the same copy.
            const std::size_t loc = copy_base + v * geom.inner + (j % geom.inner);
            const std::size_t host = block;
            felem acc = stripes[s][(k + host) * alpha + loc];
            acc ^= dot(f, code.base.parity_vectors[host], sub[s][loc]);  // base term of the host
            bool target_found = false;
            for (const PiggybackTerm& term : code.piggy[host][loc]) {
                if (term.src_instance == j && term.parity_vec == v) {
                    target_found = true;
                    continue;
                }
                if (downloaded[term.src_instance]) {
                    acc ^= known_term(s, term);
                }
            }
            assert(target_found);
            (void)target_found;
            return acc;
        };
        for (std::size_t v = 0; v < chosen_r; ++v) {
            for (std::size_t j = 0; j < alpha; ++j) {
                felem acc = 0;
                for (std::size_t s = 0; s < chosen_sigma; ++s) {
                    acc ^= f.mul(code.base.combine[v][s], best_effort_parity(s, v, j));
                }
                out.final_stripe[(chosen_sigma * k + v) * alpha + j] = acc;
            }
        }
        const std::size_t beta2 = alpha - alpha * rI / chosen_r;  // (1 - rI/rF) * alpha
        for (std::size_t s = 0; s < chosen_sigma; ++s) {
            for (std::size_t t = 0; t < k; ++t) {
                unchanged_read[s * k + t] = beta2;
            }
            for (std::size_t i = 0; i < rI; ++i) {
                parity_read[s * rI + i] = alpha;
            }
        }
        out.trace.beta_retired = alpha;
        out.trace.beta_unchanged = beta2;
    }

    out.trace.alpha = alpha;
    for (std::size_t s = 0; s < chosen_sigma; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            out.trace.entries.push_back({"stripe" + std::to_string(s) + ".data" + std::to_string(t),
                                         NodeRole::unchanged, s, unchanged_read[s * k + t], 0});
        }
        for (std::size_t i = 0; i < rI; ++i) {
            out.trace.entries.push_back({"stripe" + std::to_string(s) + ".parity" + std::to_string(i),
                                         NodeRole::retired, s, parity_read[s * rI + i], 0});
        }
    }
    for (std::size_t v = 0; v < chosen_r; ++v) {
        out.trace.entries.push_back({"final.parity" + std::to_string(v), NodeRole::new_node,
                                     TraceEntry::npos, 0, alpha});
    }
    return out;
}

inline MergeConversionResult convert(const BandwidthOptimalCode& code,
                                     const std::vector<std::vector<felem>>& stripes) {
    return convert_multi(code.core, stripes, code.r_final(), code.core.sigma);
}

// The actual linear code produced by conversion for a given target, leftover
// piggybacks included: row l of the generator is the conversion of the unit
// message e_l.
inline VectorCode converted_final_code(const MultiTargetCode& code, std::size_t chosen_r,
                                       std::size_t chosen_sigma) {
    const Field& f = code.field();
    const std::size_t k = code.k_initial;
    const std::size_t alpha = code.alpha;
    const std::size_t k_final = chosen_sigma * k;
    const std::size_t n_final = k_final + chosen_r;
    Matrix gen(f, k_final * alpha, n_final * alpha);
    std::vector<felem> unit(k_final * alpha, 0);
    for (std::size_t row = 0; row < k_final * alpha; ++row) {
        unit[row] = 1;
        std::vector<std::vector<felem>> stripes;
        for (std::size_t s = 0; s < chosen_sigma; ++s) {
            std::span<const felem> part(unit.data() + s * k * alpha, k * alpha);
            stripes.push_back(encode(code.initial_code, part));
        }
        std::vector<felem> cw = convert_multi(code, stripes, chosen_r, chosen_sigma).final_stripe;
        for (std::size_t c = 0; c < cw.size(); ++c) {
            gen.at(row, c) = cw[c];
        }
        unit[row] = 0;
    }
    return VectorCode(f, n_final, k_final, alpha, true, std::move(gen));
}

// Sequential decode of one initial stripe from any kI of its nodes:
// instance j is solved after subtracting the piggyback terms already known
// from instances < j.
inline std::vector<felem> decode_piggybacked(const MultiTargetCode& code,
                                             std::span<const std::size_t> picks,
                                             std::span<const felem> chunks) {
    const std::size_t k = code.k_initial;
    const std::size_t alpha = code.alpha;
    const Field& f = code.field();
    check_picks(code.initial_code, picks);
    if (chunks.size() != k * alpha) {
        throw code_error("chunks must hold k*alpha subsymbols");
    }
    // One kI x kI solve per instance; rows are unit vectors for systematic
    // picks and parity vectors for parity picks.
    Matrix system(f, k, k);
    for (std::size_t idx = 0; idx < picks.size(); ++idx) {
        const std::size_t node = picks[idx];
        if (node < k) {
            system.at(idx, node) = 1;
        } else {
            for (std::size_t t = 0; t < k; ++t) {
                system.at(idx, t) = code.base.parity_vectors[node - k][t];
            }
        }
    }
    Matrix solver = system.inverse();
    std::vector<felem> message(k * alpha, 0);
    for (std::size_t j = 0; j < alpha; ++j) {
        std::vector<felem> rhs(k, 0);
        for (std::size_t idx = 0; idx < picks.size(); ++idx) {
            const std::size_t node = picks[idx];
            felem val = chunks[idx * alpha + j];
            if (node >= k) {
                for (const PiggybackTerm& term : code.piggy[node - k][j]) {
                    std::vector<felem> src =
                        detail::instance_submessage(message, k, alpha, term.src_instance);
                    val ^= dot(f, code.base.parity_vectors[term.parity_vec], src);
                }
            }
            rhs[idx] = val;
        }
        for (std::size_t t = 0; t < k; ++t) {
            felem acc = 0;
            for (std::size_t idx = 0; idx < k; ++idx) {
                acc ^= f.mul(solver.at(t, idx), rhs[idx]);
            }
            message[t * alpha + j] = acc;
        }
    }
    return message;
}

// ---------------------------------------------------------------------------
// Regime dispatch: the piggyback construction applies when rI < rF < kI.
// rF <= rI falls back to scalar access-optimal conversion (alpha = 1) and
// rF >= kI to plain re-encoding, which is already bandwidth-optimal there.

enum class ConversionRegime { piggyback, access_optimal, default_reencode };

inline ConversionRegime classify_regime(const MergeParams& p) {
    p.validate();
    if (p.r_final >= p.k_initial) {
        return ConversionRegime::default_reencode;
    }
    return p.r_final > p.r_initial ? ConversionRegime::piggyback
                                   : ConversionRegime::access_optimal;
}

struct DefaultReencodePair {
    VectorCode initial_code;  // any systematic MDS [kI + rI, kI, 1]
    VectorCode final_code;    // any systematic MDS [sigma*kI + rF, sigma*kI, 1]
};

// One conversion engine per parameter point, whatever the regime.
struct MergeConverter {
    MergeParams params;
    ConversionRegime regime;
    std::variant<MultiTargetCode, DefaultReencodePair> impl;

    const VectorCode& initial_code() const {
        if (const auto* multi = std::get_if<MultiTargetCode>(&impl)) {
            return multi->initial_code;
        }
        return std::get<DefaultReencodePair>(impl).initial_code;
    }

    std::size_t alpha() const { return initial_code().alpha(); }
};

inline MergeConverter construct_converter(const MergeParams& p, std::uint64_t seed,
                                          unsigned field_width = 8) {
    const ConversionRegime regime = classify_regime(p);
    if (regime == ConversionRegime::default_reencode) {
        VectorCode initial = random_systematic_mds(p.n_initial(), p.k_initial, seed, field_width);
        VectorCode final_code = random_systematic_mds(p.n_final(), p.k_final(),
                                                      seed ^ 0x9E3779B97F4A7C15ULL, field_width);
        return MergeConverter{p, regime, DefaultReencodePair{std::move(initial), std::move(final_code)}};
    }
    MultiTargetCode code =
        construct_multi(p.k_initial, p.r_initial, p.sigma, {p.r_final}, seed, field_width);
    return MergeConverter{p, regime, std::move(code)};
}

// Default conversion: download every systematic node whole and re-encode.
inline MergeConversionResult convert_default(const DefaultReencodePair& pair,
                                             const MergeParams& p,
                                             const std::vector<std::vector<felem>>& stripes,
                                             std::size_t chosen_sigma) {
    if (chosen_sigma != p.sigma) {
        throw parameter_error("default re-encode converts all sigma stripes");
    }
    if (stripes.size() != chosen_sigma) {
        throw parameter_error("stripe count must equal chosen sigma");
    }
    const std::size_t k = p.k_initial;
    const std::size_t alpha = pair.initial_code.alpha();
    for (const auto& stripe : stripes) {
        check_stripe(pair.initial_code, stripe);
    }
    std::vector<felem> message;
    for (const auto& stripe : stripes) {
        message.insert(message.end(), stripe.begin(), stripe.begin() + k * alpha);
    }
    MergeConversionResult out;
    out.final_stripe = encode(pair.final_code, message);
    out.trace.alpha = alpha;
    out.trace.beta_retired = 0;
    out.trace.beta_unchanged = alpha;
    for (std::size_t s = 0; s < chosen_sigma; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            out.trace.entries.push_back({"stripe" + std::to_string(s) + ".data" + std::to_string(t),
                                         NodeRole::unchanged, s, alpha, 0});
        }
        for (std::size_t i = 0; i < p.r_initial; ++i) {
            out.trace.entries.push_back({"stripe" + std::to_string(s) + ".parity" + std::to_string(i),
                                         NodeRole::retired, s, 0, 0});
        }
    }
    for (std::size_t v = 0; v < p.r_final; ++v) {
        out.trace.entries.push_back({"final.parity" + std::to_string(v), NodeRole::new_node,
                                     TraceEntry::npos, 0, alpha});
    }
    return out;
}

inline MergeConversionResult convert_with(const MergeConverter& conv,
                                          const std::vector<std::vector<felem>>& stripes,
                                          std::size_t chosen_r, std::size_t chosen_sigma) {
    if (const auto* multi = std::get_if<MultiTargetCode>(&conv.impl)) {
        return convert_multi(*multi, stripes, chosen_r, chosen_sigma);
    }
    if (chosen_r != conv.params.r_final) {
        throw parameter_error("default re-encode pair supports only its construction rF");
    }
    return convert_default(std::get<DefaultReencodePair>(conv.impl), conv.params, stripes,
                           chosen_sigma);
}

}  // namespace convcode
