// Byte-level cluster simulation: every code symbol lives as a chunk file,
// conversion runs through a coordinator that reads exact byte ranges, and the
// transfer log must reconcile with the analytical subsymbol counts.
//
// A chunk holds alpha coordinates, instance-major, each coordinate carrying
// payload_units field elements (1 byte per element for GF(2^8), 2 bytes
// little-endian for GF(2^16)). Partial download of a coordinate range is a
// contiguous byte-range read.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "convcode/piggyback.hpp"

namespace convcode {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t subsymbol_bytes(const Field& field) {
    if (field.width() % 8 != 0) {
        throw parameter_error("chunk files need byte-aligned subsymbols (w = 8 or 16)");
    }
    return field.width() / 8;
}

struct NodeStore {
    std::filesystem::path root;
    std::size_t payload_units = 1;
};

struct ChunkInfo {
    std::size_t stripe;  // TraceEntry::npos for new nodes
    std::size_t node;    // node index within its stripe / final parity index
    std::string role;    // data | parity | new
    std::string path;    // relative to the store root
    std::size_t bytes;
};
using Manifest = std::vector<ChunkInfo>;

struct Transfer {
    std::string src;
    std::string dst;
    std::size_t bytes;
};

struct TransferLog {
    std::vector<Transfer> entries;

    std::size_t total_bytes() const {
        std::size_t acc = 0;
        for (const Transfer& t : entries) {
            acc += t.bytes;
        }
        return acc;
    }
    std::size_t bytes_into(const std::string& dst) const {
        std::size_t acc = 0;
        for (const Transfer& t : entries) {
            if (t.dst == dst) {
                acc += t.bytes;
            }
        }
        return acc;
    }
};

inline void write_transfer_csv(std::ostream& os, const TransferLog& log) {
    os << "src,dst,bytes\n";
    for (const Transfer& t : log.entries) {
        os << t.src << ',' << t.dst << ',' << t.bytes << '\n';
    }
}

namespace detail {

inline void store_elem(std::vector<std::uint8_t>& buf, std::size_t offset, felem v,
                       std::size_t esize) {
    buf[offset] = static_cast<std::uint8_t>(v & 0xFF);
    if (esize == 2) {
        buf[offset + 1] = static_cast<std::uint8_t>(v >> 8);
    }
}

inline felem load_elem(const std::vector<std::uint8_t>& buf, std::size_t offset,
                       std::size_t esize) {
    felem v = buf[offset];
    if (esize == 2) {
        v = static_cast<felem>(v | (buf[offset + 1] << 8));
    }
    return v;
}

inline void write_file(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open " + p.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw io_error("short write to " + p.string());
    }
}

inline std::vector<std::uint8_t> read_range(const std::filesystem::path& p, std::size_t offset,
                                            std::size_t count) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + p.string());
    }
    in.seekg(static_cast<std::streamoff>(offset));
    std::vector<std::uint8_t> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count));
    if (in.gcount() != static_cast<std::streamsize>(count)) {
        throw io_error("short read from " + p.string());
    }
    return buf;
}

inline std::string chunk_name(std::size_t stripe, std::size_t node) {
    return "s" + std::to_string(stripe) + "_n" + std::to_string(node) + ".chunk";
}

inline std::string final_chunk_name(std::size_t parity) {
    return "final_p" + std::to_string(parity) + ".chunk";
}

}  // namespace detail

// Encodes one stripe message (message_len * payload_units elements, slot
// major) and writes one chunk per node. Returns the manifest of all chunks.
inline Manifest write_stripes(const NodeStore& store, const MultiTargetCode& code,
                              const std::vector<std::vector<felem>>& stripe_messages) {
    const VectorCode& initial = code.initial_code;
    const std::size_t esize = subsymbol_bytes(initial.field());
    const std::size_t units = store.payload_units;
    const std::size_t alpha = initial.alpha();
    const std::size_t chunk_bytes = alpha * units * esize;
    std::filesystem::create_directories(store.root);
    Manifest manifest;
    for (std::size_t s = 0; s < stripe_messages.size(); ++s) {
        const auto& message = stripe_messages[s];
        if (message.size() != initial.message_len() * units) {
            throw parameter_error("stripe message must hold k*alpha*payload_units elements");
        }
        // per payload unit: gather, encode, scatter into chunk buffers
        std::vector<std::vector<std::uint8_t>> chunks(initial.n(),
                                                      std::vector<std::uint8_t>(chunk_bytes, 0));
        std::vector<felem> unit_message(initial.message_len());
        for (std::size_t u = 0; u < units; ++u) {
            for (std::size_t slot = 0; slot < initial.message_len(); ++slot) {
                unit_message[slot] = message[slot * units + u];
            }
            std::vector<felem> cw = encode(initial, unit_message);
            for (std::size_t node = 0; node < initial.n(); ++node) {
                for (std::size_t j = 0; j < alpha; ++j) {
                    detail::store_elem(chunks[node], (j * units + u) * esize,
                                       cw[node * alpha + j], esize);
                }
            }
        }
        for (std::size_t node = 0; node < initial.n(); ++node) {
            const std::string name = detail::chunk_name(s, node);
            detail::write_file(store.root / name, chunks[node]);
            manifest.push_back({s, node, node < initial.k() ? "data" : "parity", name,
                                chunk_bytes});
        }
    }
    return manifest;
}

struct SimulatedConversion {
    TransferLog log;
    Manifest final_manifest;       // node order matches the final code symbols
    ConversionTrace trace;         // per-payload-unit subsymbol accounting
    std::size_t payload_units = 1;
};

// Runs the conversion against chunk files: reads exactly the byte ranges the
// download schedule names, writes the new parity chunks, and leaves unchanged
// chunks untouched. Throws if the transfer totals disagree with the trace.
inline SimulatedConversion run_conversion(const NodeStore& store, const MultiTargetCode& code,
                                          std::size_t chosen_r, std::size_t chosen_sigma) {
    const VectorCode& initial = code.initial_code;
    const Field& field = initial.field();
    const std::size_t esize = subsymbol_bytes(field);
    const std::size_t units = store.payload_units;
    const std::size_t alpha = initial.alpha();
    const std::size_t k = code.k_initial;
    const std::size_t coord_bytes = units * esize;

    const std::vector<std::size_t> data_coords = unchanged_download_coords(code, chosen_r);
    const std::size_t parity_nodes_read =
        chosen_r <= code.r_initial ? chosen_r : code.r_initial;

    SimulatedConversion out;
    out.payload_units = units;

    // coordinator-side staging: per stripe, per unit, a zero-filled stripe
    // vector holding only the downloaded subsymbols
    std::vector<std::vector<std::vector<felem>>> staged(
        chosen_sigma, std::vector<std::vector<felem>>(units,
                                                      std::vector<felem>(initial.codeword_len(), 0)));
    for (std::size_t s = 0; s < chosen_sigma; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            if (data_coords.empty()) {
                continue;
            }
            const std::filesystem::path p = store.root / detail::chunk_name(s, t);
            std::size_t read_bytes = 0;
            // coalesce consecutive coordinates into one range read
            std::size_t idx = 0;
            while (idx < data_coords.size()) {
                std::size_t run = 1;
                while (idx + run < data_coords.size() &&
                       data_coords[idx + run] == data_coords[idx] + run) {
                    ++run;
                }
                const std::size_t first = data_coords[idx];
                auto bytes = detail::read_range(p, first * coord_bytes, run * coord_bytes);
                for (std::size_t jj = 0; jj < run; ++jj) {
                    for (std::size_t u = 0; u < units; ++u) {
                        staged[s][u][t * alpha + first + jj] =
                            detail::load_elem(bytes, (jj * units + u) * esize, esize);
                    }
                }
                read_bytes += bytes.size();
                idx += run;
            }
            out.log.entries.push_back(
                {"stripe" + std::to_string(s) + ".data" + std::to_string(t), "coordinator",
                 read_bytes});
        }
        for (std::size_t i = 0; i < parity_nodes_read; ++i) {
            const std::filesystem::path p = store.root / detail::chunk_name(s, k + i);
            auto bytes = detail::read_range(p, 0, alpha * coord_bytes);
            for (std::size_t j = 0; j < alpha; ++j) {
                for (std::size_t u = 0; u < units; ++u) {
                    staged[s][u][(k + i) * alpha + j] =
                        detail::load_elem(bytes, (j * units + u) * esize, esize);
                }
            }
            out.log.entries.push_back(
                {"stripe" + std::to_string(s) + ".parity" + std::to_string(i), "coordinator",
                 bytes.size()});
        }
    }

    // convert each payload unit on the staged (partial) stripes
    std::vector<std::vector<std::uint8_t>> new_chunks(chosen_r,
                                                      std::vector<std::uint8_t>(alpha * coord_bytes));
    ConversionTrace trace;
    for (std::size_t u = 0; u < units; ++u) {
        std::vector<std::vector<felem>> stripes;
        for (std::size_t s = 0; s < chosen_sigma; ++s) {
            stripes.push_back(staged[s][u]);
        }
        MergeConversionResult res = convert_multi(code, stripes, chosen_r, chosen_sigma, false);
        if (u == 0) {
            trace = res.trace;
        }
        for (std::size_t v = 0; v < chosen_r; ++v) {
            for (std::size_t j = 0; j < alpha; ++j) {
                detail::store_elem(new_chunks[v], (j * units + u) * esize,
                                   res.final_stripe[(chosen_sigma * k + v) * alpha + j], esize);
            }
        }
    }
    for (std::size_t v = 0; v < chosen_r; ++v) {
        const std::string name = detail::final_chunk_name(v);
        detail::write_file(store.root / name, new_chunks[v]);
        out.log.entries.push_back({"coordinator", "final.parity" + std::to_string(v),
                                   new_chunks[v].size()});
    }

    // final manifest in final-code symbol order: unchanged data nodes, then
    // the new parities
    for (std::size_t s = 0; s < chosen_sigma; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            out.final_manifest.push_back(
                {s, t, "data", detail::chunk_name(s, t), alpha * coord_bytes});
        }
    }
    for (std::size_t v = 0; v < chosen_r; ++v) {
        out.final_manifest.push_back(
            {TraceEntry::npos, v, "new", detail::final_chunk_name(v), alpha * coord_bytes});
    }
    out.trace = trace;

    if (out.log.total_bytes() != trace.gamma() * coord_bytes) {
        throw io_error("transfer log does not reconcile with the analytical trace");
    }
    return out;
}

// Reads the surviving chunks of one codeword and decodes the full message
// (message_len * payload_units elements, slot major). node_paths[i] names the
// chunk of code symbol i, relative to the store root.
inline std::vector<felem> failure_drill(const NodeStore& store, const VectorCode& code,
                                        const std::vector<std::string>& node_paths,
                                        const std::set<std::size_t>& erased) {
    if (node_paths.size() != code.n()) {
        throw parameter_error("need one chunk path per code symbol");
    }
    if (erased.size() > code.n() - code.k()) {
        throw parameter_error("too many erasures: beyond the code distance");
    }
    const std::size_t esize = subsymbol_bytes(code.field());
    const std::size_t units = store.payload_units;
    const std::size_t alpha = code.alpha();
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < code.n() && picks.size() < code.k(); ++i) {
        if (erased.count(i) == 0) {
            picks.push_back(i);
        }
    }
    // chunks per pick, then decode unit by unit
    std::vector<std::vector<std::uint8_t>> raw;
    raw.reserve(picks.size());
    for (std::size_t i : picks) {
        raw.push_back(detail::read_range(store.root / node_paths[i], 0, alpha * units * esize));
    }
    std::vector<felem> message(code.message_len() * units);
    std::vector<felem> chunk(code.k() * alpha);
    for (std::size_t u = 0; u < units; ++u) {
        for (std::size_t p = 0; p < picks.size(); ++p) {
            for (std::size_t j = 0; j < alpha; ++j) {
                chunk[p * alpha + j] = detail::load_elem(raw[p], (j * units + u) * esize, esize);
            }
        }
        std::vector<felem> unit_message = decode_from(code, picks, chunk);
        for (std::size_t slot = 0; slot < code.message_len(); ++slot) {
            message[slot * units + u] = unit_message[slot];
        }
    }
    return message;
}

}  // namespace convcode
