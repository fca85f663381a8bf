// Information-flow oracle for merge conversions.
//
// The graph has one source per initial stripe, one storage vertex per code
// symbol, a coordinator, and a sink attached to some kF final-stripe nodes:
//   source_i -> x      capacity alpha      (x stored in stripe i)
//   x -> coordinator   capacity beta(x)    (download during conversion)
//   coordinator -> y   capacity alpha      (y a new node)
//   y -> sink          capacity alpha      (y in the sink attachment)
// Unchanged nodes appear once; their initial and final copies are the same
// vertex, so membership in the final stripe just adds the sink edge. A
// download vector is feasible only if every source pushes kI*alpha to every
// possible sink attachment; min_bandwidth_search scans integral download
// vectors (deduplicated within symmetric node classes) for the cheapest
// feasible one.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "convcode/access_optimal.hpp"
#include "convcode/piggyback.hpp"
#include "convcode/subsets.hpp"

namespace convcode {

struct search_budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FlowNetwork {
public:
    int add_node(std::string name) {
        names_.push_back(std::move(name));
        adj_.emplace_back();
        return static_cast<int>(names_.size()) - 1;
    }

    void add_edge(int from, int to, std::int64_t cap) {
        adj_[from].push_back({to, cap, static_cast<int>(adj_[to].size())});
        adj_[to].push_back({from, 0, static_cast<int>(adj_[from].size()) - 1});
    }

    // Dinic; capacities are integral subsymbol counts, so the result is exact.
    std::int64_t max_flow(int s, int t) {
        for (auto& edges : adj_) {
            for (Edge& e : edges) {
                e.flow = 0;
            }
        }
        std::int64_t total = 0;
        while (bfs(s, t)) {
            iter_.assign(adj_.size(), 0);
            while (std::int64_t pushed = dfs(s, t, INT64_MAX)) {
                total += pushed;
            }
        }
        return total;
    }

    void dump(std::ostream& os) const {
        for (std::size_t v = 0; v < adj_.size(); ++v) {
            for (const Edge& e : adj_[v]) {
                if (e.cap > 0) {
                    os << names_[v] << ' ' << names_[e.to] << ' ' << e.cap << '\n';
                }
            }
        }
    }

    const std::string& name(int v) const { return names_[v]; }

private:
    struct Edge {
        int to;
        std::int64_t cap;
        int rev;
        std::int64_t flow = 0;
    };

    bool bfs(int s, int t) {
        level_.assign(adj_.size(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : adj_[v]) {
                if (e.cap - e.flow > 0 && level_[e.to] < 0) {
                    level_[e.to] = level_[v] + 1;
                    q.push(e.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int v, int t, std::int64_t limit) {
        if (v == t) {
            return limit;
        }
        for (std::size_t& i = iter_[v]; i < adj_[v].size(); ++i) {
            Edge& e = adj_[v][i];
            if (e.cap - e.flow <= 0 || level_[e.to] != level_[v] + 1) {
                continue;
            }
            std::int64_t pushed = dfs(e.to, t, std::min(limit, e.cap - e.flow));
            if (pushed > 0) {
                e.flow += pushed;
                adj_[e.to][e.rev].flow -= pushed;
                return pushed;
            }
        }
        return 0;
    }

    std::vector<std::string> names_;
    std::vector<std::vector<Edge>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> iter_;
};

// Node counts of one conversion instance. Storage nodes are numbered
// stripe-major, unchanged before retired, with new nodes after all stripes;
// sink attachments refer to these global indices (retired nodes are not
// attachable).
struct ConversionLayout {
    std::size_t k_initial = 0;
    std::size_t k_final = 0;
    std::vector<std::size_t> unchanged;  // per stripe
    std::vector<std::size_t> retired;    // per stripe
    std::size_t new_count = 0;

    std::size_t stripes() const { return unchanged.size(); }
    std::size_t initial_nodes() const {
        std::size_t acc = 0;
        for (std::size_t i = 0; i < stripes(); ++i) {
            acc += unchanged[i] + retired[i];
        }
        return acc;
    }
    std::size_t total_unchanged() const {
        return std::accumulate(unchanged.begin(), unchanged.end(), std::size_t{0});
    }
    std::size_t attachable() const { return total_unchanged() + new_count; }

    void validate() const {
        if (stripes() == 0 || retired.size() != stripes()) {
            throw parameter_error("layout needs matching per-stripe lists");
        }
        if (k_initial == 0 || k_final == 0) {
            throw parameter_error("layout needs positive dimensions");
        }
        for (std::size_t i = 0; i < stripes(); ++i) {
            if (unchanged[i] + retired[i] != unchanged[0] + retired[0]) {
                throw parameter_error("stripes must have a common node count");
            }
            // merge-regime cap; with a single stripe (kI = kF) whole nodes may stay
            if (stripes() > 1 && unchanged[i] > k_initial) {
                throw parameter_error("more than kI unchanged symbols in a stripe");
            }
        }
        if (k_final > attachable()) {
            throw parameter_error("not enough final nodes to attach a sink");
        }
    }

    // Trace of a conversion run, mapped onto this layout shape.
    static ConversionLayout from_trace(const ConversionTrace& trace, std::size_t k_initial,
                                       std::size_t k_final) {
        ConversionLayout out;
        out.k_initial = k_initial;
        out.k_final = k_final;
        for (const TraceEntry& e : trace.entries) {
            if (e.role == NodeRole::new_node) {
                ++out.new_count;
                continue;
            }
            if (e.stripe >= out.unchanged.size()) {
                out.unchanged.resize(e.stripe + 1, 0);
                out.retired.resize(e.stripe + 1, 0);
            }
            if (e.role == NodeRole::unchanged) {
                ++out.unchanged[e.stripe];
            } else {
                ++out.retired[e.stripe];
            }
        }
        return out;
    }
};

struct ConversionFlowGraph {
    FlowNetwork net;
    std::vector<int> sources;        // one per stripe
    std::vector<int> storage_nodes;  // global storage index -> vertex
    std::vector<int> new_nodes;
    int coordinator = -1;
    int sink = -1;
};

// Builds the flow graph for one download vector (stripe-major, unchanged
// nodes before retired nodes, matching ConversionLayout indexing) and one
// sink attachment of kF global node indices.
inline ConversionFlowGraph build_conversion_graph(const ConversionLayout& layout,
                                                  std::size_t alpha,
                                                  const std::vector<std::size_t>& downloads,
                                                  const std::vector<std::size_t>& sink_pick) {
    layout.validate();
    if (downloads.size() != layout.initial_nodes()) {
        throw parameter_error("one download value per initial node required");
    }
    if (sink_pick.size() != layout.k_final) {
        throw parameter_error("sink must attach to exactly kF nodes");
    }
    ConversionFlowGraph g;
    g.coordinator = g.net.add_node("c");
    g.sink = g.net.add_node("t");
    std::vector<bool> attachable;  // per global storage index
    std::size_t idx = 0;
    for (std::size_t i = 0; i < layout.stripes(); ++i) {
        const int src = g.net.add_node("s" + std::to_string(i));
        g.sources.push_back(src);
        for (std::size_t j = 0; j < layout.unchanged[i] + layout.retired[i]; ++j) {
            const bool is_unchanged = j < layout.unchanged[i];
            const std::string name = (is_unchanged ? "u" : "r") + std::to_string(i) + "." +
                                     std::to_string(is_unchanged ? j : j - layout.unchanged[i]);
            const int v = g.net.add_node(name);
            g.storage_nodes.push_back(v);
            attachable.push_back(is_unchanged);
            if (downloads[idx] > alpha) {
                throw parameter_error("cannot download more than alpha from a node");
            }
            g.net.add_edge(src, v, static_cast<std::int64_t>(alpha));
            g.net.add_edge(v, g.coordinator, static_cast<std::int64_t>(downloads[idx]));
            ++idx;
        }
    }
    for (std::size_t j = 0; j < layout.new_count; ++j) {
        const int v = g.net.add_node("n" + std::to_string(j));
        g.storage_nodes.push_back(v);
        g.new_nodes.push_back(v);
        attachable.push_back(true);
        g.net.add_edge(g.coordinator, v, static_cast<std::int64_t>(alpha));
    }
    for (std::size_t global : sink_pick) {
        if (global >= g.storage_nodes.size() || !attachable[global]) {
            throw parameter_error("sink attachment must name unchanged or new nodes");
        }
        g.net.add_edge(g.storage_nodes[global], g.sink, static_cast<std::int64_t>(alpha));
    }
    return g;
}

inline std::int64_t max_flow(ConversionFlowGraph& graph, int source, int sink) {
    return graph.net.max_flow(source, sink);
}

namespace detail {

// Global indices of nodes a sink may attach to: unchanged nodes of every
// stripe plus the new nodes.
inline std::vector<std::size_t> attachable_indices(const ConversionLayout& layout) {
    std::vector<std::size_t> out;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < layout.stripes(); ++i) {
        for (std::size_t j = 0; j < layout.unchanged[i]; ++j) {
            out.push_back(idx + j);
        }
        idx += layout.unchanged[i] + layout.retired[i];
    }
    for (std::size_t j = 0; j < layout.new_count; ++j) {
        out.push_back(idx + j);
    }
    return out;
}

}  // namespace detail

// Necessary information-flow condition: every source can push kI*alpha to
// every kF-subset of final nodes. Exhaustive over sink attachments.
inline bool verify_feasibility(const ConversionLayout& layout, std::size_t alpha,
                               const std::vector<std::size_t>& downloads) {
    layout.validate();
    const std::vector<std::size_t> attach = detail::attachable_indices(layout);
    const std::int64_t need = static_cast<std::int64_t>(layout.k_initial * alpha);
    return for_each_subset(attach.size(), layout.k_final,
                           [&](const std::vector<std::size_t>& rel) {
                               std::vector<std::size_t> pick;
                               pick.reserve(rel.size());
                               for (std::size_t r : rel) {
                                   pick.push_back(attach[r]);
                               }
                               ConversionFlowGraph g =
                                   build_conversion_graph(layout, alpha, downloads, pick);
                               for (int src : g.sources) {
                                   if (g.net.max_flow(src, g.sink) < need) {
                                       return false;
                                   }
                               }
                               return true;
                           });
}

inline bool verify_trace_feasible(const ConversionTrace& trace, std::size_t k_initial,
                                  std::size_t k_final) {
    ConversionLayout layout = ConversionLayout::from_trace(trace, k_initial, k_final);
    std::vector<std::size_t> downloads;
    for (const TraceEntry& e : trace.entries) {
        if (e.role != NodeRole::new_node) {
            downloads.push_back(e.subsymbols_read);
        }
    }
    return verify_feasibility(layout, trace.alpha, downloads);
}

namespace detail {

// Non-increasing download assignments for one class of interchangeable nodes.
inline void multisets(std::size_t count, std::size_t alpha, std::vector<std::size_t>& cur,
                      std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == count) {
        out.push_back(cur);
        return;
    }
    const std::size_t limit = cur.empty() ? alpha : cur.back();
    for (std::size_t v = 0; v <= limit; ++v) {
        // descending order keeps one representative per multiset
        cur.push_back(limit - v);
        multisets(count, alpha, cur, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<std::size_t>> class_multisets(std::size_t count,
                                                             std::size_t alpha) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    multisets(count, alpha, cur, out);
    return out;
}

}  // namespace detail

// Smallest feasible gamma = sum of downloads + new_count*alpha over integral
// download vectors. Nodes inside one (stripe, role) class are interchangeable
// in the graph, so only one representative per download multiset is tried.
// Candidates are scanned in ascending total order; the first feasible one is
// the minimum.
inline std::int64_t min_bandwidth_search(const ConversionLayout& layout, std::size_t alpha,
                                         std::size_t budget = 2'000'000) {
    layout.validate();
    struct NodeClass {
        std::size_t count;
        std::vector<std::vector<std::size_t>> options;
    };
    std::vector<NodeClass> classes;
    for (std::size_t i = 0; i < layout.stripes(); ++i) {
        classes.push_back({layout.unchanged[i], detail::class_multisets(layout.unchanged[i], alpha)});
        classes.push_back({layout.retired[i], detail::class_multisets(layout.retired[i], alpha)});
    }
    struct Candidate {
        std::size_t total;
        std::vector<std::size_t> choice;  // option index per class
    };
    std::vector<Candidate> candidates;
    std::vector<std::size_t> choice(classes.size(), 0);
    std::size_t enumerated = 0;
    const std::function<void(std::size_t, std::size_t)> emit = [&](std::size_t ci,
                                                                   std::size_t total) {
        if (ci == classes.size()) {
            candidates.push_back({total, choice});
            if (++enumerated > budget) {
                throw search_budget_error("download enumeration exceeded the search budget");
            }
            return;
        }
        for (std::size_t oi = 0; oi < classes[ci].options.size(); ++oi) {
            choice[ci] = oi;
            std::size_t sub = 0;
            for (std::size_t v : classes[ci].options[oi]) {
                sub += v;
            }
            emit(ci + 1, total + sub);
        }
    };
    emit(0, 0);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.total < b.total; });

    // one cheap necessary cut per stripe: the sink may dodge up to
    // (attachable - kF) unchanged nodes of the stripe
    const std::size_t dodge = layout.attachable() - layout.k_final;
    std::size_t checks = 0;
    for (const Candidate& cand : candidates) {
        std::vector<std::size_t> downloads;
        bool plausible = true;
        for (std::size_t i = 0; i < layout.stripes(); ++i) {
            const auto& u_opt = classes[2 * i].options[cand.choice[2 * i]];
            const auto& r_opt = classes[2 * i + 1].options[cand.choice[2 * i + 1]];
            std::size_t stripe_total = 0;
            for (std::size_t v : u_opt) {
                downloads.push_back(v);
                stripe_total += v;
            }
            for (std::size_t v : r_opt) {
                downloads.push_back(v);
                stripe_total += v;
            }
            const std::size_t reachable = layout.unchanged[i] - std::min(layout.unchanged[i], dodge);
            if (reachable * alpha + stripe_total < layout.k_initial * alpha) {
                plausible = false;
            }
        }
        if (!plausible) {
            continue;
        }
        if (++checks > budget) {
            throw search_budget_error("feasibility checks exceeded the search budget");
        }
        if (verify_feasibility(layout, alpha, downloads)) {
            return static_cast<std::int64_t>(cand.total + layout.new_count * alpha);
        }
    }
    throw search_budget_error("no feasible download vector found");
}

// Stable merge-regime layout for the given parameters.
inline ConversionLayout stable_layout(const MergeParams& p) {
    ConversionLayout layout;
    layout.k_initial = p.k_initial;
    layout.k_final = p.k_final();
    layout.unchanged.assign(p.sigma, p.k_initial);
    layout.retired.assign(p.sigma, p.r_initial);
    layout.new_count = p.r_final;
    return layout;
}

}  // namespace convcode
