// Closed-form conversion-bandwidth bounds and savings analytics for the merge
// regime, all in exact rational arithmetic. Subsymbol counts come out as
// integers whenever rF divides alpha.

#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "convcode/access_optimal.hpp"
#include "convcode/rational.hpp"

namespace convcode {

struct lp_infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimum total conversion bandwidth (reads + writes, in subsymbols) of any
// MDS merge conversion with these parameters. Two branches: when rI >= rF or
// kI <= rF the per-stripe read floor is min{kI, rF} whole symbols; otherwise
// retired parities are read whole and unchanged nodes contribute the
// (1 - rI/rF) fraction that the piggyback construction achieves.
inline Rat merge_bandwidth_lower_bound(std::int64_t k_initial, std::int64_t r_initial,
                                       std::int64_t r_final, std::int64_t sigma,
                                       std::int64_t alpha) {
    if (sigma < 2 || k_initial < 1 || r_initial < 1 || r_final < 1 || alpha < 1) {
        throw parameter_error("merge bound needs sigma >= 2 and positive parameters");
    }
    const Rat writes = Rat(r_final * alpha);
    if (r_initial >= r_final || k_initial <= r_final) {
        return Rat(sigma * alpha * std::min(k_initial, r_final)) + writes;
    }
    const Rat per_stripe =
        Rat(r_initial * alpha) +
        Rat(k_initial * alpha) * (Rat(1) - Rat(r_initial, r_final));
    return Rat(sigma) * per_stripe + writes;
}

// Bandwidth of the default re-encode: read all message data, write the new
// parities.
inline Rat default_conversion_bandwidth(std::int64_t k_initial, std::int64_t r_final,
                                        std::int64_t sigma, std::int64_t alpha) {
    return Rat(sigma * k_initial * alpha + r_final * alpha);
}

struct StripeDownload {
    Rat retired;          // total subsymbols read from retired nodes
    Rat unchanged_total;  // total subsymbols read from unchanged nodes
    Rat read() const { return retired + unchanged_total; }
};

struct MergeLpSolution {
    std::vector<StripeDownload> per_stripe;
    Rat gamma;  // total reads plus new_count * alpha writes
};

// Optimal solution of the per-stripe download LP, in closed form: retired
// nodes are drained first (they are not part of the final stripe, so their
// data is worth more per subsymbol), unchanged nodes only supply what the cut
// constraint still demands. s_cap[i] is S_i = min{rF, u_i} of the cut family.
inline MergeLpSolution solve_merge_lp(std::int64_t k_initial,
                                      const std::vector<std::int64_t>& unchanged,
                                      const std::vector<std::int64_t>& retired,
                                      const std::vector<std::int64_t>& s_cap, std::int64_t alpha,
                                      std::int64_t new_count) {
    const std::size_t stripes = unchanged.size();
    if (retired.size() != stripes || s_cap.size() != stripes) {
        throw parameter_error("per-stripe lists must have equal length");
    }
    if (stripes == 0 || k_initial < 1 || alpha < 1 || new_count < 0) {
        throw parameter_error("invalid LP dimensions");
    }
    const std::int64_t n_initial = unchanged[0] + retired[0];
    MergeLpSolution out;
    out.gamma = Rat(new_count * alpha);
    for (std::size_t i = 0; i < stripes; ++i) {
        const std::int64_t u = unchanged[i];
        const std::int64_t r = retired[i];
        const std::int64_t s = s_cap[i];
        if (u < 0 || r < 0 || u > k_initial) {
            throw parameter_error("unchanged count must lie in [0, kI]");
        }
        if (u + r != n_initial) {
            throw parameter_error("all stripes must have the same node count");
        }
        if (s < 0 || s > u) {
            throw parameter_error("S_i must lie in [0, u_i]");
        }
        if (u + r < k_initial) {
            throw lp_infeasible("stripe " + std::to_string(i) +
                                " has fewer than kI nodes; not an MDS layout");
        }
        const std::int64_t r_init = n_initial - k_initial;
        StripeDownload d;
        d.retired = Rat(std::min(k_initial + s - u, r) * alpha);
        d.unchanged_total =
            (u > 0 && s > r_init) ? Rat((s - r_init) * u * alpha, s) : Rat(0);
        out.gamma = out.gamma + d.read();
        out.per_stripe.push_back(d);
    }
    return out;
}

// kI = kF case (sigma = 1). Zero when no new nodes are needed; otherwise the
// regenerating-code-style expression. r_initial = 0 (replication of data
// only) is allowed here.
inline Rat equal_k_lower_bound(std::int64_t k_initial, std::int64_t r_initial,
                               std::int64_t r_final, std::int64_t alpha) {
    if (k_initial < 1 || r_initial < 0 || r_final < 0 || alpha < 1) {
        throw parameter_error("invalid equal-k parameters");
    }
    if (r_initial >= r_final) {
        return Rat(0);
    }
    const Rat shrink = Rat(1) - Rat(r_initial, r_final);
    return Rat((k_initial + r_initial) * alpha) * shrink + Rat((r_final - r_initial) * alpha);
}

// Minimum per-stripe read when every initial node must download the same
// amount, stable layout: the cut constraint forces beta >= S*alpha/(S + rI)
// per node with S = min{rF, kI}. Strictly above the nonuniform optimum
// whenever rI < rF < kI.
inline Rat uniform_download_min_read(std::int64_t k_initial, std::int64_t r_initial,
                                     std::int64_t r_final, std::int64_t alpha) {
    if (k_initial < 1 || r_initial < 1 || r_final < 1 || alpha < 1) {
        throw parameter_error("invalid uniform-download parameters");
    }
    const std::int64_t s = std::min(r_final, k_initial);
    const Rat beta = Rat(s * alpha, s + r_initial);
    return Rat(k_initial + r_initial) * beta;
}

// Nonuniform optimum for comparison: per-stripe read of the merge bound.
inline Rat optimal_per_stripe_read(std::int64_t k_initial, std::int64_t r_initial,
                                   std::int64_t r_final, std::int64_t alpha) {
    if (r_initial >= r_final || k_initial <= r_final) {
        return Rat(std::min(k_initial, r_final) * alpha);
    }
    return Rat(r_initial * alpha) + Rat(k_initial * alpha) * (Rat(1) - Rat(r_initial, r_final));
}

// ---------------------------------------------------------------------------
// Relative savings over the default approach, read traffic only, as a
// function of the normalized redundancies r~I = rI/kI and r~F = rF/kI.

struct SavingsPoint {
    double r_tilde_initial;
    double r_tilde_final;
    double rho;
    int region;  // 1: rF <= rI, 2: rI < rF < 1, 3: rF >= kI
};

inline int savings_region(double r_tilde_initial, double r_tilde_final) {
    if (r_tilde_final >= 1.0) {
        return 3;
    }
    return r_tilde_final <= r_tilde_initial ? 1 : 2;
}

inline double savings_ratio(double r_tilde_initial, double r_tilde_final) {
    if (r_tilde_initial <= 0.0 || r_tilde_final <= 0.0) {
        throw parameter_error("normalized redundancies must be positive");
    }
    switch (savings_region(r_tilde_initial, r_tilde_final)) {
        case 1: return 1.0 - r_tilde_final;
        case 2: return r_tilde_initial * (1.0 / r_tilde_final - 1.0);
        default: return 0.0;
    }
}

inline std::vector<SavingsPoint> sweep_savings(const std::vector<double>& r_tilde_initial,
                                               const std::vector<double>& r_tilde_final) {
    std::vector<SavingsPoint> out;
    out.reserve(r_tilde_initial.size() * r_tilde_final.size());
    for (double rti : r_tilde_initial) {
        for (double rtf : r_tilde_final) {
            out.push_back({rti, rtf, savings_ratio(rti, rtf), savings_region(rti, rtf)});
        }
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline void write_savings_csv(std::ostream& os, const std::vector<SavingsPoint>& points) {
    os << "r_tilde_I,r_tilde_F,rho,region\n";
    for (const SavingsPoint& p : points) {
        os << format_double(p.r_tilde_initial) << ',' << format_double(p.r_tilde_final) << ','
           << format_double(p.rho) << ',' << p.region << '\n';
    }
}

}  // namespace convcode
