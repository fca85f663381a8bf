#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace convcode {

// Visits every size-k subset of {0, ..., n-1} in lexicographic order.
// The callback returns false to stop early; for_each_subset then returns
// false as well.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    if (k > n) {
        return true;
    }
    while (true) {
        if (!fn(static_cast<const std::vector<std::size_t>&>(idx))) {
            return false;
        }
        // advance
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if (i == 0) {
                return true;
            }
        }
        if (k == 0) {
            return true;
        }
    }
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
    }
    return acc;
}

}  // namespace convcode
