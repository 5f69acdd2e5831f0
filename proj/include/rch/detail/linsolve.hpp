#pragma once

#include "rch/field.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rch::detail {

// Exact Gauss-Jordan elimination for a square system; nullopt when singular.
template <class F>
std::optional<std::vector<F>> solve_linear(std::vector<std::vector<F>> a, std::vector<F> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && field_sign(a[p][c]) == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || field_sign(a[r][c]) == 0) continue;
            const F f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
    return b;
}

}  // namespace rch::detail
