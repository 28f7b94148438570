#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace slp::testing {

/// Value at the window centre of the least-squares polynomial through the
/// window, via normal equations in long double with partial pivoting.
inline std::vector<double> window_lsq_oracle(const std::vector<double>& x, int window, int order) {
    const int n = static_cast<int>(x.size());
    const int h = window / 2;
    const int m = order + 1;
    std::vector<double> out(x.size());
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<long double>> a(static_cast<std::size_t>(m), std::vector<long double>(static_cast<std::size_t>(m + 1), 0.0L));
        for (int k = -h; k <= h; ++k) {
            const long double y = x[static_cast<std::size_t>(((i + k) % n + n) % n)];
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] += std::pow(static_cast<long double>(k), r + c);
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] += std::pow(static_cast<long double>(k), r) * y;
            }
        }
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int r = col + 1; r < m; ++r)
                if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)])) piv = r;
            std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
            for (int r = 0; r < m; ++r) {
                if (r == col) continue;
                const long double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
                for (int c = col; c <= m; ++c) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -= f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            }
        }
        // Polynomial value at offset 0 is the constant coefficient.
        out[static_cast<std::size_t>(i)] = static_cast<double>(a[0][static_cast<std::size_t>(m)] / a[0][0]);
    }
    return out;
}

}  // namespace slp::testing
