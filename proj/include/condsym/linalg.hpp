#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "condsym/errors.hpp"

namespace condsym {

/// Dense row-major square matrix, sized for the tiny determinants of this library.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::span<const double> data() const noexcept { return a_; }

    double max_abs_entry() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    void swap_rows(std::size_t r, std::size_t s) {
        for (std::size_t j = 0; j < n_; ++j) std::swap((*this)(r, j), (*this)(s, j));
    }

private:
    std::size_t n_;
    std::vector<double> a_;
};

namespace detail {

inline double det3(const SquareMatrix& m, std::size_t r0, std::size_t r1, std::size_t r2, std::size_t c0,
                   std::size_t c1, std::size_t c2) {
    return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
           m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
           m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
}

inline double det_lu(SquareMatrix m) {
    const std::size_t n = m.size();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        }
        if (m(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            m.swap_rows(piv, k);
            det = -det;
        }
        det *= m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

}  // namespace detail

/// Cofactor expansion up to 4x4 (bit-reproducible); LU with partial pivoting beyond.
inline double determinant(const SquareMatrix& m) {
    switch (m.size()) {
        case 0:
            return 1.0;
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        case 3:
            return detail::det3(m, 0, 1, 2, 0, 1, 2);
        case 4:
            return m(0, 0) * detail::det3(m, 1, 2, 3, 1, 2, 3) - m(0, 1) * detail::det3(m, 1, 2, 3, 0, 2, 3) +
                   m(0, 2) * detail::det3(m, 1, 2, 3, 0, 1, 3) - m(0, 3) * detail::det3(m, 1, 2, 3, 0, 1, 2);
        default:
            return detail::det_lu(m);
    }
}

}  // namespace condsym
