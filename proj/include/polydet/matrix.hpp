#ifndef POLYDET_MATRIX_HPP
#define POLYDET_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "polydet/common.hpp"

namespace polydet {

// Square matrix over an arbitrary scalar type; operations are routed through
// a ring object so the same container serves GF(q), GF(q)[X], truncated
// series and GF(q)[X]/f entries.
template <class T>
struct Matrix {
    std::size_t n = 0;
    std::vector<T> e;

    Matrix() = default;
    Matrix(std::size_t dim, const T& init) : n(dim), e(dim * dim, init) {}

    T& at(std::size_t i, std::size_t j) { return e[i * n + j]; }
    const T& at(std::size_t i, std::size_t j) const { return e[i * n + j]; }

    bool operator==(const Matrix& o) const { return n == o.n && e == o.e; }
};

template <class S>
Matrix<typename S::Elem> mat_identity(const S& s, std::size_t n) {
    Matrix<typename S::Elem> r(n, s.zero());
    for (std::size_t i = 0; i < n; ++i) r.at(i, i) = s.one();
    return r;
}

template <class S>
Matrix<typename S::Elem> mat_add(const S& s, const Matrix<typename S::Elem>& a,
                                 const Matrix<typename S::Elem>& b) {
    if (a.n != b.n) throw domain_error("mat_add: dimension mismatch");
    Matrix<typename S::Elem> r(a.n, s.zero());
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = s.add(a.e[i], b.e[i]);
    return r;
}

template <class S>
Matrix<typename S::Elem> mat_sub(const S& s, const Matrix<typename S::Elem>& a,
                                 const Matrix<typename S::Elem>& b) {
    if (a.n != b.n) throw domain_error("mat_sub: dimension mismatch");
    Matrix<typename S::Elem> r(a.n, s.zero());
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = s.sub(a.e[i], b.e[i]);
    return r;
}

template <class S>
Matrix<typename S::Elem> mat_neg(const S& s, const Matrix<typename S::Elem>& a) {
    Matrix<typename S::Elem> r(a.n, s.zero());
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = s.neg(a.e[i]);
    return r;
}

template <class S>
Matrix<typename S::Elem> mat_scale(const S& s, const Matrix<typename S::Elem>& a,
                                   const typename S::Elem& c) {
    Matrix<typename S::Elem> r(a.n, s.zero());
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = s.mul(a.e[i], c);
    return r;
}

// Classical cubic product; sub-cubic algorithms are deliberately out of scope.
template <class S>
Matrix<typename S::Elem> mat_mul(const S& s, const Matrix<typename S::Elem>& a,
                                 const Matrix<typename S::Elem>& b) {
    if (a.n != b.n) throw domain_error("mat_mul: dimension mismatch");
    std::size_t n = a.n;
    Matrix<typename S::Elem> r(n, s.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                r.at(i, j) = s.add(r.at(i, j), s.mul(a.at(i, k), b.at(k, j)));
    return r;
}

template <class S>
Matrix<typename S::Elem> mat_random(const S& s, std::size_t n, Rng& rng) {
    Matrix<typename S::Elem> r(n, s.zero());
    for (auto& v : r.e) v = s.random(rng);
    return r;
}

// Determinant over a field by Gaussian elimination with partial pivoting.
template <class F>
typename F::Elem det_gauss(const F& f, Matrix<typename F::Elem> a) {
    std::size_t n = a.n;
    typename F::Elem det = f.one();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && f.is_zero(a.at(pivot, col))) ++pivot;
        if (pivot == n) return f.zero();
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(pivot, j), a.at(col, j));
            det = f.neg(det);
        }
        det = f.mul(det, a.at(col, col));
        typename F::Elem pinv = f.inv(a.at(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            if (f.is_zero(a.at(i, col))) continue;
            typename F::Elem factor = f.mul(a.at(i, col), pinv);
            for (std::size_t j = col; j < n; ++j)
                a.at(i, j) = f.sub(a.at(i, j), f.mul(factor, a.at(col, j)));
        }
    }
    return det;
}

// Berkowitz division-free characteristic polynomial over any commutative
// ring.  Returns the coefficients of det(lambda*I - A) in decreasing powers
// of lambda (leading coefficient 1, length n+1).
template <class S>
std::vector<typename S::Elem> berkowitz_charpoly(const S& s, const Matrix<typename S::Elem>& a) {
    using E = typename S::Elem;
    std::size_t n = a.n;
    std::vector<E> v{s.one()};
    if (n == 0) return v;
    // Grow the leading principal block one row/column at a time; for the
    // r x r block partitioned as [[M, C], [R, d]] the update is a product
    // with the Toeplitz column [1, -d, -R*C, -R*M*C, ...].
    for (std::size_t r = 1; r <= n; ++r) {
        std::size_t m = r - 1;
        E d = a.at(m, m);
        std::vector<E> col(m), row(m);
        for (std::size_t i = 0; i < m; ++i) {
            col[i] = a.at(i, m);
            row[i] = a.at(m, i);
        }
        std::vector<E> items;
        items.reserve(r + 1);
        items.push_back(s.one());
        items.push_back(s.neg(d));
        std::vector<E> w = col;
        for (std::size_t k = 2; k <= r; ++k) {
            E dot = s.zero();
            for (std::size_t i = 0; i < m; ++i) dot = s.add(dot, s.mul(row[i], w[i]));
            items.push_back(s.neg(dot));
            if (k == r) break;
            // w <- M * w
            std::vector<E> nw(m, s.zero());
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    nw[i] = s.add(nw[i], s.mul(a.at(i, j), w[j]));
            w = std::move(nw);
        }
        // Multiply by the lower-triangular Toeplitz matrix built from items.
        std::vector<E> next(r + 1, s.zero());
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; j < v.size() && j <= i; ++j)
                next[i] = s.add(next[i], s.mul(items[i - j], v[j]));
        v = std::move(next);
    }
    return v;
}

template <class S>
typename S::Elem berkowitz_det(const S& s, const Matrix<typename S::Elem>& a) {
    auto cp = berkowitz_charpoly(s, a);
    typename S::Elem d = cp.back();  // det(-A)
    return a.n % 2 == 1 ? s.neg(d) : d;
}

}  // namespace polydet

#endif
