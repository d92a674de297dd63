#ifndef POLYDET_POLYMATRIX_HPP
#define POLYDET_POLYMATRIX_HPP

#include "polydet/matrix.hpp"
#include "polydet/poly.hpp"
#include "polydet/series.hpp"

namespace polydet {

// An n x n matrix of polynomials together with its public degree bound.
// The dual coefficient-matrix view A = A_0 + A_1 X + ... + A_d X^d is
// available through coeff_matrix / from_coeff_matrices.
struct PolyMatrix {
    Matrix<Poly> m;
    int d_bound = 0;

    PolyMatrix() = default;
    PolyMatrix(Matrix<Poly> mat, int d) : m(std::move(mat)), d_bound(d) {
        for (const auto& p : m.e)
            if (p.degree() > d_bound) throw domain_error("PolyMatrix: entry exceeds degree bound");
    }

    std::size_t n() const { return m.n; }
    bool operator==(const PolyMatrix& o) const { return m == o.m; }
};

inline Matrix<u64> coeff_matrix(const PolyMatrix& a, std::size_t j) {
    Matrix<u64> r(a.n(), 0);
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = a.m.e[i].coeff(j);
    return r;
}

inline PolyMatrix from_coeff_matrices(const std::vector<Matrix<u64>>& coeffs) {
    if (coeffs.empty()) throw domain_error("from_coeff_matrices: no coefficients");
    std::size_t n = coeffs[0].n;
    Matrix<Poly> m(n, Poly{});
    for (std::size_t i = 0; i < m.e.size(); ++i) {
        std::vector<u64> c(coeffs.size());
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j].n != n) throw domain_error("from_coeff_matrices: dimension mismatch");
            c[j] = coeffs[j].e[i];
        }
        m.e[i] = Poly(std::move(c));
    }
    return PolyMatrix(std::move(m), static_cast<int>(coeffs.size()) - 1);
}

// Entry-wise Horner evaluation; equal to sum A_j alpha^j in the dual view.
inline Matrix<u64> polymatrix_eval(const PrimeField& f, const Matrix<Poly>& a, u64 alpha) {
    Matrix<u64> r(a.n, 0);
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = poly_eval(f, a.e[i], alpha);
    return r;
}

inline Matrix<u64> polymatrix_eval(const PrimeField& f, const PolyMatrix& a, u64 alpha) {
    return polymatrix_eval(f, a.m, alpha);
}

namespace detail {

// Lagrange basis polynomials l_i = prod_{j != i} (X - a_j) / (a_i - a_j).
inline std::vector<Poly> lagrange_basis(const PrimeField& f, const std::vector<u64>& xs) {
    std::size_t k = xs.size();
    if (k == 0) throw domain_error("lagrange_interpolate: need at least one point");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (xs[i] == xs[j]) throw domain_error("lagrange_interpolate: duplicate abscissae");
    std::vector<Poly> basis(k);
    for (std::size_t i = 0; i < k; ++i) {
        Poly num = Poly::constant(f.one());
        u64 den = f.one();
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            num = poly_mul(f, num, Poly({f.neg(xs[j]), f.one()}));
            den = f.mul(den, f.sub(xs[i], xs[j]));
        }
        basis[i] = poly_scale(f, num, f.inv(den));
    }
    return basis;
}

}  // namespace detail

// Unique interpolant of degree <= k-1 through k scalar points.
inline Poly lagrange_interpolate(const PrimeField& f, const std::vector<u64>& xs,
                                 const std::vector<u64>& ys) {
    if (xs.size() != ys.size()) throw domain_error("lagrange_interpolate: size mismatch");
    auto basis = detail::lagrange_basis(f, xs);
    Poly acc{};
    for (std::size_t i = 0; i < xs.size(); ++i)
        acc = poly_add(f, acc, poly_scale(f, basis[i], ys[i]));
    return acc;
}

// Matrix-valued interpolation: applies the same basis entry-wise.
inline PolyMatrix lagrange_interpolate(const PrimeField& f, const std::vector<u64>& xs,
                                       const std::vector<Matrix<u64>>& ys) {
    if (xs.size() != ys.size()) throw domain_error("lagrange_interpolate: size mismatch");
    auto basis = detail::lagrange_basis(f, xs);
    std::size_t n = ys[0].n;
    Matrix<Poly> m(n, Poly{});
    for (std::size_t e = 0; e < m.e.size(); ++e) {
        Poly acc{};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (ys[i].n != n) throw domain_error("lagrange_interpolate: dimension mismatch");
            acc = poly_add(f, acc, poly_scale(f, basis[i], ys[i].e[e]));
        }
        m.e[e] = std::move(acc);
    }
    return PolyMatrix(std::move(m), static_cast<int>(xs.size()) - 1);
}

// Reference determinant over GF(q) (Gaussian elimination): the independent
// oracle every interactive protocol is validated against.
inline u64 det_reference_field(const PrimeField& f, const Matrix<u64>& a) {
    return det_gauss(f, a);
}

// Exact determinant in GF(q)[X] via the division-free Berkowitz algorithm;
// degree is at most n * d_bound.
inline Poly det_reference_polymat(const PrimeField& f, const Matrix<Poly>& a) {
    PolyRing ring{f};
    return berkowitz_det(ring, a);
}

inline Poly det_reference_polymat(const PrimeField& f, const PolyMatrix& a) {
    return det_reference_polymat(f, a.m);
}

}  // namespace polydet

#endif
