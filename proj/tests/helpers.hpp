#ifndef POLYDET_TESTS_HELPERS_HPP
#define POLYDET_TESTS_HELPERS_HPP

#include "polydet/polydet.hpp"

namespace polydet::testing {

inline Poly P(std::initializer_list<u64> cs) { return Poly(std::vector<u64>(cs)); }

// The worked 2x2 example: entries (2+3X+7X^2, 8+5X+X^3; 9+4X+6X^2, X^2+2X^3).
inline Matrix<Poly> example_matrix() {
    Matrix<Poly> a(2, Poly{});
    a.at(0, 0) = P({2, 3, 7});
    a.at(0, 1) = P({8, 5, 0, 1});
    a.at(1, 0) = P({9, 4, 6});
    a.at(1, 1) = P({0, 0, 1, 2});
    return a;
}

// Independent determinant oracle: cofactor expansion along the first row,
// no shared code with the Berkowitz path.
inline Poly det_cofactor(const PrimeField& f, const Matrix<Poly>& a) {
    std::size_t n = a.n;
    if (n == 1) return a.at(0, 0);
    Poly acc;
    for (std::size_t j = 0; j < n; ++j) {
        Matrix<Poly> minor(n - 1, Poly{});
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = a.at(r, c);
            }
        }
        Poly term = poly_mul(f, a.at(0, j), det_cofactor(f, minor));
        acc = (j % 2 == 0) ? poly_add(f, acc, term) : poly_sub(f, acc, term);
    }
    return acc;
}

inline Matrix<Poly> random_polymat(const PrimeField& f, std::size_t n, int d, Rng& rng) {
    return PolyMatrixRing{f, n, d}.random(rng);
}

// A random matrix with an invertible constant coefficient.
inline Matrix<Poly> random_polymat_unit(const PrimeField& f, std::size_t n, int d, Rng& rng) {
    for (;;) {
        Matrix<Poly> a = random_polymat(f, n, d, rng);
        if (det_reference_field(f, polymatrix_eval(f, a, 0)) != 0) return a;
    }
}

// A random matrix whose constant coefficient is singular.
inline Matrix<Poly> random_polymat_singular0(const PrimeField& f, std::size_t n, int d,
                                             Rng& rng) {
    for (;;) {
        Matrix<Poly> a = random_polymat(f, n, d, rng);
        // zero out one row of the constant coefficient, keeping A(0) singular
        // only if the rest does not compensate -- so just overwrite the whole
        // constant block with a rank-deficient matrix
        FieldRing fr{f};
        Matrix<u64> c0 = mat_random(fr, n, rng);
        if (n >= 1) {
            for (std::size_t j = 0; j < n; ++j) c0.at(n - 1, j) = c0.at(0, j);
            if (n == 1) c0.at(0, 0) = 0;
        }
        for (std::size_t i = 0; i < a.e.size(); ++i) {
            std::vector<u64> c = a.e[i].c;
            if (c.empty()) c.resize(1);
            c[0] = c0.e[i];
            a.e[i] = Poly(std::move(c));
        }
        if (det_reference_field(f, polymatrix_eval(f, a, 0)) == 0) return a;
    }
}

inline Shared<Matrix<Poly>> share_polymat(EngineState& st, const Matrix<Poly>& a, int d) {
    return make_shared_value(PolyMatrixRing{st.field, a.n, d}, a, st.n_players,
                             st.dealer.stream());
}

// 99.9% critical value of the chi-square distribution with 6 degrees of
// freedom (q=7 reveal buckets).
inline constexpr double kChi2_6dof_999 = 22.458;

inline double chi_square(const std::vector<u64>& counts, double expected) {
    double s = 0;
    for (u64 c : counts) {
        double dlt = double(c) - expected;
        s += dlt * dlt / expected;
    }
    return s;
}

}  // namespace polydet::testing

#endif
