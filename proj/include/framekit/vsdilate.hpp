#pragma once

#include "framekit/exact_matrix.hpp"

#include <optional>
#include <vector>

namespace framekit {

// Linear injective dilation (W, I, U, P) on a truncated model of W. All maps
// are matrices over the block space; `horizon` is the largest power for which
// the dilation equation is claimed exactly.
template <class S>
struct DilationQuadruple {
    ExactMatrix<S> embedding;   // I : V -> W
    ExactMatrix<S> dilation;    // U
    std::optional<ExactMatrix<S>> inverse;  // U^{-1} when U is invertible
    ExactMatrix<S> projection;  // idempotent P with P(W) = I(V)
    unsigned horizon = 1;
};

template <class S>
struct PowerCheck {
    unsigned power = 0;
    ExactMatrix<S> compressed;  // I^+ P U^k I, i.e. the V-block of P U^k I
    ExactMatrix<S> target;      // T^k
    bool holds = false;
};

// [[T, I], [I, 0]] with inverse [[0, I], [I, -T]].
template <class S>
DilationQuadruple<S> halmos(const ExactMatrix<S>& t);

// U = [[T, B], [C, D]] with the closed-form inverse of the requested Schur
// case (1: T and D - C T^{-1} B invertible, 2: D and T - B D^{-1} C,
// 3: B and C - D B^{-1} T, 4: C and B - T C^{-1} D).
template <class S>
DilationQuadruple<S> schur_halmos(const ExactMatrix<S>& t, const ExactMatrix<S>& b, const ExactMatrix<S>& c,
                                  const ExactMatrix<S>& d, int schur_case);

// (N+1)-block companion dilation; the table runs through k = N + 1.
template <class S>
struct NDilation {
    DilationQuadruple<S> quad;
    std::vector<PowerCheck<S>> table;
};

template <class S>
NDilation<S> n_dilation(const ExactMatrix<S>& t, unsigned n);

// Window [-w, w] of the doubly infinite banded operator: T at (0,0) and
// identities on the superdiagonal. The inverse window has identities on the
// subdiagonal and -T at (1,-1).
template <class S>
struct BandedWindow {
    DilationQuadruple<S> quad;  // quad.inverse is empty: the window of U is not invertible
    ExactMatrix<S> inverse_window;
    int window = 0;
    std::vector<PowerCheck<S>> table;  // n = 1..w-1
    bool inverse_interior_exact = false;  // UV = VU = I away from the edges
};

template <class S>
BandedWindow<S> banded_sznagy(const ExactMatrix<S>& t, int window);
// Compression of U^n for n inside the verified range; throws past it.
template <class S>
ExactMatrix<S> banded_power(const BandedWindow<S>& w, unsigned n);

// Finitely supported sequences cut at K + 1 blocks: I x = (x, 0, ...),
// U the right shift, P (x_n) = sum I T^n x_n.
template <class S>
struct StandardDilation {
    DilationQuadruple<S> quad;
    std::vector<PowerCheck<S>> table;  // n = 0..K
    bool idempotent = false;
    bool range_matches = false;
    bool minimal = false;  // U^n I V, n <= K, spans the model
};

template <class S>
StandardDilation<S> standard_dilation(const ExactMatrix<S>& t, unsigned horizon);

// Two-index arrays cut at (K+1) x (K+1) blocks; U shifts rows, V columns.
template <class S>
struct AndoDilation {
    ExactMatrix<S> embedding;
    ExactMatrix<S> row_shift;     // U
    ExactMatrix<S> column_shift;  // V
    ExactMatrix<S> projection;
    unsigned horizon = 0;
    bool grid_exact = false;       // I T^n S^m = P U^n V^m I for n + m <= K
    bool shifts_commute = false;   // the zero-padded shifts agree
    std::size_t grid_points = 0;
};

template <class S>
AndoDilation<S> ando_like(const ExactMatrix<S>& t, const ExactMatrix<S>& s, unsigned horizon);

template <class S>
struct IntertwiningLift {
    ExactMatrix<S> lift;  // R (x_n) = (S x_n)
    double shift_residual = 0.0;       // U1 R - R U2
    double projection_residual = 0.0;  // R P2 - P1 R
    double embedding_residual = 0.0;   // R I2 - I1 S
    bool exact = false;
};

template <class S>
IntertwiningLift<S> intertwine_lift(const ExactMatrix<S>& t1, const ExactMatrix<S>& t2, const ExactMatrix<S>& s,
                                    unsigned horizon);

template <class S>
struct SimilarityWitness {
    S trace_skew;     // trace of [[T, T-I], [T+I, T]]
    S trace_halmos;   // trace of [[T, I], [I, 0]]
    bool skew_invertible = false;
    bool inconclusive = false;  // trace T = 0
    bool distinct = false;
};

template <class S>
SimilarityWitness<S> non_similarity_witness(const ExactMatrix<S>& t);

#define FRAMEKIT_VSDILATE_EXTERN(S)                                                                                    \
    extern template DilationQuadruple<S> halmos(const ExactMatrix<S>&);                                                \
    extern template DilationQuadruple<S> schur_halmos(const ExactMatrix<S>&, const ExactMatrix<S>&,                    \
                                                      const ExactMatrix<S>&, const ExactMatrix<S>&, int);              \
    extern template NDilation<S> n_dilation(const ExactMatrix<S>&, unsigned);                                          \
    extern template BandedWindow<S> banded_sznagy(const ExactMatrix<S>&, int);                                         \
    extern template ExactMatrix<S> banded_power(const BandedWindow<S>&, unsigned);                                     \
    extern template StandardDilation<S> standard_dilation(const ExactMatrix<S>&, unsigned);                            \
    extern template AndoDilation<S> ando_like(const ExactMatrix<S>&, const ExactMatrix<S>&, unsigned);                 \
    extern template IntertwiningLift<S> intertwine_lift(const ExactMatrix<S>&, const ExactMatrix<S>&,                  \
                                                        const ExactMatrix<S>&, unsigned);                              \
    extern template SimilarityWitness<S> non_similarity_witness(const ExactMatrix<S>&);

FRAMEKIT_VSDILATE_EXTERN(Rational)
FRAMEKIT_VSDILATE_EXTERN(double)

#undef FRAMEKIT_VSDILATE_EXTERN

}  // namespace framekit
