#include "doctest.h"

#include "framekit/cuntz.hpp"
#include "framekit/errors.hpp"
#include "support/generators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace framekit;

namespace {

const CuntzElement u = CuntzElement::u();
const CuntzElement v = CuntzElement::v();
const CuntzElement us = CuntzElement::letter(kLetterUStar);
const CuntzElement vs = CuntzElement::letter(kLetterVStar);

Word random_plain(Rng& rng, int max_len) {
    Word w;
    const int len = rng.range(0, max_len);
    for (int k = 0; k < len; ++k) w += rng.below(2) == 0 ? kLetterU : kLetterV;
    return w;
}

// p q* in normal form.
Word random_normal(Rng& rng, int max_len) { return random_plain(rng, max_len) + adjoint_word(random_plain(rng, max_len)); }

CuntzElement random_element(Rng& rng, int terms, int max_len) {
    CuntzElement e;
    for (int k = 0; k < terms; ++k) e += CuntzElement::word(random_normal(rng, max_len), rng.complex_normal());
    return e;
}

bool normal_form(const Word& w) {
    bool seen_star = false;
    for (char c : w) {
        if (c == kLetterUStar || c == kLetterVStar) seen_star = true;
        if ((c == kLetterU || c == kLetterV) && seen_star) return false;
    }
    return true;
}

// Word-by-word application with bit arithmetic on the basis index.
Sequence oracle_apply(const CuntzElement& e, std::uint64_t k0) {
    Sequence out;
    for (const auto& [w, c] : e.terms()) {
        std::uint64_t k = k0;
        bool alive = true;
        for (std::size_t i = w.size(); i-- > 0 && alive;) {
            const char letter = w[i];
            if (letter == kLetterU) k <<= 1;
            else if (letter == kLetterV) k = (k << 1) | 1U;
            else if (letter == kLetterUStar) { alive = (k & 1U) == 0; k >>= 1; }
            else { alive = (k & 1U) == 1; k >>= 1; }
        }
        if (alive) out[k] += c;
    }
    return out;
}

bool same_sequence(const Sequence& a, const Sequence& b, double tol = 1e-12) {
    Sequence diff = a;
    for (const auto& [i, c] : b) diff[i] -= c;
    for (const auto& [i, c] : diff)
        if (std::abs(c) > tol) return false;
    return true;
}

Sequence compose(const CuntzElement& a, const CuntzElement& b, std::uint64_t k) {
    return concrete_apply(a, concrete_apply(b, basis_vector(k)));
}

ElementVector random_vector(Rng& rng, std::size_t len) {
    ElementVector x;
    for (std::size_t i = 0; i < len; ++i) x.push_back(random_element(rng, 3, 2));
    return x;
}

bool vectors_equal(const ElementVector& a, const ElementVector& b, double tol = 1e-12) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CuntzElement d = a[i] - b[i];
        d.prune(tol);
        if (!d.is_zero()) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("cuntz") {

TEST_CASE("word relations") {
    CHECK(us * u == CuntzElement::one());
    CHECK((us * v).is_zero());
    CHECK((vs * u).is_zero());
    CHECK(vs * v == CuntzElement::one());
    CHECK((u * vs).adjoint() == v * us);
    // uu* + vv* is not rewritten symbolically
    CHECK_FALSE(u * us + v * vs == CuntzElement::one());
    CHECK(concrete_equal(u * us + v * vs, CuntzElement::one()));
}

TEST_CASE("products of normal forms stay normal") {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const Word a = random_normal(rng, 4), b = random_normal(rng, 4);
        if (auto w = reduce_product(a, b)) CHECK(normal_form(*w));
    }
}

TEST_CASE("concrete representation") {
    const Sequence y = concrete_apply(u, basis_vector(3));
    CHECK(y.size() == 1);
    CHECK(y.at(6) == Complex(1.0));
    CHECK(concrete_apply(v, basis_vector(3)).count(7) == 1);
    for (std::uint64_t k = 0; k < 64; ++k) {
        CHECK(same_sequence(concrete_apply(u * us + v * vs, basis_vector(k)), basis_vector(k)));
        CHECK(same_sequence(compose(us, u, k), basis_vector(k)));
        CHECK(compose(us, v, k).empty());
    }
    Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const CuntzElement e = random_element(rng, 5, 3);
        for (std::uint64_t k = 0; k < 64; ++k) CHECK(same_sequence(concrete_apply(e, basis_vector(k)), oracle_apply(e, k)));
    }
    CHECK_THROWS_AS(concrete_apply(CuntzElement::letter(symbolic_letter(1)), basis_vector(0)), InvalidInput);
}

TEST_CASE("word algebra agrees with the representation") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const CuntzElement a = random_element(rng, 4, 3), b = random_element(rng, 4, 3);
        const CuntzElement ab = a * b, astar = a.adjoint();
        for (std::uint64_t k = 0; k < 64; ++k) {
            CHECK(same_sequence(concrete_apply(ab, basis_vector(k)), compose(a, b, k)));
            // <a* e_k, e_j> = conj <a e_j, e_k>
            for (const auto& [j, c] : concrete_apply(astar, basis_vector(k))) {
                const Sequence back = concrete_apply(a, basis_vector(j));
                const auto it = back.find(k);
                CHECK(std::abs(std::conj(it == back.end() ? Complex(0.0) : it->second) - c) < 1e-12);
            }
        }
    }
}

TEST_CASE("norm bounds") {
    const auto iso = norm_bounds(u, 3);
    CHECK(iso.lo == doctest::Approx(1.0));
    CHECK(iso.hi == doctest::Approx(1.0));
    for (unsigned depth = 2; depth <= 6; ++depth) {
        const auto proj = norm_bounds(u * us, depth);
        CHECK(proj.lo == doctest::Approx(1.0));
        CHECK(proj.hi == doctest::Approx(1.0));
    }
    const auto sum = norm_bounds(u + v, 6);
    CHECK(sum.lo == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sum.hi == doctest::Approx(2.0));
    Rng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        const CuntzElement e = random_element(rng, 4, 2);
        double previous = 0.0;
        for (unsigned depth = 4; depth <= 8; ++depth) {
            const auto b = norm_bounds(e, depth);
            CHECK(b.lo >= previous - 1e-12);
            CHECK(b.lo <= b.hi + 1e-12);
            previous = b.lo;
        }
    }
    CHECK_THROWS_AS(norm_bounds(u * u * u, 2), InvalidParameter);
}

TEST_CASE("matrix isomorphism") {
    const auto one = matrix_iso(CuntzElement::one());
    CHECK(one(0, 0) == CuntzElement::one());
    CHECK(one(1, 1) == CuntzElement::one());
    CHECK(one(0, 1).is_zero());
    CHECK(one(1, 0).is_zero());
    const CuntzElement x = u * vs;
    CHECK(concrete_equal(matrix_iso_inverse(matrix_iso(x)), x));
    Rng rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        const CuntzElement a = random_element(rng, 4, 2), b = random_element(rng, 4, 2);
        CHECK(concrete_equal(matrix_iso_inverse(matrix_iso(a)), a));
        // multiplicative once uu* + vv* = 1 is applied, i.e. concretely
        const auto lhs = matrix_iso(a * b), rhs = matrix_iso(a) * matrix_iso(b);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(concrete_equal(lhs(i, j), rhs(i, j)));
        // psi(phi) on matrices reduces symbolically
        const auto back = matrix_iso(matrix_iso_inverse(matrix_iso(a)));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(concrete_equal(back(i, j), matrix_iso(a)(i, j)));
    }
    CHECK_THROWS_AS(matrix_iso_inverse(CuntzMatrix<Complex>(3)), ShapeMismatch);
}

TEST_CASE("TL = 1 - E holds in the word algebra") {
    Rng rng(36);
    for (unsigned n = 2; n <= 6; ++n) {
        const ElementVector x = random_vector(rng, n - 1);
        const ElementVector lhs = t_map(l_map(x));
        ElementVector rhs = x;
        const ElementVector ex = e_map(x);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= ex[i];
        CHECK(vectors_equal(lhs, rhs));
    }
}

TEST_CASE("system maps") {
    const ElementVector a = source_vector(4);
    REQUIRE(a.size() == 3);
    CHECK(a[0].is_zero());
    CHECK(a[2] == CuntzElement(Complex(4.0)));
    ElementVector b;
    for (int i = 1; i <= 4; ++i) b.push_back(CuntzElement(Complex(static_cast<double>(i))));
    const ElementVector f = f_map(b);
    CHECK(f[0] == CuntzElement(Complex(-2.0 * 3.0)));
    CHECK(f[1] == CuntzElement(Complex(-3.0 * 4.0)));
    CHECK(f[2].is_zero());
    // scalars commute with u, so G vanishes
    for (const auto& g : g_map(b, b)) CHECK(g.is_zero());
    CHECK(commutator_delta(2) == doctest::Approx(1.0 / 64000.0));
    CHECK_THROWS_AS(source_vector(1), InvalidParameter);
}

TEST_CASE("Neumann length") {
    for (unsigned n : {2u, 6u, 12u}) {
        const double rho = 1.0 - 1.0 / (8.0 * n * n), tol = 1e-10;
        const unsigned k = neumann_terms_required(n, tol);
        CHECK(std::pow(rho, k) < tol * (1.0 - rho));
        CHECK(std::pow(rho, k - 1) >= tol * (1.0 - rho));
    }
}

TEST_CASE("solver report and norm estimates") {
    const SolveReport r = solve_b(6);
    CHECK(r.b.size() == 6);
    CHECK(r.iteration_settled);
    CHECK(r.initial_hi <= 8.0 * std::sqrt(2.0) * 36.0 * 6.0);
    CHECK(r.b_hi <= 16.0 * std::sqrt(2.0) * 216.0);
    CHECK_FALSE(r.diagnostics.empty());
    // the reported residual is the hi-bound of the equation defect
    ElementVector defect = t_map(r.b);
    const ElementVector a = source_vector(6), f = f_map(r.b), g = g_map(r.b, r.b);
    for (std::size_t i = 0; i < defect.size(); ++i) defect[i] -= a[i] + r.delta * f[i] + r.delta * g[i];
    CHECK(vector_hi(defect) == doctest::Approx(r.residual_hi).epsilon(1e-9));
    CHECK(r.converged == (r.residual_hi < 1e-10));
}

TEST_CASE("commutator lemma structure") {
    for (unsigned n = 2; n <= 8; ++n) CHECK(symbolic_structure_check(n));
    CHECK_THROWS_AS(symbolic_structure_check(1), InvalidParameter);
}

TEST_CASE("build: rescaling and bounds") {
    const SolveReport r = solve_b(6);
    const auto raw = build_dx(r, 1.0, false);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(raw.d_mu(i, j) == raw.d(i, j));
            CHECK(raw.x_mu(i, j) == raw.x(i, j));
        }
    const auto half = build_dx(r, 0.5, false);
    CHECK(half.structure_exact);
    CHECK(half.off_column_max < 1e-12);
    CHECK(half.x_hi <= half.x_formula * (1.0 + 1e-12));
    CHECK(half.d_hi <= half.d_formula * (1.0 + 1e-12));
    CHECK(half.x_hi <= 2.0);
    // entry (1, n) of D_mu is mu^{n-2} b_1 u
    CHECK(half.d_mu(0, 5) == std::pow(0.5, 4) * (r.b[0] * u));
    if (!r.converged) CHECK_THROWS_AS(build_dx(r, 0.5, true), NotConverged);
    CHECK_THROWS_AS(build_dx(r, 0.0, false), InvalidParameter);
}

TEST_CASE("verify: ratio bookkeeping") {
    const VerifyReport rep = verify_bounds({6, 8});
    REQUIRE(rep.rows.size() == 2);
    REQUIRE(rep.ratios.size() == 1);
    CHECK(rep.ratios[0].predicted == doctest::Approx(std::pow(8.0 / 6.0, 3) / 4.0));
    CHECK(rep.ratios[0].measured == doctest::Approx(rep.rows[1].error_bound / rep.rows[0].error_bound));
    CHECK(rep.x_max <= 2.0);
    for (const auto& row : rep.rows) CHECK(row.b_hi <= row.b_limit);
}

TEST_CASE("finite obstruction") {
    CHECK(finite_obstruction(Matrix::Zero(3, 3), Matrix::Zero(3, 3)) == doctest::Approx(1.0));
    Matrix d1(1, 1), x1(1, 1);
    d1(0, 0) = Complex(2.0, 1.0);
    x1(0, 0) = Complex(-3.0, 0.5);
    CHECK(finite_obstruction(d1, x1) == doctest::Approx(1.0));
    Rng rng(37);
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix d = gen::complex_matrix(rng, 5, 5), x = gen::complex_matrix(rng, 5, 5);
        const double gap = finite_obstruction(d, x);
        CHECK(gap >= 1.0 - 1e-9);
        // spectral radius oracle: some eigenvalue of [D, X] - I has modulus >= 1
        const Matrix c = d * x - x * d - Matrix::Identity(5, 5);
        const double radius = Eigen::ComplexEigenSolver<Matrix>(c).eigenvalues().cwiseAbs().maxCoeff();
        CHECK(radius >= 1.0 - 1e-9);
        CHECK(gap >= radius - 1e-9);
    }
    CHECK_THROWS_AS(finite_obstruction(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), ShapeMismatch);
}

}

// Examples that need the fixed-point solve to meet its tolerance. The truncated
// Neumann series cannot reach it, so these are expected to fail.
TEST_SUITE("cuntz_convergence") {

TEST_CASE("n = 2 single equation is solved") {
    const SolveReport r = solve_b(2);
    INFO(r.diagnostics);
    CHECK(r.residual_hi < 1e-10);
}

TEST_CASE("n = 8 converges within the norm bound") {
    const SolveReport r = solve_b(8);
    INFO(r.diagnostics);
    CHECK(r.converged);
    CHECK(r.b_hi <= 16.0 * std::sqrt(2.0) * 512.0);
}

}
