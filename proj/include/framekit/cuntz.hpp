#pragma once

// Algebra generated by two isometries u, v with u*u = v*v = uu* + vv* = 1 and
// u*v = v*u = 0. Elements are finite sums of words; only the relations
// u*u = v*v = 1, u*v = v*u = 0 are used as rewrites. The remaining relation
// holds in the concrete representation u e_k = e_{2k}, v e_k = e_{2k+1}.

#include "framekit/exact_matrix.hpp"
#include "framekit/linops.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace framekit {

// One char per letter: 'u', 'v', 'U' = u*, 'V' = v*. Opaque symbolic letters
// (used to check identities for arbitrary b) are chars 1..31, their adjoints
// the same code plus 32.
using Word = std::string;

inline constexpr char kLetterU = 'u';
inline constexpr char kLetterV = 'v';
inline constexpr char kLetterUStar = 'U';
inline constexpr char kLetterVStar = 'V';

char symbolic_letter(int k);
Word adjoint_word(const Word& w);
// Concatenation reduced at the junction; empty when a u*v or v*u collision kills it.
std::optional<Word> reduce_product(const Word& left, const Word& right);
// Readable form, e.g. "u v V" for u v v*; symbolic letters print as b<k>.
std::string word_label(const Word& w);

inline double magnitude(const Complex& c) { return std::abs(c); }
inline double magnitude(const Rational& r) { return static_cast<double>(abs(r)); }

template <class S>
class Element {
public:
    using Scalar = S;
    using Terms = std::map<Word, S>;

    Element() = default;
    explicit Element(S scalar) {
        if (scalar != S(0)) terms_.emplace(Word{}, scalar);
    }
    static Element one() { return Element(S(1)); }
    static Element letter(char c) {
        Element e;
        e.terms_.emplace(Word(1, c), S(1));
        return e;
    }
    static Element u() { return letter(kLetterU); }
    static Element v() { return letter(kLetterV); }
    static Element word(const Word& w, S coefficient = S(1)) {
        Element e;
        if (coefficient != S(0)) e.terms_.emplace(w, coefficient);
        return e;
    }

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    S coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? S(0) : it->second;
    }
    std::size_t max_length() const;

    // Sum of coefficient magnitudes. Every normal-form word is a partial
    // isometry, so this bounds the norm.
    double coefficient_sum() const;
    double max_coefficient() const;

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element& operator*=(const S& s);
    Element adjoint() const;

    // Drops terms with magnitude below `threshold`; returns the dropped mass.
    double prune(double threshold);
    // Keeps the `budget` largest terms; returns the dropped mass.
    double truncate(std::size_t budget);

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator-(Element a) { return a *= S(-1); }
    friend Element operator*(Element a, const S& s) { return a *= s; }
    friend Element operator*(const S& s, Element a) { return a *= s; }
    friend Element operator*(const Element& a, const Element& b) { return multiply(a, b); }
    friend bool operator==(const Element& a, const Element& b) { return a.terms_ == b.terms_; }

    // Product skipping term pairs whose coefficient product is below
    // `skip_below`; their mass is added to *dropped when given.
    static Element multiply(const Element& a, const Element& b, double skip_below = 0.0, double* dropped = nullptr);

private:
    void add_term(const Word& w, const S& c);
    Terms terms_;
};

template <class S>
Element<S> commutator(const Element<S>& a, const Element<S>& b) {
    return a * b - b * a;
}

using CuntzElement = Element<Complex>;
using ExactElement = Element<Rational>;

// n x n grid of elements.
template <class S>
class CuntzMatrix {
public:
    CuntzMatrix() = default;
    explicit CuntzMatrix(std::size_t n) : n_(n), entries_(n * n) {}
    static CuntzMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    Element<S>& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const Element<S>& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    CuntzMatrix& operator+=(const CuntzMatrix& o);
    CuntzMatrix& operator-=(const CuntzMatrix& o);
    friend CuntzMatrix operator+(CuntzMatrix a, const CuntzMatrix& b) { return a += b; }
    friend CuntzMatrix operator-(CuntzMatrix a, const CuntzMatrix& b) { return a -= b; }
    friend CuntzMatrix operator*(const CuntzMatrix& a, const CuntzMatrix& b) { return a.times(b); }

    // Matrix of entry coefficient sums; its spectral norm bounds the norm.
    Eigen::MatrixXd entry_bounds() const;
    double norm_upper() const;

private:
    CuntzMatrix times(const CuntzMatrix& o) const;
    std::size_t n_ = 0;
    std::vector<Element<S>> entries_;
};

template <class S>
CuntzMatrix<S> commutator(const CuntzMatrix<S>& a, const CuntzMatrix<S>& b) {
    return a * b - b * a;
}

// Finitely supported vectors of l2(Z>=0).
using Sequence = std::map<std::uint64_t, Complex>;

Sequence basis_vector(std::uint64_t k);
Sequence concrete_apply(const CuntzElement& e, const Sequence& x);
// Compares images of e_0 .. e_{count-1}.
bool concrete_equal(const CuntzElement& a, const CuntzElement& b, std::uint64_t count = 64, double tol = 1e-12);

// hi: coefficient sum. lo: norm of the restriction to e_k, k < 2^depth.
NormInterval norm_bounds(const CuntzElement& e, unsigned depth);

CuntzMatrix<Complex> matrix_iso(const CuntzElement& x);
CuntzElement matrix_iso_inverse(const CuntzMatrix<Complex>& m);

// The commutator system for given n. Vectors indexed 2..n are stored at
// positions 0..n-2; vectors indexed 1..n at 0..n-1.
using ElementVector = std::vector<CuntzElement>;

double commutator_delta(unsigned n);
ElementVector source_vector(unsigned n);                       // a = (0, ..., 0, n)
ElementVector t_map(const ElementVector& b);                   // ([v,b_i] + [u,b_{i-1}])_{i=2..n}
ElementVector l_map(const ElementVector& x);                   // (-x_i v*/2 - x_{i+1} u*/2)_{i=1..n}
ElementVector e_map(const ElementVector& x);
ElementVector f_map(const ElementVector& b);                   // (-i b_{i+1})_{i=2..n}
ElementVector g_map(const ElementVector& b, const ElementVector& c, double skip_below = 0.0, double* dropped = nullptr);
double vector_hi(const ElementVector& x);                      // sup of coefficient sums

// Smallest K with rho^K < tol (1 - rho), rho = 1 - 1/(8 n^2).
unsigned neumann_terms_required(unsigned n, double tol);

struct SolveOptions {
    unsigned max_iters = 50;
    double tol = 1e-10;
    std::size_t word_budget = 512;  // per Neumann term and per iterate
    double prune = 1e-14;
};

struct SolveReport {
    unsigned n = 0;
    double delta = 0.0;
    ElementVector b;
    bool converged = false;          // iteration settled and residual below tol
    bool iteration_settled = false;
    bool neumann_truncated = false;
    unsigned iterations = 0;
    unsigned neumann_terms = 0;
    unsigned neumann_terms_required = 0;
    double contraction = 0.0;        // 1 - 1/(8 n^2)
    double step_hi = 0.0;
    double residual_hi = 0.0;
    double dropped_mass = 0.0;
    double b_hi = 0.0;
    double initial_hi = 0.0;         // hi of R(a)
    std::string diagnostics;
};

// Fixed-point iteration b <- R(a + delta F(b) + delta G(b, b)) with
// R = L (1 - E)^{-1}, the inverse realized by a truncated Neumann series.
SolveReport solve_b(unsigned n, const SolveOptions& options = {});

template <class S>
CuntzMatrix<S> lemma_d(const std::vector<Element<S>>& b, const S& delta);
template <class S>
CuntzMatrix<S> lemma_x(const std::vector<Element<S>>& b, const S& delta);
// (1/mu) S D S^{-1} or mu S X S^{-1} with S = diag(mu^{n-1}, ..., 1).
template <class S>
CuntzMatrix<S> rescale(const CuntzMatrix<S>& m, const S& mu, const S& outer);

// [D, X] - I vanishes off the last column and matches the lemma's last
// column, coefficient-exactly, for opaque symbolic b.
bool symbolic_structure_check(unsigned n);

struct CommutatorBuild {
    unsigned n = 0;
    double mu = 0.5;
    double delta = 0.0;
    CuntzMatrix<Complex> d, x, d_mu, x_mu;
    ElementVector last_column;  // last column of [D_mu, X_mu] - I
    double off_column_max = 0.0;  // numeric coefficient leak off the last column
    bool structure_exact = false;
    double error_bound = 0.0;
    double d_hi = 0.0, x_hi = 0.0;
    double d_formula = 0.0, x_formula = 0.0;  // closed-form corollary bounds
    bool solution_converged = false;
};

// Throws NotConverged when the solve did not converge and `require_converged` is set.
CommutatorBuild build_dx(const SolveReport& solved, double mu = 0.5, bool require_converged = true);

struct VerifyRow {
    unsigned n = 0;
    bool converged = false;
    double residual_hi = 0.0;
    double b_hi = 0.0;
    double b_limit = 0.0;  // 16 sqrt(2) n^3
    double d_hi = 0.0, x_hi = 0.0;
    double error_bound = 0.0;
    bool structure_exact = false;
};

struct VerifyRatio {
    unsigned n1 = 0, n2 = 0;
    double measured = 0.0;   // error bound ratio
    double predicted = 0.0;  // (n2/n1)^3 2^{-(n2 - n1)}
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    std::vector<VerifyRatio> ratios;
    double d_growth = 0.0;  // max d_hi / n^5
    double x_max = 0.0;
};

VerifyReport verify_bounds(const std::vector<unsigned>& ns, double mu = 0.5, const SolveOptions& options = {});

// ||[D, X] - I||_2 for scalar matrices; at least 1 by the trace argument.
double finite_obstruction(const Matrix& d, const Matrix& x);

}  // namespace framekit
