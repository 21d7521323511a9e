#include "framekit/cuntz.hpp"

#include "framekit/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace framekit {

namespace {

bool is_symbolic(char c) { return c >= 1 && c <= 63; }

char adjoint_letter(char c) {
    switch (c) {
    case kLetterU: return kLetterUStar;
    case kLetterV: return kLetterVStar;
    case kLetterUStar: return kLetterU;
    case kLetterVStar: return kLetterV;
    default:
        if (c >= 1 && c <= 31) return static_cast<char>(c + 32);
        if (c >= 33 && c <= 63) return static_cast<char>(c - 32);
        throw InvalidInput("unknown letter code " + std::to_string(static_cast<int>(c)));
    }
}

template <class S>
S int_power(const S& base, int exponent) {
    S out(1);
    const S step = exponent >= 0 ? base : S(1) / base;
    for (int k = 0; k < std::abs(exponent); ++k) out *= step;
    return out;
}

std::size_t total_terms(const ElementVector& x) {
    std::size_t t = 0;
    for (const auto& e : x) t += e.size();
    return t;
}

double prune_vector(ElementVector& x, double threshold) {
    double dropped = 0.0;
    for (auto& e : x) dropped += e.prune(threshold);
    return dropped;
}

// Keeps the `budget` largest terms across all components.
double truncate_vector(ElementVector& x, std::size_t budget) {
    if (total_terms(x) <= budget) return 0.0;
    std::vector<std::tuple<double, std::size_t, Word>> all;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (const auto& [w, c] : x[i].terms()) all.emplace_back(magnitude(c), i, w);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });
    ElementVector kept(x.size());
    double dropped = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        const auto& [mag, i, w] = all[k];
        if (k < budget)
            kept[i] += CuntzElement::word(w, x[i].coefficient(w));
        else
            dropped += mag;
    }
    x = std::move(kept);
    return dropped;
}

ElementVector add(ElementVector a, const ElementVector& b, const Complex& scale = 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
    return a;
}

const CuntzElement& u_elem() {
    static const CuntzElement e = CuntzElement::u();
    return e;
}
const CuntzElement& v_elem() {
    static const CuntzElement e = CuntzElement::v();
    return e;
}
const CuntzElement& u_star() {
    static const CuntzElement e = CuntzElement::letter(kLetterUStar);
    return e;
}
const CuntzElement& v_star() {
    static const CuntzElement e = CuntzElement::letter(kLetterVStar);
    return e;
}

}  // namespace

char symbolic_letter(int k) {
    if (k < 1 || k > 31) throw InvalidParameter("symbolic letters are numbered 1..31");
    return static_cast<char>(k);
}

Word adjoint_word(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (char& c : out) c = adjoint_letter(c);
    return out;
}

std::optional<Word> reduce_product(const Word& left, const Word& right) {
    Word out = left;
    std::size_t j = 0;
    while (!out.empty() && j < right.size()) {
        const char c = out.back(), d = right[j];
        const bool starred = c == kLetterUStar || c == kLetterVStar;
        const bool plain = d == kLetterU || d == kLetterV;
        if (!starred || !plain) break;
        if ((c == kLetterUStar) != (d == kLetterU)) return std::nullopt;
        out.pop_back();
        ++j;
    }
    out.append(right, j, std::string::npos);
    return out;
}

std::string word_label(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (char c : w) {
        if (!out.empty()) out += ' ';
        switch (c) {
        case kLetterU: out += "u"; break;
        case kLetterV: out += "v"; break;
        case kLetterUStar: out += "u*"; break;
        case kLetterVStar: out += "v*"; break;
        default:
            if (!is_symbolic(c)) throw InvalidInput("unknown letter code");
            out += c <= 31 ? "b" + std::to_string(static_cast<int>(c)) : "b" + std::to_string(c - 32) + "*";
        }
    }
    return out;
}

template <class S>
std::size_t Element<S>::max_length() const {
    std::size_t m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, w.size());
    return m;
}

template <class S>
double Element<S>::coefficient_sum() const {
    double s = 0.0;
    for (const auto& [w, c] : terms_) s += magnitude(c);
    return s;
}

template <class S>
double Element<S>::max_coefficient() const {
    double s = 0.0;
    for (const auto& [w, c] : terms_) s = std::max(s, magnitude(c));
    return s;
}

template <class S>
void Element<S>::add_term(const Word& w, const S& c) {
    if (c == S(0)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (inserted) return;
    it->second += c;
    if (it->second == S(0)) terms_.erase(it);
}

template <class S>
Element<S>& Element<S>::operator+=(const Element& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

template <class S>
Element<S>& Element<S>::operator-=(const Element& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, S(-c));
    return *this;
}

template <class S>
Element<S>& Element<S>::operator*=(const S& s) {
    if (s == S(0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
}

template <class S>
Element<S> Element<S>::adjoint() const {
    Element out;
    for (const auto& [w, c] : terms_) {
        if constexpr (std::is_same_v<S, Complex>)
            out.add_term(adjoint_word(w), std::conj(c));
        else
            out.add_term(adjoint_word(w), c);
    }
    return out;
}

template <class S>
double Element<S>::prune(double threshold) {
    double dropped = 0.0;
    for (auto it = terms_.begin(); it != terms_.end();) {
        const double m = magnitude(it->second);
        if (m < threshold) {
            dropped += m;
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
    return dropped;
}

template <class S>
double Element<S>::truncate(std::size_t budget) {
    if (terms_.size() <= budget) return 0.0;
    std::vector<std::pair<double, Word>> all;
    for (const auto& [w, c] : terms_) all.emplace_back(magnitude(c), w);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    double dropped = 0.0;
    for (std::size_t k = budget; k < all.size(); ++k) {
        dropped += all[k].first;
        terms_.erase(all[k].second);
    }
    return dropped;
}

template <class S>
Element<S> Element<S>::multiply(const Element& a, const Element& b, double skip_below, double* dropped) {
    Element out;
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_) {
            const S c = ca * cb;
            if (skip_below > 0.0 && magnitude(c) < skip_below) {
                if (dropped) *dropped += magnitude(c);
                continue;
            }
            if (auto w = reduce_product(wa, wb)) out.add_term(*w, c);
        }
    return out;
}

template <class S>
CuntzMatrix<S> CuntzMatrix<S>::identity(std::size_t n) {
    CuntzMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Element<S>::one();
    return m;
}

template <class S>
CuntzMatrix<S>& CuntzMatrix<S>::operator+=(const CuntzMatrix& o) {
    if (o.n_ != n_) throw ShapeMismatch("matrix sizes differ");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
}

template <class S>
CuntzMatrix<S>& CuntzMatrix<S>::operator-=(const CuntzMatrix& o) {
    if (o.n_ != n_) throw ShapeMismatch("matrix sizes differ");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
}

template <class S>
CuntzMatrix<S> CuntzMatrix<S>::times(const CuntzMatrix& o) const {
    if (o.n_ != n_) throw ShapeMismatch("matrix sizes differ");
    CuntzMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const auto& left = (*this)(i, k);
            if (left.is_zero()) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (!o(k, j).is_zero()) out(i, j) += left * o(k, j);
        }
    return out;
}

template <class S>
Eigen::MatrixXd CuntzMatrix<S>::entry_bounds() const {
    Eigen::MatrixXd m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).coefficient_sum();
    return m;
}

template <class S>
double CuntzMatrix<S>::norm_upper() const {
    if (n_ == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(entry_bounds());
    return svd.singularValues()(0);
}

template class Element<Complex>;
template class Element<Rational>;
template class CuntzMatrix<Complex>;
template class CuntzMatrix<Rational>;

Sequence basis_vector(std::uint64_t k) { return Sequence{{k, Complex(1.0)}}; }

Sequence concrete_apply(const CuntzElement& e, const Sequence& x) {
    constexpr std::uint64_t kLimit = std::numeric_limits<std::uint64_t>::max() / 2 - 1;
    Sequence out;
    for (const auto& [w, c] : e.terms())
        for (const auto& [start, value] : x) {
            std::uint64_t k = start;
            bool alive = true;
            for (auto it = w.rbegin(); it != w.rend() && alive; ++it) {
                switch (*it) {
                case kLetterU:
                case kLetterV:
                    if (k > kLimit) throw InvalidInput("basis index overflow in concrete representation");
                    k = 2 * k + (*it == kLetterV ? 1 : 0);
                    break;
                case kLetterUStar:
                    alive = k % 2 == 0;
                    k /= 2;
                    break;
                case kLetterVStar:
                    alive = k % 2 == 1;
                    k /= 2;
                    break;
                default:
                    throw InvalidInput("symbolic letters have no concrete action");
                }
            }
            if (alive) out[k] += c * value;
        }
    return out;
}

bool concrete_equal(const CuntzElement& a, const CuntzElement& b, std::uint64_t count, double tol) {
    for (std::uint64_t k = 0; k < count; ++k) {
        const Sequence ya = concrete_apply(a, basis_vector(k)), yb = concrete_apply(b, basis_vector(k));
        Sequence diff = ya;
        for (const auto& [i, c] : yb) diff[i] -= c;
        for (const auto& [i, c] : diff)
            if (std::abs(c) > tol) return false;
    }
    return true;
}

NormInterval norm_bounds(const CuntzElement& e, unsigned depth) {
    if (depth < e.max_length()) throw InvalidParameter("depth must be at least the longest word length");
    if (depth > 12) throw InvalidParameter("depth above 12 is not supported");
    const std::uint64_t cols = std::uint64_t{1} << depth;
    std::map<std::uint64_t, Eigen::Index> row_of;
    std::vector<Sequence> images;
    images.reserve(cols);
    for (std::uint64_t k = 0; k < cols; ++k) {
        images.push_back(concrete_apply(e, basis_vector(k)));
        for (const auto& [i, c] : images.back()) row_of.try_emplace(i, static_cast<Eigen::Index>(row_of.size()));
    }
    double lo = 0.0;
    if (!row_of.empty()) {
        Matrix restricted = Matrix::Zero(static_cast<Eigen::Index>(row_of.size()), static_cast<Eigen::Index>(cols));
        for (std::uint64_t k = 0; k < cols; ++k)
            for (const auto& [i, c] : images[k]) restricted(row_of[i], static_cast<Eigen::Index>(k)) = c;
        lo = spectral_norm(restricted);
    }
    return NormInterval{lo, std::max(lo, e.coefficient_sum())};
}

CuntzMatrix<Complex> matrix_iso(const CuntzElement& x) {
    CuntzMatrix<Complex> m(2);
    m(0, 0) = u_star() * x * u_elem();
    m(0, 1) = u_star() * x * v_elem();
    m(1, 0) = v_star() * x * u_elem();
    m(1, 1) = v_star() * x * v_elem();
    return m;
}

CuntzElement matrix_iso_inverse(const CuntzMatrix<Complex>& m) {
    if (m.size() != 2) throw ShapeMismatch("the inverse map takes a 2 x 2 matrix");
    return u_elem() * m(0, 0) * u_star() + u_elem() * m(0, 1) * v_star() + v_elem() * m(1, 0) * u_star() +
           v_elem() * m(1, 1) * v_star();
}

double commutator_delta(unsigned n) { return 1.0 / (2000.0 * std::pow(static_cast<double>(n), 5)); }

ElementVector source_vector(unsigned n) {
    if (n < 2) throw InvalidParameter("n must be at least 2");
    ElementVector a(n - 1);
    a.back() = CuntzElement(Complex(static_cast<double>(n)));
    return a;
}

ElementVector t_map(const ElementVector& b) {
    if (b.size() < 2) throw InvalidParameter("n must be at least 2");
    ElementVector out(b.size() - 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = commutator(v_elem(), b[k + 1]) + commutator(u_elem(), b[k]);
    return out;
}

ElementVector l_map(const ElementVector& x) {
    const std::size_t n = x.size() + 1;
    // x_i lives at x[i - 2] for 2 <= i <= n
    const auto at = [&](std::size_t i) -> const CuntzElement* { return i >= 2 && i <= n ? &x[i - 2] : nullptr; };
    ElementVector out(n);
    for (std::size_t i = 1; i <= n; ++i) {
        if (const auto* xi = at(i)) out[i - 1] -= 0.5 * (*xi * v_star());
        if (const auto* xn = at(i + 1)) out[i - 1] -= 0.5 * (*xn * u_star());
    }
    return out;
}

ElementVector e_map(const ElementVector& x) {
    const std::size_t n = x.size() + 1;
    const auto at = [&](std::size_t i) -> const CuntzElement* { return i >= 2 && i <= n ? &x[i - 2] : nullptr; };
    ElementVector out(x.size());
    for (std::size_t i = 2; i <= n; ++i) {
        CuntzElement sum;
        const auto* xi = at(i);
        sum += v_elem() * *xi * v_star();
        sum += u_elem() * *xi * u_star();
        if (const auto* next = at(i + 1)) sum += v_elem() * *next * u_star();
        if (const auto* prev = at(i - 1)) sum += u_elem() * *prev * v_star();
        out[i - 2] = 0.5 * sum;
    }
    return out;
}

ElementVector f_map(const ElementVector& b) {
    const std::size_t n = b.size();
    if (n < 2) throw InvalidParameter("n must be at least 2");
    ElementVector out(n - 1);
    for (std::size_t i = 2; i < n; ++i) out[i - 2] = -static_cast<double>(i) * b[i];
    return out;
}

ElementVector g_map(const ElementVector& b, const ElementVector& c, double skip_below, double* dropped) {
    const std::size_t n = b.size();
    if (n < 2 || c.size() != n) throw InvalidParameter("G needs two vectors of length n >= 2");
    const CuntzElement bracket = commutator(u_elem(), c.back());
    ElementVector out(n - 1);
    for (std::size_t i = 2; i <= n; ++i) out[i - 2] = -CuntzElement::multiply(b[i - 1], bracket, skip_below, dropped);
    return out;
}

double vector_hi(const ElementVector& x) {
    double m = 0.0;
    for (const auto& e : x) m = std::max(m, e.coefficient_sum());
    return m;
}

unsigned neumann_terms_required(unsigned n, double tol) {
    const double gap = 1.0 / (8.0 * n * n);
    return static_cast<unsigned>(std::ceil(std::log(tol * gap) / std::log1p(-gap)));
}

SolveReport solve_b(unsigned n, const SolveOptions& options) {
    if (n < 2) throw InvalidParameter("n must be at least 2");
    if (options.tol <= 0.0 || options.word_budget == 0) throw InvalidParameter("tolerance and word budget must be positive");
    SolveReport report;
    report.n = n;
    report.delta = commutator_delta(n);
    report.contraction = 1.0 - 1.0 / (8.0 * n * n);
    report.neumann_terms_required = neumann_terms_required(n, options.tol);
    const double delta = report.delta;

    // The first call fixes the series length from the word budget; later
    // calls reuse it and cut each term to the budget so R stays one map.
    unsigned depth = 0;
    const auto right_inverse = [&](ElementVector y) {
        report.dropped_mass += truncate_vector(y, options.word_budget);
        ElementVector sum = y, term = std::move(y);
        unsigned k = 1;
        for (; depth == 0 ? k < report.neumann_terms_required : k < depth; ++k) {
            ElementVector next = e_map(term);
            report.dropped_mass += prune_vector(next, options.prune);
            if (depth == 0 && total_terms(next) > options.word_budget) {
                report.neumann_truncated = true;
                break;
            }
            report.dropped_mass += truncate_vector(next, options.word_budget);
            sum = add(std::move(sum), next);
            term = std::move(next);
        }
        if (depth == 0) depth = k;
        report.neumann_terms = depth;
        return l_map(sum);
    };
    const auto rhs = [&](const ElementVector& b, double skip) {
        double dropped = 0.0;
        ElementVector r = add(source_vector(n), f_map(b), delta);
        r = add(std::move(r), g_map(b, b, skip / delta, &dropped), delta);
        report.dropped_mass += delta * dropped;
        return r;
    };

    const ElementVector a = source_vector(n);
    ElementVector b = right_inverse(a);
    report.initial_hi = vector_hi(b);
    for (unsigned it = 1; it <= options.max_iters; ++it) {
        ElementVector next = right_inverse(rhs(b, options.prune));
        report.dropped_mass += prune_vector(next, options.prune);
        ElementVector diff = next;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= b[i];
        report.step_hi = vector_hi(diff);
        b = std::move(next);
        report.iterations = it;
        if (report.step_hi < options.tol) {
            report.iteration_settled = true;
            break;
        }
    }

    ElementVector residual = t_map(b);
    const ElementVector target = rhs(b, 0.0);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= target[i];
    report.residual_hi = vector_hi(residual);
    report.b_hi = vector_hi(b);
    report.b = std::move(b);
    report.converged = report.iteration_settled && report.residual_hi < options.tol;

    std::ostringstream diag;
    diag << "n=" << n << ": fixed-point step " << report.step_hi << " after " << report.iterations
         << " iterations; Neumann series used " << report.neumann_terms << " of " << report.neumann_terms_required
         << " terms (contraction " << report.contraction << ", word budget " << options.word_budget
         << "); residual hi-bound " << report.residual_hi << " against tolerance " << options.tol;
    report.diagnostics = diag.str();
    return report;
}

template <class S>
CuntzMatrix<S> lemma_d(const std::vector<Element<S>>& b, const S& delta) {
    const std::size_t n = b.size();
    if (n < 2) throw InvalidParameter("n must be at least 2");
    const Element<S> u = Element<S>::letter(kLetterU), v = Element<S>::letter(kLetterV);
    const S inv = S(1) / delta;
    CuntzMatrix<S> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) += inv * v;
        if (i + 1 < n) {
            d(i + 1, i) += inv * u;
            d(i, i + 1) += Element<S>(S(static_cast<long>(i + 1)));
        }
        d(i, n - 1) += b[i] * u;
    }
    return d;
}

template <class S>
CuntzMatrix<S> lemma_x(const std::vector<Element<S>>& b, const S& delta) {
    const std::size_t n = b.size();
    if (n < 2) throw InvalidParameter("n must be at least 2");
    CuntzMatrix<S> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) x(i + 1, i) += Element<S>::one();
        x(i, n - 1) += delta * b[i];
    }
    return x;
}

template <class S>
CuntzMatrix<S> rescale(const CuntzMatrix<S>& m, const S& mu, const S& outer) {
    CuntzMatrix<S> out = m;
    const int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) *= outer * int_power(mu, j - i);
    return out;
}

template CuntzMatrix<Complex> lemma_d(const std::vector<Element<Complex>>&, const Complex&);
template CuntzMatrix<Rational> lemma_d(const std::vector<Element<Rational>>&, const Rational&);
template CuntzMatrix<Complex> lemma_x(const std::vector<Element<Complex>>&, const Complex&);
template CuntzMatrix<Rational> lemma_x(const std::vector<Element<Rational>>&, const Rational&);
template CuntzMatrix<Complex> rescale(const CuntzMatrix<Complex>&, const Complex&, const Complex&);
template CuntzMatrix<Rational> rescale(const CuntzMatrix<Rational>&, const Rational&, const Rational&);

bool symbolic_structure_check(unsigned n) {
    if (n < 2 || n > 31) throw InvalidParameter("symbolic check supports 2 <= n <= 31");
    std::vector<ExactElement> b;
    for (unsigned i = 1; i <= n; ++i) b.push_back(ExactElement::letter(symbolic_letter(static_cast<int>(i))));
    const long n5 = static_cast<long>(n) * n * n * n * n;
    const Rational delta(1, 2000 * n5);
    const CuntzMatrix<Rational> diff = commutator(lemma_d(b, delta), lemma_x(b, delta)) - CuntzMatrix<Rational>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (!diff(i, j).is_zero()) return false;
    const ExactElement u = ExactElement::u(), v = ExactElement::v();
    const ExactElement bracket = commutator(u, b[n - 1]);
    for (std::size_t i = 0; i < n; ++i) {
        ExactElement expected = commutator(v, b[i]) + delta * (b[i] * bracket);
        if (i > 0) expected += commutator(u, b[i - 1]);
        if (i + 1 < n) expected += Rational(static_cast<long>(i + 1)) * delta * b[i + 1];
        if (i + 1 == n) expected -= ExactElement(Rational(static_cast<long>(n)));
        if (!(diff(i, n - 1) == expected)) return false;
    }
    return true;
}

CommutatorBuild build_dx(const SolveReport& solved, double mu, bool require_converged) {
    if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
    if (solved.b.size() < 2) throw InvalidParameter("solve report holds no solution");
    if (require_converged && !solved.converged) throw NotConverged(solved.diagnostics);
    const std::size_t n = solved.b.size();
    CommutatorBuild out;
    out.n = static_cast<unsigned>(n);
    out.mu = mu;
    out.delta = solved.delta;
    out.solution_converged = solved.converged;
    out.d = lemma_d(solved.b, Complex(solved.delta));
    out.x = lemma_x(solved.b, Complex(solved.delta));
    out.d_mu = rescale(out.d, Complex(mu), Complex(1.0 / mu));
    out.x_mu = rescale(out.x, Complex(mu), Complex(mu));
    const CuntzMatrix<Complex> diff = commutator(out.d_mu, out.x_mu) - CuntzMatrix<Complex>::identity(n);
    double column = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) out.off_column_max = std::max(out.off_column_max, diff(i, j).max_coefficient());
        out.last_column.push_back(diff(i, n - 1));
        column += std::pow(diff(i, n - 1).coefficient_sum(), 2);
    }
    out.error_bound = std::sqrt(column);
    out.structure_exact = n <= 31 && symbolic_structure_check(out.n);
    out.d_hi = out.d_mu.norm_upper();
    out.x_hi = out.x_mu.norm_upper();
    double d_tail = 0.0, x_tail = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int i = static_cast<int>(k) + 1;
        const double hi = solved.b[k].coefficient_sum();
        d_tail += std::pow(mu, static_cast<int>(n) - i - 1) * hi;
        x_tail += std::pow(mu, static_cast<int>(n) - i + 1) * hi;
    }
    // The last column of D carries b_i u without a delta factor, so neither does its term here.
    out.d_formula = 1.0 / (mu * mu * solved.delta) + 1.0 / (mu * solved.delta) + static_cast<double>(n - 1) + d_tail;
    out.x_formula = 1.0 + solved.delta * x_tail;
    return out;
}

VerifyReport verify_bounds(const std::vector<unsigned>& ns, double mu, const SolveOptions& options) {
    VerifyReport report;
    for (unsigned n : ns) {
        const SolveReport solved = solve_b(n, options);
        const CommutatorBuild built = build_dx(solved, mu, false);
        VerifyRow row;
        row.n = n;
        row.converged = solved.converged;
        row.residual_hi = solved.residual_hi;
        row.b_hi = solved.b_hi;
        row.b_limit = 16.0 * std::sqrt(2.0) * std::pow(static_cast<double>(n), 3);
        row.d_hi = built.d_hi;
        row.x_hi = built.x_hi;
        row.error_bound = built.error_bound;
        row.structure_exact = built.structure_exact;
        report.rows.push_back(row);
        report.d_growth = std::max(report.d_growth, built.d_hi / std::pow(static_cast<double>(n), 5));
        report.x_max = std::max(report.x_max, built.x_hi);
    }
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
        const auto& r1 = report.rows[k - 1];
        const auto& r2 = report.rows[k];
        VerifyRatio ratio;
        ratio.n1 = r1.n;
        ratio.n2 = r2.n;
        ratio.measured = r2.error_bound / r1.error_bound;
        ratio.predicted = std::pow(static_cast<double>(r2.n) / r1.n, 3) * std::pow(2.0, -static_cast<double>(r2.n - r1.n));
        report.ratios.push_back(ratio);
    }
    return report;
}

double finite_obstruction(const Matrix& d, const Matrix& x) {
    if (d.rows() != d.cols() || x.rows() != x.cols() || d.rows() != x.rows()) throw ShapeMismatch("D and X must be square of equal size");
    const Matrix gap = d * x - x * d - Matrix::Identity(d.rows(), d.cols());
    return spectral_norm(gap);
}

}  // namespace framekit
