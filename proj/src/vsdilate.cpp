#include "framekit/vsdilate.hpp"

#include <sstream>

namespace framekit {

namespace {

// Decimal digits only; boost would read a leading zero as octal.
boost::multiprecision::cpp_int decimal_integer(const std::string& text) {
    std::string digits = text;
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        neg = digits[0] == '-';
        digits.erase(0, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw InvalidInput("bad integer '" + text + "'");
    boost::multiprecision::cpp_int value = 0;
    for (char ch : digits) value = value * 10 + (ch - '0');
    return neg ? boost::multiprecision::cpp_int(-value) : value;
}

template <class S>
using M = ExactMatrix<S>;

template <class S>
void require_square(const M<S>& t, const char* what) {
    if (!t.square() || t.rows() == 0) throw ShapeMismatch(std::string(what) + " must be a nonempty square matrix");
}

template <class S>
bool equal(const M<S>& a, const M<S>& b) {
    return vanishes<S>(a - b, std::max(a.max_abs(), b.max_abs()));
}

// Embedding of V as block `at` of a space with `blocks` blocks.
template <class S>
M<S> block_embedding(std::size_t d, std::size_t blocks, std::size_t at) {
    M<S> e(blocks * d, d);
    e.set_block(at * d, 0, M<S>::identity(d));
    return e;
}

template <class S>
M<S> block_projection(std::size_t d, std::size_t blocks, std::size_t at) {
    M<S> p(blocks * d, blocks * d);
    p.set_block(at * d, at * d, M<S>::identity(d));
    return p;
}

template <class S>
PowerCheck<S> power_check(const DilationQuadruple<S>& q, const M<S>& t, unsigned k, std::size_t at = 0) {
    const std::size_t d = t.rows();
    M<S> moved = q.embedding;
    for (unsigned i = 0; i < k; ++i) moved = q.dilation * moved;
    const M<S> image = q.projection * moved;
    PowerCheck<S> row;
    row.power = k;
    row.compressed = image.block(at * d, 0, d, d);
    row.target = power(t, k);
    row.holds = equal(image, q.embedding * row.target);
    return row;
}

template <class S>
bool commute(const M<S>& a, const M<S>& b) {
    return equal(a * b, b * a);
}

}  // namespace

template <class S>
DilationQuadruple<S> halmos(const M<S>& t) {
    require_square(t, "T");
    const std::size_t d = t.rows();
    const M<S> id = M<S>::identity(d);
    DilationQuadruple<S> q;
    q.dilation = M<S>::from_blocks({{t, id}, {id, std::nullopt}}, d);
    q.inverse = M<S>::from_blocks({{std::nullopt, id}, {id, -t}}, d);
    q.embedding = block_embedding<S>(d, 2, 0);
    q.projection = block_projection<S>(d, 2, 0);
    q.horizon = 1;
    return q;
}

template <class S>
DilationQuadruple<S> schur_halmos(const M<S>& t, const M<S>& b, const M<S>& c, const M<S>& d, int schur_case) {
    require_square(t, "T");
    const std::size_t n = t.rows();
    for (const M<S>* x : {&b, &c, &d})
        if (x->rows() != n || x->cols() != n) throw ShapeMismatch("B, C, D must match T");
    M<S> a11, a12, a21, a22;
    switch (schur_case) {
    case 1: {
        const M<S> ti = exact_inverse(t, "T");
        const M<S> si = exact_inverse(M<S>(d - c * ti * b), "D - C T^-1 B");
        a11 = ti + ti * b * si * c * ti;
        a12 = -(ti * b * si);
        a21 = -(si * c * ti);
        a22 = si;
        break;
    }
    case 2: {
        const M<S> di = exact_inverse(d, "D");
        const M<S> si = exact_inverse(M<S>(t - b * di * c), "T - B D^-1 C");
        a11 = si;
        a12 = -(si * b * di);
        a21 = -(di * c * si);
        a22 = di + di * c * si * b * di;
        break;
    }
    case 3: {
        const M<S> bi = exact_inverse(b, "B");
        const M<S> si = exact_inverse(M<S>(c - d * bi * t), "C - D B^-1 T");
        a11 = -(si * d * bi);
        a12 = si;
        a21 = bi + bi * t * si * d * bi;
        a22 = -(bi * t * si);
        break;
    }
    case 4: {
        const M<S> ci = exact_inverse(c, "C");
        const M<S> si = exact_inverse(M<S>(b - t * ci * d), "B - T C^-1 D");
        a11 = -(ci * d * si);
        a12 = ci + ci * d * si * t * ci;
        a21 = si;
        a22 = -(si * t * ci);
        break;
    }
    default:
        throw InvalidParameter("Schur case must be 1, 2, 3 or 4");
    }
    DilationQuadruple<S> q;
    q.dilation = M<S>::from_blocks({{t, b}, {c, d}}, n);
    q.inverse = M<S>::from_blocks({{a11, a12}, {a21, a22}}, n);
    q.embedding = block_embedding<S>(n, 2, 0);
    q.projection = block_projection<S>(n, 2, 0);
    q.horizon = 1;
    return q;
}

template <class S>
NDilation<S> n_dilation(const M<S>& t, unsigned n) {
    require_square(t, "T");
    if (n < 1) throw InvalidParameter("N must be at least 1");
    const std::size_t d = t.rows(), blocks = n + 1;
    const M<S> id = M<S>::identity(d);
    NDilation<S> out;
    auto& q = out.quad;
    q.dilation = M<S>(blocks * d, blocks * d);
    q.dilation.set_block(0, 0, t);
    q.dilation.set_block(0, n * d, id);
    for (std::size_t k = 1; k < blocks; ++k) q.dilation.set_block(k * d, (k - 1) * d, id);
    M<S> inv(blocks * d, blocks * d);
    for (std::size_t k = 0; k + 1 < blocks; ++k) inv.set_block(k * d, (k + 1) * d, id);
    inv.set_block(n * d, 0, id);
    inv.set_block(n * d, d, -t);
    q.inverse = inv;
    q.embedding = block_embedding<S>(d, blocks, 0);
    q.projection = block_projection<S>(d, blocks, 0);
    q.horizon = n;
    for (unsigned k = 1; k <= n + 1; ++k) out.table.push_back(power_check(q, t, k));
    return out;
}

template <class S>
BandedWindow<S> banded_sznagy(const M<S>& t, int window) {
    require_square(t, "T");
    if (window < 2) throw InvalidParameter("window must be at least 2");
    const std::size_t d = t.rows(), blocks = 2 * static_cast<std::size_t>(window) + 1;
    const auto pos = [&](int n) { return static_cast<std::size_t>(n + window) * d; };
    const M<S> id = M<S>::identity(d);
    BandedWindow<S> out;
    out.window = window;
    auto& q = out.quad;
    q.dilation = M<S>(blocks * d, blocks * d);
    q.dilation.set_block(pos(0), pos(0), t);
    for (int n = -window; n < window; ++n) q.dilation.set_block(pos(n), pos(n + 1), id);
    out.inverse_window = M<S>(blocks * d, blocks * d);
    for (int n = -window + 1; n <= window; ++n) out.inverse_window.set_block(pos(n), pos(n - 1), id);
    out.inverse_window.set_block(pos(1), pos(-1), -t);
    q.embedding = block_embedding<S>(d, blocks, static_cast<std::size_t>(window));
    q.projection = block_projection<S>(d, blocks, static_cast<std::size_t>(window));
    q.horizon = static_cast<unsigned>(window - 1);
    for (unsigned n = 1; n <= q.horizon; ++n) out.table.push_back(power_check(q, t, n, static_cast<std::size_t>(window)));

    // Edge rows and columns of the window are cut; compare the interior.
    const std::size_t lo = pos(-window + 1), len = pos(window) - lo;
    const M<S> uv = q.dilation * out.inverse_window, vu = out.inverse_window * q.dilation;
    const M<S> id_in = M<S>::identity(len);
    out.inverse_interior_exact = equal(uv.block(lo, lo, len, len), id_in) && equal(vu.block(lo, lo, len, len), id_in);
    return out;
}

template <class S>
M<S> banded_power(const BandedWindow<S>& w, unsigned n) {
    if (n < 1 || n > w.quad.horizon) throw InvalidParameter("power lies outside the verified window horizon");
    return w.table[n - 1].compressed;
}

template <class S>
StandardDilation<S> standard_dilation(const M<S>& t, unsigned horizon) {
    require_square(t, "T");
    if (horizon < 1) throw InvalidParameter("horizon must be at least 1");
    const std::size_t d = t.rows(), blocks = horizon + 1;
    const M<S> id = M<S>::identity(d);
    StandardDilation<S> out;
    auto& q = out.quad;
    q.dilation = M<S>(blocks * d, blocks * d);
    for (std::size_t k = 0; k + 1 < blocks; ++k) q.dilation.set_block((k + 1) * d, k * d, id);
    q.projection = M<S>(blocks * d, blocks * d);
    M<S> tn = id;
    for (std::size_t k = 0; k < blocks; ++k) {
        q.projection.set_block(0, k * d, tn);
        tn = tn * t;
    }
    q.embedding = block_embedding<S>(d, blocks, 0);
    q.horizon = horizon;
    for (unsigned n = 0; n <= horizon; ++n) out.table.push_back(power_check(q, t, n));

    out.idempotent = equal(M<S>(q.projection * q.projection), q.projection);
    const M<S> tail = q.projection.block(d, 0, (blocks - 1) * d, blocks * d);
    out.range_matches = tail.is_zero() && equal(M<S>(q.projection * q.embedding), q.embedding);
    M<S> span(blocks * d, blocks * d);
    M<S> moved = q.embedding;
    for (std::size_t k = 0; k < blocks; ++k) {
        span.set_block(0, k * d, moved);
        moved = q.dilation * moved;
    }
    out.minimal = try_inverse(span).has_value();
    return out;
}

template <class S>
AndoDilation<S> ando_like(const M<S>& t, const M<S>& s, unsigned horizon) {
    require_square(t, "T");
    if (s.rows() != t.rows() || s.cols() != t.cols()) throw ShapeMismatch("T and S differ in shape");
    if (!commute(t, s)) throw InvalidInput("T and S do not commute");
    const std::size_t d = t.rows(), side = horizon + 1, blocks = side * side;
    const auto at = [&](std::size_t n, std::size_t m) { return (n * side + m) * d; };
    const M<S> id = M<S>::identity(d);
    AndoDilation<S> out;
    out.horizon = horizon;
    out.row_shift = M<S>(blocks * d, blocks * d);
    out.column_shift = M<S>(blocks * d, blocks * d);
    out.projection = M<S>(blocks * d, blocks * d);
    for (std::size_t n = 0; n < side; ++n)
        for (std::size_t m = 0; m < side; ++m) {
            if (n + 1 < side) out.row_shift.set_block(at(n + 1, m), at(n, m), id);
            if (m + 1 < side) out.column_shift.set_block(at(n, m + 1), at(n, m), id);
            out.projection.set_block(0, at(n, m), M<S>(power(t, n) * power(s, m)));
        }
    out.embedding = block_embedding<S>(d, blocks, 0);

    out.grid_exact = true;
    for (std::size_t m = 0; m <= horizon; ++m) {
        M<S> moved = out.embedding;
        for (std::size_t k = 0; k < m; ++k) moved = out.column_shift * moved;
        M<S> tn = id;
        for (std::size_t n = 0; n + m <= horizon; ++n) {
            const M<S> lhs = out.embedding * M<S>(tn * power(s, m));
            out.grid_exact = out.grid_exact && equal(M<S>(out.projection * moved), lhs);
            ++out.grid_points;
            moved = out.row_shift * moved;
            tn = tn * t;
        }
    }
    out.shifts_commute = commute(out.row_shift, out.column_shift);
    return out;
}

template <class S>
IntertwiningLift<S> intertwine_lift(const M<S>& t1, const M<S>& t2, const M<S>& s, unsigned horizon) {
    require_square(t1, "T1");
    require_square(t2, "T2");
    if (s.rows() != t1.rows() || s.cols() != t2.rows()) throw ShapeMismatch("S must map the second space into the first");
    if (!equal(M<S>(t1 * s), M<S>(s * t2))) throw InvalidInput("T1 S != S T2");
    const auto first = standard_dilation(t1, horizon).quad;
    const auto second = standard_dilation(t2, horizon).quad;
    const std::size_t d1 = t1.rows(), d2 = t2.rows(), blocks = horizon + 1;
    IntertwiningLift<S> out;
    out.lift = M<S>(blocks * d1, blocks * d2);
    for (std::size_t k = 0; k < blocks; ++k) out.lift.set_block(k * d1, k * d2, s);
    const M<S> shift = first.dilation * out.lift - out.lift * second.dilation;
    const M<S> proj = out.lift * second.projection - first.projection * out.lift;
    const M<S> emb = out.lift * second.embedding - first.embedding * s;
    out.shift_residual = shift.max_abs();
    out.projection_residual = proj.max_abs();
    out.embedding_residual = emb.max_abs();
    const double scale = std::max({1.0, t1.max_abs(), t2.max_abs(), s.max_abs()});
    out.exact = vanishes<S>(shift, scale) && vanishes<S>(proj, scale) && vanishes<S>(emb, scale);
    return out;
}

template <class S>
SimilarityWitness<S> non_similarity_witness(const M<S>& t) {
    require_square(t, "T");
    const std::size_t d = t.rows();
    const M<S> id = M<S>::identity(d);
    const M<S> skew = M<S>::from_blocks({{t, M<S>(t - id)}, {M<S>(t + id), t}}, d);
    const M<S> plain = M<S>::from_blocks({{t, id}, {id, std::nullopt}}, d);
    SimilarityWitness<S> out;
    out.trace_skew = skew.trace();
    out.trace_halmos = plain.trace();
    out.skew_invertible = try_inverse(skew).has_value();
    M<S> single(1, 1);
    single(0, 0) = t.trace();
    out.inconclusive = vanishes<S>(single, t.max_abs() * static_cast<double>(d));
    out.distinct = !out.inconclusive && out.trace_skew != out.trace_halmos;
    return out;
}

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw InvalidInput("empty rational");
    try {
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
            const Rational num(decimal_integer(s.substr(0, slash))), den(decimal_integer(s.substr(slash + 1)));
            if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
            return num / den;
        }
        const auto dot = s.find_first_of(".eE");
        if (dot == std::string::npos) return Rational(decimal_integer(s));
        // decimal: split mantissa and exponent exactly
        std::string mant = s, expo = "0";
        const auto e = s.find_first_of("eE");
        if (e != std::string::npos) {
            mant = s.substr(0, e);
            expo = s.substr(e + 1);
        }
        bool neg = false;
        if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
            neg = mant[0] == '-';
            mant = mant.substr(1);
        }
        long scale = std::stol(expo);
        const auto point = mant.find('.');
        if (point != std::string::npos) {
            scale -= static_cast<long>(mant.size() - point - 1);
            mant.erase(point, 1);
        }
        if (mant.empty() || mant.find_first_not_of("0123456789") != std::string::npos) throw InvalidInput("bad number '" + text + "'");
        Rational value{decimal_integer(mant)};
        const Rational ten(10);
        for (long k = 0; k < std::labs(scale); ++k) value = scale > 0 ? Rational(value * ten) : Rational(value / ten);
        return neg ? Rational(-value) : value;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidInput("bad number '" + text + "'");
    }
}

std::string to_string(const Rational& value) {
    std::ostringstream os;
    os << value;
    return os.str();
}

#define FRAMEKIT_VSDILATE_INSTANTIATE(S)                                                                               \
    template DilationQuadruple<S> halmos(const ExactMatrix<S>&);                                                       \
    template DilationQuadruple<S> schur_halmos(const ExactMatrix<S>&, const ExactMatrix<S>&, const ExactMatrix<S>&,    \
                                               const ExactMatrix<S>&, int);                                            \
    template NDilation<S> n_dilation(const ExactMatrix<S>&, unsigned);                                                 \
    template BandedWindow<S> banded_sznagy(const ExactMatrix<S>&, int);                                                \
    template ExactMatrix<S> banded_power(const BandedWindow<S>&, unsigned);                                            \
    template StandardDilation<S> standard_dilation(const ExactMatrix<S>&, unsigned);                                   \
    template AndoDilation<S> ando_like(const ExactMatrix<S>&, const ExactMatrix<S>&, unsigned);                        \
    template IntertwiningLift<S> intertwine_lift(const ExactMatrix<S>&, const ExactMatrix<S>&, const ExactMatrix<S>&,  \
                                                 unsigned);                                                            \
    template SimilarityWitness<S> non_similarity_witness(const ExactMatrix<S>&);

FRAMEKIT_VSDILATE_INSTANTIATE(Rational)
FRAMEKIT_VSDILATE_INSTANTIATE(double)

}  // namespace framekit
