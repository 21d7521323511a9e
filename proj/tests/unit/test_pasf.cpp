#include "doctest.h"

#include "framekit/errors.hpp"
#include "framekit/hframe.hpp"
#include "framekit/pasf.hpp"
#include "support/generators.hpp"

using namespace framekit;

namespace {

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

TEST_SUITE("pasf") {
    TEST_CASE("check") {
        const PasfCheck simple = check(PAsf(2.0, eye(3), eye(3)));
        CHECK(simple.is_pasf);
        CHECK(simple.lower.lo == doctest::Approx(1.0));
        CHECK(simple.upper.hi == doctest::Approx(1.0));

        const PAsf shift = shift_pair(5, 1.5);
        CHECK(approx_equal(shift.frame_operator(), eye(5)));
        CHECK(check(shift).is_pasf);

        // f_n(x) = x, tau_n = 1/n^2 on K: S is the partial zeta(2) sum.
        const int m = 50;
        Matrix f = Matrix::Ones(m, 1);
        Matrix t(1, m);
        double total = 0.0;
        for (int n = 1; n <= m; ++n) {
            t(0, n - 1) = 1.0 / (n * n);
            total += 1.0 / (n * n);
        }
        const PAsf scalar(2.0, f, t);
        CHECK(std::abs(scalar.frame_operator()(0, 0) - total) < 1e-14);
        CHECK(check(scalar).is_pasf);

        Matrix degenerate = Matrix::Zero(2, 2);
        degenerate(0, 0) = 1.0;
        CHECK_FALSE(check(PAsf(2.0, degenerate, eye(2))).is_pasf);
    }

    TEST_CASE("from shift operators") {
        CHECK(approx_equal(from_shift_operators(eye(3), eye(3), 2.0).frame_operator(), eye(3)));
        const PAsf shift = shift_pair(4, 3.0);
        CHECK(approx_equal(from_shift_operators(shift.analysis(), shift.synthesis(), 3.0).frame_operator(), eye(4)));
        Rng rng(31);
        const Matrix u = gen::complex_matrix(rng, 6, 3);
        const Matrix v = gen::complex_matrix(rng, 3, 6);
        const PAsf pair = from_shift_operators(u, v, 1.5);
        CHECK(check(pair).is_pasf);
        CHECK(approx_equal(pair.frame_operator(), v * u));
        CHECK_THROWS_AS(from_shift_operators(Matrix::Zero(6, 3), v, 2.0), NotInvertible);
    }

    TEST_CASE("canonical dual and dual check") {
        Rng rng(32);
        const PAsf simple(2.0, eye(3), eye(3));
        const PAsf sd = canonical_dual(simple);
        CHECK(approx_equal(sd.analysis(), eye(3)));
        for (int trial = 0; trial < 20; ++trial) {
            const PAsf p = gen::pasf(rng, gen::pick_exponent(rng), 3, 6);
            const PAsf dual = canonical_dual(p);
            CHECK(dual_check(p, dual));
            const PAsf back = canonical_dual(dual);
            CHECK(approx_equal(back.analysis(), p.analysis(), 1e-9));
            CHECK(approx_equal(back.synthesis(), p.synthesis(), 1e-9));
            CHECK_FALSE(dual_check(p, p));
        }
    }

    TEST_CASE("dual from operators") {
        Rng rng(33);
        const PAsf p = gen::pasf(rng, 2.0, 3, 7);
        const PAsf collapsed = dual_from_operators(p, Matrix::Zero(7, 3), Matrix::Zero(3, 7));
        const PAsf canonical = canonical_dual(p);
        CHECK(approx_equal(collapsed.analysis(), canonical.analysis()));
        CHECK(approx_equal(collapsed.synthesis(), canonical.synthesis()));
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix u = 0.2 * gen::complex_matrix(rng, 7, 3);
            const Matrix v = 0.2 * gen::complex_matrix(rng, 3, 7);
            CHECK(dual_check(p, dual_from_operators(p, u, v)));
        }
        // V = S^-1 x y*, y = M z with M = (I - P) U: I + x w* is singular.
        const Matrix u = gen::complex_matrix(rng, 7, 3);
        const Matrix m = (eye(7) - coefficient_projection(p)) * u;
        const Vector y = m * gen::complex_vector(rng, 3);
        const Vector w = m.adjoint() * y;
        const Vector x = -w / w.squaredNorm();
        const Matrix v = inverse(p.frame_operator()) * x * y.adjoint();
        CHECK_THROWS_AS(dual_from_operators(p, u, v), NotADual);
    }

    TEST_CASE("similarity") {
        Rng rng(34);
        const PAsf p = gen::pasf(rng, 1.5, 3, 6);
        const auto self = similarity(p, p);
        REQUIRE(self);
        CHECK(approx_equal(self->analysis_map, eye(3)));
        CHECK(approx_equal(self->synthesis_map, eye(3)));
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix a = gen::well_conditioned(rng, 3);
            const Matrix b = gen::well_conditioned(rng, 3);
            const PAsf q(1.5, p.analysis() * a, b * p.synthesis());
            const auto sim = similarity(p, q);
            REQUIRE(sim);
            CHECK(approx_equal(sim->analysis_map, a, 1e-8));
            CHECK(approx_equal(sim->synthesis_map, b, 1e-8));
            // Symmetry: the reverse maps are the inverses.
            const auto back = similarity(q, p);
            REQUIRE(back);
            CHECK(approx_equal(back->analysis_map * a, eye(3), 1e-8));
        }
        const auto dual = similarity(p, canonical_dual(p));
        REQUIRE(dual);
        const Matrix s_inv = inverse(p.frame_operator());
        CHECK(approx_equal(dual->analysis_map, s_inv, 1e-8));
        CHECK(approx_equal(dual->synthesis_map, s_inv, 1e-8));
        CHECK_FALSE(similarity(p, gen::pasf(rng, 1.5, 3, 6)).has_value());
    }

    TEST_CASE("orthogonality and interpolation") {
        // Complementary coordinate blocks of K^6 carry two orthogonal Parseval pairs on K^3.
        Matrix f1 = Matrix::Zero(6, 3), f2 = Matrix::Zero(6, 3);
        f1.topRows(3) = eye(3);
        f2.bottomRows(3) = eye(3);
        const PAsf a(2.0, f1, f1.transpose());
        const PAsf b(2.0, f2, f2.transpose());
        CHECK(orthogonality_check(a, b));
        CHECK_FALSE(orthogonality_check(a, a));
        const PAsf similar(2.0, f1 * 2.0, f1.transpose() * 0.5);
        CHECK_FALSE(orthogonality_check(a, similar));

        const Matrix id = eye(3);
        const Matrix zero = Matrix::Zero(3, 3);
        CHECK(approx_equal(interpolate(a, b, id, zero, id, Matrix::Ones(3, 3)).frame_operator(), id, 1e-8));
        // Scalars with ca + db = 1.
        CHECK(approx_equal(interpolate(a, b, 0.5 * id, 2.0 * id, 1.0 * id, 0.25 * id).frame_operator(), id, 1e-8));

        Rng rng(35);
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix ma = gen::well_conditioned(rng, 3);
            const Matrix mb = gen::complex_matrix(rng, 3, 3);
            const Matrix md = gen::complex_matrix(rng, 3, 3);
            const Matrix mc = (id - md * mb) * inverse(ma);
            CHECK(approx_equal(interpolate(a, b, ma, mb, mc, md).frame_operator(), id, 1e-8));
        }
        CHECK_THROWS_AS(interpolate(a, a, id, zero, id, zero), HypothesisViolated);
        CHECK_THROWS_AS(interpolate(a, b, id, zero, 2.0 * id, zero), HypothesisViolated);
    }

    TEST_CASE("dilation") {
        const PAsf simple(2.0, eye(3), eye(3));
        const PasfDilation trivial = dilate(simple);
        CHECK(trivial.dilated.dim() == 3);
        CHECK(trivial.riesz);

        const PAsf shift = shift_pair(7, 2.0);
        const PasfDilation sd = dilate(shift);
        CHECK(sd.riesz);
        CHECK(sd.dilated.dim() == 8);
        // (I - P) e_1 = e_1 and (I - P) e_n = 0 otherwise.
        Matrix expected = Matrix::Zero(8, 8);
        expected(0, 0) = 1.0;
        CHECK(max_abs(sd.second_summands - expected) < 1e-12);

        Rng rng(36);
        for (int trial = 0; trial < 20; ++trial) {
            const double p = gen::pick_exponent(rng);
            const PAsf pair = gen::pasf(rng, p, 3, 6);
            const PasfDilation dil = dilate(pair);
            CHECK(dil.riesz);
            CHECK(riesz_check(dil.dilated, 1e-8));
            CHECK(max_abs(dil.dilated.analysis().leftCols(3) - pair.analysis()) == 0.0);
            CHECK(max_abs(dil.dilated.synthesis().topRows(3) - pair.synthesis()) == 0.0);
            CHECK(approx_equal(dil.range_basis * dil.range_coordinates, dil.second_summands));
            Vector x = Vector::Zero(dil.dilated.dim());
            x.head(3) = gen::complex_vector(rng, 3);
            CHECK(dil.norm(x) == doctest::Approx(vec_pnorm(x.head(3), p)));
        }
    }

    TEST_CASE("riesz check") {
        Rng rng(37);
        CHECK(riesz_check(PAsf(2.0, gen::well_conditioned(rng, 3), gen::well_conditioned(rng, 3))));
        CHECK_FALSE(riesz_check(gen::pasf(rng, 2.0, 3, 5)));
    }

    TEST_CASE("perturbation") {
        Rng rng(38);
        const PAsf p = gen::pasf(rng, 1.5, 3, 6);
        const auto zero = perturb_quadratic(p, p.synthesis());
        CHECK(zero.valid);
        CHECK(zero.deviation == 0.0);
        const PasfCheck base = check(p);
        CHECK(*zero.predicted_lower <= base.lower.hi + 1e-12);
        CHECK(*zero.predicted_upper >= base.upper.lo - 1e-12);

        for (int trial = 0; trial < 10; ++trial) {
            const Matrix noise = 1e-3 * gen::complex_matrix(rng, 3, 6);
            const Matrix omega = p.synthesis() + noise;
            const auto r = perturb_quadratic(p, omega);
            REQUIRE(r.valid);
            const PAsf moved(p.p(), p.analysis(), omega);
            const PasfCheck c = check(moved);
            CHECK(c.is_pasf);
            CHECK(c.lower.hi >= *r.predicted_lower);
            CHECK(c.upper.lo <= *r.predicted_upper);
        }

        // Scale the perturbation to sit exactly at the threshold.
        const Matrix dir = gen::complex_matrix(rng, 3, 6);
        const double dual_norm = opnorm_interval(p.analysis() * inverse(p.frame_operator()), 1.5).hi;
        const double unit = perturb_quadratic(p, p.synthesis() + dir).deviation;
        CHECK_FALSE(perturb_quadratic(p, p.synthesis() + dir * (1.0 / (unit * dual_norm))).valid);

        PasfPerturbParams params;
        const Matrix small = 1e-3 * gen::complex_matrix(rng, 3, 6);
        params.gamma = perturb_quadratic(p, p.synthesis() + small).deviation;
        const auto general = perturb_general(p, p.synthesis() + small, params);
        CHECK(general.sampled_only);
        CHECK(general.valid);
        params.beta = 1.5;
        CHECK_THROWS_AS(perturb_general(p, p.synthesis() + small, params), HypothesisViolated);

        const auto same = perturb_two_sided(p, p.analysis(), p.synthesis(), 3);
        CHECK(same.deviation == 0.0);
        CHECK(same.valid);
        const auto far = perturb_two_sided(p, p.analysis() * 3.0, p.synthesis(), 1);
        CHECK_FALSE(far.valid);
    }

    TEST_CASE("expansion to an ASF") {
        // f_n = zeta_n L, tau_n = R e_n on K^d: S = RL misses e_1.
        const Eigen::Index d = 6;
        Matrix left = Matrix::Zero(d, d);
        left.topRightCorner(d - 1, d - 1).setIdentity();
        Matrix right = left.transpose();
        const PAsf deficient(2.0, left, right);  // f_n = zeta_n L, tau_n = R e_n
        Matrix s_expected = eye(d);
        s_expected(0, 0) = 0.0;
        CHECK(approx_equal(deficient.frame_operator(), s_expected));
        const Expansion ex = expand_to_asf(deficient, PAsf(2.0, eye(d), eye(d)));
        CHECK(approx_equal(ex.expanded.frame_operator(), eye(d)));
        int nonzero = 0;
        for (bool b : ex.appended_nonzero) nonzero += b ? 1 : 0;
        CHECK(nonzero == 1);
        CHECK(ex.appended_nonzero.front());
        CHECK(ex.rank_bound == 1);

        const Expansion none = expand_to_asf(PAsf(2.0, eye(3), eye(3)), PAsf(2.0, eye(3), eye(3)));
        for (bool b : none.appended_nonzero) CHECK_FALSE(b);
        CHECK(none.rank_bound == 0);

        Rng rng(39);
        const Matrix low = gen::complex_matrix(rng, 4, 2);
        const PAsf rankdef(2.0, low.adjoint(), low);
        const Expansion r = expand_to_asf(rankdef, PAsf(2.0, eye(4), eye(4)));
        CHECK(r.rank_bound == numerical_rank(eye(4) - low * low.adjoint()));
        CHECK(approx_equal(r.expanded.frame_operator(), eye(4)));
        CHECK_THROWS_AS(expand_to_asf(rankdef, PAsf(2.0, 2.0 * eye(4), eye(4))), InvalidInput);
    }

    TEST_CASE("agrees with hframe when p = 2") {
        Rng rng(40);
        const HilbertFrame f(gen::frame_synthesis(rng, 3, 7));
        const PAsf pair(2.0, f.analysis(), f.synthesis());
        const FrameBounds fb = frame_bounds(f);
        const PasfCheck pc = check(pair);
        CHECK(pc.lower.lo == doctest::Approx(fb.lower).epsilon(1e-9));
        CHECK(pc.upper.hi == doctest::Approx(fb.upper).epsilon(1e-9));
        CHECK(approx_equal(canonical_dual(pair).synthesis(), canonical_dual(f).synthesis()));
    }
}
