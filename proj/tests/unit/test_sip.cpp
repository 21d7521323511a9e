#include "doctest.h"

#include "framekit/errors.hpp"
#include "framekit/hframe.hpp"
#include "framekit/sip.hpp"
#include "support/generators.hpp"

using namespace framekit;

TEST_SUITE("sip") {
    TEST_CASE("semi-inner product basics") {
        Rng rng(41);
        for (double p : {1.5, 2.0, 3.0}) {
            const Vector x = gen::complex_vector(rng, 5);
            const double n = vec_pnorm(x, p);
            CHECK(std::abs(sip(x, x, p) - Complex(n * n)) < 1e-12);
            CHECK(std::abs(sip(Vector::Unit(5, 0), Vector::Unit(5, 1), p)) == 0.0);
            CHECK(std::abs(sip(x, Vector::Zero(5), p)) == 0.0);
        }
        const Vector x = gen::complex_vector(rng, 4);
        const Vector y = gen::complex_vector(rng, 4);
        CHECK(std::abs(sip(x, y, 2.0) - y.dot(x)) < 1e-12);
        CHECK_THROWS_AS(sip(x, y, 1.0), InvalidParameter);
    }

    TEST_CASE("axioms on samples") {
        Rng rng(42);
        for (double p : {1.5, 2.0, 3.0}) {
            for (int s = 0; s < 300; ++s) {
                const Vector x = gen::complex_vector(rng, 4);
                Vector y = gen::complex_vector(rng, 4);
                if (s % 5 == 0) y(1) = 0.0;  // zero coordinates contribute nothing
                const Vector z = gen::complex_vector(rng, 4);
                const Complex lambda = rng.complex_normal();
                const Complex xy = sip(x, y, p);
                CHECK(std::abs(sip(lambda * x, y, p) - lambda * xy) < 1e-10);
                CHECK(std::abs(sip(x, lambda * y, p) - std::conj(lambda) * xy) < 1e-10);
                CHECK(std::abs(sip(x + z, y, p) - xy - sip(z, y, p)) < 1e-10);
                CHECK(std::norm(xy) <= sip(x, x, p).real() * sip(y, y, p).real() + 1e-10);
                CHECK(sip(x, x, p).real() > 0.0);
            }
        }
    }

    TEST_CASE("partial operators") {
        Rng rng(43);
        const SipPasf pair(3.0, gen::complex_matrix(rng, 3, 6), gen::complex_matrix(rng, 3, 6));
        CHECK(max_abs(pair.partial_operator(Subset(6))) == 0.0);
        CHECK(approx_equal(pair.partial_operator(Subset::all(6)), pair.frame_operator()));
        const Subset m = Subset::from_mask(gen::subset_mask(rng, 6));
        CHECK(approx_equal(pair.partial_operator(m) + pair.partial_operator(m.complement()), pair.frame_operator(), 1e-14));
    }

    TEST_CASE("general identity") {
        Rng rng(44);
        for (double p : {1.5, 2.0, 3.0}) {
            const SipPasf pair(p, gen::frame_synthesis(rng, 3, 7), gen::frame_synthesis(rng, 3, 7));
            const Vector x = gen::complex_vector(rng, 3);
            CHECK(general_identity_residual(pair, Subset(7), x) < 1e-8);
            for (int s = 0; s < 20; ++s) {
                CHECK(general_identity_residual(pair, Subset::from_mask(gen::subset_mask(rng, 7)), gen::complex_vector(rng, 3)) < 1e-8);
            }
        }
    }

    TEST_CASE("parseval identity, lower bound, operator identity") {
        Rng rng(45);
        for (double p : {1.5, 2.0, 3.0}) {
            const SipPasf pair = parseval_completion(p, gen::frame_synthesis(rng, 3, 7));
            CHECK(max_abs(pair.frame_operator() - Matrix::Identity(3, 3)) < 1e-10);
            CHECK(parseval_identity_residual(pair, Subset::all(7), gen::complex_vector(rng, 3)) < 1e-10);
            CHECK(operator_identity_residual(pair, Subset(7)) < 1e-12);
            for (int s = 0; s < 30; ++s) {
                const Subset m = Subset::from_mask(gen::subset_mask(rng, 7));
                const Vector x = gen::complex_vector(rng, 3);
                CHECK(parseval_identity_residual(pair, m, x) < 1e-8);
                CHECK(lower_bound_check(pair, m, x).passes);
                CHECK(operator_identity_residual(pair, m) < 1e-10);
            }
        }
        const SipPasf hilbert = parseval_completion(2.0, gen::frame_synthesis(rng, 3, 7));
        const Vector x = gen::complex_vector(rng, 3);
        const auto empty = lower_bound_check(hilbert, Subset(7), x);
        CHECK(empty.condition_holds);
        CHECK(empty.value == doctest::Approx(x.squaredNorm()));
        const SipPasf loose(3.0, gen::complex_matrix(rng, 3, 5), gen::complex_matrix(rng, 3, 5));
        CHECK_THROWS_AS(parseval_identity_residual(loose, Subset(5), x), InvalidInput);
    }

    TEST_CASE("operator lemma for U + V = I") {
        Rng rng(46);
        const Matrix u = gen::complex_matrix(rng, 4, 4);
        const Matrix v = Matrix::Identity(4, 4) - u;
        CHECK(max_abs((u - v) - (u * u - v * v)) < 1e-12);
    }

    TEST_CASE("p = 2 agrees with hframe") {
        Rng rng(47);
        const HilbertFrame f = parsevalize(HilbertFrame(gen::frame_synthesis(rng, 3, 8)));
        const SipPasf pair(2.0, f.synthesis(), f.synthesis());
        for (int s = 0; s < 20; ++s) {
            const Subset m = Subset::from_mask(gen::subset_mask(rng, 8));
            const Vector x = gen::complex_vector(rng, 3);
            const auto h = frame_identity_residuals(f, m, x, IdentityMode::Parseval);
            CHECK(std::abs(general_identity_residual(pair, m, x) - h.general_residual) < 1e-10);
            CHECK(std::abs(parseval_identity_residual(pair, m, x) - *h.parseval_residual) < 1e-10);
            CHECK(std::abs(lower_bound_check(pair, m, x).value - *h.lower_bound_value) < 1e-10);
        }
    }
}
