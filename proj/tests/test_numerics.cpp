/*
 * Copyright 2026 The lipkern authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "doctest.h"

#include "lipkern/numerics.hpp"
#include "test_util.hpp"

using namespace lipkern;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST_SUITE("numerics") {

TEST_CASE("SymMatrix symmetrizes and rejects asymmetry") {
    const SymMatrix ok(mat2(1.0, 2.0, 2.0 + 5e-13, 3.0));
    CHECK(ok(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ok(0, 1) == ok(1, 0));

    CHECK_THROWS_AS(SymMatrix(mat2(1.0, 2.0, 2.1, 3.0)), DimensionError);
    CHECK_THROWS_AS(SymMatrix(Eigen::MatrixXd::Zero(2, 3)), DimensionError);
    CHECK_THROWS_AS(SymMatrix(Eigen::MatrixXd::Zero(0, 0)), DimensionError);
}

TEST_CASE("eig_sym invariants on random matrices") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 1 + rep % 8;
        Eigen::MatrixXd a = testutil::random_gaussian_matrix(rng, dim, dim);
        a = ((a + a.transpose()) * 0.5).eval();
        const SymMatrix sym(a);
        const EigDecomp eig = eig_sym(sym);

        const Eigen::MatrixXd& q = eig.eigenvectors;
        const double ortho =
            (q.transpose() * q - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
        CHECK(ortho <= 1e-10);

        const Eigen::MatrixXd recon = q * eig.eigenvalues.asDiagonal() * q.transpose();
        const double scale = std::max(1.0, sym.matrix().cwiseAbs().maxCoeff());
        CHECK((recon - sym.matrix()).cwiseAbs().maxCoeff() <= 1e-8 * scale);

        for (int i = 0; i + 1 < dim; ++i) CHECK(eig.eigenvalues[i] <= eig.eigenvalues[i + 1]);
    }
}

TEST_CASE("solve_spd on pinned systems") {
    SUBCASE("diagonal, zero shift") {
        const SymMatrix a(mat2(2.0, 0.0, 0.0, 2.0));
        Eigen::VectorXd b(2);
        b << 4.0, 2.0;
        const Eigen::VectorXd x = solve_spd(a, 0.0, b);
        CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rank-deficient plus shift") {
        const SymMatrix a(mat2(1.0, 1.0, 1.0, 1.0));
        Eigen::VectorXd b(2);
        b << 3.0, 3.0;
        const Eigen::VectorXd x = solve_spd(a, 1.0, b);
        CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("scaled identity") {
        const SymMatrix a(Eigen::MatrixXd::Identity(3, 3));
        Eigen::VectorXd b(3);
        b << 3.0, 0.0, 0.0;
        const Eigen::VectorXd x = solve_spd(a, 0.5, b);
        CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(x[1] == 0.0);
        CHECK(x[2] == 0.0);
    }
}

TEST_CASE("solve_spd error paths") {
    const SymMatrix singular(mat2(1.0, 1.0, 1.0, 1.0));
    Eigen::VectorXd b(2);
    b << 1.0, 0.0;
    try {
        solve_spd(singular, 0.0, b);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(std::abs(e.min_eigenvalue) <= 1e-12);
        CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    }

    Eigen::VectorXd wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(solve_spd(singular, 1.0, wrong), DimensionError);
    CHECK_THROWS_AS(solve_spd(singular, -1.0, b), std::invalid_argument);

    // Clearly indefinite matrices are refused even with a shift.
    const SymMatrix indefinite(mat2(0.0, 2.0, 2.0, 0.0));
    CHECK_THROWS_AS(solve_spd(indefinite, 0.1, b), NotPsdError);
}

TEST_CASE("solve_spd falls back to the clamped spectral route on breakdown") {
    // A roundoff-negative eigenvalue with a shift below it defeats the
    // Cholesky factorization; the fallback clamps the eigenvalue to zero and
    // solves against the shifted clamped spectrum.
    const SymMatrix near_psd(mat2(1.0, 0.0, 0.0, -4e-10));
    Eigen::VectorXd b(2);
    b << 2.0, 3.0;
    const double shift = 1e-10;
    const Eigen::VectorXd x = solve_spd(near_psd, shift, b);
    CHECK(x[0] == doctest::Approx(2.0 / (1.0 + shift)).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(3.0 / shift).epsilon(1e-12));
}

TEST_CASE("solve_spd reproduces the rhs on random PSD systems") {
    Rng rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        const int dim = 1 + rep % 10;
        const SymMatrix a = testutil::random_psd(rng, dim, 0.0, 3.0);
        const double shift = rng.uniform(1e-6, 2.0);
        const Eigen::VectorXd b = rng.gaussian_vector(dim);
        const Eigen::VectorXd x = solve_spd(a, shift, b);
        Eigen::MatrixXd shifted = a.matrix();
        shifted.diagonal().array() += shift;
        CHECK((shifted * x - b).norm() <= 1e-8 * b.norm());
    }
}

TEST_CASE("sqrt_psd on pinned matrices") {
    SUBCASE("diagonal") {
        const SymMatrix b = sqrt_psd(SymMatrix(mat2(4.0, 0.0, 0.0, 9.0)));
        CHECK(b(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(b(1, 1) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(std::abs(b(0, 1)) <= 1e-12);
    }
    SUBCASE("dense 2x2") {
        const SymMatrix a(mat2(2.0, 1.0, 1.0, 2.0));
        const SymMatrix b = sqrt_psd(a);
        CHECK((b.matrix() * b.matrix() - a.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("zero matrix") {
        const SymMatrix b = sqrt_psd(SymMatrix::zero(2));
        CHECK(b.matrix().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("not PSD") {
        try {
            sqrt_psd(SymMatrix(mat2(1.0, 2.0, 2.0, 1.0)));
            FAIL("expected NotPsdError");
        } catch (const NotPsdError& e) {
            CHECK(e.eigenvalue == doctest::Approx(-1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("sqrt_psd properties on random PSD matrices") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 1 + rep % 7;
        const SymMatrix a = testutil::random_psd(rng, dim, 0.0, 4.0);
        const SymMatrix b = sqrt_psd(a);
        const double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
        CHECK((b.matrix() * b.matrix() - a.matrix()).cwiseAbs().maxCoeff() <= 1e-7 * scale);
        CHECK(min_eigenvalue(b) >= -1e-10);

        // B commutes with A.
        const Eigen::MatrixXd ba = b.matrix() * a.matrix();
        const Eigen::MatrixXd ab = a.matrix() * b.matrix();
        CHECK((ba - ab).cwiseAbs().maxCoeff() <= 1e-7 * a.matrix().cwiseAbs().maxCoeff() + 1e-14);
    }
}

TEST_CASE("sqrt_psd forgives roundoff negatives") {
    Eigen::MatrixXd a = mat2(1.0, 0.0, 0.0, -1e-12);
    const SymMatrix b = sqrt_psd(SymMatrix(a));
    CHECK(b(1, 1) == 0.0); // clamped
    CHECK(b(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral_norm and min_eigenvalue on pinned matrices") {
    CHECK(spectral_norm(SymMatrix(mat2(3.0, 0.0, 0.0, -5.0))) == doctest::Approx(5.0));
    CHECK(spectral_norm(SymMatrix::identity(4)) == doctest::Approx(1.0));
    CHECK(spectral_norm(SymMatrix(mat2(0.0, 1.0, 1.0, 0.0))) == doctest::Approx(1.0));

    CHECK(min_eigenvalue(SymMatrix::identity(2)) == doctest::Approx(1.0));
    CHECK(min_eigenvalue(SymMatrix(mat2(1.0, 2.0, 2.0, 1.0))) == doctest::Approx(-1.0));
    CHECK(min_eigenvalue(SymMatrix::zero(3)) == doctest::Approx(0.0));
}

TEST_CASE("spectral_norm dominates random Rayleigh quotients") {
    Rng rng(47);
    for (int rep = 0; rep < 5; ++rep) {
        const int dim = 2 + rep % 3; // random quotients only probe the top pair in low dimension
        Eigen::MatrixXd g = testutil::random_gaussian_matrix(rng, dim, dim);
        g = (0.5 * (g + g.transpose())).eval();
        const SymMatrix a(g);
        const double norm = spectral_norm(a);

        double best = 0.0;
        for (int t = 0; t < 1000; ++t) {
            Eigen::VectorXd v = rng.gaussian_vector(dim);
            v /= v.norm();
            const double quotient = std::abs(v.dot(a.matrix() * v));
            CHECK(quotient <= norm * (1.0 + 1e-12));
            best = std::max(best, quotient);
        }
        CHECK(best >= 0.95 * norm);
    }
}

} // TEST_SUITE
