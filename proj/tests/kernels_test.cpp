#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "aaa/kernels.hpp"
#include "oracles.hpp"

using aaa::Complex;
using Catch::Approx;

TEST_CASE("min singular vector of a rank-1 all-ones matrix") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Ones(7, 2);
    auto w = aaa::min_singular_vector<double>(A);
    REQUIRE(w.size() == 2);
    CHECK(w.norm() == Approx(1.0).epsilon(1e-14));
    // nullspace direction is [1,-1]/sqrt(2) up to sign
    CHECK(std::abs(w[0] + w[1]) < 1e-14);
    CHECK(std::abs(w[0]) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("min singular vector of a single column") {
    Eigen::MatrixXd A(3, 1);
    A << 1, 2, 3;
    auto w = aaa::min_singular_vector<double>(A);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == Approx(1.0));  // phase-normalized
}

TEST_CASE("min singular vector picks the smaller singular direction") {
    Eigen::MatrixXd A(3, 2);
    A << 1, 0, 0, 2, 0, 0;
    auto w = aaa::min_singular_vector<double>(A);
    CHECK(w[0] == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(w[1]) < 1e-14);
}

TEST_CASE("min singular vector rejects bad input") {
    Eigen::MatrixXd wide(2, 3);
    wide.setOnes();
    CHECK_THROWS_AS(aaa::min_singular_vector<double>(wide), aaa::InvalidMatrix);
    Eigen::MatrixXd nan3(3, 2);
    nan3.setOnes();
    nan3(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(aaa::min_singular_vector<double>(nan3), aaa::InvalidMatrix);
}

TEST_CASE("min singular vector optimality against random unit vectors") {
    std::mt19937 rng(20240811);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> cols_dist(1, 8);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = cols_dist(rng);
        const int n = m + 2 + (trial % 5);
        Eigen::MatrixXd A(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) A(i, j) = gauss(rng);
        auto w = aaa::min_singular_vector<double>(A);
        const double opt = (A * w).norm();
        const double anorm = A.norm();
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXd v(m);
            for (int j = 0; j < m; ++j) v[j] = gauss(rng);
            v.normalize();
            CHECK(opt <= (A * v).norm() + 1e-12 * anorm);
        }
    }
}

TEST_CASE("min singular vector phase normalization for complex data") {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd A(6, 3);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = Complex(gauss(rng), gauss(rng));
    auto w = aaa::min_singular_vector<Complex>(A);
    int k = 0;
    double best = 0;
    for (int j = 0; j < 3; ++j)
        if (std::abs(w[j]) > best) {
            best = std::abs(w[j]);
            k = j;
        }
    CHECK(w[k].real() >= 0.0);
    CHECK(std::abs(w[k].imag()) < 1e-14 * best);
}

TEST_CASE("arrowhead pencil: two symmetric supports") {
    auto eigs = aaa::arrowhead_pencil_eigenvalues(std::vector<double>{-1.0, 1.0},
                                                  std::vector<double>{1.0, 1.0});
    REQUIRE(eigs.size() == 1);  // 1/(x+1) + 1/(x-1) = 2x/(x^2-1)
    CHECK(std::abs(eigs[0]) < 1e-13);
}

TEST_CASE("arrowhead pencil: both eigenvalues at infinity") {
    auto eigs = aaa::arrowhead_pencil_eigenvalues(std::vector<double>{-1.0, 1.0},
                                                  std::vector<double>{1.0, -1.0});
    CHECK(eigs.empty());  // 1/(x+1) - 1/(x-1) has no zeros
}

TEST_CASE("arrowhead pencil: asymmetric supports") {
    auto eigs = aaa::arrowhead_pencil_eigenvalues(std::vector<double>{0.0, 2.0},
                                                  std::vector<double>{1.0, 1.0});
    REQUIRE(eigs.size() == 1);  // 1/x + 1/(x-2) = 0 at x = 1
    CHECK(eigs[0].real() == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eigs[0].imag()) < 1e-13);
}

TEST_CASE("arrowhead pencil against the polynomial-root oracle") {
    std::mt19937 rng(123456);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> m_dist(2, 5);
    int done = 0;
    while (done < 200) {
        const int m = m_dist(rng);
        std::vector<Complex> diag, top;
        for (int j = 0; j < m; ++j) {
            diag.emplace_back(gauss(rng), gauss(rng));
            top.emplace_back(gauss(rng), gauss(rng));
        }
        Complex top_sum(0.0);
        for (const Complex& t : top) top_sum += t;
        if (std::abs(top_sum) < 0.1) continue;  // keep the root count generic
        bool close = false;
        for (int a = 0; a < m && !close; ++a)
            for (int b = a + 1; b < m; ++b)
                if (std::abs(diag[a] - diag[b]) < 1e-3) close = true;
        if (close) continue;

        auto eigs = aaa::arrowhead_pencil_eigenvalues(diag, top);
        auto roots = oracle::rational_sum_roots(diag, top);
        INFO("m = " << m);
        CHECK(oracle::match_sets(eigs, roots) < 1e-8);
        ++done;
    }
}

TEST_CASE("real pencils give conjugate-pair or exactly-real eigenvalues") {
    std::mt19937 rng(999);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + trial % 4;
        std::vector<double> diag, top;
        for (int j = 0; j < m; ++j) {
            diag.push_back(gauss(rng));
            top.push_back(gauss(rng));
        }
        auto eigs = aaa::arrowhead_pencil_eigenvalues(diag, top);
        double scale = 0.0;
        for (const Complex& e : eigs) scale = std::max(scale, std::abs(e));
        std::vector<Complex> pending;
        for (const Complex& e : eigs) {
            if (e.imag() == 0.0) continue;
            auto it = std::find_if(pending.begin(), pending.end(), [&](const Complex& q) {
                return std::abs(q - std::conj(e)) <= 1e-10 * std::max(1.0, scale);
            });
            if (it != pending.end())
                pending.erase(it);
            else
                pending.push_back(e);
        }
        CHECK(pending.empty());
    }
}
