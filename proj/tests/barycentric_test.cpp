#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "aaa/barycentric.hpp"
#include "oracles.hpp"

using aaa::BarycentricRational;
using aaa::Complex;
using Catch::Approx;

namespace {

BarycentricRational<double> make(std::vector<double> s, std::vector<double> f,
                                 std::vector<double> w) {
    BarycentricRational<double> r{std::move(s), std::move(f), std::move(w)};
    r.validate();
    return r;
}

} // namespace

TEST_CASE("reval reproduces a constant") {
    auto r = make({-1.0, 1.0}, {3.5, 3.5}, {1.0, 1.0});
    CHECK(aaa::reval(r, 0.3) == Approx(3.5).epsilon(1e-15));
}

TEST_CASE("reval reproduces the identity") {
    // support [-1,1], values [-1,1], weights [1,-1] gives r(x) = x exactly
    auto r = make({-1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0});
    CHECK(aaa::reval(r, 0.25) == Approx(0.25).epsilon(1e-15));
    CHECK(aaa::reval(r, -0.73) == Approx(-0.73).epsilon(1e-15));
}

TEST_CASE("reval at a support point returns the stored value") {
    auto r = make({-1.0, 0.1, 1.0}, {2.0, -7.0, 4.0}, {1.0, 2.0, 1.0});
    CHECK(aaa::reval(r, 0.1) == -7.0);
    CHECK(aaa::reval(r, -1.0) == 2.0);
}

TEST_CASE("validate rejects malformed rationals") {
    BarycentricRational<double> dup{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(dup.validate(), aaa::InvalidSupport);
    BarycentricRational<double> zero_w{{0.0, 1.0}, {1.0, 2.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(zero_w.validate(), aaa::InvalidSupport);
    BarycentricRational<double> ragged{{0.0, 1.0}, {1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(ragged.validate(), aaa::InvalidSupport);
}

TEST_CASE("prz of r(x) = 1/x") {
    // support [-1,1], values [-1,1], weights [1,1]: partial fractions give 1/x
    auto r = make({-1.0, 1.0}, {-1.0, 1.0}, {1.0, 1.0});
    auto rep = aaa::prz(r);
    REQUIRE(rep.poles.size() == 1);
    CHECK(std::abs(rep.poles[0]) < 1e-13);
    REQUIRE(rep.residues.size() == 1);
    CHECK(std::abs(rep.residues[0] - Complex(1.0)) < 1e-12);
    CHECK(rep.zeros.empty());
}

TEST_CASE("prz of r(x) = x") {
    auto r = make({-1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0});
    auto rep = aaa::prz(r);
    CHECK(rep.poles.empty());
    REQUIRE(rep.zeros.size() == 1);
    CHECK(std::abs(rep.zeros[0]) < 1e-13);
}

TEST_CASE("prz of a nonzero constant has no poles or zeros") {
    auto r = make({-1.0, 1.0}, {2.5, 2.5}, {1.0, 1.0});
    auto rep = aaa::prz(r);
    CHECK(rep.poles.empty());
    CHECK(rep.zeros.empty());
}

namespace {

BarycentricRational<double> random_rational(std::mt19937& rng, int m) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::normal_distribution<double> gauss;
    BarycentricRational<double> r;
    while (static_cast<int>(r.support.size()) < m) {
        double s = uni(rng);
        bool dup = false;
        for (double t : r.support)
            if (std::abs(t - s) < 1e-3) dup = true;
        if (dup) continue;
        r.support.push_back(s);
        r.values.push_back(gauss(rng));
        r.weights.push_back(gauss(rng));
    }
    r.validate();
    return r;
}

} // namespace

TEST_CASE("interpolation holds at every support point with nonzero weight") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_rational(rng, 2 + trial % 5);
        for (size_t j = 0; j < r.support.size(); ++j)
            if (r.weights[j] != 0.0) CHECK(aaa::reval(r, r.support[j]) == r.values[j]);
    }
}

TEST_CASE("reported poles blow up and reported zeros vanish") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dir(0.0, 2.0 * std::numbers::pi);
    int checked_poles = 0, checked_zeros = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto r = random_rational(rng, 2 + trial % 5);
        double scale = 0.0;
        for (double v : r.values) scale = std::max(scale, std::abs(v));

        BarycentricRational<Complex> rc;
        for (size_t j = 0; j < r.support.size(); ++j) {
            rc.support.emplace_back(r.support[j], 0.0);
            rc.values.emplace_back(r.values[j], 0.0);
            rc.weights.emplace_back(r.weights[j], 0.0);
        }
        auto rep = aaa::prz(r);
        for (const Complex& t : rep.poles) {
            Complex probe = t + std::polar(1e-6, dir(rng));
            if (std::abs(aaa::reval(rc, probe)) > 1e3) ++checked_poles;
        }
        for (const Complex& z : rep.zeros) {
            if (std::abs(aaa::reval(rc, z)) < 1e-6 * std::max(1.0, scale)) ++checked_zeros;
        }
    }
    CHECK(checked_poles > 10);
    CHECK(checked_zeros > 10);
}

TEST_CASE("residues match the local Laurent coefficient at simple poles") {
    std::mt19937 rng(777);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_rational(rng, 3 + trial % 3);
        BarycentricRational<Complex> rc;
        for (size_t j = 0; j < r.support.size(); ++j) {
            rc.support.emplace_back(r.support[j], 0.0);
            rc.values.emplace_back(r.values[j], 0.0);
            rc.weights.emplace_back(r.weights[j], 0.0);
        }
        auto rep = aaa::prz(r);
        for (size_t i = 0; i < rep.poles.size(); ++i) {
            const Complex t = rep.poles[i];
            const Complex rho = rep.residues[i];
            if (std::abs(rho) < 1e-8) continue;
            // keep away from other poles so the simple-pole term dominates
            bool isolated = true;
            for (size_t k = 0; k < rep.poles.size(); ++k)
                if (k != i && std::abs(rep.poles[k] - t) < 1e-3) isolated = false;
            if (!isolated) continue;
            const Complex z = t + Complex(1e-7, 0.0);
            const Complex approx = (z - t) * aaa::reval(rc, z);
            CHECK(std::abs(approx - rho) < 1e-4 * std::abs(rho));
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("cross-multiplied identity pins the rational through its samples") {
    // A type (m-1, m-1) rational is determined by 2m+1 samples: check the
    // cross-multiplied two-point identity on extra evaluation points.
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto r = random_rational(rng, 2 + trial % 4);
        const int m = r.size();
        std::vector<double> samples;
        while (static_cast<int>(samples.size()) < 2 * m + 1) {
            double x = uni(rng);
            bool bad = false;
            for (double s : r.support)
                if (std::abs(x - s) < 1e-4) bad = true;
            for (double s : samples)
                if (std::abs(x - s) < 1e-4) bad = true;
            if (!bad) samples.push_back(x);
        }
        // Fit a fresh barycentric interpolant of the same type through the
        // first m samples and weights from the remaining ones, then compare.
        BarycentricRational<double> q;
        q.support.assign(samples.begin(), samples.begin() + m);
        for (double s : q.support) q.values.push_back(aaa::reval(r, s));
        // weights via the nullspace of the Loewner system on the rest
        std::vector<double> X(samples.begin() + m, samples.end());
        Eigen::MatrixXd A(static_cast<int>(X.size()), m);
        for (size_t i = 0; i < X.size(); ++i)
            for (int j = 0; j < m; ++j)
                A(static_cast<int>(i), j) =
                    (aaa::reval(r, X[i]) - q.values[j]) / (X[i] - q.support[j]);
        auto w = aaa::min_singular_vector<double>(A);
        q.weights.assign(w.data(), w.data() + w.size());
        q.validate();
        double scale = 0.0;
        for (double v : q.values) scale = std::max(scale, std::abs(v));
        for (int k = 0; k < 20; ++k) {
            double x = uni(rng);
            bool bad = false;
            for (double s : r.support)
                if (std::abs(x - s) < 1e-4) bad = true;
            for (double s : q.support)
                if (std::abs(x - s) < 1e-4) bad = true;
            if (bad) continue;
            CHECK(std::abs(aaa::reval(q, x) - aaa::reval(r, x)) <=
                  1e-10 * std::max(1.0, scale + std::abs(aaa::reval(r, x))));
        }
    }
}
