#pragma once

// Barycentric Lawson refinement toward minimax, and the numerical winding
// number of a complex error curve.
//
// The refinement relaxes interpolation: both numerator and denominator
// coefficients are free, support points join the working grid, and an
// iteratively reweighted least-squares loop drives the error toward
// equioscillation.  Three stabilizations matter in practice:
//   - support-point rows enter as limit rows scaled like their neighbors'
//     Cauchy magnitude, so the weighting treats them on an equal footing;
//   - each row is divided by the previous iterate's denominator magnitude,
//     so the weights act on the true error f - r rather than d*(f - r);
//   - on real curves the weight update multiplies by the peak error of the
//     point's sign run rather than the pointwise error, which equalizes the
//     alternation lobes far faster at a fixed step budget.
// The iterate returned is the pole-free one with smallest max error on the
// working grid, never worse than the starting approximant there.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aaa/barycentric.hpp"
#include "aaa/domain.hpp"
#include "aaa/kernels.hpp"

namespace aaa {

struct UnresolvedWinding : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered samples of f - r along the domain boundary.
struct ErrorCurve {
    std::vector<Complex> parameters;
    std::vector<Complex> errors;
};

/// Net winding of a nonvanishing error curve around 0, from principal-branch
/// argument increments (wrap-around included for closed curves).  Throws
/// UnresolvedWinding if consecutive samples turn by pi/2 or more.
inline int winding_number(std::span<const Complex> errors, bool closed = true) {
    const size_t n = errors.size();
    if (n < 8) throw UnresolvedWinding("winding_number: need at least 8 samples");
    double total = 0.0;
    const size_t last = closed ? n : n - 1;
    for (size_t i = 0; i < last; ++i) {
        const Complex a = errors[i];
        const Complex b = errors[(i + 1) % n];
        if (a == Complex(0.0) || b == Complex(0.0))
            throw UnresolvedWinding("winding_number: error curve passes through zero");
        double d = std::arg(b / a);
        if (std::abs(d) >= std::numbers::pi / 2.0)
            throw UnresolvedWinding("winding_number: grid too coarse at sample " +
                                    std::to_string(i));
        total += d;
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

inline int winding_number(const ErrorCurve& curve, bool closed = true) {
    return winding_number(std::span<const Complex>(curve.errors), closed);
}

/// Peak |e| of each maximal run of constant sign along a real error curve.
/// Ratio max/min of these levels is the equioscillation diagnostic.
inline std::vector<double> sign_run_levels(std::span<const double> errs) {
    std::vector<double> levels;
    double cur = 0.0;
    int sgn = 0;
    for (double e : errs) {
        int s = e > 0.0 ? 1 : (e < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (sgn == 0 || s == sgn) {
            cur = std::max(cur, std::abs(e));
            sgn = s;
        } else {
            levels.push_back(cur);
            cur = std::abs(e);
            sgn = s;
        }
    }
    if (sgn != 0) levels.push_back(cur);
    return levels;
}

inline std::vector<double> sign_run_levels(const ErrorCurve& curve) {
    std::vector<double> re;
    re.reserve(curve.errors.size());
    for (const Complex& e : curve.errors) re.push_back(e.real());
    return sign_run_levels(std::span<const double>(re));
}

namespace detail {

template <class Value>
struct LawsonResult {
    BarycentricRational<Value> r;
    std::vector<double> curve_params;   // working grid, ordered along the domain
    std::vector<Value> curve_errors;
    double best_max_abs = 0.0;
    double f_scale = 0.0;               // max |f| over the working grid
    int steps_taken = 0;
    bool refined = false;               // false if the start was returned
    std::vector<double> lambda_sums;    // post-normalization, one per step
    std::vector<std::string> warnings;
};

// Lawson core over one geometry.  eval(t) evaluates f at the embedded point
// of parameter t; S_params are the (sorted) support parameters of r0 with
// r0.support/values aligned to them.
template <class Geom, class Value, class EvalFn>
LawsonResult<Value> lawson_core(EvalFn&& eval, const BarycentricRational<Value>& r0,
                                const std::vector<double>& S_params, const Domain& domain,
                                PoleTest pole_test, int steps, int density) {
    using Mat = Eigen::Matrix<Value, Eigen::Dynamic, Eigen::Dynamic>;
    LawsonResult<Value> out;
    out.r = r0;

    const size_t m = r0.support.size();
    std::vector<double> grid = Geom::sample_params(S_params, density);
    grid.insert(grid.end(), S_params.begin(), S_params.end());
    std::sort(grid.begin(), grid.end());
    const size_t N = grid.size();

    std::vector<Value> X(N), F(N);
    std::vector<int> sup(N, -1);  // index into the support set, or -1
    for (size_t i = 0; i < N; ++i) {
        X[i] = Geom::template embed<Value>(grid[i]);
        auto it = std::lower_bound(S_params.begin(), S_params.end(), grid[i]);
        if (it != S_params.end() && *it == grid[i]) {
            sup[i] = static_cast<int>(it - S_params.begin());
            F[i] = r0.values[sup[i]];
        } else {
            F[i] = eval(grid[i]);
        }
    }

    double scale = 0.0;
    for (const Value& v : F) scale = std::max(scale, std::abs(v));
    out.f_scale = scale;

    // Limit-row scale at each support point: the Cauchy magnitude of the
    // nearest working-grid neighbor.
    std::vector<double> limit_scale(N, 0.0);
    for (size_t i = 0; i < N; ++i) {
        if (sup[i] < 0) continue;
        double d = std::numeric_limits<double>::infinity();
        if (i > 0) d = std::min(d, std::abs(X[i] - X[i - 1]));
        if (i + 1 < N) d = std::min(d, std::abs(X[i] - X[i + 1]));
        if constexpr (Geom::wraps) {
            d = std::min(d, std::abs(X[i] - X[(i + 1) % N]));
            d = std::min(d, std::abs(X[i] - X[(i + N - 1) % N]));
        }
        limit_scale[i] = 1.0 / d;
    }

    Mat C = Mat::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(m));
    for (size_t i = 0; i < N; ++i) {
        if (sup[i] >= 0) {
            C(i, sup[i]) = Value(limit_scale[i]);
        } else {
            for (size_t j = 0; j < m; ++j) C(i, j) = Value(1.0) / (X[i] - r0.support[j]);
        }
    }

    // Baseline: r0 itself competes with every iterate.
    std::vector<Value> E0(N);
    double r0_max = 0.0;
    for (size_t i = 0; i < N; ++i) {
        E0[i] = F[i] - reval(r0, X[i]);
        r0_max = std::max(r0_max, std::abs(E0[i]));
    }

    // Near machine precision the reweighted solves only churn rounding noise.
    if (r0_max < 100.0 * std::numeric_limits<double>::epsilon() * scale) {
        out.warnings.push_back(
            "lawson: starting error is at machine-precision scale; refinement skipped");
        out.curve_params = grid;
        out.curve_errors = E0;
        out.best_max_abs = r0_max;
        return out;
    }

    // Previous-iterate denominator magnitude, seeded from r0's weights.
    std::vector<double> dmag(N);
    auto denom_mag = [&](const std::vector<Value>& wts) {
        for (size_t i = 0; i < N; ++i) {
            if (sup[i] >= 0) {
                dmag[i] = std::abs(wts[sup[i]]) * limit_scale[i];
            } else {
                Value d(0);
                for (size_t j = 0; j < m; ++j) d += wts[j] / (X[i] - r0.support[j]);
                dmag[i] = std::abs(d);
            }
            if (!(dmag[i] > 0.0) || !std::isfinite(dmag[i])) dmag[i] = 1.0;
        }
    };
    denom_mag(r0.weights);

    std::vector<double> lam(N, 1.0 / static_cast<double>(N));

    struct Candidate {
        double max_abs;
        std::vector<Value> alpha, beta, errors;
    };
    std::vector<Candidate> iterates;

    Mat A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(2 * m));
    std::vector<Value> alpha(m), beta(m), R(N), E(N), dnew_w(m);
    std::vector<double> errs(N);

    int it = 0;
    for (; it < steps; ++it) {
        for (size_t i = 0; i < N; ++i) {
            const double rw = std::sqrt(lam[i]) / dmag[i];
            for (size_t j = 0; j < m; ++j) {
                A(i, j) = rw * F[i] * C(i, j);
                A(i, m + j) = -rw * C(i, j);
            }
        }
        Eigen::Vector<Value, Eigen::Dynamic> c;
        try {
            c = min_singular_vector<Value>(A);
        } catch (const std::exception& e) {
            out.warnings.push_back(std::string("lawson: solve failed, stopping: ") + e.what());
            break;
        }
        for (size_t j = 0; j < m; ++j) {
            beta[j] = c[static_cast<Eigen::Index>(j)];
            alpha[j] = c[static_cast<Eigen::Index>(m + j)];
        }

        bool degenerate = false;
        for (size_t i = 0; i < N; ++i) {
            if (sup[i] >= 0) {
                if (beta[sup[i]] == Value(0)) {
                    degenerate = true;
                    break;
                }
                R[i] = alpha[sup[i]] / beta[sup[i]];
                dmag[i] = std::abs(beta[sup[i]]) * limit_scale[i];
            } else {
                Value num(0), den(0);
                for (size_t j = 0; j < m; ++j) {
                    Value cij = Value(1.0) / (X[i] - r0.support[j]);
                    num += alpha[j] * cij;
                    den += beta[j] * cij;
                }
                R[i] = num / den;
                dmag[i] = std::abs(den);
            }
            if (!finite(R[i])) {
                degenerate = true;
                break;
            }
            if (!(dmag[i] > 0.0) || !std::isfinite(dmag[i])) dmag[i] = 1.0;
        }
        if (degenerate) {
            out.warnings.push_back("lawson: degenerate iterate at step " + std::to_string(it + 1));
            break;
        }

        double max_abs = 0.0;
        for (size_t i = 0; i < N; ++i) {
            E[i] = F[i] - R[i];
            errs[i] = std::abs(E[i]);
            max_abs = std::max(max_abs, errs[i]);
        }
        iterates.push_back(Candidate{max_abs, alpha, beta, E});

        // Weight update: multiplicative in the error, pooled per sign run on
        // real curves so whole alternation lobes move together.
        std::vector<double> upd = errs;
        if constexpr (std::is_same_v<Value, double>) {
            size_t run_start = 0;
            int sgn = 0;
            auto flush = [&](size_t end) {
                double peak = 0.0;
                for (size_t i = run_start; i < end; ++i) peak = std::max(peak, errs[i]);
                for (size_t i = run_start; i < end; ++i) upd[i] = peak;
            };
            for (size_t i = 0; i < N; ++i) {
                int s = E[i] > 0.0 ? 1 : (E[i] < 0.0 ? -1 : 0);
                if (s == 0 || sgn == 0 || s == sgn) {
                    if (s != 0) sgn = s;
                    continue;
                }
                flush(i);
                run_start = i;
                sgn = s;
            }
            flush(N);
        }
        double sum = 0.0;
        for (size_t i = 0; i < N; ++i) {
            lam[i] *= upd[i];
            sum += lam[i];
        }
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            out.warnings.push_back("lawson: weights collapsed at step " + std::to_string(it + 1));
            break;
        }
        double check = 0.0;
        for (double& l : lam) {
            l /= sum;
            check += l;
        }
        out.lambda_sums.push_back(check);
    }
    out.steps_taken = it;
    out.curve_params = grid;

    // Best-of-run: smallest max grid error among pole-free iterates, with r0
    // as the baseline candidate.
    std::sort(iterates.begin(), iterates.end(),
              [](const Candidate& a, const Candidate& b) { return a.max_abs < b.max_abs; });
    bool skipped_bad = false;
    for (const Candidate& cnd : iterates) {
        if (cnd.max_abs > r0_max) break;
        BarycentricRational<Value> r;
        r.support = r0.support;
        r.values.resize(m);
        r.weights = cnd.beta;
        for (size_t j = 0; j < m; ++j) r.values[j] = cnd.alpha[j] / cnd.beta[j];
        bool ok = true;
        try {
            r.validate();
            for (const Complex& p : prz(r).poles)
                if (bad_pole(p, domain, pole_test)) {
                    ok = false;
                    break;
                }
        } catch (const std::exception&) {
            ok = false;
        }
        if (!ok) {
            skipped_bad = true;
            continue;
        }
        out.r = std::move(r);
        out.curve_errors = cnd.errors;
        out.best_max_abs = cnd.max_abs;
        out.refined = true;
        if (skipped_bad)
            out.warnings.push_back("lawson: iterates with bad poles were passed over");
        return out;
    }
    if (skipped_bad)
        out.warnings.push_back("lawson: all improving iterates had bad poles; keeping the start");
    out.curve_errors = E0;
    out.best_max_abs = r0_max;
    return out;
}

} // namespace detail

} // namespace aaa
