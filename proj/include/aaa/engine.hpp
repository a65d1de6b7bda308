#pragma once

// The adaptive AAA loop: regenerate the sample grid from the support points
// at every step, solve the Loewner least-squares problem for the barycentric
// weights, pick the next support point greedily, and police bad poles.
//
// On [-1,1] with real data the whole computation stays in real arithmetic,
// so poles come out exactly real or in exact conjugate pairs.  A function
// that turns out complex-valued restarts transparently on the complex path.
// The imaginary axis is handled by transplanting to the unit circle through
// z = M (1+w)/(1-w) and mapping poles, zeros and the error curve back.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "aaa/barycentric.hpp"
#include "aaa/domain.hpp"
#include "aaa/kernels.hpp"
#include "aaa/lawson.hpp"

namespace aaa {

struct NonFiniteSample : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoValidApproximant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ComplexFn = std::function<Complex(const Complex&)>;

struct AaaOptions {
    double tol = 1e-13;              // relative max-norm tolerance on the sample grid
    int max_degree = 150;
    int lawson_steps = 0;            // refinement steps toward minimax, 0 = none
    int fine_grid_density = 30;      // a-posteriori check grid, points per gap
    bool lawson_dense_grid = false;  // run the refinement on a 10x finer grid
};

struct ConvergenceRecord {
    int degree = 0;
    double grid_error = 0.0;
    bool bad_poles = false;
    int num_bad_poles = 0;
};

enum class AaaStatus { Converged, MaxDegreeReached, BadPoleFallback };

inline const char* to_string(AaaStatus s) {
    switch (s) {
        case AaaStatus::Converged: return "converged";
        case AaaStatus::MaxDegreeReached: return "max-degree-reached";
        case AaaStatus::BadPoleFallback: return "bad-pole-fallback";
    }
    return "unknown";
}

struct AaaResult {
    // For ImaginaryAxis runs the approximant lives in the transplanted circle
    // variable w; evaluate() composes the map, and the serialized model
    // records the domain so readers can do the same.
    BarycentricRational<Complex> approximant;
    Domain domain;
    AaaStatus status = AaaStatus::Converged;
    std::vector<ConvergenceRecord> history;
    double grid_error = 0.0;  // relative max error on the final sample grid
    double fine_error = 0.0;  // relative max error on the fine check grid
    PoleZeroReport report;    // in domain coordinates (z-plane for the axis)
    long feval_count = 0;     // distinct points evaluated by the adaptive loop
    ErrorCurve curve;         // fine-grid error curve, domain coordinates
    ErrorCurve lawson_curve;  // working-grid curve of the refinement, if any
    int lawson_steps_taken = 0;
    std::vector<std::string> warnings;

    int degree() const { return approximant.degree(); }

    Complex evaluate(const Complex& point) const {
        if (domain.kind == DomainKind::ImaginaryAxis) {
            Complex w = detail::finite(point) ? MobiusPair{domain.mobius_scale}.z_to_w(point)
                                              : Complex(1.0, 0.0);
            return reval(approximant, w);
        }
        return reval(approximant, point);
    }

    std::vector<Complex> evaluate(std::span<const Complex> points) const {
        std::vector<Complex> out;
        out.reserve(points.size());
        for (const Complex& p : points) out.push_back(evaluate(p));
        return out;
    }
};

/// Loewner matrix A[i][j] = (f(x_i) - f(s_j)) / (x_i - s_j).
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
loewner(std::span<const Scalar> FX, std::span<const Scalar> FS, std::span<const Scalar> X,
        std::span<const Scalar> S) {
    const auto N = static_cast<Eigen::Index>(X.size());
    const auto m = static_cast<Eigen::Index>(S.size());
    if (FX.size() != X.size() || FS.size() != S.size())
        throw InvalidSupport("loewner: mismatched value/point lengths");
    for (size_t i = 0; i < FX.size(); ++i)
        if (!detail::finite(FX[i]))
            throw NonFiniteSample("loewner: non-finite sample value at grid index " +
                                  std::to_string(i));
    for (size_t j = 0; j < FS.size(); ++j)
        if (!detail::finite(FS[j]))
            throw NonFiniteSample("loewner: non-finite value at support index " +
                                  std::to_string(j));
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A(N, m);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            A(i, j) = (FX[i] - FS[j]) / (X[i] - S[j]);
    return A;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
loewner(const std::vector<Scalar>& FX, const std::vector<Scalar>& FS,
        const std::vector<Scalar>& X, const std::vector<Scalar>& S) {
    return loewner(std::span<const Scalar>(FX), std::span<const Scalar>(FS),
                   std::span<const Scalar>(X), std::span<const Scalar>(S));
}

namespace detail {

struct NeedComplexRestart {};

// Distinct-point bookkeeping behind feval_count.  The loop re-evaluates
// freely; only first visits count.
class EvalCounter {
  public:
    void record(const Complex& p) {
        if (seen_.insert(key(p)).second) ++count_;
    }
    long count() const { return count_; }

  private:
    static std::uint64_t bits(double x) {
        std::uint64_t u;
        std::memcpy(&u, &x, sizeof u);
        return u;
    }
    struct Key {
        std::uint64_t re, im;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            std::uint64_t h = (k.re ^ (k.im << 1)) * 0x9e3779b97f4a7c15ULL;
            h ^= h >> 33;
            return static_cast<size_t>(h);
        }
    };
    static Key key(const Complex& p) { return {bits(p.real()), bits(p.imag())}; }
    std::unordered_set<Key, KeyHash> seen_;
    long count_ = 0;
};

struct IntervalGeom {
    static constexpr bool wraps = false;
    static std::vector<double> initial_params() { return {-1.0, 1.0}; }
    static std::vector<double> sample_params(std::span<const double> S, int p) {
        return xs(S, p);
    }
    static std::vector<double> sample_params(const std::vector<double>& S, int p) {
        return xs(S, p);
    }
    static Complex embed_complex(double t) { return Complex(t, 0.0); }
    template <class V>
    static V embed(double t) {
        if constexpr (std::is_same_v<V, double>)
            return t;
        else
            return Complex(t, 0.0);
    }
};

struct CircleGeom {
    static constexpr bool wraps = true;
    static std::vector<double> initial_params() { return {0.0, std::numbers::pi}; }
    static std::vector<double> sample_params(std::span<const double> S, int p) {
        return xs_circle_angles(S, p);
    }
    static std::vector<double> sample_params(const std::vector<double>& S, int p) {
        return xs_circle_angles(S, p);
    }
    static Complex embed_complex(double t) { return std::polar(1.0, t); }
    template <class V>
    static V embed(double t) {
        return std::polar(1.0, t);
    }
};

template <class Value>
constexpr PoleTest pole_test_for() {
    return std::is_same_v<Value, double> ? PoleTest::ExactReal : PoleTest::Banded;
}

inline std::string describe_point(const Complex& p) {
    return "(" + std::to_string(p.real()) + ", " + std::to_string(p.imag()) + ")";
}

template <class Value>
struct StepData {
    BarycentricRational<Value> r;
    std::vector<double> grid_params;
    std::vector<Value> grid_points;
    std::vector<Value> grid_values;
    double grid_error = 0.0;
    double value_scale = 0.0;
    size_t argmax = 0;
};

template <class Geom, class Value, class EvalFn>
StepData<Value> aaa_step_impl(EvalFn&& eval_param, const std::vector<double>& S_params,
                              const std::vector<Value>& S_points, const std::vector<Value>& FS,
                              int p) {
    StepData<Value> out;
    out.grid_params = Geom::sample_params(S_params, p);
    const size_t N = out.grid_params.size();
    out.grid_points.reserve(N);
    out.grid_values.reserve(N);
    for (double t : out.grid_params) {
        out.grid_points.push_back(Geom::template embed<Value>(t));
        out.grid_values.push_back(eval_param(t));
    }
    auto A = loewner<Value>(out.grid_values, FS, out.grid_points, S_points);
    auto w = min_singular_vector<Value>(A);
    out.r.support = S_points;
    out.r.values = FS;
    out.r.weights.assign(w.data(), w.data() + w.size());

    double max_err = -1.0;
    for (size_t i = 0; i < N; ++i) {
        double e = std::abs(out.grid_values[i] - reval(out.r, out.grid_points[i]));
        out.value_scale = std::max(out.value_scale, std::abs(out.grid_values[i]));
        if (e > max_err) {
            max_err = e;
            out.argmax = i;
        }
    }
    out.grid_error = out.value_scale > 0.0 ? max_err / out.value_scale : max_err;
    return out;
}

// The full iteration over one geometry and one arithmetic.  `engine_domain`
// carries the bad-pole rule for the plane the iteration runs in (for axis
// jobs this is the transplanted circle).
template <class Geom, class Value>
AaaResult run_core(const ComplexFn& f, const Domain& engine_domain, const AaaOptions& opt,
                   EvalCounter& evals) {
    constexpr PoleTest test = pole_test_for<Value>();

    auto eval_param = [&](double t) -> Value {
        const Complex point = Geom::embed_complex(t);
        const Complex v = f(point);
        if (!finite(v))
            throw NonFiniteSample("f returned a non-finite value at " + describe_point(point));
        evals.record(point);
        if constexpr (std::is_same_v<Value, double>) {
            if (v.imag() != 0.0) throw NeedComplexRestart{};
            return v.real();
        } else {
            return v;
        }
    };
    // Fine-grid and Lawson evaluations sit outside the adaptive loop and are
    // not part of the evaluation count.
    auto eval_param_uncounted = [&](double t) -> Value {
        const Complex point = Geom::embed_complex(t);
        const Complex v = f(point);
        if (!finite(v))
            throw NonFiniteSample("f returned a non-finite value at " + describe_point(point));
        if constexpr (std::is_same_v<Value, double>) {
            if (v.imag() != 0.0) throw NeedComplexRestart{};
            return v.real();
        } else {
            return v;
        }
    };

    std::vector<double> S_params = Geom::initial_params();
    std::vector<Value> S_points, FS;
    for (double t : S_params) {
        S_points.push_back(Geom::template embed<Value>(t));
        FS.push_back(eval_param(t));
    }

    struct Selected {
        BarycentricRational<Value> r;
        std::vector<double> S_params;
        PoleZeroReport report;
        double grid_error = 0.0;
    };
    std::optional<Selected> incumbent;

    AaaResult result;
    result.domain = engine_domain;
    int consecutive_bad = 0;
    std::optional<Selected> chosen;

    for (;;) {
        const int m = static_cast<int>(S_params.size());
        const int p = std::max(3, 16 - m);
        StepData<Value> step = aaa_step_impl<Geom, Value>(eval_param, S_params, S_points, FS, p);

        PoleZeroReport rep = prz(step.r);
        int nbad = 0;
        for (const Complex& pole : rep.poles)
            if (bad_pole(pole, engine_domain, test)) ++nbad;
        const bool bad = nbad > 0;
        result.history.push_back({m - 1, step.grid_error, bad, nbad});

        if (!bad && (!incumbent || step.grid_error < incumbent->grid_error))
            incumbent = Selected{step.r, S_params, rep, step.grid_error};

        if (!bad && step.grid_error < opt.tol) {
            result.status = AaaStatus::Converged;
            chosen = Selected{std::move(step.r), S_params, std::move(rep), step.grid_error};
            break;
        }
        if (m - 1 >= opt.max_degree) {
            result.status = AaaStatus::MaxDegreeReached;
            if (!bad)
                chosen = Selected{std::move(step.r), S_params, std::move(rep), step.grid_error};
            else if (incumbent)
                chosen = incumbent;
            else
                throw NoValidApproximant(
                    "max degree reached with no pole-free approximant found");
            break;
        }
        if (bad) {
            ++consecutive_bad;
            if (consecutive_bad >= 10 && incumbent && incumbent->grid_error <= 1e-2) {
                result.status = AaaStatus::BadPoleFallback;
                chosen = incumbent;
                break;
            }
        } else {
            consecutive_bad = 0;
        }

        // Greedy growth: adopt the worst sample point (first of equal maxima).
        const double t_new = step.grid_params[step.argmax];
        auto pos = std::lower_bound(S_params.begin(), S_params.end(), t_new);
        const auto idx = pos - S_params.begin();
        S_params.insert(pos, t_new);
        S_points.insert(S_points.begin() + idx, step.grid_points[step.argmax]);
        FS.insert(FS.begin() + idx, step.grid_values[step.argmax]);
    }

    result.grid_error = chosen->grid_error;
    result.feval_count = evals.count();

    BarycentricRational<Value> final_r = chosen->r;
    PoleZeroReport final_rep = chosen->report;

    if (opt.lawson_steps > 0) {
        const int density = opt.lawson_dense_grid ? 30 : 3;
        auto law = lawson_core<Geom, Value>(eval_param_uncounted, final_r, chosen->S_params,
                                            engine_domain, test, opt.lawson_steps, density);
        for (const std::string& w : law.warnings) result.warnings.push_back(w);
        result.lawson_steps_taken = law.steps_taken;
        result.lawson_curve.parameters.reserve(law.curve_params.size());
        result.lawson_curve.errors.reserve(law.curve_params.size());
        for (size_t i = 0; i < law.curve_params.size(); ++i) {
            result.lawson_curve.parameters.push_back(Geom::embed_complex(law.curve_params[i]));
            result.lawson_curve.errors.push_back(detail::to_complex(law.curve_errors[i]));
        }
        if (law.refined) {
            final_r = law.r;
            final_rep = prz(final_r);
            result.grid_error =
                law.f_scale > 0.0 ? law.best_max_abs / law.f_scale : law.best_max_abs;
        }
    }

    // A-posteriori check on the fine grid, plus the emitted error curve
    // (fine grid and support points, in domain order).
    {
        const std::vector<double>& S_sel = chosen->S_params;
        std::vector<double> fine = Geom::sample_params(S_sel, opt.fine_grid_density);
        double max_err = 0.0, scale = 0.0;
        std::vector<double> curve_params = fine;
        curve_params.insert(curve_params.end(), S_sel.begin(), S_sel.end());
        std::sort(curve_params.begin(), curve_params.end());
        std::unordered_set<double> fine_set(fine.begin(), fine.end());
        result.curve.parameters.reserve(curve_params.size());
        result.curve.errors.reserve(curve_params.size());
        for (double t : curve_params) {
            const Value fx = eval_param_uncounted(t);
            const Value rx = reval(final_r, Geom::template embed<Value>(t));
            result.curve.parameters.push_back(Geom::embed_complex(t));
            result.curve.errors.push_back(detail::to_complex(Value(fx - rx)));
            if (fine_set.count(t)) {
                max_err = std::max(max_err, std::abs(fx - rx));
                scale = std::max(scale, std::abs(fx));
            }
        }
        result.fine_error = scale > 0.0 ? max_err / scale : max_err;
    }

    result.report = std::move(final_rep);
    if constexpr (std::is_same_v<Value, double>) {
        result.approximant.support.assign(final_r.support.begin(), final_r.support.end());
        result.approximant.values.assign(final_r.values.begin(), final_r.values.end());
        result.approximant.weights.assign(final_r.weights.begin(), final_r.weights.end());
    } else {
        result.approximant = std::move(final_r);
    }
    return result;
}

// Map a circle-plane result of the transplanted problem back to the axis.
inline void map_axis_result(AaaResult& res, const Domain& axis) {
    const MobiusPair mob{axis.mobius_scale};
    const auto map_points = [&](std::vector<Complex>& pts, std::vector<Complex>* aligned) {
        std::vector<Complex> out;
        std::vector<Complex> out2;
        for (size_t i = 0; i < pts.size(); ++i) {
            Complex z = mob.w_to_z(pts[i]);
            if (!finite(z) || std::abs(z) >= kInfiniteEigCutoff) continue;
            out.push_back(z);
            if (aligned) {
                // residue transforms with dz/dw = 2M/(1-w)^2
                Complex dz_dw = 2.0 * axis.mobius_scale / ((1.0 - pts[i]) * (1.0 - pts[i]));
                out2.push_back((*aligned)[i] * dz_dw);
            }
        }
        pts = std::move(out);
        if (aligned) *aligned = std::move(out2);
    };
    map_points(res.report.poles, &res.report.residues);
    map_points(res.report.zeros, nullptr);

    const auto map_curve = [&](ErrorCurve& curve) {
        ErrorCurve out;
        out.parameters.reserve(curve.parameters.size());
        out.errors.reserve(curve.errors.size());
        for (size_t i = 0; i < curve.parameters.size(); ++i) {
            if (curve.parameters[i] == Complex(1.0)) continue;  // the point at infinity
            Complex z = mob.w_to_z(curve.parameters[i]);
            if (!finite(z)) continue;
            out.parameters.push_back(z);
            out.errors.push_back(curve.errors[i]);
        }
        curve = std::move(out);
    };
    map_curve(res.curve);
    map_curve(res.lawson_curve);
    res.domain = axis;
}

} // namespace detail

/// One AAA step at a given support set; exposed for tests and diagnostics.
/// The interval overload runs in real arithmetic; the circle overload takes
/// support angles in [0, 2*pi).
struct AaaStepReal {
    BarycentricRational<double> r;
    std::vector<double> grid_points;
    std::vector<double> grid_values;
    double argmax_point = 0.0;
    double grid_error = 0.0;
};

struct AaaStepCircle {
    BarycentricRational<Complex> r;
    std::vector<Complex> grid_points;
    std::vector<Complex> grid_values;
    Complex argmax_point;
    double grid_error = 0.0;
};

inline AaaStepReal aaa_step(const std::function<double(double)>& f,
                            const std::vector<double>& support, int p) {
    std::vector<double> S_points = support;
    std::vector<double> FS;
    FS.reserve(support.size());
    for (double s : support) FS.push_back(f(s));
    auto step = detail::aaa_step_impl<detail::IntervalGeom, double>(
        [&](double t) {
            double v = f(t);
            if (!std::isfinite(v))
                throw NonFiniteSample("f returned a non-finite value at " +
                                      detail::describe_point(Complex(t, 0.0)));
            return v;
        },
        support, S_points, FS, p);
    return {std::move(step.r), std::move(step.grid_points), std::move(step.grid_values),
            step.grid_params[step.argmax], step.grid_error};
}

inline AaaStepCircle aaa_step_circle(const ComplexFn& f, const std::vector<double>& angles,
                                     int p) {
    std::vector<Complex> S_points, FS;
    for (double t : angles) {
        S_points.push_back(std::polar(1.0, t));
        FS.push_back(f(S_points.back()));
    }
    auto step = detail::aaa_step_impl<detail::CircleGeom, Complex>(
        [&](double t) {
            Complex v = f(std::polar(1.0, t));
            if (!detail::finite(v))
                throw NonFiniteSample("f returned a non-finite value at " +
                                      detail::describe_point(std::polar(1.0, t)));
            return v;
        },
        angles, S_points, FS, p);
    return {std::move(step.r), std::move(step.grid_points), std::move(step.grid_values),
            detail::CircleGeom::embed_complex(step.grid_params[step.argmax]), step.grid_error};
}

/// Run continuum AAA on the given domain.
inline AaaResult run(const ComplexFn& f, const Domain& domain, const AaaOptions& opts = {}) {
    detail::EvalCounter evals;
    switch (domain.kind) {
        case DomainKind::UnitInterval:
            try {
                return detail::run_core<detail::IntervalGeom, double>(f, domain, opts, evals);
            } catch (const detail::NeedComplexRestart&) {
                return detail::run_core<detail::IntervalGeom, Complex>(f, domain, opts, evals);
            }
        case DomainKind::UnitCircle:
            return detail::run_core<detail::CircleGeom, Complex>(f, domain, opts, evals);
        case DomainKind::ImaginaryAxis: {
            const MobiusPair mob{domain.mobius_scale};
            ComplexFn g = [&f, mob](const Complex& w) -> Complex {
                Complex z = w == Complex(1.0) ? Complex(std::numeric_limits<double>::infinity(),
                                                        0.0)
                                              : mob.w_to_z(w);
                return f(z);
            };
            Domain circle = Domain::circle(domain.mero);
            circle.mobius_scale = domain.mobius_scale;
            AaaResult res = detail::run_core<detail::CircleGeom, Complex>(g, circle, opts, evals);
            detail::map_axis_result(res, domain);
            return res;
        }
    }
    throw std::logic_error("run: unknown domain");
}

/// Refine a pole-free approximant toward minimax with `steps` reweighted
/// least-squares iterations.  Returns the refined rational and the error
/// curve of the returned iterate on the Lawson working grid.
inline std::pair<BarycentricRational<double>, ErrorCurve>
lawson_refine(const std::function<double(double)>& f, const BarycentricRational<double>& r0,
              const Domain& domain, int steps, bool dense_grid = false) {
    if (domain.kind != DomainKind::UnitInterval)
        throw InvalidSupport("lawson_refine: real overload is for the unit interval");
    if (steps < 1) throw InvalidSupport("lawson_refine: steps must be >= 1");
    BarycentricRational<double> r = r0;
    std::vector<size_t> order(r.support.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return r0.support[a] < r0.support[b]; });
    for (size_t i = 0; i < order.size(); ++i) {
        r.support[i] = r0.support[order[i]];
        r.values[i] = r0.values[order[i]];
        r.weights[i] = r0.weights[order[i]];
    }
    auto law = detail::lawson_core<detail::IntervalGeom, double>(
        [&](double t) {
            double v = f(t);
            if (!std::isfinite(v))
                throw NonFiniteSample("f returned a non-finite value at " +
                                      detail::describe_point(Complex(t, 0.0)));
            return v;
        },
        r, r.support, domain, PoleTest::ExactReal, steps, dense_grid ? 30 : 3);
    ErrorCurve curve;
    for (size_t i = 0; i < law.curve_params.size(); ++i) {
        curve.parameters.emplace_back(law.curve_params[i], 0.0);
        curve.errors.emplace_back(law.curve_errors[i], 0.0);
    }
    return {std::move(law.r), std::move(curve)};
}

} // namespace aaa
