#pragma once

// Barycentric rational representation r = n/d with simple poles at the
// support points, its evaluation, and pole/zero/residue extraction.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "aaa/kernels.hpp"

namespace aaa {

struct InvalidSupport : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// r(x) = sum_j w_j f_j / (x - s_j)  /  sum_j w_j / (x - s_j).
/// Scalar is double (real data) or std::complex<double>.
template <class Scalar>
struct BarycentricRational {
    std::vector<Scalar> support;
    std::vector<Scalar> values;
    std::vector<Scalar> weights;

    int size() const { return static_cast<int>(support.size()); }
    int degree() const { return size() - 1; }

    void validate() const {
        const size_t m = support.size();
        if (m < 1 || values.size() != m || weights.size() != m)
            throw InvalidSupport("barycentric: support/values/weights must have equal length >= 1");
        bool any_weight = false;
        for (size_t j = 0; j < m; ++j) {
            if (!detail::finite(support[j]) || !detail::finite(values[j]) ||
                !detail::finite(weights[j]))
                throw InvalidSupport("barycentric: non-finite entry");
            if (weights[j] != Scalar(0)) any_weight = true;
            for (size_t k = j + 1; k < m; ++k)
                if (support[j] == support[k])
                    throw InvalidSupport("barycentric: duplicate support point");
        }
        if (!any_weight) throw InvalidSupport("barycentric: all weights zero");
    }
};

/// Poles with their residues, and zeros.  Always reported as complex numbers,
/// regardless of the arithmetic the rational was built in.
struct PoleZeroReport {
    std::vector<Complex> poles;
    std::vector<Complex> residues;
    std::vector<Complex> zeros;
};

/// Evaluate r at a single point.  A point that exactly equals a support point
/// returns the stored value there; anywhere else the quotient formula is used
/// directly (it is stable even very close to a support point).
template <class Scalar>
Scalar reval(const BarycentricRational<Scalar>& r, const Scalar& x) {
    const size_t m = r.support.size();
    if (m == 1) return r.values[0];
    Scalar num(0), den(0);
    for (size_t j = 0; j < m; ++j) {
        if (x == r.support[j]) return r.values[j];
        Scalar c = r.weights[j] / (x - r.support[j]);
        num += c * r.values[j];
        den += c;
    }
    return num / den;
}

template <class Scalar>
std::vector<Scalar> reval(const BarycentricRational<Scalar>& r, std::span<const Scalar> pts) {
    std::vector<Scalar> out;
    out.reserve(pts.size());
    for (const Scalar& x : pts) out.push_back(reval(r, x));
    return out;
}

template <class Scalar>
std::vector<Scalar> reval(const BarycentricRational<Scalar>& r, const std::vector<Scalar>& pts) {
    return reval(r, std::span<const Scalar>(pts));
}

namespace detail {

template <class Scalar>
Complex to_complex(const Scalar& v) {
    if constexpr (std::is_same_v<Scalar, double>)
        return Complex(v, 0.0);
    else
        return v;
}

} // namespace detail

/// Poles, residues and zeros of r via the arrowhead pencil.  Residues are
/// n(t)/d'(t), adequate for the generic case of simple poles; a multiple pole
/// shows up as a cluster of simple ones.
template <class Scalar>
PoleZeroReport prz(const BarycentricRational<Scalar>& r) {
    const size_t m = r.support.size();
    if (m < 2) throw InvalidSupport("prz: need at least 2 support points");

    std::vector<Scalar> wf(m);
    for (size_t j = 0; j < m; ++j) wf[j] = r.weights[j] * r.values[j];

    PoleZeroReport rep;
    rep.poles = arrowhead_pencil_eigenvalues(r.support, r.weights);
    rep.zeros = arrowhead_pencil_eigenvalues(r.support, wf);

    rep.residues.reserve(rep.poles.size());
    for (const Complex& t : rep.poles) {
        Complex n(0), dp(0);
        for (size_t j = 0; j < m; ++j) {
            Complex d = t - detail::to_complex(r.support[j]);
            n += detail::to_complex(r.weights[j] * r.values[j]) / d;
            dp -= detail::to_complex(r.weights[j]) / (d * d);
        }
        rep.residues.push_back(n / dp);
    }
    return rep;
}

} // namespace aaa
