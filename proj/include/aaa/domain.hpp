#pragma once

// Approximation domains and their geometry: sampling between support points,
// the bad-pole predicate, and the Mobius map between the unit disk and the
// right half-plane.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "aaa/barycentric.hpp"

namespace aaa {

enum class DomainKind { UnitInterval, UnitCircle, ImaginaryAxis };

struct Domain {
    DomainKind kind = DomainKind::UnitInterval;
    bool mero = false;          // permit poles inside the disk / right half-plane
    double mobius_scale = 1.207;

    static Domain interval() { return {DomainKind::UnitInterval, false, 1.207}; }
    static Domain circle(bool mero = false) { return {DomainKind::UnitCircle, mero, 1.207}; }
    static Domain imaginary_axis(bool mero = false) {
        return {DomainKind::ImaginaryAxis, mero, 1.207};
    }
};

/// How pole realness is judged on the unit interval.  ExactReal applies when
/// the whole computation ran in real arithmetic: the pencil solver then
/// returns real eigenvalues with imaginary part exactly zero, and legitimate
/// conjugate-pair poles can sit within 1e-14 of the axis without being
/// misflagged.  Banded is the fallback for complex arithmetic.
enum class PoleTest { ExactReal, Banded };

/// True iff the pole lies in the region the approximation must keep clear:
/// [-1,1] itself, the open unit disk (mero off), or the open right half-plane
/// (mero off).
inline bool bad_pole(const Complex& pole, const Domain& domain,
                     PoleTest test = PoleTest::ExactReal) {
    switch (domain.kind) {
        case DomainKind::UnitInterval: {
            bool on_axis = test == PoleTest::ExactReal
                               ? pole.imag() == 0.0
                               : std::abs(pole.imag()) <=
                                     1e-13 * std::max(1.0, std::abs(pole.real()));
            return on_axis && pole.real() >= -1.0 && pole.real() <= 1.0;
        }
        case DomainKind::UnitCircle:
            return !domain.mero && std::abs(pole) < 1.0;
        case DomainKind::ImaginaryAxis:
            return !domain.mero && pole.real() > 0.0;
    }
    return false;
}

/// p equispaced points strictly inside each gap between adjacent support
/// points of [-1,1].  Support must be sorted ascending and distinct.
inline std::vector<double> xs(std::span<const double> support, int p) {
    const size_t m = support.size();
    if (m < 2) throw InvalidSupport("xs: need at least 2 support points");
    for (size_t j = 0; j + 1 < m; ++j)
        if (!(support[j] < support[j + 1]))
            throw InvalidSupport("xs: support points must be sorted and distinct");
    std::vector<double> grid;
    grid.reserve((m - 1) * static_cast<size_t>(p));
    for (size_t j = 0; j + 1 < m; ++j) {
        const double a = support[j], b = support[j + 1];
        for (int k = 1; k <= p; ++k) grid.push_back(a + k * (b - a) / (p + 1));
    }
    return grid;
}

inline std::vector<double> xs(const std::vector<double>& support, int p) {
    return xs(std::span<const double>(support), p);
}

/// Same rule on the circle, applied to angles and including the wrap-around
/// arc, so there are p points in each of the m gaps.  Angles must be sorted
/// ascending within one period; the result is sorted in [0, 2*pi).
inline std::vector<double> xs_circle_angles(std::span<const double> angles, int p) {
    const size_t m = angles.size();
    if (m < 2) throw InvalidSupport("xs: need at least 2 support points");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (size_t j = 0; j + 1 < m; ++j)
        if (!(angles[j] < angles[j + 1]))
            throw InvalidSupport("xs: support angles must be sorted and distinct");
    if (angles.back() - angles.front() >= two_pi)
        throw InvalidSupport("xs: support angles must lie within one period");
    std::vector<double> grid;
    grid.reserve(m * static_cast<size_t>(p));
    for (size_t j = 0; j < m; ++j) {
        const double a = angles[j];
        const double b = j + 1 < m ? angles[j + 1] : angles[0] + two_pi;
        for (int k = 1; k <= p; ++k) {
            double t = a + k * (b - a) / (p + 1);
            if (t >= two_pi) t -= two_pi;
            grid.push_back(t);
        }
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

inline std::vector<Complex> unit_circle_points(std::span<const double> angles) {
    std::vector<Complex> pts;
    pts.reserve(angles.size());
    for (double t : angles) pts.push_back(std::polar(1.0, t));
    return pts;
}

/// Sample points on the unit circle, p per angular gap (wrap-around included).
inline std::vector<Complex> xs_circle(std::span<const double> angles, int p) {
    return unit_circle_points(xs_circle_angles(angles, p));
}

/// The bijection w <-> z between the unit disk and the right half-plane:
/// z = M (1+w)/(1-w), w = (z-M)/(z+M).  w = 1 maps to z = infinity.
struct MobiusPair {
    double scale = 1.207;

    Complex w_to_z(const Complex& w) const { return scale * (1.0 + w) / (1.0 - w); }
    Complex z_to_w(const Complex& z) const { return (z - scale) / (z + scale); }
};

inline MobiusPair mobius_maps(double scale) { return MobiusPair{scale}; }

} // namespace aaa
