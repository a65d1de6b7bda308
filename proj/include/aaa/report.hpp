#pragma once

// Result emission: the JSON model dump, CSV convergence history and error
// curve, and the two SVG summary plots.  All writes go through a
// write-temp-then-rename helper so readers never see partial files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aaa/engine.hpp"

namespace aaa {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out.flush()) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::json complex_pair(const Complex& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json complex_array(const std::vector<Complex>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Complex& z : v) a.push_back(complex_pair(z));
    return a;
}

inline std::vector<Complex> read_complex_array(const nlohmann::json& a) {
    std::vector<Complex> out;
    out.reserve(a.size());
    for (const auto& e : a) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

inline const char* domain_name(DomainKind k) {
    switch (k) {
        case DomainKind::UnitInterval: return "unit-interval";
        case DomainKind::UnitCircle: return "unit-circle";
        case DomainKind::ImaginaryAxis: return "imaginary-axis";
    }
    return "unknown";
}

inline DomainKind domain_from_name(const std::string& s) {
    if (s == "unit-interval") return DomainKind::UnitInterval;
    if (s == "unit-circle") return DomainKind::UnitCircle;
    if (s == "imaginary-axis") return DomainKind::ImaginaryAxis;
    throw IoError("unknown domain name '" + s + "'");
}

} // namespace detail

inline nlohmann::json model_json(const AaaResult& result) {
    nlohmann::json j;
    j["domain"] = detail::domain_name(result.domain.kind);
    j["mero"] = result.domain.mero;
    if (result.domain.kind == DomainKind::ImaginaryAxis)
        j["mobius_scale"] = result.domain.mobius_scale;
    j["degree"] = result.approximant.degree();
    j["support"] = detail::complex_array(result.approximant.support);
    j["values"] = detail::complex_array(result.approximant.values);
    j["weights"] = detail::complex_array(result.approximant.weights);
    j["poles"] = detail::complex_array(result.report.poles);
    j["residues"] = detail::complex_array(result.report.residues);
    j["zeros"] = detail::complex_array(result.report.zeros);
    j["status"] = to_string(result.status);
    j["grid_error"] = result.grid_error;
    j["fine_error"] = result.fine_error;
    j["feval_count"] = result.feval_count;
    nlohmann::json hist = nlohmann::json::array();
    for (const ConvergenceRecord& rec : result.history)
        hist.push_back({{"degree", rec.degree},
                        {"error", rec.grid_error},
                        {"bad_poles", rec.bad_poles}});
    j["history"] = std::move(hist);
    if (!result.warnings.empty()) j["warnings"] = result.warnings;
    return j;
}

/// Write model.json for a finished run.
inline void emit_model(const AaaResult& result, const std::filesystem::path& path) {
    detail::atomic_write(path, model_json(result).dump(2) + "\n");
}

/// The part of model.json a client needs to re-evaluate the rational.
struct StoredModel {
    DomainKind domain;
    bool mero = false;
    double mobius_scale = 1.207;
    BarycentricRational<Complex> approximant;
    std::vector<Complex> poles, residues, zeros;
    std::string status;
    double grid_error = 0.0, fine_error = 0.0;
    long feval_count = 0;

    Complex evaluate(const Complex& point) const {
        if (domain == DomainKind::ImaginaryAxis) {
            Complex w = detail::finite(point) ? MobiusPair{mobius_scale}.z_to_w(point)
                                              : Complex(1.0, 0.0);
            return reval(approximant, w);
        }
        return reval(approximant, point);
    }
};

inline StoredModel read_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    StoredModel m;
    m.domain = detail::domain_from_name(j.at("domain").get<std::string>());
    m.mero = j.value("mero", false);
    m.mobius_scale = j.value("mobius_scale", 1.207);
    m.approximant.support = detail::read_complex_array(j.at("support"));
    m.approximant.values = detail::read_complex_array(j.at("values"));
    m.approximant.weights = detail::read_complex_array(j.at("weights"));
    m.poles = detail::read_complex_array(j.at("poles"));
    m.residues = detail::read_complex_array(j.at("residues"));
    m.zeros = detail::read_complex_array(j.at("zeros"));
    m.status = j.at("status").get<std::string>();
    m.grid_error = j.at("grid_error").get<double>();
    m.fine_error = j.at("fine_error").get<double>();
    m.feval_count = j.at("feval_count").get<long>();
    return m;
}

/// history.csv: one row per AAA step.
inline void emit_history_csv(const AaaResult& result, const std::filesystem::path& path) {
    std::string out = "degree,error,bad_poles\n";
    for (const ConvergenceRecord& rec : result.history) {
        out += std::to_string(rec.degree);
        out += ',';
        out += detail::fmt17(rec.grid_error);
        out += ',';
        out += rec.bad_poles ? '1' : '0';
        out += '\n';
    }
    detail::atomic_write(path, out);
}

/// error_curve.csv: the fine-grid error curve in domain order.
inline void emit_error_curve_csv(const ErrorCurve& curve, const std::filesystem::path& path) {
    std::string out = "param_re,param_im,err_re,err_im\n";
    for (size_t i = 0; i < curve.parameters.size(); ++i) {
        out += detail::fmt17(curve.parameters[i].real());
        out += ',';
        out += detail::fmt17(curve.parameters[i].imag());
        out += ',';
        out += detail::fmt17(curve.errors[i].real());
        out += ',';
        out += detail::fmt17(curve.errors[i].imag());
        out += '\n';
    }
    detail::atomic_write(path, out);
}

namespace detail {

struct SvgFrame {
    double x0, x1, y0, y1;  // data ranges
    static constexpr int W = 640, H = 420, ML = 60, MR = 15, MT = 15, MB = 35;

    double px(double x) const { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); }
    double py(double y) const { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); }
};

inline void svg_header(std::string& s) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
}

inline void svg_axes(std::string& s, const SvgFrame& fr, const std::string& xlabel,
                     const std::string& ylabel) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  SvgFrame::ML, SvgFrame::MT, SvgFrame::W - SvgFrame::ML - SvgFrame::MR,
                  SvgFrame::H - SvgFrame::MT - SvgFrame::MB);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                  (SvgFrame::ML + SvgFrame::W - SvgFrame::MR) / 2, SvgFrame::H - 8,
                  xlabel.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"14\" y=\"%d\" font-size=\"13\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 14 %d)\">%s</text>\n",
                  SvgFrame::H / 2, SvgFrame::H / 2, ylabel.c_str());
    s += buf;
}

} // namespace detail

/// convergence.svg: log10 error against degree, bad-pole steps in red, the
/// fine-grid error of the returned model as a green circle.
inline void emit_convergence_svg(const AaaResult& result, const std::filesystem::path& path) {
    double lo = 0.0, hi = -300.0;
    int dmax = 1;
    for (const ConvergenceRecord& rec : result.history) {
        if (rec.grid_error > 0.0) {
            double l = std::log10(rec.grid_error);
            lo = std::min(lo, l);
            hi = std::max(hi, l);
        }
        dmax = std::max(dmax, rec.degree);
    }
    if (result.fine_error > 0.0) {
        lo = std::min(lo, std::log10(result.fine_error));
        hi = std::max(hi, std::log10(result.fine_error));
    }
    detail::SvgFrame fr{0.0, static_cast<double>(dmax + 1), lo - 0.5, hi + 0.5};
    std::string s;
    detail::svg_header(s);
    detail::svg_axes(s, fr, "degree", "log10 error");
    char buf[256];
    for (const ConvergenceRecord& rec : result.history) {
        if (rec.grid_error <= 0.0) continue;
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n",
                      fr.px(rec.degree), fr.py(std::log10(rec.grid_error)),
                      rec.bad_poles ? "red" : "blue");
        s += buf;
    }
    if (result.fine_error > 0.0) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"6\" fill=\"none\" stroke=\"green\" "
                      "stroke-width=\"2\"/>\n",
                      fr.px(result.approximant.degree()), fr.py(std::log10(result.fine_error)));
        s += buf;
    }
    s += "</svg>\n";
    detail::atomic_write(path, s);
}

/// error.svg: the final error curve.  On the interval this is error against
/// x; on the circle and the axis it is the curve traced in the complex error
/// plane.
inline void emit_error_svg(const AaaResult& result, const std::filesystem::path& path) {
    const ErrorCurve& curve = result.curve;
    std::string s;
    detail::svg_header(s);
    char buf[128];
    if (curve.parameters.empty()) {
        s += "</svg>\n";
        detail::atomic_write(path, s);
        return;
    }
    std::vector<double> xs_, ys_;
    std::string xlabel, ylabel;
    if (result.domain.kind == DomainKind::UnitInterval) {
        for (size_t i = 0; i < curve.parameters.size(); ++i) {
            xs_.push_back(curve.parameters[i].real());
            ys_.push_back(curve.errors[i].real());
        }
        xlabel = "x";
        ylabel = "f(x) - r(x)";
    } else {
        for (const Complex& e : curve.errors) {
            xs_.push_back(e.real());
            ys_.push_back(e.imag());
        }
        xlabel = "Re (f - r)";
        ylabel = "Im (f - r)";
    }
    double x0 = xs_[0], x1 = xs_[0], y0 = ys_[0], y1 = ys_[0];
    for (size_t i = 0; i < xs_.size(); ++i) {
        x0 = std::min(x0, xs_[i]);
        x1 = std::max(x1, xs_[i]);
        y0 = std::min(y0, ys_[i]);
        y1 = std::max(y1, ys_[i]);
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    detail::SvgFrame fr{x0 - padx, x1 + padx, y0 - pady, y1 + pady};
    detail::svg_axes(s, fr, xlabel, ylabel);
    s += "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1\" points=\"";
    for (size_t i = 0; i < xs_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.1f,%.1f ", fr.px(xs_[i]), fr.py(ys_[i]));
        s += buf;
    }
    s += "\"/>\n</svg>\n";
    detail::atomic_write(path, s);
}

} // namespace aaa
