// Command-line front end: adaptive rational approximation of a user-supplied
// function on [-1,1] (aaax), the unit circle (aaaz), or the imaginary axis
// (aaai), with JSON/CSV/SVG result emission.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aaa/engine.hpp"
#include "aaa/funcspec.hpp"
#include "aaa/report.hpp"

namespace {

struct SubOptions {
    std::string fn_text;
    std::string catalog_name;
    int degree = 150;
    int lawson = 0;
    double tol = 1e-13;
    int mero = 0;
    std::string out_dir = ".";
    bool plot = false;
    int fine = 30;
    bool dense_lawson = false;
};

void add_common_flags(CLI::App* sub, SubOptions& o, bool has_mero) {
    auto* fn = sub->add_option("--fn", o.fn_text, "target function as an expression in x (or z)");
    auto* cat = sub->add_option("--catalog", o.catalog_name, "named builtin target function");
    fn->excludes(cat);
    cat->excludes(fn);
    sub->add_option("--degree", o.degree, "maximum rational degree")->check(CLI::PositiveNumber);
    sub->add_option("--lawson", o.lawson, "minimax refinement steps")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", o.tol, "relative convergence tolerance");
    if (has_mero)
        sub->add_option("--mero", o.mero, "1 = allow poles inside the region")
            ->check(CLI::Range(0, 1));
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_flag("--plot", o.plot, "also write convergence.svg and error.svg");
    sub->add_option("--fine", o.fine, "fine check-grid density (points per gap)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--dense-lawson", o.dense_lawson, "run the refinement on a 10x finer grid");
}

int run_sub(const SubOptions& o, aaa::DomainKind kind) {
    namespace fs = std::filesystem;
    if (o.fn_text.empty() == o.catalog_name.empty()) {
        std::cerr << "error: exactly one of --fn or --catalog is required\n";
        return 1;
    }
    aaa::FunctionSpec spec;
    try {
        spec = o.fn_text.empty() ? aaa::catalog_function(o.catalog_name)
                                 : aaa::FunctionSpec(o.fn_text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    aaa::Domain domain;
    domain.kind = kind;
    domain.mero = o.mero != 0;
    aaa::AaaOptions opts;
    opts.tol = o.tol;
    opts.max_degree = o.degree;
    opts.lawson_steps = o.lawson;
    opts.fine_grid_density = o.fine;
    opts.lawson_dense_grid = o.dense_lawson;

    aaa::AaaResult result;
    try {
        result = aaa::run(spec.fn(), domain, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        fs::path dir(o.out_dir);
        fs::create_directories(dir);
        aaa::emit_model(result, dir / "model.json");
        aaa::emit_history_csv(result, dir / "history.csv");
        aaa::emit_error_curve_csv(result.curve, dir / "error_curve.csv");
        if (o.plot) {
            aaa::emit_convergence_svg(result, dir / "convergence.svg");
            aaa::emit_error_svg(result, dir / "error.svg");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::printf("status: %s  degree: %d  grid error: %.3e  fine error: %.3e  fevals: %ld\n",
                aaa::to_string(result.status), result.approximant.degree(), result.grid_error,
                result.fine_error, result.feval_count);

    switch (result.status) {
        case aaa::AaaStatus::Converged: return 0;
        case aaa::AaaStatus::MaxDegreeReached: return 2;
        case aaa::AaaStatus::BadPoleFallback: return 3;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive rational approximation on the interval, circle, or imaginary axis"};
    app.require_subcommand(1);

    SubOptions ox, oz, oi;
    CLI::App* aaax = app.add_subcommand("aaax", "approximate on [-1,1]");
    add_common_flags(aaax, ox, false);
    CLI::App* aaaz = app.add_subcommand("aaaz", "approximate on the unit circle");
    add_common_flags(aaaz, oz, true);
    CLI::App* aaai = app.add_subcommand("aaai", "approximate on the imaginary axis");
    add_common_flags(aaai, oi, true);

    CLI11_PARSE(app, argc, argv);

    if (aaax->parsed()) return run_sub(ox, aaa::DomainKind::UnitInterval);
    if (aaaz->parsed()) return run_sub(oz, aaa::DomainKind::UnitCircle);
    if (aaai->parsed()) return run_sub(oi, aaa::DomainKind::ImaginaryAxis);
    return 1;
}
