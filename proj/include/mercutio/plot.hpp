#pragma once

// Plot output: sampled data tables plus a small companion render script.
//
// plot1d samples an expression on a uniform inclusive grid and writes
// `basename.tsv` (two tab-separated columns) together with `basename.gp`,
// a plain-text script that renders the table. plot2d does the same on a
// rectangular grid, one blank-line-separated block per x value.
//
// Grid points are computed as min + i*(max-min)/(n-1) with the final point
// forced to max, so the first and last abscissae match the requested bounds
// bit for bit. Sample values that come out non-finite are written as "nan";
// the plot command itself still succeeds. Identical requests produce
// byte-identical files.

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <string>

#include "mercutio/bytecode.hpp"

namespace mercutio {

struct PlotFiles {
    std::string data;   // path of the .tsv table
    std::string script; // path of the .gp render script
};

namespace plot_detail {

inline void append_num(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "nan";
        return;
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

inline std::string file_part(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? path : path.substr(pos + 1);
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
        throw io_error("cannot write " + path);
}

inline double grid_point(double lo, double hi, int i, int n) {
    if (i == n - 1)
        return hi;
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
}

inline void check_axis(double lo, double hi, int samples) {
    if (!(lo < hi))
        throw domain_error("plot: lower bound must be below upper bound");
    if (samples < 2)
        throw domain_error("plot: need at least two samples per axis");
}

// a sample that fails to evaluate (pole of a special function, ...) is
// recorded as nan instead of aborting the whole table
inline double sample(const NumericFn& fn, const double* xs) {
    try {
        return fn(xs);
    } catch (const error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace plot_detail

// One curve. `label` is used as the curve title in the render script;
// `style` is recorded as a comment (fancy draw styles reduce to this note).
inline PlotFiles plot1d(const Expr& e, const std::string& var, double lo,
                        double hi, int samples, const std::string& basename,
                        const std::string& label = "",
                        const std::string& style = "lines") {
    plot_detail::check_axis(lo, hi, samples);
    NumericFn fn(e, {var});

    std::string tsv;
    tsv.reserve(static_cast<size_t>(samples) * 24);
    for (int i = 0; i < samples; ++i) {
        double x = plot_detail::grid_point(lo, hi, i, samples);
        plot_detail::append_num(tsv, x);
        tsv += '\t';
        plot_detail::append_num(tsv, plot_detail::sample(fn, &x));
        tsv += '\n';
    }

    std::string datafile = plot_detail::file_part(basename) + ".tsv";
    std::string title = label.empty() ? datafile : label;
    std::string gp;
    gp += "# render script for " + datafile + "\n";
    gp += "# style: " + style + "\n";
    gp += "set grid\n";
    gp += "plot \"" + datafile + "\" using 1:2 with lines title \"" + title +
          "\"\n";

    PlotFiles out{basename + ".tsv", basename + ".gp"};
    plot_detail::write_file(out.data, tsv);
    plot_detail::write_file(out.script, gp);
    return out;
}

// One surface. Rows are x y z in row-major grid order, with a blank line
// between consecutive x-blocks.
inline PlotFiles plot2d(const Expr& e, const std::string& xvar,
                        const std::string& yvar, double xlo, double xhi,
                        double ylo, double yhi, int nx, int ny,
                        const std::string& basename,
                        const std::string& label = "",
                        const std::string& style = "surf") {
    plot_detail::check_axis(xlo, xhi, nx);
    plot_detail::check_axis(ylo, yhi, ny);
    NumericFn fn(e, {xvar, yvar});

    std::string tsv;
    tsv.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny) * 32);
    double pt[2];
    for (int i = 0; i < nx; ++i) {
        if (i > 0)
            tsv += '\n';
        pt[0] = plot_detail::grid_point(xlo, xhi, i, nx);
        for (int j = 0; j < ny; ++j) {
            pt[1] = plot_detail::grid_point(ylo, yhi, j, ny);
            plot_detail::append_num(tsv, pt[0]);
            tsv += '\t';
            plot_detail::append_num(tsv, pt[1]);
            tsv += '\t';
            plot_detail::append_num(tsv, plot_detail::sample(fn, pt));
            tsv += '\n';
        }
    }

    std::string datafile = plot_detail::file_part(basename) + ".tsv";
    std::string title = label.empty() ? datafile : label;
    std::string gp;
    gp += "# render script for " + datafile + "\n";
    gp += "# style: " + style + "\n";
    gp += "set grid\n";
    gp += "splot \"" + datafile + "\" using 1:2:3 with lines title \"" +
          title + "\"\n";

    PlotFiles out{basename + ".tsv", basename + ".gp"};
    plot_detail::write_file(out.data, tsv);
    plot_detail::write_file(out.script, gp);
    return out;
}

} // namespace mercutio
