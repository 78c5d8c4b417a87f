#pragma once

#include "mercutio/bytecode.hpp"
#include "mercutio/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

// VEGAS adaptive importance-sampling Monte Carlo integration over a
// rectangular box.  A warm-up phase adapts the per-dimension grids and its
// estimates are discarded; the main phase keeps adapting and combines its
// iterations by inverse variance.

namespace mercutio {

struct VegasConfig {
    int iter_low = 5;
    long calls_low = 10000;
    int iter_high = 10;
    long calls_high = 100000;
    int bins = 50;
    double alpha = 1.5;
    uint64_t seed = 0;
};

struct IntResult {
    double value = 0.0;
    double error = 0.0; // one standard deviation
    double chi2 = 0.0;  // chi^2 per degree of freedom across kept iterations
    long nonfinite = 0; // samples that came back inf/nan and were counted as 0
};

// Inverse-variance combination of per-iteration estimates.  An iteration
// with exactly zero variance is exact and short-circuits the average.
inline IntResult combined_result(const std::vector<double>& value,
                                 const std::vector<double>& sigma2) {
    if (value.empty() || value.size() != sigma2.size())
        throw domain_error("combined_result: need one variance per estimate");
    for (size_t j = 0; j < value.size(); ++j)
        if (sigma2[j] == 0.0) return {value[j], 0.0, 0.0, 0};
    double sw = 0.0, swv = 0.0;
    for (size_t j = 0; j < value.size(); ++j) {
        double w = 1.0 / sigma2[j];
        sw += w;
        swv += w * value[j];
    }
    IntResult r;
    r.value = swv / sw;
    r.error = std::sqrt(1.0 / sw);
    if (value.size() > 1) {
        double acc = 0.0;
        for (size_t j = 0; j < value.size(); ++j) {
            double dv = value[j] - r.value;
            acc += dv * dv / sigma2[j];
        }
        r.chi2 = acc / (double(value.size()) - 1.0);
    }
    return r;
}

class Vegas {
public:
    Vegas(const VegasConfig& cfg, size_t dim) : cfg_(cfg), dim_(dim) {
        if (dim_ < 1) throw domain_error("vegas: need at least one dimension");
        if (cfg_.iter_low < 1 || cfg_.calls_low < 1 || cfg_.iter_high < 1 ||
            cfg_.calls_high < 1)
            throw domain_error("vegas: iteration and call counts must be >= 1");
        if (cfg_.bins < 2) throw domain_error("vegas: need at least two bins");
        if (!(cfg_.alpha >= 0.0)) throw domain_error("vegas: damping must be >= 0");
        size_t nb = size_t(cfg_.bins);
        // widths are the primary representation: with every width the same
        // double, the per-dimension weight bins*width multiplies out to
        // exactly 1.0 on the fresh grid, so constant integrands carry zero
        // variance and report a zero error
        double w0 = 1.0 / double(nb);
        grid_.assign(dim_, std::vector<double>(nb + 1, 0.0));
        width_.assign(dim_, std::vector<double>(nb, w0));
        for (size_t d = 0; d < dim_; ++d) {
            for (size_t b = 1; b < nb; ++b) grid_[d][b] = double(b) * w0;
            grid_[d][nb] = 1.0;
        }
        d_.assign(dim_, std::vector<double>(nb, 0.0));
        streams_.reserve(dim_);
        for (size_t d = 0; d < dim_; ++d)
            streams_.push_back(Xoshiro256::stream(cfg_.seed, d));
    }

    template <typename F>
    IntResult integrate(F&& f, const std::vector<double>& lows,
                        const std::vector<double>& highs) {
        if (lows.size() != dim_ || highs.size() != dim_)
            throw domain_error("vegas: bound lists do not match the dimension");
        double jac = 1.0;
        for (size_t d = 0; d < dim_; ++d) {
            if (!(lows[d] < highs[d]))
                throw domain_error("vegas: lower bound must be below upper bound");
            jac *= highs[d] - lows[d];
        }
        for (int it = 0; it < cfg_.iter_low; ++it) {
            auto [I, var] = iteration(f, cfg_.calls_low, lows, highs, jac);
            (void)I;
            if (var > 0.0) refine();
        }
        std::vector<double> values, sigma2;
        values.reserve(cfg_.iter_high);
        sigma2.reserve(cfg_.iter_high);
        for (int it = 0; it < cfg_.iter_high; ++it) {
            auto [I, var] = iteration(f, cfg_.calls_high, lows, highs, jac);
            values.push_back(I);
            sigma2.push_back(var);
            if (var > 0.0) refine();
        }
        IntResult out = combined_result(values, sigma2);
        out.nonfinite = nonfinite_;
        return out;
    }

    const std::vector<std::vector<double>>& grids() const { return grid_; }
    // one entry (the full new grid of one dimension) per refinement
    const std::vector<std::vector<double>>& refinement_log() const {
        return refinement_log_;
    }

private:
    VegasConfig cfg_;
    size_t dim_;
    std::vector<std::vector<double>> grid_;  // per dim, bins+1 boundaries
    std::vector<std::vector<double>> width_; // per dim, bins widths
    std::vector<std::vector<double>> d_;     // per-bin refinement accumulator
    std::vector<Xoshiro256> streams_;
    std::vector<std::vector<double>> refinement_log_;
    long nonfinite_ = 0;

    template <typename F>
    std::pair<double, double> iteration(F&& f, long calls,
                                        const std::vector<double>& lows,
                                        const std::vector<double>& highs, double jac) {
        size_t nb = size_t(cfg_.bins);
        for (auto& dd : d_) std::fill(dd.begin(), dd.end(), 0.0);
        std::vector<double> phys(dim_);
        std::vector<size_t> bin(dim_);
        double sum = 0.0, sumsq = 0.0;
        long finite = 0;
        for (long s = 0; s < calls; ++s) {
            double w = jac;
            for (size_t d = 0; d < dim_; ++d) {
                size_t b = size_t(streams_[d].below(nb));
                double u = streams_[d].uniform01();
                double x = grid_[d][b] + u * width_[d][b];
                phys[d] = lows[d] + (highs[d] - lows[d]) * x;
                w *= double(nb) * width_[d][b];
                bin[d] = b;
            }
            double wf = w * f(phys.data());
            if (!std::isfinite(wf)) {
                wf = 0.0;
                ++nonfinite_;
            } else {
                ++finite;
            }
            sum += wf;
            sumsq += wf * wf;
            double sq = wf * wf;
            for (size_t d = 0; d < dim_; ++d) d_[d][bin[d]] += sq;
        }
        if (finite == 0)
            throw eval_error("integration failed: every sample was non-finite");
        double mean = sum / double(calls);
        double var = (sumsq / double(calls) - mean * mean) / (double(calls) - 1.0);
        if (var < 0.0) var = 0.0;
        return {mean, var};
    }

    double compress(double r) const {
        if (r <= 0.0) return 0.0;
        if (r >= 1.0) return 1.0;
        return std::pow((1.0 - r) / std::log(1.0 / r), cfg_.alpha);
    }

    void refine() {
        size_t nb = size_t(cfg_.bins);
        std::vector<double> sm(nb), m(nb), xnew(nb + 1);
        for (size_t d = 0; d < dim_; ++d) {
            const std::vector<double>& acc = d_[d];
            // 3-point smoothing keeps single-bin spikes from starving their
            // neighbours of bin boundaries
            sm[0] = (acc[0] + acc[1]) / 2.0;
            for (size_t b = 1; b + 1 < nb; ++b)
                sm[b] = (acc[b - 1] + acc[b] + acc[b + 1]) / 3.0;
            sm[nb - 1] = (acc[nb - 2] + acc[nb - 1]) / 2.0;
            double tot = 0.0;
            for (double v : sm) tot += v;
            if (!(tot > 0.0)) continue;
            double mt = 0.0;
            for (size_t b = 0; b < nb; ++b) mt += m[b] = compress(sm[b] / tot);
            if (!(mt > 0.0)) continue;
            double target = mt / double(nb);
            xnew[0] = 0.0;
            xnew[nb] = 1.0;
            size_t k = 0;
            double dw = 0.0;
            for (size_t i = 1; i < nb; ++i) {
                while (dw < target && k < nb) dw += m[k++];
                dw -= target;
                double frac = m[k - 1] > 0.0 ? dw / m[k - 1] : 0.0;
                frac = std::clamp(frac, 0.0, 1.0);
                xnew[i] = grid_[d][k] - frac * (grid_[d][k] - grid_[d][k - 1]);
            }
            for (size_t i = 1; i < nb; ++i)
                if (xnew[i] <= xnew[i - 1]) xnew[i] = std::nextafter(xnew[i - 1], 1.0);
            grid_[d] = xnew;
            for (size_t b = 0; b < nb; ++b) width_[d][b] = xnew[b + 1] - xnew[b];
            refinement_log_.push_back(grid_[d]);
        }
    }
};

inline IntResult intnum(const Expr& f, const std::vector<std::string>& vars,
                        const std::vector<double>& lows, const std::vector<double>& highs,
                        const VegasConfig& cfg = {}) {
    if (vars.empty() || vars.size() != lows.size() || vars.size() != highs.size())
        throw domain_error("intnum: variable and bound lists must match");
    NumericFn fn(f, vars);
    Vegas v(cfg, vars.size());
    return v.integrate([&fn](const double* x) { return fn(x); }, lows, highs);
}

} // namespace mercutio
