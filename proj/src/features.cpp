#include "tskit/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tskit/parallel.hpp"

namespace tskit {

namespace {

double autocorr_span(std::span<const double> x, std::size_t tau) {
    const std::size_t n = x.size();
    if (n < 2) throw TooShortError("autocorrelation needs at least 2 values");
    if (tau > n - 2) {
        throw LagOutOfRangeError("lag " + std::to_string(tau) + " out of range for length " +
                                 std::to_string(n) + " (max " + std::to_string(n - 2) + ")");
    }
    const double var = sample_variance_of(x);
    if (var == 0.0) throw ConstantSeriesError("autocorrelation of a constant series");
    const double m = mean_of(x);
    double sum = 0.0;
    for (std::size_t t = 0; t + tau < n; ++t) {
        sum += (x[t] - m) * (x[t + tau] - m);
    }
    return sum / (var * static_cast<double>(n - tau));
}

// X_k = sum_j a_j e^{+2 pi i j k / n}, in place, n a power of two.
void fft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<std::complex<double>> transform(std::span<const double> x) {
    const std::size_t n = x.size();
    if ((n & (n - 1)) == 0) {
        std::vector<std::complex<double>> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = x[j];
        fft_pow2(a);
        return a;
    }
    // One table of the n distinct roots keeps the naive fallback at O(n^2).
    std::vector<std::complex<double>> roots(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double ang = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n);
        roots[m] = std::complex<double>(std::cos(ang), std::sin(ang));
    }
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) acc += x[j] * roots[(j * k) % n];
        out[k] = acc;
    }
    return out;
}

std::vector<double> half_spectrum_power(const TimeSeries& x) {
    const Spectrum sp = dft(x);
    const std::size_t bins = x.size() / 2;
    std::vector<double> power(bins);
    for (std::size_t k = 1; k <= bins; ++k) power[k - 1] = std::norm(sp.coefficients[k]);
    return power;
}

// Least-squares polynomial fit of y against centered positions; returns the
// residual sum of squares. degree is 1 or 2, y.size() >= degree + 2.
double detrend_rss(std::span<const double> y, int degree) {
    const std::size_t s = y.size();
    const double c = (static_cast<double>(s) - 1.0) / 2.0;
    const std::size_t dim = static_cast<std::size_t>(degree) + 1;

    double pow_sums[5] = {0, 0, 0, 0, 0}; // sum of t^k, t centered
    double rhs[3] = {0, 0, 0};
    for (std::size_t j = 0; j < s; ++j) {
        const double t = static_cast<double>(j) - c;
        double tp = 1.0;
        for (std::size_t k = 0; k < 2 * dim - 1; ++k) {
            pow_sums[k] += tp;
            tp *= t;
        }
        double tq = 1.0;
        for (std::size_t k = 0; k < dim; ++k) {
            rhs[k] += tq * y[j];
            tq *= t;
        }
    }

    double a[3][4];
    for (std::size_t u = 0; u < dim; ++u) {
        for (std::size_t v = 0; v < dim; ++v) a[u][v] = pow_sums[u + v];
        a[u][dim] = rhs[u];
    }
    // Gaussian elimination with partial pivoting on the (dim x dim) system.
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        for (std::size_t k = 0; k <= dim; ++k) std::swap(a[col][k], a[piv][k]);
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == col || a[col][col] == 0.0) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t k = col; k <= dim; ++k) a[r][k] -= f * a[col][k];
        }
    }
    double coef[3] = {0, 0, 0};
    for (std::size_t u = 0; u < dim; ++u) {
        coef[u] = a[u][u] == 0.0 ? 0.0 : a[u][dim] / a[u][u];
    }

    double rss = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
        const double t = static_cast<double>(j) - c;
        double fit = coef[0];
        double tq = 1.0;
        for (std::size_t k = 1; k < dim; ++k) {
            tq *= t;
            fit += coef[k] * tq;
        }
        const double r = y[j] - fit;
        rss += r * r;
    }
    return rss;
}

struct LineFit {
    double slope;
    double intercept;
    double rms_residual;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        rss += r * r;
    }
    return LineFit{slope, intercept, std::sqrt(rss / nn)};
}

double require_param(const FeatureSpec& spec, const std::string& key) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        throw InvalidArgumentError("feature '" + spec.name + "' is missing parameter '" + key +
                                   "'");
    }
    return it->second;
}

FeatureSpec make_spec(std::string name, std::string op,
                      std::map<std::string, double> params = {}) {
    return FeatureSpec{std::move(name), std::move(op), std::move(params)};
}

} // namespace

double sample_variance(const TimeSeries& x) {
    return sample_variance_of(x.values());
}

double stat_av(const TimeSeries& x, std::size_t window) {
    if (window == 0) throw InvalidArgumentError("stat_av window must be positive");
    const std::size_t n = x.size();
    const std::size_t m = n / window;
    if (m < 2) {
        throw TooShortError("stat_av needs at least 2 full windows, got " + std::to_string(m) +
                            " of length " + std::to_string(window) + " in " + std::to_string(n));
    }
    const double full_std = sample_std_of(x.values());
    if (full_std == 0.0) throw ConstantSeriesError("stat_av of a constant series");
    std::vector<double> means(m);
    for (std::size_t k = 0; k < m; ++k) {
        means[k] = mean_of(x.span().subspan(k * window, window));
    }
    return sample_std_of(means) / full_std;
}

double autocorrelation(const TimeSeries& x, std::size_t tau) {
    return autocorr_span(x.values(), tau);
}

std::size_t first_zero_acf(const TimeSeries& x) {
    const std::size_t n = x.size();
    if (n < 3) throw TooShortError("first_zero_acf needs at least 3 values");
    for (std::size_t tau = 1; tau <= n - 2; ++tau) {
        if (autocorr_span(x.values(), tau) <= 0.0) return tau;
    }
    return n - 2;
}

Spectrum dft(const TimeSeries& x) {
    const std::size_t n = x.size();
    if (n < 2) throw TooShortError("dft needs at least 2 values");
    auto coeffs = transform(x.span());
    // The convention indexes samples from 1, which rotates each bin by one
    // sample's phase relative to the 0-based transform.
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Spectrum out;
    out.coefficients.resize(n);
    out.frequencies.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        out.coefficients[k] =
            coeffs[k] * std::complex<double>(std::cos(ang), std::sin(ang)) * scale;
        out.frequencies[k] = static_cast<double>(k) / (static_cast<double>(n) * x.dt());
    }
    return out;
}

double spectral_entropy(const TimeSeries& x) {
    if (x.size() < 2) throw TooShortError("spectral_entropy needs at least 2 values");
    if (sample_variance_of(x.values()) == 0.0) {
        throw ConstantSeriesError("spectral_entropy of a constant series");
    }
    const auto power = half_spectrum_power(x);
    if (power.size() == 1) return 0.0; // a single bin carries everything
    const double total = std::accumulate(power.begin(), power.end(), 0.0);
    double h = 0.0;
    for (double p : power) {
        if (p <= 0.0) continue;
        const double q = p / total;
        h -= q * std::log(q);
    }
    return h / std::log(static_cast<double>(power.size()));
}

std::size_t dominant_frequency_bin(const TimeSeries& x) {
    if (x.size() < 2) throw TooShortError("dominant_frequency_bin needs at least 2 values");
    if (sample_variance_of(x.values()) == 0.0) {
        throw ConstantSeriesError("dominant_frequency_bin of a constant series");
    }
    const auto power = half_spectrum_power(x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < power.size(); ++k) {
        if (power[k] > power[best]) best = k;
    }
    return best + 1;
}

double approximate_entropy(const TimeSeries& x, std::size_t m, double r) {
    if (m == 0) throw InvalidArgumentError("approximate_entropy needs m >= 1");
    if (!(r > 0.0)) throw InvalidArgumentError("approximate_entropy needs r > 0");
    const std::size_t n = x.size();
    if (n < m + 2) {
        throw TooShortError("approximate_entropy needs at least m + 2 = " +
                            std::to_string(m + 2) + " values, got " + std::to_string(n));
    }
    // Both template averages run over the M vectors that have a successor, so
    // counts pair off exactly and a perfectly repeating series scores zero.
    const std::size_t big_m = n - m;
    const auto& v = x.values();
    std::vector<std::size_t> b(big_m, 1); // self-matches included
    std::vector<std::size_t> a(big_m, 1);
    for (std::size_t i = 0; i < big_m; ++i) {
        for (std::size_t j = i + 1; j < big_m; ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                d = std::max(d, std::abs(v[i + k] - v[j + k]));
                if (d > r) break;
            }
            if (d <= r) {
                ++b[i];
                ++b[j];
                if (std::max(d, std::abs(v[i + m] - v[j + m])) <= r) {
                    ++a[i];
                    ++a[j];
                }
            }
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < big_m; ++i) {
        sum += std::log(static_cast<double>(b[i]) / static_cast<double>(a[i]));
    }
    return sum / static_cast<double>(big_m);
}

std::vector<std::size_t> default_dfa_scales(std::size_t n, int detrend_order) {
    const std::size_t lo = std::max<std::size_t>(8, static_cast<std::size_t>(detrend_order) + 2);
    const std::size_t hi = n / 4;
    if (hi < lo) {
        throw TooShortError("series of length " + std::to_string(n) +
                            " is too short for DFA scales in [" + std::to_string(lo) + ", N/4]");
    }
    std::vector<std::size_t> scales;
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi));
    for (int i = 0; i < 20; ++i) {
        const double f = 20 == 1 ? 0.0 : static_cast<double>(i) / 19.0;
        const double s = std::exp(log_lo + f * (log_hi - log_lo));
        scales.push_back(static_cast<std::size_t>(std::llround(s)));
    }
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    if (scales.size() < 4) {
        throw TooShortError("only " + std::to_string(scales.size()) +
                            " distinct DFA scales fit series of length " + std::to_string(n));
    }
    return scales;
}

DfaResult dfa_alpha(const TimeSeries& x, int detrend_order, std::vector<std::size_t> scales) {
    if (detrend_order != 1 && detrend_order != 2) {
        throw InvalidArgumentError("DFA detrend order must be 1 or 2");
    }
    const std::size_t n = x.size();
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    if (scales.size() < 4) {
        throw InvalidArgumentError("DFA needs at least 4 distinct scales, got " +
                                   std::to_string(scales.size()));
    }
    for (std::size_t s : scales) {
        if (s < static_cast<std::size_t>(detrend_order) + 2) {
            throw InvalidArgumentError("DFA scale " + std::to_string(s) +
                                       " is below detrend order + 2");
        }
        if (s * 4 > n) {
            throw TooShortError("DFA scale " + std::to_string(s) + " exceeds N/4 for N = " +
                                std::to_string(n));
        }
    }

    const double m = mean_of(x.values());
    std::vector<double> y(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] - m;
        y[i] = acc;
    }

    std::vector<double> fluct(scales.size());
    parallel_for(scales.size(), [&](std::size_t si) {
        const std::size_t s = scales[si];
        const std::size_t windows = n / s;
        double rss = 0.0;
        for (std::size_t w = 0; w < windows; ++w) {
            rss += detrend_rss(std::span<const double>(y).subspan(w * s, s), detrend_order);
        }
        fluct[si] = std::sqrt(rss / static_cast<double>(windows * s));
    });

    DfaResult out;
    std::vector<double> log_s;
    std::vector<double> log_f;
    for (std::size_t si = 0; si < scales.size(); ++si) {
        if (fluct[si] == 0.0) { // log F undefined; report and drop
            out.dropped_scales.push_back(scales[si]);
            continue;
        }
        out.scales.push_back(scales[si]);
        out.fluctuations.push_back(fluct[si]);
        log_s.push_back(std::log(static_cast<double>(scales[si])));
        log_f.push_back(std::log(fluct[si]));
    }
    if (out.scales.size() < 4) {
        throw DegenerateScaleError("zero fluctuation at " +
                                   std::to_string(out.dropped_scales.size()) +
                                   " scales leaves fewer than 4 for the fit");
    }
    const LineFit fit = fit_line(log_s, log_f);
    out.alpha = fit.slope;
    out.fit_residual = fit.rms_residual;
    return out;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid(100);
    for (int i = 0; i < 100; ++i) grid[i] = static_cast<double>(i + 1) / 100.0;
    return grid;
}

SmoothingFit exp_smoothing_fit(const TimeSeries& x, std::span<const double> alpha_grid) {
    const std::size_t n = x.size();
    if (n < 4) throw TooShortError("smoothing fit needs at least 4 values");
    if (alpha_grid.empty()) throw InvalidArgumentError("alpha grid is empty");
    for (double a : alpha_grid) {
        if (!(a > 0.0) || a > 1.0) {
            throw InvalidArgumentError("alpha " + std::to_string(a) + " outside (0, 1]");
        }
    }

    auto sse_of = [&](double alpha) {
        double level = x[0]; // x^_1 = x_1
        double sse = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            level = alpha * x[i - 1] + (1.0 - alpha) * level;
            const double e = x[i] - level;
            sse += e * e;
        }
        return sse;
    };

    double best_alpha = 0.0;
    double best_sse = 0.0;
    bool have = false;
    for (double a : alpha_grid) {
        const double sse = sse_of(a);
        if (!have || sse < best_sse || (sse == best_sse && a < best_alpha)) {
            best_alpha = a;
            best_sse = sse;
            have = true;
        }
    }

    std::vector<double> residuals;
    residuals.reserve(n - 1);
    {
        double level = x[0];
        for (std::size_t i = 1; i < n; ++i) {
            level = best_alpha * x[i - 1] + (1.0 - best_alpha) * level;
            residuals.push_back(x[i] - level);
        }
    }

    SmoothingFit fit;
    fit.alpha = best_alpha;
    fit.sse_per_point = best_sse / static_cast<double>(n - 1);
    if (sample_variance_of(residuals) > 0.0) {
        fit.residual_acf1 = autocorr_span(residuals, 1);
    }
    return fit;
}

std::vector<double> exp_smoothing_forecast(const TimeSeries& x, double alpha, std::size_t horizon) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw InvalidArgumentError("alpha outside (0, 1]");
    }
    if (horizon == 0) throw InvalidArgumentError("horizon must be at least 1");
    const std::size_t n = x.size();
    if (n < 2) throw TooShortError("forecast needs at least 2 values");
    double level = x[0];
    for (std::size_t i = 1; i <= n; ++i) {
        level = alpha * x[i - 1] + (1.0 - alpha) * level;
    }
    return std::vector<double>(horizon, level);
}

double complexity_ce(const TimeSeries& x) {
    if (x.size() < 2) throw TooShortError("complexity estimate needs at least 2 values");
    double ss = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double d = x[i + 1] - x[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double skewness(const TimeSeries& x) {
    if (x.size() < 2) throw TooShortError("skewness needs at least 2 values");
    const double m = mean_of(x.values());
    double m2 = 0.0, m3 = 0.0;
    for (double v : x.values()) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0) throw ConstantSeriesError("skewness of a constant series");
    return m3 / std::pow(m2, 1.5);
}

double kurtosis(const TimeSeries& x) {
    if (x.size() < 2) throw TooShortError("kurtosis needs at least 2 values");
    const double m = mean_of(x.values());
    double m2 = 0.0, m4 = 0.0;
    for (double v : x.values()) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m4 /= n;
    if (m2 == 0.0) throw ConstantSeriesError("kurtosis of a constant series");
    return m4 / (m2 * m2) - 3.0;
}

std::vector<FeatureSpec> standard_feature_set() {
    std::vector<FeatureSpec> specs;
    specs.push_back(make_spec("mean", "mean"));
    specs.push_back(make_spec("std", "std"));
    specs.push_back(make_spec("skewness", "skewness"));
    specs.push_back(make_spec("kurtosis", "kurtosis"));
    specs.push_back(make_spec("min", "min"));
    specs.push_back(make_spec("max", "max"));
    specs.push_back(make_spec("acf_1", "acf", {{"tau", 1.0}}));
    specs.push_back(make_spec("acf_2", "acf", {{"tau", 2.0}}));
    specs.push_back(make_spec("acf_3", "acf", {{"tau", 3.0}}));
    specs.push_back(make_spec("first_zero_acf", "first_zero_acf"));
    specs.push_back(make_spec("stat_av_n10", "stat_av_div", {{"divisor", 10.0}}));
    specs.push_back(make_spec("stat_av_n4", "stat_av_div", {{"divisor", 4.0}}));
    specs.push_back(make_spec("spectral_entropy", "spectral_entropy"));
    specs.push_back(make_spec("dominant_freq", "dominant_freq"));
    specs.push_back(make_spec("apen", "apen", {{"m", 2.0}, {"r_frac", 0.2}}));
    specs.push_back(make_spec("dfa_alpha", "dfa", {{"order", 1.0}}));
    specs.push_back(make_spec("dfa_alpha_quad", "dfa", {{"order", 2.0}}));
    specs.push_back(make_spec("smooth_alpha", "smooth_alpha"));
    specs.push_back(make_spec("smooth_sse", "smooth_sse"));
    specs.push_back(make_spec("smooth_resid_acf1", "smooth_resid_acf1"));
    specs.push_back(make_spec("complexity_ce", "ce"));
    specs.push_back(make_spec("length", "length"));
    return specs;
}

std::vector<FeatureSpec> moment_feature_set() {
    std::vector<FeatureSpec> specs;
    specs.push_back(make_spec("mean", "mean"));
    specs.push_back(make_spec("std", "std"));
    specs.push_back(make_spec("skewness", "skewness"));
    specs.push_back(make_spec("kurtosis", "kurtosis"));
    return specs;
}

std::vector<FeatureSpec> feature_set(const std::string& name) {
    if (name == "standard-22") return standard_feature_set();
    if (name == "moments") return moment_feature_set();
    throw InvalidArgumentError("unknown feature set '" + name +
                               "' (expected standard-22 or moments)");
}

double evaluate_feature(const FeatureSpec& spec, const TimeSeries& x) {
    const std::string& op = spec.op;
    if (op == "mean") return mean_of(x.values());
    if (op == "std") return sample_std_of(x.values());
    if (op == "skewness") return skewness(x);
    if (op == "kurtosis") return kurtosis(x);
    if (op == "min") return *std::min_element(x.values().begin(), x.values().end());
    if (op == "max") return *std::max_element(x.values().begin(), x.values().end());
    if (op == "acf") {
        const double tau = require_param(spec, "tau");
        if (tau < 0.0 || tau != std::floor(tau)) {
            throw InvalidArgumentError("acf lag must be a nonnegative integer");
        }
        return autocorrelation(x, static_cast<std::size_t>(tau));
    }
    if (op == "first_zero_acf") return static_cast<double>(first_zero_acf(x));
    if (op == "stat_av_div") {
        const double div = require_param(spec, "divisor");
        if (div < 1.0 || div != std::floor(div)) {
            throw InvalidArgumentError("stat_av divisor must be a positive integer");
        }
        const std::size_t w =
            std::max<std::size_t>(1, x.size() / static_cast<std::size_t>(div));
        return stat_av(x, w);
    }
    if (op == "spectral_entropy") return spectral_entropy(x);
    if (op == "dominant_freq") return static_cast<double>(dominant_frequency_bin(x));
    if (op == "apen") {
        const double m = require_param(spec, "m");
        const double r_frac = require_param(spec, "r_frac");
        if (m < 1.0 || m != std::floor(m)) {
            throw InvalidArgumentError("apen m must be a positive integer");
        }
        const double s = sample_std_of(x.values());
        if (s == 0.0) throw ConstantSeriesError("apen radius r_frac*std is zero");
        return approximate_entropy(x, static_cast<std::size_t>(m), r_frac * s);
    }
    if (op == "dfa") {
        const double order = require_param(spec, "order");
        const int o = static_cast<int>(order);
        return dfa_alpha(x, o, default_dfa_scales(x.size(), o)).alpha;
    }
    if (op == "smooth_alpha" || op == "smooth_sse" || op == "smooth_resid_acf1") {
        const auto grid = default_alpha_grid();
        const SmoothingFit fit = exp_smoothing_fit(x, grid);
        if (op == "smooth_alpha") return fit.alpha;
        if (op == "smooth_sse") return fit.sse_per_point;
        if (!fit.residual_acf1.has_value()) {
            throw ConstantSeriesError("smoothing residuals are constant");
        }
        return *fit.residual_acf1;
    }
    if (op == "ce") return complexity_ce(x);
    if (op == "length") return static_cast<double>(x.size());
    throw InvalidArgumentError("unknown feature op '" + op + "'");
}

FeatureMatrix extract_features(const LabeledDataset& ds, const std::vector<FeatureSpec>& specs,
                               std::vector<ExtractionIssue>* issues) {
    if (specs.empty()) throw InvalidArgumentError("no feature specs given");
    {
        std::vector<std::string> names;
        names.reserve(specs.size());
        for (const auto& s : specs) names.push_back(s.name);
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
            throw InvalidArgumentError("duplicate feature name in specs");
        }
    }

    const std::size_t rows = ds.size();
    const std::size_t cols = specs.size();
    std::vector<Cell> cells(rows * cols);
    std::vector<std::string> reasons(rows * cols);

    parallel_for(rows * cols, [&](std::size_t flat) {
        const std::size_t i = flat / cols;
        const std::size_t j = flat % cols;
        try {
            cells[flat] = evaluate_feature(specs[j], ds.series(i));
        } catch (const Error& e) {
            cells[flat] = std::nullopt;
            reasons[flat] = e.what();
        }
    });

    if (issues != nullptr) {
        for (std::size_t flat = 0; flat < cells.size(); ++flat) {
            if (!reasons[flat].empty()) {
                issues->push_back(ExtractionIssue{flat / cols, flat % cols, reasons[flat]});
            }
        }
    }

    std::vector<std::string> row_ids;
    row_ids.reserve(rows);
    for (const auto& s : ds.all_series()) row_ids.push_back(s.id());
    std::vector<std::string> col_names;
    col_names.reserve(cols);
    for (const auto& s : specs) col_names.push_back(s.name);
    return FeatureMatrix(std::move(row_ids), std::move(col_names), std::move(cells));
}

} // namespace tskit
