#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tskit/matrix.hpp"
#include "tskit/series.hpp"

namespace tskit {

// ---------------------------------------------------------------------------
// Whole-series features. Each is a pure function of one series; conventions
// for every feature are documented in docs/feature_catalog.md.
// ---------------------------------------------------------------------------

/// Unbiased sample variance, 1/(N-1) normalization.
double sample_variance(const TimeSeries& x);

/// Std of the means of the m = floor(N/w) non-overlapping length-w windows
/// (trailing partial window discarded), divided by the full-series std.
double stat_av(const TimeSeries& x, std::size_t window);

/// Autocorrelation with the literal 1/(s^2 (N-tau)) prefactor, so
/// C(0) = (N-1)/N rather than 1. Valid lags: 0 <= tau <= N-2.
double autocorrelation(const TimeSeries& x, std::size_t tau);

/// Smallest tau >= 1 with C(tau) <= 0; saturates at N-2 when the ACF never
/// crosses zero.
std::size_t first_zero_acf(const TimeSeries& x);

struct Spectrum {
    std::vector<std::complex<double>> coefficients; // k = 0..N-1
    std::vector<double> frequencies;                // f_k = k / (N dt)
};

/// Discrete Fourier transform, coefficients (1/sqrt(N)) sum_n x_n e^{2 pi i k n / N}
/// with n running 1..N. Satisfies Parseval under this normalization.
Spectrum dft(const TimeSeries& x);

/// Shannon entropy of the normalized power spectrum over bins 1..floor(N/2)
/// (zero-frequency bin excluded), divided by log(bin count). In [0, 1].
double spectral_entropy(const TimeSeries& x);

/// Index k in 1..floor(N/2) of the largest power bin (smallest k on ties).
std::size_t dominant_frequency_bin(const TimeSeries& x);

/// Approximate entropy with Chebyshev distance, self-matches included, and
/// both template averages taken over the N-m vectors that have a successor,
/// so a perfectly repeating series scores exactly zero. r is an absolute
/// radius; the CLI convention is r = 0.2 * std(x).
double approximate_entropy(const TimeSeries& x, std::size_t m, double r);

struct DfaResult {
    double alpha;                      // slope of log F(s) vs log s
    std::vector<std::size_t> scales;   // scales retained in the fit
    std::vector<double> fluctuations;  // F(s) per retained scale
    double fit_residual;               // RMS residual of the log-log fit
    std::vector<std::size_t> dropped_scales; // scales with F(s) = 0
};

/// Detrended fluctuation analysis on the integrated series, non-overlapping
/// windows with the tail discarded, per-window least-squares polynomial
/// detrending of the given order (1 or 2).
DfaResult dfa_alpha(const TimeSeries& x, int detrend_order, std::vector<std::size_t> scales);

/// ~20 log-spaced integer scales in [max(8, order + 2), N/4].
std::vector<std::size_t> default_dfa_scales(std::size_t n, int detrend_order);

struct SmoothingFit {
    double alpha;                        // grid argmin of SSE (smallest on ties)
    double sse_per_point;                // sum e_t^2 / (N - 1), t = 2..N
    std::optional<double> residual_acf1; // MISSING when residuals are constant
};

/// Simple exponential smoothing via the recursion x^_{t+1} = a x_t + (1-a) x^_t
/// with x^_1 = x_1, fitted by grid search over alpha.
SmoothingFit exp_smoothing_fit(const TimeSeries& x, std::span<const double> alpha_grid);

/// 0.01, 0.02, ..., 1.00.
std::vector<double> default_alpha_grid();

/// Flat forecast: every step equals the final smoothed level.
std::vector<double> exp_smoothing_forecast(const TimeSeries& x, double alpha, std::size_t horizon);

/// Length of the outstretched line through successive points:
/// sqrt(sum (x_{i+1} - x_i)^2).
double complexity_ce(const TimeSeries& x);

double skewness(const TimeSeries& x);
/// Excess kurtosis (normal -> 0).
double kurtosis(const TimeSeries& x);

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// A named, parameter-bound feature. The name is the column identity: two
/// specs with equal names must be the same operation and binding.
struct FeatureSpec {
    std::string name;
    std::string op;
    std::map<std::string, double> params;
};

/// The default CLI set ("standard-22"): one representative per methodological
/// family. 22 features.
std::vector<FeatureSpec> standard_feature_set();

/// Distribution-moment features only: mean, std, skewness, kurtosis.
std::vector<FeatureSpec> moment_feature_set();

/// Lookup by set name ("standard-22", "moments").
std::vector<FeatureSpec> feature_set(const std::string& name);

double evaluate_feature(const FeatureSpec& spec, const TimeSeries& x);

struct ExtractionIssue {
    std::size_t row;
    std::size_t col;
    std::string reason;
};

/// Row per series, column per spec. A feature error becomes MISSING in that
/// cell; the reason is appended to `issues` when given. Deterministic and
/// schedule-independent.
FeatureMatrix extract_features(const LabeledDataset& ds, const std::vector<FeatureSpec>& specs,
                               std::vector<ExtractionIssue>* issues = nullptr);

} // namespace tskit
