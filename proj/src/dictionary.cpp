#include "tskit/dictionary.hpp"

#include <cmath>
#include <set>

#include "tskit/parallel.hpp"

namespace tskit {

namespace {

constexpr double kFlatStd = 1e-8;

// Acklam's rational approximation to the standard normal quantile, then one
// Halley step against erfc. Good to full double precision on (0, 1).
double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p == 0.5) return 0.0;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

void validate(const SymbolicParams& params) {
    if (params.alphabet < 2 || params.alphabet > 10) {
        throw InvalidArgumentError("alphabet size must be in [2, 10], got " +
                                   std::to_string(params.alphabet));
    }
    if (params.word_length < 1) throw InvalidArgumentError("word length must be at least 1");
    if (params.window < 2) throw InvalidArgumentError("window must be at least 2");
    if (params.word_length > params.window) {
        throw InvalidArgumentError("word length " + std::to_string(params.word_length) +
                                   " exceeds window " + std::to_string(params.window));
    }
    if (params.window % params.word_length != 0) {
        throw IndivisibleError("word length " + std::to_string(params.word_length) +
                               " does not divide window " + std::to_string(params.window));
    }
}

} // namespace

std::vector<double> gaussian_breakpoints(std::size_t alphabet) {
    if (alphabet < 2 || alphabet > 10) {
        throw InvalidArgumentError("alphabet size must be in [2, 10], got " +
                                   std::to_string(alphabet));
    }
    std::vector<double> bp(alphabet - 1);
    // Mirror the lower half so the set is exactly symmetric about zero.
    for (std::size_t i = 0; i < bp.size(); ++i) {
        const std::size_t j = bp.size() - 1 - i;
        if (i < j) {
            bp[i] = inverse_normal_cdf(static_cast<double>(i + 1) /
                                       static_cast<double>(alphabet));
            bp[j] = -bp[i];
        } else if (i == j) {
            bp[i] = 0.0;
        }
    }
    return bp;
}

std::string discretize_window(std::span<const double> window, const SymbolicParams& params) {
    validate(params);
    if (window.size() != params.window) {
        throw LengthMismatchError("window has " + std::to_string(window.size()) +
                                  " values, params say " + std::to_string(params.window));
    }
    const std::size_t l = params.word_length;
    const char middle = static_cast<char>('a' + (params.alphabet - 1) / 2);

    const double m = mean_of(window);
    const double sd = sample_std_of(window);
    if (sd < kFlatStd) return std::string(l, middle);

    const std::vector<double> bp = gaussian_breakpoints(params.alphabet);
    const std::size_t seg_len = params.window / l;
    std::string word(l, 'a');
    for (std::size_t s = 0; s < l; ++s) {
        double sum = 0.0;
        for (std::size_t j = 0; j < seg_len; ++j) sum += (window[s * seg_len + j] - m) / sd;
        const double seg = sum / static_cast<double>(seg_len);
        std::size_t symbol = params.alphabet - 1;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            if (seg <= bp[i]) {
                symbol = i;
                break;
            }
        }
        word[s] = static_cast<char>('a' + symbol);
    }
    return word;
}

PatternHistogram bag_of_patterns(const TimeSeries& x, const SymbolicParams& params,
                                 bool numerosity_reduction) {
    validate(params);
    if (x.size() < params.window) {
        throw TooShortError("series of length " + std::to_string(x.size()) +
                            " is shorter than window " + std::to_string(params.window));
    }
    const std::size_t n_windows = x.size() - params.window + 1;
    std::vector<std::string> words(n_windows);
    parallel_for(n_windows, [&](std::size_t offset) {
        words[offset] = discretize_window(x.span().subspan(offset, params.window), params);
    });

    PatternHistogram hist;
    hist.params = params;
    hist.total_windows = n_windows;
    for (std::size_t i = 0; i < n_windows; ++i) {
        if (numerosity_reduction && i > 0 && words[i] == words[i - 1]) continue;
        ++hist.counts[words[i]];
    }
    return hist;
}

double histogram_distance(const PatternHistogram& a, const PatternHistogram& b) {
    if (a.params.window != b.params.window || a.params.word_length != b.params.word_length ||
        a.params.alphabet != b.params.alphabet) {
        throw ParamMismatchError("histograms built with different symbolic parameters");
    }
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (const auto& [word, c] : a.counts) sum_a += static_cast<double>(c);
    for (const auto& [word, c] : b.counts) sum_b += static_cast<double>(c);

    std::set<std::string> keys;
    for (const auto& [word, c] : a.counts) keys.insert(word);
    for (const auto& [word, c] : b.counts) keys.insert(word);

    double ss = 0.0;
    for (const auto& word : keys) {
        const auto ia = a.counts.find(word);
        const auto ib = b.counts.find(word);
        const double fa =
            (ia == a.counts.end() || sum_a == 0.0) ? 0.0 : static_cast<double>(ia->second) / sum_a;
        const double fb =
            (ib == b.counts.end() || sum_b == 0.0) ? 0.0 : static_cast<double>(ib->second) / sum_b;
        ss += (fa - fb) * (fa - fb);
    }
    return std::sqrt(ss);
}

} // namespace tskit
