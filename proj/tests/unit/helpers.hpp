#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "tskit/rng.hpp"
#include "tskit/series.hpp"

namespace testutil {

inline tskit::TimeSeries make_series(std::vector<double> values, std::string id = "x",
                                     double dt = 1.0) {
    return tskit::TimeSeries(std::move(id), std::move(values), dt);
}

inline std::vector<double> gaussian_values(std::size_t n, std::uint64_t seed,
                                           double mean = 0.0, double sigma = 1.0) {
    tskit::Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = mean + sigma * rng.normal();
    return out;
}

inline std::vector<double> uniform_values(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                          double hi = 1.0) {
    tskit::Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = lo + (hi - lo) * rng.uniform01();
    return out;
}

/// Fresh directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        const auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            path_ = base / (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(i));
            if (!std::filesystem::exists(path_)) break;
        }
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace testutil
