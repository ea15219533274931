#pragma once

#include <filesystem>
#include <string>

#include "tskit/matrix.hpp"
#include "tskit/series.hpp"

namespace tskit {

enum class Format { wide_csv, long_csv };

Format parse_format(const std::string& name);
std::string format_name(Format f);

/// wide-csv: header `id,label,v1,...`, one series per row, ragged rows allowed.
/// long-csv: header `id,label,t,value`, rows grouped by id and sorted by t;
/// t must be uniformly spaced per id within relative tolerance 1e-6.
LabeledDataset load_dataset(const std::filesystem::path& path, Format format);
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path, Format format);

FeatureMatrix load_feature_matrix(const std::filesystem::path& path);
void save_feature_matrix(const FeatureMatrix& fm, const std::filesystem::path& path);

void save_distance_matrix(const std::vector<std::string>& ids,
                          const std::vector<std::vector<double>>& matrix,
                          const std::filesystem::path& path);

/// 17 significant digits; round-trips IEEE doubles exactly.
std::string format_double(double v);

} // namespace tskit
