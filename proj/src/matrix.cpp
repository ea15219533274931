#include "tskit/matrix.hpp"

#include <unordered_set>

namespace tskit {

namespace {

void require_unique(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) {
            throw InvalidArgumentError(std::string("duplicate ") + what + " '" + n + "'");
        }
    }
}

} // namespace

FeatureVector::FeatureVector(std::vector<std::string> names, std::vector<Cell> values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (names_.size() != values_.size()) {
        throw LengthMismatchError("feature vector has " + std::to_string(names_.size()) +
                                  " names but " + std::to_string(values_.size()) + " values");
    }
    require_unique(names_, "feature name");
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_ids, std::vector<std::string> col_names,
                             std::vector<Cell> cells)
    : row_ids_(std::move(row_ids)), col_names_(std::move(col_names)), cells_(std::move(cells)) {
    if (cells_.size() != row_ids_.size() * col_names_.size()) {
        throw LengthMismatchError("matrix of " + std::to_string(row_ids_.size()) + "x" +
                                  std::to_string(col_names_.size()) + " needs " +
                                  std::to_string(row_ids_.size() * col_names_.size()) +
                                  " cells, got " + std::to_string(cells_.size()));
    }
    require_unique(row_ids_, "row id");
    require_unique(col_names_, "column name");
}

FeatureVector FeatureMatrix::row(std::size_t i) const {
    if (i >= rows()) {
        throw InvalidArgumentError("row " + std::to_string(i) + " out of range");
    }
    const std::size_t c = cols();
    return FeatureVector(col_names_,
                         std::vector<Cell>(cells_.begin() + static_cast<std::ptrdiff_t>(i * c),
                                           cells_.begin() + static_cast<std::ptrdiff_t>((i + 1) * c)));
}

std::vector<Cell> FeatureMatrix::column(std::size_t j) const {
    if (j >= cols()) {
        throw InvalidArgumentError("column " + std::to_string(j) + " out of range");
    }
    std::vector<Cell> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, j);
    return out;
}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < col_names_.size(); ++j) {
        if (col_names_[j] == name) return j;
    }
    throw NameMismatchError("no column named '" + name + "'");
}

} // namespace tskit
