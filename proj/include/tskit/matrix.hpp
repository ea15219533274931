#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tskit/errors.hpp"

namespace tskit {

/// One cell of a feature representation. An empty optional is the MISSING
/// marker: the feature raised for that series. It is never coerced to a number
/// outside the learn module's documented imputation rule.
using Cell = std::optional<double>;

class FeatureVector {
public:
    FeatureVector(std::vector<std::string> names, std::vector<Cell> values);

    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<Cell>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::vector<Cell> values_;
};

/// Rectangular series x features table. Row ids and column names are unique.
class FeatureMatrix {
public:
    FeatureMatrix(std::vector<std::string> row_ids, std::vector<std::string> col_names,
                  std::vector<Cell> cells); // row-major, rows*cols cells

    std::size_t rows() const noexcept { return row_ids_.size(); }
    std::size_t cols() const noexcept { return col_names_.size(); }
    const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
    const std::vector<std::string>& col_names() const noexcept { return col_names_; }

    const Cell& at(std::size_t row, std::size_t col) const {
        return cells_[row * col_names_.size() + col];
    }

    FeatureVector row(std::size_t i) const;
    std::vector<Cell> column(std::size_t j) const;
    /// Index of a named column, or throws NameMismatchError.
    std::size_t column_index(const std::string& name) const;

private:
    std::vector<std::string> row_ids_;
    std::vector<std::string> col_names_;
    std::vector<Cell> cells_;
};

} // namespace tskit
