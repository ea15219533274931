#include "tskit/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unordered_set>

namespace tskit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

// No quoting: cells must not contain commas or newlines (enforced on save).
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
            cells.push_back(trim(line.substr(begin)));
            return cells;
        }
        cells.push_back(trim(line.substr(begin, comma - begin)));
        begin = comma + 1;
    }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open '" + path.string() + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(const std::string& line) { return trim(line).empty(); }

double parse_value(const std::string& cell, std::size_t row, std::size_t col) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + cell.size()) {
        throw FormatError(row, col, "not a number: '" + cell + "'");
    }
    if (!std::isfinite(v)) {
        throw FormatError(row, col, "non-finite value '" + cell + "'");
    }
    return v;
}

void check_writable_field(const std::string& field, const char* what) {
    if (field.find_first_of(",\n\r\"") != std::string::npos) {
        throw InvalidArgumentError(std::string(what) + " '" + field +
                                   "' contains a character the CSV format cannot carry");
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
    return out;
}

LabeledDataset load_wide(const std::vector<std::string>& lines) {
    const auto header = split_csv(lines[0]);
    if (header.size() < 2 || header[0] != "id" || header[1] != "label") {
        throw FormatError(1, 1, "wide-csv header must start with 'id,label'");
    }
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    std::unordered_set<std::string> seen_ids;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (blank(lines[li])) continue;
        const std::size_t row = li + 1;
        const auto cells = split_csv(lines[li]);
        if (cells.size() > header.size()) {
            throw FormatError(row, header.size() + 1, "more cells than header columns");
        }
        if (cells.size() < 2 || cells[0].empty()) {
            throw FormatError(row, 1, "empty id");
        }
        if (!seen_ids.insert(cells[0]).second) {
            throw FormatError(row, 1, "duplicate id '" + cells[0] + "'");
        }
        // Trailing empty cells shorten the series; a gap before a value is malformed.
        std::size_t last = cells.size();
        while (last > 2 && cells[last - 1].empty()) --last;
        std::vector<double> values;
        values.reserve(last - 2);
        for (std::size_t c = 2; c < last; ++c) {
            if (cells[c].empty()) {
                throw FormatError(row, c + 1, "empty cell followed by values");
            }
            values.push_back(parse_value(cells[c], row, c + 1));
        }
        if (values.empty()) {
            throw FormatError(row, 3, "series has no values");
        }
        series.emplace_back(cells[0], std::move(values));
        labels.push_back(cells[1]);
    }
    if (series.empty()) throw EmptyDatasetError("no data rows");
    return LabeledDataset(std::move(series), std::move(labels));
}

LabeledDataset load_long(const std::vector<std::string>& lines) {
    const auto header = split_csv(lines[0]);
    if (header.size() != 4 || header[0] != "id" || header[1] != "label" || header[2] != "t" ||
        header[3] != "value") {
        throw FormatError(1, 1, "long-csv header must be 'id,label,t,value'");
    }

    struct Point {
        double t;
        double value;
        std::size_t row;
    };

    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    std::unordered_set<std::string> closed_ids;
    std::string current_id;
    std::string current_label;
    std::vector<Point> points;

    auto flush = [&] {
        if (points.empty()) return;
        double dt = 1.0;
        if (points.size() > 1) {
            dt = points[1].t - points[0].t;
            for (std::size_t i = 1; i < points.size(); ++i) {
                const double gap = points[i].t - points[i - 1].t;
                if (gap <= 0.0) {
                    throw FormatError(points[i].row, 3, "t must be strictly increasing within id '" +
                                                            current_id + "'");
                }
                if (std::abs(gap - dt) > 1e-6 * std::abs(dt)) {
                    throw FormatError(points[i].row, 3, "non-uniform t spacing within id '" +
                                                            current_id + "'");
                }
            }
        }
        std::vector<double> values;
        values.reserve(points.size());
        for (const auto& p : points) values.push_back(p.value);
        series.emplace_back(current_id, std::move(values), dt);
        labels.push_back(current_label);
        closed_ids.insert(current_id);
        points.clear();
    };

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (blank(lines[li])) continue;
        const std::size_t row = li + 1;
        const auto cells = split_csv(lines[li]);
        if (cells.size() != 4) {
            throw FormatError(row, 1, "expected 4 cells, got " + std::to_string(cells.size()));
        }
        if (cells[0].empty()) throw FormatError(row, 1, "empty id");
        if (cells[0] != current_id) {
            flush();
            if (closed_ids.count(cells[0]) != 0) {
                throw FormatError(row, 1, "rows for id '" + cells[0] + "' are not contiguous");
            }
            current_id = cells[0];
            current_label = cells[1];
        }
        if (cells[1] != current_label) {
            throw FormatError(row, 2, "label changes within id '" + current_id + "'");
        }
        points.push_back(Point{parse_value(cells[2], row, 3), parse_value(cells[3], row, 4), row});
    }
    flush();
    if (series.empty()) throw EmptyDatasetError("no data rows");
    return LabeledDataset(std::move(series), std::move(labels));
}

} // namespace

Format parse_format(const std::string& name) {
    if (name == "wide-csv") return Format::wide_csv;
    if (name == "long-csv") return Format::long_csv;
    throw InvalidArgumentError("unknown format '" + name + "' (expected wide-csv or long-csv)");
}

std::string format_name(Format f) {
    return f == Format::wide_csv ? "wide-csv" : "long-csv";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LabeledDataset load_dataset(const std::filesystem::path& path, Format format) {
    const auto lines = read_lines(path);
    if (lines.empty() || (lines.size() == 1 && blank(lines[0]))) {
        throw EmptyDatasetError("'" + path.string() + "' is empty");
    }
    return format == Format::wide_csv ? load_wide(lines) : load_long(lines);
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path, Format format) {
    auto out = open_out(path);
    if (format == Format::wide_csv) {
        std::size_t max_len = 0;
        for (const auto& s : ds.all_series()) max_len = std::max(max_len, s.size());
        out << "id,label";
        for (std::size_t j = 1; j <= max_len; ++j) out << ",v" << j;
        out << '\n';
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto& s = ds.series(i);
            check_writable_field(s.id(), "id");
            check_writable_field(ds.label(i), "label");
            out << s.id() << ',' << ds.label(i);
            for (std::size_t j = 0; j < s.size(); ++j) out << ',' << format_double(s[j]);
            for (std::size_t j = s.size(); j < max_len; ++j) out << ',';
            out << '\n';
        }
    } else {
        out << "id,label,t,value\n";
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto& s = ds.series(i);
            check_writable_field(s.id(), "id");
            check_writable_field(ds.label(i), "label");
            for (std::size_t j = 0; j < s.size(); ++j) {
                out << s.id() << ',' << ds.label(i) << ','
                    << format_double(static_cast<double>(j) * s.dt()) << ','
                    << format_double(s[j]) << '\n';
            }
        }
    }
    if (!out) throw IOError("failed writing '" + path.string() + "'");
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || (lines.size() == 1 && blank(lines[0]))) {
        throw EmptyDatasetError("'" + path.string() + "' is empty");
    }
    const auto header = split_csv(lines[0]);
    if (header.empty() || header[0] != "id") {
        throw FormatError(1, 1, "matrix header must start with 'id'");
    }
    std::vector<std::string> col_names(header.begin() + 1, header.end());
    for (std::size_t j = 0; j < col_names.size(); ++j) {
        if (col_names[j].empty()) throw FormatError(1, j + 2, "empty column name");
    }
    std::vector<std::string> row_ids;
    std::vector<Cell> cells;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (blank(lines[li])) continue;
        const std::size_t row = li + 1;
        const auto parts = split_csv(lines[li]);
        if (parts.size() != header.size()) {
            throw FormatError(row, 1, "expected " + std::to_string(header.size()) +
                                          " cells, got " + std::to_string(parts.size()));
        }
        if (parts[0].empty()) throw FormatError(row, 1, "empty id");
        row_ids.push_back(parts[0]);
        for (std::size_t c = 1; c < parts.size(); ++c) {
            if (parts[c].empty()) {
                cells.emplace_back(std::nullopt);
            } else {
                cells.emplace_back(parse_value(parts[c], row, c + 1));
            }
        }
    }
    if (row_ids.empty()) throw EmptyDatasetError("no data rows");
    return FeatureMatrix(std::move(row_ids), std::move(col_names), std::move(cells));
}

void save_feature_matrix(const FeatureMatrix& fm, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "id";
    for (const auto& name : fm.col_names()) {
        check_writable_field(name, "column name");
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < fm.rows(); ++i) {
        check_writable_field(fm.row_ids()[i], "id");
        out << fm.row_ids()[i];
        for (std::size_t j = 0; j < fm.cols(); ++j) {
            out << ',';
            if (const auto& cell = fm.at(i, j); cell.has_value()) out << format_double(*cell);
        }
        out << '\n';
    }
    if (!out) throw IOError("failed writing '" + path.string() + "'");
}

void save_distance_matrix(const std::vector<std::string>& ids,
                          const std::vector<std::vector<double>>& matrix,
                          const std::filesystem::path& path) {
    if (matrix.size() != ids.size()) {
        throw LengthMismatchError("matrix has " + std::to_string(matrix.size()) + " rows for " +
                                  std::to_string(ids.size()) + " ids");
    }
    auto out = open_out(path);
    out << "id";
    for (const auto& id : ids) {
        check_writable_field(id, "id");
        out << ',' << id;
    }
    out << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (matrix[i].size() != ids.size()) {
            throw LengthMismatchError("row " + std::to_string(i) + " has " +
                                      std::to_string(matrix[i].size()) + " entries for " +
                                      std::to_string(ids.size()) + " ids");
        }
        out << ids[i];
        for (double v : matrix[i]) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw IOError("failed writing '" + path.string() + "'");
}

} // namespace tskit
