// Copyright 2026 The robustats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "robustats/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace robustats {

enum class ColumnKind { numeric, text };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    /// Numeric values; NaN where the cell is missing. All NaN for text columns.
    std::vector<double> values;
    /// Raw cell text, kept for text columns only.
    std::vector<std::string> text;
    /// 1 where the cell is missing.
    std::vector<std::uint8_t> na;

    std::size_t size() const { return na.size(); }
    bool missing(std::size_t i) const { return na[i] != 0; }

    static Column numeric(std::string name, std::vector<double> values);
    static Column textual(std::string name, std::vector<std::string> cells,
                          std::vector<std::uint8_t> na);
};

/// Named columns with a missing-value mask and stable row identifiers.
class Frame {
public:
    Frame() = default;
    explicit Frame(std::vector<Column> columns, std::vector<std::int64_t> row_ids = {},
                   std::vector<std::string> row_labels = {});

    static Frame from_matrix(const Matrix& X, std::vector<std::string> names = {},
                             std::vector<std::int64_t> row_ids = {});

    Index n_rows() const { return static_cast<Index>(row_ids_.size()); }
    Index n_cols() const { return static_cast<Index>(columns_.size()); }

    const std::vector<Column>& columns() const { return columns_; }
    const Column& column(Index j) const { return columns_.at(static_cast<std::size_t>(j)); }
    const Column& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    Index column_index(const std::string& name) const;
    std::vector<std::string> column_names() const;
    std::vector<std::string> numeric_column_names() const;

    const std::vector<std::int64_t>& row_ids() const { return row_ids_; }
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    /// Row label if present, otherwise the row id as text.
    std::string row_name(Index i) const;
    /// Position of a row id, or -1.
    Index row_position(std::int64_t id) const;

    /// Numeric matrix of the named columns (all numeric columns if empty); NaN = missing.
    Matrix numeric_matrix(const std::vector<std::string>& names = {}) const;

    Frame select_columns(const std::vector<std::string>& names) const;
    Frame drop_columns(const std::vector<std::string>& names) const;
    Frame select_rows(const std::vector<Index>& positions) const;
    /// Rows with no missing cell in the named columns (all columns if empty).
    Frame drop_missing_rows(const std::vector<std::string>& names = {}) const;

    /// Adds or replaces a numeric column.
    void set_numeric_column(const std::string& name, std::vector<double> values);

private:
    void validate() const;

    std::vector<Column> columns_;
    std::vector<std::int64_t> row_ids_;
    std::vector<std::string> row_labels_;
};

struct CsvOptions {
    char delimiter = ',';
    std::vector<std::string> na_markers = {"", "NA", "NaN"};
    bool header = true;
    /// Column whose text becomes the row labels and is removed from the frame.
    std::string label_column;
    /// Integer column that becomes the row ids and is removed from the frame; ignored when absent.
    std::string id_column;
};

Frame read_csv(const std::string& path, const CsvOptions& options = {});
Frame parse_csv(const std::string& content, const CsvOptions& options = {});
/// Optional leading "row_id" and "row_label" columns.
void write_csv(const Frame& frame, const std::string& path, bool include_row_ids = false,
               bool include_row_labels = false);
std::string format_csv(const Frame& frame, bool include_row_ids = false, bool include_row_labels = false);
/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

struct DatasetRecord {
    Frame data;
    std::vector<std::string> feature_names;
    std::string description;
    std::string source_path;
};

/// Directory holding the bundled assets: $ROBUSTATS_DATA_DIR or the build-time default.
std::string data_directory();
std::vector<std::string> dataset_names();
/// Loads a bundled dataset after verifying its SHA-256 against the manifest.
DatasetRecord load_dataset(const std::string& name);
std::string sha256_file(const std::string& path);

}  // namespace robustats
