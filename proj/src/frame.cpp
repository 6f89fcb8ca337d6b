// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace robustats {

Column Column::numeric(std::string name, std::vector<double> values) {
    Column c;
    c.name = std::move(name);
    c.kind = ColumnKind::numeric;
    c.na.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) c.na[i] = std::isnan(values[i]) ? 1 : 0;
    c.values = std::move(values);
    return c;
}

Column Column::textual(std::string name, std::vector<std::string> cells,
                       std::vector<std::uint8_t> na) {
    Column c;
    c.name = std::move(name);
    c.kind = ColumnKind::text;
    c.values.assign(cells.size(), std::numeric_limits<double>::quiet_NaN());
    c.text = std::move(cells);
    c.na = std::move(na);
    return c;
}

Frame::Frame(std::vector<Column> columns, std::vector<std::int64_t> row_ids,
             std::vector<std::string> row_labels)
    : columns_(std::move(columns)), row_ids_(std::move(row_ids)),
      row_labels_(std::move(row_labels)) {
    const std::size_t n = columns_.empty() ? row_ids_.size() : columns_.front().size();
    if (row_ids_.empty() && n > 0) {
        row_ids_.resize(n);
        std::iota(row_ids_.begin(), row_ids_.end(), std::int64_t{0});
    }
    validate();
}

void Frame::validate() const {
    const std::size_t n = row_ids_.size();
    std::unordered_set<std::string> names;
    for (const auto& c : columns_) {
        if (c.size() != n || c.values.size() != n) {
            throw InvalidArgument("column '" + c.name + "' has the wrong length");
        }
        if (c.kind == ColumnKind::text && c.text.size() != n) {
            throw InvalidArgument("column '" + c.name + "' has the wrong length");
        }
        if (!names.insert(c.name).second) throw InvalidArgument("duplicate column name: " + c.name);
    }
    std::unordered_set<std::int64_t> ids(row_ids_.begin(), row_ids_.end());
    if (ids.size() != n) throw InvalidArgument("row ids are not unique");
    if (!row_labels_.empty() && row_labels_.size() != n) {
        throw InvalidArgument("row labels have the wrong length");
    }
}

Frame Frame::from_matrix(const Matrix& X, std::vector<std::string> names,
                         std::vector<std::int64_t> row_ids) {
    if (names.empty()) {
        for (Index j = 0; j < X.cols(); ++j) names.push_back("c" + std::to_string(j));
    }
    if (static_cast<Index>(names.size()) != X.cols()) throw InvalidArgument("name count mismatch");
    std::vector<Column> cols;
    for (Index j = 0; j < X.cols(); ++j) {
        std::vector<double> v(X.col(j).data(), X.col(j).data() + X.rows());
        cols.push_back(Column::numeric(names[static_cast<std::size_t>(j)], std::move(v)));
    }
    if (row_ids.empty()) {
        row_ids.resize(static_cast<std::size_t>(X.rows()));
        std::iota(row_ids.begin(), row_ids.end(), std::int64_t{0});
    }
    return Frame(std::move(cols), std::move(row_ids));
}

const Column& Frame::column(const std::string& name) const {
    return columns_.at(static_cast<std::size_t>(column_index(name)));
}

bool Frame::has_column(const std::string& name) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const Column& c) { return c.name == name; });
}

Index Frame::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].name == name) return static_cast<Index>(j);
    }
    throw InvalidArgument("unknown column: " + name);
}

std::vector<std::string> Frame::column_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
}

std::vector<std::string> Frame::numeric_column_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) {
        if (c.kind == ColumnKind::numeric) out.push_back(c.name);
    }
    return out;
}

std::string Frame::row_name(Index i) const {
    if (!row_labels_.empty()) return row_labels_.at(static_cast<std::size_t>(i));
    return std::to_string(row_ids_.at(static_cast<std::size_t>(i)));
}

Index Frame::row_position(std::int64_t id) const {
    const auto it = std::find(row_ids_.begin(), row_ids_.end(), id);
    return it == row_ids_.end() ? -1 : static_cast<Index>(it - row_ids_.begin());
}

Matrix Frame::numeric_matrix(const std::vector<std::string>& names) const {
    const std::vector<std::string> use = names.empty() ? numeric_column_names() : names;
    Matrix X(n_rows(), static_cast<Index>(use.size()));
    for (std::size_t j = 0; j < use.size(); ++j) {
        const Column& c = column(use[j]);
        if (c.kind != ColumnKind::numeric) throw InvalidArgument("column '" + c.name + "' is not numeric");
        for (Index i = 0; i < n_rows(); ++i) X(i, static_cast<Index>(j)) = c.values[static_cast<std::size_t>(i)];
    }
    return X;
}

Frame Frame::select_columns(const std::vector<std::string>& names) const {
    std::vector<Column> cols;
    for (const auto& name : names) cols.push_back(column(name));
    return Frame(std::move(cols), row_ids_, row_labels_);
}

Frame Frame::drop_columns(const std::vector<std::string>& names) const {
    std::vector<Column> cols;
    for (const auto& c : columns_) {
        if (std::find(names.begin(), names.end(), c.name) == names.end()) cols.push_back(c);
    }
    return Frame(std::move(cols), row_ids_, row_labels_);
}

Frame Frame::select_rows(const std::vector<Index>& positions) const {
    std::vector<Column> cols;
    for (const auto& c : columns_) {
        Column out;
        out.name = c.name;
        out.kind = c.kind;
        for (Index i : positions) {
            const auto k = static_cast<std::size_t>(i);
            out.values.push_back(c.values.at(k));
            out.na.push_back(c.na.at(k));
            if (c.kind == ColumnKind::text) out.text.push_back(c.text.at(k));
        }
        cols.push_back(std::move(out));
    }
    std::vector<std::int64_t> ids;
    std::vector<std::string> labels;
    for (Index i : positions) {
        ids.push_back(row_ids_.at(static_cast<std::size_t>(i)));
        if (!row_labels_.empty()) labels.push_back(row_labels_.at(static_cast<std::size_t>(i)));
    }
    return Frame(std::move(cols), std::move(ids), std::move(labels));
}

Frame Frame::drop_missing_rows(const std::vector<std::string>& names) const {
    const std::vector<std::string> use = names.empty() ? column_names() : names;
    std::vector<Index> keep;
    for (Index i = 0; i < n_rows(); ++i) {
        bool ok = true;
        for (const auto& name : use) ok = ok && !column(name).missing(static_cast<std::size_t>(i));
        if (ok) keep.push_back(i);
    }
    return select_rows(keep);
}

void Frame::set_numeric_column(const std::string& name, std::vector<double> values) {
    if (static_cast<Index>(values.size()) != n_rows()) throw InvalidArgument("column length mismatch");
    Column c = Column::numeric(name, std::move(values));
    for (auto& existing : columns_) {
        if (existing.name == name) {
            existing = std::move(c);
            return;
        }
    }
    columns_.push_back(std::move(c));
}

}  // namespace robustats
