// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/frame.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#ifndef ROBUSTATS_DATA_DIR
#define ROBUSTATS_DATA_DIR "data"
#endif

namespace robustats {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Splits RFC-4180 records. Accepts LF and CRLF line ends and quoted fields
// spanning lines.
std::vector<std::vector<std::string>> split_records(const std::string& s, char delim) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
            continue;
        } else if (c == '\n') {
            end_row();
            ++line;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (quoted) throw InvalidArgument("unterminated quoted field near line " + std::to_string(line));
    if (field_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

std::string_view trim(std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
}

bool parse_number(std::string_view v, double& out) {
    v = trim(v);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    if (v.empty()) return false;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc{} && ptr == v.data() + v.size();
}

bool needs_quotes(const std::string& s, char delim) {
    return s.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string::npos ||
           s.empty() || s == "NA" || s == "NaN";
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Frame parse_csv(const std::string& content, const CsvOptions& options) {
    auto records = split_records(content, options.delimiter);
    std::vector<std::string> names;
    std::size_t first = 0;
    if (options.header) {
        if (records.empty()) throw InvalidArgument("missing header row");
        names = records[0];
        first = 1;
    } else {
        const std::size_t p = records.empty() ? 0 : records[0].size();
        for (std::size_t j = 0; j < p; ++j) names.push_back("c" + std::to_string(j));
    }
    const std::size_t p = names.size();
    for (std::size_t i = first; i < records.size(); ++i) {
        if (records[i].size() != p) {
            throw InvalidArgument("ragged row " + std::to_string(i + 1) + ": expected " +
                                  std::to_string(p) + " fields, found " +
                                  std::to_string(records[i].size()));
        }
    }
    const std::size_t n = records.size() - first;
    auto is_na = [&](const std::string& cell) {
        const auto t = trim(cell);
        return std::find(options.na_markers.begin(), options.na_markers.end(), t) !=
               options.na_markers.end();
    };

    std::vector<Column> cols;
    std::vector<std::string> labels;
    std::vector<std::int64_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<std::string> cells(n);
        std::vector<std::uint8_t> na(n);
        std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
        bool numeric = true;
        for (std::size_t i = 0; i < n; ++i) {
            cells[i] = std::move(records[first + i][j]);
            na[i] = is_na(cells[i]) ? 1 : 0;
            if (!na[i] && numeric && !parse_number(cells[i], values[i])) numeric = false;
        }
        if (names[j] == options.label_column && !options.label_column.empty()) {
            labels = std::move(cells);
            continue;
        }
        if (names[j] == options.id_column && !options.id_column.empty()) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto t = trim(cells[i]);
                std::int64_t v = 0;
                const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
                if (ec != std::errc{} || ptr != t.data() + t.size()) {
                    throw InvalidArgument("non-integer row id in row " + std::to_string(i + 1));
                }
                ids[i] = v;
            }
            continue;
        }
        if (numeric) {
            for (std::size_t i = 0; i < n; ++i) {
                if (na[i]) values[i] = std::numeric_limits<double>::quiet_NaN();
            }
            Column c = Column::numeric(names[j], std::move(values));
            c.na = std::move(na);
            cols.push_back(std::move(c));
        } else {
            cols.push_back(Column::textual(names[j], std::move(cells), std::move(na)));
        }
    }
    if (!options.label_column.empty() && labels.empty() && n > 0) {
        throw InvalidArgument("unknown label column: " + options.label_column);
    }
    return Frame(std::move(cols), std::move(ids), std::move(labels));
}

Frame read_csv(const std::string& path, const CsvOptions& options) {
    return parse_csv(slurp(path), options);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error("cannot format number");
    return std::string(buf.data(), ptr);
}

std::string format_csv(const Frame& frame, bool include_row_ids, bool include_row_labels) {
    include_row_labels = include_row_labels && !frame.row_labels().empty();
    std::string out;
    auto header_cell = [&](const std::string& s) {
        return needs_quotes(s, ',') ? quote(s) : s;
    };
    bool firstcol = true;
    auto sep = [&] {
        if (!firstcol) out.push_back(',');
        firstcol = false;
    };
    if (include_row_ids) {
        sep();
        out += "row_id";
    }
    if (include_row_labels) {
        sep();
        out += "row_label";
    }
    for (const auto& c : frame.columns()) {
        sep();
        out += header_cell(c.name);
    }
    out += '\n';
    for (Index i = 0; i < frame.n_rows(); ++i) {
        firstcol = true;
        const auto k = static_cast<std::size_t>(i);
        if (include_row_ids) {
            sep();
            out += std::to_string(frame.row_ids()[k]);
        }
        if (include_row_labels) {
            sep();
            const auto& l = frame.row_labels()[k];
            out += needs_quotes(l, ',') ? quote(l) : l;
        }
        for (const auto& c : frame.columns()) {
            sep();
            if (c.missing(k)) {
                out += "NA";
            } else if (c.kind == ColumnKind::numeric) {
                out += format_double(c.values[k]);
            } else {
                out += needs_quotes(c.text[k], ',') ? quote(c.text[k]) : c.text[k];
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Frame& frame, const std::string& path, bool include_row_ids, bool include_row_labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << format_csv(frame, include_row_ids, include_row_labels);
    if (!out) throw Error("write failed: " + path);
}

std::string sha256_file(const std::string& path) {
    const std::string bytes = slurp(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw Error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string data_directory() {
    if (const char* env = std::getenv("ROBUSTATS_DATA_DIR"); env && *env) return env;
    return ROBUSTATS_DATA_DIR;
}

namespace {

nlohmann::json load_manifest() {
    const std::string path = data_directory() + "/manifest.json";
    return nlohmann::json::parse(slurp(path));
}

}  // namespace

std::vector<std::string> dataset_names() {
    std::vector<std::string> out;
    const auto manifest = load_manifest();
    for (const auto& d : manifest.at("datasets")) out.push_back(d.at("name"));
    return out;
}

DatasetRecord load_dataset(const std::string& name) {
    const auto manifest = load_manifest();
    for (const auto& d : manifest.at("datasets")) {
        if (d.at("name") != name) continue;
        const std::string path = data_directory() + "/" + d.at("file").get<std::string>();
        const std::string digest = sha256_file(path);
        if (digest != d.at("sha256").get<std::string>()) {
            throw Error("checksum mismatch for dataset " + name);
        }
        CsvOptions opts;
        opts.label_column = d.value("label_column", std::string{});
        Frame f = read_csv(path, opts);
        if (d.contains("row_label_columns")) {
            std::vector<std::string> labels(static_cast<std::size_t>(f.n_rows()));
            for (const auto& col : d.at("row_label_columns")) {
                const Column& c = f.column(col.get<std::string>());
                for (std::size_t i = 0; i < labels.size(); ++i) {
                    if (!labels[i].empty()) labels[i] += ' ';
                    labels[i] += c.kind == ColumnKind::text ? c.text[i] : format_double(c.values[i]);
                }
            }
            f = Frame(f.columns(), f.row_ids(), std::move(labels));
        }
        if (f.n_rows() != d.at("n").get<Index>() || f.n_cols() != d.at("p").get<Index>()) {
            throw Error("dataset " + name + " has unexpected dimensions");
        }
        DatasetRecord rec;
        rec.feature_names = f.column_names();
        rec.data = std::move(f);
        rec.description = d.value("description", std::string{});
        rec.source_path = path;
        return rec;
    }
    throw InvalidArgument("unknown dataset: " + name);
}

}  // namespace robustats
