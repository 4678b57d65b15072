#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prior/io_util.hpp"

namespace prior::csv {

// Minimal comma-separated table: header row plus numeric or text cells.
// No quoting; cells never contain commas in our formats.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header) : columns_(header.size()) {
    row(header);
  }

  Writer& row(std::span<const std::string> cells) {
    if (cells.size() != columns_) throw DimensionError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
    return *this;
  }

  Writer& row(std::span<const double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(io::format_double(v));
    return row(cells);
  }

  const std::string& str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& c : cells) {
    while (!c.empty() && (c.front() == ' ' || c.front() == '\t')) c.remove_prefix(1);
    while (!c.empty() && (c.back() == ' ' || c.back() == '\t' || c.back() == '\r')) c.remove_suffix(1);
  }
  return cells;
}

class Table {
 public:
  static Table parse(std::string_view text) {
    Table t;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      auto cells = split(line);
      if (header) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          t.header_.emplace_back(cells[i]);
          t.index_[t.header_.back()] = i;
        }
        header = false;
        continue;
      }
      if (cells.size() != t.header_.size()) {
        throw FormatError("row " + std::to_string(t.rows_.size() + 1),
                          "csv row " + std::to_string(t.rows_.size() + 1) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(t.header_.size()));
      }
      t.rows_.emplace_back(cells.begin(), cells.end());
    }
    if (header) throw FormatError("header", "csv has no header row");
    return t;
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  bool has(const std::string& column) const { return index_.count(column) != 0; }

  std::size_t column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw FormatError(name, "missing column: " + name);
    return it->second;
  }

  const std::string& text(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  double number(std::size_t row, std::size_t col) const {
    return io::parse_double(rows_[row][col], header_[col]);
  }
  double number(std::size_t row, const std::string& name) const { return number(row, column(name)); }

 private:
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace prior::csv
