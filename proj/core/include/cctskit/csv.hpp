#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cctskit::csv {

/// Shortest round-trip decimal form of a double ("nan" and "inf" spelled out).
std::string format_number(double v);

/// Fixed-precision form used in human-facing tables.
std::string format_fixed(double v, int decimals);

/// Header-addressed CSV table. No quoting: fields never contain commas.
class Table {
 public:
  static Table read(const std::string& path);
  static Table parse(std::istream& in, const std::string& source);

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  /// Throws ParseError when the column is missing.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;

  const std::string& text(std::size_t row, const std::string& name) const;
  /// Throws ParseError citing the file line on malformed numbers.
  double number(std::size_t row, const std::string& name) const;
  long integer(std::size_t row, const std::string& name) const;
  /// 1-based line in the source file.
  std::size_t line_of(std::size_t row) const { return lines_.at(row); }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

/// Row-by-row writer; the destination is opened eagerly and throws on failure.
class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& header);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  Writer& add(const std::string& field);
  Writer& add(double v);
  Writer& add(long v);
  Writer& add(int v) { return add(static_cast<long>(v)); }
  Writer& add(std::size_t v) { return add(static_cast<long>(v)); }
  Writer& fixed(double v, int decimals);
  void end_row();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace cctskit::csv
