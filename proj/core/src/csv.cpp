#include "cctskit/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cctskit/error.hpp"

namespace cctskit::csv {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    // Collapse negative zero after rounding.
    bool all_zero = true;
    for (char ch : s.substr(1)) all_zero = all_zero && (ch == '0' || ch == '.');
    if (all_zero) s.erase(0, 1);
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Table Table::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse(in, path);
}

Table Table::parse(std::istream& in, const std::string& source) {
  Table t;
  t.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto fields = split(line, ',');
    for (auto& f : fields) f = trim(f);
    if (!have_header) {
      t.header_ = fields;
      for (std::size_t i = 0; i < fields.size(); ++i) t.index_[fields[i]] = i;
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(t.header_.size()) + " fields, found " + std::to_string(fields.size()));
    }
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(line_no);
  }
  if (!have_header) throw ParseError(source, line_no, "missing header");
  return t;
}

bool Table::has_column(const std::string& name) const { return index_.count(name) != 0; }

std::size_t Table::column(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ParseError(source_, 1, "missing column '" + name + "'");
  return it->second;
}

const std::string& Table::text(std::size_t row, const std::string& name) const { return rows_.at(row)[column(name)]; }

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  if (s == "nan" || s == "NA") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(source_, lines_.at(row), "column '" + name + "': malformed number '" + s + "'");
  return v;
}

long Table::integer(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(source_, lines_.at(row), "column '" + name + "': malformed integer '" + s + "'");
  return v;
}

struct Writer::Impl {
  std::ofstream out;
  bool first = true;
};

Writer::Writer(const std::string& path, const std::vector<std::string>& header) : impl_(std::make_unique<Impl>()) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) impl_->out << (i ? "," : "") << header[i];
  impl_->out << '\n';
}

Writer::~Writer() = default;

Writer& Writer::add(const std::string& field) {
  if (!impl_->first) impl_->out << ',';
  impl_->out << field;
  impl_->first = false;
  return *this;
}

Writer& Writer::add(double v) { return add(format_number(v)); }
Writer& Writer::add(long v) { return add(std::to_string(v)); }
Writer& Writer::fixed(double v, int decimals) { return add(format_fixed(v, decimals)); }

void Writer::end_row() {
  impl_->out << '\n';
  impl_->first = true;
}

}  // namespace cctskit::csv
