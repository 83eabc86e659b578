#include "mdd/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <string_view>

#include "mdd/error.hpp"

namespace mdd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = line.find(delimiter);
    std::string_view field = line.substr(0, pos);
    // Tabs are significant when they are the delimiter.
    if (delimiter != '\t') field = trim(field);
    while (!field.empty() && field.back() == '\r') field.remove_suffix(1);
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
    out.push_back(field);
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& response, char delimiter) {
  std::string line;
  while (std::getline(in, line) && blank(line)) {
  }
  if (blank(line)) fail(ErrorKind::ParseError, "missing header row");
  std::vector<std::string> header;
  for (auto f : split(line, delimiter)) header.emplace_back(trim(f));

  std::size_t response_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == response) {
      response_col = c;
      break;
    }
  }
  if (response_col == header.size()) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(response.data(), response.data() + response.size(), idx);
    if (!response.empty() && ec == std::errc() && ptr == response.data() + response.size() && idx < header.size()) {
      response_col = idx;
    } else {
      fail(ErrorKind::UnknownColumn, "response column '" + response + "' not found");
    }
  }

  Dataset data;
  data.response_name = header[response_col];
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != response_col) data.column_names.push_back(header[c]);
  }

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    ++rows;
    const auto fields = split(line, delimiter);
    if (fields.size() != header.size()) {
      fail(ErrorKind::ParseError, "row " + std::to_string(rows) + " has " + std::to_string(fields.size()) +
                                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto field = trim(fields[c]);
      double v = 0.0;
      // from_chars rejects a leading '+', which some writers emit.
      const auto start = field.data() + (!field.empty() && field.front() == '+' ? 1 : 0);
      const auto [ptr, ec] = std::from_chars(start, field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        fail(ErrorKind::ParseError, "row " + std::to_string(rows) + ", column " + std::to_string(c + 1) + " ('" +
                                        header[c] + "'): cannot parse '" + std::string(field) + "' as a number");
      }
      if (c == response_col) {
        data.y.push_back(v);
      } else {
        values.push_back(v);
      }
    }
  }
  data.x = Matrix(rows, header.size() - 1);
  std::copy(values.begin(), values.end(), data.x.values().begin());
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, const std::string& response, char delimiter) {
  auto in = open_input(path);
  return parse_dataset(in, response, delimiter);
}

void write_dataset(std::ostream& out, const Dataset& data, char delimiter) {
  if (data.x.rows() != data.y.size()) fail(ErrorKind::InvalidData, "response and covariate row counts differ");
  out << (data.response_name.empty() ? "y" : data.response_name);
  for (std::size_t j = 0; j < data.p(); ++j) {
    out << delimiter << (data.column_names.empty() ? "x" + std::to_string(j + 1) : data.column_names[j]);
  }
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < data.n(); ++i) {
    put(data.y[i]);
    for (double v : data.x.row(i)) {
      out << delimiter;
      put(v);
    }
    out << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const Dataset& data, char delimiter) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  write_dataset(out, data, delimiter);
  if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

GeneSetCollection parse_gene_sets(std::istream& in, const Dataset& data) {
  GeneSetCollection out;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorKind::ParseError, "gene-set line " + std::to_string(line_no) + " has no tab separator");
    }
    GeneSet set;
    set.id = std::string(trim(std::string_view(line).substr(0, tab)));
    if (set.id.empty()) fail(ErrorKind::ParseError, "gene-set line " + std::to_string(line_no) + " has an empty id");
    if (!seen.insert(set.id).second) fail(ErrorKind::DuplicateSetId, "set id '" + set.id + "' appears twice");
    for (auto name : split(std::string_view(line).substr(tab + 1), ',')) {
      name = trim(name);
      if (name.empty()) continue;
      std::size_t c = 0;
      while (c < data.column_names.size() && data.column_names[c] != name) ++c;
      if (c == data.column_names.size()) {
        fail(ErrorKind::UnknownColumn, "set '" + set.id + "' references unknown column '" + std::string(name) + "'");
      }
      set.columns.push_back(c);
    }
    if (set.columns.empty()) fail(ErrorKind::InvalidInput, "set '" + set.id + "' lists no columns");
    out.sets.push_back(std::move(set));
  }
  return out;
}

GeneSetCollection read_gene_sets(const std::filesystem::path& path, const Dataset& data) {
  auto in = open_input(path);
  return parse_gene_sets(in, data);
}

}  // namespace mdd
