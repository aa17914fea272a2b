#include "pvmppt/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pvmppt::io {

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

KeyValueDoc KeyValueDoc::parse(std::string_view text) {
  KeyValueDoc doc;
  std::string section;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("key-value parse error at line " + std::to_string(line_no) +
                               ": missing '=' in \"" + line + "\"");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("key-value parse error at line " + std::to_string(line_no) +
                               ": empty key");
    }
    if (!section.empty()) key = section + "." + key;
    doc.set(key, value);
  }
  return doc;
}

KeyValueDoc KeyValueDoc::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

bool KeyValueDoc::has(const std::string& key) const { return index_.count(key) > 0; }

const std::string& KeyValueDoc::get(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw std::runtime_error("missing key: " + key);
  return entries_[it->second].second;
}

std::string KeyValueDoc::get_or(const std::string& key, std::string fallback) const {
  auto it = index_.find(key);
  return it == index_.end() ? std::move(fallback) : entries_[it->second].second;
}

double KeyValueDoc::get_double(const std::string& key) const {
  try {
    return parse_double(get(key));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("key " + key + ": " + e.what());
  }
}

double KeyValueDoc::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueDoc::get_int(const std::string& key) const {
  try {
    return parse_int(get(key));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("key " + key + ": " + e.what());
  }
}

long long KeyValueDoc::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueDoc::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("key " + key + ": not a boolean: " + v);
}

void KeyValueDoc::set(const std::string& key, std::string value) {
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].second = std::move(value);
    return;
  }
  index_.emplace(key, entries_.size());
  entries_.emplace_back(key, std::move(value));
}

void KeyValueDoc::set_double(const std::string& key, double value, int significant_digits) {
  set(key, format_double(value, significant_digits));
}

void KeyValueDoc::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

std::string KeyValueDoc::serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  }
  return out;
}

std::string format_double(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
  return buf;
}

double parse_double(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::runtime_error("empty number");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::runtime_error("not a number: " + s);
  return v;
}

long long parse_int(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::runtime_error("empty integer");
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) throw std::runtime_error("not an integer: " + s);
  return v;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(parse_double(item));
    pos = comma + 1;
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  return fnv1a64(read_file(path));
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::string text = read_file(path);
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::size_t cell_pos = 0;
    while (cell_pos <= line.size()) {
      std::size_t comma = line.find(',', cell_pos);
      if (comma == std::string_view::npos) comma = line.size();
      cells.push_back(trim(line.substr(cell_pos, comma - cell_pos)));
      cell_pos = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(table.header.size()) + " columns");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    table.rows.push_back(std::move(row));
  }
  if (first) throw std::runtime_error(path.string() + ": empty CSV");
  return table;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, int significant_digits) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i], significant_digits);
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace pvmppt::io
