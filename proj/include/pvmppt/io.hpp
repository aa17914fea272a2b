#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pvmppt::io {

// Line-oriented "key = value" document. '#' starts a comment, blank lines
// are skipped, and a "[section]" line prefixes the keys that follow with
// "section.". Entry order is preserved so serialization is stable.
class KeyValueDoc {
 public:
  KeyValueDoc() = default;

  static KeyValueDoc parse(std::string_view text);
  static KeyValueDoc load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;

  void set(const std::string& key, std::string value);
  void set_double(const std::string& key, double value, int significant_digits = 17);
  void set_int(const std::string& key, long long value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string serialize() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

std::string format_double(double value, int significant_digits = 9);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);
std::string trim(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Minimal CSV support for numeric tables with a single header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a named column, -1 when absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, int significant_digits = 9);

}  // namespace pvmppt::io
