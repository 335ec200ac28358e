#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mulab::report {

// Raised by recipes on a bad or missing parameter; carries the offending key
// so the caller can map it to a usage error.
struct UsageError : std::runtime_error {
    std::string key;
    UsageError(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), key(std::move(k)) {}
};

// Flat dotted-key configuration.  File format: one `key = value` per line,
// `#` comments, blank lines ignored; nesting is spelled with dots in the key.
// Later assignments win, so command-line overrides are plain `set` calls
// after the file is loaded.
class Config {
  public:
    static Config from_file(const std::filesystem::path& p);
    static Config from_text(const std::string& text);

    void merge_file(const std::filesystem::path& p);
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;

    std::string str_or(const std::string& key, const std::string& fallback) const;
    double num_or(const std::string& key, double fallback) const;
    std::int64_t int_or(const std::string& key, std::int64_t fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> list_or(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::int64_t> intlist_or(const std::string& key,
                                         std::vector<std::int64_t> fallback) const;
    std::vector<std::string> strlist_or(const std::string& key,
                                        std::vector<std::string> fallback) const;

    // canonical text: sorted `key = value` lines; parses back to the same map
    std::string describe() const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

// Compiled-in copy of schema/csv.schema: table name -> column list.
const std::map<std::string, std::vector<std::string>>& csv_schema();

std::uint64_t fnv1a64(std::string_view bytes);

// Writes content to a sibling temp file and renames it into place.
void atomic_write(const std::filesystem::path& p, const std::string& content);

// Schema-checked table writer with deterministic formatting.  Rows accumulate
// in memory; commit() writes the file atomically and records its digest.
class Table {
  public:
    Table(std::filesystem::path dir, std::string name, char sep);

    void row(const std::vector<std::string>& cells);
    void commit();

    static std::string num(double v);              // %.17g
    static std::string integer(std::int64_t v);
    static std::string boolean(bool v);            // 0/1

    const std::string& name() const { return name_; }
    const std::filesystem::path& path() const { return path_; }
    std::uint64_t digest() const { return digest_; }
    std::size_t rows() const { return rows_; }

  private:
    std::string name_;
    std::filesystem::path path_;
    char sep_;
    std::vector<std::string> columns_;
    std::string body_;
    std::size_t rows_ = 0;
    std::uint64_t digest_ = 0;
    bool committed_ = false;
};

struct TableInfo {
    std::string name;
    std::string file;
    std::size_t rows = 0;
    std::uint64_t digest = 0;
};

// JSON run manifest: version, parameters, seed, wall time, table digests.
void write_manifest(const std::filesystem::path& dir, const std::string& recipe,
                    const std::string& version, const Config& cfg,
                    const std::vector<TableInfo>& tables, double wall_ms);

}  // namespace mulab::report
