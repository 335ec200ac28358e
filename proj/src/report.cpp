#include "mulab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "schema_data.hpp"
#include "json.hpp"

namespace mulab::report {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

Config Config::from_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": missing '='");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[key] = trim(t.substr(eq + 1));
    }
    return cfg;
}

Config Config::from_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open config file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

void Config::merge_file(const std::filesystem::path& p) {
    for (const auto& [k, v] : from_file(p).kv_) kv_[k] = v;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
}

std::string Config::str_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double Config::num_or(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double d = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing garbage");
        return d;
    } catch (const std::exception&) {
        throw UsageError(key, "not a number: '" + *v + "'");
    }
}

std::int64_t Config::int_or(const std::string& key, std::int64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const long long d = std::stoll(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing garbage");
        return d;
    } catch (const std::exception&) {
        throw UsageError(key, "not an integer: '" + *v + "'");
    }
}

bool Config::flag_or(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "1" || *v == "true" || *v == "yes") return true;
    if (*v == "0" || *v == "false" || *v == "no") return false;
    throw UsageError(key, "not a boolean: '" + *v + "'");
}

std::vector<double> Config::list_or(const std::string& key, std::vector<double> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& item : split(*v, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError(key, "not a number list: '" + *v + "'");
        }
    }
    return out;
}

std::vector<std::int64_t> Config::intlist_or(const std::string& key,
                                             std::vector<std::int64_t> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<std::int64_t> out;
    for (const auto& item : split(*v, ',')) {
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw UsageError(key, "not an integer list: '" + *v + "'");
        }
    }
    return out;
}

std::vector<std::string> Config::strlist_or(const std::string& key,
                                            std::vector<std::string> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    return split(*v, ',');
}

std::string Config::describe() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
}

const std::map<std::string, std::vector<std::string>>& csv_schema() {
    static const auto table = [] {
        std::map<std::string, std::vector<std::string>> m;
        std::istringstream in(kCsvSchemaText);
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto colon = t.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("schema entry without ':' — " + t);
            m[trim(t.substr(0, colon))] = split(t.substr(colon + 1), ',');
        }
        return m;
    }();
    return table;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 0x100000001b3ull;
    }
    return h;
}

void atomic_write(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    const auto tmp = p.parent_path() / (p.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

Table::Table(std::filesystem::path dir, std::string name, char sep)
    : name_(std::move(name)), sep_(sep) {
    const auto& schema = csv_schema();
    const auto it = schema.find(name_);
    if (it == schema.end()) throw std::logic_error("table '" + name_ + "' missing from schema");
    columns_ = it->second;
    const char* ext = sep == '\t' ? ".tsv" : ".csv";
    path_ = dir / (name_ + ext);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) body_ += sep_;
        body_ += columns_[i];
    }
    body_ += '\n';
}

void Table::row(const std::vector<std::string>& cells) {
    if (committed_) throw std::logic_error("row after commit on table " + name_);
    if (cells.size() != columns_.size())
        throw std::logic_error("table " + name_ + ": expected " +
                               std::to_string(columns_.size()) + " cells, got " +
                               std::to_string(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find(sep_) != std::string::npos || cells[i].find('\n') != std::string::npos)
            throw std::logic_error("table " + name_ + ": cell contains separator");
        if (i) body_ += sep_;
        body_ += cells[i];
    }
    body_ += '\n';
    ++rows_;
}

void Table::commit() {
    if (committed_) return;
    atomic_write(path_, body_);
    digest_ = fnv1a64(body_);
    committed_ = true;
}

std::string Table::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string Table::integer(std::int64_t v) { return std::to_string(v); }

std::string Table::boolean(bool v) { return v ? "1" : "0"; }

void write_manifest(const std::filesystem::path& dir, const std::string& recipe,
                    const std::string& version, const Config& cfg,
                    const std::vector<TableInfo>& tables, double wall_ms) {
    nlohmann::json j;
    j["recipe"] = recipe;
    j["version"] = version;
    j["wall_ms"] = wall_ms;
    j["parameters"] = nlohmann::json::object();
    for (const auto& [k, v] : cfg.entries()) j["parameters"][k] = v;
    j["tables"] = nlohmann::json::array();
    for (const auto& t : tables) {
        nlohmann::json e;
        e["name"] = t.name;
        e["file"] = t.file;
        e["rows"] = t.rows;
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)t.digest);
        e["fnv1a64"] = buf;
        j["tables"].push_back(e);
    }
    atomic_write(dir / (recipe + ".manifest.json"), j.dump(2) + "\n");
}

}  // namespace mulab::report
