#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kharper::cli {

/// Failure to create, write or rename an output file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { automatic, csv, json };

using Cell = std::variant<std::int64_t, double, std::string>;

/// Long-format table: one row per datum, explicit index columns.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Doubles with 17 significant digits, integers verbatim.
std::string format_cell(const Cell& cell);

/// `# key: value` metadata lines, a header row, then the rows.
std::string render_csv(const nlohmann::ordered_json& meta, const Table& table);

/// {"meta": ..., "data": [{column: value, ...}, ...]}
std::string render_json(const nlohmann::ordered_json& meta, const Table& table);

/// {"meta": ..., "data": data}
std::string render_json(const nlohmann::ordered_json& meta, const nlohmann::ordered_json& data);

/// Writes to a temporary sibling file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// csv or json from the requested format and, for `automatic`, the file
/// extension (falling back to `fallback`).
Format resolve_format(Format requested, const std::string& path, Format fallback);

} // namespace kharper::cli
