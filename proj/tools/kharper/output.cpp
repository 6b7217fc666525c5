#include "kharper/output.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace kharper::cli {

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::ordered_json to_json(const Cell& cell)
{
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, cell);
}

} // namespace

std::string format_cell(const Cell& cell)
{
    if (const auto* i = std::get_if<std::int64_t>(&cell))
        return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&cell)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    return csv_escape(std::get<std::string>(cell));
}

std::string render_csv(const nlohmann::ordered_json& meta, const Table& table)
{
    std::string out;
    for (const auto& [key, value] : meta.items())
        out += "# " + key + ": " + value.dump() + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out += (c ? "," : "") + csv_escape(table.columns[c]);
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out += ',';
            out += format_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const nlohmann::ordered_json& meta, const Table& table)
{
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
            obj[table.columns[c]] = to_json(row[c]);
        data.push_back(std::move(obj));
    }
    return render_json(meta, data);
}

std::string render_json(const nlohmann::ordered_json& meta, const nlohmann::ordered_json& data)
{
    nlohmann::ordered_json doc;
    doc["meta"] = meta;
    doc["data"] = data;
    return doc.dump() + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

Format resolve_format(Format requested, const std::string& path, Format fallback)
{
    if (requested != Format::automatic)
        return requested;
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".json")
        return Format::json;
    if (ext == ".csv")
        return Format::csv;
    return fallback;
}

} // namespace kharper::cli
