#include "stir/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stir {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CsvBuilder::CsvBuilder(std::vector<std::string> columns) : n_cols_(columns.size()) {
    if (columns.empty()) throw std::invalid_argument("CsvBuilder: need at least one column");
    std::string line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) line += ',';
        line += columns[i];
    }
    body_ = line + "\n";
}

void CsvBuilder::reference_manifest(const std::string& manifest_name) {
    head_ += "# manifest: " + manifest_name + "\n";
}

void CsvBuilder::comment(const std::string& text) { head_ += "# " + text + "\n"; }

CsvBuilder& CsvBuilder::cell(double v) { return cell(format_g17(v)); }

CsvBuilder& CsvBuilder::cell(long v) { return cell(std::to_string(v)); }

CsvBuilder& CsvBuilder::cell(const std::string& v) {
    body_ += row_fill_ ? "," : "";
    body_ += v;
    if (++row_fill_ > n_cols_) throw std::logic_error("CsvBuilder: too many cells in row");
    return *this;
}

void CsvBuilder::end_row() {
    if (row_fill_ != n_cols_) throw std::logic_error("CsvBuilder: row is not full");
    body_ += "\n";
    row_fill_ = 0;
}

std::string CsvBuilder::str() const { return head_ + body_; }

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve_out_dir() {
    const char* env = std::getenv("STIR_OUT_DIR");
    return env && *env ? env : ".";
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["seed"] = seed;
    j["threads"] = threads;
    j["wall_seconds"] = wall_seconds;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& [name, sum] : outputs) {
        nlohmann::ordered_json o;
        o["file"] = name;
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(sum));
        o["fnv1a64"] = buf;
        outs.push_back(o);
    }
    j["outputs"] = outs;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    RunManifest m;
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
        m.params.emplace_back(it.key(), it.value().get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threads = j.at("threads").get<int>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& o : j.at("outputs"))
        m.outputs.emplace_back(o.at("file").get<std::string>(),
                               std::stoull(o.at("fnv1a64").get<std::string>(), nullptr, 16));
    return m;
}

}  // namespace stir
