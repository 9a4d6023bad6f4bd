#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stir {

// Shortest-roundtrip style decimal formatting with 17 significant digits,
// locale-independent.
std::string format_g17(double v);

std::uint64_t fnv1a64(const std::string& bytes);

// Result tables are built in memory so that runs can be byte-compared, then
// written out with a reference line pointing at the JSON manifest.
class CsvBuilder {
  public:
    explicit CsvBuilder(std::vector<std::string> columns);

    void reference_manifest(const std::string& manifest_name);
    void comment(const std::string& text);

    CsvBuilder& cell(double v);
    CsvBuilder& cell(long v);
    CsvBuilder& cell(const std::string& v);
    void end_row();

    std::string str() const;

  private:
    std::size_t n_cols_;
    std::size_t row_fill_ = 0;
    std::string head_;
    std::string body_;
};

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

// $STIR_OUT_DIR if set, else the current directory.
std::string resolve_out_dir();

// Everything needed to reproduce a run: tool version, the subcommand, its
// parameters, seed and thread count, plus checksums of the outputs.  Wall
// clock time lives only here, never in the result tables.
struct RunManifest {
    std::string tool;
    std::string version;
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::uint64_t seed = 0;
    int threads = 1;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::uint64_t>> outputs;  // name, checksum

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

}  // namespace stir
