#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sqzdisp/trace.hpp"

namespace sqzdisp::io {

/// Shortest text that reads back to the same double ("%.17g").
[[nodiscard]] std::string format_double(double v);

/// Trace CSV: `axis_unit,value_unit,rbw_hz,vbw_hz,averages,seed`, the
/// metadata row, `axis,value`, then one row per sample.
[[nodiscard]] std::string trace_csv(const SpectrumTrace& trace);
[[nodiscard]] SpectrumTrace parse_trace_csv(const std::string& text);

/// Plain table: a header row then data rows, numbers via format_double.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};
[[nodiscard]] std::string table_csv(const Table& table);

/// `key,value` table. Numbers keep full precision; text is written as is.
class Summary {
public:
    void add(const std::string& key, double value);
    void add(const std::string& key, const std::string& value);
    [[nodiscard]] double number(const std::string& key) const;
    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] std::string csv() const;
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, double> numbers_;
};

/// Splits CSV text into rows of cells (no quoting: cells never contain commas).
[[nodiscard]] std::vector<std::vector<std::string>> parse_csv(const std::string& text);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

[[nodiscard]] std::string sha256_hex(const std::string& content);

/// Flat `key = value` record of a run. Output hashes are stored as
/// `output.<file> = sha256:<hex>`.
struct Manifest {
    std::string scenario;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> fields;   ///< version.*, options
    std::map<std::string, std::string> outputs;  ///< file name -> hex digest

    [[nodiscard]] std::string text() const;
    static Manifest parse(const std::string& text);
};

/// Tolerances from `golden.meta`. Lines are `<file> <column> rel=<r> abs=<a>`,
/// where file and column may be `*`; the last matching line wins. The
/// default is rel=1e-9 abs=0.
struct Tolerance {
    double rel = 1e-9;
    double abs = 0.0;
};

class GoldenMeta {
public:
    static GoldenMeta parse(const std::string& text);
    [[nodiscard]] Tolerance lookup(const std::string& file, const std::string& column) const;

private:
    struct Rule {
        std::string file, column;
        Tolerance tol;
    };
    std::vector<Rule> rules_;
};

/// Offending cells of `actual` against `expected`, as "file:row:column: detail".
/// Numeric cells are compared within tolerance, text cells exactly.
[[nodiscard]] std::vector<std::string> compare_csv(const std::string& file, const std::string& actual,
                                                   const std::string& expected, const GoldenMeta& meta,
                                                   long* cells_compared = nullptr);

struct GoldenReport {
    int files = 0;
    long cells = 0;
};

/// Compares every output of the manifest (resolved next to it) with the file
/// of the same name in `golden_dir`. Also checks each output against its
/// recorded hash. Throws GoldenMismatch listing the offending cells.
GoldenReport diff_golden(const std::filesystem::path& manifest, const std::filesystem::path& golden_dir);

}  // namespace sqzdisp::io
