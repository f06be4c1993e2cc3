#include "sqzdisp/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "sqzdisp/errors.hpp"

namespace sqzdisp::io {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool to_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

double require_number(const std::string& s, const std::string& what) {
    double v = 0.0;
    if (!to_number(s, v)) throw std::invalid_argument(what + ": '" + s + "' is not a number");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trace_csv(const SpectrumTrace& trace) {
    trace.validate();
    std::string out = "axis_unit,value_unit,rbw_hz,vbw_hz,averages,seed\n";
    out += trace.axis_unit + "," + trace.value_unit + "," + format_double(trace.settings.rbw) + "," +
           format_double(trace.settings.vbw) + "," + std::to_string(trace.settings.averages) + "," +
           std::to_string(trace.seed) + "\n";
    out += "axis,value\n";
    for (std::size_t i = 0; i < trace.axis.size(); ++i)
        out += format_double(trace.axis[i]) + "," + format_double(trace.values[i]) + "\n";
    return out;
}

SpectrumTrace parse_trace_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.size() < 3 || rows[0].size() != 6 || rows[1].size() != 6 || rows[2] != std::vector<std::string>{"axis", "value"})
        throw std::invalid_argument("trace CSV: malformed header");
    SpectrumTrace t;
    t.axis_unit = rows[1][0];
    t.value_unit = rows[1][1];
    t.settings.rbw = require_number(rows[1][2], "rbw_hz");
    t.settings.vbw = require_number(rows[1][3], "vbw_hz");
    t.settings.averages = static_cast<int>(require_number(rows[1][4], "averages"));
    t.seed = std::stoull(rows[1][5]);
    for (std::size_t r = 3; r < rows.size(); ++r) {
        if (rows[r].size() != 2) throw std::invalid_argument("trace CSV: row " + std::to_string(r + 1) + " needs 2 cells");
        t.axis.push_back(require_number(rows[r][0], "axis"));
        t.values.push_back(require_number(rows[r][1], "value"));
    }
    t.settings.samples = static_cast<int>(t.axis.size());
    return t;
}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("Table: row width differs from the header");
    rows.push_back(std::move(row));
}

std::string table_csv(const Table& table) {
    auto line = [](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
        return s + "\n";
    };
    std::string out = line(table.columns);
    for (const auto& r : table.rows) out += line(r);
    return out;
}

void Summary::add(const std::string& key, double value) {
    entries_.emplace_back(key, format_double(value));
    numbers_[key] = value;
}

void Summary::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }

double Summary::number(const std::string& key) const {
    const auto it = numbers_.find(key);
    if (it == numbers_.end()) throw std::out_of_range("summary has no number '" + key + "'");
    return it->second;
}

bool Summary::has(const std::string& key) const { return numbers_.count(key) != 0; }

std::string Summary::csv() const {
    std::string out = "key,value\n";
    for (const auto& [k, v] : entries_) out += k + "," + v + "\n";
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string sha256_hex(const std::string& content) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(content.data(), content.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string Manifest::text() const {
    std::string out = "scenario = " + scenario + "\nseed = " + std::to_string(seed) + "\n";
    for (const auto& [k, v] : fields) out += k + " = " + v + "\n";
    for (const auto& [file, hash] : outputs) out += "output." + file + " = sha256:" + hash + "\n";
    return out;
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_scenario = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "scenario") {
            m.scenario = value;
            have_scenario = true;
        } else if (key == "seed") {
            m.seed = std::stoull(value);
        } else if (key.rfind("output.", 0) == 0) {
            if (value.rfind("sha256:", 0) != 0)
                throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": hash must start with sha256:");
            m.outputs[key.substr(7)] = value.substr(7);
        } else {
            m.fields[key] = value;
        }
    }
    if (!have_scenario) throw std::invalid_argument("manifest: missing scenario");
    return m;
}

GoldenMeta GoldenMeta::parse(const std::string& text) {
    GoldenMeta meta;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream words(line);
        Rule rule;
        if (!(words >> rule.file >> rule.column))
            throw std::invalid_argument("golden.meta line " + std::to_string(lineno) + ": expected '<file> <column> ...'");
        std::string kv;
        while (words >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("golden.meta line " + std::to_string(lineno) + ": bad '" + kv + "'");
            const auto k = kv.substr(0, eq);
            const double v = require_number(kv.substr(eq + 1), "golden.meta " + k);
            if (k == "rel")
                rule.tol.rel = v;
            else if (k == "abs")
                rule.tol.abs = v;
            else
                throw std::invalid_argument("golden.meta line " + std::to_string(lineno) + ": unknown key '" + k + "'");
        }
        meta.rules_.push_back(rule);
    }
    return meta;
}

Tolerance GoldenMeta::lookup(const std::string& file, const std::string& column) const {
    Tolerance tol;
    for (const auto& r : rules_)
        if ((r.file == "*" || r.file == file) && (r.column == "*" || r.column == column)) tol = r.tol;
    return tol;
}

std::vector<std::string> compare_csv(const std::string& file, const std::string& actual, const std::string& expected,
                                     const GoldenMeta& meta, long* cells_compared) {
    const auto a = parse_csv(actual);
    const auto e = parse_csv(expected);
    std::vector<std::string> bad;
    if (a.size() != e.size())
        bad.push_back(file + ": " + std::to_string(a.size()) + " rows, golden has " + std::to_string(e.size()));

    // Trace files carry two header rows (0 and 2), tables one.
    const bool trace = !e.empty() && !e[0].empty() && e[0][0] == "axis_unit";
    std::vector<std::string> names;
    const auto rows = std::min(a.size(), e.size());
    for (std::size_t r = 0; r < rows; ++r) {
        const bool header = r == 0 || (trace && r == 2);
        if (a[r].size() != e[r].size()) {
            bad.push_back(file + ":" + std::to_string(r + 1) + ": " + std::to_string(a[r].size()) + " cells, golden has " +
                          std::to_string(e[r].size()));
            continue;
        }
        for (std::size_t c = 0; c < e[r].size(); ++c) {
            if (cells_compared) ++*cells_compared;
            const auto& x = a[r][c];
            const auto& y = e[r][c];
            const std::string column = c < names.size() ? names[c] : std::to_string(c);
            double vx = 0.0, vy = 0.0;
            if (!header && to_number(x, vx) && to_number(y, vy)) {
                const auto tol = meta.lookup(file, column);
                const double diff = std::abs(vx - vy);
                const bool ok = (vx == vy) || diff <= tol.abs + tol.rel * std::max(std::abs(vx), std::abs(vy));
                if (!ok)
                    bad.push_back(file + ":" + std::to_string(r + 1) + ":" + column + ": " + x + " vs golden " + y);
            } else if (x != y) {
                bad.push_back(file + ":" + std::to_string(r + 1) + ":" + column + ": '" + x + "' vs golden '" + y + "'");
            }
        }
        if (header) names = e[r];
    }
    return bad;
}

GoldenReport diff_golden(const fs::path& manifest_path, const fs::path& golden_dir) {
    const auto manifest = Manifest::parse(read_file(manifest_path));
    const auto base = manifest_path.parent_path();
    GoldenMeta meta;
    if (fs::exists(golden_dir / "golden.meta")) meta = GoldenMeta::parse(read_file(golden_dir / "golden.meta"));

    GoldenReport report;
    std::vector<std::string> bad;
    for (const auto& [file, hash] : manifest.outputs) {
        const auto actual_path = base / file;
        const auto golden_path = golden_dir / file;
        if (!fs::exists(actual_path)) {
            bad.push_back(file + ": output missing");
            continue;
        }
        if (!fs::exists(golden_path)) {
            bad.push_back(file + ": no golden file");
            continue;
        }
        const auto actual = read_file(actual_path);
        if (sha256_hex(actual) != hash) bad.push_back(file + ": content does not match the manifest hash");
        auto cells = compare_csv(file, actual, read_file(golden_path), meta, &report.cells);
        bad.insert(bad.end(), cells.begin(), cells.end());
        ++report.files;
    }
    if (!bad.empty()) throw GoldenMismatch(std::move(bad));
    return report;
}

}  // namespace sqzdisp::io
