#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "zetamoments/arith.hpp"

namespace zm {

using json = nlohmann::json;

// "0.01", "-0.02+0.005i", "0.3i", "1e-3-2e-3i".
cplx parse_complex(const std::string& text);
// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

// Flat key=value configuration.  Lines starting with '#' are comments.  Every
// getter records the value it resolved (including defaults) so the summary
// can list the exact parameters of a run.
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text, const std::string& origin = "<text>");

    void set(const std::string& assignment);  // "key=value"
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    i64 get_int(const std::string& key, i64 fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::string& fallback) const;
    // Accepts comma lists and inclusive ranges "a..b".
    std::vector<i64> get_ints(const std::string& key, const std::string& fallback) const;
    std::vector<cplx> get_complexes(const std::string& key, const std::string& fallback) const;

    // Throws ConfigError naming the first key no getter asked for.
    void reject_unused() const;
    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    std::string lookup(const std::string& key, const std::string& fallback) const;
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, std::string> resolved_;
};

struct CsvColumn {
    std::string name;
    std::string type;  // "real", "integer", "text", "bool"
    std::string description;
};

// Rows of a report grid.  A complex column named x becomes the pair x_re, x_im.
class CsvTable {
public:
    void add_column(const std::string& name, const std::string& type, const std::string& description);
    void add_complex_column(const std::string& name, const std::string& description);

    template <class... Args>
    void add_row(const Args&... args) {
        std::vector<std::string> cells;
        (append(cells, args), ...);
        push(std::move(cells));
    }

    const std::vector<CsvColumn>& columns() const { return columns_; }
    std::size_t rows() const { return rows_.size(); }
    // Header line plus rows, without the timestamp line that write() prepends.
    std::string body() const;
    json schema(const std::string& experiment) const;
    json to_json() const;

private:
    static void append(std::vector<std::string>& cells, double x) { cells.push_back(format_double(x)); }
    static void append(std::vector<std::string>& cells, int x) { cells.push_back(std::to_string(x)); }
    static void append(std::vector<std::string>& cells, i64 x) { cells.push_back(std::to_string(x)); }
    static void append(std::vector<std::string>& cells, u64 x) { cells.push_back(std::to_string(x)); }
    static void append(std::vector<std::string>& cells, bool x) { cells.push_back(x ? "true" : "false"); }
    static void append(std::vector<std::string>& cells, const std::string& x) { cells.push_back(x); }
    static void append(std::vector<std::string>& cells, const char* x) { cells.push_back(x); }
    static void append(std::vector<std::string>& cells, cplx z) {
        cells.push_back(format_double(z.real()));
        cells.push_back(format_double(z.imag()));
    }
    void push(std::vector<std::string> cells);

    std::vector<CsvColumn> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct CommandResult {
    std::string experiment;
    bool pass = false;
    json parameters = json::object();
    json metrics = json::object();
    CsvTable table;
    double runtime_seconds = 0;

    json summary() const;
};

// Each command validates its configuration before computing anything.
CommandResult cmd_identities(const Config& cfg);
CommandResult cmd_constants(const Config& cfg);
CommandResult cmd_afe(const Config& cfg);
CommandResult cmd_stirling(const Config& cfg);
CommandResult cmd_divisor(const Config& cfg);
CommandResult cmd_moment(const Config& cfg);
CommandResult cmd_dirichlet(const Config& cfg);

const std::vector<std::string>& command_names();
CommandResult run_named(const std::string& name, const Config& cfg);

// Runs a command, writes <output>.csv, <output>.json and <output>.schema.json
// (or only <output>.json with the rows embedded when format=json), prints the
// summary to out and returns the process exit code.
int run_command(const std::string& name, const Config& cfg, std::ostream& out, std::ostream& err);

// Worker count: the config value when positive, else ZM_WORKERS, else the
// OpenMP default.  Applies it and returns the count in effect.
int apply_workers(i64 requested);

}  // namespace zm
