#pragma once
//
// Command-line front end: input documents, run configuration, report files.
//

#include "repdyn/affine.hpp"
#include "repdyn/errors.hpp"
#include "repdyn/generators.hpp"
#include "repdyn/scan.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace repdyn::cli {

enum ExitCode : int {
    kExitPass = 0,
    kExitFail = 2,
    kExitInconclusive = 3,
    kExitUsage = 64,
    kExitNumeric = 70,
};

// Malformed input document; line and column are 1-based.
struct InputError : Error {
    InputError(const std::string& what, int line, int column)
        : Error(what), line(line), column(column) {}
    int line;
    int column;
    std::string diagnostic(const std::string& path) const;
};

struct LineSpec {
    std::string name;
    // Either a period (periodic line), both endpoints, or a seed.
    std::optional<Word> period;
    std::optional<BoundaryPoint> forward;
    std::optional<BoundaryPoint> backward;
    std::optional<std::uint64_t> seed;
};

struct LinearInput {
    int n = 0;
    GeneratorSet gens;
    std::optional<std::vector<Vec>> translations;
    std::vector<LineSpec> lines;

    AffineGeneratorSet affine() const;
};

struct GeodesicSpec {
    std::string name;
    Word anchor;
    BoundaryPoint forward;
    BoundaryPoint backward;
};

struct FlowMetricInput {
    std::vector<std::string> alphabet;
    std::vector<GeodesicSpec> geodesics;
};

// "p/q" strings and plain numbers.
double parse_number_text(const std::string& text);

LinearInput parse_linear_input(const std::string& text);
FlowMetricInput parse_flowmetric_input(const std::string& text);
std::string read_file(const std::filesystem::path& path);

struct RunConfig {
    std::string command;
    std::filesystem::path input;
    int k = 1;
    int max_length = 8;
    int m_max = 6;
    int window = 48;
    std::optional<double> tol;  // per-command default when unset
    ScanPolicy policy = ScanPolicy::exhaustive();
    int threads = 0;  // 0: REPDYN_THREADS or hardware concurrency
    std::filesystem::path out_dir = ".";
    bool quiet = false;
};

nlohmann::ordered_json config_json(const RunConfig& config);

// %.17g
std::string format_double(double x);

class CsvTable {
public:
    CsvTable(std::string name, std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    const std::string& name() const { return name_; }
    std::string body() const;  // header + rows, LF terminated

private:
    std::string name_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct Report {
    std::string command;
    nlohmann::ordered_json result;
    std::vector<CsvTable> tables;
    int exit_code = kExitPass;
};

// Writes <command>.json and one CSV per table into config.out_dir; returns
// the paths written.
std::vector<std::filesystem::path> write_report(const RunConfig& config, const Report& report);

// Schema check for a parsed report document; returns the list of problems.
std::vector<std::string> validate_report(const nlohmann::json& doc);

Report cmd_dominate(const RunConfig& config);
Report cmd_spectrum(const RunConfig& config);
Report cmd_split(const RunConfig& config);
Report cmd_affine(const RunConfig& config);
Report cmd_flowmetric(const RunConfig& config);

// Dispatches on config.command, writes the report, maps errors to exit codes.
int run(const RunConfig& config);

}  // namespace repdyn::cli
