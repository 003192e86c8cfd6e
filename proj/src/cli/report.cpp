#include "repdyn/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

namespace repdyn::cli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable::CsvTable(std::string name, std::vector<std::string> header)
    : name_(std::move(name)), header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw PreconditionError("CSV row width does not match header");
    rows_.push_back(std::move(cells));
}

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_cell(cells[i]);
    }
    return out + '\n';
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string CsvTable::body() const {
    std::string out = csv_line(header_);
    for (const auto& row : rows_) out += csv_line(row);
    return out;
}

nlohmann::ordered_json config_json(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["command"] = config.command;
    j["input"] = config.input.string();
    j["k"] = config.k;
    j["max_length"] = config.max_length;
    j["m_max"] = config.m_max;
    j["window"] = config.window;
    j["tol"] = config.tol ? nlohmann::ordered_json(*config.tol) : nlohmann::ordered_json(nullptr);
    j["policy"] = config.policy.is_exhaustive() ? "exhaustive" : "sampled";
    j["samples"] = config.policy.samples;
    j["seed"] = config.policy.seed;
    j["threads"] = config.threads;
    return j;
}

std::vector<std::filesystem::path> write_report(const RunConfig& config, const Report& report) {
    std::filesystem::create_directories(config.out_dir);
    std::vector<std::filesystem::path> written;

    nlohmann::ordered_json doc;
    doc["tool"] = "repdyn";
    doc["format_version"] = 1;
    doc["command"] = report.command;
    doc["timestamp"] = utc_timestamp();
    doc["config"] = config_json(config);
    doc["exit_code"] = report.exit_code;
    doc["result"] = report.result;
    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const auto& t : report.tables) tables.push_back(t.name());
    doc["tables"] = tables;

    auto write = [&](const std::filesystem::path& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << body;
        written.push_back(path);
    };
    write(config.out_dir / (report.command + ".json"), doc.dump(2) + "\n");
    for (const auto& t : report.tables) write(config.out_dir / t.name(), t.body());
    return written;
}

std::vector<std::string> validate_report(const nlohmann::json& doc) {
    std::vector<std::string> problems;
    auto need = [&](const nlohmann::json& obj, const std::string& where, const std::string& key, auto check,
                    const char* what) {
        if (!obj.is_object() || !obj.contains(key)) {
            problems.push_back(where + " lacks \"" + key + "\"");
            return false;
        }
        if (!check(obj.at(key))) {
            problems.push_back(where + "." + key + " must be " + what);
            return false;
        }
        return true;
    };
    const auto is_string = [](const nlohmann::json& v) { return v.is_string(); };
    const auto is_object = [](const nlohmann::json& v) { return v.is_object(); };
    const auto is_array = [](const nlohmann::json& v) { return v.is_array(); };
    const auto is_bool = [](const nlohmann::json& v) { return v.is_boolean(); };
    const auto is_int = [](const nlohmann::json& v) { return v.is_number_integer(); };
    const auto is_number_or_null = [](const nlohmann::json& v) { return v.is_number() || v.is_null(); };

    if (!doc.is_object()) return {"report must be a JSON object"};
    if (need(doc, "report", "tool", is_string, "a string") && doc.at("tool") != "repdyn")
        problems.push_back("report.tool must be \"repdyn\"");
    need(doc, "report", "format_version", is_int, "an integer");
    need(doc, "report", "timestamp", is_string, "a string");
    need(doc, "report", "exit_code", is_int, "an integer");
    if (need(doc, "report", "config", is_object, "an object")) {
        const auto& c = doc.at("config");
        need(c, "config", "seed", is_int, "an integer");
        need(c, "config", "policy", is_string, "a string");
        need(c, "config", "input", is_string, "a string");
    }
    if (need(doc, "report", "tables", is_array, "an array"))
        for (const auto& t : doc.at("tables"))
            if (!t.is_string()) problems.push_back("report.tables entries must be strings");

    static const std::set<std::string> commands{"dominate", "spectrum", "split", "affine", "flowmetric"};
    if (!need(doc, "report", "command", is_string, "a string")) return problems;
    const std::string command = doc.at("command");
    if (!commands.count(command)) {
        problems.push_back("unknown command \"" + command + "\"");
        return problems;
    }
    if (!need(doc, "report", "result", is_object, "an object")) return problems;
    const auto& r = doc.at("result");

    if (command == "dominate") {
        static const std::set<std::string> verdicts{"dominated", "partially-hyperbolic", "inconclusive", "refuted"};
        if (need(r, "result", "verdict", is_string, "a string") && !verdicts.count(r.at("verdict")))
            problems.push_back("result.verdict is not a known verdict");
        need(r, "result", "fitted_rate", is_number_or_null, "a number or null");
        need(r, "result", "fitted_log_constant", is_number_or_null, "a number or null");
        need(r, "result", "spheres", is_array, "an array");
        need(r, "result", "truncated", is_bool, "a boolean");
    } else if (command == "spectrum") {
        if (need(r, "result", "containment", is_object, "an object"))
            need(r.at("containment"), "result.containment", "pass", is_bool, "a boolean");
        if (need(r, "result", "involution", is_object, "an object"))
            need(r.at("involution"), "result.involution", "pass", is_bool, "a boolean");
        need(r, "result", "hulls", is_array, "an array");
        need(r, "result", "samples", is_int, "an integer");
    } else if (command == "split") {
        if (need(r, "result", "lines", is_array, "an array")) {
            for (const auto& line : r.at("lines")) {
                need(line, "result.lines[]", "name", is_string, "a string");
                need(line, "result.lines[]", "status", is_string, "a string");
            }
        }
    } else if (command == "affine") {
        for (const char* key : {"hks", "eigenvalue_norm_one", "bounded_singular"})
            if (need(r, "result", key, is_object, "an object"))
                need(r.at(key), std::string("result.") + key, "pass", is_bool, "a boolean");
        need(r, "result", "note", is_string, "a string");
    } else if (command == "flowmetric") {
        need(r, "result", "geodesics", is_array, "an array");
        if (need(r, "result", "matrix", is_array, "an array"))
            for (const auto& row : r.at("matrix"))
                if (!row.is_array()) problems.push_back("result.matrix rows must be arrays");
        need(r, "result", "truncation", is_int, "an integer");
    }
    return problems;
}

}  // namespace repdyn::cli
