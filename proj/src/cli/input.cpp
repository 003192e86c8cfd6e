#include "repdyn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>

namespace repdyn::cli {

std::string InputError::diagnostic(const std::string& path) const {
    return path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": error: " + what();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file", 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_number_text(const std::string& text) {
    auto parse_one = [&](std::string_view s) {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
            throw PreconditionError("not a number: \"" + text + "\"");
        return value;
    };
    const std::string_view view(text);
    const auto slash = view.find('/');
    if (slash == std::string_view::npos) return parse_one(view);
    const double p = parse_one(view.substr(0, slash));
    const double q = parse_one(view.substr(slash + 1));
    if (q == 0.0) throw PreconditionError("zero denominator in \"" + text + "\"");
    return p / q;
}

namespace {

using PathStep = std::variant<std::string, std::size_t>;
using Path = std::vector<PathStep>;

struct SemanticError {
    Path path;
    std::string message;
};

// Finds the byte offset at which the value addressed by `path` starts in a
// syntactically valid JSON text.
class Locator {
public:
    explicit Locator(const std::string& text) : s_(text) {}

    std::size_t find(const Path& path) {
        i_ = 0;
        return descend(path, 0);
    }

private:
    void ws() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\r' || s_[i_] == '\t')) ++i_;
    }
    std::string string_token() {
        std::string out;
        ++i_;  // opening quote
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\') ++i_;
            if (i_ < s_.size()) out += s_[i_++];
        }
        ++i_;
        return out;
    }
    void skip_value() {
        ws();
        if (i_ >= s_.size()) return;
        if (s_[i_] == '"') {
            string_token();
        } else if (s_[i_] == '{' || s_[i_] == '[') {
            int depth = 0;
            while (i_ < s_.size()) {
                const char c = s_[i_];
                if (c == '"') {
                    string_token();
                    continue;
                }
                if (c == '{' || c == '[') ++depth;
                if (c == '}' || c == ']') --depth;
                ++i_;
                if (depth == 0) break;
            }
        } else {
            while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != '}' && s_[i_] != ']') ++i_;
        }
    }
    std::size_t descend(const Path& path, std::size_t depth) {
        ws();
        if (depth == path.size() || i_ >= s_.size()) return i_;
        const std::size_t here = i_;
        if (s_[i_] == '{' && std::holds_alternative<std::string>(path[depth])) {
            ++i_;
            while (true) {
                ws();
                if (i_ >= s_.size() || s_[i_] == '}') return here;
                const std::string key = string_token();
                ws();
                ++i_;  // ':'
                if (key == std::get<std::string>(path[depth])) return descend(path, depth + 1);
                skip_value();
                ws();
                if (i_ < s_.size() && s_[i_] == ',') ++i_;
            }
        }
        if (s_[i_] == '[' && std::holds_alternative<std::size_t>(path[depth])) {
            ++i_;
            for (std::size_t idx = 0;; ++idx) {
                ws();
                if (i_ >= s_.size() || s_[i_] == ']') return here;
                if (idx == std::get<std::size_t>(path[depth])) return descend(path, depth + 1);
                skip_value();
                ws();
                if (i_ < s_.size() && s_[i_] == ',') ++i_;
            }
        }
        return here;
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

std::string describe(const Path& path) {
    std::string out;
    for (const auto& step : path) {
        if (const auto* key = std::get_if<std::string>(&step))
            out += (out.empty() ? "" : ".") + *key;
        else
            out += "[" + std::to_string(std::get<std::size_t>(step)) + "]";
    }
    return out.empty() ? "document" : out;
}

nlohmann::json parse_document(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, column] = line_column(text, offset);
        std::string msg = e.what();
        const auto cut = msg.find("syntax error");
        if (cut != std::string::npos) msg = msg.substr(cut);
        throw InputError(msg, line, column);
    }
}

[[noreturn]] void fail(const Path& path, const std::string& message) { throw SemanticError{path, message}; }

Path child(Path path, PathStep step) {
    path.push_back(std::move(step));
    return path;
}

const nlohmann::json& member(const nlohmann::json& obj, const Path& path, const std::string& key) {
    if (!obj.is_object()) fail(path, describe(path) + " must be an object");
    if (!obj.contains(key)) fail(path, describe(path) + " is missing \"" + key + "\"");
    return obj.at(key);
}

double number(const nlohmann::json& v, const Path& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return parse_number_text(v.get<std::string>());
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }
    fail(path, describe(path) + " must be a number or a \"p/q\" string");
}

std::string string_value(const nlohmann::json& v, const Path& path) {
    if (!v.is_string()) fail(path, describe(path) + " must be a string");
    return v.get<std::string>();
}

Word word_value(const nlohmann::json& v, const Path& path, const std::vector<std::string>& names) {
    const std::string text = string_value(v, path);
    try {
        return Word::parse(text, names);
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

BoundaryPoint boundary_value(const nlohmann::json& v, const Path& path, const std::vector<std::string>& names) {
    if (!v.is_object()) fail(path, describe(path) + " must be an object with \"prefix\" and \"period\"");
    const int rank = static_cast<int>(names.size());
    Word prefix(rank), period(rank);
    if (v.contains("prefix")) prefix = word_value(v.at("prefix"), child(path, "prefix"), names);
    if (v.contains("period")) period = word_value(v.at("period"), child(path, "period"), names);
    try {
        return BoundaryPoint(std::move(prefix), std::move(period));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

template <class Fn>
auto with_locations(const std::string& text, Fn&& fn) {
    const nlohmann::json doc = parse_document(text);
    try {
        return fn(doc);
    } catch (const SemanticError& e) {
        const auto [line, column] = line_column(text, Locator(text).find(e.path));
        throw InputError(e.message, line, column);
    }
}

}  // namespace

AffineGeneratorSet LinearInput::affine() const {
    std::vector<AffineMap> maps;
    for (int i = 0; i < gens.rank(); ++i) {
        const Vec v = translations ? (*translations)[static_cast<std::size_t>(i)] : Vec::Zero(n);
        maps.emplace_back(gens.images()[static_cast<std::size_t>(i)], v);
    }
    return AffineGeneratorSet(gens.names(), std::move(maps));
}

LinearInput parse_linear_input(const std::string& text) {
    return with_locations(text, [](const nlohmann::json& doc) {
        const Path root;
        const auto& n_json = member(doc, root, "n");
        if (!n_json.is_number_integer()) fail({"n"}, "n must be an integer");
        const int n = n_json.get<int>();
        if (n < kMinDim || n > kMaxDim) fail({"n"}, "n must lie in [2, 16]");

        const auto& gens_json = member(doc, root, "generators");
        if (!gens_json.is_array() || gens_json.empty()) fail({"generators"}, "generators must be a nonempty array");
        std::vector<std::string> names;
        std::vector<Matrix> images;
        for (std::size_t g = 0; g < gens_json.size(); ++g) {
            const Path gp{"generators", g};
            const auto& entry = gens_json[g];
            std::string name = entry.is_object() && entry.contains("name")
                                   ? string_value(entry.at("name"), child(gp, "name"))
                                   : "g" + std::to_string(g + 1);
            if (name.empty() || name.find_first_of(" \t\n^") != std::string::npos)
                fail(child(gp, "name"), "generator names must be nonempty and free of spaces and '^'");
            if (std::find(names.begin(), names.end(), name) != names.end())
                fail(child(gp, "name"), "duplicate generator name \"" + name + "\"");
            const Path rp = child(gp, "rows");
            const auto& rows = member(entry, gp, "rows");
            if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
                fail(rp, "rows must be an array of " + std::to_string(n) + " rows");
            Mat m(n, n);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const Path row_path = child(rp, i);
                if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(n))
                    fail(row_path, "row must have " + std::to_string(n) + " entries");
                for (std::size_t j = 0; j < rows[i].size(); ++j)
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        number(rows[i][j], child(row_path, j));
            }
            try {
                images.emplace_back(m);
            } catch (const Error& e) {
                fail(rp, std::string("generator \"") + name + "\": " + e.what());
            }
            names.push_back(std::move(name));
        }
        LinearInput input{n, GeneratorSet(names, std::move(images)), std::nullopt, {}};

        if (doc.contains("translations")) {
            const Path tp{"translations"};
            const auto& tr = doc.at("translations");
            if (!tr.is_array() || tr.size() != names.size())
                fail(tp, "translations must hold one vector per generator");
            std::vector<Vec> vs;
            for (std::size_t g = 0; g < tr.size(); ++g) {
                if (!tr[g].is_array() || tr[g].size() != static_cast<std::size_t>(n))
                    fail(child(tp, g), "translation must have " + std::to_string(n) + " entries");
                Vec v(n);
                for (std::size_t j = 0; j < tr[g].size(); ++j)
                    v[static_cast<Eigen::Index>(j)] = number(tr[g][j], child(child(tp, g), j));
                vs.push_back(std::move(v));
            }
            input.translations = std::move(vs);
        }

        if (doc.contains("lines")) {
            const Path lp{"lines"};
            const auto& lines = doc.at("lines");
            if (!lines.is_array()) fail(lp, "lines must be an array");
            for (std::size_t i = 0; i < lines.size(); ++i) {
                const Path ip = child(lp, i);
                const auto& entry = lines[i];
                if (!entry.is_object()) fail(ip, "line must be an object");
                LineSpec spec;
                spec.name = entry.contains("name") ? string_value(entry.at("name"), child(ip, "name"))
                                                   : "line" + std::to_string(i + 1);
                if (entry.contains("period")) {
                    spec.period = word_value(entry.at("period"), child(ip, "period"), names);
                    if (spec.period->empty() || !spec.period->is_cyclically_reduced())
                        fail(child(ip, "period"), "period must be a nonempty cyclically reduced word");
                } else if (entry.contains("forward") && entry.contains("backward")) {
                    spec.forward = boundary_value(entry.at("forward"), child(ip, "forward"), names);
                    spec.backward = boundary_value(entry.at("backward"), child(ip, "backward"), names);
                } else if (entry.contains("seed")) {
                    if (!entry.at("seed").is_number_unsigned()) fail(child(ip, "seed"), "seed must be a nonnegative integer");
                    spec.seed = entry.at("seed").get<std::uint64_t>();
                } else {
                    fail(ip, "line needs \"period\", \"forward\"/\"backward\", or \"seed\"");
                }
                input.lines.push_back(std::move(spec));
            }
        }
        return input;
    });
}

FlowMetricInput parse_flowmetric_input(const std::string& text) {
    return with_locations(text, [](const nlohmann::json& doc) {
        const Path root;
        FlowMetricInput input;
        const auto& alphabet = member(doc, root, "alphabet");
        if (!alphabet.is_array() || alphabet.empty()) fail({"alphabet"}, "alphabet must be a nonempty array");
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            input.alphabet.push_back(string_value(alphabet[i], {"alphabet", i}));
        const int rank = static_cast<int>(input.alphabet.size());

        const auto& geos = member(doc, root, "geodesics");
        if (!geos.is_array() || geos.empty()) fail({"geodesics"}, "geodesics must be a nonempty array");
        for (std::size_t i = 0; i < geos.size(); ++i) {
            const Path gp{"geodesics", i};
            const auto& g = geos[i];
            if (!g.is_object()) fail(gp, "geodesic must be an object");
            std::string name = g.contains("name") ? string_value(g.at("name"), child(gp, "name"))
                                                  : "geodesic" + std::to_string(i + 1);
            Word anchor = g.contains("anchor") ? word_value(g.at("anchor"), child(gp, "anchor"), input.alphabet)
                                               : Word(rank);
            BoundaryPoint fwd = boundary_value(member(g, gp, "forward"), child(gp, "forward"), input.alphabet);
            BoundaryPoint bwd = boundary_value(member(g, gp, "backward"), child(gp, "backward"), input.alphabet);
            if (fwd.period().empty() || bwd.period().empty())
                fail(gp, "geodesic rays must be eventually periodic (nonempty period)");
            if (fwd.at(0) == bwd.at(0)) fail(gp, "forward and backward rays share their first letter");
            input.geodesics.push_back(GeodesicSpec{std::move(name), std::move(anchor), std::move(fwd), std::move(bwd)});
        }
        return input;
    });
}

}  // namespace repdyn::cli
