#include "liectrl/systemfile.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "liectrl/exprlang.hpp"

namespace liectrl {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};
using Section = std::map<std::string, Entry>;
using Sections = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw Error(where + ": " + msg);
}

Sections parse_sections(std::istream& in, const std::string& where) {
    Sections sections;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(where + " line " + std::to_string(lineno), "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(where + " line " + std::to_string(lineno), "expected key = value");
        if (section.empty())
            fail(where + " line " + std::to_string(lineno), "key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        sections[section][key] = Entry{trim(t.substr(eq + 1)), lineno, false};
    }
    return sections;
}

double parse_double(const std::string& where, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        fail(where, "value of '" + key + "' is not a number: '" + value + "'");
    }
}

long parse_int(const std::string& where, const std::string& key, const std::string& value) {
    const double v = parse_double(where, key, value);
    const long i = static_cast<long>(v);
    if (static_cast<double>(i) != v) fail(where, "value of '" + key + "' is not an integer");
    return i;
}

Eigen::VectorXd parse_vector(const std::string& where, const std::string& key,
                             const std::string& value, int expected) {
    std::istringstream in(value);
    std::vector<double> entries;
    std::string tok;
    while (in >> tok) entries.push_back(parse_double(where, key, tok));
    if (expected >= 0 && static_cast<int>(entries.size()) != expected)
        fail(where, "'" + key + "' needs " + std::to_string(expected) + " entries, got " +
                        std::to_string(entries.size()));
    Eigen::VectorXd v(static_cast<int>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<int>(i)) = entries[i];
    return v;
}

class FileBuilder {
public:
    FileBuilder(Sections sections, const std::string& where) : sections_(std::move(sections)), where_(where) {}

    LoadedSystem build() {
        LoadedSystem loaded{build_system(), numeric_params()};
        check_unused();
        return loaded;
    }

private:
    Sections sections_;
    std::string where_;

    Section& section(const std::string& name) {
        const auto it = sections_.find(name);
        if (it == sections_.end()) fail(where_, "missing [" + name + "] section");
        return it->second;
    }

    bool has(const std::string& sec, const std::string& key) {
        const auto it = sections_.find(sec);
        return it != sections_.end() && it->second.count(key) > 0;
    }

    std::string get(const std::string& sec, const std::string& key) {
        Section& s = section(sec);
        const auto it = s.find(key);
        if (it == s.end()) fail(where_, "missing '" + key + "' in [" + sec + "]");
        it->second.used = true;
        return it->second.value;
    }

    std::string get_or(const std::string& sec, const std::string& key, const std::string& fallback) {
        return has(sec, key) ? get(sec, key) : fallback;
    }

    void check_unused() {
        for (auto& [sec, entries] : sections_)
            for (auto& [key, entry] : entries)
                if (!entry.used) {
                    const std::string at =
                        entry.line > 0 ? " line " + std::to_string(entry.line) : " (--param)";
                    fail(where_ + at, "unused key '" + key + "' in [" + sec + "]");
                }
    }

    NumericParams numeric_params() {
        NumericParams p;
        if (sections_.count("numeric") == 0) return p;
        p.tol = parse_double(where_, "tol", get_or("numeric", "tol", "1e-8"));
        p.fd_step = parse_double(where_, "fd_step", get_or("numeric", "fd_step", "1e-5"));
        p.grid = static_cast<int>(parse_int(where_, "grid", get_or("numeric", "grid", "11")));
        p.seed = static_cast<std::uint64_t>(parse_int(where_, "seed", get_or("numeric", "seed", "0")));
        if (!(p.tol > 0.0 && p.tol < 1.0)) fail(where_, "tol must be in (0, 1)");
        if (p.fd_step <= 0.0) fail(where_, "fd_step must be positive");
        if (p.grid < 1) fail(where_, "grid must be >= 1");
        return p;
    }

    ControlRange control_range(int m) {
        const Eigen::VectorXd lo = parse_vector(where_, "lower", get("control", "lower"), m);
        const Eigen::VectorXd hi = parse_vector(where_, "upper", get("control", "upper"), m);
        try {
            return ControlRange(lo, hi);
        } catch (const Error& e) {
            fail(where_, e.what());
        }
    }

    void require_group(const std::string& catalog, const std::string& expected,
                       const std::string& actual) {
        if (expected != actual)
            fail(where_, "map catalog " + catalog + " requires group name = " + expected +
                             ", got '" + actual + "'");
    }

    void require_m(const std::string& catalog, int expected, int actual) {
        if (expected != actual)
            fail(where_, "m = " + std::to_string(actual) + " does not match catalog " + catalog +
                             " (m = " + std::to_string(expected) + ")");
    }

    LinearSystem build_system() {
        const std::string group = get("group", "name");
        const int m = static_cast<int>(parse_int(where_, "m", get("control", "m")));
        if (m < 1) fail(where_, "m must be >= 1");
        ControlRange range = control_range(m);

        if (has("map", "catalog")) {
            const std::string catalog = get("map", "catalog");
            for (const auto& [key, entry] : section("map"))
                if (key != "catalog")
                    fail(where_ + " line " + std::to_string(entry.line),
                         "map must be exactly one of catalog or expressions; unexpected '" + key +
                             "'");
            if (catalog == "paper-sl2") {
                require_group(catalog, "sl2", group);
                require_m(catalog, 1, m);
                LinearSystem sys = make_paper_sl2();
                sys.range = range;
                return sys;
            }
            if (catalog == "paper-aff2") {
                require_group(catalog, "aff2", group);
                require_m(catalog, 1, m);
                const double a = parse_double(where_, "a", get_or("group", "a", "1"));
                const double d = parse_double(where_, "d", get_or("group", "d", "1"));
                if (d == 0.0) fail(where_, "drift parameter d must be nonzero");
                LinearSystem sys = make_paper_aff2(a, d);
                sys.range = range;
                return sys;
            }
            if (catalog == "paper-heisenberg") {
                require_group(catalog, "heisenberg", group);
                require_m(catalog, 1, m);
                LinearSystem sys = make_paper_heisenberg();
                sys.range = range;
                return sys;
            }
            if (catalog == "linear") {
                require_group(catalog, "rn", group);
                const int n = static_cast<int>(parse_int(where_, "n", get("group", "n")));
                if (n < 1) fail(where_, "n must be >= 1");
                const Eigen::VectorXd a = parse_vector(where_, "A", get("group", "A"), n * n);
                const Eigen::VectorXd b = parse_vector(where_, "B", get("group", "B"), n * m);
                Eigen::MatrixXd A(n, n), B(n, m);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) A(i, j) = a(i * n + j);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < m; ++j) B(i, j) = b(i * m + j);
                try {
                    return make_rn_linear(A, B, range);
                } catch (const Error& e) {
                    fail(where_, e.what());
                }
            }
            fail(where_, "unknown map catalog '" + catalog + "'");
        }

        // Expression block. The drift inverse must be spelled out: there is no
        // numeric inversion of group maps.
        LieGroupModel model;
        if (group == "rn")
            model = make_rn(static_cast<int>(parse_int(where_, "n", get("group", "n"))));
        else
            model = model_by_name(group);
        const int N = model.ambient_dim;

        auto collect = [&](const std::string& prefix) {
            std::vector<std::string> sources;
            for (int i = 1; i <= N; ++i) sources.push_back(get("map", prefix + std::to_string(i)));
            return sources;
        };
        try {
            const CompiledMap F = compile_map(collect("F"), 'u', m);
            const CompiledMap f0 = compile_map(collect("f0_"), 'x', N);
            const CompiledMap f0inv = compile_map(collect("f0inv_"), 'x', N);
            return LinearSystem{
                "custom-" + group, model,
                [F](const Eigen::VectorXd& u) -> GroupPoint { return F(u); },
                GroupMap{[f0](const GroupPoint& x) -> GroupPoint { return f0(x); },
                         [f0inv](const GroupPoint& x) -> GroupPoint { return f0inv(x); }},
                range};
        } catch (const ParseError& e) {
            fail(where_, std::string("expression error: ") + e.what());
        }
    }
};

LoadedSystem build_from_text(const std::string& text, const std::string& where,
                             const ParamOverrides& overrides) {
    std::istringstream in(text);
    Sections sections = parse_sections(in, where);
    for (const auto& [key, value] : overrides) sections["group"][key] = Entry{value, 0, false};
    return FileBuilder(std::move(sections), where).build();
}

}  // namespace

bool is_builtin_system(const std::string& name) {
    return name == "paper-sl2" || name == "paper-aff2" || name == "paper-heisenberg";
}

LoadedSystem builtin_system(const std::string& name, const ParamOverrides& overrides) {
    std::string text;
    if (name == "paper-sl2")
        text = "[group]\nname = sl2\n[control]\nm = 1\nlower = -1\nupper = 1\n"
               "[map]\ncatalog = paper-sl2\n";
    else if (name == "paper-aff2")
        text = "[group]\nname = aff2\na = 1\nd = 1\n[control]\nm = 1\nlower = -1\nupper = 1\n"
               "[map]\ncatalog = paper-aff2\n";
    else if (name == "paper-heisenberg")
        text = "[group]\nname = heisenberg\n[control]\nm = 1\nlower = -1\nupper = 1\n"
               "[map]\ncatalog = paper-heisenberg\n";
    else
        throw Error("unknown builtin system '" + name + "'");
    return build_from_text(text, "builtin " + name, overrides);
}

LoadedSystem load_system_file(const std::string& path, const ParamOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read system file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return build_from_text(buf.str(), path, overrides);
}

LoadedSystem resolve_system(const std::string& name_or_path, const ParamOverrides& overrides) {
    if (is_builtin_system(name_or_path)) return builtin_system(name_or_path, overrides);
    return load_system_file(name_or_path, overrides);
}

}  // namespace liectrl
