#include "liectrl/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <json.hpp>
#include <optional>
#include <ostream>

#include "liectrl/analysis.hpp"
#include "liectrl/systemfile.hpp"

namespace liectrl {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Full-precision formatting for replayable data (trajectories, CSV).
std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
    std::string s = "[";
    for (int i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v(i));
    return s + "]";
}

// Row-major with explicit dims: "4x3 [3 2 1; -9 -4 -1; ...]".
std::string fmt_matrix(const Eigen::MatrixXd& M) {
    std::string s = std::to_string(M.rows()) + "x" + std::to_string(M.cols()) + " [";
    for (int i = 0; i < M.rows(); ++i) {
        if (i) s += "; ";
        for (int j = 0; j < M.cols(); ++j) s += (j ? " " : "") + fmt(M(i, j));
    }
    return s + "]";
}

ordered_json json_matrix(const Eigen::MatrixXd& M) {
    ordered_json j;
    j["rows"] = M.rows();
    j["cols"] = M.cols();
    std::vector<double> data;
    for (int i = 0; i < M.rows(); ++i)
        for (int jj = 0; jj < M.cols(); ++jj) data.push_back(M(i, jj));
    j["data"] = data;
    return j;
}

ordered_json json_vector(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

struct CliOptions {
    std::string system;
    std::optional<double> tol;
    std::optional<double> fd_step;
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    std::optional<int> k;
    std::optional<int> count;
    std::vector<std::string> params;
    std::string format = "text";
};

void add_common_options(CLI::App* sub, CliOptions& o) {
    sub->add_option("system", o.system,
                    "builtin system (paper-sl2 | paper-aff2 | paper-heisenberg) or a system file")
        ->required();
    sub->add_option("--tol", o.tol, "relative rank tolerance (default 1e-8)");
    sub->add_option("--fd-step", o.fd_step, "finite-difference step (default 1e-5)");
    sub->add_option("--grid", o.grid, "grid points per control axis (default 11)");
    sub->add_option("--seed", o.seed, "RNG seed (default 0)");
    sub->add_option("--k", o.k, "time horizon");
    sub->add_option("--count", o.count, "sample / trajectory count");
    sub->add_option("--param", o.params, "group parameter override, e.g. --param a=0");
    sub->add_option("--format", o.format, "output format: text | json")
        ->check(CLI::IsMember({"text", "json"}));
}

ParamOverrides parse_overrides(const std::vector<std::string>& params) {
    ParamOverrides overrides;
    for (const std::string& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("--param expects key=value, got '" + p + "'");
        overrides[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return overrides;
}

// One report in both renderings; lines are emitted in insertion order so the
// text and JSON documents stay aligned.
class Report {
public:
    Report(const std::string& command, const CliOptions& o, const LoadedSystem& loaded) {
        const LinearSystem& sys = loaded.system;
        set("command", command + " " + o.system);
        set("system", sys.name);
        set("group", sys.model.name + " (ambient_dim " + std::to_string(sys.model.ambient_dim) +
                         ", group_dim " + std::to_string(sys.model.group_dim) + ")");
        json_["group"] = {{"name", sys.model.name},
                          {"ambient_dim", sys.model.ambient_dim},
                          {"group_dim", sys.model.group_dim}};
        set("control", "m " + std::to_string(sys.range.dim()) + ", lower " +
                           fmt_vector(sys.range.lower) + ", upper " + fmt_vector(sys.range.upper));
        json_["control"] = {{"m", sys.range.dim()},
                            {"lower", json_vector(sys.range.lower)},
                            {"upper", json_vector(sys.range.upper)}};
        const NumericParams& p = loaded.params;
        set("parameters", "tol " + fmt(p.tol) + ", fd_step " + fmt(p.fd_step) + ", grid " +
                              std::to_string(p.grid) + ", seed " + std::to_string(p.seed));
        json_["parameters"] = {
            {"tol", p.tol}, {"fd_step", p.fd_step}, {"grid", p.grid}, {"seed", p.seed}};
    }

    void field(const std::string& key, const std::string& text_value, ordered_json json_value) {
        lines_.emplace_back(key, text_value);
        json_[key] = std::move(json_value);
    }

    void set(const std::string& key, const std::string& value) { field(key, value, value); }
    void set(const std::string& key, long value) {
        field(key, std::to_string(value), value);
    }
    void set(const std::string& key, double value) { field(key, fmt(value), value); }
    void set(const std::string& key, bool value) {
        field(key, value ? "yes" : "no", value);
    }
    void matrix(const std::string& key, const Eigen::MatrixXd& M) {
        field(key, fmt_matrix(M), json_matrix(M));
    }

    void render(const std::string& format, double wall_ms, std::ostream& out) const {
        if (format == "json") {
            ordered_json j = json_;
            j["wall_time_ms"] = wall_ms;
            out << j.dump(2) << "\n";
            return;
        }
        for (const auto& [key, value] : lines_) out << key << ": " << value << "\n";
        out << "wall_time_ms: " << fmt(wall_ms) << "\n";
    }

    ordered_json& json() { return json_; }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
    ordered_json json_;
};

NumericParams apply_overrides(NumericParams p, const CliOptions& o) {
    if (o.tol) p.tol = *o.tol;
    if (o.fd_step) p.fd_step = *o.fd_step;
    if (o.grid) p.grid = *o.grid;
    if (o.seed) p.seed = *o.seed;
    if (!(p.tol > 0.0 && p.tol < 1.0)) throw Error("--tol must be in (0, 1)");
    if (p.fd_step <= 0.0) throw Error("--fd-step must be positive");
    if (p.grid < 1) throw Error("--grid must be >= 1");
    return p;
}

int cmd_check(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const int samples = o.count.value_or(200);
    const auto start = std::chrono::steady_clock::now();
    const ValidationReport rep = validate(loaded.system, loaded.params.seed, samples);

    Report report("check", o, loaded);
    report.set("samples", static_cast<long>(samples));
    for (const CheckResult& c : rep.checks)
        report.field("check '" + c.name + "'",
                     "residual " + fmt(c.residual) + " <= " + fmt(c.threshold) + ": " +
                         (c.pass ? "pass" : "FAIL"),
                     ordered_json{{"name", c.name},
                                  {"residual", c.residual},
                                  {"threshold", c.threshold},
                                  {"pass", c.pass}});
    report.set("overall", rep.pass() ? std::string("pass") : std::string("FAIL"));
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    report.render(o.format, ms, out);
    return 0;
}

int cmd_analyze(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const NumericParams& p = loaded.params;
    const auto start = std::chrono::steady_clock::now();
    const ControlGrid grid =
        control_grid(loaded.system.range, p.grid, 2.0 * p.fd_step, p.seed);
    const AccessibilityReport rep = accessibility_report(loaded.system, grid, p.tol, p.fd_step);

    Report report("analyze", o, loaded);
    report.set("grid", rep.grid_description + " [" + std::to_string(rep.grid_points) + " points]");
    report.matrix("psi", rep.psi);
    report.matrix("W_basis", rep.W.vectors);
    report.set("dim_W", static_cast<long>(rep.dim_W));
    report.set("dim_V", static_cast<long>(rep.dim_V));
    report.set("dim_h", static_cast<long>(rep.dim_h));
    report.set("n", static_cast<long>(rep.n));
    if (rep.dim_h > 0) {
        const AlgebraBasis psi_h = span_of_columns(rep.psi * rep.h.vectors, p.tol);
        report.set("h_psi_invariance_angle", max_principal_angle(psi_h, rep.h));
    }
    report.set("verdict", rep.verdict);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    report.render(o.format, ms, out);
    return rep.accessible ? 0 : 1;
}

int cmd_adrank(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const auto start = std::chrono::steady_clock::now();
    const AdRankReport rep = ad_rank_report(loaded.system, loaded.params.fd_step, loaded.params.tol);

    Report report("adrank", o, loaded);
    report.matrix("psi", rep.psi);
    report.matrix("V_matrix", rep.V_matrix);
    report.set("rank", static_cast<long>(rep.rank));
    report.set("n", static_cast<long>(rep.n));
    report.set("verdict", rep.verdict);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    report.render(o.format, ms, out);
    return rep.locally_controllable ? 0 : 1;
}

int cmd_regular(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const int k = o.k.value_or(loaded.system.model.group_dim);
    const auto start = std::chrono::steady_clock::now();
    const ControlSequence zeros(k, Eigen::VectorXd::Zero(loaded.system.range.dim()));
    const int rank = regular_rank(loaded.system, k, zeros, loaded.params.fd_step, loaded.params.tol);

    Report report("regular", o, loaded);
    report.set("k", static_cast<long>(k));
    report.set("controls", std::string("zero sequence"));
    report.set("rank", static_cast<long>(rank));
    report.set("n", static_cast<long>(loaded.system.model.group_dim));
    report.set("regular", rank == loaded.system.model.group_dim);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    report.render(o.format, ms, out);
    return 0;
}

int cmd_solve(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const LinearSystem& sys = loaded.system;
    const int k = o.k.value_or(5);
    const auto start = std::chrono::steady_clock::now();

    Rng rng(loaded.params.seed);
    const int m = sys.range.dim();
    ordered_json controls_json = ordered_json::array();
    ordered_json points_json = ordered_json::array();
    std::vector<std::string> lines;

    GroupPoint g = sys.model.identity;
    points_json.push_back(json_vector(g));
    std::string row = "  0:";
    for (int i = 0; i < g.size(); ++i) row += " " + fmt17(g(i));
    lines.push_back(row);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd u(m);
        for (int j = 0; j < m; ++j) u(j) = rng.uniform(sys.range.lower(j), sys.range.upper(j));
        g = step(sys, u, g);
        controls_json.push_back(json_vector(u));
        points_json.push_back(json_vector(g));
        row = "  " + std::to_string(i + 1) + ":";
        for (int j = 0; j < g.size(); ++j) row += " " + fmt17(g(j));
        lines.push_back(row);
    }

    Report report("solve", o, loaded);
    report.set("k", static_cast<long>(k));
    report.field("controls", "(seeded uniform)", controls_json);
    std::string traj = "(" + std::to_string(k + 1) + " points)";
    for (const std::string& l : lines) traj += "\n" + l;
    report.field("trajectory", traj, points_json);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    report.render(o.format, ms, out);
    return 0;
}

int cmd_sample(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const int k = o.k.value_or(5);
    const int count = o.count.value_or(1000);
    const SampleCloud cloud = sample_reachable(loaded.system, k, count, loaded.params.seed);

    out << "k,seed,idx";
    for (int i = 1; i <= loaded.system.model.ambient_dim; ++i) out << ",c" << i;
    out << "\n";
    for (int idx = 0; idx < cloud.count; ++idx) {
        out << cloud.k << "," << cloud.seed << "," << idx;
        for (int i = 0; i < cloud.points[idx].size(); ++i)
            out << "," << fmt17(cloud.points[idx](i));
        out << "\n";
    }
    return 0;
}

int cmd_probe(const CliOptions& o, std::ostream& out) {
    LoadedSystem loaded = resolve_system(o.system, parse_overrides(o.params));
    loaded.params = apply_overrides(loaded.params, o);
    const int k = o.k.value_or(3);
    const int count = o.count.value_or(2000);
    const auto start = std::chrono::steady_clock::now();
    const ControlSetProbe probe = control_set_probe(loaded.system, k, count, loaded.params.seed);

    Report report("probe", o, loaded);
    report.set("k", static_cast<long>(k));
    report.set("count", static_cast<long>(count));
    report.set("ad_rank", static_cast<long>(probe.ad_rank));
    report.set("n", static_cast<long>(probe.n));
    report.set("gate", probe.gate_passed ? std::string("passed")
                                         : std::string("precondition violated: the ad-rank "
                                                       "condition does not hold"));
    if (probe.gate_passed) {
        report.set("epsilon", probe.epsilon);
        report.set("overlap_fraction", probe.overlap_fraction);
        report.set("dim_forward_at_e", static_cast<long>(probe.dim_forward));
        report.set("dim_reversed_at_e", static_cast<long>(probe.dim_reversed));
        report.set("full_dimension_both", probe.full_dimension_both);
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    report.render(o.format, ms, out);
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"accessibility and local controllability of discrete-time linear systems on Lie "
                 "groups"};
    app.name("liectrl");
    app.require_subcommand(1);

    CliOptions o;
    CLI::App* check = app.add_subcommand("check", "validate the defining axioms of a system");
    CLI::App* analyze = app.add_subcommand("analyze", "accessibility via the subalgebra h");
    CLI::App* adrank = app.add_subcommand("adrank", "ad-rank test for local controllability");
    CLI::App* regular = app.add_subcommand("regular", "rank of the k-step endpoint Jacobian");
    CLI::App* solve = app.add_subcommand("solve", "one seeded trajectory from the identity");
    CLI::App* sample = app.add_subcommand("sample", "reachable-set sample cloud as CSV");
    CLI::App* probe = app.add_subcommand("probe", "empirical control-set probe around e");
    for (CLI::App* sub : {check, analyze, adrank, regular, solve, sample, probe})
        add_common_options(sub, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(o, out);
        if (analyze->parsed()) return cmd_analyze(o, out);
        if (adrank->parsed()) return cmd_adrank(o, out);
        if (regular->parsed()) return cmd_regular(o, out);
        if (solve->parsed()) return cmd_solve(o, out);
        if (sample->parsed()) return cmd_sample(o, out);
        return cmd_probe(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace liectrl
