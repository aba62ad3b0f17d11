#include "pbsim/config.hpp"

#include "pbsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

namespace pbsim {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;  // 0 for overrides
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool known_section(const std::string& s) {
    return s == "params" || s == "space" || s == "solver" || s == "task.steady" ||
           s == "task.sweep" || s == "task.g2tau" || s == "task.validate" ||
           s == "task.fockpop";
}

struct Tokenized {
    std::vector<Entry> entries;
    std::vector<std::string> sections;  // headers in order of appearance
};

Tokenized tokenize(std::string_view text) {
    Tokenized result;
    auto& entries = result.entries;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = trim(text.substr(pos, eol - pos));
        ++line_no;
        pos = eol + 1;
        if (line.empty() || line.front() == '#') {
            if (eol == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section))
                throw ValidationError("line " + std::to_string(line_no) + ": unknown section [" +
                                      section + "]");
            if (std::find(result.sections.begin(), result.sections.end(), section) ==
                result.sections.end())
                result.sections.push_back(section);
        } else {
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
            if (section.empty())
                throw ParseError("line " + std::to_string(line_no) + ": key before any [section]");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty())
                throw ParseError("line " + std::to_string(line_no) + ": empty key");
            if (value.empty())
                throw ParseError("line " + std::to_string(line_no) + ": empty value for '" + key +
                                 "'");
            for (const auto& e : entries)
                if (e.section == section && e.key == key)
                    throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" +
                                     section + "." + key + "'");
            entries.push_back({section, key, value, line_no});
        }
        if (eol == text.size()) break;
    }
    return result;
}

// Splits a dotted override path into (section, key); sections may themselves
// contain one dot ("task.sweep").
std::pair<std::string, std::string> split_override(const std::string& path) {
    const std::size_t first = path.find('.');
    if (first == std::string::npos)
        throw ValidationError("override '" + path + "' is not a dotted key path");
    std::string section = path.substr(0, first);
    std::string key = path.substr(first + 1);
    if (section == "task") {
        const std::size_t second = key.find('.');
        if (second == std::string::npos)
            throw ValidationError("override '" + path + "' names no key inside the task section");
        section += "." + key.substr(0, second);
        key = key.substr(second + 1);
    }
    if (!known_section(section))
        throw ValidationError("override '" + path + "' names unknown section '" + section + "'");
    return {section, key};
}

[[noreturn]] void bad_number(const Entry& e) {
    throw ParseError((e.line ? "line " + std::to_string(e.line) + ": " : "") +
                     "invalid number for '" + e.section + "." + e.key + "': " + e.value);
}

double to_double(const Entry& e) {
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    double v{};
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) bad_number(e);
    return v;
}

long long to_int(const Entry& e) {
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    long long v{};
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) bad_number(e);
    return v;
}

std::vector<int> to_order_list(const Entry& e) {
    std::vector<int> orders;
    std::stringstream ss{e.value};
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto t = trim(item);
        int v{};
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size()) bad_number(e);
        orders.push_back(v);
    }
    if (orders.empty()) bad_number(e);
    return orders;
}

struct AxisDraft {
    std::optional<AxisName> name;
    std::optional<double> start, stop;
    std::optional<int> steps;
    AxisSpacing spacing = AxisSpacing::linear;
    bool touched = false;
};

void reject_unknown(const Entry& e) {
    throw ValidationError((e.line ? "line " + std::to_string(e.line) + ": " : "") +
                          "unknown key '" + e.section + "." + e.key + "'");
}

}  // namespace

const char* to_string(TaskKind task) {
    switch (task) {
        case TaskKind::steady: return "steady";
        case TaskKind::sweep: return "sweep";
        case TaskKind::g2tau: return "g2tau";
        case TaskKind::validate: return "validate";
        case TaskKind::fockpop: return "fockpop";
    }
    return "?";
}

void GridSpec::validate(const std::string& what) const {
    if (!(start < stop)) throw ValidationError(what + ": start must be < stop");
    if (steps < 2) throw ValidationError(what + ": steps must be >= 2");
}

ExperimentConfig parse_config(std::string_view text,
                              const std::vector<ConfigOverride>& overrides) {
    Tokenized tok = tokenize(text);
    std::vector<Entry>& entries = tok.entries;

    for (const auto& ov : overrides) {
        auto [section, key] = split_override(ov.key);
        bool replaced = false;
        for (auto& e : entries)
            if (e.section == section && e.key == key) {
                e.value = ov.value;
                replaced = true;
            }
        if (!replaced) {
            entries.push_back({section, key, ov.value, 0});
            if (std::find(tok.sections.begin(), tok.sections.end(), section) ==
                tok.sections.end())
                tok.sections.push_back(section);
        }
    }

    std::vector<std::string> task_sections;
    for (const auto& s : tok.sections)
        if (s.starts_with("task.")) task_sections.push_back(s);
    if (task_sections.size() != 1)
        throw ValidationError("config must contain exactly one task section, found " +
                              std::to_string(task_sections.size()));

    ExperimentConfig cfg;
    const std::string& task_section = task_sections.front();
    if (task_section == "task.steady") cfg.task = TaskKind::steady;
    else if (task_section == "task.sweep") cfg.task = TaskKind::sweep;
    else if (task_section == "task.g2tau") cfg.task = TaskKind::g2tau;
    else if (task_section == "task.validate") cfg.task = TaskKind::validate;
    else cfg.task = TaskKind::fockpop;

    // defaults that depend on the task
    if (cfg.task == TaskKind::validate) cfg.delta_range = {0.5, 1.5, 101};
    if (cfg.task == TaskKind::fockpop) cfg.delta_range = {0.0, 2.0, 101};

    bool have_delta = false, have_g = false, have_theta = false, have_omega = false;
    std::array<AxisDraft, 3> axes;

    for (const auto& e : entries) {
        if (e.section == "params") {
            if (e.key == "delta_a") { cfg.params.delta_a = to_double(e); have_delta = true; }
            else if (e.key == "g") { cfg.params.g = to_double(e); have_g = true; }
            else if (e.key == "theta0") { cfg.params.theta0 = to_double(e); have_theta = true; }
            else if (e.key == "omega") { cfg.params.omega = to_double(e); have_omega = true; }
            else if (e.key == "kappa") cfg.params.kappa = to_double(e);
            else if (e.key == "kappa2") cfg.params.kappa2 = to_double(e);
            else reject_unknown(e);
        } else if (e.section == "space") {
            if (e.key == "dim") cfg.dim = int(to_int(e));
            else reject_unknown(e);
        } else if (e.section == "solver") {
            if (e.key == "residual_tol") cfg.solver.residual_tol = to_double(e);
            else if (e.key == "ode_rel_tol") cfg.solver.ode_rel_tol = to_double(e);
            else if (e.key == "ode_abs_tol") cfg.solver.ode_abs_tol = to_double(e);
            else if (e.key == "max_steps") cfg.solver.max_steps = to_int(e);
            else reject_unknown(e);
        } else if (e.section == task_section && cfg.task == TaskKind::sweep) {
            if (e.key == "orders") cfg.sweep.orders = to_order_list(e);
            else if (e.key == "threshold") cfg.sweep.threshold = to_double(e);
            else if (e.key.starts_with("axis") && e.key.size() > 5 && e.key[5] == '.') {
                const char idx_char = e.key[4];
                if (idx_char < '1' || idx_char > '3') reject_unknown(e);
                AxisDraft& ax = axes[idx_char - '1'];
                const std::string sub = e.key.substr(6);
                ax.touched = true;
                if (sub == "name") {
                    auto name = axis_name_from_string(e.value);
                    if (!name)
                        throw ValidationError("line " + std::to_string(e.line) +
                                              ": unknown axis name '" + e.value + "'");
                    ax.name = *name;
                } else if (sub == "start") ax.start = to_double(e);
                else if (sub == "stop") ax.stop = to_double(e);
                else if (sub == "steps") ax.steps = int(to_int(e));
                else if (sub == "spacing") {
                    if (e.value == "linear") ax.spacing = AxisSpacing::linear;
                    else if (e.value == "log") ax.spacing = AxisSpacing::log;
                    else
                        throw ValidationError("line " + std::to_string(e.line) +
                                              ": spacing must be 'linear' or 'log'");
                } else reject_unknown(e);
            } else reject_unknown(e);
        } else if (e.section == task_section && cfg.task == TaskKind::g2tau) {
            if (e.key == "tau_start") cfg.tau.start = to_double(e);
            else if (e.key == "tau_stop") cfg.tau.stop = to_double(e);
            else if (e.key == "tau_steps") cfg.tau.steps = int(to_int(e));
            else reject_unknown(e);
        } else if (e.section == task_section &&
                   (cfg.task == TaskKind::validate || cfg.task == TaskKind::fockpop)) {
            if (e.key == "delta_start") cfg.delta_range.start = to_double(e);
            else if (e.key == "delta_stop") cfg.delta_range.stop = to_double(e);
            else if (e.key == "steps") cfg.delta_range.steps = int(to_int(e));
            else if (e.key == "levels" && cfg.task == TaskKind::fockpop)
                cfg.fock_levels = int(to_int(e));
            else reject_unknown(e);
        } else if (e.section == task_section && cfg.task == TaskKind::steady) {
            reject_unknown(e);  // steady takes no keys
        } else {
            reject_unknown(e);  // key in a non-selected task section
        }
    }

    if (!have_delta) throw ValidationError("missing required key 'params.delta_a'");
    if (!have_g) throw ValidationError("missing required key 'params.g'");
    if (!have_theta) throw ValidationError("missing required key 'params.theta0'");
    if (!have_omega) throw ValidationError("missing required key 'params.omega'");

    cfg.params = SystemParams::make(cfg.params.delta_a, cfg.params.g, cfg.params.theta0,
                                    cfg.params.omega, cfg.params.kappa, cfg.params.kappa2);
    if (cfg.dim < 3) throw ValidationError("space.dim must be >= 3");
    cfg.solver.validate();

    switch (cfg.task) {
        case TaskKind::sweep: {
            cfg.sweep.base = cfg.params;
            cfg.sweep.dim = cfg.dim;
            cfg.sweep.axes.clear();
            for (int i = 0; i < 3; ++i) {
                const AxisDraft& ax = axes[i];
                if (!ax.touched) {
                    for (int j = i + 1; j < 3; ++j)
                        if (axes[j].touched)
                            throw ValidationError("sweep axes must be numbered contiguously "
                                                  "from axis1");
                    break;
                }
                if (!ax.name || !ax.start || !ax.stop || !ax.steps)
                    throw ValidationError("sweep axis" + std::to_string(i + 1) +
                                          " needs name, start, stop and steps");
                cfg.sweep.axes.push_back(
                    SweepAxis{*ax.name, *ax.start, *ax.stop, *ax.steps, ax.spacing});
            }
            cfg.sweep.validate();
            break;
        }
        case TaskKind::g2tau:
            if (cfg.tau.start != 0.0)
                throw ValidationError("task.g2tau: tau_start must be 0");
            cfg.tau.validate("task.g2tau");
            break;
        case TaskKind::validate:
            cfg.delta_range.validate("task.validate");
            break;
        case TaskKind::fockpop:
            cfg.delta_range.validate("task.fockpop");
            if (cfg.fock_levels < 1 || cfg.fock_levels > cfg.dim)
                throw ValidationError("task.fockpop: levels must lie in [1, dim]");
            break;
        case TaskKind::steady:
            break;
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto kv = [&out](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    out += "[params]\n";
    kv("delta_a", format_double(cfg.params.delta_a));
    kv("g", format_double(cfg.params.g));
    kv("theta0", format_double(cfg.params.theta0));
    kv("omega", format_double(cfg.params.omega));
    kv("kappa", format_double(cfg.params.kappa));
    kv("kappa2", format_double(cfg.params.kappa2));
    out += "\n[space]\n";
    kv("dim", format_int(cfg.dim));
    out += "\n[solver]\n";
    kv("residual_tol", format_double(cfg.solver.residual_tol));
    kv("ode_rel_tol", format_double(cfg.solver.ode_rel_tol));
    kv("ode_abs_tol", format_double(cfg.solver.ode_abs_tol));
    kv("max_steps", format_int(cfg.solver.max_steps));
    out += "\n[task.";
    out += to_string(cfg.task);
    out += "]\n";
    switch (cfg.task) {
        case TaskKind::sweep: {
            for (std::size_t i = 0; i < cfg.sweep.axes.size(); ++i) {
                const auto& ax = cfg.sweep.axes[i];
                const std::string prefix = "axis" + std::to_string(i + 1) + ".";
                kv(prefix + "name", to_string(ax.name));
                kv(prefix + "start", format_double(ax.start));
                kv(prefix + "stop", format_double(ax.stop));
                kv(prefix + "steps", format_int(ax.steps));
                kv(prefix + "spacing", ax.spacing == AxisSpacing::log ? "log" : "linear");
            }
            std::string orders;
            for (std::size_t i = 0; i < cfg.sweep.orders.size(); ++i) {
                if (i) orders += ',';
                orders += format_int(cfg.sweep.orders[i]);
            }
            kv("orders", orders);
            kv("threshold", format_double(cfg.sweep.threshold));
            break;
        }
        case TaskKind::g2tau:
            kv("tau_start", format_double(cfg.tau.start));
            kv("tau_stop", format_double(cfg.tau.stop));
            kv("tau_steps", format_int(cfg.tau.steps));
            break;
        case TaskKind::validate:
            kv("delta_start", format_double(cfg.delta_range.start));
            kv("delta_stop", format_double(cfg.delta_range.stop));
            kv("steps", format_int(cfg.delta_range.steps));
            break;
        case TaskKind::fockpop:
            kv("delta_start", format_double(cfg.delta_range.start));
            kv("delta_stop", format_double(cfg.delta_range.stop));
            kv("steps", format_int(cfg.delta_range.steps));
            kv("levels", format_int(cfg.fock_levels));
            break;
        case TaskKind::steady:
            break;
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::uint64_t h = fnv1a64(serialize_config(cfg));
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 0; i < 16; ++i)
        buf[i] = hex[(h >> (60 - 4 * i)) & 0xF];
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace pbsim
