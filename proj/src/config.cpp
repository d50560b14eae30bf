#include "bicx/config.hpp"
#include "bicx/detail/format.hpp"
#include "bicx/error.hpp"

#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

namespace bicx {

namespace {

using detail::fmt_double;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(int line, const std::string& what) {
    fail(errc::type_mismatch, "line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& s, int line) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        bad(line, "expected a number, got '" + s + "'");
    }
    if (pos != s.size()) bad(line, "trailing characters in number '" + s + "'");
    return v;
}

std::vector<double> parse_array(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        bad(line, "expected [a, b, ...], got '" + s + "'");
    std::vector<double> out;
    std::string inner = trim(s.substr(1, s.size() - 2));
    if (inner.empty()) return out;
    std::istringstream is(inner);
    std::string cell;
    while (std::getline(is, cell, ',')) out.push_back(parse_number(trim(cell), line));
    return out;
}

ContinuousSpec parse_continuous(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}')
        bad(line, "expected { family = ..., params = [...] }");
    ContinuousSpec spec;
    bool have_family = false;
    std::string inner = s.substr(1, s.size() - 2);
    // split on commas outside brackets
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : inner) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    for (const std::string& part : parts) {
        size_t eq = part.find('=');
        if (eq == std::string::npos) bad(line, "expected key = value inside continuous block");
        std::string key = trim(part.substr(0, eq));
        std::string value = trim(part.substr(eq + 1));
        if (key == "family") {
            spec.family = value;
            have_family = true;
        } else if (key == "params") {
            spec.params = parse_array(value, line);
        } else {
            fail(errc::unknown_key, "line " + std::to_string(line) + ": continuous." + key);
        }
    }
    if (!have_family) bad(line, "continuous block needs a family");
    return spec;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) bad(lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) bad(lineno, "empty value for '" + key + "'");
        if (seen.count(key)) bad(lineno, "duplicate key '" + key + "'");
        seen[key] = lineno;

        if (key == "mode") {
            cfg.mode = value;
        } else if (key == "k") {
            cfg.k = static_cast<int>(parse_number(value, lineno));
        } else if (key == "p1") {
            std::vector<double> v = parse_array(value, lineno);
            if (v.size() != 3) bad(lineno, "p1 needs [plus, zero, minus]");
            cfg.p1 = std::array<double, 3>{v[0], v[1], v[2]};
        } else if (key == "p_plus") {
            cfg.p_plus = parse_array(value, lineno);
        } else if (key == "continuous") {
            cfg.continuous = parse_continuous(value, lineno);
        } else if (key == "horizon") {
            cfg.horizon = static_cast<int>(parse_number(value, lineno));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_number(value, lineno));
        } else if (key == "reps") {
            cfg.reps = static_cast<long>(parse_number(value, lineno));
        } else if (key == "tol") {
            cfg.tol = parse_number(value, lineno);
        } else if (key == "x1_grid") {
            cfg.x1_grid = static_cast<int>(parse_number(value, lineno));
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "schedule_csv") {
            cfg.schedule_csv = value;
        } else {
            fail(errc::unknown_key, "line " + std::to_string(lineno) + ": '" + key + "'");
        }
    }
    if (cfg.mode.empty()) fail(errc::type_mismatch, "config needs a mode");
    if (cfg.mode != "rates" && cfg.mode != "partition" && cfg.mode != "simulate" &&
        cfg.mode != "audit" && cfg.mode != "compare")
        fail(errc::type_mismatch, "unknown mode '" + cfg.mode + "'");
    if (cfg.p1 && cfg.continuous)
        fail(errc::type_mismatch, "config has both discrete and continuous prior blocks");
    if (!cfg.p1 && !cfg.continuous) fail(errc::type_mismatch, "config needs a prior block");
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "mode = " << cfg.mode << "\n";
    os << "k = " << cfg.k << "\n";
    if (cfg.p1)
        os << "p1 = [" << fmt_double((*cfg.p1)[0]) << ", " << fmt_double((*cfg.p1)[1]) << ", "
           << fmt_double((*cfg.p1)[2]) << "]\n";
    if (!cfg.p_plus.empty()) {
        os << "p_plus = [";
        for (size_t i = 0; i < cfg.p_plus.size(); ++i)
            os << (i ? ", " : "") << fmt_double(cfg.p_plus[i]);
        os << "]\n";
    }
    if (cfg.continuous) {
        os << "continuous = { family = " << cfg.continuous->family;
        if (!cfg.continuous->params.empty()) {
            os << ", params = [";
            for (size_t i = 0; i < cfg.continuous->params.size(); ++i)
                os << (i ? ", " : "") << fmt_double(cfg.continuous->params[i]);
            os << "]";
        }
        os << " }\n";
    }
    if (cfg.horizon) os << "horizon = " << *cfg.horizon << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "reps = " << cfg.reps << "\n";
    if (cfg.tol) os << "tol = " << fmt_double(*cfg.tol) << "\n";
    os << "x1_grid = " << cfg.x1_grid << "\n";
    os << "out = " << cfg.out_dir << "\n";
    if (cfg.schedule_csv) os << "schedule_csv = " << *cfg.schedule_csv << "\n";
    return os.str();
}

} // namespace bicx
