#include "sps/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "sps/errors.hpp"

namespace sps {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_factor(std::string_view text) {
    text = trim(text);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text = trim(text.substr(1));
    }
    if (text.empty()) {
        throw std::invalid_argument("empty number");
    }
    double value = 0.0;
    if (text == "pi") {
        value = std::numbers::pi;
    } else {
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (ec != std::errc{} || ptr != end) {
            throw std::invalid_argument("not a number: '" + std::string(text) + "'");
        }
    }
    return negative ? -value : value;
}

std::size_t parse_count(std::string_view text) {
    const double v = parse_number(text);
    if (!(v >= 2.0) || v != std::floor(v) || v > 1e8) {
        throw std::invalid_argument("expected an integer >= 2");
    }
    return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw std::invalid_argument("expected true or false");
}

void require_non_negative(double v) {
    if (!(v >= 0.0)) {
        throw std::invalid_argument("must be non-negative");
    }
}

using NumericSetter = std::function<void(RunConfig&, double)>;

const std::map<std::string, NumericSetter, std::less<>>& numeric_keys() {
    static const std::map<std::string, NumericSetter, std::less<>> table = {
        {"bath.alpha", [](RunConfig& c, double v) { c.physical.bath.alpha = v; }},
        {"bath.omega_c", [](RunConfig& c, double v) { c.physical.bath.omega_c = v; }},
        {"bath.temperature",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.physical.bath.temperature = v;
         }},
        {"bath.nbar",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.physical.bath.nbar_override = v;
         }},
        {"drive.omega1", [](RunConfig& c, double v) { c.physical.drive.omega1_rabi = v; }},
        {"drive.omega2", [](RunConfig& c, double v) { c.physical.drive.omega2_rabi = v; }},
        {"drive.phi1", [](RunConfig& c, double v) { c.physical.drive.phi1 = v; }},
        {"drive.phi2", [](RunConfig& c, double v) { c.physical.drive.phi2 = v; }},
        {"drive.detuning", [](RunConfig& c, double v) { c.physical.drive.detuning = v; }},
        {"drive.Omega",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.physical.drive.laser_rabi = v;
         }},
        {"drive.laser_phase",
         [](RunConfig& c, double v) {
             if (v != 0.0) {
                 throw std::invalid_argument("only laser_phase = 0 is supported");
             }
             c.physical.drive.laser_phase = v;
         }},
        {"drive.Gamma",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.physical.gamma_rad = v;
         }},
        {"rates.gamma1",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.direct.gamma1 = v;
         }},
        {"rates.gamma2",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.direct.gamma2 = v;
         }},
        {"rates.nbar",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.direct.nbar = v;
         }},
        {"rates.phi", [](RunConfig& c, double v) { c.direct.phi = v; }},
        {"rates.Omega",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.direct.omega = v;
         }},
        {"rates.Gamma",
         [](RunConfig& c, double v) {
             require_non_negative(v);
             c.direct.gamma_rad = v;
         }},
        {"run.sx0", [](RunConfig& c, double v) { c.initial.sx = v; }},
        {"run.sy0", [](RunConfig& c, double v) { c.initial.sy = v; }},
        {"run.sz0", [](RunConfig& c, double v) { c.initial.sz = v; }},
        {"run.t_max",
         [](RunConfig& c, double v) {
             if (!(v > 0.0)) {
                 throw std::invalid_argument("must be positive");
             }
             c.t_max = v;
         }},
        {"run.omega_min", [](RunConfig& c, double v) { c.omega_min = v; }},
        {"run.omega_max", [](RunConfig& c, double v) { c.omega_max = v; }},
        {"run.nbar_min", [](RunConfig& c, double v) { c.nbar_axis.lo = v; }},
        {"run.nbar_max", [](RunConfig& c, double v) { c.nbar_axis.hi = v; }},
        {"run.ratio_min", [](RunConfig& c, double v) { c.ratio_axis.lo = v; }},
        {"run.ratio_max", [](RunConfig& c, double v) { c.ratio_axis.hi = v; }},
    };
    return table;
}

struct SweepDraft {
    std::optional<std::string> key;
    std::optional<std::vector<double>> values;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<std::size_t> count;
};

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        out.push_back(parse_number(item));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

const std::map<std::string, std::function<void(RunConfig&, SweepDraft&, std::string_view)>,
               std::less<>>&
text_keys() {
    using Fn = std::function<void(RunConfig&, SweepDraft&, std::string_view)>;
    static const std::map<std::string, Fn, std::less<>> table = {
        {"drive.include_B",
         [](RunConfig& c, SweepDraft&, std::string_view v) {
             c.physical.include_displacement = parse_bool(v);
         }},
        {"run.engine",
         [](RunConfig& c, SweepDraft&, std::string_view v) { c.engine = parse_engine(v); }},
        {"run.model",
         [](RunConfig& c, SweepDraft&, std::string_view v) {
             if (v == "exact") {
                 c.spectrum_model = SpectrumModel::Exact;
             } else if (v == "strong_field") {
                 c.spectrum_model = SpectrumModel::StrongField;
             } else {
                 throw std::invalid_argument("model must be exact or strong_field");
             }
         }},
        {"run.render_delta",
         [](RunConfig& c, SweepDraft&, std::string_view v) {
             c.render_central_delta = parse_bool(v);
         }},
        {"run.t_points",
         [](RunConfig& c, SweepDraft&, std::string_view v) { c.t_points = parse_count(v); }},
        {"run.omega_points",
         [](RunConfig& c, SweepDraft&, std::string_view v) { c.omega_points = parse_count(v); }},
        {"run.sx0_points",
         [](RunConfig& c, SweepDraft&, std::string_view v) { c.sx0_points = parse_count(v); }},
        {"run.nbar_points",
         [](RunConfig& c, SweepDraft&, std::string_view v) { c.nbar_axis.count = parse_count(v); }},
        {"run.ratio_points",
         [](RunConfig& c, SweepDraft&, std::string_view v) {
             c.ratio_axis.count = parse_count(v);
         }},
        {"run.sweep_key",
         [](RunConfig&, SweepDraft& s, std::string_view v) {
             if (!numeric_keys().contains(v)) {
                 throw std::invalid_argument("sweep_key must name a numeric section.key");
             }
             s.key = std::string(v);
         }},
        {"run.sweep_values",
         [](RunConfig&, SweepDraft& s, std::string_view v) { s.values = parse_list(v); }},
        {"run.sweep_start",
         [](RunConfig&, SweepDraft& s, std::string_view v) { s.start = parse_number(v); }},
        {"run.sweep_stop",
         [](RunConfig&, SweepDraft& s, std::string_view v) { s.stop = parse_number(v); }},
        {"run.sweep_count",
         [](RunConfig&, SweepDraft& s, std::string_view v) { s.count = parse_count(v); }},
    };
    return table;
}

const std::set<std::string_view> kSections = {"bath", "drive", "rates", "run"};

} // namespace

std::string_view to_string(Engine engine) {
    switch (engine) {
    case Engine::Analytic:
        return "analytic";
    case Engine::Numeric:
        return "numeric";
    case Engine::Both:
        return "both";
    }
    return "analytic";
}

Engine parse_engine(std::string_view name) {
    if (name == "analytic") {
        return Engine::Analytic;
    }
    if (name == "numeric") {
        return Engine::Numeric;
    }
    if (name == "both") {
        return Engine::Both;
    }
    throw ConfigError(0, "engine must be analytic, numeric or both (got '" + std::string(name) + "')");
}

double parse_number(std::string_view text) {
    text = trim(text);
    double value = 1.0;
    char op = '*';
    std::size_t pos = 0;
    bool any = false;
    while (pos <= text.size()) {
        std::size_t next = pos;
        while (next < text.size()) {
            const char ch = text[next];
            if (ch == '*' || ch == '/') {
                break;
            }
            ++next;
        }
        const double factor = parse_factor(text.substr(pos, next - pos));
        value = op == '*' ? value * factor : value / factor;
        any = true;
        if (next >= text.size()) {
            break;
        }
        op = text[next];
        pos = next + 1;
    }
    if (!any || !std::isfinite(value)) {
        throw std::invalid_argument("not a finite number: '" + std::string(text) + "'");
    }
    return value;
}

void apply_numeric_override(RunConfig& config, std::string_view dotted_key, double value) {
    const auto it = numeric_keys().find(dotted_key);
    if (it == numeric_keys().end()) {
        throw ConfigError(0, "unknown numeric key '" + std::string(dotted_key) + "'");
    }
    try {
        it->second(config, value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, std::string(dotted_key) + ": " + e.what());
    }
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    SweepDraft sweep;
    std::string section;
    std::map<std::string, std::size_t> seen;
    std::map<std::string, std::size_t> section_line;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(line_no, "malformed section header");
            }
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!kSections.contains(name)) {
                throw ConfigError(line_no, "unknown section [" + std::string(name) + "]");
            }
            section = std::string(name);
            section_line.emplace(section, line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, "expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(line_no, "key outside of any section");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const std::string dotted = section + "." + std::string(key);
        if (const auto [it, inserted] = seen.emplace(dotted, line_no); !inserted) {
            throw ConfigError(line_no, "duplicate key '" + dotted + "' (first set on line " +
                                           std::to_string(it->second) + ")");
        }
        try {
            if (const auto n = numeric_keys().find(dotted); n != numeric_keys().end()) {
                n->second(config, parse_number(value));
            } else if (const auto t = text_keys().find(dotted); t != text_keys().end()) {
                t->second(config, sweep, value);
            } else {
                throw ConfigError(line_no, "unknown key '" + dotted + "'");
            }
        } catch (const ConfigError& e) {
            if (e.line() == 0) {
                throw ConfigError(line_no, e.what());
            }
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(line_no, dotted + ": " + e.what());
        }
    }

    const bool has_bath = section_line.contains("bath");
    const bool has_drive = section_line.contains("drive");
    const bool has_rates = section_line.contains("rates");
    if (has_rates && (has_bath || has_drive)) {
        const std::size_t line = std::max(section_line["rates"],
                                          has_bath ? section_line["bath"] : section_line["drive"]);
        throw ConfigError(line, "[rates] cannot be combined with [bath]/[drive]");
    }
    if (has_bath != has_drive) {
        throw ConfigError(section_line[has_bath ? "bath" : "drive"],
                          "physical mode needs both [bath] and [drive]");
    }
    if (has_bath) {
        config.mode = RateMode::Physical;
        try {
            config.physical.bath.validate();
            config.physical.drive.validate();
        } catch (const DomainError& e) {
            throw ConfigError(section_line["bath"], e.what());
        }
    } else if (has_rates) {
        config.mode = RateMode::Direct;
        for (const char* required : {"rates.gamma1", "rates.gamma2"}) {
            if (!seen.contains(required)) {
                throw ConfigError(section_line["rates"], std::string("missing ") + required);
            }
        }
    }

    if (!seen.contains("run.sz0")) {
        const double r2 = config.initial.sx * config.initial.sx + config.initial.sy * config.initial.sy;
        config.initial.sz = -std::sqrt(std::max(0.0, 0.25 - r2));
    }
    if (!config.initial.is_physical()) {
        throw ConfigError(0, "initial Bloch vector (sx0, sy0, sz0) lies outside the Bloch ball");
    }
    if (!(config.nbar_axis.lo >= 0.0) || !(config.nbar_axis.hi > config.nbar_axis.lo)) {
        throw ConfigError(0, "need 0 <= nbar_min < nbar_max");
    }
    if (!(config.ratio_axis.lo >= 1.0) || !(config.ratio_axis.hi > config.ratio_axis.lo)) {
        throw ConfigError(0, "need 1 <= ratio_min < ratio_max");
    }
    if (config.omega_min && config.omega_max && !(*config.omega_max > *config.omega_min)) {
        throw ConfigError(0, "need omega_min < omega_max");
    }

    if (sweep.key || sweep.values || sweep.start || sweep.stop || sweep.count) {
        if (!sweep.key) {
            throw ConfigError(seen.count("run.sweep_values") ? seen["run.sweep_values"] : 0,
                              "sweep settings need sweep_key");
        }
        const std::string_view section_of_key = std::string_view(*sweep.key).substr(
            0, sweep.key->find('.'));
        const bool direct_key = section_of_key == "rates";
        const bool physical_key = section_of_key == "bath" || section_of_key == "drive";
        if ((direct_key && config.mode != RateMode::Direct) ||
            (physical_key && config.mode != RateMode::Physical)) {
            throw ConfigError(seen["run.sweep_key"], "sweep_key does not belong to the active rate mode");
        }
        SweepSpec spec;
        spec.key = *sweep.key;
        const bool range = sweep.start || sweep.stop || sweep.count;
        if (sweep.values && range) {
            throw ConfigError(seen["run.sweep_values"],
                              "use either sweep_values or sweep_start/stop/count");
        }
        if (sweep.values) {
            spec.values = *sweep.values;
        } else if (sweep.start && sweep.stop && sweep.count) {
            for (std::size_t k = 0; k < *sweep.count; ++k) {
                spec.values.push_back(*sweep.start + (*sweep.stop - *sweep.start) *
                                                         static_cast<double>(k) /
                                                         static_cast<double>(*sweep.count - 1));
            }
        } else {
            throw ConfigError(seen["run.sweep_key"], "sweep needs sweep_values or start/stop/count");
        }
        config.sweep = std::move(spec);
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open config file " + path);
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

ReservoirRates resolve_rates(const RunConfig& config) {
    switch (config.mode) {
    case RateMode::Direct: {
        const auto& d = config.direct;
        return reservoir_rates_with_phase(d.gamma1, d.gamma2, d.nbar, d.phi, d.gamma_rad);
    }
    case RateMode::Physical: {
        const auto& p = config.physical;
        const double g1 = phonon_rate(DriveComponent::First, p.drive, p.bath, p.include_displacement);
        const double g2 =
            phonon_rate(DriveComponent::Second, p.drive, p.bath, p.include_displacement);
        const double nbar = bath_occupation(p.drive.detuning, p.bath);
        return reservoir_rates(g1, g2, nbar, p.drive.phi1, p.drive.phi2, p.gamma_rad);
    }
    case RateMode::None:
        break;
    }
    throw ConfigError(0, "configuration defines neither [rates] nor [bath]/[drive]");
}

double resolve_laser_rabi(const RunConfig& config) {
    switch (config.mode) {
    case RateMode::Direct:
        return config.direct.omega;
    case RateMode::Physical:
        return config.physical.drive.laser_rabi;
    case RateMode::None:
        break;
    }
    throw ConfigError(0, "configuration defines neither [rates] nor [bath]/[drive]");
}

} // namespace sps
