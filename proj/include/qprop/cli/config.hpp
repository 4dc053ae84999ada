#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "../classical.hpp"
#include "../coeffs.hpp"
#include "../errors.hpp"
#include "../evolve.hpp"
#include "../oscillator.hpp"
#include "io.hpp"

namespace qprop::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ScenarioKind { variant, oscillator, general, sudden, nls };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::variant: return "variant";
        case ScenarioKind::oscillator: return "oscillator";
        case ScenarioKind::general: return "general";
        case ScenarioKind::sudden: return "sudden";
        case ScenarioKind::nls: return "nls";
    }
    return "?";
}

enum class OutputFormat { csv, json };

struct GridSpec {
    double x_min = -2.0, x_max = 2.0;
    int nx = 64;
    double y_min = -2.0, y_max = 2.0;
    int ny = 64;

    static std::vector<double> axis(double lo, double hi, int n) {
        if (n == 1) return {lo};
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
        return v;
    }
    std::vector<double> xs() const { return axis(x_min, x_max, nx); }
    std::vector<double> ys() const { return axis(y_min, y_max, ny); }
};

enum class EvolveMethod { analytic, cauchy, stepper };

struct EvolveSpec {
    int n = 0;
    EvolveMethod method = EvolveMethod::analytic;
    int points = 512;
    double half_width = 10.0;  // in units of sqrt(hbar / (m omega0)); plain length for variants
    double dt = 1e-4;
    double sigma = 0.5;  // variant initial packet
    double x0 = 0.0;
};

struct AmplitudeSpec {
    int k_max = 64;
    double tol = 1e-10;
    int columns = 4;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::variant;
    std::filesystem::path source;

    EquationVariant equation = EquationVariant::increasing;
    bool general_kernel = false;  // kernel K with (c1, c2, beta0, gamma0)
    double c1 = 0.0, c2 = 1.0, beta0 = 1.0, gamma0 = 0.0;

    OscillatorConfig osc;
    std::optional<FrequencyProfile> profile;
    std::filesystem::path profile_path;
    GammaMethod gamma_method = GammaMethod::automatic;

    NlsParams nls;

    GridSpec grid;
    std::vector<double> times;
    EvolveSpec evolve;
    AmplitudeSpec amplitudes;
    int bargmann_kmax = 6;

    std::filesystem::path out_dir;
    OutputFormat format = OutputFormat::csv;
    std::string prefix;
};

namespace detail {

namespace pt = boost::property_tree;

// Key -> line map and inline-comment stripping; boost's parser only knows full-line comments.
struct Preprocessed {
    std::string text;
    std::map<std::string, int> lines;  // "section.key" and "section"
};

inline Preprocessed preprocess(const std::string& raw) {
    Preprocessed p;
    std::istringstream in(raw);
    std::string line, section;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if ((line[i] == ';' || line[i] == '#') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.erase(i);
                break;
            }
        }
        const auto b = line.find_first_not_of(" \t\r");
        if (b != std::string::npos) {
            const auto e = line.find_last_not_of(" \t\r");
            const std::string s = line.substr(b, e - b + 1);
            if (s.front() == '[' && s.back() == ']') {
                section = s.substr(1, s.size() - 2);
                p.lines.emplace(section, no);
            } else if (const auto eq = s.find('='); eq != std::string::npos) {
                std::string key = s.substr(0, eq);
                key.erase(key.find_last_not_of(" \t") + 1);
                p.lines.emplace(section + "." + key, no);
            }
        }
        p.text += line;
        p.text += '\n';
    }
    return p;
}

class Reader {
public:
    Reader(pt::ptree tree, Preprocessed pre, std::string file)
        : tree_(std::move(tree)), pre_(std::move(pre)), file_(std::move(file)) {}

    bool has_section(const std::string& s) const { return tree_.find(s) != tree_.not_found(); }

    std::string where(const std::string& section, const std::string& key = "") const {
        const auto it = pre_.lines.find(key.empty() ? section : section + "." + key);
        return it == pre_.lines.end() ? file_ : file_ + ":" + std::to_string(it->second);
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const {
        throw ConfigError(where(section, key) + ": [" + section + "] " + key + ": " + msg);
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto s = tree_.find(section);
        if (s == tree_.not_found()) return std::nullopt;
        const auto v = s->second.find(key);
        if (v == s->second.not_found()) return std::nullopt;
        return v->second.data();
    }

    std::string text(const std::string& section, const std::string& key) const {
        auto v = raw(section, key);
        if (!v) throw ConfigError(file_ + ": missing field '" + key + "' in [" + section + "]");
        return *v;
    }

    double number(const std::string& section, const std::string& key) const {
        const auto s = text(section, key);
        try {
            const double v = parse_double(s);
            if (!std::isfinite(v)) fail(section, key, "must be finite");
            return v;
        } catch (const std::invalid_argument&) {
            fail(section, key, "not a number: '" + s + "'");
        }
    }

    double number(const std::string& section, const std::string& key, double fallback) const {
        return raw(section, key) ? number(section, key) : fallback;
    }

    double positive(const std::string& section, const std::string& key, double fallback) const {
        const double v = number(section, key, fallback);
        if (!(v > 0.0)) fail(section, key, "must be positive");
        return v;
    }

    double positive(const std::string& section, const std::string& key) const {
        const double v = number(section, key);
        if (!(v > 0.0)) fail(section, key, "must be positive");
        return v;
    }

    int integer(const std::string& section, const std::string& key, int fallback, int lo) const {
        if (!raw(section, key)) return fallback;
        const auto s = text(section, key);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            fail(section, key, "not an integer: '" + s + "'");
        }
        if (s.find_first_not_of(" \t", used) != std::string::npos) fail(section, key, "not an integer: '" + s + "'");
        if (v < lo || v > 1000000000L) fail(section, key, "must be at least " + std::to_string(lo));
        return static_cast<int>(v);
    }

    std::vector<double> list(const std::string& section, const std::string& key) const {
        std::vector<double> out;
        std::string s = text(section, key);
        for (char& c : s)
            if (c == ',') c = ' ';
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) {
            try {
                out.push_back(parse_double(tok));
            } catch (const std::invalid_argument&) {
                fail(section, key, "not a number: '" + tok + "'");
            }
        }
        if (out.empty()) fail(section, key, "empty list");
        return out;
    }

    void allow(const std::set<std::string>& sections, const std::map<std::string, std::set<std::string>>& keys) const {
        for (const auto& [name, sub] : tree_) {
            if (!sections.count(name)) throw ConfigError(where(name) + ": unknown section [" + name + "]");
            if (!sub.data().empty()) throw ConfigError(where(name) + ": key '" + name + "' outside any section");
            const auto k = keys.find(name);
            for (const auto& [key, value] : sub) {
                if (k == keys.end() || !k->second.count(key))
                    throw ConfigError(where(name, key) + ": unknown field '" + key + "' in [" + name + "]");
            }
        }
    }

private:
    pt::ptree tree_;
    Preprocessed pre_;
    std::string file_;
};

inline FrequencyProfile load_profile(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    std::vector<double> t, w2;
    for (const auto& row : table.rows) {
        if (row.size() != 2) throw ConfigError(path.string() + ": profile rows need exactly two columns (t, omega^2)");
        t.push_back(row[0]);
        w2.push_back(row[1]);
    }
    try {
        return FrequencyProfile::tabulated(std::move(t), std::move(w2));
    } catch (const ParameterError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& content, const std::filesystem::path& source) {
    namespace pt = boost::property_tree;
    auto pre = detail::preprocess(content);
    pt::ptree tree;
    std::istringstream in(pre.text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source.string() + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    const detail::Reader r(std::move(tree), std::move(pre), source.string());

    const std::map<std::string, std::set<std::string>> keys{
        {"scenario", {"kind"}},
        {"variant", {"equation", "c1", "c2", "beta0", "gamma0"}},
        {"oscillator", {"m", "hbar", "omega0", "omega1", "T"}},
        {"general", {"m", "hbar", "profile", "T", "omega0", "omega1", "gamma"}},
        {"sudden", {"omega0", "omega1"}},
        {"nls", {"s", "coupling", "kappa0", "phi", "c1", "c2", "beta0", "gamma0"}},
        {"grid", {"x_min", "x_max", "nx", "y_min", "y_max", "ny"}},
        {"times", {"t"}},
        {"evolve", {"n", "method", "points", "half_width", "dt", "sigma", "x0"}},
        {"amplitudes", {"k_max", "tol", "columns"}},
        {"bargmann", {"k_max"}},
        {"output", {"dir", "format", "prefix"}},
    };
    std::set<std::string> sections;
    for (const auto& [s, k] : keys) sections.insert(s);
    r.allow(sections, keys);

    ScenarioConfig c;
    c.source = source;
    const std::string kind = r.text("scenario", "kind");
    const std::vector<std::pair<std::string, ScenarioKind>> kinds{{"variant", ScenarioKind::variant},
                                                                  {"oscillator", ScenarioKind::oscillator},
                                                                  {"general", ScenarioKind::general},
                                                                  {"sudden", ScenarioKind::sudden},
                                                                  {"nls", ScenarioKind::nls}};
    bool found = false;
    for (const auto& [name, k] : kinds) {
        if (kind == name) {
            c.kind = k;
            found = true;
        } else if (r.has_section(name)) {
            throw ConfigError(r.where(name) + ": section [" + name + "] conflicts with kind = " + kind +
                              " (exactly one scenario kind per file)");
        }
    }
    if (!found) r.fail("scenario", "kind", "must be one of variant, oscillator, general, sudden, nls");
    if (!r.has_section(kind)) throw ConfigError(source.string() + ": missing section [" + kind + "]");

    switch (c.kind) {
        case ScenarioKind::variant: {
            const auto eq = r.text("variant", "equation");
            try {
                c.equation = variant_from_string(eq);
            } catch (const ParameterError&) {
                r.fail("variant", "equation", "unknown variant '" + eq + "'");
            }
            if (!is_airy_variant(c.equation))
                r.fail("variant", "equation", "oscillator equations use kind = oscillator or general");
            for (const char* k : {"c1", "c2", "beta0", "gamma0"})
                if (r.raw("variant", k)) c.general_kernel = true;
            if (c.general_kernel) {
                c.c1 = r.number("variant", "c1");
                c.c2 = r.number("variant", "c2");
                c.beta0 = r.number("variant", "beta0");
                c.gamma0 = r.number("variant", "gamma0");
            }
            break;
        }
        case ScenarioKind::oscillator:
            c.osc.m = r.positive("oscillator", "m", 1.0);
            c.osc.hbar = r.positive("oscillator", "hbar", 1.0);
            c.osc.omega0 = r.positive("oscillator", "omega0");
            c.osc.omega1 = r.positive("oscillator", "omega1");
            c.osc.T = r.positive("oscillator", "T");
            if (c.osc.omega0 == c.osc.omega1) r.fail("oscillator", "omega1", "must differ from omega0");
            break;
        case ScenarioKind::general: {
            c.osc.m = r.positive("general", "m", 1.0);
            c.osc.hbar = r.positive("general", "hbar", 1.0);
            auto p = std::filesystem::path(r.text("general", "profile"));
            if (p.is_relative()) p = source.parent_path() / p;
            std::error_code ec;
            if (!std::filesystem::is_regular_file(p, ec))
                r.fail("general", "profile", "not a readable file: " + p.string());
            c.profile_path = p;
            c.profile = detail::load_profile(p);
            const auto& tt = c.profile->table_t();
            const auto& w2 = c.profile->table_w2();
            if (tt.front() != 0.0) r.fail("general", "profile", "the profile must start at t = 0");
            c.osc.T = r.positive("general", "T", tt.back());
            if (c.osc.T > tt.back() * (1.0 + 1e-12)) r.fail("general", "T", "beyond the end of the profile");
            const double w2_end = c.profile->omega_sq(c.osc.T);
            if (!r.raw("general", "omega0") && !(w2.front() > 0.0))
                r.fail("general", "profile", "omega^2(0) must be positive");
            if (!r.raw("general", "omega1") && !(w2_end > 0.0))
                r.fail("general", "profile", "omega^2(T) must be positive");
            c.osc.omega0 = r.positive("general", "omega0", std::sqrt(std::max(w2.front(), 0.0)));
            c.osc.omega1 = r.positive("general", "omega1", std::sqrt(std::max(w2_end, 0.0)));
            const std::string g = r.raw("general", "gamma").value_or("automatic");
            if (g == "quadrature") c.gamma_method = GammaMethod::quadrature;
            else if (g == "companion") c.gamma_method = GammaMethod::companion;
            else if (g == "automatic") c.gamma_method = GammaMethod::automatic;
            else r.fail("general", "gamma", "must be quadrature, companion or automatic");
            break;
        }
        case ScenarioKind::sudden:
            c.osc.omega0 = r.positive("sudden", "omega0");
            c.osc.omega1 = r.positive("sudden", "omega1");
            break;
        case ScenarioKind::nls:
            c.nls.s = r.number("nls", "s");
            if (!(c.nls.s >= 0.0)) r.fail("nls", "s", "must be nonnegative");
            c.nls.coupling = r.number("nls", "coupling");
            c.nls.kappa0 = r.number("nls", "kappa0", 0.0);
            c.nls.phi = r.number("nls", "phi", 0.0);
            c.c1 = r.number("nls", "c1", 0.0);
            c.c2 = r.number("nls", "c2", 1.0);
            c.beta0 = r.number("nls", "beta0", 1.0);
            c.gamma0 = r.number("nls", "gamma0", 0.0);
            if (!(c.c2 > 0.0)) r.fail("nls", "c2", "must be positive (mu(0) = c2)");
            break;
    }

    c.grid.x_min = r.number("grid", "x_min", c.grid.x_min);
    c.grid.x_max = r.number("grid", "x_max", c.grid.x_max);
    c.grid.nx = r.integer("grid", "nx", c.grid.nx, 1);
    c.grid.y_min = r.number("grid", "y_min", c.grid.y_min);
    c.grid.y_max = r.number("grid", "y_max", c.grid.y_max);
    c.grid.ny = r.integer("grid", "ny", c.grid.ny, 1);
    if (!(c.grid.x_max > c.grid.x_min) && c.grid.nx > 1) r.fail("grid", "x_max", "must exceed x_min");
    if (!(c.grid.y_max > c.grid.y_min) && c.grid.ny > 1) r.fail("grid", "y_max", "must exceed y_min");

    if (r.raw("times", "t")) {
        c.times = r.list("times", "t");
        for (double t : c.times)
            if (!std::isfinite(t)) r.fail("times", "t", "times must be finite");
    } else if (c.kind == ScenarioKind::oscillator || c.kind == ScenarioKind::general) {
        c.times = {c.osc.T};
    } else if (c.kind != ScenarioKind::sudden) {
        throw ConfigError(source.string() + ": missing field 't' in [times]");
    }

    c.evolve.n = r.integer("evolve", "n", 0, 0);
    if (c.evolve.n > eigenstate_n_max) r.fail("evolve", "n", "at most " + std::to_string(eigenstate_n_max));
    if (const auto m = r.raw("evolve", "method")) {
        if (*m == "analytic") c.evolve.method = EvolveMethod::analytic;
        else if (*m == "cauchy") c.evolve.method = EvolveMethod::cauchy;
        else if (*m == "stepper") c.evolve.method = EvolveMethod::stepper;
        else r.fail("evolve", "method", "must be analytic, cauchy or stepper");
    } else if (c.kind == ScenarioKind::variant) {
        c.evolve.method = EvolveMethod::cauchy;
    }
    c.evolve.points = r.integer("evolve", "points", c.evolve.points, 3);
    c.evolve.half_width = r.positive("evolve", "half_width", c.evolve.half_width);
    c.evolve.dt = r.positive("evolve", "dt", c.evolve.dt);
    c.evolve.sigma = r.positive("evolve", "sigma", c.evolve.sigma);
    c.evolve.x0 = r.number("evolve", "x0", c.evolve.x0);

    c.amplitudes.k_max = r.integer("amplitudes", "k_max", c.amplitudes.k_max, 1);
    c.amplitudes.tol = r.positive("amplitudes", "tol", c.amplitudes.tol);
    c.amplitudes.columns = r.integer("amplitudes", "columns", c.amplitudes.columns, 0);
    c.bargmann_kmax = r.integer("bargmann", "k_max", c.bargmann_kmax, 0);

    if (const auto d = r.raw("output", "dir")) {
        c.out_dir = *d;
        if (c.out_dir.is_relative()) c.out_dir = source.parent_path() / c.out_dir;
    }
    if (const auto f = r.raw("output", "format")) {
        if (*f == "csv") c.format = OutputFormat::csv;
        else if (*f == "json") c.format = OutputFormat::json;
        else r.fail("output", "format", "must be csv or json");
    }
    c.prefix = r.raw("output", "prefix").value_or("");
    if (c.prefix.find('/') != std::string::npos) r.fail("output", "prefix", "must not contain '/'");
    return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    std::string content;
    try {
        content = read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(content, path);
}

}  // namespace qprop::cli
