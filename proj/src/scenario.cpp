#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/lab.hpp"

namespace bergman::lab {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads keys from one JSON object and remembers which were consumed, so that
// anything left over can be rejected as unknown.
class FieldReader {
public:
    FieldReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "must be a JSON object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& require(const std::string& key) {
        if (!obj_.contains(key)) throw ValidationError(join(path_, key), "required field is missing");
        used_.insert(key);
        return obj_.at(key);
    }

    const json* optional(const std::string& key) {
        if (!obj_.contains(key)) return nullptr;
        used_.insert(key);
        return &obj_.at(key);
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (const auto& [key, value] : obj_.items())
            if (!used_.count(key)) throw ValidationError(join(path_, key), "unknown field");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(path, "must be finite");
    return x;
}

double as_positive(const json& v, const std::string& path) {
    const double x = as_number(v, path);
    if (!(x > 0.0)) throw ValidationError(path, "must be positive");
    return x;
}

std::size_t as_count(const json& v, const std::string& path, std::size_t min_value = 1) {
    if (!v.is_number_integer()) throw ValidationError(path, "must be an integer");
    const auto x = v.get<long long>();
    if (x < static_cast<long long>(min_value))
        throw ValidationError(path, "must be >= " + std::to_string(min_value));
    return static_cast<std::size_t>(x);
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError(path, "must be a string");
    return v.get<std::string>();
}

Complex as_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw ValidationError(path, "must be a [re, im] pair");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

PowerSeries as_series(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ValidationError(path, "must be a non-empty list of [re, im] pairs");
    std::vector<Complex> c;
    for (std::size_t i = 0; i < v.size(); ++i) c.push_back(as_complex(v[i], path + "[" + std::to_string(i) + "]"));
    return PowerSeries(std::move(c));
}

std::vector<std::size_t> as_schedule(const json& v, const std::string& path, std::size_t min_len) {
    if (!v.is_array() || v.size() < min_len)
        throw ValidationError(path, "must be a list of at least " + std::to_string(min_len) + " sizes");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_count(v[i], path + "[" + std::to_string(i) + "]"));
        if (i > 0 && out[i] <= out[i - 1]) throw ValidationError(path, "must be strictly increasing");
    }
    return out;
}

DiscGrid as_grid(const json& v, const std::string& path) {
    FieldReader r(v, path);
    const int angles = static_cast<int>(as_count(r.require("angles_per_radius"), r.path("angles_per_radius")));
    const json* levels = r.optional("levels");
    const json* radii = r.optional("radii");
    r.finish();
    if ((levels == nullptr) == (radii == nullptr))
        throw ValidationError(path, "exactly one of 'levels' or 'radii' is required");
    try {
        if (levels) {
            const auto n = as_count(*levels, r.path("levels"), 0);
            if (n > 50) throw ValidationError(r.path("levels"), "must be <= 50");
            return DiscGrid::dyadic(static_cast<int>(n), angles);
        }
        if (!radii->is_array()) throw ValidationError(r.path("radii"), "must be a list of numbers");
        std::vector<double> rs;
        for (std::size_t i = 0; i < radii->size(); ++i)
            rs.push_back(as_number((*radii)[i], r.path("radii") + "[" + std::to_string(i) + "]"));
        return DiscGrid(std::move(rs), angles);
    } catch (const PreconditionError& e) {
        throw ValidationError(path, e.what());
    }
}

QuadratureSpec as_quadrature(const json& v, const std::string& path) {
    FieldReader r(v, path);
    QuadratureSpec q;
    q.radial_nodes = static_cast<int>(as_count(r.require("radial_nodes"), r.path("radial_nodes"), 2));
    q.angular_nodes = static_cast<int>(as_count(r.require("angular_nodes"), r.path("angular_nodes"), 4));
    if (const json* rule = r.optional("radial_rule")) {
        if (as_string(*rule, r.path("radial_rule")) != "gauss-legendre-mapped")
            throw ValidationError(r.path("radial_rule"), "only 'gauss-legendre-mapped' is supported");
    }
    r.finish();
    return q;
}

Thresholds as_thresholds(const json& v, const std::string& path, bool need_inf, bool need_sigma, bool need_drift) {
    FieldReader r(v, path);
    Thresholds t;
    auto read = [&](const char* key, bool needed, std::optional<double>& out) {
        const json* j = needed ? &r.require(key) : nullptr;
        if (j) out = as_positive(*j, r.path(key));
    };
    read("inf_positive", need_inf, t.inf_positive);
    read("sigma_positive", need_sigma, t.sigma_positive);
    read("drift", need_drift, t.drift);
    r.finish();
    return t;
}

ScenarioKind as_kind(const std::string& s, const std::string& path) {
    if (s == "toeplitz_build") return ScenarioKind::ToeplitzBuild;
    if (s == "berezin_grid") return ScenarioKind::BerezinGrid;
    if (s == "invertibility") return ScenarioKind::Invertibility;
    if (s == "theorem_check") return ScenarioKind::TheoremCheck;
    if (s == "example_3_5") return ScenarioKind::PowerSymbolExample;
    throw ValidationError(path, "unknown kind '" + s + "'");
}

CheckKind as_check(const std::string& s, const std::string& path) {
    if (s == "3.1") return CheckKind::SmallRatio;
    if (s == "3.2") return CheckKind::LargeRatio;
    if (s == "3.3") return CheckKind::InvertibilityEquivalence;
    if (s == "shift_demo") return CheckKind::ShiftDemo;
    throw ValidationError(path, "unknown check '" + s + "' (expected 3.1, 3.2, 3.3 or shift_demo)");
}

void read_harmonic(FieldReader& r, Scenario& sc) {
    const AnalyticSymbol g = parse_symbol(r.require("symbol"), r.path("symbol"));
    const Complex c = as_complex(r.require("c"), r.path("c"));
    const Complex d = as_complex(r.require("d"), r.path("d"));
    sc.symbol = HarmonicSymbol{c, d, g};
}

}  // namespace

const char* to_string(ScenarioKind k) noexcept {
    switch (k) {
        case ScenarioKind::ToeplitzBuild: return "toeplitz_build";
        case ScenarioKind::BerezinGrid: return "berezin_grid";
        case ScenarioKind::Invertibility: return "invertibility";
        case ScenarioKind::TheoremCheck: return "theorem_check";
        case ScenarioKind::PowerSymbolExample: return "example_3_5";
    }
    return "?";
}

const char* to_string(CheckKind k) noexcept {
    switch (k) {
        case CheckKind::SmallRatio: return "3.1";
        case CheckKind::LargeRatio: return "3.2";
        case CheckKind::InvertibilityEquivalence: return "3.3";
        case CheckKind::ShiftDemo: return "shift_demo";
    }
    return "?";
}

AnalyticSymbol parse_symbol(const json& fragment, const std::string& path) {
    FieldReader r(fragment, path);
    const std::string kind = as_string(r.require("kind"), r.path("kind"));
    try {
        if (kind == "polynomial") {
            auto p = as_series(r.require("coeffs"), r.path("coeffs"));
            r.finish();
            return AnalyticSymbol::polynomial(std::move(p));
        }
        if (kind == "rational") {
            auto p = as_series(r.require("p"), r.path("p"));
            auto q = as_series(r.require("q"), r.path("q"));
            r.finish();
            return AnalyticSymbol::rational(std::move(p), std::move(q));
        }
        if (kind == "power") {
            const double t = as_number(r.require("t"), r.path("t"));
            PowerBase base = PowerBase::Ratio;
            if (const json* b = r.optional("base")) {
                const std::string s = as_string(*b, r.path("base"));
                if (s == "ratio")
                    base = PowerBase::Ratio;
                else if (s == "one_plus_z")
                    base = PowerBase::OnePlusZ;
                else if (s == "one_minus_z")
                    base = PowerBase::OneMinusZ;
                else
                    throw ValidationError(r.path("base"), "must be ratio, one_plus_z or one_minus_z");
            }
            r.finish();
            return AnalyticSymbol::principal_power(t, base);
        }
    } catch (const PreconditionError& e) {
        throw ValidationError(path, e.what());
    }
    throw ValidationError(r.path("kind"), "unknown symbol kind '" + kind + "'");
}

Scenario parse_scenario(const json& config, const std::optional<std::filesystem::path>& output_dir_override) {
    FieldReader r(config, "");
    Scenario sc;
    sc.echo = config;
    sc.name = as_string(r.require("name"), "name");
    sc.kind = as_kind(as_string(r.require("kind"), "kind"), "kind");
    const json& seed = r.require("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
        throw ValidationError("seed", "must be a nonnegative integer");
    sc.seed = seed.get<std::uint64_t>();
    if (const json* out = r.optional("output_dir")) sc.output_dir = as_string(*out, "output_dir");
    if (output_dir_override) sc.output_dir = *output_dir_override;
    if (sc.output_dir.empty()) throw ValidationError("output_dir", "required field is missing");

    switch (sc.kind) {
        case ScenarioKind::ToeplitzBuild: {
            read_harmonic(r, sc);
            sc.size = as_count(r.require("size"), "size");
            const std::string b = as_string(r.require("builder"), "builder");
            if (b != "closed_form" && b != "quadrature")
                throw ValidationError("builder", "must be closed_form or quadrature");
            sc.builder = builder_from_string(b);
            if (*sc.builder == Builder::Quadrature) sc.quadrature = as_quadrature(r.require("quadrature"), "quadrature");
            break;
        }
        case ScenarioKind::BerezinGrid: {
            read_harmonic(r, sc);
            sc.grid = as_grid(r.require("grid"), "grid");
            const std::string route = as_string(r.require("route"), "route");
            try {
                sc.route = route_from_string(route);
            } catch (const PreconditionError&) {
                throw ValidationError("route", "must be integral, matrix or harmonic_closed_form");
            }
            if (*sc.route == BerezinRoute::Integral) sc.quadrature = as_quadrature(r.require("quadrature"), "quadrature");
            if (*sc.route == BerezinRoute::Matrix) sc.matrix_size = as_count(r.require("matrix_size"), "matrix_size");
            break;
        }
        case ScenarioKind::Invertibility: {
            read_harmonic(r, sc);
            sc.schedule = as_schedule(r.require("schedule"), "schedule", 3);
            sc.grid = as_grid(r.require("grid"), "grid");
            sc.thresholds = as_thresholds(r.require("thresholds"), "thresholds", true, true, true);
            break;
        }
        case ScenarioKind::TheoremCheck: {
            sc.check = as_check(as_string(r.require("check"), "check"), "check");
            if (*sc.check == CheckKind::ShiftDemo) {
                sc.schedule = as_schedule(r.require("schedule"), "schedule", 2);
                if (sc.schedule.front() < 8) throw ValidationError("schedule", "shift demo sizes must be >= 8");
                sc.s = as_complex(r.require("s"), "s");
                if (!(std::abs(*sc.s) > 1.0)) throw ValidationError("s", "shift demo needs |s| > 1");
                sc.thresholds = as_thresholds(r.require("thresholds"), "thresholds", false, false, true);
            } else {
                sc.samples = as_count(r.require("samples"), "samples");
                sc.dimension = as_count(r.require("dimension"), "dimension", 2);
                if (*sc.check == CheckKind::LargeRatio) sc.trials = as_count(r.require("trials"), "trials");
                sc.thresholds = as_thresholds(r.require("thresholds"), "thresholds", false, true, false);
            }
            break;
        }
        case ScenarioKind::PowerSymbolExample: {
            sc.t = as_number(r.require("t"), "t");
            sc.schedule = as_schedule(r.require("schedule"), "schedule", 3);
            for (std::size_t n : sc.schedule)
                if (n < 2) throw ValidationError("schedule", "sizes must be >= 2");
            sc.grid = as_grid(r.require("grid"), "grid");
            sc.thresholds = as_thresholds(r.require("thresholds"), "thresholds", false, true, true);
            break;
        }
    }
    r.finish();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::optional<std::filesystem::path>& output_dir_override) {
    std::ifstream in(path);
    if (!in) throw ValidationError("<config>", "cannot open " + path.string());
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("<config>", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(config, output_dir_override);
}

}  // namespace bergman::lab
