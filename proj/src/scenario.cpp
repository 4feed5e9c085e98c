#include "beam/scenario.hpp"

#include <cmath>

#include "beam/config.hpp"
#include "beam/constants.hpp"
#include "beam/errors.hpp"
#include "beam/rng.hpp"

namespace beam {

Bunch make_bunch(const BunchSpec& spec) {
    if (spec.n < 1) throw DegenerateInput("bunch needs at least one particle");
    Bunch b;
    b.q = -phys::q_e;
    b.m = phys::m_e;
    b.Q = spec.total_charge / static_cast<double>(spec.n);
    b.t = 0.0;
    b.x.resize(spec.n);
    b.p.assign(spec.n, Vec3{0, 0, 0});
    Rng rng(spec.seed);
    if (spec.dist == BunchSpec::Dist::Gaussian) {
        for (std::size_t i = 0; i < spec.n; ++i)
            for (int a = 0; a < 3; ++a) b.x[i][a] = spec.sigma[a] * rng.normal();
        if (spec.momentum_spread > 0.0) {
            const double sp = spec.momentum_spread * b.m * phys::c;
            for (std::size_t i = 0; i < spec.n; ++i)
                for (int a = 0; a < 3; ++a) b.p[i][a] = sp * rng.normal();
        }
    } else {
        for (std::size_t i = 0; i < spec.n; ++i) {
            Vec3 u;
            do {
                for (int a = 0; a < 3; ++a) u[a] = 2.0 * rng.uniform() - 1.0;
            } while (norm2(u) > 1.0);
            b.x[i] = u * spec.radius;
        }
    }
    if (spec.kinetic_energy_ev > 0.0) {
        const double g = 1.0 + spec.kinetic_energy_ev * phys::q_e /
                                   (b.m * phys::c * phys::c);
        const double pz = b.m * phys::c * std::sqrt(g * g - 1.0);
        for (auto& p : b.p) p.z += pz;
    }
    return b;
}

namespace {

// Consumption-tracking view over parsed entries; anything left unread at the
// end is an unknown key and rejected.
class View {
public:
    explicit View(std::vector<ConfigEntry> entries)
        : entries_(std::move(entries)), used_(entries_.size(), false) {}

    const ConfigEntry* find(const std::string& sec, const std::string& key) {
        const ConfigEntry* hit = nullptr;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].section != sec || entries_[i].key != key) continue;
            if (hit)
                throw ConfigError(entries_[i].line, "duplicate key '" + key + "'");
            hit = &entries_[i];
            used_[i] = true;
        }
        return hit;
    }

    const ConfigEntry& require(const std::string& sec, const std::string& key) {
        const ConfigEntry* e = find(sec, key);
        if (!e) throw ConfigError(0, "missing required key '" + sec + "." + key + "'");
        return *e;
    }

    double number(const std::string& sec, const std::string& key, double def) {
        const ConfigEntry* e = find(sec, key);
        return e ? parse_double(e->value, e->line) : def;
    }

    double required_number(const std::string& sec, const std::string& key) {
        const ConfigEntry& e = require(sec, key);
        return parse_double(e.value, e.line);
    }

    long long integer(const std::string& sec, const std::string& key, long long def) {
        const ConfigEntry* e = find(sec, key);
        return e ? parse_int(e->value, e->line) : def;
    }

    std::string word(const std::string& sec, const std::string& key,
                     const std::string& def) {
        const ConfigEntry* e = find(sec, key);
        return e ? e->value : def;
    }

    std::vector<const ConfigEntry*> section_entries(const std::string& sec) {
        std::vector<const ConfigEntry*> out;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].section != sec) continue;
            out.push_back(&entries_[i]);
            used_[i] = true;
        }
        return out;
    }

    void reject_unused() const {
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (!used_[i])
                throw ConfigError(entries_[i].line, "unknown key '" + entries_[i].section +
                                                        "." + entries_[i].key + "'");
    }

private:
    std::vector<ConfigEntry> entries_;
    std::vector<bool> used_;
};

std::vector<double> numbers(const ConfigEntry& e, std::size_t count) {
    const auto toks = split_tokens(e.value);
    if (toks.size() != count)
        throw ConfigError(e.line, "key '" + e.key + "' expects " +
                                      std::to_string(count) + " values");
    std::vector<double> out;
    for (const auto& t : toks) out.push_back(parse_double(t, e.line));
    return out;
}

std::vector<int> int_list(const ConfigEntry& e, long long min_value) {
    std::vector<int> out;
    for (const auto& t : split_tokens(e.value)) {
        const long long v = parse_int(t, e.line);
        if (v < min_value)
            throw ConfigError(e.line, "value " + t + " below minimum " +
                                          std::to_string(min_value));
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ConfigError(e.line, "empty list for key '" + e.key + "'");
    return out;
}

void check_positive(double v, const ConfigEntry& e) {
    if (!(v > 0.0))
        throw ConfigError(e.line, "key '" + e.key + "' must be positive");
}

BunchSpec read_bunch(View& v) {
    BunchSpec spec;
    const std::string dist = v.word("bunch", "distribution", "gaussian");
    if (dist == "gaussian")
        spec.dist = BunchSpec::Dist::Gaussian;
    else if (dist == "cold_sphere")
        spec.dist = BunchSpec::Dist::ColdSphere;
    else
        throw ConfigError(v.require("bunch", "distribution").line,
                          "unknown distribution '" + dist + "'");
    const long long n = v.integer("bunch", "n", 0);
    if (n < 1) throw ConfigError(0, "bunch.n must be >= 1");
    spec.n = static_cast<std::size_t>(n);
    if (spec.dist == BunchSpec::Dist::Gaussian) {
        const char* keys[3] = {"sigma_x", "sigma_y", "sigma_z"};
        for (int a = 0; a < 3; ++a) {
            const ConfigEntry& e = v.require("bunch", keys[a]);
            spec.sigma[a] = parse_double(e.value, e.line);
            check_positive(spec.sigma[a], e);
        }
        spec.momentum_spread = v.number("bunch", "momentum_spread", 0.0);
        if (spec.momentum_spread < 0.0)
            throw ConfigError(0, "bunch.momentum_spread must be >= 0");
    } else {
        const ConfigEntry& e = v.require("bunch", "radius");
        spec.radius = parse_double(e.value, e.line);
        check_positive(spec.radius, e);
    }
    spec.total_charge = v.number("bunch", "total_charge", 0.0);
    spec.kinetic_energy_ev = v.number("bunch", "kinetic_energy_ev", 0.0);
    if (spec.kinetic_energy_ev < 0.0)
        throw ConfigError(0, "bunch.kinetic_energy_ev must be >= 0");
    spec.seed = static_cast<std::uint64_t>(v.integer("bunch", "seed", 1));
    return spec;
}

ExternalFieldModel read_fields(View& v) {
    ExternalFieldModel model;
    for (const ConfigEntry* e : v.section_entries("fields")) {
        if (e->key == "uniform_e") {
            const auto nums = numbers(*e, 3);
            model.parts.push_back(UniformE{Vec3{nums[0], nums[1], nums[2]}});
        } else if (e->key == "uniform_b") {
            const auto nums = numbers(*e, 3);
            model.parts.push_back(UniformB{Vec3{nums[0], nums[1], nums[2]}});
        } else if (e->key == "solenoid") {
            const auto nums = numbers(*e, 1);
            model.parts.push_back(Solenoid{Vec3{0, 0, 1}, nums[0]});
        } else if (e->key == "rf_gap") {
            const auto nums = numbers(*e, 5);
            if (!(nums[4] > 0.0))
                throw ConfigError(e->line, "rf_gap length must be positive");
            model.parts.push_back(RFGap{nums[0], nums[1], nums[2], nums[3], nums[4]});
        } else {
            throw ConfigError(e->line, "unknown field model '" + e->key + "'");
        }
    }
    return model;
}

SelfFieldConfig read_solver(View& v) {
    SelfFieldConfig cfg;
    const std::string kind = v.word("solver", "kind", "direct_sum");
    if (kind == "direct_sum")
        cfg.kind = SelfFieldConfig::Kind::DirectSum;
    else if (kind == "mesh")
        cfg.kind = SelfFieldConfig::Kind::MeshPIC;
    else
        throw ConfigError(v.require("solver", "kind").line,
                          "unknown solver kind '" + kind + "'");
    if (const ConfigEntry* e = v.find("solver", "softening")) {
        cfg.softening = parse_double(e->value, e->line);
        check_positive(cfg.softening, *e);
    }
    if (const ConfigEntry* e = v.find("solver", "grid")) {
        const auto toks = split_tokens(e->value);
        if (toks.size() != 3)
            throw ConfigError(e->line, "grid expects 3 values");
        for (int a = 0; a < 3; ++a) {
            const long long g = parse_int(toks[a], e->line);
            if (g < 8 || g % 2 != 0)
                throw ConfigError(e->line, "grid dimensions must be even and >= 8");
            cfg.grid[a] = static_cast<int>(g);
        }
    }
    if (const ConfigEntry* e = v.find("solver", "padding")) {
        cfg.padding = parse_double(e->value, e->line);
        if (!(cfg.padding >= 1.0))
            throw ConfigError(e->line, "padding must be >= 1");
    }
    return cfg;
}

IntegratorConfig read_integrator(View& v) {
    IntegratorConfig cfg;
    const ConfigEntry& me = v.require("integrator", "method");
    if (me.value == "bb")
        cfg.method = Method::BB;
    else if (me.value == "bb_stale")
        cfg.method = Method::BBStale;
    else if (me.value == "mts")
        cfg.method = Method::MTS;
    else if (me.value == "amts")
        cfg.method = Method::AMTS;
    else
        throw ConfigError(me.line, "unknown method '" + me.value + "'");
    {
        const ConfigEntry& e = v.require("integrator", "t_end");
        cfg.t_end = parse_double(e.value, e.line);
        check_positive(cfg.t_end, e);
    }
    if (cfg.method == Method::BB || cfg.method == Method::BBStale ||
        cfg.method == Method::MTS) {
        const ConfigEntry& e = v.require("integrator", "h");
        cfg.h = parse_double(e.value, e.line);
        check_positive(cfg.h, e);
    }
    if (cfg.method == Method::BBStale) {
        cfg.stale_period = static_cast<int>(v.integer("integrator", "stale_period", 1));
        if (cfg.stale_period < 1)
            throw ConfigError(0, "integrator.stale_period must be >= 1");
    }
    if (cfg.method == Method::MTS) {
        cfg.substeps = static_cast<int>(v.integer("integrator", "substeps", 1));
        if (cfg.substeps < 1) throw ConfigError(0, "integrator.substeps must be >= 1");
    }
    if (cfg.method == Method::AMTS) {
        {
            const ConfigEntry& e = v.require("integrator", "dt_outer_init");
            cfg.dt_outer_init = parse_double(e.value, e.line);
            check_positive(cfg.dt_outer_init, e);
        }
        {
            const ConfigEntry& e = v.require("integrator", "dt_inner");
            cfg.dt_inner = parse_double(e.value, e.line);
            check_positive(cfg.dt_inner, e);
        }
        cfg.beta = v.number("integrator", "beta", 1.0);
        cfg.h_min = v.number("integrator", "h_min", 0.0);
        cfg.h_max = v.number("integrator", "h_max", 0.0);
        if (cfg.h_min < 0.0 || cfg.h_max < 0.0)
            throw ConfigError(0, "integrator.h_min/h_max must be >= 0");
        if (cfg.h_min > 0.0 && cfg.h_max > 0.0 && cfg.h_max < cfg.h_min)
            throw ConfigError(0, "integrator.h_max must be >= h_min");
        const std::string g = v.word("integrator", "g", "accel");
        if (g == "accel")
            cfg.g_kind = GKind::Accel;
        else if (g == "beam_size")
            cfg.g_kind = GKind::BeamSize;
        else
            throw ConfigError(v.require("integrator", "g").line,
                              "unknown g-function '" + g + "'");
    }
    return cfg;
}

Scenario build_scenario(std::vector<ConfigEntry> entries) {
    View v(std::move(entries));
    Scenario sc;
    sc.bunch = read_bunch(v);
    sc.fields = read_fields(v);
    sc.solver = read_solver(v);
    sc.integ = read_integrator(v);
    sc.cadence = v.number("output", "cadence", 0.0);
    if (sc.cadence < 0.0) throw ConfigError(0, "output.cadence must be >= 0");
    if (const ConfigEntry* e = v.find("experiment", "budgets")) sc.budgets = int_list(*e, 2);
    if (const ConfigEntry* e = v.find("experiment", "periods")) sc.periods = int_list(*e, 1);
    sc.checkpoints = static_cast<int>(v.integer("experiment", "checkpoints", 3));
    if (sc.checkpoints < 1) throw ConfigError(0, "experiment.checkpoints must be >= 1");
    v.reject_unused();
    return sc;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    return build_scenario(parse_config_file(path));
}

Scenario load_scenario_text(const std::string& text) {
    return build_scenario(parse_config_text(text));
}

}  // namespace beam
