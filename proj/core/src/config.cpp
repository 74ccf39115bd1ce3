#include "relaylab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "relaylab/errors.hpp"

namespace relaylab::cli {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

class KeyTable {
public:
    KeyTable(std::string_view text, std::string_view source) : source_(source) {
        int line_no = 0;
        std::string line;
        std::istringstream stream{std::string(text)};
        while (std::getline(stream, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto strip = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                if (b == std::string::npos) return std::string();
                const auto e = s.find_last_not_of(" \t\r");
                return s.substr(b, e - b + 1);
            };
            const std::string trimmed = strip(line);
            if (trimmed.empty()) continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError(where(line_no) + "expected key=value, got '" + trimmed + "'");
            const std::string key = strip(trimmed.substr(0, eq));
            const std::string value = strip(trimmed.substr(eq + 1));
            if (key.empty()) throw ConfigError(where(line_no) + "empty key");
            if (entries_.count(key))
                throw ConfigError(where(line_no) + "duplicate key '" + key + "'");
            entries_[key] = Entry{value, line_no, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    double take_double(const std::string& key, double fallback) {
        const auto v = take(key);
        return v ? to_double(key, *v) : fallback;
    }

    std::optional<double> take_double_opt(const std::string& key) {
        const auto v = take(key);
        if (!v) return std::nullopt;
        return to_double(key, *v);
    }

    std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
        const auto v = take(key);
        if (!v) return fallback;
        std::uint64_t out = 0;
        const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || p != v->data() + v->size())
            throw ConfigError(key_where(key) + "expected an unsigned integer, got '" + *v + "'");
        return out;
    }

    double to_double(const std::string& key, const std::string& v) const {
        double out = 0.0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || p != v.data() + v.size())
            throw ConfigError(key_where(key) + "expected a number, got '" + v + "'");
        return out;
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_)
            if (!e.used) throw ConfigError(where(e.line) + "unknown key '" + key + "'");
    }

    /// Keys with the given prefix (for mixed-mode and override scans).
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
        std::vector<std::string> out;
        for (const auto& [key, e] : entries_)
            if (key.rfind(prefix, 0) == 0) out.push_back(key);
        return out;
    }

    std::string key_where(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? source_ + ": " : where(it->second.line) + "key '" + key + "': ";
    }

private:
    std::string where(int line) const {
        return source_ + ":" + std::to_string(line) + ": ";
    }

    std::string source_;
    std::map<std::string, Entry> entries_;
};

model::LinkFading parse_link(KeyTable& keys, const std::string& prefix, bool geometric,
                             const model::LinkFading& base, bool require) {
    model::LinkFading link = base;
    const std::string scale_key = prefix + (geometric ? ".omega0" : ".omega");
    const std::string other_key = prefix + (geometric ? ".omega" : ".omega0");
    if (keys.has(other_key))
        throw ConfigError(keys.key_where(other_key) +
                          (geometric ? "direct variance not allowed in geometry mode"
                                     : "omega0 requires geometry mode"));
    if (require) {
        const auto m = keys.take_double_opt(prefix + ".m");
        const auto scale = keys.take_double_opt(scale_key);
        if (!m) throw ConfigError("missing key '" + prefix + ".m'");
        if (!scale) throw ConfigError("missing key '" + scale_key + "'");
        link.m = *m;
        link.omega0 = *scale;
    } else {
        link.m = keys.take_double(prefix + ".m", link.m);
        link.omega0 = keys.take_double(scale_key, link.omega0);
    }
    return link;
}

void parse_relay_sections(KeyTable& keys, bool geometric, model::SystemConfig& cfg) {
    // Homogeneous base profile from the link.* / si.* / sic.* sections.
    model::RelayProfile base;
    base.s1 = parse_link(keys, "link.s1", geometric, base.s1, true);
    base.s2 = parse_link(keys, "link.s2", geometric, base.s2, true);
    base.d1 = parse_link(keys, "link.d1", geometric, base.d1, true);
    base.d2 = parse_link(keys, "link.d2", geometric, base.d2, true);
    base.si.m_rr = keys.take_double("si.m", 1.0);
    base.si.omega_rr = keys.take_double("si.omega0", 1.0);
    base.si.kappa = keys.take_double("si.kappa", 0.0);
    base.si.vartheta = keys.take_double("si.theta", 1.0);
    base.sic.eps_relay = keys.take_double("sic.eps_relay", 0.0);
    base.sic.eps_d2 = keys.take_double("sic.eps_d2", 0.0);
    base.sic.m_res_relay = keys.take_double("sic.m_relay", 1.0);
    base.sic.m_res_d2 = keys.take_double("sic.m_d2", 1.0);

    for (auto& relay : cfg.relays) relay = base;

    // Per-relay overrides: relay.<index>.<section>.<field>, 1-based index.
    for (const std::string& key : keys.keys_with_prefix("relay.")) {
        const auto dot = key.find('.', 6);
        if (dot == std::string::npos)
            throw ConfigError(keys.key_where(key) + "expected relay.<index>.<field>");
        std::size_t index = 0;
        const std::string num = key.substr(6, dot - 6);
        const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), index);
        if (ec != std::errc{} || p != num.data() + num.size() || index < 1 ||
            index > cfg.relays.size())
            throw ConfigError(keys.key_where(key) + "relay index out of range: '" + num + "'");
        model::RelayProfile& r = cfg.relays[index - 1];
        const std::string prefix = key.substr(0, dot);
        // Take each known override lazily; unknown subkeys fall through to
        // the final unused-key sweep.
        r.s1 = parse_link(keys, prefix + ".s1", geometric, r.s1, false);
        r.s2 = parse_link(keys, prefix + ".s2", geometric, r.s2, false);
        r.d1 = parse_link(keys, prefix + ".d1", geometric, r.d1, false);
        r.d2 = parse_link(keys, prefix + ".d2", geometric, r.d2, false);
        r.si.m_rr = keys.take_double(prefix + ".si.m", r.si.m_rr);
        r.si.omega_rr = keys.take_double(prefix + ".si.omega0", r.si.omega_rr);
        r.si.kappa = keys.take_double(prefix + ".si.kappa", r.si.kappa);
        r.si.vartheta = keys.take_double(prefix + ".si.theta", r.si.vartheta);
        r.sic.eps_relay = keys.take_double(prefix + ".sic.eps_relay", r.sic.eps_relay);
        r.sic.eps_d2 = keys.take_double(prefix + ".sic.eps_d2", r.sic.eps_d2);
        r.sic.m_res_relay = keys.take_double(prefix + ".sic.m_relay", r.sic.m_res_relay);
        r.sic.m_res_d2 = keys.take_double(prefix + ".sic.m_d2", r.sic.m_res_d2);
    }
}

}  // namespace

std::vector<Method> parse_methods(std::string_view csv) {
    std::vector<Method> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string_view tok =
            csv.substr(pos, comma == std::string_view::npos ? csv.size() - pos : comma - pos);
        if (tok == "exact")
            out.push_back(Method::Exact);
        else if (tok == "asymptotic")
            out.push_back(Method::Asymptotic);
        else if (tok == "mc")
            out.push_back(Method::MonteCarlo);
        else if (tok == "quadrature")
            out.push_back(Method::Quadrature);
        else
            throw ConfigError("unknown method '" + std::string(tok) +
                              "' (expected exact, asymptotic, mc, quadrature)");
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("method list is empty");
    return out;
}

sim::Strategy parse_strategy(std::string_view name) {
    if (name == "ssrs") return sim::Strategy::SSRS;
    if (name == "tsrs") return sim::Strategy::TSRS;
    throw ConfigError("unknown strategy '" + std::string(name) + "' (expected ssrs or tsrs)");
}

model::SystemConfig with_pt_db(const model::SystemConfig& cfg, double db) {
    model::SystemConfig out = cfg;
    out.total_power = std::pow(10.0, db / 10.0) * cfg.noise_relay;
    return out;
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    KeyTable keys(text, source);
    ExperimentConfig exp;
    model::SystemConfig& cfg = exp.system;

    const auto mode = keys.take("mode");
    if (!mode) throw ConfigError("missing key 'mode' (hd or fd)");
    if (*mode == "hd")
        cfg.mode = model::DuplexMode::HD;
    else if (*mode == "fd")
        cfg.mode = model::DuplexMode::FD;
    else
        throw ConfigError(keys.key_where("mode") + "expected hd or fd, got '" + *mode + "'");

    const std::uint64_t relay_count = keys.take_u64("relays", 0);
    if (relay_count < 1) throw ConfigError("key 'relays' must be at least 1");
    cfg.relays.resize(relay_count);

    const auto a1 = keys.take_double_opt("power.a1");
    if (!a1) throw ConfigError("missing key 'power.a1'");
    const auto a3 = keys.take_double_opt("power.a3");
    if (!a3) throw ConfigError("missing key 'power.a3'");
    cfg.power = model::PowerAllocation::qos(*a1, *a3);
    cfg.power.a2 = keys.take_double("power.a2", cfg.power.a2);
    cfg.power.a4 = keys.take_double("power.a4", cfg.power.a4);

    const auto r1 = keys.take_double_opt("rates.d1");
    const auto r2 = keys.take_double_opt("rates.d2");
    if (!r1) throw ConfigError("missing key 'rates.d1'");
    if (!r2) throw ConfigError("missing key 'rates.d2'");
    cfg.rate_d1 = *r1;
    cfg.rate_d2 = *r2;

    cfg.noise_relay = keys.take_double("noise.relay", 1.0);
    cfg.noise_d1 = keys.take_double("noise.d1", 1.0);
    cfg.noise_d2 = keys.take_double("noise.d2", 1.0);

    const bool geometric = !keys.keys_with_prefix("geometry.").empty();
    if (geometric) {
        model::NodeLayout layout;
        layout.alpha = keys.take_double("geometry.alpha", 3.0);
        layout.s1 = {keys.take_double("geometry.s1.x", -6.0), keys.take_double("geometry.s1.y", 6.0)};
        layout.s2 = {keys.take_double("geometry.s2.x", -6.0), keys.take_double("geometry.s2.y", -6.0)};
        layout.d1 = {keys.take_double("geometry.d1.x", 6.0), keys.take_double("geometry.d1.y", -6.0)};
        layout.d2 = {keys.take_double("geometry.d2.x", 6.0), keys.take_double("geometry.d2.y", 6.0)};
        layout.relay_r = keys.take_double("geometry.relay.r", 0.0);
        layout.relay_theta = keys.take_double("geometry.relay.theta", 0.0);
        cfg.layout = layout;
    }
    parse_relay_sections(keys, geometric, cfg);

    RunParams& run = exp.run;
    run.db_start = keys.take_double("sweep.start", run.db_start);
    run.db_stop = keys.take_double("sweep.stop", run.db_stop);
    run.db_step = keys.take_double("sweep.step", run.db_step);
    run.trials = keys.take_u64("mc.trials", run.trials);
    run.seed = keys.take_u64("mc.seed", run.seed);
    if (const auto s = keys.take("strategy")) run.strategy = parse_strategy(*s);
    if (const auto m = keys.take("methods")) run.methods = parse_methods(*m);
    run.pt_db = keys.take_double_opt("ptdb");

    keys.reject_unused();

    if (run.pt_db) cfg = with_pt_db(cfg, *run.pt_db);
    cfg.validate();
    const double sum12 = cfg.power.a1 + cfg.power.a2;
    const double sum34 = cfg.power.a3 + cfg.power.a4;
    if (std::abs(sum12 - 1.0) > 1e-12 || std::abs(sum34 - 1.0) > 1e-12)
        throw ConfigError("power: allocations must sum to 1 per hop");
    return exp;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace relaylab::cli
