#include "hysop/io/oracle_config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "hysop/error.hpp"

namespace hysop::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text, std::size_t line) {
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw FormatError("oracle config line " + std::to_string(line) + ": '" + key + "' expects a number, got '" +
                          text + "'");
    return v;
}

void put(std::ostream& out, const char* key, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out << key << " = " << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
}

}  // namespace

preisach::PreisachModel OracleConfig::build() const {
    switch (kind) {
        case preisach::DensityKind::uniform:
            return preisach::PreisachModel(
                preisach::EverettMap(preisach::PreisachDensity::uniform(h_sat, uniform_weight), n_grid), b_sat);
        case preisach::DensityKind::gaussian:
            return preisach::PreisachModel(
                preisach::EverettMap(preisach::PreisachDensity::gaussian(h_sat, gaussian), n_grid), b_sat);
        case preisach::DensityKind::relay_list:
            return preisach::PreisachModel(
                preisach::EverettMap(preisach::PreisachDensity::relays(h_sat, relays), n_grid), b_sat);
    }
    throw ParameterError("unknown density kind");
}

OracleConfig parse_oracle_config(std::istream& in) {
    struct Value {
        std::string text;
        std::size_t line;
    };
    std::map<std::string, Value> scalars;
    std::vector<Value> relay_lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("oracle config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "params.relay") {
            relay_lines.push_back({value, line_no});
            continue;
        }
        static const char* known[] = {"kind",
                                      "h_sat",
                                      "b_sat",
                                      "n_grid",
                                      "params.weight",
                                      "params.mean_alpha",
                                      "params.mean_beta",
                                      "params.stddev_alpha",
                                      "params.stddev_beta",
                                      "params.ridge_fraction"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw FormatError("oracle config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!scalars.emplace(key, Value{value, line_no}).second)
            throw FormatError("oracle config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    auto number = [&](const std::string& key, double& dst) {
        const auto it = scalars.find(key);
        if (it != scalars.end()) dst = parse_number(key, it->second.text, it->second.line);
    };

    OracleConfig c;
    if (const auto it = scalars.find("kind"); it != scalars.end()) {
        try {
            c.kind = preisach::density_kind_from_string(it->second.text);
        } catch (const Error& e) {
            throw FormatError("oracle config line " + std::to_string(it->second.line) + ": " + e.what());
        }
    }
    number("h_sat", c.h_sat);
    number("b_sat", c.b_sat);
    if (const auto it = scalars.find("n_grid"); it != scalars.end()) {
        const double g = parse_number("n_grid", it->second.text, it->second.line);
        if (!(g >= 2) || g != static_cast<double>(static_cast<std::size_t>(g)))
            throw FormatError("oracle config line " + std::to_string(it->second.line) +
                              ": n_grid must be an integer >= 2");
        c.n_grid = static_cast<std::size_t>(g);
    }
    // Gaussian defaults follow the saturation field unless overridden.
    c.gaussian = preisach::GaussianParams::defaults_for(c.h_sat);
    number("params.mean_alpha", c.gaussian.mean_alpha);
    number("params.mean_beta", c.gaussian.mean_beta);
    number("params.stddev_alpha", c.gaussian.stddev_alpha);
    number("params.stddev_beta", c.gaussian.stddev_beta);
    number("params.ridge_fraction", c.gaussian.ridge_fraction);
    number("params.weight", c.uniform_weight);

    for (const auto& r : relay_lines) {
        std::istringstream fields(r.text);
        std::string a, b, w, extra;
        if (!(fields >> a >> b >> w) || (fields >> extra))
            throw FormatError("oracle config line " + std::to_string(r.line) +
                              ": params.relay expects 'alpha beta weight'");
        c.relays.push_back({parse_number("params.relay", a, r.line), parse_number("params.relay", b, r.line),
                            parse_number("params.relay", w, r.line)});
    }

    const bool gaussian_keys = std::any_of(scalars.begin(), scalars.end(), [](const auto& kv) {
        return kv.first.rfind("params.", 0) == 0 && kv.first != "params.weight";
    });
    if (c.kind != preisach::DensityKind::relay_list && !c.relays.empty())
        throw FormatError("params.relay is only valid for kind = relays");
    if (c.kind != preisach::DensityKind::gaussian && gaussian_keys)
        throw FormatError("gaussian parameters given for kind = " + preisach::to_string(c.kind));
    if (c.kind != preisach::DensityKind::uniform && scalars.count("params.weight"))
        throw FormatError("params.weight is only valid for kind = uniform");
    if (c.kind == preisach::DensityKind::relay_list && c.relays.empty())
        throw FormatError("kind = relays needs at least one params.relay line");
    return c;
}

OracleConfig load_oracle_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_oracle_config(in);
}

void write_oracle_config(std::ostream& out, const OracleConfig& c) {
    out << "kind = " << preisach::to_string(c.kind) << '\n';
    put(out, "h_sat", c.h_sat);
    put(out, "b_sat", c.b_sat);
    out << "n_grid = " << c.n_grid << '\n';
    switch (c.kind) {
        case preisach::DensityKind::uniform:
            put(out, "params.weight", c.uniform_weight);
            break;
        case preisach::DensityKind::gaussian:
            put(out, "params.mean_alpha", c.gaussian.mean_alpha);
            put(out, "params.mean_beta", c.gaussian.mean_beta);
            put(out, "params.stddev_alpha", c.gaussian.stddev_alpha);
            put(out, "params.stddev_beta", c.gaussian.stddev_beta);
            put(out, "params.ridge_fraction", c.gaussian.ridge_fraction);
            break;
        case preisach::DensityKind::relay_list:
            for (const auto& r : c.relays) {
                char buf[3][64];
                auto f = [&](int i, double v) {
                    return std::string_view(buf[i], static_cast<std::size_t>(
                                                        std::to_chars(buf[i], buf[i] + 64, v).ptr - buf[i]));
                };
                out << "params.relay = " << f(0, r.alpha) << ' ' << f(1, r.beta) << ' ' << f(2, r.weight) << '\n';
            }
            break;
    }
}

}  // namespace hysop::io
