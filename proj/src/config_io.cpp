#include "minetax/config_io.hpp"

#include <fstream>

namespace minetax {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key + ": missing field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    return v.get<double>();
}

double number_field(const json& obj, const std::string& key, const std::string& path) {
    return number(field(obj, key, path), path + "." + key);
}

std::vector<double> number_array(const json& obj, const std::string& key, const std::string& path) {
    const json& arr = field(obj, key, path);
    const std::string where = path + "." + key;
    if (!arr.is_array()) throw ConfigError(where + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number(arr[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<Bounds> bounds_array(const json& obj, const std::string& key, const std::string& path) {
    const json& arr = field(obj, key, path);
    const std::string where = path + "." + key;
    if (!arr.is_array()) throw ConfigError(where + ": expected an array of [lower, upper] pairs");
    std::vector<Bounds> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!arr[i].is_array() || arr[i].size() != 2) throw ConfigError(at + ": expected [lower, upper]");
        out.push_back({number(arr[i][0], at + "[0]"), number(arr[i][1], at + "[1]")});
    }
    return out;
}

AnalyticalParams analytical_from_json(const json& j) {
    const std::string path = "analytical";
    AnalyticalParams p;
    p.alpha = number_field(j, "alpha", path);
    p.beta = number_field(j, "beta", path);
    p.delta = number_field(j, "delta", path);
    p.gamma = number_field(j, "gamma", path);
    p.phi = number_field(j, "phi", path);
    p.k = number_field(j, "k", path);
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

ExtendedModel extended_from_json(const json& j) {
    const std::string path = "extended";
    ExtendedModel m;
    m.alpha = number_array(j, "alpha", path);
    m.beta = number_array(j, "beta", path);
    if (j.contains("discount_rate")) m.discount_rate = number_field(j, "discount_rate", path);
    try {
        m.strata = StrataTable(number_array(j, "strata", path));
    } catch (const DomainError& e) {
        throw ConfigError(path + ".strata: " + e.what());
    }
    const json& techs = field(j, "technologies", path);
    if (!techs.is_array()) throw ConfigError(path + ".technologies: expected an array");
    for (std::size_t i = 0; i < techs.size(); ++i) {
        const std::string at = path + ".technologies[" + std::to_string(i) + "]";
        TechParams t;
        const json& id = field(techs[i], "id", at);
        if (!id.is_number_integer()) throw ConfigError(at + ".id: expected an integer");
        t.id = id.get<int>();
        t.k = number_field(techs[i], "k", at);
        t.alpha_er = number_field(techs[i], "alpha_er", at);
        t.beta_er = number_field(techs[i], "beta_er", at);
        t.gamma_er = number_field(techs[i], "gamma_er", at);
        t.slopes = number_array(techs[i], "slopes", at);
        try {
            t.validate();
        } catch (const DomainError& e) {
            throw ConfigError(at + ": " + e.what());
        }
        m.techs.push_back(std::move(t));
    }
    if (j.contains("tau_bounds")) m.tau_bounds = bounds_array(j, "tau_bounds", path);
    if (j.contains("q_bounds")) m.q_bounds = bounds_array(j, "q_bounds", path);
    m.fill_default_bounds();
    try {
        m.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return m;
}

}  // namespace

ModelConfig default_config() { return {default_analytical_params(), default_extended_model()}; }

ModelConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (!j.contains("analytical") && !j.contains("extended"))
        throw ConfigError("config: needs an 'analytical' or 'extended' section");
    ModelConfig c = default_config();
    if (j.contains("analytical")) c.analytical = analytical_from_json(j.at("analytical"));
    if (j.contains("extended")) c.extended = extended_from_json(j.at("extended"));
    return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

json to_json(const AnalyticalParams& p) {
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"delta", p.delta},
            {"gamma", p.gamma}, {"phi", p.phi},   {"k", p.k}};
}

json to_json(const ExtendedModel& m) {
    json techs = json::array();
    for (const auto& t : m.techs)
        techs.push_back({{"id", t.id},
                         {"k", t.k},
                         {"alpha_er", t.alpha_er},
                         {"beta_er", t.beta_er},
                         {"gamma_er", t.gamma_er},
                         {"slopes", t.slopes}});
    auto pairs = [](const std::vector<Bounds>& bs) {
        json arr = json::array();
        for (const auto& b : bs) arr.push_back({b.lower, b.upper});
        return arr;
    };
    return {{"alpha", m.alpha},
            {"beta", m.beta},
            {"discount_rate", m.discount_rate},
            {"strata", m.strata.amounts()},
            {"technologies", techs},
            {"tau_bounds", pairs(m.tau_bounds)},
            {"q_bounds", pairs(m.q_bounds)}};
}

json to_json(const ModelConfig& c) { return {{"analytical", to_json(c.analytical)}, {"extended", to_json(c.extended)}}; }

}  // namespace minetax
