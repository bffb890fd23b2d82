#pragma once

// Command-line values and JSON descriptors: complex numbers ("1.5-0.2i"),
// points ("x,y"), multiplier files and expansion specs.

#include "json.hpp"
#include "report.hpp"

#include <maasslab/forms.hpp>
#include <maasslab/multiplier.hpp>
#include <maasslab/subgroup.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <string>

namespace maasslab::cli {

using json = nlohmann::json;

/// "a", "bi", "a+bi", "a-bi", "i", "-i"; whitespace is ignored.
inline Complex parse_complex(std::string text) {
    std::erase_if(text, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    static const std::string num = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
    static const std::regex real_only("^" + num + "$");
    static const std::regex imag_only(R"(^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]$)");
    static const std::regex both("^" + num + R"(([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]$)");
    auto coef = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return std::stod(s);
    };
    std::smatch m;
    if (std::regex_match(text, m, real_only)) return {std::stod(m[1]), 0.0};
    if (std::regex_match(text, m, imag_only)) return {0.0, coef(m[1])};
    if (std::regex_match(text, m, both)) return {std::stod(m[1]), coef(m[2])};
    throw ConfigError("cannot parse complex number '" + text + "' (expected a+bi)");
}

/// "x,y" with y > 0.
inline UHPoint parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("cannot parse point '" + text + "' (expected x,y)");
    try {
        const double x = std::stod(text.substr(0, comma)), y = std::stod(text.substr(comma + 1));
        if (!(y > 0.0)) throw ConfigError("point '" + text + "' is not in the upper half-plane");
        return {x, y};
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse point '" + text + "' (expected x,y)");
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// [re, im] or a bare number.
inline Complex complex_from_json(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(what + ": expected [re, im]");
}

inline CongruenceSubgroup group_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("level")) throw ConfigError("group: expected {kind, level}");
    try {
        const long level = j.at("level").get<long>();
        if (level < 1) throw ConfigError("group: level must be positive");
        return {parse_kind(j.at("kind").get<std::string>()), level};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("group: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("group: ") + e.what());
    }
}

/// {group: {kind, level}, weight: [re, im], kind: "trivial"|"eta"|"exponential",
///  params: {s: [re, im], phi: {"generator index": value}}}
inline MultiplierSystem load_multiplier(const std::string& path) {
    const json j = read_json_file(path);
    try {
        const CongruenceSubgroup G = group_from_json(j.at("group"));
        const Complex k = j.contains("weight") ? complex_from_json(j.at("weight"), "weight") : Complex(0.0);
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "trivial") return trivial_multiplier(G, k);
        if (kind == "eta") {
            if (std::abs(k - 0.5) > 1e-12) throw ConfigError(path + ": the eta multiplier has weight 1/2");
            const MultiplierSystem eta = eta_multiplier();
            return G.is_full_group() ? eta : eta.restrict_to(G);
        }
        if (kind == "exponential") {
            const json& params = j.at("params");
            const Complex s = complex_from_json(params.at("s"), "params.s");
            std::map<std::size_t, long> phi;
            for (const auto& [key, val] : params.at("phi").items()) phi[std::stoul(key)] = val.get<long>();
            return build_exponential_multiplier(G, phi, s, k);
        }
        throw ConfigError(path + ": unknown multiplier kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

struct ExpansionSpec {
    CongruenceSubgroup group;
    FourierWhittakerExpansion expansion;
};

/// {group?: {kind, level}, cusp_index, kappa, nu, k, A: {n: [re, im]}, B: {...},
///  C_plus, C_minus, M}. The group defaults to `fallback`.
inline ExpansionSpec load_expansion(const std::string& path, const CongruenceSubgroup& fallback) {
    const json j = read_json_file(path);
    try {
        const CongruenceSubgroup G = j.contains("group") ? group_from_json(j.at("group")) : fallback;
        const auto cs = cusps(G);
        const auto idx = j.value("cusp_index", 0L);
        if (idx < 0 || static_cast<std::size_t>(idx) >= cs.size())
            throw ConfigError(path + ": cusp_index out of range (" + G.name() + " has " + std::to_string(cs.size()) + " cusps)");
        FourierWhittakerExpansion e(cs[static_cast<std::size_t>(idx)]);
        e.kappa = j.value("kappa", 0.0);
        e.nu = complex_from_json(j.at("nu"), "nu");
        e.k = j.contains("k") ? complex_from_json(j.at("k"), "k") : Complex(0.0);
        e.M = j.value("M", 0.0);
        if (j.contains("C_plus")) e.C_plus = complex_from_json(j.at("C_plus"), "C_plus");
        if (j.contains("C_minus")) e.C_minus = complex_from_json(j.at("C_minus"), "C_minus");
        for (const char* which : {"A", "B"}) {
            if (!j.contains(which)) continue;
            auto& target = std::string(which) == "A" ? e.A : e.B;
            for (const auto& [key, val] : j.at(which).items()) target[std::stod(key)] = complex_from_json(val, which);
        }
        e.validate();
        return {G, std::move(e)};
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace maasslab::cli
