#include "ssplmm/run_config.hpp"

#include <fstream>
#include <sstream>

namespace ssplmm {

Method method_from_string(const std::string& name) {
    if (name == "ssprk2-only")
        return Method::Ssprk2Only;
    if (name == "msv-32")
        return Method::Msv32;
    if (name == "msv-42")
        return Method::Msv42;
    if (name == "msv-52")
        return Method::Msv52;
    if (name == "msv-62")
        return Method::Msv62;
    if (name == "msv-43")
        return Method::Msv43;
    if (name == "msv-53")
        return Method::Msv53;
    throw ConfigError("unknown method '" + name +
                      "' (expected ssprk2-only, msv-32, msv-42, msv-52, msv-62, msv-43, msv-53)");
}

std::string method_name(Method m) {
    switch (m) {
    case Method::Ssprk2Only:
        return "ssprk2-only";
    case Method::Msv32:
        return "msv-32";
    case Method::Msv42:
        return "msv-42";
    case Method::Msv52:
        return "msv-52";
    case Method::Msv62:
        return "msv-62";
    case Method::Msv43:
        return "msv-43";
    case Method::Msv53:
        return "msv-53";
    }
    return "?";
}

int method_k(Method m) {
    switch (m) {
    case Method::Ssprk2Only:
        return 1;
    case Method::Msv32:
        return 3;
    case Method::Msv42:
    case Method::Msv43:
        return 4;
    case Method::Msv52:
    case Method::Msv53:
        return 5;
    case Method::Msv62:
        return 6;
    }
    return 0;
}

int method_order(Method m) {
    switch (m) {
    case Method::Msv43:
    case Method::Msv53:
        return 3;
    default:
        return 2;
    }
}

void RunConfig::validate() const {
    if (!(t_final > 0.0))
        throw ConfigError("t_final must be positive");
    if (n_cells < 6)
        throw ConfigError("n_cells too small for the reconstruction stencils");
    if (!(h1 > 0.0))
        throw ConfigError("h1 must be positive");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw ConfigError("gamma must lie in (0, 1]");
    if (!(cfl_fe > 0.0))
        throw ConfigError("cfl_fe must be positive");
    if (problem != "advection" && problem != "burgers" && problem != "blastwave")
        throw ConfigError("unknown problem '" + problem + "'");
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
    auto as_double = [&](const std::string& v) {
        try {
            size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("invalid numeric value '" + v + "' for key '" + key + "'");
        }
    };
    auto as_bool = [&](const std::string& v) {
        if (v == "true" || v == "1" || v == "yes")
            return true;
        if (v == "false" || v == "0" || v == "no")
            return false;
        throw ConfigError("invalid boolean value '" + v + "' for key '" + key + "'");
    };

    if (key == "problem")
        config.problem = value;
    else if (key == "method")
        config.method = method_from_string(value);
    else if (key == "cells")
        config.n_cells = static_cast<int>(as_double(value));
    else if (key == "tfinal")
        config.t_final = as_double(value);
    else if (key == "h1")
        config.h1 = as_double(value);
    else if (key == "gamma")
        config.gamma = as_double(value);
    else if (key == "cfl_fe")
        config.cfl_fe = as_double(value);
    else if (key == "enforce_conditions")
        config.enforce_conditions = as_bool(value);
    else if (key == "out")
        config.out_dir = value;
    else if (key == "snapshots")
        config.write_snapshots = as_bool(value);
    else if (key == "seed")
        config.seed = static_cast<std::uint64_t>(as_double(value));
    else
        throw ConfigError("unknown config key '" + key + "'");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    RunConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

} // namespace ssplmm
