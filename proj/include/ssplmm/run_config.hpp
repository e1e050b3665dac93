#pragma once

// Run configuration shared by the CLI and the command layer: method naming,
// defaults, key=value config files, and validation.

#include <cstdint>
#include <string>

#include "ssplmm/errors.hpp"

namespace ssplmm {

enum class Method {
    Ssprk2Only,
    Msv32,
    Msv42,
    Msv52,
    Msv62,
    Msv43,
    Msv53,
};

Method method_from_string(const std::string& name);
std::string method_name(Method m);
int method_k(Method m);
int method_order(Method m);

struct RunConfig {
    std::string problem = "advection";
    Method method = Method::Msv32;
    int n_cells = 256;
    double t_final = 1.0;
    double h1 = 0.1;
    double gamma = 0.9;
    double cfl_fe = 0.5;
    bool enforce_conditions = true;
    std::string out_dir = ".";
    bool write_snapshots = false;
    std::uint64_t seed = 0;

    void validate() const; // throws ConfigError
};

/// Reads a key=value file ('#' comments, blank lines ignored) over the
/// defaults; flags parsed afterwards override these values.
RunConfig load_config_file(const std::string& path);

/// Applies one key=value assignment (the file format's parser core).
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

} // namespace ssplmm
