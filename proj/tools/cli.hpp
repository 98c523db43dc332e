#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cg/checks.hpp"
#include "cg/integrability.hpp"

namespace cgcli {

enum Exit {
    kOk = 0,
    kCheckFailed = 1,
    kConfigError = 2,
    kUmbilic = 3,
    kDegenerate = 4,
    kIntegrability = 5,
    kGramDrift = 6,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    int nu = 64, nv = 64;
    double u_range[2] = {0, 0}, v_range[2] = {0, 0};
    bool periodic[2] = {true, true};
};

struct RunConfig {
    nlohmann::json source;  // canonical form, hashed for the fingerprint
    cg::SurfaceChart chart = cg::SurfaceChart::clifford();
    cg::ConformalFactor lambda = cg::ConformalFactor::constant(1.0);
    GridSpec grid;
    int jet_order = 6;
    std::vector<std::array<double, 2>> points;  // (alpha, rho)
    std::vector<std::string> invariants;        // sorted; empty means all
    std::map<std::string, double> tolerances;
    std::string out_path;
    std::string format = "json";
    std::string data_path;  // tabulated ConformalData
    int samples = 100;
    std::uint64_t seed = 20240601;

    std::string fingerprint() const;
    cg::Grid make_grid() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);  // empty path gives the defaults

cg::LorentzMap parse_transform(const std::string& spec);

nlohmann::json data_to_json(const cg::ConformalData& d);
cg::ConformalData data_from_json(const nlohmann::json& j);
cg::ConformalData load_data(const std::string& path);
void save_data(const cg::ConformalData& d, const std::string& path);

// Each command writes its result to out (or the configured path) and returns an exit code.
int cmd_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, const std::string& suite, const std::optional<cg::LorentzMap>& seed_transform,
              std::ostream& out, std::ostream& err);
int cmd_reconstruct(const RunConfig& cfg, const std::optional<cg::LorentzMap>& seed_transform, std::ostream& out,
                    std::ostream& err);
int cmd_catalog(const std::string& format, std::ostream& out);

// Maps library exceptions onto the exit-code contract.
int guarded(const std::function<int()>& fn, std::ostream& err);

// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cgcli
