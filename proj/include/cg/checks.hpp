#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cg/integrability.hpp"

namespace cg {

// One identity of a suite. Upper-bound items pass when value <= tolerance, lower-bound
// items when value >= tolerance. Informational items never fail the suite.
struct CheckItem {
    std::string name;
    std::string statement;
    double value = 0;
    double tolerance = 0;
    bool lower_bound = false;
    bool informational = false;
    bool pass() const;
    bool gate() const { return informational || pass(); }
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckItem> items;
    bool pass() const;
    const CheckItem& get(const std::string& name) const;
};

struct SuiteOptions {
    SurfaceChart chart = SurfaceChart::clifford();
    ConformalFactor lambda = ConformalFactor::constant(1.0);
    int nu = 64, nv = 64;
    int samples = 100;
    std::uint64_t seed = 20240601;
    std::map<std::string, double> tolerances;   // per item name
    std::optional<ConformalData> data;          // tabulated input for integrability / reconstruction
    std::optional<LorentzMap> seed_transform;   // applied to the reconstruction seed
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

// Individual suites.
SuiteReport frame_suite(const SuiteOptions& opt);
SuiteReport integrability_suite(const SuiteOptions& opt);
SuiteReport appendix_a_suite(const SuiteOptions& opt);
SuiteReport appendix_b_suite(const SuiteOptions& opt);
SuiteReport scaling_suite(const SuiteOptions& opt);
SuiteReport equivariance_suite(const SuiteOptions& opt);
SuiteReport willmore_suite(const SuiteOptions& opt);
SuiteReport reconstruction_suite(const SuiteOptions& opt);

// Helpers shared with the acceptance driver.
double flat_torus_willmore(double r);  // (s^2 - r^2) / (4 r^3 s^3)
LorentzMap random_mobius(std::uint64_t seed, double max_rapidity);
std::vector<std::array<double, 2>> sample_points(const SurfaceChart& chart, int count, std::uint64_t seed);
std::vector<std::array<double, 2>> grid_points(const SurfaceChart& chart, int nu, int nv);

// Invariants implied by the data alone: m, 2m/E and -tr Omega*/E with E = -det Omega / m.
FrameInvariants data_invariants(const ConformalData& data);

}  // namespace cg
