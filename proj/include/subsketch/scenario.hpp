// Experiment description: array, scattering geometry, training schedule,
// sketch pattern, sweep grids, estimator selection, and solver settings.
// Parses from / serializes to a flat key=value document; values are stored
// in the units the file uses (degrees, dB) so a serialize/parse round trip
// reproduces the scenario exactly.

#ifndef SUBSKETCH_SCENARIO_HPP
#define SUBSKETCH_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subsketch/channel.hpp"
#include "subsketch/rmmv.hpp"
#include "subsketch/sdp.hpp"
#include "subsketch/sketch.hpp"

namespace subsketch {

enum class Estimator { oneshot, time_average, subspace_ls, subspace_only };

const char* estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name); // throws on unknown name

// Defaults reproduce the reference simulation setup: a 64-element array
// scanning +-60 degrees, three equal-power paths at {0, +20, -20} degrees,
// 16 random-selection sketches, training windows of nu = 50 slots, and
// sweeps over snr x coherence time.
struct Scenario {
    int antennas = 64;
    double theta_max_deg = 60.0;
    std::vector<double> path_angles_deg{0.0, 20.0, -20.0};
    std::vector<double> path_powers{1.0 / 3, 1.0 / 3, 1.0 / 3};
    int tau = 1;  // fading steps per training slot
    int nu = 50;  // past-window length in slots
    SketchKind sketch_kind = SketchKind::random_selection;
    int sketch_rows = 16;
    bool redraw_sketch = true; // fresh random selection each trial
    std::vector<double> snr_db{-10.0, 0.0, 10.0, 20.0};
    std::vector<double> tau_c{1.0, 10.0, 100.0, 1000.0}; // inf = static channel
    int trials = 100;
    std::uint64_t seed = 1;
    std::vector<Estimator> estimators{Estimator::oneshot, Estimator::time_average,
                                      Estimator::subspace_ls, Estimator::subspace_only};
    RankRule rank_rule = RankRule::known(3);
    double epsilon_scale = 1.0; // multiplies the m sigma^2 data-fit radius
    SolverConfig solver;

    // Derived views in the units the simulation works in.
    UlaConfig ula() const;
    ScatteringGeometry geometry() const;
    TrainingSchedule schedule(double noise_variance) const;
    int sketch_rows_effective() const; // coprime selection derives m from M
};

// Carries every problem found during validation, one message per issue.
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(std::vector<std::string> issues_);
    std::vector<std::string> issues;
};

// Checks all invariants and cross-field constraints, collecting every
// violation before throwing ScenarioError.
void validate_scenario(const Scenario& s);

// Parses a key=value document ('#' comments, blank lines allowed). Unknown
// keys, duplicates, malformed values, and invariant violations are all
// collected into one ScenarioError. Keys not present keep their defaults.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path); // throws on I/O failure too

std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// Field-wise equality; solver progress callbacks are ignored.
bool operator==(const Scenario& a, const Scenario& b);
bool operator!=(const Scenario& a, const Scenario& b);

} // namespace subsketch

#endif // SUBSKETCH_SCENARIO_HPP
