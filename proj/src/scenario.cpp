#include "subsketch/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace subsketch {

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::oneshot: return "oneshot";
        case Estimator::time_average: return "time_average";
        case Estimator::subspace_ls: return "subspace_ls";
        case Estimator::subspace_only: return "subspace_only";
    }
    return "?";
}

Estimator parse_estimator(const std::string& name) {
    for (Estimator e : {Estimator::oneshot, Estimator::time_average, Estimator::subspace_ls,
                        Estimator::subspace_only})
        if (name == estimator_name(e)) return e;
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

UlaConfig Scenario::ula() const { return UlaConfig(antennas, deg2rad(theta_max_deg)); }

ScatteringGeometry Scenario::geometry() const {
    ScatteringGeometry geom;
    geom.paths.reserve(path_angles_deg.size());
    for (std::size_t i = 0; i < path_angles_deg.size(); ++i)
        geom.paths.push_back({deg2rad(path_angles_deg[i]),
                              i < path_powers.size() ? path_powers[i] : 0.0});
    return geom;
}

TrainingSchedule Scenario::schedule(double noise_variance) const {
    return TrainingSchedule(tau, nu, noise_variance);
}

int Scenario::sketch_rows_effective() const {
    if (sketch_kind != SketchKind::coprime_selection) return sketch_rows;
    return SketchMatrix::coprime_selection(antennas).rows();
}

ScenarioError::ScenarioError(std::vector<std::string> issues_)
    : std::runtime_error([&issues_] {
          std::string msg = "invalid scenario:";
          for (const auto& i : issues_) msg += "\n  - " + i;
          return msg;
      }()),
      issues(std::move(issues_)) {}

namespace {

bool has_estimator(const Scenario& s, Estimator e) {
    return std::find(s.estimators.begin(), s.estimators.end(), e) != s.estimators.end();
}

void collect_issues(const Scenario& s, std::vector<std::string>& issues) {
    if (s.antennas < 1) issues.push_back("antennas: must be >= 1");
    if (!(s.theta_max_deg > 0.0 && s.theta_max_deg < 90.0))
        issues.push_back("theta_max_deg: must lie in (0, 90)");

    if (s.path_angles_deg.empty()) issues.push_back("angles_deg: need at least one path");
    if (s.path_powers.size() != s.path_angles_deg.size())
        issues.push_back("powers: length must match angles_deg");
    for (double a : s.path_angles_deg)
        if (!(std::abs(a) <= s.theta_max_deg))
            issues.push_back("angles_deg: path at " + std::to_string(a) +
                             " deg is outside the scan range");
    bool any_power = false;
    for (double p : s.path_powers) {
        if (!(p >= 0.0)) issues.push_back("powers: must be nonnegative");
        if (p > 0.0) any_power = true;
    }
    if (!s.path_powers.empty() && !any_power)
        issues.push_back("powers: at least one path must have positive power");

    if (s.tau < 1) issues.push_back("tau: must be >= 1");
    if (s.nu < 1) issues.push_back("nu: must be >= 1");

    if (s.sketch_kind == SketchKind::generic_orthonormal)
        issues.push_back("sketch: only 'random' and 'coprime' patterns are configurable");
    if (s.sketch_kind == SketchKind::random_selection &&
        (s.sketch_rows < 1 || s.sketch_rows > s.antennas))
        issues.push_back("sketch_rows: must lie in [1, antennas]");
    if (s.sketch_kind == SketchKind::coprime_selection && s.antennas < 4)
        issues.push_back("sketch: coprime selection needs antennas >= 4");

    if (s.snr_db.empty()) issues.push_back("snr_db: need at least one value");
    for (double v : s.snr_db)
        if (!std::isfinite(v)) issues.push_back("snr_db: values must be finite");
    if (s.tau_c.empty()) issues.push_back("tau_c: need at least one value");
    for (double v : s.tau_c)
        if (std::isnan(v) || v < 0.0)
            issues.push_back("tau_c: values must be >= 0 (inf allowed)");

    if (s.trials < 1) issues.push_back("trials: must be >= 1");
    if (s.estimators.empty()) issues.push_back("estimators: need at least one");
    std::set<Estimator> unique_est(s.estimators.begin(), s.estimators.end());
    if (unique_est.size() != s.estimators.size())
        issues.push_back("estimators: duplicate entries");

    if (s.rank_rule.kind == RankRule::Kind::known) {
        if (s.rank_rule.rank < 1 || s.rank_rule.rank > s.antennas)
            issues.push_back("rank_rule: known rank must lie in [1, antennas]");
        else if (has_estimator(s, Estimator::subspace_ls) &&
                 s.rank_rule.rank > s.sketch_rows_effective())
            issues.push_back(
                "rank_rule: subspace refinement needs sketch_rows >= rank "
                "(underdetermined least squares)");
    } else if (!(s.rank_rule.threshold > 0.0 && s.rank_rule.threshold < 1.0)) {
        issues.push_back("rank_rule: eigengap threshold must lie in (0, 1)");
    }

    if (!(s.epsilon_scale >= 0.0)) issues.push_back("epsilon_scale: must be >= 0");
    if (!(s.solver.tolerance > 0.0)) issues.push_back("tolerance: must be > 0");
    if (s.solver.max_iterations < 1) issues.push_back("max_iterations: must be >= 1");
    if (!(s.solver.penalty > 0.0)) issues.push_back("penalty: must be > 0");
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_int(const std::string& s, int& out) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < std::numeric_limits<int>::min() ||
            v > std::numeric_limits<int>::max())
            return false;
        out = static_cast<int>(v);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_uint64(const std::string& s, std::uint64_t& out) {
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) return false;
    try {
        std::size_t pos = 0;
        out = std::stoull(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_bool(const std::string& s, bool& out) {
    if (s == "true") { out = true; return true; }
    if (s == "false") { out = false; return true; }
    return false;
}

bool parse_double_list(const std::string& s, std::vector<double>& out) {
    out.clear();
    for (const auto& part : split(s, ',')) {
        double v;
        if (part.empty() || !parse_double(part, v)) return false;
        out.push_back(v);
    }
    return !out.empty();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_double_list(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ",";
        out += format_double(vs[i]);
    }
    return out;
}

} // namespace

void validate_scenario(const Scenario& s) {
    std::vector<std::string> issues;
    collect_issues(s, issues);
    if (!issues.empty()) throw ScenarioError(std::move(issues));
}

Scenario parse_scenario(const std::string& text) {
    Scenario s;
    std::vector<std::string> issues;
    std::map<std::string, std::string> kv;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            issues.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (!kv.emplace(key, value).second)
            issues.push_back("duplicate key '" + key + "'");
    }

    const auto bad = [&issues](const std::string& key, const std::string& why) {
        issues.push_back(key + ": " + why);
    };

    bool powers_given = false;
    for (const auto& [key, value] : kv) {
        if (key == "antennas") {
            if (!parse_int(value, s.antennas)) bad(key, "expected an integer");
        } else if (key == "theta_max_deg") {
            if (!parse_double(value, s.theta_max_deg)) bad(key, "expected a number");
        } else if (key == "angles_deg") {
            if (!parse_double_list(value, s.path_angles_deg))
                bad(key, "expected a comma-separated list of numbers");
        } else if (key == "powers") {
            if (value == "equal") {
                powers_given = false; // resolved after angles are known
            } else if (parse_double_list(value, s.path_powers)) {
                powers_given = true;
            } else {
                bad(key, "expected 'equal' or a comma-separated list of numbers");
            }
        } else if (key == "tau") {
            if (!parse_int(value, s.tau)) bad(key, "expected an integer");
        } else if (key == "nu") {
            if (!parse_int(value, s.nu)) bad(key, "expected an integer");
        } else if (key == "sketch") {
            if (value == "random") s.sketch_kind = SketchKind::random_selection;
            else if (value == "coprime") s.sketch_kind = SketchKind::coprime_selection;
            else bad(key, "expected 'random' or 'coprime'");
        } else if (key == "sketch_rows") {
            if (!parse_int(value, s.sketch_rows)) bad(key, "expected an integer");
        } else if (key == "redraw_sketch") {
            if (!parse_bool(value, s.redraw_sketch)) bad(key, "expected true or false");
        } else if (key == "snr_db") {
            if (!parse_double_list(value, s.snr_db))
                bad(key, "expected a comma-separated list of numbers");
        } else if (key == "tau_c") {
            if (!parse_double_list(value, s.tau_c))
                bad(key, "expected a comma-separated list of numbers");
        } else if (key == "trials") {
            if (!parse_int(value, s.trials)) bad(key, "expected an integer");
        } else if (key == "seed") {
            if (!parse_uint64(value, s.seed)) bad(key, "expected a nonnegative integer");
        } else if (key == "estimators") {
            std::vector<Estimator> est;
            bool ok = true;
            for (const auto& name : split(value, ',')) {
                try {
                    est.push_back(parse_estimator(name));
                } catch (const std::invalid_argument& e) {
                    bad(key, e.what());
                    ok = false;
                }
            }
            if (ok) s.estimators = std::move(est);
        } else if (key == "rank_rule") {
            const auto parts = split(value, ':');
            try {
                if (parts[0] == "known" && parts.size() == 2) {
                    int r;
                    if (parse_int(parts[1], r)) s.rank_rule = RankRule::known(r);
                    else bad(key, "expected known:<integer>");
                } else if (parts[0] == "eigengap" && parts.size() <= 2) {
                    double t = 0.05;
                    if (parts.size() == 2 && !parse_double(parts[1], t)) {
                        bad(key, "expected eigengap:<threshold>");
                    } else {
                        s.rank_rule = RankRule::eigengap(t);
                    }
                } else {
                    bad(key, "expected known:<p> or eigengap[:<threshold>]");
                }
            } catch (const std::invalid_argument& e) {
                bad(key, e.what());
            }
        } else if (key == "epsilon_scale") {
            if (!parse_double(value, s.epsilon_scale)) bad(key, "expected a number");
        } else if (key == "tolerance") {
            if (!parse_double(value, s.solver.tolerance)) bad(key, "expected a number");
        } else if (key == "max_iterations") {
            if (!parse_int(value, s.solver.max_iterations)) bad(key, "expected an integer");
        } else if (key == "penalty") {
            if (!parse_double(value, s.solver.penalty)) bad(key, "expected a number");
        } else if (key == "adaptive_penalty") {
            if (!parse_bool(value, s.solver.adaptive_penalty))
                bad(key, "expected true or false");
        } else {
            issues.push_back("unknown key '" + key + "'");
        }
    }

    if (!powers_given)
        s.path_powers.assign(s.path_angles_deg.size(),
                             1.0 / static_cast<double>(s.path_angles_deg.size()));
    if (s.sketch_kind == SketchKind::coprime_selection && kv.count("sketch_rows"))
        issues.push_back("sketch_rows: derived from antennas for coprime selection");

    collect_issues(s, issues);
    if (!issues.empty()) throw ScenarioError(std::move(issues));
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "antennas=" << s.antennas << "\n";
    out << "theta_max_deg=" << format_double(s.theta_max_deg) << "\n";
    out << "angles_deg=" << format_double_list(s.path_angles_deg) << "\n";
    out << "powers=" << format_double_list(s.path_powers) << "\n";
    out << "tau=" << s.tau << "\n";
    out << "nu=" << s.nu << "\n";
    out << "sketch="
        << (s.sketch_kind == SketchKind::coprime_selection ? "coprime" : "random") << "\n";
    if (s.sketch_kind != SketchKind::coprime_selection)
        out << "sketch_rows=" << s.sketch_rows << "\n";
    out << "redraw_sketch=" << (s.redraw_sketch ? "true" : "false") << "\n";
    out << "snr_db=" << format_double_list(s.snr_db) << "\n";
    out << "tau_c=" << format_double_list(s.tau_c) << "\n";
    out << "trials=" << s.trials << "\n";
    out << "seed=" << s.seed << "\n";
    out << "estimators=";
    for (std::size_t i = 0; i < s.estimators.size(); ++i)
        out << (i ? "," : "") << estimator_name(s.estimators[i]);
    out << "\n";
    if (s.rank_rule.kind == RankRule::Kind::known)
        out << "rank_rule=known:" << s.rank_rule.rank << "\n";
    else
        out << "rank_rule=eigengap:" << format_double(s.rank_rule.threshold) << "\n";
    out << "epsilon_scale=" << format_double(s.epsilon_scale) << "\n";
    out << "tolerance=" << format_double(s.solver.tolerance) << "\n";
    out << "max_iterations=" << s.solver.max_iterations << "\n";
    out << "penalty=" << format_double(s.solver.penalty) << "\n";
    out << "adaptive_penalty=" << (s.solver.adaptive_penalty ? "true" : "false") << "\n";
    return out.str();
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file '" + path + "'");
    out << serialize_scenario(s);
    if (!out) throw std::runtime_error("failed writing scenario file '" + path + "'");
}

bool operator==(const Scenario& a, const Scenario& b) {
    return a.antennas == b.antennas && a.theta_max_deg == b.theta_max_deg &&
           a.path_angles_deg == b.path_angles_deg && a.path_powers == b.path_powers &&
           a.tau == b.tau && a.nu == b.nu && a.sketch_kind == b.sketch_kind &&
           (a.sketch_kind == SketchKind::coprime_selection ||
            a.sketch_rows == b.sketch_rows) &&
           a.redraw_sketch == b.redraw_sketch && a.snr_db == b.snr_db &&
           a.tau_c == b.tau_c && a.trials == b.trials && a.seed == b.seed &&
           a.estimators == b.estimators && a.rank_rule.kind == b.rank_rule.kind &&
           a.rank_rule.rank == b.rank_rule.rank &&
           a.rank_rule.threshold == b.rank_rule.threshold &&
           a.epsilon_scale == b.epsilon_scale &&
           a.solver.tolerance == b.solver.tolerance &&
           a.solver.max_iterations == b.solver.max_iterations &&
           a.solver.penalty == b.solver.penalty &&
           a.solver.adaptive_penalty == b.solver.adaptive_penalty;
}

bool operator!=(const Scenario& a, const Scenario& b) { return !(a == b); }

} // namespace subsketch
