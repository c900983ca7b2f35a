#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/lhv.hpp"
#include "bell_lab/membership.hpp"
#include "bell_lab/nonlocal_box.hpp"
#include "bell_lab/quantum.hpp"
#include "bell_lab/relativity.hpp"
#include "bell_lab/scenario.hpp"
#include "bell_lab/tally.hpp"

namespace bell::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON text with floats at 17 significant digits (doubles round-trip exactly)
// ---------------------------------------------------------------------------

inline std::string format_double_17(double v) {
    if (!std::isfinite(v)) return "null";  // JSON has no infinity; callers document the meaning
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Serialize with every float at 17 significant digits. (The library's own
/// writer, because the contract is the digit count, not shortest-round-trip.)
inline std::string dump_json_17(const json& j, int indent = -1, int depth = 0) {
    std::ostringstream os;
    const std::string pad = indent >= 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
    const std::string pad_close = indent >= 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
    switch (j.type()) {
        case json::value_t::number_float:
            os << format_double_17(j.get<double>());
            break;
        case json::value_t::array: {
            os << "[";
            bool first = true;
            for (const auto& el : j) {
                os << (first ? "" : ",") << pad << dump_json_17(el, indent, depth + 1);
                first = false;
            }
            os << (j.empty() ? "" : pad_close) << "]";
            break;
        }
        case json::value_t::object: {
            os << "{";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                os << (first ? "" : ",") << pad << json(it.key()).dump() << (indent >= 0 ? ": " : ":")
                   << dump_json_17(it.value(), indent, depth + 1);
                first = false;
            }
            os << (j.empty() ? "" : pad_close) << "}";
            break;
        }
        default:
            os << j.dump();  // strings, ints, bools, null
    }
    return os.str();
}

inline json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("json: malformed input");
    return j;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// Scenario and cell tables
// ---------------------------------------------------------------------------

inline json scenario_to_json(const Scenario& s) {
    json j;
    j["parties"] = s.n_parties;
    j["inputs"] = s.inputs;
    j["outputs"] = s.outputs;
    j["bottom"] = std::vector<bool>(s.bottom.begin(), s.bottom.end());
    return j;
}

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object() || !j.contains("parties") || !j.contains("inputs") || !j.contains("outputs"))
        throw ValidationError("scenario json: need parties, inputs, outputs");
    std::vector<bool> bottom;
    if (j.contains("bottom")) bottom = j["bottom"].get<std::vector<bool>>();
    return Scenario(j["parties"].get<int>(), j["inputs"].get<std::vector<int>>(),
                    j["outputs"].get<std::vector<int>>(), std::move(bottom));
}

namespace detail {

// Cell tables are nested arrays: one level per party input (party 0
// outermost), then one level per party outcome. [x][y][a][b] for two parties.
inline json nested_cells(const Scenario& s, const std::vector<double>& flat, int level,
                         std::vector<int>& x, std::vector<int>& a) {
    const int n = s.n_parties;
    if (level == 2 * n) {
        return flat[s.cell_index(s.joint_input_index(x), s.joint_output_index(a))];
    }
    json arr = json::array();
    if (level < n) {
        for (int v = 0; v < s.inputs[level]; ++v) {
            x[level] = v;
            arr.push_back(nested_cells(s, flat, level + 1, x, a));
        }
    } else {
        for (int v = 0; v < s.outputs[level - n]; ++v) {
            a[level - n] = v;
            arr.push_back(nested_cells(s, flat, level + 1, x, a));
        }
    }
    return arr;
}

inline void flat_cells(const Scenario& s, const json& nested, int level, std::vector<int>& x,
                       std::vector<int>& a, std::vector<double>& flat) {
    const int n = s.n_parties;
    if (level == 2 * n) {
        if (!nested.is_number()) throw ValidationError("cell table: non-numeric leaf");
        flat[s.cell_index(s.joint_input_index(x), s.joint_output_index(a))] = nested.get<double>();
        return;
    }
    const int expect = level < n ? s.inputs[level] : s.outputs[level - n];
    if (!nested.is_array() || nested.size() != static_cast<std::size_t>(expect))
        throw ValidationError("cell table: level " + std::to_string(level) + " expects " +
                              std::to_string(expect) + " entries");
    for (int v = 0; v < expect; ++v) {
        if (level < n)
            x[level] = v;
        else
            a[level - n] = v;
        flat_cells(s, nested[v], level + 1, x, a, flat);
    }
}

inline json cells_to_json(const Scenario& s, const std::vector<double>& flat) {
    std::vector<int> x(s.n_parties, 0), a(s.n_parties, 0);
    return nested_cells(s, flat, 0, x, a);
}

inline std::vector<double> cells_from_json(const Scenario& s, const json& nested) {
    std::vector<double> flat(s.n_cells(), 0.0);
    std::vector<int> x(s.n_parties, 0), a(s.n_parties, 0);
    flat_cells(s, nested, 0, x, a, flat);
    return flat;
}

} // namespace detail

inline json behavior_to_json(const Behavior& b) {
    json j;
    j["scenario"] = scenario_to_json(b.scenario());
    j["table"] = detail::cells_to_json(b.scenario(), b.table());
    return j;
}

inline Behavior behavior_from_json(const json& j) {
    if (!j.is_object() || !j.contains("scenario") || !j.contains("table"))
        throw ValidationError("behavior json: need scenario and table");
    const Scenario s = scenario_from_json(j["scenario"]);
    return Behavior(s, detail::cells_from_json(s, j["table"]));
}

inline json functional_to_json(const BellFunctional& f) {
    json j;
    j["scenario"] = scenario_to_json(f.scenario());
    j["coefficients"] = detail::cells_to_json(f.scenario(), f.coefficients());
    j["local_bound"] = f.local_bound();
    return j;
}

inline BellFunctional functional_from_json(const json& j) {
    if (!j.is_object() || !j.contains("scenario") || !j.contains("coefficients"))
        throw ValidationError("functional json: need scenario and coefficients");
    const Scenario s = scenario_from_json(j["scenario"]);
    return BellFunctional(s, detail::cells_from_json(s, j["coefficients"]));
}

inline json certificate_to_json(const NonlocalityCertificate& c) {
    json j = functional_to_json(c.functional);
    j["local_bound"] = c.local_bound;
    j["witnessed_value"] = c.witnessed_value;
    j["normalization"] = c.normalization;
    return j;
}

inline json local_model_to_json(const LocalModel& m) {
    json j;
    j["scenario"] = scenario_to_json(m.strategies.front().scenario);
    json strategies = json::array();
    for (std::size_t k = 0; k < m.strategies.size(); ++k) {
        json entry;
        entry["weight"] = m.weights[k];
        entry["outputs"] = m.strategies[k].output_for;  // [party][input]
        strategies.push_back(std::move(entry));
    }
    j["model"] = std::move(strategies);
    return j;
}

// ---------------------------------------------------------------------------
// Quantum setups
// ---------------------------------------------------------------------------

inline json quantum_setup_to_json(const QuantumSetup& q) {
    json j;
    json amps = json::array();
    for (const auto& a : q.state.amp) amps.push_back(json::array({a.real(), a.imag()}));
    j["state"] = std::move(amps);
    json settings = json::array();
    for (const auto& per_party : q.settings) {
        json thetas = json::array();
        for (const auto& m : per_party) thetas.push_back(m.theta);
        settings.push_back(std::move(thetas));
    }
    j["settings"] = std::move(settings);
    return j;
}

inline QuantumSetup quantum_setup_from_json(const json& j) {
    if (!j.is_object() || !j.contains("state") || !j.contains("settings"))
        throw ValidationError("quantum setup json: need state and settings");

    StateVector state = max_entangled_state();
    const json& st = j["state"];
    if (st.is_string()) {
        const std::string name = st.get<std::string>();
        if (name == "phi_plus")
            state = max_entangled_state();
        else if (name == "ghz")
            state = ghz_state();
        else
            throw ValidationError("quantum setup json: unknown state name '" + name + "'");
    } else if (st.is_array()) {
        std::vector<Amplitude> amps;
        for (const auto& el : st) {
            if (el.is_number())
                amps.emplace_back(el.get<double>(), 0.0);
            else if (el.is_array() && el.size() == 2)
                amps.emplace_back(el[0].get<double>(), el[1].get<double>());
            else
                throw ValidationError("quantum setup json: amplitude entries are numbers or [re, im]");
        }
        state = StateVector(std::move(amps));
    } else {
        throw ValidationError("quantum setup json: state is a name or an amplitude list");
    }

    QuantumSetup q{std::move(state), {}};
    for (const auto& per_party : j["settings"]) {
        std::vector<QubitMeasurement> ms;
        for (const auto& theta : per_party) ms.push_back(QubitMeasurement{theta.get<double>()});
        q.settings.push_back(std::move(ms));
    }
    q.validate();
    return q;
}

// ---------------------------------------------------------------------------
// Speed-scan geometry
// ---------------------------------------------------------------------------

inline constexpr double kEarthRadiusMeters = 6.371e6;

/// Geometry JSON: sites either planar [x,y,z] meters or {"lat_deg","lon_deg"}
/// on the rotating sphere; optional omega, session, frame beta, azimuth step.
inline SpeedScanGeometry geometry_from_json(const json& j) {
    if (!j.is_object() || !j.contains("sites") || !j["sites"].is_array() || j["sites"].size() != 2)
        throw ValidationError("geometry json: need exactly two sites");
    SpeedScanGeometry g;
    for (int i = 0; i < 2; ++i) {
        const json& site = j["sites"][i];
        if (site.is_array() && site.size() == 3) {
            g.sites[i] = {site[0].get<double>(), site[1].get<double>(), site[2].get<double>()};
        } else if (site.is_object() && site.contains("lat_deg") && site.contains("lon_deg")) {
            const double lat = site["lat_deg"].get<double>() * std::numbers::pi / 180.0;
            const double lon = site["lon_deg"].get<double>() * std::numbers::pi / 180.0;
            g.sites[i] = {kEarthRadiusMeters * std::cos(lat) * std::cos(lon),
                          kEarthRadiusMeters * std::cos(lat) * std::sin(lon),
                          kEarthRadiusMeters * std::sin(lat)};
        } else {
            throw ValidationError("geometry json: site is [x,y,z] or {lat_deg, lon_deg}");
        }
    }
    if (j.contains("omega_rad_per_s")) g.omega = j["omega_rad_per_s"].get<double>();
    if (j.contains("session_hours")) g.session_seconds = j["session_hours"].get<double>() * 3600.0;
    if (j.contains("frame_beta")) g.frame_beta = j["frame_beta"].get<double>();
    if (j.contains("azimuth_step_deg")) g.azimuth_step_deg = j["azimuth_step_deg"].get<double>();
    g.validate();
    return g;
}

inline json geometry_to_json(const SpeedScanGeometry& g) {
    json j;
    j["sites"] = json::array({json::array({g.sites[0][0], g.sites[0][1], g.sites[0][2]}),
                              json::array({g.sites[1][0], g.sites[1][1], g.sites[1][2]})});
    j["omega_rad_per_s"] = g.omega;
    j["session_hours"] = g.session_seconds / 3600.0;
    j["frame_beta"] = g.frame_beta;
    j["azimuth_step_deg"] = g.azimuth_step_deg;
    return j;
}

/// Two sites 18 km apart on the rotating chord, the published experiment's
/// scale.
inline SpeedScanGeometry geneva_18km_geometry() {
    SpeedScanGeometry g;
    g.sites[0] = {kEarthRadiusMeters, 0.0, 0.0};
    g.sites[1] = {kEarthRadiusMeters, 18'000.0, 0.0};
    return g;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string input_column(int party, int n_parties) {
    static const char* named[] = {"x", "y", "z"};
    return n_parties <= 3 ? named[party] : "x" + std::to_string(party);
}

inline std::string outcome_column(int party, int n_parties) {
    static const char* named[] = {"a", "b", "c"};
    return n_parties <= 3 ? named[party] : "a" + std::to_string(party);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace detail

/// Tally CSV: one column per party input, one per party outcome, then the
/// count ("x,y,a,b,count" for two parties). Zero rows are omitted.
inline std::string tally_to_csv(const TallyTable& t) {
    const Scenario& s = t.scenario;
    std::ostringstream os;
    for (int p = 0; p < s.n_parties; ++p) os << detail::input_column(p, s.n_parties) << ",";
    for (int p = 0; p < s.n_parties; ++p) os << detail::outcome_column(p, s.n_parties) << ",";
    os << "count\n";
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        const auto x = s.decode_input(ji);
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const std::uint64_t c = t.count(ji, jo);
            if (c == 0) continue;
            const auto a = s.decode_output(jo);
            for (int v : x) os << v << ",";
            for (int v : a) os << v << ",";
            os << c << "\n";
        }
    }
    return os.str();
}

inline TallyTable tally_from_csv(const Scenario& s, const std::string& text,
                                 std::uint64_t seed = 0) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("tally csv: empty input");
    TallyTable t(s, seed);
    const std::size_t expect = static_cast<std::size_t>(2 * s.n_parties) + 1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != expect)
            throw ValidationError("tally csv: row with " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(expect));
        try {
            std::vector<int> x(s.n_parties), a(s.n_parties);
            for (int p = 0; p < s.n_parties; ++p) x[p] = std::stoi(fields[p]);
            for (int p = 0; p < s.n_parties; ++p) a[p] = std::stoi(fields[s.n_parties + p]);
            t.add(s.joint_input_index(x), s.joint_output_index(a), std::stoull(fields.back()));
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError("tally csv: unparsable row '" + line + "'");
        }
    }
    return t;
}

/// PR-box round log: "round,x,y,a,b,seed".
inline std::string round_log_to_csv(const PrBox& box) {
    std::ostringstream os;
    os << "round,x,y,a,b,seed\n";
    for (const auto& r : box.log())
        os << r.round << "," << r.x << "," << r.y << "," << r.a << "," << r.b << "," << box.seed()
           << "\n";
    return os.str();
}

/// Speed-scan rows: "frame_azimuth_deg,frame_beta,v_min_over_c", with the
/// overall bound as a trailing comment line.
inline std::string speed_scan_to_csv(const SpeedScanResult& r) {
    std::ostringstream os;
    os << "frame_azimuth_deg,frame_beta,v_min_over_c\n";
    for (const auto& row : r.rows)
        os << format_double_17(row.azimuth_deg) << "," << format_double_17(row.beta) << ","
           << format_double_17(row.v_min_over_c) << "\n";
    os << "# overall_bound_over_c=" << format_double_17(r.overall_bound_over_c)
       << (r.capped ? " (exceeds cap)" : "") << "\n";
    return os.str();
}

inline json speed_scan_to_json(const SpeedScanResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json jr;
        jr["frame_azimuth_deg"] = row.azimuth_deg;
        jr["frame_beta"] = row.beta;
        jr["v_min_over_c"] = row.v_min_over_c;
        jr["best_session_time_s"] = row.best_session_time_s;
        jr["capped"] = row.capped;
        rows.push_back(std::move(jr));
    }
    json j;
    j["frames"] = std::move(rows);
    j["overall_bound_over_c"] = r.overall_bound_over_c;
    j["exceeds_cap"] = r.capped;
    return j;
}

} // namespace bell::io
