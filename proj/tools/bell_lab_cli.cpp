// bell-lab command line front end: every experiment and analysis as a
// subcommand with machine-readable output. JSON goes to stdout (floats at 17
// significant digits), logs to stderr. Exit codes: 0 ok, 2 validation error,
// 3 numeric failure, 4 desk-scale exceeded.

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bell_lab/bell_lab.hpp"

using namespace bell;
using bell::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitDeskScale = 4;

void emit(const json& j) { std::cout << io::dump_json_17(j, 2) << "\n"; }

int fail(const std::string& kind, const std::string& message, int code) {
    json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    emit(j);
    return code;
}

json loopholes_json(const std::optional<LoopholeReport>& loopholes) {
    if (!loopholes) return nullptr;
    json j;
    j["locality"] = loopholes->locality_open;
    j["detection"] = loopholes->detection_open;
    return j;
}

json run_report_json(const RunReport& report, json config_echo, const std::string& tallies_ref) {
    json j;
    j["config_echo"] = std::move(config_echo);
    j["seed"] = report.seed;
    j["N"] = report.rounds;
    j["tallies_ref"] = tallies_ref.empty() ? json(nullptr) : json(tallies_ref);
    j["S_hat"] = report.s.value;
    j["stderr"] = report.s.std_error;
    j["ci95"] = json::array({report.s.ci95.first, report.s.ci95.second});
    j["no_signaling_max_dev"] =
        report.no_signaling_max_dev ? json(*report.no_signaling_max_dev) : json(nullptr);
    j["loopholes"] = loopholes_json(report.loopholes);
    return j;
}

json strategy_json(const DeterministicStrategy& s) {
    json j;
    j["outputs"] = s.output_for;
    return j;
}

// ---------------------------------------------------------------------------

struct ChshArgs {
    std::string source = "pr";
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 0;
    std::vector<double> angles;  // a0 a1 b0 b1, radians; quantum source only
    std::string behavior_file;
    std::string tally_out;
};

int cmd_chsh(const ChshArgs& args) {
    ExperimentConfig cfg;
    cfg.rounds = args.rounds;
    cfg.seed = args.seed;
    cfg.source_label = args.source;

    json echo;
    echo["source"] = args.source;
    echo["rounds"] = args.rounds;
    echo["seed"] = args.seed;
    echo["input_distribution"] = "uniform iid per party";

    if (args.source == "pr") {
        cfg.source = ExperimentConfig::Source::pr_box;
    } else if (args.source == "quantum") {
        cfg.source = ExperimentConfig::Source::quantum;
        QuantumSetup setup = tsirelson_setup();
        if (!args.angles.empty()) {
            if (args.angles.size() != 4)
                throw ValidationError("chsh: --angles needs exactly 4 values (a0,a1,b0,b1)");
            setup.settings = {{QubitMeasurement{args.angles[0]}, QubitMeasurement{args.angles[1]}},
                              {QubitMeasurement{args.angles[2]}, QubitMeasurement{args.angles[3]}}};
        }
        echo["angles"] = json::array({setup.settings[0][0].theta, setup.settings[0][1].theta,
                                      setup.settings[1][0].theta, setup.settings[1][1].theta});
        cfg.setup = std::move(setup);
    } else if (args.source == "local") {
        LocalModel m;
        m.strategies = enumerate_deterministic(Scenario::chsh());
        m.weights.assign(m.strategies.size(), 1.0 / static_cast<double>(m.strategies.size()));
        cfg.source = ExperimentConfig::Source::behavior;
        cfg.behavior = behavior_of(m);
        echo["local_model"] = "uniform mixture of all 16 deterministic strategies";
    } else if (args.source == "file") {
        if (args.behavior_file.empty()) throw ValidationError("chsh: --source file needs --file");
        cfg.source = ExperimentConfig::Source::behavior;
        cfg.behavior = io::behavior_from_json(io::parse_json(io::read_text_file(args.behavior_file)));
        echo["file"] = args.behavior_file;
    } else {
        throw ValidationError("chsh: unknown source '" + args.source + "'");
    }

    const RunReport report = run(cfg);
    std::string tallies_ref;
    if (!args.tally_out.empty()) {
        io::write_text_file(args.tally_out, io::tally_to_csv(report.tally));
        tallies_ref = args.tally_out;
        std::cerr << "tally written to " << args.tally_out << "\n";
    }
    emit(run_report_json(report, std::move(echo), tallies_ref));
    return kExitOk;
}

struct LocalBoundArgs {
    std::string scenario = "2,2,2";
    std::string functional_file;
    std::uint64_t cap = kDefaultEnumerationCap;
};

int cmd_localbound(const LocalBoundArgs& args) {
    int parties = 0, inputs = 0, outputs = 0;
    if (std::sscanf(args.scenario.c_str(), "%d,%d,%d", &parties, &inputs, &outputs) != 3)
        throw ValidationError("localbound: --scenario wants 'parties,inputs,outputs'");
    const Scenario s = Scenario::uniform(parties, inputs, outputs);
    count_deterministic(s, args.cap);  // desk-scale gate before anything else

    BellFunctional f = BellFunctional::zeros(s);
    json echo;
    echo["scenario"] = io::scenario_to_json(s);
    if (!args.functional_file.empty()) {
        f = io::functional_from_json(io::parse_json(io::read_text_file(args.functional_file)));
        if (!(f.scenario() == s))
            throw ValidationError("localbound: functional scenario disagrees with --scenario");
        echo["functional"] = args.functional_file;
    } else if (s == Scenario::chsh()) {
        f = BellFunctional::chsh_s();
        echo["functional"] = "chsh-s (default)";
    } else {
        throw ValidationError("localbound: non-minimal scenarios need --functional");
    }

    const LocalMaxResult r = local_max(f, args.cap);
    json out;
    out["config_echo"] = std::move(echo);
    out["max"] = r.max_value;
    out["argmax"] = strategy_json(r.argmax);
    out["argmax_index"] = r.argmax_index;
    out["n_optimal"] = r.n_optimal;
    emit(out);
    return kExitOk;
}

struct MembershipArgs {
    std::string behavior_file;
    double tol = 1e-9;
    std::uint64_t cap = kDefaultEnumerationCap;
};

int cmd_membership(const MembershipArgs& args) {
    const Behavior b = io::behavior_from_json(io::parse_json(io::read_text_file(args.behavior_file)));
    const MembershipResult r = is_local(b, args.tol, args.cap);

    json out;
    out["config_echo"]["behavior"] = args.behavior_file;
    out["config_echo"]["tol"] = args.tol;
    out["local"] = r.local;
    if (r.local) {
        out["model"] = io::local_model_to_json(*r.model);
        out["residual"] = r.residual;
    } else {
        out["certificate"] = io::certificate_to_json(*r.certificate);
    }
    emit(out);
    return kExitOk;
}

struct GhzArgs {
    std::string alice = "on";
    double v_over_c = 1e4;
    std::uint64_t rounds = 100'000;
    std::uint64_t seed = 0;
};

json ghz_arm_json(const GhzArmStats& arm) {
    json j;
    j["alice_measures"] = arm.alice_measures;
    j["rounds"] = arm.rounds;
    j["equal_count"] = arm.equal_count;
    j["p_equal"] = arm.p_equal;
    j["stderr"] = arm.std_error;
    return j;
}

int cmd_ghz(const GhzArgs& args) {
    if (args.alice != "on" && args.alice != "off")
        throw ValidationError("ghz-signal: --alice must be on or off");
    const auto cfg = VCausalGhzConfig::standard(args.v_over_c, args.alice == "on");
    const GhzRunReport report = ghz_vcausal_run(cfg, args.rounds, args.seed);

    json out;
    out["config_echo"]["alice"] = args.alice;
    out["config_echo"]["v_over_c"] = args.v_over_c;
    out["config_echo"]["rounds"] = args.rounds;
    out["config_echo"]["seed"] = args.seed;
    out["config_echo"]["layout"] = "standard: Bob-Charlie 18 km, Alice 3000 km, lab privileged frame";
    out["arm"] = ghz_arm_json(report.arm);
    out["complement_arm"] = ghz_arm_json(report.complement);
    out["signaling_bits"] = report.signaling_bits;
    emit(out);
    return kExitOk;
}

struct DetectionArgs {
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 0;
};

int cmd_detection(const DetectionArgs& args) {
    const auto report = detection_loophole_run(true, args.rounds, args.seed);
    const Behavior full = detection_model_behavior();
    const auto membership = is_local(full, 1e-9);
    const BellFunctional extended = BellFunctional::chsh_s_with_bottom();

    json out;
    out["config_echo"]["rounds"] = args.rounds;
    out["config_echo"]["seed"] = args.seed;
    out["config_echo"]["model"] = "planned-answer local model: answer iff the input matches the plan";
    out["s_post_hat"] = report.s_post.value;
    out["s_post_stderr"] = report.s_post.std_error;
    out["coincidence_rate"] = report.coincidence_rate;
    out["detection_rate"] = json::array({report.detection_rate[0], report.detection_rate[1]});
    out["full_table_local"] = membership.local;
    out["s_full_extended"] = bell_value(full, extended);
    out["extended_local_bound"] = extended.local_bound();
    out["loopholes"]["locality"] = false;
    out["loopholes"]["detection"] = true;  // no-outcome rounds are discarded without fair sampling
    emit(out);
    return kExitOk;
}

struct DelayedArgs {
    double distance_km = 18.0;
    double delay_us = 100.0;
};

int cmd_delayed(const DelayedArgs& args) {
    if (args.distance_km <= 0.0) throw ValidationError("delayed-outcome: distance must be positive");
    const double d = args.distance_km * 1e3;
    const std::vector<SpacetimeEvent> events{
        {0, EventKind::input_chosen, 0.0, {0, 0, 0}},
        {0, EventKind::outcome_registered, 0.0, {0, 0, 0}},
        {1, EventKind::input_chosen, 0.0, {d, 0, 0}},
        {1, EventKind::outcome_registered, 0.0, {d, 0, 0}},
    };
    const auto report = delayed_outcome_viable(events, args.delay_us * 1e-6);

    json out;
    out["config_echo"]["distance_km"] = args.distance_km;
    out["config_echo"]["delay_us"] = args.delay_us;
    out["config_echo"]["layout"] = "simultaneous nominal events at both sites";
    out["viable"] = report.viable;
    out["required_speed_m_per_s"] = report.required_speed;
    json pairs = json::array();
    for (const auto& p : report.pairs) {
        json jp;
        jp["from_party"] = p.from_party;
        jp["to_party"] = p.to_party;
        jp["required_speed_m_per_s"] = p.required_speed;
        pairs.push_back(std::move(jp));
    }
    out["pairs"] = std::move(pairs);
    emit(out);
    return kExitOk;
}

struct BeforeBeforeArgs {
    double beta = 0.3;
    double distance_km = 18.0;
};

int cmd_before_before(const BeforeBeforeArgs& args) {
    if (args.distance_km <= 0.0) throw ValidationError("before-before: distance must be positive");
    if (!(args.beta > 0.0) || args.beta >= 1.0)
        throw ValidationError("before-before: beta must lie in (0, 1)");
    const Units u = Units::si();
    const double half = args.distance_km * 1e3 / 2.0;
    const SpacetimeEvent eA{0, EventKind::outcome_registered, 0.0, {-half, 0, 0}};
    const SpacetimeEvent eB{1, EventKind::outcome_registered, 0.0, {+half, 0, 0}};
    const Frame frameA{{-args.beta, 0, 0}};  // each observer recedes from the other
    const Frame frameB{{+args.beta, 0, 0}};

    json out;
    out["config_echo"]["beta"] = args.beta;
    out["config_echo"]["distance_km"] = args.distance_km;
    out["config_echo"]["layout"] = "simultaneous lab events, observers receding along the separation axis";
    out["before_before"] = before_before(eA, eB, frameA, frameB, u);
    out["t_A_in_frame_A"] = boost(eA, frameA, u).t;
    out["t_B_in_frame_A"] = boost(eB, frameA, u).t;
    out["t_A_in_frame_B"] = boost(eA, frameB, u).t;
    out["t_B_in_frame_B"] = boost(eB, frameB, u).t;
    emit(out);
    return kExitOk;
}

struct ScanArgs {
    std::string geometry = "geneva-18km";
    double sync_ns = 6.0;
    bool csv = false;
};

int cmd_speed_scan(const ScanArgs& args) {
    SpeedScanGeometry g = args.geometry == "geneva-18km"
                              ? io::geneva_18km_geometry()
                              : io::geometry_from_json(io::parse_json(io::read_text_file(args.geometry)));
    const auto result = scan_speed_bound(g, args.sync_ns * 1e-9);

    if (args.csv) {
        std::cout << io::speed_scan_to_csv(result);
        return kExitOk;
    }
    json out;
    out["config_echo"]["geometry"] = args.geometry;
    out["config_echo"]["sync_ns"] = args.sync_ns;
    out["config_echo"]["geometry_resolved"] = io::geometry_to_json(g);
    const json scan = io::speed_scan_to_json(result);
    out["frames"] = scan["frames"];
    out["overall_bound_over_c"] = scan["overall_bound_over_c"];
    out["exceeds_cap"] = scan["exceeds_cap"];
    emit(out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bell-lab: nonlocal correlation experiments at desk scale"};
    app.require_subcommand(1);

    ChshArgs chsh;
    auto* chsh_cmd = app.add_subcommand("chsh", "Run a CHSH-type experiment and report S");
    chsh_cmd->add_option("--source", chsh.source, "Correlation source: pr|quantum|local|file")
        ->capture_default_str();
    chsh_cmd->add_option("--rounds", chsh.rounds, "Number of rounds (N >= 1)")->capture_default_str();
    chsh_cmd->add_option("--seed", chsh.seed, "Master seed")->envname("BELL_LAB_SEED")->capture_default_str();
    chsh_cmd->add_option("--angles", chsh.angles, "Measurement angles a0,a1,b0,b1 in radians (quantum)")
        ->delimiter(',')
        ->expected(0, 4);
    chsh_cmd->add_option("--file", chsh.behavior_file, "Behavior JSON (source=file)");
    chsh_cmd->add_option("--tally-out", chsh.tally_out, "Write the tally CSV here");

    LocalBoundArgs lb;
    auto* lb_cmd = app.add_subcommand("localbound", "Maximum of a Bell functional over deterministic strategies");
    lb_cmd->add_option("--scenario", lb.scenario, "parties,inputs,outputs")->capture_default_str();
    lb_cmd->add_option("--functional", lb.functional_file, "Functional JSON (default: the CHSH-type S)");
    lb_cmd->add_option("--cap", lb.cap, "Enumeration cap")->capture_default_str();

    MembershipArgs mem;
    auto* mem_cmd = app.add_subcommand("membership", "Local-polytope membership with certificate");
    mem_cmd->add_option("--behavior", mem.behavior_file, "Behavior JSON file")->required();
    mem_cmd->add_option("--tol", mem.tol, "Feasibility tolerance")->capture_default_str();
    mem_cmd->add_option("--cap", mem.cap, "Enumeration cap")->capture_default_str();

    GhzArgs ghz;
    auto* ghz_cmd = app.add_subcommand("ghz-signal", "GHZ hidden-communication signaling experiment");
    ghz_cmd->add_option("--alice", ghz.alice, "Does Alice measure? on|off")->capture_default_str();
    ghz_cmd->add_option("--v", ghz.v_over_c, "Hidden influence speed in units of c")->capture_default_str();
    ghz_cmd->add_option("--rounds", ghz.rounds, "Number of rounds")->capture_default_str();
    ghz_cmd->add_option("--seed", ghz.seed, "Master seed")->envname("BELL_LAB_SEED")->capture_default_str();

    ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("speed-scan", "Earth-rotation hidden-influence speed bound");
    scan_cmd->add_option("--geometry", scan.geometry, "Geometry JSON file or 'geneva-18km'")
        ->capture_default_str();
    scan_cmd->add_option("--sync-ns", scan.sync_ns, "Timing uncertainty in nanoseconds")
        ->capture_default_str();
    scan_cmd->add_flag("--csv", scan.csv, "Emit the per-frame CSV instead of JSON");

    DetectionArgs det;
    auto* det_cmd = app.add_subcommand("detection", "Detection-loophole model: full vs post-selected statistics");
    det_cmd->add_option("--rounds", det.rounds, "Number of rounds")->capture_default_str();
    det_cmd->add_option("--seed", det.seed, "Master seed")->envname("BELL_LAB_SEED")->capture_default_str();

    DelayedArgs delayed;
    auto* delayed_cmd = app.add_subcommand("delayed-outcome", "Viability of delayed outcome registration");
    delayed_cmd->add_option("--distance-km", delayed.distance_km, "Site separation in km")
        ->capture_default_str();
    delayed_cmd->add_option("--delay-us", delayed.delay_us, "Outcome delay in microseconds")
        ->capture_default_str();

    BeforeBeforeArgs bb;
    auto* bb_cmd = app.add_subcommand("before-before", "Each moving observer measures first in its own frame");
    bb_cmd->add_option("--beta", bb.beta, "Observer speed in units of c")->capture_default_str();
    bb_cmd->add_option("--distance-km", bb.distance_km, "Event separation in km")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (chsh_cmd->parsed()) return cmd_chsh(chsh);
        if (lb_cmd->parsed()) return cmd_localbound(lb);
        if (mem_cmd->parsed()) return cmd_membership(mem);
        if (ghz_cmd->parsed()) return cmd_ghz(ghz);
        if (scan_cmd->parsed()) return cmd_speed_scan(scan);
        if (det_cmd->parsed()) return cmd_detection(det);
        if (delayed_cmd->parsed()) return cmd_delayed(delayed);
        if (bb_cmd->parsed()) return cmd_before_before(bb);
    } catch (const DeskScaleError& e) {
        return fail("desk_scale", e.what(), kExitDeskScale);
    } catch (const NumericError& e) {
        return fail("numeric", e.what(), kExitNumeric);
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), kExitValidation);
    } catch (const std::exception& e) {
        return fail("validation", e.what(), kExitValidation);
    }
    return kExitValidation;
}
