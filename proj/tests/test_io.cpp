#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bell_lab/io.hpp"
#include "bell_lab/nonlocal_box.hpp"
#include "bell_lab/quantum.hpp"
#include "bell_lab/rng.hpp"

using namespace bell;
using bell::io::json;

TEST_CASE("floats are serialized with 17 significant digits") {
    REQUIRE(io::format_double_17(0.1) == "0.10000000000000001");
    REQUIRE(io::format_double_17(1.0 / 3.0) == "0.33333333333333331");
    REQUIRE(io::format_double_17(0.5) == "0.5");

    SECTION("parse(dump) is the identity on doubles") {
        RoundRng rng(64, 0);
        for (int trial = 0; trial < 1000; ++trial) {
            const double v = (rng.next_unit() - 0.5) * std::pow(10.0, rng.next_below(20) - 10);
            const json j = io::parse_json(io::dump_json_17(json(v)));
            REQUIRE(j.get<double>() == v);
        }
    }
    SECTION("nested structures keep the format") {
        json j;
        j["a"] = json::array({0.1, json::array({1.0 / 3.0})});
        j["b"] = 3;
        j["c"] = "text";
        REQUIRE(io::dump_json_17(j) == R"({"a":[0.10000000000000001,[0.33333333333333331]],"b":3,"c":"text"})");
    }
}

TEST_CASE("behavior json round trip") {
    const Behavior pr = pr_behavior();
    const json j = io::behavior_to_json(pr);
    REQUIRE(j["scenario"]["parties"] == 2);
    REQUIRE(j["scenario"]["inputs"] == json::array({2, 2}));
    REQUIRE(j["scenario"]["bottom"] == json::array({false, false}));
    // table indexed [x][y][a][b]
    REQUIRE(j["table"][0][0][0][0].get<double>() == 0.5);
    REQUIRE(j["table"][1][1][0][0].get<double>() == 0.0);
    REQUIRE(j["table"][1][1][0][1].get<double>() == 0.5);

    const Behavior back = io::behavior_from_json(io::parse_json(io::dump_json_17(j)));
    REQUIRE(back.table() == pr.table());
    REQUIRE(back.scenario() == pr.scenario());
}

TEST_CASE("three-party behavior json nests six levels") {
    const Scenario s(3, {2, 1, 2}, {2, 2, 2});
    Behavior b = Behavior::uniform(s);
    const json j = io::behavior_to_json(b);
    REQUIRE(j["table"].size() == 2);           // x0
    REQUIRE(j["table"][0].size() == 1);        // x1
    REQUIRE(j["table"][0][0].size() == 2);     // x2
    REQUIRE(j["table"][0][0][0].size() == 2);  // a0
    const Behavior back = io::behavior_from_json(j);
    REQUIRE(back.table() == b.table());
}

TEST_CASE("behavior json validation") {
    SECTION("malformed text") {
        REQUIRE_THROWS_AS(io::parse_json("{not json"), ValidationError);
    }
    SECTION("missing keys") {
        REQUIRE_THROWS_AS(io::behavior_from_json(io::parse_json(R"({"table":[]})")), ValidationError);
    }
    SECTION("wrong nesting depth or width") {
        json j = io::behavior_to_json(pr_behavior());
        j["table"][0][0][0] = json::array({0.5});  // too narrow
        REQUIRE_THROWS_AS(io::behavior_from_json(j), ValidationError);
        j = io::behavior_to_json(pr_behavior());
        j["table"][0][0][0][0] = "oops";
        REQUIRE_THROWS_AS(io::behavior_from_json(j), ValidationError);
    }
}

TEST_CASE("functional json carries the local bound") {
    const json j = io::functional_to_json(BellFunctional::chsh_s());
    REQUIRE(j["local_bound"].get<double>() == 3.0);
    const BellFunctional back = io::functional_from_json(j);
    REQUIRE(back.coefficients() == BellFunctional::chsh_s().coefficients());
}

TEST_CASE("quantum setup json") {
    SECTION("named states") {
        const QuantumSetup q = io::quantum_setup_from_json(
            io::parse_json(R"({"state":"ghz","settings":[[0],[0],[0]]})"));
        REQUIRE(q.state.amp.size() == 8);
        REQUIRE(q.scenario().n_parties == 3);
    }
    SECTION("amplitude lists and round trip") {
        const QuantumSetup q = tsirelson_setup();
        const QuantumSetup back = io::quantum_setup_from_json(io::quantum_setup_to_json(q));
        REQUIRE(back.state.amp == q.state.amp);
        REQUIRE(back.settings[0][1].theta == q.settings[0][1].theta);
    }
    SECTION("unknown state names are rejected") {
        REQUIRE_THROWS_AS(
            io::quantum_setup_from_json(io::parse_json(R"({"state":"w","settings":[[0],[0]]})")),
            ValidationError);
    }
}

TEST_CASE("tally csv round trip") {
    const Scenario s = Scenario::chsh();
    TallyTable t(s, 5);
    t.add(s.joint_input_index({0, 1}), s.joint_output_index({1, 0}), 42);
    t.add(s.joint_input_index({1, 1}), s.joint_output_index({0, 0}), 7);

    const std::string csv = io::tally_to_csv(t);
    REQUIRE(csv.rfind("x,y,a,b,count\n", 0) == 0);
    REQUIRE(csv.find("0,1,1,0,42") != std::string::npos);

    const TallyTable back = io::tally_from_csv(s, csv, 5);
    REQUIRE(back.counts == t.counts);

    SECTION("row arity is checked") {
        REQUIRE_THROWS_AS(io::tally_from_csv(s, "x,y,a,b,count\n0,1,1,42\n"), ValidationError);
    }
    SECTION("garbage rows are a validation error") {
        REQUIRE_THROWS_AS(io::tally_from_csv(s, "x,y,a,b,count\n0,one,1,0,42\n"), ValidationError);
        REQUIRE_THROWS_AS(io::tally_from_csv(s, "x,y,a,b,count\n0,7,1,0,42\n"), ValidationError);
    }
    SECTION("comment lines are skipped") {
        const TallyTable commented = io::tally_from_csv(s, "x,y,a,b,count\n# a note\n0,0,0,0,3\n");
        REQUIRE(commented.count(0, 0) == 3);
    }
}

TEST_CASE("round log csv") {
    PrBox box(3);
    box.sample(0, 1);
    box.sample(1, 1);
    const std::string csv = io::round_log_to_csv(box);
    REQUIRE(csv.rfind("round,x,y,a,b,seed\n", 0) == 0);
    REQUIRE(csv.find("0,0,1,") != std::string::npos);
    REQUIRE(csv.find(",3\n") != std::string::npos);
}

TEST_CASE("speed scan serialization") {
    SpeedScanGeometry g = io::geneva_18km_geometry();
    const auto r = scan_speed_bound(g, 6e-9);
    const std::string csv = io::speed_scan_to_csv(r);
    REQUIRE(csv.rfind("frame_azimuth_deg,frame_beta,v_min_over_c\n", 0) == 0);
    REQUIRE(csv.find("# overall_bound_over_c=") != std::string::npos);
    const json j = io::speed_scan_to_json(r);
    REQUIRE(j["frames"].size() == r.rows.size());
    REQUIRE(j["overall_bound_over_c"].get<double>() == r.overall_bound_over_c);
}

TEST_CASE("geometry json") {
    SECTION("planar sites") {
        const auto g = io::geometry_from_json(
            io::parse_json(R"({"sites":[[0,0,0],[18000,0,0]],"frame_beta":0.001})"));
        REQUIRE(g.frame_beta == 0.001);
        REQUIRE(norm(sub(g.sites[1], g.sites[0])) == 18'000.0);
    }
    SECTION("lat/lon sites") {
        const auto g = io::geometry_from_json(io::parse_json(
            R"({"sites":[{"lat_deg":46.2,"lon_deg":6.1},{"lat_deg":46.2,"lon_deg":6.33}]})"));
        const double d = norm(sub(g.sites[1], g.sites[0]));
        REQUIRE(d > 10'000.0);  // roughly 18 km at Geneva's latitude
        REQUIRE(d < 25'000.0);
    }
    SECTION("bad site specs are rejected") {
        REQUIRE_THROWS_AS(io::geometry_from_json(io::parse_json(R"({"sites":[[0,0,0]]})")),
                          ValidationError);
        REQUIRE_THROWS_AS(io::geometry_from_json(io::parse_json(R"({"sites":[[0,0],[1,1]]})")),
                          ValidationError);
    }
}
