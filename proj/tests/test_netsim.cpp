#include <doctest.h>

#include <set>

#include "mecauth/netsim.hpp"

using namespace mecauth;
using Kind = ChannelAction::Kind;
using Direction = TranscriptEntry::Direction;

TEST_CASE("honest run ends Done/Done with equal keys on both curves") {
    for (const CurveParams* curve :
         {&CurveParams::toy17(), &CurveParams::secp256r1()}) {
        SimParties parties = make_parties(*curve, 1);
        AttackOutcome out = run_honest(parties, 1);
        CHECK(out.user.state == SessionState::Done);
        CHECK(out.server.state == SessionState::Done);
        CHECK(out.keys_equal);
        CHECK(!out.dishonest_success);
        CHECK(out.transcript.size() == 3);
    }
}

TEST_CASE("honest runs under different seeds give distinct keys") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 2);
    std::set<Bytes> keys;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        AttackOutcome out = run_honest(parties, seed);
        REQUIRE(out.keys_equal);
        keys.insert(Bytes(out.user_key.bytes.begin(), out.user_key.bytes.end()));
    }
    CHECK(keys.size() == 50);
}

TEST_CASE("identical (seed, script) gives identical outcomes") {
    SimParties parties = make_parties(CurveParams::toy17(), 3);
    AdversaryScript script = {{.kind = Kind::Deliver},
                              {.kind = Kind::Tamper, .byte_index = 5, .xor_mask = 0x10}};
    AttackOutcome a = run_script(parties, script, 9);
    AttackOutcome b = run_script(parties, script, 9);
    CHECK(a.user.state == b.user.state);
    CHECK(a.server.state == b.server.state);
    CHECK(a.user.errors == b.user.errors);
    REQUIRE(a.transcript.size() == b.transcript.size());
    for (size_t i = 0; i < a.transcript.size(); ++i)
        CHECK(a.transcript[i].frame == b.transcript[i].frame);
}

TEST_CASE("replay of M1 after the window is rejected as stale") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 4);
    AdversaryScript script = {{.kind = Kind::Drop},
                              {.kind = Kind::AdvanceClock, .seconds = parties.delta + 1},
                              {.kind = Kind::Replay, .transcript_index = 0}};
    AttackOutcome out = run_script(parties, script, 4);
    CHECK(out.server.state == SessionState::Failed);
    REQUIRE(!out.server.errors.empty());
    CHECK(out.server.errors[0] == "stale-timestamp");
    CHECK(!out.dishonest_success);
}

TEST_CASE("replay of M1 within the window hits the replay cache") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 5);
    AdversaryScript script = {{.kind = Kind::Deliver},
                              {.kind = Kind::Replay, .transcript_index = 0}};
    AttackOutcome out = run_script(parties, script, 5);
    bool flagged = false;
    for (const auto& err : out.server.errors)
        if (err == "replayed-message") flagged = true;
    CHECK(flagged);
    CHECK(!out.dishonest_success);
    // the original session still completes honestly
    CHECK(out.keys_equal);
}

TEST_CASE("tampering M2 fails the user with a token mismatch") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 6);
    AdversaryScript script = {{.kind = Kind::Deliver},
                              {.kind = Kind::Tamper, .byte_index = 7, .xor_mask = 0xff}};
    AttackOutcome out = run_script(parties, script, 6);
    CHECK(out.user.state == SessionState::Failed);
    REQUIRE(!out.user.errors.empty());
    CHECK(out.user.errors[0] == "token-mismatch");
    CHECK(!out.dishonest_success);
}

TEST_CASE("injected garbage never crashes the loop") {
    SimParties parties = make_parties(CurveParams::toy17(), 7);
    AdversaryScript script = {{.kind = Kind::Inject, .raw = Bytes{0xde, 0xad}},
                              {.kind = Kind::Inject,
                               .direction = Direction::ServerToUser,
                               .raw = Bytes(64, 0xaa)}};
    AttackOutcome out = run_script(parties, script, 7);
    CHECK(!out.dishonest_success);
}

TEST_CASE("impersonation from public knowledge always fails") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 8);
    for (auto target : {Role::User, Role::Server}) {
        auto outcomes = impersonation_attempt(parties, target, 8);
        CHECK(outcomes.size() == 3);
        for (const auto& out : outcomes) {
            CHECK(!out.dishonest_success);
            if (target == Role::Server) CHECK(out.user.state == SessionState::Failed);
            else CHECK(out.server.state == SessionState::Failed);
        }
    }
}

TEST_CASE("anonymity scan on honest sessions finds nothing") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 9);
    std::vector<AttackOutcome> sessions;
    SimParties later = parties;
    later.start_time += 10;  // strictly increasing timestamps between sessions
    sessions.push_back(run_honest(parties, 100));
    sessions.push_back(run_honest(later, 101));
    AnonymityReport report = anonymity_scan(parties, sessions);
    CHECK(report.sid_substring_hits == 0);
    CHECK(report.repeated_field_pairs == 0);
}

TEST_CASE("anonymity scan with identical T_u still sees fresh TK") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 10);
    std::vector<AttackOutcome> sessions{run_honest(parties, 200), run_honest(parties, 201)};
    // same start_time => same T_u/T_ms on both sessions; the timestamps and the
    // auth tokens bound only to them repeat, while TK and R_1 stay fresh
    AnonymityReport report = anonymity_scan(parties, sessions);
    CHECK(report.sid_substring_hits == 0);
    CHECK(report.repeated_field_pairs == 4);  // T_u, T_ms, Auth_ms, Auth_u
}

TEST_CASE("degenerate r1 reuse is flagged by the scan") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 11);
    // same seed => the user session draws the same r1 twice
    std::vector<AttackOutcome> sessions{run_honest(parties, 300), run_honest(parties, 300)};
    AnonymityReport report = anonymity_scan(parties, sessions);
    CHECK(report.repeated_field_pairs > 0);
}

TEST_CASE("key compromise report") {
    SimParties parties = make_parties(CurveParams::secp256r1(), 12);
    AttackOutcome honest = run_honest(parties, 12);
    REQUIRE(honest.keys_equal);

    SUBCASE("no leak, nothing computable") {
        CompromiseReport r = key_compromise_report(parties, {}, honest);
        CHECK(r.computable.empty());
        CHECK(!r.session_key_recovered);
    }
    SUBCASE("d_ms leak exposes R_1-ms, R_u-ms and SID") {
        CompromiseReport r =
            key_compromise_report(parties, {LeakedSecret::ServerPrivate}, honest);
        auto has = [&](const char* name) {
            return std::find(r.computable.begin(), r.computable.end(), name) !=
                   r.computable.end();
        };
        CHECK(has("R_1-ms"));
        CHECK(has("R_u-ms"));
        CHECK(has("SID_u"));
        CHECK(!r.session_key_recovered);
    }
    SUBCASE("d_u + d_ms leak rebuilds the session key") {
        CompromiseReport r = key_compromise_report(
            parties, {LeakedSecret::UserPrivate, LeakedSecret::ServerPrivate}, honest);
        CHECK(r.session_key_recovered);
        CHECK(!r.notes.empty());
    }
}

TEST_CASE("script JSON parsing") {
    AdversaryScript script = script_from_json(R"([
        {"action": "deliver"},
        {"action": "advance_clock", "seconds": 6},
        {"action": "replay", "index": 0, "to": "server"},
        {"action": "tamper", "byte": 7, "mask": 255},
        {"action": "inject", "to": "user", "hex": "deadbeef"},
        {"action": "drop"}
    ])");
    REQUIRE(script.size() == 6);
    CHECK(script[0].kind == Kind::Deliver);
    CHECK(script[1].seconds == 6);
    CHECK(script[2].transcript_index == 0);
    CHECK(script[3].xor_mask == 0xff);
    CHECK(script[4].raw == Bytes{0xde, 0xad, 0xbe, 0xef});
    CHECK(script[5].kind == Kind::Drop);
    CHECK_THROWS(script_from_json(R"([{"action": "teleport"}])"));
}

TEST_CASE("outcome JSON is well formed") {
    SimParties parties = make_parties(CurveParams::toy17(), 13);
    AttackOutcome out = run_honest(parties, 13);
    std::string json = outcome_to_json(out);
    CHECK(json.find("\"keys_equal\": true") != std::string::npos);
    CHECK(json.find("\"state\": \"Done\"") != std::string::npos);
}
