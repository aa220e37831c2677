#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "mecauth/codec.hpp"
#include "mecauth/handshake.hpp"

namespace mecauth {

// One frame observed on the channel.
struct TranscriptEntry {
    enum class Direction { UserToServer, ServerToUser };
    Direction direction;
    Timestamp sent_at;
    Bytes frame;
};

// Channel actions available to the adversary. Deliver/Drop/Tamper consume the
// frame currently in flight; Replay/Inject put a frame on the wire towards the
// given receiver; AdvanceClock moves virtual time.
struct ChannelAction {
    enum class Kind { Deliver, Drop, Replay, Tamper, Inject, AdvanceClock };
    Kind kind = Kind::Deliver;
    size_t transcript_index = 0;             // Replay
    TranscriptEntry::Direction direction =
        TranscriptEntry::Direction::UserToServer;  // Replay/Inject target
    size_t byte_index = 0;                   // Tamper
    uint8_t xor_mask = 0;                    // Tamper
    Bytes raw;                               // Inject
    uint64_t seconds = 0;                    // AdvanceClock
};

using AdversaryScript = std::vector<ChannelAction>;

struct PartyOutcome {
    SessionState state = SessionState::Init;
    std::vector<std::string> errors;  // error taxonomy observed, in order
};

struct AttackOutcome {
    PartyOutcome user;
    PartyOutcome server;
    bool keys_equal = false;        // both Done and byte-identical keys
    bool dishonest_success = false; // a party reached Done although its peer's
                                    // traffic was dropped, forged, or altered
    std::vector<TranscriptEntry> transcript;
    OpCounter user_counter;
    OpCounter server_counter;
    SessionKey user_key{};    // valid only when user state is Done
    SessionKey server_key{};  // valid only when server state is Done
};

// Registered pair of parties plus the public material an adversary also sees.
struct SimParties {
    SystemParams params;
    Credentials user_creds;
    Credentials server_creds;
    DirectoryRecord server_record;
    std::shared_ptr<const Directory> directory;
    uint64_t delta = kDefaultFreshnessWindow;
    Timestamp start_time = 1700000000;
};

// Convenience: set up an RC, register one user and one server.
SimParties make_parties(const CurveParams& curve, uint64_t seed,
                        uint64_t delta = kDefaultFreshnessWindow);

// Fig.-4 flow with an empty script: every frame delivered untouched.
AttackOutcome run_honest(const SimParties& parties, uint64_t seed);

// Scripted Dolev-Yao run. Actions are applied in order; remaining in-flight
// frames after the script is exhausted are delivered untouched.
AttackOutcome run_script(const SimParties& parties, const AdversaryScript& script,
                         uint64_t seed);

// Best-effort forgery from public knowledge only (directory, system params,
// recorded transcripts): replayed, spliced, or random tokens. Returns the
// honest peer's outcome; it must end Failed for every strategy.
std::vector<AttackOutcome> impersonation_attempt(const SimParties& parties, Role target,
                                                 uint64_t seed);

struct AnonymityReport {
    size_t sid_substring_hits = 0;   // canonical or padded SID bytes in any frame
    size_t repeated_field_pairs = 0; // identical wire field across two sessions
    std::vector<std::string> notes;
};

// Scans >= 2 sessions of one user for identity leakage and linkable fields.
AnonymityReport anonymity_scan(const SimParties& parties,
                               const std::vector<AttackOutcome>& sessions);

struct CompromiseReport {
    std::vector<std::string> leaked;      // which of d_u, d_ms, r_u, r_ms, r_1
    std::vector<std::string> computable;  // R_1-ms, R_u-ms, R_ms-u, SID_u, SK
    bool session_key_recovered = false;
    std::vector<std::string> notes;
};

enum class LeakedSecret { UserPrivate, ServerPrivate, UserSecret, ServerSecret, Ephemeral };

// Recomputes, from the leak plus public data, whichever session quantities
// become reachable; every claim in the report is backed by an actual
// recomputation checked against the honest run.
CompromiseReport key_compromise_report(const SimParties& parties,
                                       const std::vector<LeakedSecret>& leaked,
                                       const AttackOutcome& honest_run);

// JSON renderings for scenario files and reports.
std::string outcome_to_json(const AttackOutcome& outcome);
std::string anonymity_report_to_json(const AnonymityReport& report);
std::string compromise_report_to_json(const CompromiseReport& report);
AdversaryScript script_from_json(const std::string& json_text);

}  // namespace mecauth
