#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mecauth/codec.hpp"
#include "mecauth/costmodel.hpp"
#include "mecauth/handshake.hpp"
#include "mecauth/netsim.hpp"
#include "mecauth/registry.hpp"

namespace {

using namespace mecauth;

// Exit codes per failure class.
constexpr int kExitConfig = 2;
constexpr int kExitCrypto = 3;
constexpr int kExitProtocol = 4;
constexpr int kExitClaimViolation = 5;

struct Config {
    std::string curve = "secp256r1";
    uint64_t delta = kDefaultFreshnessWindow;
    std::string listen = "127.0.0.1:7800";
    std::string connect = "127.0.0.1:7800";
    std::string params_file = "mecauth-params.txt";
    std::string rc_state_file = "mecauth-rc.key";
    std::string directory_file = "mecauth-directory.txt";
    std::string credentials_prefix = "mecauth-cred-";
    std::optional<uint64_t> seed;
    bool json = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content, bool secret = false) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    out.close();
    if (secret) ::chmod(path.c_str(), 0600);
}

std::unique_ptr<RandomSource> make_rng(const Config& cfg) {
    if (cfg.seed) return std::make_unique<SeededRng>(*cfg.seed);
    return std::make_unique<SystemRng>();
}

Timestamp wall_clock() {
    return static_cast<Timestamp>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

std::string fingerprint(const SessionKey& key) {
    return to_hex(std::span(key.bytes).first(4));
}

// --- file-backed state ------------------------------------------------------

SystemParams load_params(const Config& cfg) {
    return deserialize_system_params(read_file(cfg.params_file));
}

Directory load_directory(const Config& cfg, const CurveParams& curve) {
    std::ifstream probe(cfg.directory_file);
    if (!probe) return Directory(curve);
    return Directory::deserialize(curve, read_file(cfg.directory_file));
}

Credentials load_credentials(const Config& cfg, const CurveParams& curve,
                             const std::string& id) {
    return deserialize_credentials(curve, read_file(cfg.credentials_prefix + id + ".txt"));
}

// --- commands ----------------------------------------------------------------

int cmd_setup(const Config& cfg) {
    const CurveParams& curve = CurveParams::by_name(cfg.curve);
    auto rng = make_rng(cfg);
    RegistrationCenter rc(curve, *rng);
    write_file(cfg.params_file, serialize_system_params(rc.params()));
    write_file(cfg.rc_state_file,
               "curve=" + curve.name() + "\ndrc=" +
                   to_hex(curve.encode_scalar(rc.private_key())) + "\n",
               /*secret=*/true);
    std::cout << "wrote " << cfg.params_file << " and " << cfg.rc_state_file << "\n";
    return 0;
}

RegistrationCenter load_rc(const Config& cfg, const CurveParams& curve) {
    std::istringstream in(read_file(cfg.rc_state_file));
    std::string line, drc_hex;
    while (std::getline(in, line))
        if (line.rfind("drc=", 0) == 0) drc_hex = line.substr(4);
    if (drc_hex.empty()) throw std::runtime_error("rc state file missing drc");
    return RegistrationCenter(curve, curve.decode_scalar(from_hex(drc_hex)));
}

int cmd_register(const Config& cfg, const std::string& role_str, const std::string& id) {
    SystemParams params = load_params(cfg);
    const CurveParams& curve = *params.curve;
    RegistrationCenter rc = load_rc(cfg, curve);
    Directory dir = load_directory(cfg, curve);
    // the issued-ID set is reconstructed from the directory via credentials files;
    // simplest durable duplicate check: a per-ID credentials file already exists
    std::string cred_path = cfg.credentials_prefix + id + ".txt";
    if (std::ifstream(cred_path)) {
        std::cerr << "error: identity already registered: " << id << "\n";
        return kExitConfig;
    }
    auto rng = make_rng(cfg);
    Credentials creds;
    try {
        creds = rc.register_party(id, role_from_name(role_str), *rng, dir);
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    write_file(cfg.directory_file, dir.serialize());
    write_file(cred_path, serialize_credentials(curve, creds), /*secret=*/true);
    std::cout << "registered " << role_str << " " << id << ", sid "
              << to_hex(curve.encode_scalar(creds.sid)) << "\n";
    return 0;
}

int cmd_demo(const Config& cfg, const std::string& user_id, const std::string& server_id) {
    SystemParams params = load_params(cfg);
    const CurveParams& curve = *params.curve;
    auto dir = std::make_shared<Directory>(load_directory(cfg, curve));
    Credentials user_creds = load_credentials(cfg, curve, user_id);
    Credentials server_creds = load_credentials(cfg, curve, server_id);
    DirectoryRecord server_record = dir->lookup(server_creds.sid);

    auto rng = make_rng(cfg);
    Timestamp now = cfg.seed ? Timestamp{1700000000} : wall_clock();
    UserSession user(params, user_creds, server_record, *rng, cfg.delta);
    ServerSession server(params, server_creds, dir, std::make_shared<ReplayCache>(),
                         cfg.delta);
    try {
        M1 m1 = std::get<M1>(decode_message(curve, encode_message(curve, user.start(now))));
        M2 m2 = std::get<M2>(
            decode_message(curve, encode_message(curve, server.on_m1(m1, now))));
        auto [m3_raw, user_key] = user.on_m2(m2, now);
        M3 m3 = std::get<M3>(decode_message(curve, encode_message(curve, m3_raw)));
        SessionKey server_key = server.on_m3(m3);
        bool match = user_key == server_key;
        if (cfg.json) {
            nlohmann::json j{{"keys_match", match},
                             {"user_fingerprint", fingerprint(user_key)},
                             {"server_fingerprint", fingerprint(server_key)}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << (match ? "keys match" : "KEY MISMATCH") << "\n"
                      << "user   " << fingerprint(user_key) << "\n"
                      << "server " << fingerprint(server_key) << "\n";
        }
        return match ? 0 : kExitProtocol;
    } catch (const ProtocolError& e) {
        std::cerr << "handshake failed: " << e.what() << "\n";
        return kExitProtocol;
    }
}

// --- raw TCP framing ---------------------------------------------------------

std::pair<std::string, uint16_t> split_addr(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw std::runtime_error("address must be host:port");
    return {addr.substr(0, colon), static_cast<uint16_t>(std::stoi(addr.substr(colon + 1)))};
}

Bytes read_frame(int fd) {
    auto read_exact = [&](uint8_t* buf, size_t n) {
        size_t got = 0;
        while (got < n) {
            ssize_t r = ::recv(fd, buf + got, n - got, 0);
            if (r <= 0) throw std::runtime_error("connection closed");
            got += static_cast<size_t>(r);
        }
    };
    uint8_t header[3];
    read_exact(header, 3);
    size_t len = static_cast<size_t>(header[1]) << 8 | header[2];
    Bytes frame(header, header + 3);
    frame.resize(3 + len);
    read_exact(frame.data() + 3, len);
    return frame;
}

void write_frame(int fd, const Bytes& frame) {
    size_t sent = 0;
    while (sent < frame.size()) {
        ssize_t r = ::send(fd, frame.data() + sent, frame.size() - sent, 0);
        if (r <= 0) throw std::runtime_error("send failed");
        sent += static_cast<size_t>(r);
    }
}

int cmd_serve(const Config& cfg, const std::string& server_id, int max_sessions) {
    SystemParams params = load_params(cfg);
    const CurveParams& curve = *params.curve;
    auto dir = std::make_shared<Directory>(load_directory(cfg, curve));
    Credentials creds = load_credentials(cfg, curve, server_id);
    auto cache = std::make_shared<ReplayCache>();

    auto [host, port] = split_addr(cfg.listen);
    int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw std::runtime_error("bad listen address");
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw std::runtime_error("bind failed");
    if (::listen(listener, 16) != 0) throw std::runtime_error("listen failed");
    std::cout << "listening on " << cfg.listen << "\n" << std::flush;

    int handled = 0;
    std::vector<std::thread> workers;
    while (max_sessions == 0 || handled < max_sessions) {
        int client = ::accept(listener, nullptr, nullptr);
        if (client < 0) break;
        ++handled;
        workers.emplace_back([&, client] {
            ServerSession session(params, creds, dir, cache, cfg.delta);
            try {
                Message m1 = decode_message(curve, read_frame(client));
                M2 m2 = session.on_m1(std::get<M1>(m1), wall_clock());
                write_frame(client, encode_message(curve, m2));
                Message m3 = decode_message(curve, read_frame(client));
                SessionKey key = session.on_m3(std::get<M3>(m3));
                std::cout << "session established, key " << fingerprint(key) << "\n"
                          << std::flush;
            } catch (const std::exception& e) {
                std::cout << "session failed: " << e.what() << "\n" << std::flush;
            }
            ::close(client);
        });
    }
    for (auto& w : workers) w.join();
    ::close(listener);
    return 0;
}

int cmd_connect(const Config& cfg, const std::string& user_id, const std::string& server_id) {
    SystemParams params = load_params(cfg);
    const CurveParams& curve = *params.curve;
    auto dir = std::make_shared<Directory>(load_directory(cfg, curve));
    Credentials creds = load_credentials(cfg, curve, user_id);
    Credentials server_creds = load_credentials(cfg, curve, server_id);
    DirectoryRecord server_record = dir->lookup(server_creds.sid);

    auto [host, port] = split_addr(cfg.connect);
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw std::runtime_error("bad connect address");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw std::runtime_error("connect failed");

    auto rng = make_rng(cfg);
    UserSession session(params, creds, server_record, *rng, cfg.delta);
    try {
        write_frame(fd, encode_message(curve, session.start(wall_clock())));
        Message m2 = decode_message(curve, read_frame(fd));
        auto [m3, key] = session.on_m2(std::get<M2>(m2), wall_clock());
        write_frame(fd, encode_message(curve, m3));
        ::close(fd);
        std::cout << "session established, key " << fingerprint(key) << "\n";
        return 0;
    } catch (const std::exception& e) {
        ::close(fd);
        std::cerr << "handshake failed: " << e.what() << "\n";
        return kExitProtocol;
    }
}

// --- attack suite -------------------------------------------------------------

struct ClaimResult {
    std::string name;
    bool pass;
    std::string detail;
};

int cmd_attack_suite(const Config& cfg) {
    const CurveParams& curve = CurveParams::by_name(cfg.curve);
    uint64_t seed = cfg.seed.value_or(42);
    SimParties parties = make_parties(curve, seed, cfg.delta);
    std::vector<ClaimResult> results;
    auto claim = [&](const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    };

    AttackOutcome honest = run_honest(parties, seed);
    claim("honest-run", honest.keys_equal, "both Done with equal keys");

    // record M1, advance past the window, replay it
    AdversaryScript stale = {{.kind = ChannelAction::Kind::Drop},
                             {.kind = ChannelAction::Kind::AdvanceClock,
                              .seconds = parties.delta + 1},
                             {.kind = ChannelAction::Kind::Replay, .transcript_index = 0}};
    AttackOutcome stale_out = run_script(parties, stale, seed + 1);
    claim("replay-after-window",
          stale_out.server.state == SessionState::Failed && !stale_out.dishonest_success,
          "stale M1 rejected");

    // replay within the window (duplicate M1 caught by the replay cache)
    AdversaryScript replay = {{.kind = ChannelAction::Kind::Deliver},
                              {.kind = ChannelAction::Kind::Replay, .transcript_index = 0}};
    AttackOutcome replay_out = run_script(parties, replay, seed + 2);
    bool replay_flagged = false;
    for (const auto& err : replay_out.server.errors)
        if (err == "replayed-message" || err == "bad-state") replay_flagged = true;
    claim("replay-within-window", replay_flagged && !replay_out.dishonest_success,
          "cache rejects duplicate (SID, T_u)");

    // MITM tamper on M2
    AdversaryScript tamper = {{.kind = ChannelAction::Kind::Deliver},
                              {.kind = ChannelAction::Kind::Tamper, .byte_index = 7,
                               .xor_mask = 0xff}};
    AttackOutcome tamper_out = run_script(parties, tamper, seed + 3);
    claim("mitm-tamper-m2", tamper_out.user.state == SessionState::Failed,
          "altered Auth_ms rejected");

    // impersonation with public knowledge only
    bool imp_ok = true;
    for (auto role : {Role::User, Role::Server})
        for (const auto& out : impersonation_attempt(parties, role, seed + 4))
            imp_ok = imp_ok && !out.dishonest_success;
    claim("impersonation", imp_ok, "all forgeries rejected");

    // anonymity over two sessions at distinct times
    SimParties later = parties;
    later.start_time += 2 * parties.delta;
    std::vector<AttackOutcome> sessions{run_honest(parties, seed + 5),
                                        run_honest(later, seed + 6)};
    AnonymityReport anon = anonymity_scan(parties, sessions);
    claim("anonymity", anon.sid_substring_hits == 0 && anon.repeated_field_pairs == 0,
          "no SID bytes and no repeated fields in transcripts");

    // key-compromise experiment
    CompromiseReport comp = key_compromise_report(
        parties, {LeakedSecret::UserPrivate, LeakedSecret::ServerPrivate}, honest);
    claim("key-compromise-report", comp.session_key_recovered,
          "leak {d_u, d_ms} demonstrably rebuilds SK (documented finding)");

    bool all_pass = true;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        if (cfg.json)
            j.push_back({{"claim", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        else
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " — " << r.detail << "\n";
    }
    if (cfg.json) std::cout << j.dump(2) << "\n";
    return all_pass ? 0 : kExitClaimViolation;
}

// --- cost report ---------------------------------------------------------------

int cmd_cost_report(const Config& cfg) {
    const CurveParams& curve = CurveParams::by_name(cfg.curve);
    OpTimings server_t = OpTimings::reference_server();
    OpTimings client_t = OpTimings::reference_client();
    ElementSizes sizes = reference_element_sizes();

    // |G_T| is never stated; back-solve it from the published Tsai total.
    SizeFormula tsai = reference_size_formulas()[0];
    sizes["G_T"] = solve_missing_size(tsai, sizes, 4608);

    nlohmann::json j;
    j["timing_ms"] = nlohmann::json::array();
    for (const auto& formula : reference_cost_formulas()) {
        const OpTimings& t = formula.side == Side::User ? client_t : server_t;
        TimeResult r = eval_time(formula, t);
        j["timing_ms"].push_back({{"scheme", scheme_name(formula.scheme)},
                                  {"side", formula.side == Side::User ? "user" : "server"},
                                  {"formula", formula.to_string()},
                                  {"value", r.display},
                                  {"provenance", r.reproducible ? "reproduced" : "unreproducible"}});
    }
    j["size_bits"] = nlohmann::json::array();
    for (const auto& formula : reference_size_formulas()) {
        unsigned bits = eval_size(formula, sizes);
        j["size_bits"].push_back({{"scheme", scheme_name(formula.scheme)},
                                  {"formula", formula.to_string()},
                                  {"bits", bits},
                                  {"provenance", "reproduced"}});
    }
    j["solved_G_T_bits"] = sizes["G_T"];
    j["implementation_bits"] = implementation_handshake_bits(curve);

    if (cfg.json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "Computational overhead (ms)\n";
    for (const auto& row : j["timing_ms"])
        std::cout << "  " << row["scheme"].get<std::string>() << "/"
                  << row["side"].get<std::string>() << "  " << row["formula"].get<std::string>()
                  << "  =  " << row["value"].get<std::string>() << "  ["
                  << row["provenance"].get<std::string>() << "]\n";
    std::cout << "Communication overhead (bits, published element sizes, |G_T| solved = "
              << sizes["G_T"] << ")\n";
    for (const auto& row : j["size_bits"])
        std::cout << "  " << row["scheme"].get<std::string>() << "  "
                  << row["formula"].get<std::string>() << "  =  " << row["bits"].get<unsigned>()
                  << "\n";
    std::cout << "Implementation wire bits per handshake (" << curve.name()
              << "): " << implementation_handshake_bits(curve) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ECC mutual-authentication protocol for mobile edge computing"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Config cfg;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--curve", cfg.curve, "curve name (secp256r1 | toy17)");
    app.add_option("--delta", cfg.delta, "freshness window in seconds");
    app.add_option("--listen", cfg.listen, "listen address host:port");
    app.add_option("--connect", cfg.connect, "connect address host:port");
    uint64_t seed_flag = 0;
    auto* seed_opt = app.add_option("--seed", seed_flag, "deterministic rng seed (tests)");
    app.add_flag("--json", cfg.json, "JSON output");
    app.add_option("--params-file", cfg.params_file, "system parameters file");
    app.add_option("--rc-state-file", cfg.rc_state_file, "RC private state file");
    app.add_option("--directory-file", cfg.directory_file, "public directory file");
    app.add_option("--credentials-prefix", cfg.credentials_prefix, "credentials file prefix");

    auto* setup = app.add_subcommand("setup", "run the RC key ceremony");
    std::string role_arg, id_arg, user_arg = "u1", server_arg = "ms1";
    int max_sessions = 0;
    auto* reg = app.add_subcommand("register", "register a user or server");
    reg->add_option("role", role_arg, "user | server")->required();
    reg->add_option("id", id_arg, "identity string")->required();
    auto* demo = app.add_subcommand("demo", "in-process honest handshake");
    demo->add_option("--user", user_arg, "user identity");
    demo->add_option("--server", server_arg, "server identity");
    auto* serve = app.add_subcommand("serve", "run the MEC server daemon");
    serve->add_option("id", id_arg, "server identity")->required();
    serve->add_option("--max-sessions", max_sessions, "exit after N sessions (0 = forever)");
    auto* conn = app.add_subcommand("connect", "authenticate against a daemon");
    conn->add_option("id", id_arg, "user identity")->required();
    conn->add_option("--server", server_arg, "server identity for directory lookup");
    auto* attack = app.add_subcommand("attack-suite", "run every adversarial scenario");
    auto* cost = app.add_subcommand("cost-report", "emit the overhead comparison tables");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) cfg.seed = seed_flag;

    try {
        if (!config_path.empty()) {
            std::istringstream in(read_file(config_path));
            std::string line;
            std::map<std::string, std::string> kv;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                kv[line.substr(0, eq)] = line.substr(eq + 1);
            }
            // flags win over config values
            if (kv.count("curve") && cfg.curve == "secp256r1") cfg.curve = kv["curve"];
            if (kv.count("delta") && cfg.delta == kDefaultFreshnessWindow)
                cfg.delta = std::stoull(kv["delta"]);
            if (kv.count("listen") && cfg.listen == "127.0.0.1:7800") cfg.listen = kv["listen"];
            if (kv.count("connect") && cfg.connect == "127.0.0.1:7800")
                cfg.connect = kv["connect"];
        }
        if (cfg.delta == 0) {
            std::cerr << "error: delta must be positive\n";
            return kExitConfig;
        }

        if (*setup) return cmd_setup(cfg);
        if (*reg) return cmd_register(cfg, role_arg, id_arg);
        if (*demo) return cmd_demo(cfg, user_arg, server_arg);
        if (*serve) return cmd_serve(cfg, id_arg, max_sessions);
        if (*conn) return cmd_connect(cfg, id_arg, server_arg);
        if (*attack) return cmd_attack_suite(cfg);
        if (*cost) return cmd_cost_report(cfg);
    } catch (const ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCrypto;
    }
    return kExitConfig;
}
