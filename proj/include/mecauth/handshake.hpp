#pragma once

#include <memory>
#include <mutex>
#include <set>
#include <utility>

#include "mecauth/errors.hpp"
#include "mecauth/messages.hpp"
#include "mecauth/opcount.hpp"
#include "mecauth/registry.hpp"

namespace mecauth {

inline constexpr uint64_t kDefaultFreshnessWindow = 5;  // seconds

enum class SessionState { Init, AwaitM1, AwaitM2, AwaitM3, Done, Failed };

const char* session_state_name(SessionState state);

struct SessionKey {
    Digest32 bytes;
    bool operator==(const SessionKey&) const = default;
};

// Accept iff |now - t| <= delta (boundary inclusive).
bool validate_timestamp(Timestamp t, Timestamp now, uint64_t delta);

// Session key over the Diffie-Hellman triple plus session context.
SessionKey derive_sk(const CurveParams& curve, const mpz_class& sid_u, const CurvePoint& pt1,
                     const CurvePoint& pt2, const CurvePoint& pt3, Timestamp t_u,
                     Timestamp t_ms);

// Timestamps alone admit replays inside the freshness window; the cache
// remembers (SID, T_u) pairs until they age out.
class ReplayCache {
  public:
    // Returns false when the pair was already present.
    bool insert_if_absent(const Bytes& sid_encoding, Timestamp t_u, Timestamp now,
                          uint64_t delta);

  private:
    std::mutex mutex_;
    std::set<std::pair<Bytes, Timestamp>> seen_;
};

class UserSession {
  public:
    UserSession(const SystemParams& params, Credentials creds, DirectoryRecord server_record,
                RandomSource& rng, uint64_t delta = kDefaultFreshnessWindow);

    M1 start(Timestamp now);
    std::pair<M3, SessionKey> on_m2(const M2& m2, Timestamp now);

    SessionState state() const { return state_; }
    const SessionKey& session_key() const;
    const OpCounter& counter() const { return counter_; }

  private:
    const SystemParams* params_;
    Credentials creds_;
    DirectoryRecord server_record_;
    RandomSource* rng_;
    uint64_t delta_;

    mpz_class r1_;
    Timestamp t_u_ = 0;
    CurvePoint r1_point_;       // R_1
    CurvePoint r1_ms_;          // R_{1-ms}
    SessionState state_ = SessionState::Init;
    SessionKey key_{};
    OpCounter counter_;
};

class ServerSession {
  public:
    ServerSession(const SystemParams& params, Credentials creds,
                  std::shared_ptr<const Directory> directory,
                  std::shared_ptr<ReplayCache> replay_cache,
                  uint64_t delta = kDefaultFreshnessWindow);

    M2 on_m1(const M1& m1, Timestamp now);
    SessionKey on_m3(const M3& m3);

    SessionState state() const { return state_; }
    const SessionKey& session_key() const;
    const mpz_class& extracted_sid() const { return sid_u_; }
    const OpCounter& counter() const { return counter_; }

  private:
    const SystemParams* params_;
    Credentials creds_;
    std::shared_ptr<const Directory> directory_;
    std::shared_ptr<ReplayCache> replay_cache_;
    uint64_t delta_;

    mpz_class sid_u_;
    Timestamp t_u_ = 0;
    Timestamp t_ms_ = 0;
    CurvePoint r1_ms_star_;  // R*_{1-ms}
    CurvePoint r_u_ms_;      // R_{u-ms}
    CurvePoint user_pub_;    // P_u
    SessionState state_ = SessionState::AwaitM1;
    SessionKey key_{};
    OpCounter counter_;
};

}  // namespace mecauth
