#include "mecauth/handshake.hpp"

#include "mecauth/hash.hpp"

namespace mecauth {

const char* session_state_name(SessionState state) {
    switch (state) {
        case SessionState::Init: return "Init";
        case SessionState::AwaitM1: return "AwaitM1";
        case SessionState::AwaitM2: return "AwaitM2";
        case SessionState::AwaitM3: return "AwaitM3";
        case SessionState::Done: return "Done";
        case SessionState::Failed: return "Failed";
    }
    return "unknown";
}

bool validate_timestamp(Timestamp t, Timestamp now, uint64_t delta) {
    uint64_t diff = t > now ? t - now : now - t;
    return diff <= delta;
}

namespace {

// Auth token: H2(sid || times...) XOR H2(sid || dh-point).
Digest32 auth_token(const CurveParams& curve, const mpz_class& sid_u,
                    const mpz_class* sid_ms, Timestamp t_u, Timestamp t_ms,
                    const CurvePoint& dh_point, OpCounter& counter) {
    Bytes left = curve.encode_scalar(sid_u);
    if (sid_ms) append(left, curve.encode_scalar(*sid_ms));
    append(left, pad32(t_u));
    append(left, pad32(t_ms));
    Bytes right = curve.encode_scalar(sid_u);
    append(right, curve.encode_point(dh_point));
    counter.h2_plain += 2;
    return xor32(h2(left), h2(right));
}

}  // namespace

SessionKey derive_sk(const CurveParams& curve, const mpz_class& sid_u, const CurvePoint& pt1,
                     const CurvePoint& pt2, const CurvePoint& pt3, Timestamp t_u,
                     Timestamp t_ms) {
    Bytes buf{'K', 'D', 'F'};
    append(buf, curve.encode_scalar(sid_u));
    append(buf, curve.encode_point(pt1));
    append(buf, curve.encode_point(pt2));
    append(buf, curve.encode_point(pt3));
    append(buf, pad32(t_u));
    append(buf, pad32(t_ms));
    return SessionKey{h2(buf)};
}

bool ReplayCache::insert_if_absent(const Bytes& sid_encoding, Timestamp t_u, Timestamp now,
                                   uint64_t delta) {
    std::lock_guard lock(mutex_);
    Timestamp horizon = now > delta ? now - delta : 0;
    std::erase_if(seen_, [&](const auto& entry) { return entry.second < horizon; });
    return seen_.emplace(sid_encoding, t_u).second;
}

UserSession::UserSession(const SystemParams& params, Credentials creds,
                         DirectoryRecord server_record, RandomSource& rng, uint64_t delta)
    : params_(&params), creds_(std::move(creds)), server_record_(std::move(server_record)),
      rng_(&rng), delta_(delta) {}

M1 UserSession::start(Timestamp now) {
    if (state_ != SessionState::Init)
        throw ProtocolError(ErrorKind::BadState, "start() outside Init state");
    const CurveParams& curve = *params_->curve;
    t_u_ = now;
    r1_ = random_scalar(curve, *rng_);
    r1_point_ = curve.mul(r1_, curve.generator());
    r1_ms_ = curve.mul(r1_, server_record_.public_key);
    counter_.scalar_muls += 2;
    counter_.h2_mask += 1;
    Digest32 token =
        xor32(xor32(curve.scalar32(creds_.sid), pad32(t_u_)), mask32(curve, r1_ms_));
    state_ = SessionState::AwaitM2;
    return M1{token, t_u_, r1_point_};
}

std::pair<M3, SessionKey> UserSession::on_m2(const M2& m2, Timestamp now) {
    if (state_ != SessionState::AwaitM2)
        throw ProtocolError(ErrorKind::BadState, "on_m2() outside AwaitM2 state");
    const CurveParams& curve = *params_->curve;
    try {
        if (!validate_timestamp(m2.server_time, now, delta_))
            throw ProtocolError(ErrorKind::StaleTimestamp, "server timestamp outside window");
        CurvePoint r_u_ms_star = curve.mul(creds_.secret_key, server_record_.public_key);
        counter_.scalar_muls += 1;
        Digest32 expected = auth_token(curve, creds_.sid, nullptr, t_u_, m2.server_time,
                                       r_u_ms_star, counter_);
        if (expected != m2.server_auth)
            throw ProtocolError(ErrorKind::TokenMismatch, "server auth token mismatch");
        CurvePoint r_ms_u = curve.mul(creds_.private_key, server_record_.secret_pub);
        counter_.scalar_muls += 1;
        Digest32 user_auth = auth_token(curve, creds_.sid, &server_record_.sid, t_u_,
                                        m2.server_time, r_ms_u, counter_);
        counter_.h2_kdf += 1;
        key_ = derive_sk(curve, creds_.sid, r1_ms_, r_u_ms_star, r_ms_u, t_u_, m2.server_time);
        state_ = SessionState::Done;
        return {M3{user_auth}, key_};
    } catch (...) {
        state_ = SessionState::Failed;
        throw;
    }
}

const SessionKey& UserSession::session_key() const {
    if (state_ != SessionState::Done)
        throw ProtocolError(ErrorKind::BadState, "no session key before Done");
    return key_;
}

ServerSession::ServerSession(const SystemParams& params, Credentials creds,
                             std::shared_ptr<const Directory> directory,
                             std::shared_ptr<ReplayCache> replay_cache, uint64_t delta)
    : params_(&params), creds_(std::move(creds)), directory_(std::move(directory)),
      replay_cache_(std::move(replay_cache)), delta_(delta) {}

M2 ServerSession::on_m1(const M1& m1, Timestamp now) {
    if (state_ != SessionState::AwaitM1)
        throw ProtocolError(ErrorKind::BadState, "on_m1() outside AwaitM1 state");
    const CurveParams& curve = *params_->curve;
    try {
        if (!validate_timestamp(m1.user_time, now, delta_))
            throw ProtocolError(ErrorKind::StaleTimestamp, "user timestamp outside window");
        r1_ms_star_ = curve.mul(creds_.private_key, m1.challenge);
        counter_.scalar_muls += 1;
        counter_.h2_mask += 1;
        Digest32 lane =
            xor32(xor32(m1.token, pad32(m1.user_time)), mask32(curve, r1_ms_star_));
        try {
            sid_u_ = curve.unscalar32(lane);
        } catch (const std::invalid_argument&) {
            throw ProtocolError(ErrorKind::ScalarOutOfRange,
                                "extracted pseudo-identity out of scalar range");
        }
        Bytes sid_enc = curve.encode_scalar(sid_u_);
        if (replay_cache_ &&
            !replay_cache_->insert_if_absent(sid_enc, m1.user_time, now, delta_))
            throw ProtocolError(ErrorKind::ReplayedMessage, "M1 replayed within window");
        const DirectoryRecord& rec = directory_->lookup(sid_u_);
        user_pub_ = rec.public_key;
        t_u_ = m1.user_time;
        t_ms_ = now;
        r_u_ms_ = curve.mul(creds_.private_key, rec.secret_pub);
        counter_.scalar_muls += 1;
        Digest32 auth =
            auth_token(curve, sid_u_, nullptr, t_u_, t_ms_, r_u_ms_, counter_);
        state_ = SessionState::AwaitM3;
        return M2{t_ms_, auth};
    } catch (...) {
        state_ = SessionState::Failed;
        throw;
    }
}

SessionKey ServerSession::on_m3(const M3& m3) {
    if (state_ != SessionState::AwaitM3)
        throw ProtocolError(ErrorKind::BadState, "on_m3() outside AwaitM3 state");
    const CurveParams& curve = *params_->curve;
    try {
        CurvePoint r_ms_u_star = curve.mul(creds_.secret_key, user_pub_);
        counter_.scalar_muls += 1;
        Digest32 expected = auth_token(curve, sid_u_, &creds_.sid, t_u_, t_ms_,
                                       r_ms_u_star, counter_);
        if (expected != m3.user_auth)
            throw ProtocolError(ErrorKind::TokenMismatch, "user auth token mismatch");
        counter_.h2_kdf += 1;
        key_ = derive_sk(curve, sid_u_, r1_ms_star_, r_u_ms_, r_ms_u_star, t_u_, t_ms_);
        state_ = SessionState::Done;
        return key_;
    } catch (...) {
        state_ = SessionState::Failed;
        throw;
    }
}

const SessionKey& ServerSession::session_key() const {
    if (state_ != SessionState::Done)
        throw ProtocolError(ErrorKind::BadState, "no session key before Done");
    return key_;
}

}  // namespace mecauth
