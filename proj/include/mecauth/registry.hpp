#pragma once

#include <map>
#include <set>
#include <string>

#include "mecauth/curve.hpp"
#include "mecauth/errors.hpp"
#include "mecauth/rng.hpp"

namespace mecauth {

enum class Role { User, Server };

const char* role_name(Role role);
Role role_from_name(const std::string& name);

// Public parameters announced after setup: curve plus the RC public key.
struct SystemParams {
    const CurveParams* curve = nullptr;
    CurvePoint rc_public;
};

// Private material handed to a registrant over the secure channel.
struct Credentials {
    Role role = Role::User;
    mpz_class sid;          // pseudo-identity
    mpz_class private_key;  // d
    mpz_class secret_key;   // r
};

// Published triple; carries no private material.
struct DirectoryRecord {
    Role role = Role::User;
    mpz_class sid;
    CurvePoint public_key;  // P = d*G
    CurvePoint secret_pub;  // R = r*G
};

class Directory {
  public:
    explicit Directory(const CurveParams& curve) : curve_(&curve) {}

    void insert(const DirectoryRecord& record);
    const DirectoryRecord& lookup(const mpz_class& sid) const;
    bool contains(const mpz_class& sid) const;
    size_t size() const { return records_.size(); }

    std::string serialize() const;
    static Directory deserialize(const CurveParams& curve, const std::string& text);

    const CurveParams& curve() const { return *curve_; }

  private:
    const CurveParams* curve_;
    std::map<Bytes, DirectoryRecord> records_;  // keyed by canonical SID encoding
};

class RegistrationCenter {
  public:
    // Phase I: fresh RC key pair over the given curve.
    RegistrationCenter(const CurveParams& curve, RandomSource& rng);

    // Rehydrate from persisted private key (CLI state file).
    RegistrationCenter(const CurveParams& curve, const mpz_class& private_key);

    // Phases II/III: one registration per identity per lifetime.
    // Returns the registrant's credentials and publishes the record into dir.
    Credentials register_party(const std::string& id, Role role, RandomSource& rng,
                               Directory& dir);

    const SystemParams& params() const { return params_; }
    const mpz_class& private_key() const { return private_key_; }

  private:
    const CurveParams* curve_;
    mpz_class private_key_;  // d_RC; never serialized into public structures
    SystemParams params_;
    std::set<std::string> issued_;
};

// Directory/SystemParams file round-trips used by the CLI.
std::string serialize_system_params(const SystemParams& params);
SystemParams deserialize_system_params(const std::string& text);

std::string serialize_credentials(const CurveParams& curve, const Credentials& creds);
Credentials deserialize_credentials(const CurveParams& curve, const std::string& text);

}  // namespace mecauth
