#include "mecauth/registry.hpp"

#include <sstream>

#include "mecauth/hash.hpp"

namespace mecauth {

const char* role_name(Role role) {
    return role == Role::User ? "user" : "server";
}

Role role_from_name(const std::string& name) {
    if (name == "user") return Role::User;
    if (name == "server" || name == "ms") return Role::Server;
    throw std::invalid_argument("unknown role: " + name);
}

void Directory::insert(const DirectoryRecord& record) {
    records_[curve_->encode_scalar(record.sid)] = record;
}

const DirectoryRecord& Directory::lookup(const mpz_class& sid) const {
    auto it = records_.find(curve_->encode_scalar(sid));
    if (it == records_.end())
        throw ProtocolError(ErrorKind::UnknownSid, "no directory record for SID");
    return it->second;
}

bool Directory::contains(const mpz_class& sid) const {
    return records_.count(curve_->encode_scalar(sid)) != 0;
}

std::string Directory::serialize() const {
    std::ostringstream out;
    for (const auto& [key, rec] : records_) {
        out << role_name(rec.role) << ',' << to_hex(key) << ','
            << to_hex(curve_->encode_point(rec.public_key)) << ','
            << to_hex(curve_->encode_point(rec.secret_pub)) << '\n';
    }
    return out.str();
}

Directory Directory::deserialize(const CurveParams& curve, const std::string& text) {
    Directory dir(curve);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string role, sid, pub, rpub;
        if (!std::getline(fields, role, ',') || !std::getline(fields, sid, ',') ||
            !std::getline(fields, pub, ',') || !std::getline(fields, rpub))
            throw std::invalid_argument("malformed directory line: " + line);
        DirectoryRecord rec;
        rec.role = role_from_name(role);
        rec.sid = curve.decode_scalar(from_hex(sid));
        rec.public_key = curve.decode_point(from_hex(pub));
        rec.secret_pub = curve.decode_point(from_hex(rpub));
        dir.insert(rec);
    }
    return dir;
}

RegistrationCenter::RegistrationCenter(const CurveParams& curve, RandomSource& rng)
    : curve_(&curve), private_key_(random_scalar(curve, rng)) {
    params_.curve = curve_;
    params_.rc_public = curve.mul(private_key_, curve.generator());
}

RegistrationCenter::RegistrationCenter(const CurveParams& curve, const mpz_class& private_key)
    : curve_(&curve), private_key_(private_key) {
    if (private_key_ <= 0 || private_key_ >= curve.order())
        throw std::invalid_argument("RC private key out of range");
    params_.curve = curve_;
    params_.rc_public = curve.mul(private_key_, curve.generator());
}

Credentials RegistrationCenter::register_party(const std::string& id, Role role,
                                               RandomSource& rng, Directory& dir) {
    if (id.empty())
        throw ProtocolError(ErrorKind::EmptyId, "identity must be non-empty");
    if (id.size() > 255)
        throw std::invalid_argument("identity longer than 255 bytes");
    if (issued_.count(id))
        throw ProtocolError(ErrorKind::DuplicateId, "identity already registered: " + id);

    const CurveParams& curve = *curve_;
    mpz_class r = random_scalar(curve, rng);
    CurvePoint R = curve.mul(r, curve.generator());

    Bytes hash_input(id.begin(), id.end());
    append(hash_input, curve.encode_point(R));
    mpz_class h = h1(curve, hash_input);

    mpz_class sid = (r + private_key_ * h) % curve.order();

    mpz_class d = random_scalar(curve, rng);
    CurvePoint pub = curve.mul(d, curve.generator());

    dir.insert(DirectoryRecord{role, sid, pub, R});
    issued_.insert(id);
    return Credentials{role, sid, d, r};
}

std::string serialize_system_params(const SystemParams& params) {
    std::ostringstream out;
    out << "curve=" << params.curve->name() << '\n'
        << "prc=" << to_hex(params.curve->encode_point(params.rc_public)) << '\n';
    return out.str();
}

namespace {
std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed key=value line: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing field: " + key);
    return it->second;
}
}  // namespace

SystemParams deserialize_system_params(const std::string& text) {
    auto kv = parse_kv(text);
    const CurveParams& curve = CurveParams::by_name(require(kv, "curve"));
    SystemParams params;
    params.curve = &curve;
    params.rc_public = curve.decode_point(from_hex(require(kv, "prc")));
    if (params.rc_public.infinity)
        throw std::invalid_argument("RC public key is the identity");
    return params;
}

std::string serialize_credentials(const CurveParams& curve, const Credentials& creds) {
    std::ostringstream out;
    out << "role=" << role_name(creds.role) << '\n'
        << "sid=" << to_hex(curve.encode_scalar(creds.sid)) << '\n'
        << "d=" << to_hex(curve.encode_scalar(creds.private_key)) << '\n'
        << "r=" << to_hex(curve.encode_scalar(creds.secret_key)) << '\n';
    return out.str();
}

Credentials deserialize_credentials(const CurveParams& curve, const std::string& text) {
    auto kv = parse_kv(text);
    Credentials creds;
    creds.role = role_from_name(require(kv, "role"));
    creds.sid = curve.decode_scalar(from_hex(require(kv, "sid")));
    creds.private_key = curve.decode_scalar(from_hex(require(kv, "d")));
    creds.secret_key = curve.decode_scalar(from_hex(require(kv, "r")));
    return creds;
}

}  // namespace mecauth
