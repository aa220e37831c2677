#include "mecauth/costmodel.hpp"

#include <sstream>

namespace mecauth {

const char* op_name(Op op) {
    switch (op) {
        case Op::BilinearPairing: return "bp";
        case Op::ScalarMul: return "m";
        case Op::PointAdd: return "a";
        case Op::Hash: return "h";
        case Op::ModExp: return "e";
        case Op::ModInv: return "inv";
    }
    return "?";
}

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Tsai: return "tsai";
        case Scheme::Irshad: return "irshad";
        case Scheme::Jia: return "jia";
        case Scheme::Proposed: return "proposed";
    }
    return "?";
}

namespace {
mpq_class q_from_millis(long whole, long frac_thousandths) {
    return mpq_class(whole * 1000 + frac_thousandths, 1000);
}
}  // namespace

OpTimings OpTimings::reference_server() {
    OpTimings t;
    t.millis[Op::BilinearPairing] = q_from_millis(5, 275);
    t.millis[Op::ScalarMul] = q_from_millis(1, 970);
    t.millis[Op::PointAdd] = q_from_millis(0, 12);
    t.millis[Op::Hash] = q_from_millis(0, 9);
    t.millis[Op::ModExp] = q_from_millis(0, 339);
    return t;
}

OpTimings OpTimings::reference_client() {
    OpTimings t;
    t.millis[Op::BilinearPairing] = q_from_millis(48, 660);
    t.millis[Op::ScalarMul] = q_from_millis(19, 919);
    t.millis[Op::PointAdd] = q_from_millis(0, 118);
    t.millis[Op::Hash] = q_from_millis(0, 89);
    t.millis[Op::ModExp] = q_from_millis(3, 328);
    return t;
}

std::string CostFormula::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [op, coeff] : coeffs) {
        if (coeff == 0) continue;
        if (!first) out << " + ";
        out << coeff << "T_" << op_name(op);
        first = false;
    }
    return out.str();
}

std::string SizeFormula::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& term : terms) {
        if (term.coeff == 0) continue;
        if (!first) out << " + ";
        out << term.coeff << "|" << term.element << "|";
        first = false;
    }
    return out.str();
}

ElementSizes reference_element_sizes() {
    return {{"G", 1024}, {"Z_q", 160}, {"ID", 256}, {"H", 256}, {"T", 32}};
}

std::string format_millis(const mpq_class& exact) {
    // round half away from zero at 3 decimals
    mpz_class scaled_num = exact.get_num() * 2000 + exact.get_den();
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), mpz_class(exact.get_den() * 2).get_mpz_t());
    mpz_class whole = q / 1000;
    mpz_class frac = q % 1000;
    std::ostringstream out;
    out << whole.get_str() << '.';
    std::string f = frac.get_str();
    out << std::string(3 - f.size(), '0') << f;
    return out.str();
}

TimeResult eval_time(const CostFormula& formula, const OpTimings& timings) {
    mpq_class total = 0;
    for (const auto& [op, coeff] : formula.coeffs) {
        if (coeff == 0) continue;
        auto it = timings.millis.find(op);
        if (it == timings.millis.end()) {
            TimeResult r;
            r.reproducible = false;
            r.display = std::string("unreproducible: missing t_") + op_name(op);
            return r;
        }
        total += mpq_class(coeff) * it->second;
    }
    total.canonicalize();
    return TimeResult{true, total, format_millis(total)};
}

unsigned eval_size(const SizeFormula& formula, const ElementSizes& sizes) {
    unsigned total = 0;
    for (const auto& term : formula.terms) {
        auto it = sizes.find(term.element);
        if (it == sizes.end())
            throw MissingInputError("no size assigned for |" + term.element + "|");
        total += term.coeff * it->second;
    }
    return total;
}

unsigned solve_missing_size(const SizeFormula& formula, const ElementSizes& sizes,
                            unsigned target_bits) {
    unsigned known = 0;
    unsigned unknown_coeff = 0;
    std::string unknown;
    for (const auto& term : formula.terms) {
        auto it = sizes.find(term.element);
        if (it == sizes.end()) {
            if (!unknown.empty() && unknown != term.element)
                throw SizeSolveError("under-determined: more than one unknown element");
            unknown = term.element;
            unknown_coeff += term.coeff;
        } else {
            known += term.coeff * it->second;
        }
    }
    if (unknown.empty())
        throw SizeSolveError("over-determined: no unknown element to solve for");
    if (target_bits < known || (target_bits - known) % unknown_coeff != 0)
        throw SizeSolveError("no integral solution for |" + unknown + "|");
    return (target_bits - known) / unknown_coeff;
}

std::vector<CostFormula> reference_cost_formulas() {
    using enum Op;
    return {
        {Scheme::Tsai, Side::User,
         {{BilinearPairing, 5}, {PointAdd, 2}, {ModExp, 1}, {ModInv, 1}, {Hash, 5}}},
        {Scheme::Tsai, Side::Server,
         {{BilinearPairing, 2}, {ScalarMul, 2}, {PointAdd, 2}, {ModExp, 2}, {Hash, 5}}},
        {Scheme::Irshad, Side::User,
         {{BilinearPairing, 1}, {ScalarMul, 5}, {PointAdd, 2}, {ModExp, 2}, {ModInv, 1},
          {Hash, 6}}},
        {Scheme::Irshad, Side::Server,
         {{BilinearPairing, 2}, {ScalarMul, 4}, {PointAdd, 3}, {ModExp, 2}, {Hash, 3}}},
        {Scheme::Jia, Side::User,
         {{ScalarMul, 4}, {PointAdd, 3}, {ModExp, 1}, {Hash, 5}}},
        {Scheme::Jia, Side::Server,
         {{BilinearPairing, 1}, {ScalarMul, 5}, {PointAdd, 3}, {Hash, 5}}},
        {Scheme::Proposed, Side::User, {{ScalarMul, 4}, {Hash, 4}}},
        {Scheme::Proposed, Side::Server, {{ScalarMul, 3}, {Hash, 4}}},
    };
}

std::vector<SizeFormula> reference_size_formulas() {
    return {
        {Scheme::Tsai, {{"G", 3}, {"G_T", 1}, {"H", 1}, {"ID", 1}}},
        {Scheme::Irshad, {{"G", 4}, {"G_T", 1}, {"H", 1}, {"ID", 1}}},
        {Scheme::Jia, {{"G", 4}, {"T", 2}, {"Z_q", 2}, {"ID", 1}}},
        {Scheme::Proposed, {{"G", 2}, {"T", 2}, {"H", 2}}},
    };
}

unsigned implementation_handshake_bits(const CurveParams& curve) {
    // M1 token + M1 time + R_1 + M2 time + Auth_ms + Auth_u
    size_t bytes = 32 + 4 + curve.point_width() + 4 + 32 + 32;
    return static_cast<unsigned>(bytes * 8);
}

CountCheck verify_live_counts(const OpCounter& counter, Side side) {
    unsigned want_muls = side == Side::User ? 4 : 3;
    unsigned want_hashes = 4;
    std::ostringstream detail;
    detail << "muls=" << counter.scalar_muls << " (want " << want_muls << ")"
           << ", plain-h2=" << counter.h2_plain << " (want " << want_hashes << ")"
           << ", extras: adds=" << counter.point_adds << " mask-h2=" << counter.h2_mask
           << " kdf-h2=" << counter.h2_kdf << " h1=" << counter.h1_calls;
    bool pass = counter.scalar_muls == want_muls && counter.h2_plain == want_hashes;
    return CountCheck{pass, detail.str()};
}

}  // namespace mecauth
