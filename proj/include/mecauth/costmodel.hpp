#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mecauth/curve.hpp"
#include "mecauth/opcount.hpp"

namespace mecauth {

enum class Op { BilinearPairing, ScalarMul, PointAdd, Hash, ModExp, ModInv };
enum class Side { User, Server };
enum class Scheme { Tsai, Irshad, Jia, Proposed };

const char* op_name(Op op);
const char* scheme_name(Scheme scheme);

// Per-operation millisecond timings for one entity class. ModInv never
// appears in the source table and stays unset unless supplied by hand.
struct OpTimings {
    std::map<Op, mpq_class> millis;

    static OpTimings reference_server();
    static OpTimings reference_client();
};

struct CostFormula {
    Scheme scheme;
    Side side;
    std::map<Op, unsigned> coeffs;

    std::string to_string() const;
};

struct SizeTerm {
    std::string element;  // |G|, |G_T|, |Z_q|, |ID|, |H|, |T|
    unsigned coeff;
};

struct SizeFormula {
    Scheme scheme;
    std::vector<SizeTerm> terms;

    std::string to_string() const;
};

// bits per element symbol; |G_T| intentionally absent until solved for.
using ElementSizes = std::map<std::string, unsigned>;
ElementSizes reference_element_sizes();

struct TimeResult {
    bool reproducible = false;
    mpq_class exact_millis;       // valid only when reproducible
    std::string display;          // 3-decimal rendering or the flag text
};

class MissingInputError : public std::runtime_error {
  public:
    explicit MissingInputError(const std::string& what) : std::runtime_error(what) {}
};

class SizeSolveError : public std::runtime_error {
  public:
    explicit SizeSolveError(const std::string& what) : std::runtime_error(what) {}
};

// Linear combination of timings; flags the row unreproducible when a needed
// timing (ModInv) is absent instead of guessing.
TimeResult eval_time(const CostFormula& formula, const OpTimings& timings);

// Total message bits; throws MissingInputError when an element size is unset.
unsigned eval_size(const SizeFormula& formula, const ElementSizes& sizes);

// Back-solve the single unset element size from a known total.
unsigned solve_missing_size(const SizeFormula& formula, const ElementSizes& sizes,
                            unsigned target_bits);

// The four compared schemes, straight from the published operation counts.
std::vector<CostFormula> reference_cost_formulas();
std::vector<SizeFormula> reference_size_formulas();

// On-the-wire bits of one honest handshake under implementation parameters
// (compressed points, 32-byte digests, 4-byte timestamps).
unsigned implementation_handshake_bits(const CurveParams& curve);

struct CountCheck {
    bool pass = false;
    std::string detail;
};

// Checks a completed honest handshake's live tallies against the proposed
// scheme's coefficients: 4 muls / 4 plain hashes at the user, 3 / 4 at the
// server. Mask/KDF-tagged hashes are reported but not counted.
CountCheck verify_live_counts(const OpCounter& counter, Side side);

// Three-decimal display rendering of an exact rational.
std::string format_millis(const mpq_class& exact);

}  // namespace mecauth
