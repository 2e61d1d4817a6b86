#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hamder/exceptional.hpp"

namespace hamder {

enum class CheckId {
    le1,
    p1_1,
    p1_2,
    p1_3,
    t1_4,
    t1_7,
    p2_1,
    p2_2,
    p2_4,
    r2_3,
    l3_3,
    t3_6_forward,
    t3_8_forward,
    t3_8_oracle,
    t3_9_forward,
    p3_10_forward,
    zd_metadata,
    cw_minus1_is_G,
};

std::string to_string(CheckId id);
std::optional<CheckId> parse_check_id(const std::string& name);
const std::vector<CheckId>& all_check_ids();
// One-line mathematical statement the check establishes.
std::string check_statement(CheckId id);
// Oracle checks are excluded from "verify all".
bool is_oracle_check(CheckId id);
// Empty when the check applies to the parameters, otherwise the reason.
std::string applicability(CheckId id, const Params& params);

class NotApplicable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Status { pass, fail, report_only };
std::string to_string(Status s);

struct CheckPolicy {
    std::uint64_t seed = 0xC0FFEE;
    std::size_t samples = 1000000;
    int cap = 6;
    std::size_t budget = 4000000;  // unknowns or dimensions, per operation
    bool timing = false;
};

struct Report {
    std::string check;
    Params params;
    Status status = Status::pass;
    nlohmann::ordered_json dims = nlohmann::ordered_json::object();
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    std::vector<std::string> counterexamples;
    std::uint64_t seed = 0;
    double elapsed_ms = 0;
    bool extrapolated = false;
    bool budget_exhausted = false;
};

nlohmann::ordered_json to_json(const Report& r);
std::string to_text(const Report& r);

// Deterministic given (id, params, policy). Throws NotApplicable when the
// parameters do not fit the check; budget exhaustion yields a failed report
// with budget_exhausted set.
Report run_check(CheckId id, const Params& params, const CheckPolicy& policy = {});

// Coefficients of a derivation relative to the exceptional families. Keys
// of the per-family maps are (0-based variable r, power s).
struct FamilyCoefficients {
    Scalar lambda = 0;        // Gamma_lambda
    Scalar lambda_prime = 0;  // ad Gamma'
    std::map<std::pair<int, int>, Scalar> phi;
    std::map<std::pair<int, int>, Scalar> theta;
    std::map<std::pair<int, int>, Scalar> ad_partial;
    std::map<int, Scalar> psi;
    VectorField inner;

    bool families_zero() const;
    friend bool operator==(const FamilyCoefficients&, const FamilyCoefficients&) = default;
};

class MatchError : public std::runtime_error {
public:
    MatchError(const std::string& what, std::string probe, VectorField image)
        : std::runtime_error(what), probe_(std::move(probe)), image_(std::move(image)) {}
    const std::string& probe() const noexcept { return probe_; }
    const VectorField& image() const noexcept { return image_; }

private:
    std::string probe_;
    VectorField image_;
};

struct MatchResult {
    FamilyCoefficients coeffs;
    LinearMapOnBasis residual;
};

// phi must be homogeneous on a Hamiltonian domain and vanish on its degree
// -1 and 0 slices. Coefficients are read from probe images in order of
// increasing power, then variable, each family being subtracted once read.
MatchResult match_family_coefficients(const Algebra& alg, const LinearMapOnBasis& phi);

struct Classification {
    int degree = 0;
    FamilyCoefficients coeffs;
    LinearMapOnBasis residual;
    bool residual_zero = false;
    std::vector<std::string> stages;
};

// Inner corrections on the degree -1 (and 0) slices followed by family
// matching. At degree 0 the inner part is normalised to have no
// x_{2m+1} d_{2m+1} term, that component being moved into lambda_prime.
Classification classify_derivation(const Algebra& alg, const LinearMapOnBasis& phi);

// ad(inner) + lambda_prime ad Gamma' + the families, on the given domain.
LinearMapOnBasis assemble(const Algebra& alg, BasisPtr domain, const FamilyCoefficients& coeffs);

nlohmann::ordered_json to_json(const Algebra& alg, const FamilyCoefficients& c);
nlohmann::ordered_json to_json(const Algebra& alg, const Classification& c);

// Map description: {"domain": "N"|"Heven", "degree": k?, then either
// "images": [{"x": expr, "image": expr}, ...] (unlisted basis vectors map to
// zero) or "combination": {"inner": expr, "lambda_prime": c, "lambda": c,
// "families": [{"kind": "phi", "index": 1, "q": 1, "coeff": 3}, ...]}}.
LinearMapOnBasis map_from_json(const Algebra& alg, const nlohmann::json& spec);

// Random element of a basis span with the given number of terms.
VectorField random_combination(const Algebra& alg, const SubspaceBasis& basis, std::mt19937_64& rng, int terms);

}  // namespace hamder
