#pragma once

#include <optional>
#include <string>

#include "hamder/derivations.hpp"

namespace hamder {

enum class FamilyKind { GammaLambda, Phi, Theta, Psi, AdGammaPrime, AdPartialPower };

// One member of a family; index is a 0-based even variable (unused for
// GammaLambda and AdGammaPrime), q the p-power exponent (Phi, Theta,
// AdPartialPower only).
struct FamilyTag {
    FamilyKind kind = FamilyKind::Phi;
    int index = 0;
    int q = 1;
    Scalar coeff = 1;
};

std::string family_name(FamilyKind kind);
std::optional<FamilyKind> parse_family(const std::string& name);
// Readable label such as "Phi_1^(1)" with 1-based variable index.
std::string family_label(const FamilyTag& tag);
int declared_zdeg(const Params& params, const FamilyTag& tag);

// All constructors take a Hamiltonian domain basis (D_H of known monomials).
LinearMapOnBasis gamma_lambda(const Algebra& alg, BasisPtr domain, Scalar lambda);
LinearMapOnBasis phi(const Algebra& alg, BasisPtr domain, int i, int q);
LinearMapOnBasis theta(const Algebra& alg, BasisPtr domain, int i, int q);
LinearMapOnBasis psi(const Algebra& alg, BasisPtr domain, int i);
LinearMapOnBasis ad_gamma_prime(const Algebra& alg, BasisPtr domain);
// Closed form D_H(f) -> D_H(d_r^{p^q} f).
LinearMapOnBasis ad_partial_power(const Algebra& alg, BasisPtr domain, int r, int q);
// The same map by p^q successive brackets with d_r.
LinearMapOnBasis ad_partial_power_iterated(const Algebra& alg, BasisPtr domain, int r, int q);
// Scaled by tag.coeff.
LinearMapOnBasis build_family(const Algebra& alg, BasisPtr domain, const FamilyTag& tag);

// x^omega (ad d_i)^{p^q}(v) for an arbitrary v in W.
VectorField theta_on_witt(const Algebra& alg, const VectorField& v, int i, int q);

struct ThetaWitness {
    VectorField x;
    VectorField y;
    VectorField defect;
    std::size_t pairs_searched = 0;
};
// First pair of even W basis fields with nonzero Leibniz defect for the
// extension of Theta_i^(q) to W, searched in increasing degree.
std::optional<ThetaWitness> find_theta_witness(const Algebra& alg, int i, int q);

}  // namespace hamder
