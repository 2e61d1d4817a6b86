#pragma once

#include <cstdint>

#include "hamder/algebra.hpp"

namespace hamder {

// Coordinate of f d_i in W(2m, n; t): direction-major, then monomial order.
using FieldKey = std::uint32_t;

// Element sum_i f_i d_i of W(2m, n; t), stored as a sparse vector over
// FieldKey coordinates.
struct VectorField {
    SparseVec terms;

    bool is_zero() const noexcept { return terms.empty(); }
    friend bool operator==(const VectorField&, const VectorField&) = default;
};

inline FieldKey field_key(const Algebra& alg, MonoId mono, int direction) {
    return static_cast<FieldKey>(direction) * alg.dim() + mono;
}
inline int key_direction(const Algebra& alg, FieldKey key) { return static_cast<int>(key / alg.dim()); }
inline MonoId key_mono(const Algebra& alg, FieldKey key) { return key % alg.dim(); }
inline std::uint32_t witt_dim(const Algebra& alg) {
    return alg.dim() * static_cast<std::uint32_t>(alg.var_count());
}
inline int key_zdeg(const Algebra& alg, FieldKey key) { return alg.zdeg(key_mono(alg, key)) - 1; }
inline int key_parity(const Algebra& alg, FieldKey key) {
    return (alg.parity(key_mono(alg, key)) + alg.params().mu(key_direction(alg, key))) & 1;
}

VectorField field_term(const Algebra& alg, MonoId mono, int direction, Scalar c = 1);
VectorField partial_field(const Algebra& alg, int direction);  // d_i
// sum_i a_i d_i assembled from a coefficient per direction.
VectorField make_field(const Algebra& alg, const SuperPoly& coefficient, int direction);
SuperPoly field_coefficient(const Algebra& alg, const VectorField& d, int direction);

VectorField add(const Algebra& alg, const VectorField& a, const VectorField& b);
VectorField sub(const Algebra& alg, const VectorField& a, const VectorField& b);
VectorField scale(const Algebra& alg, Scalar c, const VectorField& a);

// D(f) for D = sum a_i d_i.
SuperPoly apply(const Algebra& alg, const VectorField& d, const SuperPoly& f);
// a . D in the O-module structure of W.
VectorField module_scale(const Algebra& alg, const SuperPoly& a, const VectorField& d);
// Lie super-bracket, bilinear extension of
//   [a d_i, b d_j] = a d_i(b) d_j - (-1)^{p(a d_i) p(b d_j)} b d_j(a) d_i.
VectorField bracket(const Algebra& alg, const VectorField& a, const VectorField& b);
// Hamiltonian map D_H(a) = sum_i tau(i) (-1)^{mu(i) p(a)} d_i(a) d_{i'},
// applied monomial by monomial so inhomogeneous input splits by parity.
VectorField d_h(const Algebra& alg, const SuperPoly& a);
VectorField d_h(const Algebra& alg, MonoId mono, Scalar c = 1);

Grade field_parity(const Algebra& alg, const VectorField& d);
Grade field_zdeg(const Algebra& alg, const VectorField& d);

// Euler field on the exterior variables, sum_{r in Y_1} x_r d_r.
VectorField gamma_prime(const Algebra& alg);

// Preimage under D_H: the unique f without constant term with D_H(f) = v,
// or nullopt when v is not in the image of D_H. Monomials are read off the
// coordinate (x^(alpha - eps_i) x^u, d_i') for the first i with alpha_i > 0,
// or (x^(u minus its first index), d_first) for alpha = 0.
std::optional<SuperPoly> d_h_preimage(const Algebra& alg, const VectorField& v);
// The coordinate of D_H(x^(alpha) x^u) from which the coefficient of the
// monomial is recovered, and the value D_H(mono) carries there.
struct HamiltonianPivot {
    FieldKey key;
    Scalar value;
};
HamiltonianPivot hamiltonian_pivot(const Algebra& alg, MonoId mono);

}  // namespace hamder
