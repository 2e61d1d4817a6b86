#include "hamder/exceptional.hpp"

#include <stdexcept>

namespace hamder {

namespace {

std::uint64_t p_power(const Params& params, int q) {
    std::uint64_t v = 1;
    for (int k = 0; k < q; ++k) {
        v *= params.p;
        if (v > (1ULL << 40)) break;
    }
    return v;
}

void require_hamiltonian(const BasisPtr& domain) {
    if (!domain->has_sources()) throw std::invalid_argument("family maps need a Hamiltonian domain basis");
}

void require_even_variable(const Params& params, int i) {
    if (i < 0 || i >= params.even_count()) {
        throw std::out_of_range("variable index " + std::to_string(i + 1) + " is not in Y0");
    }
}

void require_n_even(const Params& params, const char* what) {
    if (params.n % 2 != 0) throw std::invalid_argument(std::string(what) + " needs n even");
}

void require_q(int q) {
    if (q < 1) throw std::invalid_argument("power q must be at least 1");
}

// Map D_H(f) -> rule(f) over a Hamiltonian domain.
template <typename Rule>
LinearMapOnBasis from_sources(const Algebra&, BasisPtr domain, std::string label, int zdeg, Rule rule) {
    require_hamiltonian(domain);
    LinearMapOnBasis out = zero_map(domain, std::move(label));
    out.zdeg = zdeg;
    for (std::size_t j = 0; j < domain->dim(); ++j) out.images[j] = rule(domain->source(j));
    return out;
}

}  // namespace

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::GammaLambda: return "gamma";
        case FamilyKind::Phi: return "phi";
        case FamilyKind::Theta: return "theta";
        case FamilyKind::Psi: return "psi";
        case FamilyKind::AdGammaPrime: return "ad_gamma_prime";
        case FamilyKind::AdPartialPower: return "ad_partial_power";
    }
    return "?";
}

std::optional<FamilyKind> parse_family(const std::string& name) {
    for (const auto k : {FamilyKind::GammaLambda, FamilyKind::Phi, FamilyKind::Theta, FamilyKind::Psi,
                         FamilyKind::AdGammaPrime, FamilyKind::AdPartialPower}) {
        if (family_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string family_label(const FamilyTag& tag) {
    const std::string i = std::to_string(tag.index + 1);
    const std::string q = std::to_string(tag.q);
    switch (tag.kind) {
        case FamilyKind::GammaLambda: return "Gamma";
        case FamilyKind::Phi: return "Phi_" + i + "^(" + q + ")";
        case FamilyKind::Theta: return "Theta_" + i + "^(" + q + ")";
        case FamilyKind::Psi: return "Psi^(" + i + ")";
        case FamilyKind::AdGammaPrime: return "ad Gamma'";
        case FamilyKind::AdPartialPower: return "(ad d" + i + ")^(p^" + q + ")";
    }
    return "?";
}

int declared_zdeg(const Params& params, const FamilyTag& tag) {
    const int pq = static_cast<int>(p_power(params, tag.q));
    switch (tag.kind) {
        case FamilyKind::GammaLambda: return params.n - static_cast<int>(params.pi_total());
        case FamilyKind::Phi:
        case FamilyKind::Theta: return params.n - pq;
        case FamilyKind::Psi: return params.n - 2;
        case FamilyKind::AdGammaPrime: return 0;
        case FamilyKind::AdPartialPower: return -pq;
    }
    return 0;
}

LinearMapOnBasis gamma_lambda(const Algebra& alg, BasisPtr domain, Scalar lambda) {
    const auto& params = alg.params();
    lambda %= params.p;
    if (params.n % 2 != 0 && lambda != 0) throw std::invalid_argument("Gamma_lambda is zero for n odd");
    const MonoId top = alg.divided_power_top();
    const VectorField image = d_h(alg, alg.omega(), lambda);
    const int z = declared_zdeg(params, {FamilyKind::GammaLambda});
    auto out = from_sources(alg, std::move(domain), "Gamma_" + std::to_string(lambda), z,
                            [&](MonoId a) { return a == top ? image : VectorField{}; });
    return out;
}

LinearMapOnBasis phi(const Algebra& alg, BasisPtr domain, int i, int q) {
    const auto& params = alg.params();
    require_even_variable(params, i);
    require_q(q);
    require_n_even(params, "Phi");
    const std::uint64_t pq = p_power(params, q);
    const VectorField dh_omega = d_h(alg, alg.omega());
    const FamilyTag tag{FamilyKind::Phi, i, q};
    return from_sources(alg, std::move(domain), family_label(tag), declared_zdeg(params, tag), [&](MonoId a) {
        if (pq > params.pi(i)) return VectorField{};
        const auto r = alg.partial_power(i, static_cast<std::uint32_t>(pq), a);
        if (r.coeff == 0) return VectorField{};
        return module_scale(alg, alg.mono(r.mono, r.coeff), dh_omega);
    });
}

LinearMapOnBasis theta(const Algebra& alg, BasisPtr domain, int i, int q) {
    const auto& params = alg.params();
    require_even_variable(params, i);
    require_q(q);
    require_n_even(params, "Theta");
    const std::uint64_t pq = p_power(params, q);
    const SuperPoly omega = alg.mono(alg.omega());
    const FamilyTag tag{FamilyKind::Theta, i, q};
    return from_sources(alg, std::move(domain), family_label(tag), declared_zdeg(params, tag), [&](MonoId a) {
        if (pq > params.pi(i)) return VectorField{};
        const auto r = alg.partial_power(i, static_cast<std::uint32_t>(pq), a);
        if (r.coeff == 0) return VectorField{};
        return module_scale(alg, omega, d_h(alg, r.mono, r.coeff));
    });
}

LinearMapOnBasis psi(const Algebra& alg, BasisPtr domain, int i) {
    const auto& params = alg.params();
    if (i < 0 || i >= params.m) throw std::out_of_range("Psi index must lie in 1..m");
    require_n_even(params, "Psi");
    const VectorField dh_omega = d_h(alg, alg.omega());
    const FamilyTag tag{FamilyKind::Psi, i, 0};
    const int ip = params.prime(i);
    return from_sources(alg, std::move(domain), family_label(tag), declared_zdeg(params, tag), [&](MonoId a) {
        const auto r1 = alg.partial(ip, a);
        if (r1.coeff == 0) return VectorField{};
        const auto r2 = alg.partial(i, r1.mono);
        if (r2.coeff == 0) return VectorField{};
        return module_scale(alg, alg.mono(r2.mono, alg.field().mul(r1.coeff, r2.coeff)), dh_omega);
    });
}

LinearMapOnBasis ad_gamma_prime(const Algebra& alg, BasisPtr domain) {
    auto out = ad(alg, gamma_prime(alg), std::move(domain), family_label({FamilyKind::AdGammaPrime}));
    out.zdeg = 0;
    return out;
}

LinearMapOnBasis ad_partial_power(const Algebra& alg, BasisPtr domain, int r, int q) {
    const auto& params = alg.params();
    require_even_variable(params, r);
    require_q(q);
    const std::uint64_t pq = p_power(params, q);
    const FamilyTag tag{FamilyKind::AdPartialPower, r, q};
    return from_sources(alg, std::move(domain), family_label(tag), declared_zdeg(params, tag), [&](MonoId a) {
        if (pq > params.pi(r)) return VectorField{};
        const auto s = alg.partial_power(r, static_cast<std::uint32_t>(pq), a);
        if (s.coeff == 0) return VectorField{};
        return d_h(alg, s.mono, s.coeff);
    });
}

LinearMapOnBasis ad_partial_power_iterated(const Algebra& alg, BasisPtr domain, int r, int q) {
    const auto& params = alg.params();
    require_even_variable(params, r);
    require_q(q);
    const std::uint64_t pq = p_power(params, q);
    const VectorField dr = partial_field(alg, r);
    const FamilyTag tag{FamilyKind::AdPartialPower, r, q};
    LinearMapOnBasis out = zero_map(domain, family_label(tag) + " iterated");
    out.zdeg = declared_zdeg(params, tag);
    for (std::size_t j = 0; j < domain->dim(); ++j) {
        VectorField v = domain->field(j);
        for (std::uint64_t k = 0; k < pq && !v.is_zero(); ++k) v = bracket(alg, dr, v);
        out.images[j] = v;
    }
    return out;
}

LinearMapOnBasis build_family(const Algebra& alg, BasisPtr domain, const FamilyTag& tag) {
    LinearMapOnBasis m;
    switch (tag.kind) {
        case FamilyKind::GammaLambda: return gamma_lambda(alg, std::move(domain), tag.coeff);
        case FamilyKind::Phi: m = phi(alg, std::move(domain), tag.index, tag.q); break;
        case FamilyKind::Theta: m = theta(alg, std::move(domain), tag.index, tag.q); break;
        case FamilyKind::Psi: m = psi(alg, std::move(domain), tag.index); break;
        case FamilyKind::AdGammaPrime: m = ad_gamma_prime(alg, std::move(domain)); break;
        case FamilyKind::AdPartialPower: m = ad_partial_power(alg, std::move(domain), tag.index, tag.q); break;
    }
    if (tag.coeff % alg.params().p != 1) m = scale_map(alg, tag.coeff % alg.params().p, m);
    return m;
}

VectorField theta_on_witt(const Algebra& alg, const VectorField& v, int i, int q) {
    const auto& params = alg.params();
    require_even_variable(params, i);
    require_q(q);
    const std::uint64_t pq = p_power(params, q);
    if (pq > params.pi(i)) return {};
    std::vector<Entry> shifted;
    for (const auto& e : v.terms) {
        const auto r = alg.partial_power(i, static_cast<std::uint32_t>(pq), key_mono(alg, e.index));
        if (r.coeff == 0) continue;
        shifted.push_back({field_key(alg, r.mono, key_direction(alg, e.index)), e.value});
    }
    const VectorField lowered{SparseVec::from_unsorted(std::move(shifted), alg.field())};
    return module_scale(alg, alg.mono(alg.omega()), lowered);
}

std::optional<ThetaWitness> find_theta_witness(const Algebra& alg, int i, int q) {
    const auto& params = alg.params();
    require_n_even(params, "Theta");
    const std::uint64_t pq = p_power(params, q);
    if (pq > params.pi(i)) return std::nullopt;
    std::vector<FieldKey> keys;
    for (FieldKey k = 0; k < witt_dim(alg); ++k) {
        if (key_parity(alg, k) == 0) keys.push_back(k);
    }
    std::stable_sort(keys.begin(), keys.end(),
                     [&](FieldKey a, FieldKey b) { return key_zdeg(alg, a) < key_zdeg(alg, b); });
    ThetaWitness w;
    const int max_degree = static_cast<int>(pq) + 2;
    for (const FieldKey kx : keys) {
        if (key_zdeg(alg, kx) > max_degree) break;
        if (alg.alpha(key_mono(alg, kx))[static_cast<std::size_t>(i)] < pq) continue;
        const VectorField x{SparseVec::unit(kx)};
        const VectorField tx = theta_on_witt(alg, x, i, q);
        for (const FieldKey ky : keys) {
            if (key_zdeg(alg, ky) > 1) break;
            const VectorField y{SparseVec::unit(ky)};
            ++w.pairs_searched;
            VectorField defect = theta_on_witt(alg, bracket(alg, x, y), i, q);
            defect = sub(alg, defect, bracket(alg, tx, y));
            defect = sub(alg, defect, bracket(alg, x, theta_on_witt(alg, y, i, q)));
            if (!defect.is_zero()) {
                w.x = x;
                w.y = y;
                w.defect = defect;
                return w;
            }
        }
    }
    return std::nullopt;
}

}  // namespace hamder
