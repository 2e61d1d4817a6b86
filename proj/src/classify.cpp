#include <algorithm>

#include "hamder/expr.hpp"
#include "hamder/verify.hpp"

namespace hamder {

namespace {

std::uint64_t p_power(const Params& params, int s) {
    std::uint64_t v = 1;
    for (int k = 0; k < s; ++k) v *= params.p;
    return v;
}

bool vanishes_low(const LinearMapOnBasis& d) {
    for (std::size_t j = 0; j < d.dim(); ++j) {
        if (d.domain->zdeg(j) <= 0 && !d.images[j].is_zero()) return false;
    }
    return true;
}

// c with img = c * target, if any.
std::optional<Scalar> ratio(const Algebra& alg, const VectorField& img, const VectorField& target) {
    if (img.is_zero()) return Scalar{0};
    if (target.is_zero()) return std::nullopt;
    const auto& f = alg.field();
    const Scalar c = f.mul(img.terms.at(target.terms.front().index), f.inv(target.terms.front().value));
    if (c == 0 || !(scale(alg, c, target) == img)) return std::nullopt;
    return c;
}

Scalar tau_scalar(const Algebra& alg, int i) { return alg.params().tau(i) > 0 ? Scalar{1} : alg.field().neg(1); }

int max_t(const Params& params) { return *std::max_element(params.t.begin(), params.t.end()); }

}  // namespace

bool FamilyCoefficients::families_zero() const {
    auto all_zero = [](const auto& m) {
        return std::all_of(m.begin(), m.end(), [](const auto& kv) { return kv.second == 0; });
    };
    return lambda == 0 && lambda_prime == 0 && all_zero(phi) && all_zero(theta) && all_zero(ad_partial) && all_zero(psi);
}

MatchResult match_family_coefficients(const Algebra& alg, const LinearMapOnBasis& phi_map) {
    if (!phi_map.zdeg) throw std::invalid_argument("family matching needs a homogeneous map");
    if (!phi_map.domain->has_sources()) throw std::invalid_argument("family matching needs a Hamiltonian domain");
    if (!vanishes_low(phi_map)) throw std::invalid_argument("map does not vanish on the degree -1 and 0 slices");
    const auto& params = alg.params();
    const auto& domain = phi_map.domain;
    const int k = *phi_map.zdeg;
    const int n = params.n;
    const int even = params.even_count();
    const VectorField dh_omega = d_h(alg, alg.omega());
    const SuperPoly omega = alg.mono(alg.omega());

    MatchResult out;
    LinearMapOnBasis cur = phi_map;
    auto image_at = [&](const Monomial& m) -> VectorField {
        const auto id = alg.find(m);
        if (!id) return {};
        const auto j = domain->index_of_source(*id);
        return j ? cur.images[*j] : VectorField{};
    };
    auto subtract = [&](const LinearMapOnBasis& fam, Scalar c) {
        const auto z = cur.zdeg;
        cur = sub_maps(alg, cur, scale_map(alg, c, fam));
        cur.zdeg = z;
    };
    auto fail = [&](const std::string& what, const std::string& probe, const VectorField& img) {
        throw MatchError(what + " (probe " + probe + ", image " + print_field(alg, img) + ")", probe, img);
    };

    for (int s = 1; s < max_t(params); ++s) {
        const std::uint64_t pq = p_power(params, s);
        for (int r = 0; r < even; ++r) {
            if (s >= params.t[static_cast<std::size_t>(r)]) continue;
            const bool ad_degree = k == -static_cast<int>(pq);
            const bool phi_degree = n % 2 == 0 && !ad_degree && k == n - static_cast<int>(pq);
            if (phi_degree) {
                Monomial m;
                m.alpha.assign(static_cast<std::size_t>(even), 0);
                m.alpha[static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(pq);
                const VectorField img = image_at(m);
                const auto c = ratio(alg, img, dh_omega);
                if (!c) fail("Phi probe image is not a multiple of D_H(x^omega)", print_monomial(alg, alg.id_of(m)), img);
                if (*c != 0) {
                    out.coeffs.phi[{r, s}] = *c;
                    subtract(phi(alg, domain, r, s), *c);
                }
            }
            if (phi_degree || ad_degree) {
                Monomial m;
                m.alpha.assign(static_cast<std::size_t>(even), 0);
                m.alpha[static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(pq + 1);
                const VectorField img = image_at(m);
                const VectorField d_rp = partial_field(alg, params.prime(r));
                const VectorField target = ad_degree ? d_rp : module_scale(alg, omega, d_rp);
                const auto c = ratio(alg, img, target);
                if (!c) {
                    fail(ad_degree ? "power-of-ad probe image is not a multiple of d_r'"
                                   : "Theta probe image is not a multiple of x^omega d_r'",
                         print_monomial(alg, alg.id_of(m)), img);
                }
                if (*c != 0) {
                    const Scalar coeff = alg.field().mul(*c, tau_scalar(alg, r));
                    if (ad_degree) {
                        out.coeffs.ad_partial[{r, s}] = coeff;
                        subtract(ad_partial_power(alg, domain, r, s), coeff);
                    } else {
                        out.coeffs.theta[{r, s}] = coeff;
                        subtract(theta(alg, domain, r, s), coeff);
                    }
                }
            }
        }
    }
    if (k == 0 && n >= 2) {
        Monomial m;
        m.alpha.assign(static_cast<std::size_t>(even), 0);
        m.alpha[0] = 1;
        m.mask = 3;
        const VectorField img = image_at(m);
        Monomial u;
        u.alpha.assign(static_cast<std::size_t>(even), 0);
        u.mask = 3;
        const VectorField target = module_scale(alg, alg.mono(u), partial_field(alg, params.prime(0)));
        const auto c = ratio(alg, img, target);
        if (!c) fail("ad Gamma' probe image is not a multiple of x^u d_1'", print_monomial(alg, alg.id_of(m)), img);
        if (*c != 0) {
            const auto& f = alg.field();
            const Scalar lp = f.mul(*c, f.inv(f.mul(2, tau_scalar(alg, 0))));
            out.coeffs.lambda_prime = lp;
            subtract(ad_gamma_prime(alg, domain), lp);
        }
    }
    if (n % 2 == 0 && k == n - static_cast<int>(params.pi_total())) {
        const auto j = domain->index_of_source(alg.divided_power_top());
        if (j) {
            const VectorField img = cur.images[*j];
            const auto c = ratio(alg, img, dh_omega);
            if (!c) fail("Gamma probe image is not a multiple of D_H(x^omega)", "x^(pi)", img);
            if (*c != 0) {
                out.coeffs.lambda = *c;
                subtract(gamma_lambda(alg, domain, *c), 1);
            }
        }
    }
    out.residual = cur;
    return out;
}

Classification classify_derivation(const Algebra& alg, const LinearMapOnBasis& phi_map) {
    LinearMapOnBasis cur = phi_map;
    if (!cur.zdeg) {
        const auto parts = graded_components(alg, cur);
        if (parts.size() > 1) throw std::invalid_argument("classification needs a homogeneous map");
        cur.zdeg = parts.empty() ? 0 : parts.begin()->first;
    }
    Classification out;
    const int k = *cur.zdeg;
    out.degree = k;
    VectorField inner;
    if (k >= 0) {
        auto c = find_inner_correction(alg, cur, CorrectionStage::minus_one);
        inner = add(alg, inner, c.e);
        cur = std::move(c.corrected);
        out.stages.push_back("degree -1 correction");
    }
    if (!vanishes_low(cur)) {
        try {
            auto c = find_inner_correction(alg, cur, CorrectionStage::zero);
            inner = add(alg, inner, c.e);
            cur = std::move(c.corrected);
            out.stages.push_back("degree 0 correction");
        } catch (const CorrectionFailed&) {
            if (k % 2 != 0) throw;
            out.stages.push_back("degree 0 correction unsolved");
            out.coeffs.inner = inner;
            out.residual = cur;
            out.residual_zero = false;
            return out;
        }
    }
    auto m = match_family_coefficients(alg, cur);
    out.stages.push_back("family matching");
    out.coeffs = std::move(m.coeffs);
    const auto& params = alg.params();
    if (k == 0 && params.n >= 1) {
        const FieldKey key = field_key(alg, alg.id_of(Monomial{std::vector<std::uint32_t>(static_cast<std::size_t>(params.even_count()), 0), 1U}),
                                       params.even_count());
        const Scalar c = inner.terms.at(key);
        if (c != 0) {
            inner = sub(alg, inner, scale(alg, c, gamma_prime(alg)));
            out.coeffs.lambda_prime = alg.field().add(out.coeffs.lambda_prime, c);
        }
    }
    out.coeffs.inner = inner;
    out.residual = std::move(m.residual);
    out.residual_zero = is_zero_map(out.residual);
    return out;
}

LinearMapOnBasis assemble(const Algebra& alg, BasisPtr domain, const FamilyCoefficients& c) {
    LinearMapOnBasis out = ad(alg, c.inner, domain, "assembled");
    auto plus = [&](const LinearMapOnBasis& m, Scalar s) {
        if (s == 0) return;
        out = add_maps(alg, out, scale_map(alg, s, m));
    };
    plus(ad_gamma_prime(alg, domain), c.lambda_prime);
    for (const auto& [key, v] : c.phi) plus(phi(alg, domain, key.first, key.second), v);
    for (const auto& [key, v] : c.theta) plus(theta(alg, domain, key.first, key.second), v);
    for (const auto& [key, v] : c.ad_partial) plus(ad_partial_power(alg, domain, key.first, key.second), v);
    for (const auto& [r, v] : c.psi) plus(psi(alg, domain, r), v);
    if (c.lambda != 0) out = add_maps(alg, out, gamma_lambda(alg, domain, c.lambda));
    out.label = "assembled";
    const auto parts = graded_components(alg, out);
    out.zdeg = parts.size() == 1 ? std::optional<int>(parts.begin()->first) : std::nullopt;
    return out;
}

nlohmann::ordered_json to_json(const Algebra& alg, const FamilyCoefficients& c) {
    using nlohmann::ordered_json;
    auto series = [](const std::map<std::pair<int, int>, Scalar>& m) {
        ordered_json a = ordered_json::array();
        for (const auto& [key, v] : m) {
            if (v != 0) a.push_back({{"r", key.first + 1}, {"s", key.second}, {"coeff", v}});
        }
        return a;
    };
    ordered_json psi_list = ordered_json::array();
    for (const auto& [r, v] : c.psi) {
        if (v != 0) psi_list.push_back({{"r", r + 1}, {"coeff", v}});
    }
    bool mu_eta_zero = true;
    for (const auto& [key, mu] : c.theta) {
        const auto it = c.ad_partial.find(key);
        if (mu != 0 && it != c.ad_partial.end() && it->second != 0) mu_eta_zero = false;
    }
    ordered_json j;
    j["inner"] = print_field(alg, c.inner);
    j["lambda"] = c.lambda;
    j["lambda_prime"] = c.lambda_prime;
    j["phi"] = series(c.phi);
    j["theta"] = series(c.theta);
    j["ad_partial_power"] = series(c.ad_partial);
    j["psi"] = psi_list;
    j["mu_eta_product_zero"] = mu_eta_zero;
    return j;
}

nlohmann::ordered_json to_json(const Algebra& alg, const Classification& c) {
    nlohmann::ordered_json j;
    j["degree"] = c.degree;
    j["stages"] = c.stages;
    j["coefficients"] = to_json(alg, c.coeffs);
    j["residual_zero"] = c.residual_zero;
    std::size_t nonzero = 0;
    nlohmann::ordered_json sample = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.residual.dim(); ++i) {
        if (c.residual.images[i].is_zero()) continue;
        if (++nonzero <= 3) {
            sample.push_back({{"x", print_field(alg, c.residual.domain->field(i))},
                              {"image", print_field(alg, c.residual.images[i])}});
        }
    }
    j["residual_nonzero_images"] = nonzero;
    j["residual_sample"] = sample;
    return j;
}

LinearMapOnBasis map_from_json(const Algebra& alg, const nlohmann::json& spec) {
    const std::string dom = spec.value("domain", std::string("N"));
    const auto kind = parse_space_kind(dom);
    if (!kind || (*kind != SpaceKind::N && *kind != SpaceKind::H_even)) {
        throw std::invalid_argument("map domain must be N or Heven, got '" + dom + "'");
    }
    const BasisPtr domain = std::make_shared<SubspaceBasis>(build_space(alg, *kind));
    LinearMapOnBasis out;
    if (spec.contains("images")) {
        out = zero_map(domain, spec.value("label", std::string("map")));
        const auto& f = alg.field();
        for (const auto& entry : spec.at("images")) {
            const Element x = parse_element(alg, entry.at("x").get<std::string>());
            const Element y = parse_element(alg, entry.at("image").get<std::string>());
            if (!x.is_field || !y.is_field) throw std::invalid_argument("map entries must be vector fields");
            const auto coords = domain->coords(x.field.terms, f);
            if (!coords || coords->size() != 1) {
                throw std::invalid_argument("'" + entry.at("x").get<std::string>() + "' is not a multiple of one domain basis vector");
            }
            const auto& e = coords->front();
            out.images[e.index] = add(alg, out.images[e.index], scale(alg, f.inv(e.value), y.field));
        }
    } else if (spec.contains("combination")) {
        const auto& c = spec.at("combination");
        FamilyCoefficients coeffs;
        if (c.contains("inner")) {
            const Element e = parse_element(alg, c.at("inner").get<std::string>());
            if (!e.is_field) throw std::invalid_argument("inner part must be a vector field");
            coeffs.inner = e.field;
        }
        const auto p = static_cast<std::int64_t>(alg.params().p);
        auto residue = [p](std::int64_t v) { return static_cast<Scalar>(((v % p) + p) % p); };
        coeffs.lambda_prime = residue(c.value("lambda_prime", std::int64_t{0}));
        coeffs.lambda = residue(c.value("lambda", std::int64_t{0}));
        for (const auto& fam : c.value("families", nlohmann::json::array())) {
            const std::string name = fam.at("kind").get<std::string>();
            const auto kindf = parse_family(name);
            if (!kindf) throw std::invalid_argument("unknown family '" + name + "'");
            const int r = fam.value("index", 1) - 1;
            const int q = fam.value("q", 1);
            const Scalar v = residue(fam.value("coeff", std::int64_t{1}));
            switch (*kindf) {
                case FamilyKind::Phi: coeffs.phi[{r, q}] = alg.field().add(coeffs.phi[{r, q}], v); break;
                case FamilyKind::Theta: coeffs.theta[{r, q}] = alg.field().add(coeffs.theta[{r, q}], v); break;
                case FamilyKind::AdPartialPower:
                    coeffs.ad_partial[{r, q}] = alg.field().add(coeffs.ad_partial[{r, q}], v);
                    break;
                case FamilyKind::Psi: coeffs.psi[r] = alg.field().add(coeffs.psi[r], v); break;
                case FamilyKind::AdGammaPrime: coeffs.lambda_prime = alg.field().add(coeffs.lambda_prime, v); break;
                case FamilyKind::GammaLambda: coeffs.lambda = alg.field().add(coeffs.lambda, v); break;
            }
        }
        out = assemble(alg, domain, coeffs);
        out.label = spec.value("label", std::string("map"));
    } else {
        throw std::invalid_argument("map description needs 'images' or 'combination'");
    }
    if (spec.contains("degree")) {
        out.zdeg = spec.at("degree").get<int>();
    } else {
        const auto parts = graded_components(alg, out);
        out.zdeg = parts.size() <= 1 ? std::optional<int>(parts.empty() ? 0 : parts.begin()->first) : std::nullopt;
    }
    return out;
}

VectorField random_combination(const Algebra& alg, const SubspaceBasis& basis, std::mt19937_64& rng, int terms) {
    VectorField v;
    if (basis.dim() == 0) return v;
    const std::uint32_t p = alg.params().p;
    for (int k = 0; k < terms; ++k) {
        const std::size_t j = static_cast<std::size_t>(rng() % basis.dim());
        const Scalar c = 1 + static_cast<Scalar>(rng() % (p - 1));
        v = add(alg, v, scale(alg, c, basis.field(j)));
    }
    return v;
}

}  // namespace hamder
