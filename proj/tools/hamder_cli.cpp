#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hamder/expr.hpp"
#include "hamder/verify.hpp"

using namespace hamder;
using nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, check_failed = 2, usage = 3, budget = 4 };

struct Options {
    std::uint32_t p = 5;
    int m = 2;
    int n = 4;
    std::vector<int> t;
    std::string mode = "strict";
    std::uint64_t seed = 0xC0FFEE;
    std::size_t samples = 1000000;
    int cap = 6;
    std::size_t budget = 4000000;
    std::string out;
    std::string format = "json";
    bool timing = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Params to_params(const Options& o) {
    if (o.mode != "strict" && o.mode != "relaxed") throw UsageError("mode must be strict or relaxed");
    Params params;
    params.p = o.p;
    params.m = o.m;
    params.n = o.n;
    params.t = o.t.empty() ? std::vector<int>(static_cast<std::size_t>(std::max(0, 2 * o.m)), 1) : o.t;
    params.relaxed = o.mode == "relaxed";
    validate(params);
    return params;
}

CheckPolicy to_policy(const Options& o) {
    CheckPolicy policy;
    policy.seed = o.seed;
    policy.samples = o.samples;
    policy.cap = o.cap;
    policy.budget = o.budget;
    policy.timing = o.timing;
    return policy;
}

void emit(const Options& o, const std::string& json_text, const std::string& plain) {
    const std::string& body = o.format == "text" ? plain : json_text;
    if (o.out.empty()) {
        std::cout << body << (body.ends_with('\n') ? "" : "\n");
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + o.out);
    file << body << (body.ends_with('\n') ? "" : "\n");
    if (!file) throw std::runtime_error("cannot write output file " + o.out);
}

ordered_json params_json(const Params& p) {
    return {{"p", p.p}, {"m", p.m}, {"n", p.n}, {"t", p.t}, {"mode", p.relaxed ? "relaxed" : "strict"}};
}

int cmd_info(const Options& o) {
    const Params params = to_params(o);
    const Algebra alg(params);
    const auto d = space_dims(alg);
    ordered_json j;
    j["params"] = params_json(params);
    j["dims"] = {{"O", d.o}, {"W", d.w}, {"Weven", d.w_even}, {"H", d.h}, {"Heven", d.h_even}, {"N", d.n}, {"G", d.g}};
    j["pi_total"] = params.pi_total();
    j["xi"] = params.xi();
    j["hypotheses_satisfied"] = satisfies_hypotheses(params);
    std::string text = describe(params) + "\n";
    for (const auto& [k, v] : j["dims"].items()) text += "  dim " + k + " = " + v.dump() + "\n";
    emit(o, j.dump(2), text);
    return ok;
}

ordered_json element_json(const Algebra& alg, const Element& e) {
    ordered_json j;
    j["kind"] = e.is_field ? "field" : "poly";
    j["canonical"] = print_element(alg, e);
    const Grade z = e.is_field ? field_zdeg(alg, e.field) : zdeg(alg, e.poly);
    const Grade par = e.is_field ? field_parity(alg, e.field) : parity(alg, e.poly);
    j["zdeg"] = z ? ordered_json(*z) : ordered_json(nullptr);
    j["parity"] = par ? ordered_json(*par) : ordered_json(nullptr);
    return j;
}

int cmd_eval(const Options& o, const std::string& expr) {
    const Algebra alg(to_params(o));
    const Element e = parse_element(alg, expr);
    ordered_json j = element_json(alg, e);
    j["input"] = expr;
    emit(o, j.dump(2), print_element(alg, e));
    return ok;
}

int cmd_bracket(const Options& o, const std::string& a, const std::string& b) {
    const Algebra alg(to_params(o));
    const Element x = parse_element(alg, a);
    const Element y = parse_element(alg, b);
    if (!x.is_field || !y.is_field) throw UsageError("bracket operands must be vector fields");
    const Element r{true, {}, bracket(alg, x.field, y.field)};
    ordered_json j;
    j["a"] = print_element(alg, x);
    j["b"] = print_element(alg, y);
    j["bracket"] = element_json(alg, r);
    emit(o, j.dump(2), print_element(alg, r));
    return ok;
}

int cmd_verify(const Options& o, const std::string& which, bool include_oracle) {
    const Params params = to_params(o);
    const CheckPolicy policy = to_policy(o);
    std::vector<CheckId> ids;
    std::vector<std::string> skipped;
    if (which == "all") {
        for (const auto id : all_check_ids()) {
            if (is_oracle_check(id) && !include_oracle) continue;
            if (const auto why = applicability(id, params); !why.empty()) {
                skipped.push_back(to_string(id) + ": " + why);
                continue;
            }
            ids.push_back(id);
        }
    } else {
        const auto id = parse_check_id(which);
        if (!id) throw UsageError("unknown check id '" + which + "'");
        ids.push_back(*id);
    }
    ordered_json reports = ordered_json::array();
    std::string text;
    int code = ok;
    for (const auto id : ids) {
        const Report r = run_check(id, params, policy);
        reports.push_back(to_json(r));
        text += to_text(r);
        if (r.budget_exhausted) code = budget;
        else if (r.status == Status::fail && code == ok) code = check_failed;
    }
    for (const auto& s : skipped) text += "skipped " + s + "\n";
    if (which == "all") {
        ordered_json j;
        j["reports"] = reports;
        j["skipped"] = skipped;
        emit(o, j.dump(2), text);
    } else {
        emit(o, reports.front().dump(2), text);
    }
    return code;
}

int cmd_derspace(const Options& o, int degree, const std::string& domain_name, const std::string& codomain_name) {
    const Params params = to_params(o);
    const Algebra alg(params);
    const auto dom = parse_space_kind(domain_name);
    if (!dom || (*dom != SpaceKind::N && *dom != SpaceKind::H_even)) throw UsageError("domain must be N or Heven");
    const auto cod = parse_space_kind(codomain_name);
    if (!cod || (*cod != SpaceKind::W_even && *cod != SpaceKind::W)) throw UsageError("codomain must be Weven or W");
    const BasisPtr domain = std::make_shared<SubspaceBasis>(build_space(alg, *dom));
    const auto codomain = build_space(alg, *cod);
    ordered_json j;
    j["params"] = params_json(params);
    j["degree"] = degree;
    j["domain"] = domain_name;
    j["codomain"] = codomain_name;
    try {
        const auto ders = der_space_homogeneous(alg, domain, codomain, degree, o.budget);
        j["dim"] = ders.size();
        ordered_json maps = ordered_json::array();
        for (const auto& d : ders) {
            ordered_json images = ordered_json::array();
            for (std::size_t i = 0; i < d.dim(); ++i) {
                if (d.images[i].is_zero()) continue;
                images.push_back({{"x", print_field(alg, domain->field(i))}, {"image", print_field(alg, d.images[i])}});
            }
            maps.push_back({{"domain", domain_name}, {"degree", degree}, {"images", images}});
        }
        j["maps"] = maps;
        emit(o, j.dump(2), "dim Der_[" + std::to_string(degree) + "](" + domain_name + ", " + codomain_name +
                               ") = " + std::to_string(ders.size()));
        return ok;
    } catch (const BudgetExceeded& e) {
        j["budget_exhausted"] = true;
        j["error"] = e.what();
        j["partial_progress"] = e.partial();
        emit(o, j.dump(2), std::string("budget exhausted: ") + e.what());
        return budget;
    }
}

int cmd_classify(const Options& o, const std::string& path) {
    const Params params = to_params(o);
    const Algebra alg(params);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read map file " + path);
    nlohmann::json spec;
    try {
        spec = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed map file: ") + e.what());
    }
    const LinearMapOnBasis d = map_from_json(alg, spec);
    DerivationPolicy policy;
    policy.mode = DerivationPolicy::Mode::structured;
    policy.seed = o.seed;
    policy.samples = o.samples;
    policy.cap = o.cap;
    for (const auto which : {GeneratorSet::M, GeneratorSet::Nset, GeneratorSet::N0}) {
        for (auto& g : generators(alg, which)) policy.generators.push_back(std::move(g));
    }
    const auto check = is_derivation(alg, d, policy);
    ordered_json j;
    j["params"] = params_json(params);
    j["derivation"] = check.pass;
    if (!check.pass) {
        if (check.failure) {
            j["counterexample"] = {{"x", print_field(alg, check.failure->x)},
                                   {"y", print_field(alg, check.failure->y)},
                                   {"defect", print_field(alg, check.failure->defect)}};
        }
        emit(o, j.dump(2), "not a derivation");
        return check_failed;
    }
    const Classification c = classify_derivation(alg, d);
    j["classification"] = to_json(alg, c);
    emit(o, j.dump(2), j["classification"].dump(2));
    return c.residual_zero ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derivations of Hamiltonian Lie superalgebras into generalized Witt superalgebras"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file");
    Options o;
    app.add_option("--p", o.p, "field characteristic")->capture_default_str();
    app.add_option("--m", o.m, "half the number of even variables")->capture_default_str();
    app.add_option("--n", o.n, "number of exterior variables")->capture_default_str();
    app.add_option("--t", o.t, "truncation heights t_1,...,t_2m (default all 1)")->delimiter(',');
    app.add_option("--mode", o.mode, "strict or relaxed")->capture_default_str();
    app.add_option("--seed", o.seed, "random seed")->capture_default_str();
    app.add_option("--samples", o.samples, "sampled pairs per check")->capture_default_str();
    app.add_option("--cap", o.cap, "degree cap for exhaustive pairs")->capture_default_str();
    app.add_option("--budget", o.budget, "size budget for closures and derivation spaces")->capture_default_str();
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_flag("--timing", o.timing, "record elapsed time in reports");

    auto* info_cmd = app.add_subcommand("info", "dimensions of the spaces");
    std::string expr, expr2, which, map_path, domain = "N", codomain = "Weven";
    int degree = 0;
    bool include_oracle = false;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate and print an expression canonically");
    eval_cmd->add_option("expr", expr)->required();
    auto* bracket_cmd = app.add_subcommand("bracket", "bracket of two vector fields");
    bracket_cmd->add_option("a", expr)->required();
    bracket_cmd->add_option("b", expr2)->required();
    auto* verify_cmd = app.add_subcommand("verify", "run a named check or all of them");
    verify_cmd->add_option("check", which, "check id or 'all'")->required();
    verify_cmd->add_flag("--include-oracle", include_oracle, "let 'all' include oracle checks");
    auto* der_cmd = app.add_subcommand("derspace", "basis of homogeneous derivations");
    der_cmd->add_option("--degree", degree)->required();
    der_cmd->add_option("--domain", domain)->capture_default_str();
    der_cmd->add_option("--codomain", codomain)->capture_default_str();
    auto* classify_cmd = app.add_subcommand("classify", "classify a derivation given as a JSON map");
    classify_cmd->add_option("--map", map_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    try {
        if (*info_cmd) return cmd_info(o);
        if (*eval_cmd) return cmd_eval(o, expr);
        if (*bracket_cmd) return cmd_bracket(o, expr, expr2);
        if (*verify_cmd) return cmd_verify(o, which, include_oracle);
        if (*der_cmd) return cmd_derspace(o, degree, domain, codomain);
        if (*classify_cmd) return cmd_classify(o, map_path);
    } catch (const ParamError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return usage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const NotApplicable& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return usage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return budget;
    } catch (const MatchError& e) {
        std::cerr << "classification failed: " << e.what() << "\n";
        return check_failed;
    } catch (const CorrectionFailed& e) {
        std::cerr << "classification failed: " << e.what() << "\n";
        return check_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
