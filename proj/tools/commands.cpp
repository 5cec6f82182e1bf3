#include "commands.hpp"

#include "scene.hpp"

#include "qsot/bayes.hpp"
#include "qsot/broadcast.hpp"
#include "qsot/dynamics.hpp"
#include "qsot/random.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace qsot::cli {

namespace {

struct Options {
    double tol = kDefaultTol;
    std::uint64_t seed = 20240601;
    std::size_t trials = 100;
    std::string report = "text";
    std::string scene_path;
};

class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    void check(const std::string& name, double deviation, double tol) {
        add(name, deviation <= tol, deviation, tol);
    }
    void add(const std::string& name, bool pass, double deviation, double tol) {
        pass_ = pass_ && pass;
        Json c = Json::object();
        c["name"] = name;
        c["pass"] = pass;
        c["deviation"] = deviation;
        c["tolerance"] = tol;
        checks_.push_back(std::move(c));
    }
    Json& data() { return data_; }
    bool pass() const { return pass_; }

    void emit(std::ostream& out, const std::string& format) const {
        if (format == "structured") {
            Json doc = Json::object();
            doc["command"] = command_;
            doc["pass"] = pass_;
            doc["checks"] = checks_;
            doc["data"] = data_;
            out << doc.dump(2) << '\n';
            return;
        }
        out << "command: " << command_ << '\n';
        for (const auto& c : checks_) {
            out << "  " << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  " << c["name"].get<std::string>()
                << "  deviation=" << std::setprecision(3) << std::scientific << c["deviation"].get<double>()
                << "  tol=" << c["tolerance"].get<double>() << std::defaultfloat << '\n';
        }
        for (const auto& [k, v] : data_.items()) out << "  " << k << ": " << v.dump() << '\n';
        out << "result: " << (pass_ ? "PASS" : "FAIL") << '\n';
    }

private:
    std::string command_;
    bool pass_ = true;
    Json checks_ = Json::array();
    Json data_ = Json::object();
};

Json element_json(const AlgebraElement& a) {
    Json blocks = Json::array();
    for (const auto& b : a.blocks()) blocks.push_back(emit_matrix(b));
    return blocks;
}

Json shapes_json(const std::vector<AlgebraShape>& shapes) {
    Json out = Json::array();
    for (const auto& s : shapes) out.push_back(s.blocks());
    return out;
}

std::vector<StarIsomorphism> named_isos(const Scene& scene, const std::vector<std::string>& names) {
    std::vector<StarIsomorphism> out;
    for (const auto& n : names) out.push_back(scene.iso(n));
    return out;
}

std::vector<StarIsomorphism> random_isos(const std::vector<AlgebraShape>& shapes, Rng& rng) {
    std::vector<StarIsomorphism> out;
    for (const auto& s : shapes) out.push_back(random_iso(s, rng()));
    return out;
}

// ---------------------------------------------------------------------------

void cmd_star(const Scene& scene, const std::string& chain_name, const std::string& state_name, const Options& o,
              Report& r) {
    const auto s = star(scene.chain(chain_name), scene.state(state_name), o.tol);
    r.check("self_adjoint", s.value.flat().hermiticity_deviation(), o.tol);
    r.check("unit_trace", std::abs(s.value.flat().trace() - 1.0), o.tol);
    r.data()["factors"] = shapes_json(s.value.factors());
    r.data()["blocks"] = element_json(s.value.flat());
}

void cmd_marginals(const Scene& scene, const std::string& chain_name, const std::string& state_name,
                   const Options& o, Report& r) {
    const auto s = star(scene.chain(chain_name), scene.state(state_name), o.tol);
    const auto rep = verify_marginals(s, o.tol);
    for (std::size_t i = 0; i < rep.deviations.size(); ++i)
        r.check("marginal_" + std::to_string(i), rep.deviations[i], o.tol);
}

void cmd_spectrum(const Scene& scene, const std::string& chain_name, const std::string& state_name,
                  const Options& o, Report& r) {
    const auto s = star(scene.chain(chain_name), scene.state(state_name), o.tol);
    const auto rep = spectrum_report(s, o.tol);
    r.check("unit_trace", std::abs(rep.trace - 1.0), o.tol);
    r.data()["eigenvalues"] = rep.eigenvalues;
    r.data()["min_eigenvalue"] = rep.min_eigenvalue;
    r.data()["negative_count"] = rep.negative_count;
}

void cmd_propagator(const Scene& scene, const std::string& chain_name, const std::string& state_name,
                    const Options& o, Report& r) {
    const Chain chain = scene.chain(chain_name);
    if (chain.length() < 2) throw InputError("/chains/" + chain_name, "propagator needs a chain of length >= 2");
    const auto rep = verify_propagator(chain, scene.state(state_name), o.tol);
    r.check("propagator", rep.deviation, o.tol);
    r.check("recursive_form", rep.recursive_deviation, o.tol);
}

void cmd_broadcast_axioms(const std::vector<std::size_t>& dims, const Options& o, Report& r) {
    for (std::size_t d : dims) {
        if (d == 0) throw InputError("--dim", "dimension must be positive");
        const std::string tag = "d" + std::to_string(d) + "_";
        const auto rep = check_broadcast_axioms(d, o.trials, o.seed + d, o.tol);
        r.check(tag + "covariance", rep.covariance_deviation, o.tol);
        r.check(tag + "permutation_invariance", rep.permutation_deviation, o.tol);
        r.check(tag + "classical_consistency", rep.classical_deviation, o.tol);
        const AlgebraShape s = AlgebraShape::matrix_algebra(d);
        const auto map = broadcast_map(s);
        r.check(tag + "trace_preserving", is_tp(map, o.tol).deviation, o.tol);
        r.check(tag + "hermitian_preserving", is_hp(map, o.tol).deviation, o.tol);
        const auto cptp = is_cptp(map, o.tol);
        r.data()[tag + "min_choi_eigenvalue"] = cptp.min_choi_eigenvalue;
        r.data()[tag + "completely_positive"] = cptp.cp;
    }
}

void cmd_parenthesization(const Scene& scene, const std::string& chain_name, const Options& o, Report& r) {
    const Chain chain = scene.chain(chain_name);
    const auto reference = bloom_chain_recursive(chain);
    const auto trees = all_trees(chain.length());
    Json per_tree = Json::object();
    double worst = 0.0;
    for (const auto& t : trees) {
        const double d = max_abs_diff(bloom_tree(chain, *t), reference);
        per_tree[t->to_string()] = d;
        worst = std::max(worst, d);
    }
    r.check("closed_vs_recursive", max_abs_diff(bloom_chain_closed(chain), reference), o.tol);
    r.check("all_trees_vs_recursive", worst, o.tol);
    r.add("tree_count", trees.size() == catalan(chain.length()), 0.0, 0.0);
    r.data()["trees"] = std::move(per_tree);
}

void cmd_covariance(const Scene& scene, const std::string& chain_name, const std::string& state_name,
                    const std::vector<std::string>& iso_names, bool ladder, const Options& o, Report& r) {
    const Chain chain = scene.chain(chain_name);
    const AlgebraElement& rho = scene.state(state_name);
    auto record = [&](const ChainCovarianceReport& rep, double& state, double& map, double& lad) {
        state = std::max(state, rep.state_deviation);
        map = std::max(map, rep.map_deviation);
        lad = std::max(lad, rep.ladder_deviation);
    };
    double state = 0.0, map = 0.0, lad = -1.0;
    if (!iso_names.empty()) {
        if (iso_names.size() != chain.length() + 1)
            throw InputError("--isos", "need " + std::to_string(chain.length() + 1) + " isomorphisms");
        std::vector<StarIsomorphism> isos;
        try {
            isos = named_isos(scene, iso_names);
            conjugate_chain(chain, isos);
        } catch (const std::invalid_argument& e) {
            throw InputError("--isos", e.what());
        }
        record(check_chain_covariance(chain, isos, rho, o.tol, ladder), state, map, lad);
        r.data()["instances"] = 1;
    } else {
        Rng rng(o.seed);
        for (std::size_t t = 0; t < o.trials; ++t)
            record(check_chain_covariance(chain, random_isos(chain.algebras(), rng), rho, o.tol, ladder), state, map,
                   lad);
        r.data()["instances"] = o.trials;
    }
    r.check("state_over_time", state, o.tol);
    r.check("bloom_map", map, o.tol);
    if (ladder) r.check("ladder", lad, o.tol);
}

void cmd_bayes(const Scene& scene, const std::string& channel_name, const std::string& state_name, const Options& o,
               Report& r) {
    const auto& e = scene.channel(channel_name);
    const auto& rho = scene.state(state_name);
    if (!(rho.shape() == e.source())) throw InputError("--state", "state does not live on the channel's source");
    const auto sol = solve_bayes(e, rho, o.tol);
    r.check("residual", sol.residual, o.tol);
    r.check("bayes_rule", verify_bayes(e, rho, sol.inverse, o.tol).deviation, o.tol);
    r.data()["exists"] = sol.exists;
    r.data()["degeneracy"] = sol.degeneracy;
    r.data()["tp_deviation"] = sol.tp_deviation;
    r.data()["hp_deviation"] = sol.hp_deviation;
    r.data()["completely_positive"] = sol.cp;
    r.data()["min_choi_eigenvalue"] = sol.min_choi_eigenvalue;
    r.data()["inverse"] = emit_matrix(sol.inverse.matrix());
    if (e.source().is_classical() && e.target().is_classical()) {
        // Posterior P(x|y) in column y.
        Json post = Json::array();
        for (Eigen::Index x = 0; x < sol.inverse.matrix().rows(); ++x) {
            Json row = Json::array();
            for (Eigen::Index y = 0; y < sol.inverse.matrix().cols(); ++y) row.push_back(sol.inverse.matrix()(x, y).real());
            post.push_back(std::move(row));
        }
        r.data()["posterior"] = std::move(post);
    }
}

void cmd_bayes_covariance(const Scene& scene, const std::string& channel_name, const std::string& state_name,
                          const std::vector<std::string>& iso_names, const Options& o, Report& r) {
    const auto& e = scene.channel(channel_name);
    const auto& rho = scene.state(state_name);
    if (!(rho.shape() == e.source())) throw InputError("--state", "state does not live on the channel's source");
    const auto sol = solve_bayes(e, rho, o.tol);
    r.check("residual", sol.residual, o.tol);
    double cov = 0.0, swap = 0.0;
    bool vacuous = false;
    auto run_pair = [&](const StarIsomorphism& phi, const StarIsomorphism& psi) {
        const auto rep = check_bayes_covariance(e, rho, sol.inverse, phi, psi, o.tol);
        vacuous = vacuous || rep.vacuous;
        cov = std::max(cov, rep.deviation);
        swap = std::max(swap, swap_lemma_deviation(phi, psi));
    };
    if (!iso_names.empty()) {
        if (iso_names.size() != 2) throw InputError("--isos", "need exactly two isomorphisms (source, target)");
        const auto& phi = scene.iso(iso_names[0]);
        const auto& psi = scene.iso(iso_names[1]);
        if (!(phi.source() == e.source()) || !(psi.source() == e.target()))
            throw InputError("--isos", "isomorphisms must start at the channel's source and target");
        run_pair(phi, psi);
        r.data()["instances"] = 1;
    } else {
        Rng rng(o.seed);
        for (std::size_t t = 0; t < o.trials; ++t) run_pair(random_iso(e.source(), rng()), random_iso(e.target(), rng()));
        r.data()["instances"] = o.trials;
    }
    r.add("precondition", !vacuous, 0.0, o.tol);
    r.check("bayes_covariance", cov, o.tol);
    r.check("swap_lemma", swap, o.tol);
}

void cmd_lvn(const Scene& scene, const std::string& ham_name, const std::string& state_name,
             const std::vector<double>& durations, const std::string& iso_name, const Options& o, Report& r) {
    const auto& h = scene.hamiltonian(ham_name);
    const auto& rho = scene.state(state_name);
    if (!(rho.shape() == h.shape())) throw InputError("--state", "state and Hamiltonian live on different algebras");
    if (durations.empty()) throw InputError("--durations", "need at least one step");
    AlgebraElement u = random_unitary(h.shape(), o.seed);
    if (!iso_name.empty()) {
        const auto& phi = scene.iso(iso_name);
        if (phi.permutes_blocks() || !(phi.source() == h.shape()))
            throw InputError("--unitary", "expected a block-preserving isomorphism on the Hamiltonian's algebra");
        u = AlgebraElement(h.shape(), phi.unitaries());
    }
    const Chain chain = unitary_chain(h, durations, o.tol);
    double total = 0.0;
    for (double t : durations) total += t;
    const auto s = star(chain, rho, o.tol);
    const auto v = evolution_operator(h, total, o.tol);
    const auto expected = multiply(multiply(v, rho), v.dagger());
    r.check("composite_evolution", max_abs_diff(marginal(s, chain.length()), expected), o.tol);
    r.check("chain_cptp", chain.is_cptp(o.tol).holds ? 0.0 : 1.0, o.tol);

    const auto h_prime = transform_hamiltonian(h, u, o.tol);
    const Chain primed = unitary_chain(h_prime, durations, o.tol);
    const std::vector<StarIsomorphism> isos(chain.length() + 1, StarIsomorphism::conjugation(u, o.tol));
    const Chain conjugated = conjugate_chain(chain, isos);
    double chain_dev = 0.0;
    for (std::size_t k = 0; k < chain.length(); ++k)
        chain_dev = std::max(chain_dev, max_abs_diff(primed[k], conjugated[k]));
    r.check("transformed_hamiltonian_chain", chain_dev, o.tol);
    const auto lhs = apply_iso(isos, s.value);
    const auto rhs = star(primed, apply_iso(isos[0], rho), o.tol).value;
    r.check("covariance", max_abs_diff(lhs, rhs), o.tol);
    r.data()["min_eigenvalue"] = spectrum_report(s, o.tol).min_eigenvalue;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum states over time: construction and verification", "qsot"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_option("--tol", o.tol, "Absolute tolerance for every check")->capture_default_str();
    app.add_option("--seed", o.seed, "Seed for random trials")->capture_default_str();
    app.add_option("--trials", o.trials, "Number of random trials")->capture_default_str();
    app.add_option("--report", o.report, "Report format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();

    std::string chain_name, state_name, channel_name, ham_name, iso_name;
    std::vector<std::string> iso_names;
    std::vector<std::size_t> dims{2};
    std::vector<double> durations;
    bool ladder = false;

    auto scene_cmd = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("scene", o.scene_path, "Scene file (JSON)")->required();
        return sub;
    };
    auto chain_state = [&](CLI::App* sub) {
        sub->add_option("--chain", chain_name, "Chain name")->required();
        sub->add_option("--state", state_name, "Initial state name")->required();
        return sub;
    };

    auto* star_cmd = chain_state(scene_cmd("star", "State over time of a chain and an initial state"));
    auto* marg_cmd = chain_state(scene_cmd("marginals", "Check every marginal of the state over time"));
    auto* spec_cmd = chain_state(scene_cmd("spectrum", "Eigenvalues of the state over time"));
    auto* prop_cmd = chain_state(scene_cmd("propagator", "Check the one-step propagation identity"));
    auto* axioms_cmd = app.add_subcommand("broadcast-axioms", "Check the broadcasting axioms on M_d");
    axioms_cmd->add_option("--dim", dims, "Matrix dimensions")->capture_default_str();
    auto* paren_cmd = scene_cmd("parenthesization", "Compare blooms over every parenthesization");
    paren_cmd->add_option("--chain", chain_name, "Chain name")->required();
    auto* cov_cmd = chain_state(scene_cmd("covariance", "Check covariance of the state over time"));
    cov_cmd->add_option("--isos", iso_names, "One isomorphism per algebra (default: random trials)")->delimiter(',');
    cov_cmd->add_flag("--ladder", ladder, "Also check the intermediate bloom identities");
    auto* bayes_cmd = scene_cmd("bayes", "Solve for a Bayesian inverse");
    bayes_cmd->add_option("--channel", channel_name, "Channel name")->required();
    bayes_cmd->add_option("--state", state_name, "Prior state name")->required();
    auto* bcov_cmd = scene_cmd("bayes-covariance", "Check covariance of the Bayes rule");
    bcov_cmd->add_option("--channel", channel_name, "Channel name")->required();
    bcov_cmd->add_option("--state", state_name, "Prior state name")->required();
    bcov_cmd->add_option("--isos", iso_names, "Isomorphisms on source and target (default: random)")->delimiter(',');
    auto* lvn_cmd = scene_cmd("lvn", "Unitary chain from a Hamiltonian and its transformed counterpart");
    lvn_cmd->add_option("--hamiltonian", ham_name, "Hamiltonian name")->required();
    lvn_cmd->add_option("--state", state_name, "Initial state name")->required();
    lvn_cmd->add_option("--durations", durations, "Step durations")->delimiter(',')->required();
    lvn_cmd->add_option("--unitary", iso_name, "Block-preserving isomorphism supplying U (default: random)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInputError;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        Report r(sub->get_name());
        if (sub == axioms_cmd) {
            cmd_broadcast_axioms(dims, o, r);
        } else {
            const Scene scene = load_scene(o.scene_path, o.tol);
            if (sub == star_cmd) cmd_star(scene, chain_name, state_name, o, r);
            else if (sub == marg_cmd) cmd_marginals(scene, chain_name, state_name, o, r);
            else if (sub == spec_cmd) cmd_spectrum(scene, chain_name, state_name, o, r);
            else if (sub == prop_cmd) cmd_propagator(scene, chain_name, state_name, o, r);
            else if (sub == paren_cmd) cmd_parenthesization(scene, chain_name, o, r);
            else if (sub == cov_cmd) cmd_covariance(scene, chain_name, state_name, iso_names, ladder, o, r);
            else if (sub == bayes_cmd) cmd_bayes(scene, channel_name, state_name, o, r);
            else if (sub == bcov_cmd) cmd_bayes_covariance(scene, channel_name, state_name, iso_names, o, r);
            else if (sub == lvn_cmd) cmd_lvn(scene, ham_name, state_name, durations, iso_name, o, r);
        }
        r.emit(out, o.report);
        return r.pass() ? kPass : kCheckFailed;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::out_of_range& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace qsot::cli
