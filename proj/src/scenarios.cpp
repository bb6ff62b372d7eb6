#include "layerscope/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "layerscope/catalog.hpp"
#include "layerscope/errors.hpp"
#include "layerscope/layers.hpp"
#include "layerscope/random.hpp"

namespace layerscope {

bool ScenarioReport::passed() const {
    if (claims.empty()) {
        return false;
    }
    for (const auto &c : claims) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kExactTol = 1e-12;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fixed(double v, int digits = 9) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

class Builder {
  public:
    explicit Builder(std::string id) {
        report_.scenario_id = std::move(id);
    }

    void tolerance(const std::string &name, double value) {
        report_.tolerances.push_back({name, value});
    }

    void at_most(const std::string &what, double value, double bound) {
        report_.claims.push_back({what, "<= " + sci(bound), sci(value), value <= bound});
    }

    void at_least(const std::string &what, double value, double bound) {
        report_.claims.push_back({what, ">= " + sci(bound), sci(value), value >= bound});
    }

    void near(const std::string &what, double value, double target, double tol) {
        report_.claims.push_back(
            {what, fixed(target) + " +/- " + sci(tol), fixed(value), std::abs(value - target) <= tol});
    }

    void equal(const std::string &what, const std::string &expected, const std::string &observed) {
        report_.claims.push_back({what, expected, observed, expected == observed});
    }

    void flag(const std::string &what, bool expected, bool observed) {
        equal(what, std::string(expected ? "true" : "false"), std::string(observed ? "true" : "false"));
    }

    void count(const std::string &what, int observed, int expected) {
        report_.claims.push_back(
            {what, std::to_string(expected), std::to_string(observed), observed == expected});
    }

    ScenarioReport take() {
        return std::move(report_);
    }

  private:
    ScenarioReport report_;
};

double margin_residual(const JointObservable &g, const Observable &a, const Observable &b) {
    auto [ga, gb] = margins(g);
    double worst = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        worst = std::max(worst, max_abs_diff(ga.effect(x), a.effect(x)));
    }
    for (int y = 0; y < b.outcome_count(); ++y) {
        worst = std::max(worst, max_abs_diff(gb.effect(y), b.effect(y)));
    }
    return worst;
}

double povm_violation(const Observable &o) {
    auto diag = validate_povm(o, 1.0);
    return std::max(std::max(0.0, -diag.min_eigenvalue), diag.identity_residual);
}

double pair_broadcast_residual(const BroadcastingChannel &l, const Observable &a, const Observable &b) {
    return std::max(broadcast_residual(l, a), broadcast_residual(l, b));
}

std::string layer_name(const LayerVerdict &v) {
    return to_string(v.strongest_layer);
}

double witness_residual(const LayerVerdict &v, const Observable &a, const Observable &b) {
    return v.broadcaster ? pair_broadcast_residual(*v.broadcaster, a, b) : INFINITY;
}

// Channel dual on every effect.
Observable dual_observable(const Channel &c, const Observable &a) {
    std::vector<HermitianOperator> effects;
    for (const auto &e : a.effects()) {
        effects.push_back(dual_apply(c, e));
    }
    return Observable(std::move(effects));
}

ScenarioReport transitivity(const ScenarioOptions &) {
    Builder r("transitivity");
    r.tolerance("dual identity", kIdentityTol);
    r.tolerance("exact arithmetic", kExactTol);
    const auto t = catalog::transitivity_triple();
    LayerOptions opts;

    auto ab = classify_pair_general(t.a, t.b, {}, opts);
    auto bc = classify_pair_general(t.b, t.c, {}, opts);
    auto ac = classify_pair_general(t.a, t.c, {}, opts);
    r.equal("(A,B) strongest layer", "BROADCASTABLE", layer_name(ab));
    r.at_most("(A,B) common-eigenbasis copier dual residual", witness_residual(ab, t.a, t.b), kIdentityTol);
    r.equal("(B,C) strongest layer", "BROADCASTABLE", layer_name(bc));
    r.at_most("(B,C) common-eigenbasis copier dual residual", witness_residual(bc, t.b, t.c), kIdentityTol);
    r.equal("(A,C) strongest layer", "INCOMPATIBLE", layer_name(ac));
    r.equal("(A,C) decided by", "SHARP_RULE",
            ac.compatibility ? to_string(ac.compatibility->method) : std::string("-"));
    r.equal("(A,C) certainty", "EXACT", to_string(ac.certainty));
    r.flag("A, B mutually commuting", true, mutually_commuting(t.a, t.b, opts.tol));
    r.flag("B, C mutually commuting", true, mutually_commuting(t.b, t.c, opts.tol));
    r.flag("A, C mutually commuting", false, mutually_commuting(t.a, t.c, opts.tol));
    r.near("||[A(1), C(1)]||", spectral_norm(commutator(t.a.effect(0), t.c.effect(0))), 0.5, kExactTol);
    r.equal("(A,A) strongest layer", "BROADCASTABLE", layer_name(classify_pair_general(t.a, t.a, {}, opts)));

    auto report = check_transitivity_triple(t.a, t.b, t.c, opts);
    std::string layers;
    for (Layer l : report.violations) {
        layers += std::string(layers.empty() ? "" : ",") + to_string(l);
    }
    r.equal("layers violating transitivity", "BROADCASTABLE,ONE_SIDE_BROADCASTABLE,MUTUALLY_NONDISTURBING,"
                                             "NONDISTURBING,COMPATIBLE",
            layers);

    const Observable trivial({0.5 * HermitianOperator::identity(2), 0.5 * HermitianOperator::identity(2)});
    auto through_trivial = check_transitivity_triple(catalog::sigma_z(), trivial, catalog::sigma_x(), opts);
    r.count("(sz, trivial, sx) violated layers", static_cast<int>(through_trivial.violations.size()), 5);
    auto same = check_transitivity_triple(catalog::sigma_z(), catalog::sigma_z(), catalog::sigma_z(), opts);
    r.count("(sz, sz, sz) violated layers", static_cast<int>(same.violations.size()), 0);
    return r.take();
}

ScenarioReport example1(const ScenarioOptions &) {
    Builder r("example1");
    r.tolerance("margin identity", kExactTol);
    r.tolerance("POVM validation", kExactTol);
    const auto g = catalog::example1_joint();
    const double lambda = 1.0 / std::sqrt(2.0);
    const Observable a = unsharp(catalog::sigma_x(), lambda);
    const Observable b = unsharp(catalog::sigma_y(), lambda);
    LayerOptions opts;

    r.at_most("margins of G vs unsharp sx, sy at 1/sqrt2", margin_residual(g, a, b), kExactTol);
    r.flag("G is a valid POVM", true, validate_povm(g.base(), kExactTol).valid);
    r.flag("G is commutative", false, is_commutative(g.base(), opts.tol));
    auto ic = is_informationally_complete(g.base(), 1e-10);
    r.flag("G informationally complete", false, ic.complete);
    r.count("G operator-span rank", ic.rank, 3);
    auto status = are_compatible(a, b, kDefaultFeasibilityTol);
    r.equal("compatibility of the pair", "FEASIBLE", to_string(status.verdict));
    auto v = classify_qubit_pair(a, b, opts);
    r.equal("qubit classification",
            "WEAKLY_COMPATIBLE", v.strict_stratum ? to_string(*v.strict_stratum) : std::string("-"));
    r.equal("classification certainty", "EXACT", to_string(v.certainty));
    return r.take();
}

ScenarioReport nonconvexity(const ScenarioOptions &) {
    Builder r("nonconvexity");
    r.tolerance("commutator norm", kExactTol);
    const auto p1 = catalog::nonconvex_pair1();
    const auto p2 = catalog::nonconvex_pair2();
    LayerOptions opts;

    auto v1 = classify_qubit_pair(p1.first, p1.second, opts);
    auto v2 = classify_qubit_pair(p2.first, p2.second, opts);
    r.equal("(A1,B1) strongest layer", "BROADCASTABLE", layer_name(v1));
    r.equal("(A2,B2) strongest layer", "BROADCASTABLE", layer_name(v2));

    const auto mid = mixture_pair(p1, p2, 0.5);
    const Observable &ap = mid.first;
    const HermitianOperator expected1 =
        (1.0 / 8.0) * (2.0 * HermitianOperator::identity(2) + pauli_z() + pauli_x());
    const HermitianOperator expected3 =
        (1.0 / 16.0) * (4.0 * HermitianOperator::identity(2) + pauli_z() - pauli_x());
    r.at_most("A'(1) vs (2I + sz + sx)/8", max_abs_diff(ap.effect(0), expected1), kExactTol);
    r.at_most("A'(3) vs (4I + sz - sx)/16", max_abs_diff(ap.effect(2), expected3), kExactTol);
    r.near("||[A'(1), A'(3)]||", spectral_norm(commutator(ap.effect(0), ap.effect(2))), 1.0 / 32.0, kExactTol);
    r.flag("A' commutative", false, is_commutative(ap, opts.tol));
    auto vm = classify_qubit_pair(mid.first, mid.second, opts);
    r.flag("(A',B') broadcastable", false, vm.strongest_layer == Layer::Broadcastable);
    r.flag("(A',B') certified outside BROADCASTABLE", true, excluded_from(vm, Layer::Broadcastable));

    const auto at1 = mixture_pair(p1, p2, 1.0);
    const auto at0 = mixture_pair(p1, p2, 0.0);
    r.flag("lambda = 1 endpoint commutative", true,
            is_commutative(at1.first, opts.tol) && mutually_commuting(at1.first, at1.second, opts.tol));
    r.flag("lambda = 0 endpoint commutative", true,
            is_commutative(at0.first, opts.tol) && mutually_commuting(at0.first, at0.second, opts.tol));
    return r.take();
}

ScenarioReport unsharp_equivalence(const ScenarioOptions &o) {
    Builder r("unsharp-equivalence");
    r.tolerance("dual identity", kIdentityTol);
    Rng rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> outcomes(2, 4);
    LayerOptions opts;

    int forward_ok = 0;
    int converse_ok = 0;
    double worst = 0.0;
    for (int t = 0; t < o.trials; ++t) {
        const ComplexMatrix basis = random_unitary(2, rng);
        const Observable a = random_diagonal_observable(basis, outcomes(rng), rng);
        const Observable b = random_diagonal_observable(basis, outcomes(rng), rng);
        const double p = t == 0 ? 1.0 : 1.0 - unit(rng);
        const double q = t == 0 ? 1.0 : 1.0 - unit(rng);
        const Observable ap = unsharp(a, p);
        const Observable bq = unsharp(b, q);

        auto sharp = classify_pair_general(a, b, {}, opts);
        if (sharp.strongest_layer == Layer::Broadcastable && sharp.broadcaster) {
            const double res = std::max(pair_broadcast_residual(*sharp.broadcaster, a, b),
                                        pair_broadcast_residual(*sharp.broadcaster, ap, bq));
            worst = std::max(worst, res);
            forward_ok += res <= kIdentityTol;
        }
        auto smeared = classify_pair_general(ap, bq, {}, opts);
        if (smeared.strongest_layer == Layer::Broadcastable && smeared.broadcaster) {
            const double res = pair_broadcast_residual(*smeared.broadcaster, a, b);
            worst = std::max(worst, res);
            converse_ok += res <= kIdentityTol;
        }
    }
    r.count("commuting pairs: witness broadcasts (A,B) and (A_p,B_q)", forward_ok, o.trials);
    r.count("commuting pairs: witness for (A_p,B_q) broadcasts (A,B)", converse_ok, o.trials);
    r.at_most("worst dual residual", worst, kIdentityTol);

    int never_broadcast = 0;
    for (int t = 0; t < o.trials; ++t) {
        std::array<double, 3> n1 = random_direction(rng);
        std::array<double, 3> n2 = random_direction(rng);
        while (std::abs(n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2]) > 0.99) {
            n2 = random_direction(rng);
        }
        const Observable ap = unsharp(sharp_spin(n1), 1.0 - unit(rng));
        const Observable bq = unsharp(sharp_spin(n2), 1.0 - unit(rng));
        auto v = classify_qubit_pair(ap, bq, opts);
        never_broadcast += v.strongest_layer != Layer::Broadcastable && excluded_from(v, Layer::Broadcastable);
    }
    r.count("non-commuting pairs: smeared versions certified not broadcastable", never_broadcast, o.trials);
    return r.take();
}

ScenarioReport concatenation(const ScenarioOptions &o) {
    Builder r("concatenation");
    r.tolerance("dual identity", kIdentityTol);
    r.tolerance("Choi identity", kIdentityTol);
    Rng rng(o.seed);
    const int d = 3;
    const ComplexMatrix basis = random_unitary(d, rng);
    const Observable a = random_diagonal_observable(basis, 3, rng);
    const Observable b = random_diagonal_observable(basis, 2, rng);
    const BroadcastingChannel copier = make_broadcaster_from_basis(basis);

    // Broadcasting after a channel that does not disturb A.
    const std::vector<std::pair<std::string, Channel>> thetas = {
        {"identity", Channel::identity(d)},
        {"dephasing", dephasing(basis)},
        {"random Schur channel", random_schur_channel(basis, rng)},
    };
    for (const auto &[name, theta] : thetas) {
        r.at_most("Theta = " + name + ": Theta leaves A undisturbed", nondisturbance_residual(theta, a),
                  kIdentityTol);
        const BroadcastingChannel composed(compose(copier.channel(), theta));
        r.at_most("Theta = " + name + ": Lambda o Theta broadcasts A", broadcast_residual(composed, a),
                  kIdentityTol);
    }

    // (Theta (x) Sigma) o Lambda1 is a one-side broadcaster.
    const Channel theta = random_schur_channel(basis, rng);
    const Channel sigma = random_schur_channel(basis, rng);
    const BroadcastingChannel l2(compose(tensor_channels(theta, sigma), copier.channel()));
    r.at_most("(Theta x Sigma) o Lambda1 broadcasts B", broadcast_residual(l2, b), kIdentityTol);
    r.at_most("(Theta x Sigma) o Lambda1 one-side broadcasts (A, B)", one_side_residual(l2, a, b), kIdentityTol);
    const Channel generic = random_channel(d, d, 2, rng);
    const BroadcastingChannel l2g(compose(tensor_channels(theta, generic), copier.channel()));
    double left = 0.0;
    for (const auto &e : a.effects()) {
        left = std::max(left, max_abs_diff(dual_apply(l2g.channel(), tensor(e, HermitianOperator::identity(d))), e));
    }
    r.at_most("generic Sigma: left output still reproduces A", left, kIdentityTol);

    // Local changeability: Lambda1 = (Sigma1 (x) Sigma2) o Lambda2 with Lambda2
    // the isometry |i> -> |ii> broadcasting B and Lambda1 built directly.
    const ComplexMatrix ones = ComplexMatrix::Ones(d, d);
    const BroadcastingChannel fanout = schur_copier(basis, ones);
    const ComplexMatrix c1 = random_correlation(d, rng);
    const ComplexMatrix c2 = random_correlation(d, rng);
    const Channel sigma1 = schur_channel(basis, c1);
    const Channel sigma2 = schur_channel(basis, c2);
    const BroadcastingChannel lambda1 = schur_copier(basis, c1.cwiseProduct(c2));
    r.at_most("Lambda1 = (Sigma1 x Sigma2) o Lambda2 (Choi)", local_change_residual(lambda1, fanout, sigma1, sigma2),
              kIdentityTol);
    r.at_most("Lambda1 broadcasts A", broadcast_residual(lambda1, a), kIdentityTol);
    r.at_most("Lambda2 broadcasts B", broadcast_residual(fanout, b), kIdentityTol);
    const Observable a_prime = dual_observable(sigma1, a);
    r.at_most("ancilla witness (Lambda2, Sigma1*(A)) for A not disturbing B",
              ancilla_witness_residual(fanout.channel(), a, a_prime, b), kIdentityTol);
    r.at_most("Sigma1*(A) POVM violation", povm_violation(a_prime), kIdentityTol);

    // Local interchangeability through diagonal phase unitaries.
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    ComplexVector ph1(d);
    ComplexVector ph2(d);
    for (int i = 0; i < d; ++i) {
        ph1(i) = std::polar(1.0, angle(rng));
        ph2(i) = std::polar(1.0, angle(rng));
    }
    const ComplexMatrix u1 = basis * ph1.asDiagonal() * basis.adjoint();
    const ComplexMatrix u2 = basis * ph2.asDiagonal() * basis.adjoint();
    const ComplexMatrix phases = (ph1.cwiseProduct(ph2)) * (ph1.cwiseProduct(ph2)).adjoint();
    const BroadcastingChannel lambda_ph = schur_copier(basis, phases);
    r.at_most("Lambda' = (U1 x U2) o Lambda2 (Choi)",
              local_change_residual(lambda_ph, fanout, Channel::unitary(u1), Channel::unitary(u2)), kIdentityTol);
    r.at_most("Lambda2 = (U1^dag x U2^dag) o Lambda' (Choi)",
              local_change_residual(fanout, lambda_ph, Channel::unitary(u1.adjoint()),
                                    Channel::unitary(u2.adjoint())),
              kIdentityTol);
    r.at_most("Lambda' broadcasts A", broadcast_residual(lambda_ph, a), kIdentityTol);
    r.at_most("ancilla witness: A measured without disturbing B",
              ancilla_witness_residual(fanout.channel(), a, dual_observable(Channel::unitary(u1), a), b),
              kIdentityTol);
    r.at_most("ancilla witness: B measured without disturbing A",
              ancilla_witness_residual(lambda_ph.channel(), b, dual_observable(Channel::unitary(u1.adjoint()), b),
                                       a),
              kIdentityTol);
    return r.take();
}

ScenarioReport convexity(const ScenarioOptions &o) {
    Builder r("convexity");
    r.tolerance("dual identity", kIdentityTol);
    Rng rng(o.seed);
    const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    int channel_ok = 0;
    int pair_ok = 0;
    double worst = 0.0;
    for (int t = 0; t < o.trials; ++t) {
        const int d = 2 + t % 2;
        const ComplexMatrix basis = random_unitary(d, rng);
        const Observable a = random_diagonal_observable(basis, 2 + t % 3, rng);
        const Observable b = random_diagonal_observable(basis, 2, rng);
        const BroadcastingChannel l1 = schur_copier(basis, random_correlation(d, rng));
        const BroadcastingChannel l2 = schur_copier(basis, random_correlation(d, rng));
        double ch_res = 0.0;
        for (double p : grid) {
            const BroadcastingChannel mix(mix_channels(l1.channel(), l2.channel(), p));
            ch_res = std::max(ch_res, pair_broadcast_residual(mix, a, b));
        }
        channel_ok += ch_res <= kIdentityTol;

        const ObservablePair pair2{random_diagonal_observable(basis, a.outcome_count(), rng),
                                   random_diagonal_observable(basis, 2, rng)};
        double pair_res = 0.0;
        for (double p : grid) {
            const auto mixed = mixture_pair({a, b}, pair2, p);
            pair_res = std::max(pair_res, pair_broadcast_residual(l1, mixed.first, mixed.second));
        }
        pair_ok += pair_res <= kIdentityTol;
        worst = std::max({worst, ch_res, pair_res});
    }
    r.count("mixed broadcasters still broadcast the pair", channel_ok, o.trials);
    r.count("mixed pairs still broadcast by the common channel", pair_ok, o.trials);
    r.at_most("worst dual residual", worst, kIdentityTol);

    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix xbasis(2, 2);
    xbasis << s, s, s, -s;
    const BroadcastingChannel zx(mix_channels(make_broadcaster_from_basis(ComplexMatrix::Identity(2, 2)).channel(),
                                              make_broadcaster_from_basis(xbasis).channel(), 0.5));
    // The x-copier maps each sz effect to I/2, so the mixture misses by 1/4 entrywise.
    r.near("half z-copier + half x-copier: residual on sz", broadcast_residual(zx, catalog::sigma_z()), 0.25,
           kExactTol);
    return r.take();
}

ScenarioReport degree(const ScenarioOptions &) {
    Builder r("degree");
    r.tolerance("degree", 1e-3);
    r.tolerance("margin residual", 1e-6);
    const double boundary = 1.0 / std::sqrt(2.0);
    DegreeOptions opts;
    auto xy = degree_of_compatibility(catalog::sigma_x(), catalog::sigma_y(), opts);
    auto xz = degree_of_compatibility(catalog::sigma_x(), catalog::sigma_z(), opts);
    r.near("degree(sx, sy)", xy.degree, boundary, 1e-3);
    r.near("degree(sx, sz)", xz.degree, boundary, 1e-3);
    DegreeOptions proj = opts;
    proj.projection_only = true;
    proj.bracket_tol = 1e-4;
    auto xy_proj = degree_of_compatibility(catalog::sigma_x(), catalog::sigma_y(), proj);
    r.near("degree(sx, sy), projection solver only", xy_proj.degree, boundary, 1e-3);
    // Oracle boundary: |a + b| + |a - b| = 2 for a = p x, b = p y gives p = 1/sqrt2.
    const double p = boundary;
    r.near("analytic oracle value at p = 1/sqrt2", qubit_oracle_value({p, 0, 0}, {0, p, 0}), 2.0, kExactTol);
    r.near("degree of a commuting pair", degree_of_compatibility(catalog::sigma_z(), catalog::sigma_z()).degree,
           1.0, 0.0);

    const Observable a = unsharp(catalog::sigma_x(), p);
    const Observable b = unsharp(catalog::sigma_y(), p);
    auto cascade = are_compatible(a, b, kDefaultFeasibilityTol);
    r.equal("cascade at p = 1/sqrt2", "FEASIBLE", to_string(cascade.verdict));
    r.at_most("cascade joint margin residual", cascade.joint ? margin_residual(*cascade.joint, a, b) : INFINITY,
              1e-6);
    r.at_least("cascade joint min eigenvalue",
               cascade.joint ? validate_povm(cascade.joint->base(), 1.0).min_eigenvalue : -INFINITY, -1e-6);
    auto solver = joint_feasibility(a, b, kDefaultFeasibilityTol);
    r.equal("projection solver at p = 1/sqrt2", "FEASIBLE", to_string(solver.verdict));
    r.at_most("projection joint margin residual", solver.joint ? margin_residual(*solver.joint, a, b) : INFINITY,
              1e-6);
    return r.take();
}

ScenarioReport oracle_crosscheck(const ScenarioOptions &o) {
    Builder r("oracle-crosscheck");
    const int pairs = 500;
    const double band = 0.05;
    r.tolerance("feasibility", kDefaultFeasibilityTol);
    r.tolerance("excluded band around the boundary", band);
    r.tolerance("required agreement", 0.99);
    Rng rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int agree = 0;
    int oracle_feasible = 0;
    double worst_margin = 0.0;
    for (int t = 0; t < pairs; ++t) {
        std::array<double, 3> a{};
        std::array<double, 3> b{};
        double value = 2.0;
        while (std::abs(value - 2.0) <= band) {
            const auto na = random_direction(rng);
            const auto nb = random_direction(rng);
            const double ra = std::sqrt(unit(rng));
            const double rb = std::sqrt(unit(rng));
            a = {ra * na[0], ra * na[1], ra * na[2]};
            b = {rb * nb[0], rb * nb[1], rb * nb[2]};
            value = qubit_oracle_value(a, b);
        }
        const Observable oa = binary_qubit_observable(a);
        const Observable ob = binary_qubit_observable(b);
        auto oracle = qubit_binary_oracle(oa, ob, kDefaultFeasibilityTol);
        auto solver = joint_feasibility(oa, ob, kDefaultFeasibilityTol, kDefaultMaxIter);
        const bool of = oracle.verdict == Feasibility::Feasible;
        const bool sf = solver.verdict == Feasibility::Feasible;
        agree += of == sf;
        oracle_feasible += of;
        if (sf && solver.joint) {
            worst_margin = std::max(worst_margin, margin_residual(*solver.joint, oa, ob));
        }
    }
    r.at_least("verdict agreement ratio", double(agree) / pairs, 0.99);
    r.at_least("oracle-feasible pairs sampled", oracle_feasible, 1);
    r.at_most("solver joint margin residual", worst_margin, 1e-6);
    return r.take();
}

ScenarioReport core_invariants(const ScenarioOptions &o) {
    Builder r("core-invariants");
    r.tolerance("identity residual", kIdentityTol);
    Rng rng(o.seed);
    const int instances = 100;
    double cp = 0.0;
    double tp = 0.0;
    double duality = 0.0;
    double reversal = 0.0;
    double kraus = 0.0;
    double ptrace = 0.0;
    double tensor_apply = 0.0;
    for (int t = 0; t < instances; ++t) {
        const int din = 2 + t % 2;
        const int dout = 2 + (t / 2) % 2;
        const int dmid = 2 + (t / 4) % 2;
        const Channel c1 = random_channel(din, dmid, 2 + t % 2, rng);
        const Channel c2 = random_channel(dmid, dout, 2 + (t + 1) % 2, rng);
        auto res = cptp_residual(c1.choi(), din, dmid);
        cp = std::max(cp, -res.min_eigenvalue);
        tp = std::max(tp, res.trace_residual);

        const HermitianOperator rho = random_state(din, rng);
        const HermitianOperator e = random_hermitian(dmid, rng);
        const double lhs = (apply(c1, rho).matrix() * e.matrix()).trace().real();
        const double rhs = (rho.matrix() * dual_apply(c1, e).matrix()).trace().real();
        duality = std::max(duality, std::abs(lhs - rhs));

        const HermitianOperator f = random_hermitian(dout, rng);
        reversal = std::max(reversal, max_abs_diff(dual_apply(compose(c2, c1), f), dual_apply(c1, dual_apply(c2, f))));

        // Kraus route against the Choi route.
        const ComplexMatrix u = random_unitary(din, rng);
        ComplexMatrix direct = u * rho.matrix() * u.adjoint();
        kraus = std::max(kraus, max_abs_diff(apply(Channel::unitary(u), rho).matrix(), direct));

        const HermitianOperator sigma = random_state(dmid, rng);
        const ComplexMatrix joint = tensor(rho.matrix(), sigma.matrix());
        ptrace = std::max({ptrace, max_abs_diff(partial_trace(joint, din, dmid, Subsystem::A), rho.matrix()),
                           max_abs_diff(partial_trace(joint, din, dmid, Subsystem::B), sigma.matrix())});

        const HermitianOperator both = apply(tensor_channels(c1, c2), tensor(rho, sigma));
        tensor_apply = std::max(tensor_apply, max_abs_diff(both, tensor(apply(c1, rho), apply(c2, sigma))));
    }
    r.at_most("Choi positivity violation", cp, kIdentityTol);
    r.at_most("trace-preservation residual", tp, kIdentityTol);
    r.at_most("tr[L(rho) E] - tr[rho L*(E)]", duality, kIdentityTol);
    r.at_most("(L2 o L1)* - L1* o L2*", reversal, kIdentityTol);
    r.at_most("unitary channel vs U rho U^dag", kraus, kIdentityTol);
    r.at_most("partial trace of rho (x) sigma", ptrace, kIdentityTol);
    r.at_most("(L1 x L2)(rho x sigma) - L1(rho) x L2(sigma)", tensor_apply, kIdentityTol);
    return r.take();
}

using ScenarioFn = std::function<ScenarioReport(const ScenarioOptions &)>;

const std::vector<std::pair<std::string, ScenarioFn>> &registry() {
    static const std::vector<std::pair<std::string, ScenarioFn>> entries = {
        {"transitivity", transitivity},
        {"example1", example1},
        {"nonconvexity", nonconvexity},
        {"unsharp-equivalence", unsharp_equivalence},
        {"concatenation", concatenation},
        {"convexity", convexity},
        {"degree", degree},
        {"oracle-crosscheck", oracle_crosscheck},
        {"core-invariants", core_invariants},
    };
    return entries;
}

}  // namespace

const std::vector<std::string> &scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &entry : registry()) {
            out.push_back(entry.first);
        }
        return out;
    }();
    return names;
}

ScenarioReport run_scenario(const std::string &name, const ScenarioOptions &opts) {
    if (opts.trials < 1) {
        fail(ErrorCode::InvalidArgument, "trials must be at least 1");
    }
    for (const auto &[id, fn] : registry()) {
        if (id == name) {
            const auto start = std::chrono::steady_clock::now();
            ScenarioReport report = fn(opts);
            const auto elapsed = std::chrono::steady_clock::now() - start;
            report.runtime_ms =
                opts.include_timing ? std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() : 0;
            return report;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown scenario \"" + name + "\"");
}

std::string render_text(const std::vector<ScenarioReport> &reports) {
    std::ostringstream out;
    int failed = 0;
    for (const auto &rep : reports) {
        out << "== " << rep.scenario_id << " (" << rep.runtime_ms << " ms) "
            << (rep.passed() ? "PASS" : "FAIL") << "\n";
        size_t width = 0;
        for (const auto &c : rep.claims) {
            width = std::max(width, c.description.size());
        }
        for (const auto &c : rep.claims) {
            out << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.description
                << std::string(width - c.description.size(), ' ') << "  expected " << c.expected << "  observed "
                << c.observed << "\n";
        }
        failed += !rep.passed();
    }
    out << reports.size() - failed << "/" << reports.size() << " scenarios passed\n";
    return out.str();
}

std::string render_json(const std::vector<ScenarioReport> &reports) {
    using nlohmann::ordered_json;
    ordered_json list = ordered_json::array();
    bool all = !reports.empty();
    for (const auto &rep : reports) {
        ordered_json claims = ordered_json::array();
        for (const auto &c : rep.claims) {
            claims.push_back({{"description", c.description},
                              {"expected", c.expected},
                              {"observed", c.observed},
                              {"pass", c.pass}});
        }
        ordered_json tols = ordered_json::array();
        for (const auto &t : rep.tolerances) {
            tols.push_back({{"name", t.name}, {"value", t.value}});
        }
        list.push_back({{"scenario_id", rep.scenario_id},
                        {"passed", rep.passed()},
                        {"claims", std::move(claims)},
                        {"tolerances", std::move(tols)},
                        {"runtime_ms", rep.runtime_ms}});
        all = all && rep.passed();
    }
    ordered_json doc = {{"passed", all}, {"reports", std::move(list)}};
    return doc.dump(2) + "\n";
}

}  // namespace layerscope
