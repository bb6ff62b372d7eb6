#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "layerscope/catalog.hpp"
#include "layerscope/compatibility.hpp"
#include "layerscope/layers.hpp"
#include "layerscope/scenarios.hpp"

using namespace layerscope;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Collects named checks for one criterion.
class Checks {
  public:
    void expect(bool ok, const std::string &what) {
        if (!ok) {
            failed_.push_back(what);
        }
        ++count_;
    }
    void at_most(double observed, double bound, const std::string &what) {
        std::ostringstream s;
        s << what << " = " << observed << " > " << bound;
        expect(observed <= bound, s.str());
    }
    void near(double observed, double expected, double tol, const std::string &what) {
        std::ostringstream s;
        s << what << " = " << observed << ", expected " << expected << " +/- " << tol;
        expect(std::abs(observed - expected) <= tol, s.str());
    }
    void scenario(const std::string &name, int trials = 200) {
        ScenarioOptions opts;
        opts.trials = trials;
        const auto report = run_scenario(name, opts);
        for (const auto &c : report.claims) {
            expect(c.pass, "scenario " + name + ": " + c.description + " (expected " + c.expected + ", observed " +
                               c.observed + ")");
        }
        expect(!report.claims.empty(), "scenario " + name + " has claims");
    }
    const std::vector<std::string> &failed() const {
        return failed_;
    }
    int count() const {
        return count_;
    }

  private:
    std::vector<std::string> failed_;
    int count_ = 0;
};

double margin_residual(const JointObservable &g, const Observable &a, const Observable &b) {
    auto [ma, mb] = margins(g);
    double worst = 0.0;
    for (int x = 0; x < a.outcome_count(); ++x) {
        worst = std::max(worst, max_abs_diff(ma.effect(x), a.effect(x)));
    }
    for (int y = 0; y < b.outcome_count(); ++y) {
        worst = std::max(worst, max_abs_diff(mb.effect(y), b.effect(y)));
    }
    return worst;
}

void transitivity(Checks &c) {
    c.scenario("transitivity");
    const auto t = catalog::transitivity_triple();
    for (const auto &[name, x, y] : {std::tuple{"(A,B)", &t.a, &t.b}, std::tuple{"(B,C)", &t.b, &t.c}}) {
        auto v = classify_pair_general(*x, *y);
        c.expect(v.strongest_layer == Layer::Broadcastable, std::string(name) + " broadcastable");
        c.expect(v.broadcaster.has_value(), std::string(name) + " copier constructed");
        if (v.broadcaster) {
            c.at_most(std::max(broadcast_residual(*v.broadcaster, *x), broadcast_residual(*v.broadcaster, *y)), 1e-10,
                      std::string(name) + " copier dual residual");
        }
    }
    auto ac = classify_pair_general(t.a, t.c);
    c.expect(ac.strongest_layer == Layer::Incompatible && ac.certified_exclusion == Layer::Compatible,
             "(A,C) certified incompatible");
    c.expect(ac.compatibility && ac.compatibility->method == FeasibilityMethod::SharpRule, "(A,C) via sharp rule");
}

void example1(Checks &c) {
    c.scenario("example1");
    const auto g = catalog::example1_joint();
    const auto a = unsharp(catalog::sigma_x(), kInvSqrt2);
    const auto b = unsharp(catalog::sigma_y(), kInvSqrt2);
    c.at_most(margin_residual(g, a, b), 1e-12, "margin residual of G");
    c.expect(validate_povm(g.base(), 1e-12).valid, "G valid POVM");
    c.expect(!is_commutative(g.base(), 1e-9), "G non-commutative");
    const auto ic = is_informationally_complete(g.base(), 1e-9);
    c.expect(!ic.complete && ic.rank == 3, "G rank exactly 3");
    auto v = classify_qubit_pair(a, b);
    c.expect(v.strict_stratum == Stratum::WeaklyCompatible, "pair classified WEAKLY_COMPATIBLE");
}

void nonconvexity(Checks &c) {
    c.scenario("nonconvexity");
    const auto p1 = catalog::nonconvex_pair1();
    const auto p2 = catalog::nonconvex_pair2();
    c.expect(classify_pair_general(p1.first, p1.second).strongest_layer == Layer::Broadcastable,
             "(A1,B1) broadcastable");
    c.expect(classify_pair_general(p2.first, p2.second).strongest_layer == Layer::Broadcastable,
             "(A2,B2) broadcastable");
    const auto mid = mixture_pair(p1, p2, 0.5);
    c.near(spectral_norm(commutator(mid.first.effect(0), mid.first.effect(2))), 1.0 / 32.0, 1e-12,
           "||[A'(1), A'(3)]||");
    c.expect(excluded_from(classify_pair_general(mid.first, mid.second), Layer::Broadcastable),
             "midpoint certified not broadcastable");
}

void degree(Checks &c) {
    c.scenario("degree");
    const auto sx = catalog::sigma_x();
    for (const auto &[name, other] : {std::pair{"sx vs sy", catalog::sigma_y()}, std::pair{"sx vs sz", catalog::sigma_z()}}) {
        const auto d = degree_of_compatibility(sx, other);
        c.near(d.degree, kInvSqrt2, 1e-3, std::string("degree ") + name);
        // Oracle boundary: |a + b| + |a - b| = 2 for orthogonal Bloch vectors of length p.
        const double p = d.degree;
        c.near(qubit_oracle_value({p, 0, 0}, {0, p, 0}), 2.0, 2.0 * std::sqrt(2.0) * 1e-3,
               std::string("oracle value at the degree, ") + name);
        const auto a = unsharp(sx, kInvSqrt2);
        const auto b = unsharp(other, kInvSqrt2);
        auto s = are_compatible(a, b, kDefaultFeasibilityTol);
        c.expect(s.verdict == Feasibility::Feasible && s.joint.has_value(), std::string("feasible at 1/sqrt2, ") + name);
        if (s.joint) {
            c.at_most(margin_residual(*s.joint, a, b), 1e-6, std::string("margin residual at 1/sqrt2, ") + name);
        }
        auto solver = joint_feasibility(a, b, kDefaultFeasibilityTol);
        c.expect(solver.verdict == Feasibility::Feasible && solver.joint.has_value(),
                 std::string("projection solver feasible at 1/sqrt2, ") + name);
        if (solver.joint) {
            c.at_most(margin_residual(*solver.joint, a, b), 1e-6,
                      std::string("projection margin residual at 1/sqrt2, ") + name);
        }
    }
}

struct Criterion {
    int number;
    const char *name;
    double limit_ms;
    std::function<void(Checks &)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "transitivity", 1000, transitivity},
        {2, "example 1 joint observable", 1000, example1},
        {3, "non-convexity", 1000, nonconvexity},
        {4, "degree of compatibility", 10000, degree},
        {5, "unsharp broadcast equivalence", 10000, [](Checks &c) { c.scenario("unsharp-equivalence", 200); }},
        {6, "concatenation constructions", 5000, [](Checks &c) { c.scenario("concatenation"); }},
        {7, "convexity", 10000, [](Checks &c) { c.scenario("convexity", 200); }},
        {8, "oracle/solver cross-validation", 30000, [](Checks &c) { c.scenario("oracle-crosscheck"); }},
        {9, "core invariants", 5000, [](Checks &c) { c.scenario("core-invariants"); }},
    };
    int failures = 0;
    for (const auto &cr : criteria) {
        Checks checks;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(checks);
        } catch (const std::exception &e) {
            checks.expect(false, std::string("exception: ") + e.what());
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (ms >= cr.limit_ms) {
            checks.expect(false, "runtime limit exceeded");
        }
        const bool pass = checks.failed().empty();
        failures += !pass;
        std::printf("%s criterion %d: %s (%d checks, %.0f ms, limit %.0f ms)\n", pass ? "PASS" : "FAIL", cr.number,
                    cr.name, checks.count(), ms, cr.limit_ms);
        for (const auto &f : checks.failed()) {
            std::printf("    %s\n", f.c_str());
        }
    }
    return failures == 0 ? 0 : 1;
}
