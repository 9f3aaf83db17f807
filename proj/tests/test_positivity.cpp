#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "posmap/classical.hpp"
#include "posmap/positivity.hpp"
#include "posmap/rng.hpp"
#include "support.hpp"

using namespace posmap;
using posmap::testing::independent_choi;
using posmap::testing::independent_witness_value;
using posmap::testing::random_cptp_map;
using posmap::testing::random_hp_map;
using posmap::testing::random_hptp_map;
using posmap::testing::spa_lambda_bisection;

namespace {

// Chain order P_1, S_1, P_2, ..., P_d, S_d from weakest to strongest; used to
// assert monotone consistency of assembled reports.
std::vector<VerdictStatus> chain_statuses(const HierarchyReport& r) {
    std::vector<VerdictStatus> chain;
    for (int n = 1; n <= r.d; ++n) {
        chain.push_back(r.p_levels[n - 1].status);
        chain.push_back(r.s_levels[n - 1].status);
    }
    return chain;
}

void check_chain_consistency(const HierarchyReport& r) {
    const auto chain = chain_statuses(r);
    bool refuted_seen = false;
    for (const VerdictStatus s : chain) {
        if (refuted_seen) CHECK(s == VerdictStatus::Refuted);
        if (s == VerdictStatus::Refuted) refuted_seen = true;
    }
}

}  // namespace

// ------------------------------- exact checks -------------------------------

TEST_CASE("check_cp refutes the d=2 reduction map with spectrum {1,1,1,-1}") {
    const MapRep red = phi_family(2, 1.0);
    const PositivityVerdict v = check_cp(red);
    CHECK(v.status == VerdictStatus::Refuted);
    REQUIRE(v.witness.has_value());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(independent_choi(red));
    CHECK(solver.eigenvalues()(0) == doctest::Approx(-1.0));
    for (int i = 1; i < 4; ++i) CHECK(solver.eigenvalues()(i) == doctest::Approx(1.0));
    CHECK(v.spectral->min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("check_cp certifies phi_aT(3, 1) and the identity") {
    CHECK(check_cp(phi_family_transposed(3, 1.0)).status == VerdictStatus::Certified);
    const PositivityVerdict v = check_cp(identity_map(2));
    CHECK(v.status == VerdictStatus::Certified);
    CHECK(v.spectral->min_eigenvalue == doctest::Approx(0.0));
}

TEST_CASE("check_cp requires Hermiticity preservation") {
    Rng rng(2);
    const MapRep non_hp(ginibre(rng, 4, 4));
    CHECK_THROWS_AS(check_cp(non_hp), NotHermitianPreserving);
}

TEST_CASE("check_cocp: transposition yes, identity no") {
    CHECK(check_cocp(transposition_map(2)).status == VerdictStatus::Certified);
    const PositivityVerdict v = check_cocp(identity_map(2));
    CHECK(v.status == VerdictStatus::Refuted);
    CHECK(v.spectral->min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("check_cocp of the transposed family matches the plain-family CP range") {
    // T o phi_aT equals phi_a, so copositivity holds exactly when a <= 1/d.
    CHECK(check_cocp(phi_family_transposed(2, 0.4)).status == VerdictStatus::Certified);
    const PositivityVerdict v = check_cocp(phi_family_transposed(2, 1.0));
    CHECK(v.status == VerdictStatus::Refuted);
    // Oracle: spectrum of the freshly assembled Choi of T o phi_{1,T}.
    const MapRep flipped = compose(transposition_map(2), phi_family_transposed(2, 1.0));
    CHECK(min_eigenvalue(independent_choi(flipped)) == doctest::Approx(-1.0));
    CHECK(v.spectral->min_eigenvalue == doctest::Approx(-1.0));
}

// ------------------------------ P_n falsifier --------------------------------

TEST_CASE("falsify_n_positivity on phi_a(3, 1/2): refuted at n=3, open at n=2") {
    const MapRep map = phi_family(3, 0.5);
    const PositivityVerdict at3 = falsify_n_positivity(map, 3);
    CHECK(at3.status == VerdictStatus::Refuted);
    CHECK(at3.property.level == 3);

    FalsifierOptions opts;
    opts.restarts = 50;
    const PositivityVerdict at2 = falsify_n_positivity(map, 2, opts);
    CHECK(at2.status == VerdictStatus::Undetermined);
}

TEST_CASE("falsify_n_positivity on transposition d=2") {
    const MapRep t = transposition_map(2);
    CHECK(falsify_n_positivity(t, 1).status == VerdictStatus::Undetermined);

    const PositivityVerdict at2 = falsify_n_positivity(t, 2);
    CHECK(at2.status == VerdictStatus::Refuted);
    REQUIRE(at2.witness.has_value());
    CHECK(at2.witness->left.size() <= 2);
    // The antisymmetric unit vector realizes the SWAP minimum of -1.
    CHECK(at2.witness->value == doctest::Approx(-1.0));
    CHECK(independent_witness_value(t, *at2.witness) == doctest::Approx(-1.0));
}

TEST_CASE("falsify_n_positivity guards its inputs") {
    CHECK_THROWS_AS(falsify_n_positivity(identity_map(2), 0), BadParameter);
    Rng rng(3);
    CHECK_THROWS_AS(falsify_n_positivity(MapRep(ginibre(rng, 4, 4)), 1),
                    NotHermitianPreserving);
}

TEST_CASE("falsifier verdicts are reproducible bit-for-bit from the seed") {
    const MapRep map = phi_family(3, 0.6);
    FalsifierOptions opts;
    opts.seed = 42;
    opts.restarts = 10;
    const PositivityVerdict a = falsify_n_positivity(map, 2, opts);
    const PositivityVerdict b = falsify_n_positivity(map, 2, opts);
    REQUIRE(a.witness.has_value());
    REQUIRE(b.witness.has_value());
    CHECK(a.witness->value == b.witness->value);  // exact equality
    CHECK(a.seed == 42);
}

// ----------------------------- Schwarz falsifier -----------------------------

TEST_CASE("transposition d=2 fails the level-1 Schwarz inequality") {
    // Oracle: X = E_01 gives T(X*X) - T(X)*T(X) = E_11 - E_00 with eigenvalue
    // -1, so the block matrix at X = E_01 is indefinite.
    const MapRep t = transposition_map(2);
    const Matrix x = matrix_unit(2, 0, 1);
    const Matrix diff = t.apply(x.adjoint() * x) - t.apply(x).adjoint() * t.apply(x);
    CHECK(min_eigenvalue(diff) == doctest::Approx(-1.0));

    const PositivityVerdict v = falsify_generalized_schwarz(t, 1);
    CHECK(v.status == VerdictStatus::Refuted);
    REQUIRE(v.witness.has_value());
    CHECK(independent_witness_value(t, *v.witness) < -kDefaultViolationTol / 2);
}

TEST_CASE("phi_aT(2, -2) is Schwarz: the falsifier finds no witness") {
    SchwarzOptions opts;
    opts.restarts = 20;
    const PositivityVerdict v = falsify_generalized_schwarz(phi_family_transposed(2, -2.0), 1, opts);
    CHECK(v.status == VerdictStatus::Undetermined);
}

TEST_CASE("phi_a(3, .) level-1 Schwarz threshold sits at 3/4") {
    SchwarzOptions opts;
    opts.restarts = 10;
    CHECK(falsify_generalized_schwarz(phi_family(3, 0.7), 1, opts).status ==
          VerdictStatus::Undetermined);
    const PositivityVerdict v = falsify_generalized_schwarz(phi_family(3, 0.8), 1, opts);
    CHECK(v.status == VerdictStatus::Refuted);
    REQUIRE(v.witness.has_value());
    CHECK(independent_witness_value(phi_family(3, 0.8), *v.witness) < -kDefaultViolationTol / 2);
}

// --------------------------------- SPA --------------------------------------

TEST_CASE("spa_lambda closed form on the gallery") {
    CHECK(spa_lambda(identity_map(2)) == 0.0);
    // Oracle: bisection on the CP certificate.
    CHECK(spa_lambda(phi_family(2, 1.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(spa_lambda_bisection(phi_family(2, 1.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(spa_lambda(transposition_map(2)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(spa_lambda_bisection(transposition_map(2)) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("spa_lambda agrees with bisection on random HPTP maps") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 2 + trial % 2;
        const MapRep map = random_hptp_map(rng, d);
        CHECK(std::abs(spa_lambda(map) - spa_lambda_bisection(map)) < 1e-10);
    }
}

TEST_CASE("spa_lambda rejects non-trace-preserving maps") {
    Rng rng(5);
    KrausSet ks;
    ks.dim = 2;
    ks.operators = {ginibre(rng, 2, 2)};
    CHECK_THROWS_AS(spa_lambda(MapRep::from_kraus(ks)), NotTracePreserving);
}

// ----------------------------- decomposability ------------------------------

TEST_CASE("decompose_map certifies CP maps with the trivial pair") {
    Rng rng(6);
    const MapRep cp = random_cptp_map(rng, 2);
    const PositivityVerdict v = decompose_map(cp);
    CHECK(v.status == VerdictStatus::Certified);
    REQUIRE(v.decomposition.has_value());
    CHECK((v.decomposition->cp_part - cp.choi()).norm() < 1e-6);
    CHECK(v.decomposition->cocp_part.norm() < 1e-6);
}

TEST_CASE("decompose_map certifies transposition and the reduction map") {
    for (const MapRep& map : {transposition_map(2), phi_family(2, 1.0)}) {
        const PositivityVerdict v = decompose_map(map);
        CHECK(v.status == VerdictStatus::Certified);
        REQUIRE(v.decomposition.has_value());
        CHECK(v.decomposition->residual < 1e-7);
        CHECK(min_eigenvalue(v.decomposition->cp_part) > -1e-9);
        CHECK(min_eigenvalue(v.decomposition->cocp_part) > -1e-9);
        // Re-assemble the Choi matrix from the certificate by hand.
        const int d = map.dim();
        Matrix rebuilt = v.decomposition->cp_part;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                rebuilt.block(i * d, j * d, d, d) +=
                    v.decomposition->cocp_part.block(i * d, j * d, d, d).transpose();
        CHECK((rebuilt - map.choi()).norm() < 1e-6);
    }
}

// --------------------------- tensor-stable checks ----------------------------

TEST_CASE("tensor-stable positivity: identity and double transposition are clear") {
    CHECK(falsify_tensor_stable_positivity(identity_map(2), 3).status ==
          VerdictStatus::Undetermined);
    CHECK(falsify_tensor_stable_positivity(transposition_map(2), 2).status ==
          VerdictStatus::Undetermined);
}

TEST_CASE("reduction (x) identity fails block positivity at the product level") {
    const MapRep big = tensor(phi_family(2, 1.0), identity_map(2));
    const PositivityVerdict v = falsify_n_positivity(big, 1);
    CHECK(v.status == VerdictStatus::Refuted);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->value == doctest::Approx(-0.5));
    CHECK(independent_witness_value(big, *v.witness) == doctest::Approx(-0.5));
}

TEST_CASE("tensor-stable check honors the resource guard") {
    CHECK_THROWS_AS(falsify_tensor_stable_positivity(identity_map(3), 4), ResourceLimit);
}

// ------------------------------ contractivity --------------------------------

TEST_CASE("trace-norm contractivity of transposition across levels") {
    const MapRep t = transposition_map(2);
    CHECK(check_trace_norm_contractivity(t, 1, 500, 0).status == VerdictStatus::Undetermined);
    const PositivityVerdict v = check_trace_norm_contractivity(t, 4, 1000, 0);
    CHECK(v.status == VerdictStatus::Refuted);
    REQUIRE(v.witness.has_value());
    CHECK(independent_witness_value(t, *v.witness) < -kDefaultViolationTol / 2);
}

TEST_CASE("trace-norm contractivity of the identity never fires") {
    CHECK(check_trace_norm_contractivity(identity_map(2), 4, 200, 0).status ==
          VerdictStatus::Undetermined);
}

TEST_CASE("contractivity guards its inputs") {
    CHECK_THROWS_AS(check_trace_norm_contractivity(identity_map(2), 0, 10, 0), BadParameter);
    CHECK_THROWS_AS(check_trace_norm_contractivity(identity_map(2), 5, 10, 0), BadParameter);
}

// -------------------------------- classify ----------------------------------

TEST_CASE("classify phi_a(3, 0.4): refuted exactly from P_3 upward") {
    const HierarchyReport r = classify(phi_family(3, 0.4));
    CHECK(r.p_levels[0].status == VerdictStatus::Undetermined);
    CHECK(r.p_levels[1].status == VerdictStatus::Undetermined);
    CHECK(r.p_levels[2].status == VerdictStatus::Refuted);
    CHECK(r.s_levels[0].status == VerdictStatus::Undetermined);
    CHECK(r.cp.status == VerdictStatus::Refuted);
    check_chain_consistency(r);
}

TEST_CASE("classify phi_aT(2, -1.5): Schwarz-consistent but 2-positivity refuted") {
    const HierarchyReport r = classify(phi_family_transposed(2, -1.5));
    CHECK(r.s_levels[0].status == VerdictStatus::Undetermined);
    CHECK(r.p_levels[1].status == VerdictStatus::Refuted);
    check_chain_consistency(r);
}

TEST_CASE("classify a unitary conjugation: everything certified") {
    Rng rng(8);
    const HierarchyReport r = classify(unitary_conjugation(haar_unitary(rng, 3)));
    CHECK(r.cp.status == VerdictStatus::Certified);
    for (const auto& v : r.p_levels) CHECK(v.status == VerdictStatus::Certified);
    for (const auto& v : r.s_levels) CHECK(v.status == VerdictStatus::Certified);
}

// ------------------------------ family oracle --------------------------------

TEST_CASE("oracle_phi_family reproduces the published thresholds") {
    CHECK(oracle_phi_family(PhiFamilyKind::Plain, 3, 0.5, OracleProperty::NPositive, 2));
    CHECK_FALSE(oracle_phi_family(PhiFamilyKind::Plain, 3, 0.5, OracleProperty::NPositive, 3));
    CHECK(oracle_phi_family(PhiFamilyKind::Transposed, 2, -2.0, OracleProperty::Schwarz, 1));
    CHECK_FALSE(oracle_phi_family(PhiFamilyKind::Transposed, 2, -2.0, OracleProperty::NPositive, 2));
    // Lower Schwarz endpoint 2d / (1 - sqrt(4d+1)).
    CHECK(oracle_phi_interval(PhiFamilyKind::Transposed, 2, OracleProperty::Schwarz, 1).lower ==
          doctest::Approx(-2.0));
    CHECK(oracle_phi_interval(PhiFamilyKind::Transposed, 3, OracleProperty::Schwarz, 1).lower ==
          doctest::Approx(6.0 / (1.0 - std::sqrt(13.0))));
    // S_d collapses to CP rather than extending the 1 <= n <= d-1 formula.
    CHECK(oracle_phi_family(PhiFamilyKind::Plain, 3, 1.0 / 3.0, OracleProperty::Schwarz, 3));
    CHECK_FALSE(oracle_phi_family(PhiFamilyKind::Plain, 3, 0.4, OracleProperty::Schwarz, 3));
    CHECK_THROWS_AS(oracle_phi_family(PhiFamilyKind::Plain, 3, 3.0, OracleProperty::NPositive, 1),
                    BadParameter);
}

// ------------------------- oracle agreement on a grid ------------------------

TEST_CASE("falsifier verdicts agree with the closed-form oracle on the grid") {
    const std::vector<double> grid = {-2.5, -2.0, -1.5, -1.0, -0.5,     0.0, 0.3,
                                      1.0 / 3.0, 0.5,  0.7,  3.0 / 4.0, 0.8, 1.0};
    const double margin = 0.02;

    for (const PhiFamilyKind kind : {PhiFamilyKind::Plain, PhiFamilyKind::Transposed}) {
        for (const int d : {2, 3}) {
            for (const double a : grid) {
                const MapRep map = kind == PhiFamilyKind::Plain
                                       ? phi_family(d, a)
                                       : phi_family_transposed(d, a);
                for (int n = 1; n <= d; ++n) {
                    // P_n
                    {
                        const OracleInterval iv =
                            oracle_phi_interval(kind, d, OracleProperty::NPositive, n);
                        if (std::abs(a - iv.upper) >= margin &&
                            (std::isinf(iv.lower) || std::abs(a - iv.lower) >= margin)) {
                            const bool member =
                                oracle_phi_family(kind, d, a, OracleProperty::NPositive, n);
                            FalsifierOptions opts;
                            opts.restarts = 20;
                            const PositivityVerdict v = falsify_n_positivity(map, n, opts);
                            if (member)
                                CHECK(v.status != VerdictStatus::Refuted);
                            else
                                CHECK(v.status == VerdictStatus::Refuted);
                        }
                    }
                    // S_n (level d collapses to the exact CP test)
                    if (n < d) {
                        const OracleInterval iv =
                            oracle_phi_interval(kind, d, OracleProperty::Schwarz, n);
                        if (std::abs(a - iv.upper) >= margin &&
                            (std::isinf(iv.lower) || std::abs(a - iv.lower) >= margin)) {
                            const bool member =
                                oracle_phi_family(kind, d, a, OracleProperty::Schwarz, n);
                            SchwarzOptions opts;
                            opts.restarts = 8;
                            const PositivityVerdict v = falsify_generalized_schwarz(map, n, opts);
                            if (member)
                                CHECK(v.status != VerdictStatus::Refuted);
                            else
                                CHECK(v.status == VerdictStatus::Refuted);
                        }
                    }
                }
            }
        }
    }
}

// --------------------------- witness re-evaluation ---------------------------

TEST_CASE("every refuted verdict carries an independently re-checkable witness") {
    struct Case {
        MapRep map;
        PositivityVerdict verdict;
        bool copositive = false;
    };
    std::vector<Case> cases;
    cases.push_back({phi_family(2, 1.0), check_cp(phi_family(2, 1.0))});
    cases.push_back({identity_map(2), check_cocp(identity_map(2)), true});
    cases.push_back({transposition_map(2), falsify_n_positivity(transposition_map(2), 2)});
    cases.push_back({phi_family(3, 0.5), falsify_n_positivity(phi_family(3, 0.5), 3)});
    cases.push_back(
        {transposition_map(2), falsify_generalized_schwarz(transposition_map(2), 1)});
    cases.push_back(
        {transposition_map(2), check_trace_norm_contractivity(transposition_map(2), 4, 500, 1)});

    for (const Case& c : cases) {
        REQUIRE(c.verdict.status == VerdictStatus::Refuted);
        REQUIRE(c.verdict.witness.has_value());
        const double tol = c.verdict.tolerances.violation_tol;
        CHECK(independent_witness_value(c.map, *c.verdict.witness, c.copositive) < -tol / 2);
    }
}

// ----------------------- monotonicity and zero-padding -----------------------

TEST_CASE("refutations propagate upward on seeded random maps") {
    Rng rng(77);
    int refuted_count = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + trial % 2;
        const MapRep map = random_hp_map(rng, d);
        FalsifierOptions opts;
        opts.restarts = 12;
        opts.seed = 1000 + trial;
        for (int m = 1; m < d; ++m) {
            const PositivityVerdict at_m = falsify_n_positivity(map, m, opts);
            if (at_m.status != VerdictStatus::Refuted) continue;
            ++refuted_count;
            // The witness embeds untouched at every higher level, and the
            // falsifier refutes there directly as well.
            for (int n = m + 1; n <= d; ++n) {
                CHECK(independent_witness_value(map, *at_m.witness) < -opts.tol / 2);
                const PositivityVerdict at_n = falsify_n_positivity(map, n, opts);
                CHECK(at_n.status == VerdictStatus::Refuted);
            }
            break;
        }
    }
    CHECK(refuted_count > 10);  // random Hermitian Choi matrices are rarely PSD
}

TEST_CASE("Schwarz witnesses stay valid under zero-padding to higher levels") {
    struct Case {
        MapRep map;
        int from_level;
    };
    const std::vector<Case> cases = {{phi_family(3, 0.8), 1},
                                     {phi_family_transposed(2, -2.2), 1},
                                     {transposition_map(2), 1}};
    for (const Case& c : cases) {
        SchwarzOptions opts;
        opts.restarts = 10;
        const PositivityVerdict v = falsify_generalized_schwarz(c.map, c.from_level, opts);
        REQUIRE(v.status == VerdictStatus::Refuted);
        const int d = c.map.dim();
        for (int to_level = c.from_level + 1; to_level <= d; ++to_level) {
            const int m_small = c.from_level * d;
            const int m_big = to_level * d;
            Matrix padded = Matrix::Zero(m_big, m_big);
            padded.topLeftCorner(m_small, m_small) = v.witness->test_operator;
            Witness w = *v.witness;
            w.test_operator = padded;
            CHECK(independent_witness_value(c.map, w) < -opts.tol / 2);
        }
    }
}

TEST_CASE("Schwarz interlacing: CP maps admit no Schwarz witness at any level") {
    Rng rng(91);
    for (const int d : {2, 3}) {
        const MapRep cptp = random_cptp_map(rng, d);
        REQUIRE(check_cp(cptp).status == VerdictStatus::Certified);
        for (int n = 1; n <= d; ++n) {
            SchwarzOptions opts;
            opts.restarts = 20;
            CHECK(falsify_generalized_schwarz(cptp, n, opts).status ==
                  VerdictStatus::Undetermined);
        }
    }
}

TEST_CASE("classical collapse: diagonal channels from stochastic matrices are CP") {
    Rng rng(12);
    for (const int d : {2, 3, 4}) {
        for (int trial = 0; trial < 5; ++trial) {
            const MapRep phi_s = channel_from_stochastic(random_column_stochastic(rng, d));
            CHECK(check_cp(phi_s).status == VerdictStatus::Certified);
        }
    }
}
