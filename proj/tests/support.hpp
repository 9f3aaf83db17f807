// support.hpp — Test-only oracles and helpers, kept independent of the
// library code paths they cross-check.

#pragma once

#include <cmath>
#include <vector>

#include "posmap/linmap.hpp"
#include "posmap/positivity.hpp"
#include "posmap/rng.hpp"

namespace posmap::testing {

// Fresh Choi assembly straight from the definition: apply the map to every
// matrix unit through the superoperator and lay out the blocks by hand. Kept
// separate from MapRep::choi() (which reshuffles indices) so witness values
// are re-derived through an independent route.
inline Matrix independent_choi(const MapRep& map) {
    const int d = map.dim();
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Matrix image = map.apply(matrix_unit(d, i, j));
            choi.block(i * d, j * d, d, d) = image;
        }
    return choi;
}

// Quadratic form <v|C|v> via explicit loops.
inline double quadratic_form(const Matrix& c, const Vector& v) {
    Complex acc = 0.0;
    for (Eigen::Index r = 0; r < c.rows(); ++r)
        for (Eigen::Index s = 0; s < c.cols(); ++s) acc += std::conj(v(r)) * c(r, s) * v(s);
    return acc.real();
}

// Re-evaluates a refutation witness from scratch against the map it refutes.
// Schmidt witnesses are evaluated on the freshly assembled Choi matrix (the
// copositive variant pre-composes the transposition); Schwarz witnesses are
// evaluated through the level-m block matrix with m read off the operator
// size; Hermitian test operators are evaluated through the trace-norm gap at
// full ampliation.
inline double independent_witness_value(const MapRep& map, const Witness& w,
                                        bool copositive_context = false) {
    if (w.kind == Witness::Kind::SchmidtVector) {
        const MapRep target =
            copositive_context ? compose(transposition_map(map.dim()), map) : map;
        Vector v = assemble_schmidt_vector(w);
        v /= v.norm();
        return quadratic_form(independent_choi(target), v);
    }
    if (w.kind == Witness::Kind::SchwarzOperator) {
        const int m = static_cast<int>(w.test_operator.rows());
        const int level = m / map.dim();
        const MapRep amp = ampliate(map, level);
        const Matrix x = w.test_operator / w.test_operator.norm();
        const Matrix id_image = amp.apply(Matrix::Identity(m, m));
        const Matrix px = amp.apply(x);
        const Matrix pxx = amp.apply(x.adjoint() * x);
        Matrix block(2 * m, 2 * m);
        block.topLeftCorner(m, m) = id_image;
        block.topRightCorner(m, m) = px;
        block.bottomLeftCorner(m, m) = px.adjoint();
        block.bottomRightCorner(m, m) = pxx;
        return min_eigenvalue(block);
    }
    // Hermitian test operator: contractivity gap at full ampliation.
    const MapRep amp = ampliate(map, map.dim());
    const double before = trace_norm_hermitian(w.test_operator);
    const double after = trace_norm_hermitian(amp.apply(w.test_operator));
    return before - after;
}

// Random Hermiticity-preserving map through a random Hermitian Choi matrix.
inline MapRep random_hp_map(Rng& rng, int d) {
    return MapRep::from_choi(random_hermitian(rng, d * d));
}

// Random CP map from a handful of Ginibre Kraus operators.
inline MapRep random_cp_map(Rng& rng, int d, int kraus_count = 2) {
    KrausSet ks;
    ks.dim = d;
    for (int k = 0; k < kraus_count; ++k) ks.operators.push_back(ginibre(rng, d, d));
    return MapRep::from_kraus(ks);
}

// Random CPTP map: normalize random Kraus operators so sum K*K = I.
inline MapRep random_cptp_map(Rng& rng, int d, int kraus_count = 3) {
    std::vector<Matrix> ops;
    Matrix total = Matrix::Zero(d, d);
    for (int k = 0; k < kraus_count; ++k) {
        ops.push_back(ginibre(rng, d, d));
        total += ops.back().adjoint() * ops.back();
    }
    // total is positive definite almost surely; whiten by its inverse root.
    Eigen::SelfAdjointEigenSolver<Matrix> solver(total);
    const Matrix root_inv = solver.operatorInverseSqrt();
    KrausSet ks;
    ks.dim = d;
    for (Matrix& k : ops) ks.operators.push_back(k * root_inv);
    return MapRep::from_kraus(ks);
}

// Random Hermiticity-preserving trace-preserving map: difference of two CPTP
// maps plus a CPTP anchor keeps TP while allowing non-CP directions.
inline MapRep random_hptp_map(Rng& rng, int d) {
    const MapRep a = random_cptp_map(rng, d);
    const MapRep b = random_cptp_map(rng, d);
    const MapRep c = random_cptp_map(rng, d);
    const double w = rng.uniform();
    Matrix s = c.superop() + w * (a.superop() - b.superop());
    return MapRep(std::move(s));
}

// Bisection oracle for the minimal CP-restoring mixing weight, independent of
// the closed form under test.
inline double spa_lambda_bisection(const MapRep& map, double tol = 1e-12) {
    auto cp_at = [&](double lambda) {
        return check_cp(spa_mix(map, lambda), 0.0).status == VerdictStatus::Certified;
    };
    if (cp_at(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (cp_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace posmap::testing
