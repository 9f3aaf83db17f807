// dynamics.hpp — Discrete- and continuous-time semigroup evolution for
// classical (stochastic / Kolmogorov) and quantum (channel / GKLS)
// descriptions, with per-point validity monitoring.

#pragma once

#include <variant>
#include <vector>

#include "posmap/classical.hpp"
#include "posmap/linmap.hpp"
#include "posmap/types.hpp"

namespace posmap {

// Superoperator of -i[H, .] + sum_k (L_k . L_k* - 1/2 {L_k* L_k, .}).
MapRep gkls_superop(const GklsGenerator& g);

// Dense matrix exponential of a generator superoperator (scaling-and-squaring
// with Pade approximation).
MapRep exp_generator(const MapRep& generator, double t);
RealMatrix exp_kolmogorov(const RealMatrix& l, double t);

struct TrajectoryPoint {
    double t = 0.0;
    std::variant<RealVector, Matrix> state;
    bool valid = true;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    bool classical = false;
};

inline constexpr double kTrajectoryTol = 1e-8;

// Quantum master evolution rho(t) = exp(t L)(rho0).
Trajectory evolve_continuous(const MapRep& generator, const Matrix& rho0,
                             const std::vector<double>& times, double tol = kTrajectoryTol);

// Classical master evolution p(t) = exp(t L) p0.
Trajectory evolve_continuous(const KolmogorovGenerator& generator, const RealVector& p0,
                             const std::vector<double>& times, double tol = kTrajectoryTol);

// Iterated channel application; when validate is set the step map must be
// CPTP within tol or InvalidStepMap is thrown.
Trajectory evolve_discrete(const MapRep& step, const Matrix& rho0, int n_steps,
                           bool validate = true, double tol = kTrajectoryTol);

// Iterated stochastic-matrix application; when validate is set the step must
// be column-stochastic within tol.
Trajectory evolve_discrete(const RealMatrix& step, const RealVector& p0, int n_steps,
                           bool validate = true, double tol = kTrajectoryTol);

bool is_valid_density(const Matrix& rho, double tol = kTrajectoryTol);
bool is_valid_distribution(const RealVector& p, double tol = kTrajectoryTol);

}  // namespace posmap
