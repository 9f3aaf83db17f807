#include "posmap/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace posmap {

MapRep gkls_superop(const GklsGenerator& g) {
    const int d = g.dim();
    if (!is_hermitian(g.hamiltonian, 1e-10)) throw BadParameter("Hamiltonian must be Hermitian");
    const Matrix id = Matrix::Identity(d, d);
    const Complex i_unit(0.0, 1.0);

    Matrix s = -i_unit * (kron(id, g.hamiltonian) - kron(g.hamiltonian.transpose(), id));
    for (const Matrix& jump : g.jumps) {
        if (jump.rows() != d || jump.cols() != d)
            throw DimensionMismatch("jump operator dimension mismatch");
        const Matrix jj = jump.adjoint() * jump;
        s += kron(jump.conjugate(), jump);
        s -= 0.5 * (kron(id, jj) + kron(jj.transpose(), id));
    }
    return MapRep(std::move(s));
}

MapRep exp_generator(const MapRep& generator, double t) {
    const Matrix e = (t * generator.superop()).exp();
    return MapRep(e);
}

RealMatrix exp_kolmogorov(const RealMatrix& l, double t) {
    if (l.rows() != l.cols()) throw DimensionMismatch("generator must be square");
    return (t * l).exp();
}

bool is_valid_density(const Matrix& rho, double tol) {
    if (rho.rows() != rho.cols()) return false;
    if (!is_hermitian(rho, tol)) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol) return false;
    return min_eigenvalue(rho) >= -tol;
}

bool is_valid_distribution(const RealVector& p, double tol) {
    if (p.size() < 1) return false;
    if ((p.array() < -tol).any()) return false;
    return std::abs(p.sum() - 1.0) <= tol;
}

Trajectory evolve_continuous(const MapRep& generator, const Matrix& rho0,
                             const std::vector<double>& times, double tol) {
    const int d = generator.dim();
    if (rho0.rows() != d || rho0.cols() != d)
        throw KindMismatch("initial state does not match generator dimension");
    Trajectory traj;
    traj.classical = false;
    for (const double t : times) {
        const Matrix rho = exp_generator(generator, t).apply(rho0);
        traj.points.push_back({t, rho, is_valid_density(rho, tol)});
    }
    return traj;
}

Trajectory evolve_continuous(const KolmogorovGenerator& generator, const RealVector& p0,
                             const std::vector<double>& times, double tol) {
    if (p0.size() != generator.dim())
        throw KindMismatch("initial distribution does not match generator dimension");
    Trajectory traj;
    traj.classical = true;
    for (const double t : times) {
        const RealVector p = exp_kolmogorov(generator.generator, t) * p0;
        traj.points.push_back({t, p, is_valid_distribution(p, tol)});
    }
    return traj;
}

Trajectory evolve_discrete(const MapRep& step, const Matrix& rho0, int n_steps, bool validate,
                           double tol) {
    const int d = step.dim();
    if (rho0.rows() != d || rho0.cols() != d)
        throw KindMismatch("initial state does not match step dimension");
    if (validate) {
        if (!is_trace_preserving(step, tol) || min_eigenvalue(step.choi()) < -tol)
            throw InvalidStepMap("step map is not CPTP within tolerance");
    }
    Trajectory traj;
    traj.classical = false;
    Matrix rho = rho0;
    traj.points.push_back({0.0, rho, is_valid_density(rho, tol)});
    for (int k = 1; k <= n_steps; ++k) {
        rho = step.apply(rho);
        traj.points.push_back({static_cast<double>(k), rho, is_valid_density(rho, tol)});
    }
    return traj;
}

Trajectory evolve_discrete(const RealMatrix& step, const RealVector& p0, int n_steps,
                           bool validate, double tol) {
    if (step.rows() != step.cols() || step.rows() != p0.size())
        throw KindMismatch("initial distribution does not match step dimension");
    if (validate && !classify_stochastic(step, tol).count(StochClass::Column))
        throw InvalidStepMap("step matrix is not column-stochastic within tolerance");
    Trajectory traj;
    traj.classical = true;
    RealVector p = p0;
    traj.points.push_back({0.0, p, is_valid_distribution(p, tol)});
    for (int k = 1; k <= n_steps; ++k) {
        p = step * p;
        traj.points.push_back({static_cast<double>(k), p, is_valid_distribution(p, tol)});
    }
    return traj;
}

}  // namespace posmap
