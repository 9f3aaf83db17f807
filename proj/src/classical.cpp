#include "posmap/classical.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "posmap/rng.hpp"

namespace posmap {

ProbabilityVector ProbabilityVector::make(RealVector v, double tol, bool renormalize) {
    if (v.size() < 1) throw DimensionMismatch("probability vector must be nonempty");
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) < -tol) throw NotInSimplex("negative probability entry");
        if (renormalize && v(i) < 0.0) v(i) = 0.0;
    }
    const double total = v.sum();
    if (std::abs(total - 1.0) > tol) {
        if (!renormalize) throw NotInSimplex("probabilities do not sum to 1");
        if (total <= 0.0) throw NotInSimplex("probabilities sum to zero");
        v /= total;
    }
    ProbabilityVector p;
    p.p = std::move(v);
    return p;
}

ProbabilityVector ProbabilityVector::uniform(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    return ProbabilityVector{RealVector::Constant(d, 1.0 / d)};
}

BasisChoice BasisChoice::canonical(int d) {
    if (d < 1) throw BadParameter("dimension must be positive");
    return BasisChoice{Matrix::Identity(d, d)};
}

BasisChoice BasisChoice::from_unitary(Matrix u, double tol) {
    const int d = static_cast<int>(u.rows());
    if (u.cols() != d) throw DimensionMismatch("basis must be square");
    if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol)
        throw BadParameter("basis matrix is not unitary within tolerance");
    return BasisChoice{std::move(u)};
}

GklsGenerator GklsGenerator::make(Matrix h, std::vector<Matrix> jumps, double tol) {
    const int d = static_cast<int>(h.rows());
    if (h.cols() != d) throw DimensionMismatch("Hamiltonian must be square");
    if (!is_hermitian(h, tol)) throw BadParameter("Hamiltonian must be Hermitian");
    for (const Matrix& j : jumps)
        if (j.rows() != d || j.cols() != d) throw DimensionMismatch("jump operator dimension mismatch");
    return GklsGenerator{std::move(h), std::move(jumps)};
}

GklsGenerator GklsGenerator::dissipative(int d, std::vector<Matrix> jumps) {
    return make(Matrix::Zero(d, d), std::move(jumps));
}

std::set<StochClass> classify_stochastic(const RealMatrix& m, double tol,
                                         const std::optional<Matrix>& unitary) {
    if (m.rows() != m.cols()) throw DimensionMismatch("stochastic candidate must be square");
    const int d = static_cast<int>(m.rows());
    std::set<StochClass> classes;

    const bool nonneg = (m.array() >= -tol).all();
    bool rows_sum_one = true;
    bool cols_sum_one = true;
    for (int i = 0; i < d; ++i) {
        if (std::abs(m.row(i).sum() - 1.0) > tol) rows_sum_one = false;
        if (std::abs(m.col(i).sum() - 1.0) > tol) cols_sum_one = false;
    }

    if (nonneg && rows_sum_one) classes.insert(StochClass::Row);
    if (nonneg && cols_sum_one) classes.insert(StochClass::Column);
    if (nonneg && rows_sum_one && cols_sum_one) classes.insert(StochClass::Bi);
    if (cols_sum_one) classes.insert(StochClass::Pseudo);
    if (cols_sum_one && rows_sum_one) classes.insert(StochClass::PseudoBi);

    if (unitary.has_value()) {
        if (unitary->rows() != d || unitary->cols() != d)
            throw DimensionMismatch("unitary dimension mismatch");
        bool ortho = true;
        for (int i = 0; i < d && ortho; ++i)
            for (int j = 0; j < d && ortho; ++j)
                if (std::abs(std::norm((*unitary)(i, j)) - m(i, j)) > tol) ortho = false;
        if (ortho) classes.insert(StochClass::Ortho);
    }
    return classes;
}

StochasticMatrix tag_stochastic(const RealMatrix& m, double tol,
                                const std::optional<Matrix>& unitary) {
    StochasticMatrix s;
    s.m = m;
    s.classes = classify_stochastic(m, tol, unitary);
    if (s.classes.count(StochClass::Ortho)) s.ortho_unitary = unitary;
    return s;
}

Matrix gamma_embed(const ProbabilityVector& p) {
    const int d = p.dim();
    Matrix rho = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) rho(i, i) = p.p(i);
    return rho;
}

Matrix pi_embed(const ProbabilityVector& p, const RealVector& phases) {
    const int d = p.dim();
    if (phases.size() != d) throw DimensionMismatch("phase vector length mismatch");
    Vector psi(d);
    for (int j = 0; j < d; ++j)
        psi(j) = std::sqrt(p.p(j)) * std::exp(Complex(0.0, phases(j)));
    return psi * psi.adjoint();
}

ProbabilityVector omega_reduce(const Matrix& rho, const BasisChoice& basis) {
    const int d = static_cast<int>(rho.rows());
    if (rho.cols() != d || basis.dim() != d) throw DimensionMismatch("omega_reduce: dimension mismatch");
    RealVector p(d);
    for (int i = 0; i < d; ++i) {
        const Vector bi = basis.unitary.col(i);
        p(i) = (bi.adjoint() * rho * bi)(0, 0).real();
    }
    return ProbabilityVector::make(std::move(p), 1e-9, /*renormalize=*/true);
}

ProbabilityVector omega_reduce(const Matrix& rho) {
    return omega_reduce(rho, BasisChoice::canonical(static_cast<int>(rho.rows())));
}

MapRep channel_from_stochastic(const StochasticMatrix& s) {
    if (!s.classes.count(StochClass::Column))
        throw NotColumnStochastic("matrix is not column-stochastic");
    const int d = s.dim();
    Matrix superop = Matrix::Zero(d * d, d * d);
    // Phi(E_jj) = sum_i S_ij E_ii; off-diagonal matrix units are annihilated.
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) superop(i * d + i, j * d + j) = s.m(i, j);
    return MapRep(std::move(superop));
}

MapRep channel_from_stochastic(const RealMatrix& s, double tol) {
    return channel_from_stochastic(tag_stochastic(s, tol));
}

StochasticMatrix stochastic_from_map(const MapRep& map, const BasisChoice& basis) {
    const int d = map.dim();
    if (basis.dim() != d) throw DimensionMismatch("basis dimension mismatch");
    RealMatrix s(d, d);
    for (int j = 0; j < d; ++j) {
        const Vector bj = basis.unitary.col(j);
        const Matrix image = map.apply(bj * bj.adjoint());
        for (int i = 0; i < d; ++i) {
            const Vector bi = basis.unitary.col(i);
            s(i, j) = (bi.adjoint() * image * bi)(0, 0).real();
        }
    }
    return tag_stochastic(s);
}

StochasticMatrix stochastic_from_map(const MapRep& map) {
    return stochastic_from_map(map, BasisChoice::canonical(map.dim()));
}

StrongPositivityVerdict check_strong_positivity(const MapRep& map, int samples,
                                                std::uint64_t seed, double tol) {
    const int d = map.dim();
    StrongPositivityVerdict verdict;
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(s));
        const Vector psi = random_unit_vector(rng, d);
        const Vector phi = random_unit_vector(rng, d);
        const double value = (psi.adjoint() * map.apply(phi * phi.adjoint()) * psi)(0, 0).real();
        verdict.value = std::min(verdict.value, value);
        verdict.samples_used = s + 1;
        if (value < -tol) {
            verdict.refuted = true;
            verdict.psi = psi;
            verdict.phi = phi;
            break;
        }
    }
    return verdict;
}

KolmogorovGenerator kolmogorov_from_rates(const RealMatrix& w) {
    if (w.rows() != w.cols()) throw DimensionMismatch("rate matrix must be square");
    const int d = static_cast<int>(w.rows());
    RealMatrix rates = w;
    for (int i = 0; i < d; ++i) rates(i, i) = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && rates(i, j) < 0.0) throw NegativeRate("off-diagonal rate is negative");

    RealMatrix l = rates;
    for (int j = 0; j < d; ++j) l(j, j) -= rates.col(j).sum();
    return KolmogorovGenerator{std::move(rates), std::move(l)};
}

bool is_kolmogorov(const RealMatrix& l, double tol) {
    if (l.rows() != l.cols()) return false;
    const int d = static_cast<int>(l.rows());
    for (int j = 0; j < d; ++j) {
        if (std::abs(l.col(j).sum()) > tol) return false;
        for (int i = 0; i < d; ++i)
            if (i != j && l(i, j) < -tol) return false;
    }
    return true;
}

GklsGenerator gkls_from_kolmogorov(const KolmogorovGenerator& l) {
    const int d = l.dim();
    std::vector<Matrix> jumps;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j || l.rates(i, j) == 0.0) continue;
            Matrix jump = Matrix::Zero(d, d);
            jump(i, j) = std::sqrt(l.rates(i, j));
            jumps.push_back(std::move(jump));
        }
    return GklsGenerator::dissipative(d, std::move(jumps));
}

RealMatrix kolmogorov_from_gkls(const MapRep& generator, const BasisChoice& basis) {
    const int d = generator.dim();
    if (basis.dim() != d) throw DimensionMismatch("basis dimension mismatch");
    RealMatrix l(d, d);
    for (int j = 0; j < d; ++j) {
        const Vector bj = basis.unitary.col(j);
        const Matrix image = generator.apply(bj * bj.adjoint());
        for (int i = 0; i < d; ++i) {
            const Vector bi = basis.unitary.col(i);
            l(i, j) = (bi.adjoint() * image * bi)(0, 0).real();
        }
    }
    return l;
}

RealMatrix kolmogorov_from_gkls(const MapRep& generator) {
    return kolmogorov_from_gkls(generator, BasisChoice::canonical(generator.dim()));
}

ReductionComparison compare_generator_reductions(const MapRep& generator,
                                                 const BasisChoice& basis,
                                                 const std::vector<double>& times) {
    const RealMatrix reduced = kolmogorov_from_gkls(generator, basis);
    ReductionComparison report;
    for (const double t : times) {
        ReductionComparison::Row row;
        row.t = t;
        row.from_reduced_generator = RealMatrix((t * reduced).exp());
        const MapRep propagator(Matrix((t * generator.superop()).exp()));
        row.reduced_propagator = stochastic_from_map(propagator, basis).m;
        row.max_deviation =
            (row.from_reduced_generator - row.reduced_propagator).cwiseAbs().maxCoeff();
        report.worst_deviation = std::max(report.worst_deviation, row.max_deviation);
        report.rows.push_back(std::move(row));
    }
    return report;
}

KossakowskiVerdict kossakowski_sample_check(const MapRep& generator, int n_bases,
                                            std::uint64_t seed, double tol) {
    const int d = generator.dim();
    KossakowskiVerdict verdict;
    for (int b = 0; b < n_bases; ++b) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(b));
        const Matrix u = haar_unitary(rng, d);
        const RealMatrix l = kolmogorov_from_gkls(generator, BasisChoice{u});
        verdict.bases_checked = b + 1;
        if (!is_kolmogorov(l, tol)) {
            verdict.consistent = false;
            verdict.failing_basis = u;
            verdict.failing_reduction = l;
            break;
        }
    }
    return verdict;
}

}  // namespace posmap
