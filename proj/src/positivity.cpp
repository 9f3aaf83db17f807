#include "posmap/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posmap/rng.hpp"

namespace posmap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_hermiticity_preserving(const MapRep& map) {
    if (!is_hermiticity_preserving(map))
        throw NotHermitianPreserving("map is not Hermiticity-preserving");
}

// Partial transpose of a d^2 x d^2 matrix over the second tensor factor.
Matrix partial_transpose_second(const Matrix& m, int d) {
    Matrix out(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out.block(i * d, j * d, d, d) = m.block(i * d, j * d, d, d).transpose();
    return out;
}

Matrix psd_project(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m));
    const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
    return solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
}

// Schmidt components of a vector on C^d (x) C^d via SVD of its matricization.
Witness schmidt_witness_from_vector(const Vector& v, int d, double value) {
    Matrix coeff(d, d);
    for (int i = 0; i < d; ++i) coeff.row(i) = v.segment(i * d, d).transpose();
    Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Witness w;
    w.kind = Witness::Kind::SchmidtVector;
    w.value = value;
    for (int s = 0; s < d; ++s) {
        const double sigma = svd.singularValues()(s);
        if (sigma <= 1e-14) continue;
        w.left.push_back(sigma * svd.matrixU().col(s));
        w.right.push_back(svd.matrixV().col(s).conjugate());
    }
    return w;
}

PositivityVerdict spectral_verdict(const Matrix& choi, int d, Property property, double tol,
                                   std::uint64_t seed = 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(choi));
    const double min_eig = solver.eigenvalues()(0);

    PositivityVerdict verdict;
    verdict.property = property;
    verdict.tolerances.violation_tol = tol;
    verdict.seed = seed;
    verdict.spectral = SpectralCertificate{min_eig, 0};
    if (min_eig >= -tol) {
        verdict.status = VerdictStatus::Certified;
    } else {
        verdict.status = VerdictStatus::Refuted;
        verdict.witness = schmidt_witness_from_vector(solver.eigenvectors().col(0), d, min_eig);
    }
    return verdict;
}

// Orthonormalize the columns of a d x n block via Householder QR.
Matrix orthonormal_columns(const Matrix& m) {
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    return q.leftCols(m.cols());
}

}  // namespace

std::string property_name(const Property& p) {
    switch (p.kind) {
        case PropertyKind::NPositive:
            return "P_" + std::to_string(p.level);
        case PropertyKind::Schwarz:
            return "S_" + std::to_string(p.level);
        case PropertyKind::CompletelyPositive:
            return "CP";
        case PropertyKind::CompletelyCopositive:
            return "coCP";
        case PropertyKind::Decomposable:
            return "decomposable";
        case PropertyKind::TensorStable:
            return "tensor_stable_" + std::to_string(p.level);
        case PropertyKind::Contractive:
            return "contractive_" + std::to_string(p.level);
    }
    return "unknown";
}

Vector assemble_schmidt_vector(const Witness& w) {
    if (w.kind != Witness::Kind::SchmidtVector || w.left.empty())
        throw BadParameter("witness does not carry Schmidt components");
    const Eigen::Index da = w.left.front().size();
    const Eigen::Index db = w.right.front().size();
    Vector v = Vector::Zero(da * db);
    for (std::size_t k = 0; k < w.left.size(); ++k)
        for (Eigen::Index i = 0; i < da; ++i) v.segment(i * db, db) += w.left[k](i) * w.right[k];
    return v;
}

PositivityVerdict check_cp(const MapRep& map, double tol) {
    require_hermiticity_preserving(map);
    return spectral_verdict(map.choi(), map.dim(),
                            Property{PropertyKind::CompletelyPositive, 0}, tol);
}

PositivityVerdict check_cocp(const MapRep& map, double tol) {
    require_hermiticity_preserving(map);
    const MapRep flipped = compose(transposition_map(map.dim()), map);
    return spectral_verdict(flipped.choi(), map.dim(),
                            Property{PropertyKind::CompletelyCopositive, 0}, tol);
}

// --------------------------- n-positivity falsifier -------------------------
//
// Minimizes <v|C|v> over unit vectors v = sum_{k<n} x_k (x) y_k. With one
// block orthonormalized the other block's exact optimum is the minimal
// eigenvector of an nd x nd effective matrix contracted out of the Choi
// matrix, so each alternation step decreases the value monotonically.

namespace {

struct BcdResult {
    double value = kInf;
    Matrix x;  // d x n
    Matrix y;  // d x n
};

Matrix x_effective(const Matrix& choi, const Matrix& y, int d, int n) {
    Matrix h(n * d, n * d);
    for (int i = 0; i < d; ++i)
        for (int ip = 0; ip < d; ++ip) {
            const Matrix g = y.adjoint() * choi.block(i * d, ip * d, d, d) * y;  // n x n
            for (int k = 0; k < n; ++k)
                for (int kp = 0; kp < n; ++kp) h(k * d + i, kp * d + ip) = g(k, kp);
        }
    return h;
}

Matrix y_effective(const Matrix& choi, const Matrix& x, int d, int n) {
    Matrix k_eff(n * d, n * d);
    Matrix sub(d, d);
    for (int l = 0; l < d; ++l)
        for (int lp = 0; lp < d; ++lp) {
            for (int i = 0; i < d; ++i)
                for (int ip = 0; ip < d; ++ip) sub(i, ip) = choi(i * d + l, ip * d + lp);
            const Matrix g = x.adjoint() * sub * x;  // n x n
            for (int k = 0; k < n; ++k)
                for (int kp = 0; kp < n; ++kp) k_eff(k * d + l, kp * d + lp) = g(k, kp);
        }
    return k_eff;
}

BcdResult bcd_restart(const Matrix& choi, int d, int n, const FalsifierOptions& opts, Rng rng) {
    Matrix x = ginibre(rng, d, n);
    Matrix y = ginibre(rng, d, n);
    double value = kInf;

    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        y = orthonormal_columns(y);
        solver.compute(hermitize(x_effective(choi, y, d, n)));
        const Vector xi = solver.eigenvectors().col(0);
        for (int k = 0; k < n; ++k) x.col(k) = xi.segment(k * d, d);

        x = orthonormal_columns(x);
        solver.compute(hermitize(y_effective(choi, x, d, n)));
        const Vector eta = solver.eigenvectors().col(0);
        for (int k = 0; k < n; ++k) y.col(k) = eta.segment(k * d, d);

        const double next = solver.eigenvalues()(0);
        if (value - next < opts.rel_tol * std::max(1.0, std::abs(next))) {
            value = next;
            break;
        }
        value = next;
    }
    return BcdResult{value, x, y};
}

}  // namespace

PositivityVerdict falsify_n_positivity(const MapRep& map, int n, const FalsifierOptions& opts) {
    if (n < 1) throw BadParameter("positivity level must be >= 1");
    require_hermiticity_preserving(map);
    const int d = map.dim();

    if (n >= d) {
        PositivityVerdict verdict = check_cp(map, opts.tol);
        verdict.property = Property{PropertyKind::NPositive, n};
        verdict.seed = opts.seed;
        return verdict;
    }

    const Matrix choi = hermitize(map.choi());
    BcdResult best;
    for (int r = 0; r < opts.restarts; ++r) {
        BcdResult candidate = bcd_restart(choi, d, n, opts, Rng::derive(opts.seed, r));
        if (candidate.value < best.value) best = candidate;
    }

    PositivityVerdict verdict;
    verdict.property = Property{PropertyKind::NPositive, n};
    verdict.tolerances = ToleranceRecord{opts.tol, opts.rel_tol};
    verdict.seed = opts.seed;
    verdict.restarts_used = opts.restarts;

    if (best.value < -opts.tol) {
        Witness w;
        w.kind = Witness::Kind::SchmidtVector;
        for (int k = 0; k < n; ++k) {
            w.left.push_back(best.x.col(k));
            w.right.push_back(best.y.col(k));
        }
        Vector v = assemble_schmidt_vector(w);
        const double norm = v.norm();
        for (auto& lv : w.left) lv /= norm;
        v /= norm;
        w.value = (v.adjoint() * choi * v)(0, 0).real();
        verdict.witness = w;
        verdict.status = VerdictStatus::Refuted;
    } else {
        verdict.status = VerdictStatus::Undetermined;
    }
    return verdict;
}

// ---------------------------- Schwarz falsifier -----------------------------
//
// f(X) = lambda_min of the 2x2 block matrix of the level-n ampliation,
// evaluated at X / ||X||_F. Nonsmooth, so the local search is a derivative-free
// compass walk over the real and imaginary parts of X with a shrinking step.

namespace {

class SchwarzObjective {
public:
    SchwarzObjective(const MapRep& map, int n) : amp_(ampliate(map, n)), m_(map.dim() * n) {
        image_of_identity_ = hermitize(amp_.apply(Matrix::Identity(m_, m_)));
    }

    int side() const { return m_; }

    double operator()(const Matrix& x) const {
        Matrix xn = x / x.norm();
        const Matrix px = amp_.apply(xn);
        const Matrix pxx = hermitize(amp_.apply(xn.adjoint() * xn));
        Matrix block(2 * m_, 2 * m_);
        block.topLeftCorner(m_, m_) = image_of_identity_;
        block.topRightCorner(m_, m_) = px;
        block.bottomLeftCorner(m_, m_) = px.adjoint();
        block.bottomRightCorner(m_, m_) = pxx;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(block, Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0);
    }

private:
    MapRep amp_;
    int m_;
    Matrix image_of_identity_;
};

struct SchwarzCandidate {
    double value = kInf;
    Matrix x;
};

SchwarzCandidate schwarz_restart(const SchwarzObjective& objective, const SchwarzOptions& opts,
                                 Rng rng) {
    const int m = objective.side();
    const double early_stop = -1000.0 * opts.tol;
    const Complex kDirections[4] = {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)};

    Matrix x = ginibre(rng, m, m);
    x /= x.norm();
    double f = objective(x);
    double step = opts.initial_step;

    for (int sweep = 0; sweep < opts.max_sweeps && step >= opts.min_step && f > early_stop;
         ++sweep) {
        bool improved = false;
        for (int r = 0; r < m && f > early_stop; ++r)
            for (int c = 0; c < m && f > early_stop; ++c)
                for (const Complex dir : kDirections) {
                    const Complex saved = x(r, c);
                    x(r, c) = saved + step * dir;
                    const double trial = objective(x);
                    if (trial < f - 1e-15) {
                        f = trial;
                        improved = true;
                    } else {
                        x(r, c) = saved;
                    }
                }
        if (!improved) step *= 0.5;
    }
    return SchwarzCandidate{f, x / x.norm()};
}

}  // namespace

PositivityVerdict falsify_generalized_schwarz(const MapRep& map, int n,
                                              const SchwarzOptions& opts) {
    if (n < 1) throw BadParameter("Schwarz level must be >= 1");
    require_hermiticity_preserving(map);

    const SchwarzObjective objective(map, n);
    SchwarzCandidate best;
    for (int r = 0; r < opts.restarts; ++r) {
        SchwarzCandidate candidate = schwarz_restart(objective, opts, Rng::derive(opts.seed, r));
        if (candidate.value < best.value) best = candidate;
    }

    PositivityVerdict verdict;
    verdict.property = Property{PropertyKind::Schwarz, n};
    verdict.tolerances.violation_tol = opts.tol;
    verdict.seed = opts.seed;
    verdict.restarts_used = opts.restarts;
    if (best.value < -opts.tol) {
        Witness w;
        w.kind = Witness::Kind::SchwarzOperator;
        w.test_operator = best.x;
        w.value = best.value;
        verdict.witness = w;
        verdict.status = VerdictStatus::Refuted;
    } else {
        verdict.status = VerdictStatus::Undetermined;
    }
    return verdict;
}

double spa_lambda(const MapRep& map) {
    require_hermiticity_preserving(map);
    if (!is_trace_preserving(map)) throw NotTracePreserving("map is not trace-preserving");
    const double mu = min_eigenvalue(map.choi());
    if (mu >= 0.0) return 0.0;
    const double d = static_cast<double>(map.dim());
    return d * std::abs(mu) / (1.0 + d * std::abs(mu));
}

PositivityVerdict decompose_map(const MapRep& map, const DykstraOptions& opts) {
    require_hermiticity_preserving(map);
    const int d = map.dim();
    const Matrix choi = hermitize(map.choi());
    const Eigen::Index dd = choi.rows();

    Matrix a = choi;
    Matrix b = Matrix::Zero(dd, dd);
    Matrix corr_a = Matrix::Zero(dd, dd);
    Matrix corr_b = Matrix::Zero(dd, dd);

    PositivityVerdict verdict;
    verdict.property = Property{PropertyKind::Decomposable, 0};
    verdict.tolerances.violation_tol = opts.tol;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // Projection onto the affine set A + B^Gamma = C.
        const Matrix residual = a + partial_transpose_second(b, d) - choi;
        const Matrix a1 = a - 0.5 * residual;
        const Matrix b1 = b - 0.5 * partial_transpose_second(residual, d);

        // Dykstra-corrected projection onto the PSD cone pair.
        const Matrix ta = a1 + corr_a;
        const Matrix tb = b1 + corr_b;
        a = psd_project(ta);
        b = psd_project(tb);
        corr_a = ta - a;
        corr_b = tb - b;

        const double gap = (a + partial_transpose_second(b, d) - choi).norm();
        if (gap < opts.tol) {
            verdict.status = VerdictStatus::Certified;
            verdict.decomposition = DecompositionCertificate{a, b, gap};
            return verdict;
        }
    }
    verdict.status = VerdictStatus::Undetermined;
    return verdict;
}

PositivityVerdict falsify_tensor_stable_positivity(const MapRep& map, int n,
                                                   const FalsifierOptions& opts) {
    if (n < 1) throw BadParameter("tensor power must be >= 1");
    require_hermiticity_preserving(map);
    double power_dim = 1.0;
    for (int i = 0; i < n; ++i) {
        power_dim *= map.dim();
        if (power_dim > 64.0) throw ResourceLimit("tensor power dimension exceeds 64");
    }

    MapRep power = map;
    for (int i = 1; i < n; ++i) power = tensor(power, map);

    PositivityVerdict verdict = falsify_n_positivity(power, 1, opts);
    verdict.property = Property{PropertyKind::TensorStable, n};
    return verdict;
}

PositivityVerdict check_trace_norm_contractivity(const MapRep& map, int n, int samples,
                                                 std::uint64_t seed, double tol) {
    require_hermiticity_preserving(map);
    if (!is_trace_preserving(map)) throw NotTracePreserving("map is not trace-preserving");
    const int d = map.dim();
    if (n < 1 || n > d * d) throw BadParameter("contractivity level must be in [1, d^2]");

    const MapRep ampliated = ampliate(map, d);

    PositivityVerdict verdict;
    verdict.property = Property{PropertyKind::Contractive, n};
    verdict.tolerances.violation_tol = tol;
    verdict.seed = seed;
    verdict.restarts_used = samples;
    verdict.status = VerdictStatus::Undetermined;

    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(s));
        Matrix x = Matrix::Zero(d * d, d * d);
        for (int m = 0; m < n; ++m) {
            const Matrix herm = random_hermitian(rng, d);
            const Matrix rho = random_density(rng, d);
            x += kron(herm, rho);
        }
        const double before = trace_norm_hermitian(x);
        const double after = trace_norm_hermitian(ampliated.apply(x));
        if (after > before + tol) {
            Witness w;
            w.kind = Witness::Kind::HermitianTestOperator;
            w.test_operator = x;
            w.value = before - after;
            verdict.witness = w;
            verdict.status = VerdictStatus::Refuted;
            verdict.restarts_used = s + 1;
            break;
        }
    }
    return verdict;
}

HierarchyReport classify(const MapRep& map, const ClassifyOptions& opts) {
    require_hermiticity_preserving(map);
    const int d = map.dim();

    HierarchyReport report;
    report.d = d;
    report.flags = structural_flags(map);
    report.cp = check_cp(map, opts.positivity.tol);
    report.cocp = check_cocp(map, opts.positivity.tol);
    if (opts.run_decomposable) {
        report.decomposable = decompose_map(map, opts.dykstra);
    } else {
        report.decomposable.property = Property{PropertyKind::Decomposable, 0};
        report.decomposable.status = VerdictStatus::Undetermined;
    }

    report.p_levels.resize(d);
    report.s_levels.resize(d);

    if (report.cp.status == VerdictStatus::Certified) {
        // CP certifies every weaker level with the same spectral certificate.
        for (int n = 1; n <= d; ++n) {
            PositivityVerdict v;
            v.status = VerdictStatus::Certified;
            v.spectral = report.cp.spectral;
            v.tolerances = report.cp.tolerances;
            v.property = Property{PropertyKind::NPositive, n};
            report.p_levels[n - 1] = v;
            v.property = Property{PropertyKind::Schwarz, n};
            report.s_levels[n - 1] = v;
        }
        return report;
    }

    // Walk the chain P_1, S_1, P_2, ..., P_d, S_d from weakest to strongest;
    // once a level is refuted every stronger one inherits the witness.
    std::optional<Witness> inherited;
    for (int n = 1; n <= d; ++n) {
        for (const PropertyKind kind : {PropertyKind::NPositive, PropertyKind::Schwarz}) {
            PositivityVerdict v;
            if (inherited.has_value()) {
                v.property = Property{kind, n};
                v.status = VerdictStatus::Refuted;
                v.witness = inherited;
                v.tolerances.violation_tol = opts.positivity.tol;
            } else if (n == d) {
                v = report.cp;  // exact collapse at the top of the chain
                v.property = Property{kind, n};
            } else if (kind == PropertyKind::NPositive) {
                v = falsify_n_positivity(map, n, opts.positivity);
            } else {
                v = falsify_generalized_schwarz(map, n, opts.schwarz);
            }
            if (v.status == VerdictStatus::Refuted && !inherited.has_value())
                inherited = v.witness;
            if (kind == PropertyKind::NPositive)
                report.p_levels[n - 1] = v;
            else
                report.s_levels[n - 1] = v;
        }
    }
    return report;
}

// ------------------------- closed-form family oracle ------------------------

bool oracle_phi_family(PhiFamilyKind kind, int d, double a, OracleProperty property, int n) {
    if (d < 1) throw BadParameter("dimension must be positive");
    if (a == static_cast<double>(d)) throw BadParameter("family parameter a must differ from d");
    const bool needs_level = property != OracleProperty::CompletelyPositive;
    if (needs_level && (n < 1 || n > d)) throw BadParameter("level must be in [1, d]");
    if (d == 1) return true;  // scalar maps collapse to the identity

    const double dd = static_cast<double>(d);
    if (kind == PhiFamilyKind::Plain) {
        switch (property) {
            case OracleProperty::CompletelyPositive:
                return a <= 1.0 / dd;
            case OracleProperty::NPositive:
                return a <= 1.0 / n;
            case OracleProperty::Schwarz:
                return n == d ? a <= 1.0 / dd : a <= dd / (1.0 + n * dd);
        }
    } else {
        switch (property) {
            case OracleProperty::CompletelyPositive:
                return -1.0 <= a && a <= 1.0;
            case OracleProperty::NPositive:
                return n == 1 ? a <= 1.0 : (-1.0 <= a && a <= 1.0);
            case OracleProperty::Schwarz:
                if (n == 1) return 2.0 * dd / (1.0 - std::sqrt(4.0 * dd + 1.0)) <= a && a <= 1.0;
                return -1.0 <= a && a <= 1.0;
        }
    }
    return false;
}

OracleInterval oracle_phi_interval(PhiFamilyKind kind, int d, OracleProperty property, int n) {
    const double dd = static_cast<double>(d);
    if (kind == PhiFamilyKind::Plain) {
        switch (property) {
            case OracleProperty::CompletelyPositive:
                return {-kInf, 1.0 / dd};
            case OracleProperty::NPositive:
                return {-kInf, 1.0 / n};
            case OracleProperty::Schwarz:
                return {-kInf, n == d ? 1.0 / dd : dd / (1.0 + n * dd)};
        }
    } else {
        switch (property) {
            case OracleProperty::CompletelyPositive:
                return {-1.0, 1.0};
            case OracleProperty::NPositive:
                return {n == 1 ? -kInf : -1.0, 1.0};
            case OracleProperty::Schwarz:
                if (n == 1) return {2.0 * dd / (1.0 - std::sqrt(4.0 * dd + 1.0)), 1.0};
                return {-1.0, 1.0};
        }
    }
    return {-kInf, kInf};
}

}  // namespace posmap
