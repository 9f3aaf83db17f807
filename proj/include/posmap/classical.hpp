// classical.hpp — Stochasticity classification, classical <-> quantum state
// embeddings and reductions, generator correspondences, and the random-basis
// consistency check for semigroup generators.
//
// Every basis-dependent mapping defaults to the canonical (computational)
// basis; a BasisChoice carries an explicit orthonormal frame otherwise.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "posmap/linmap.hpp"
#include "posmap/types.hpp"

namespace posmap {

// ------------------------------ domain types -------------------------------

struct ProbabilityVector {
    RealVector p;

    int dim() const { return static_cast<int>(p.size()); }

    // Validates simplex membership within tol; with renormalize set, entries
    // in [-tol, 0) are clipped to 0 and the vector rescaled.
    static ProbabilityVector make(RealVector v, double tol = 1e-12, bool renormalize = false);

    static ProbabilityVector uniform(int d);
};

enum class StochClass { Row, Column, Bi, Ortho, Pseudo, PseudoBi };

struct StochasticMatrix {
    RealMatrix m;
    std::set<StochClass> classes;
    std::optional<Matrix> ortho_unitary;  // recorded when the Ortho class holds

    int dim() const { return static_cast<int>(m.rows()); }
};

struct BasisChoice {
    Matrix unitary;  // columns are the basis vectors

    static BasisChoice canonical(int d);
    static BasisChoice from_unitary(Matrix u, double tol = 1e-10);
    int dim() const { return static_cast<int>(unitary.rows()); }
};

struct KolmogorovGenerator {
    RealMatrix rates;      // W: nonnegative off-diagonal, zero diagonal
    RealMatrix generator;  // L_ij = W_ij - delta_ij sum_k W_kj

    int dim() const { return static_cast<int>(generator.rows()); }
};

struct GklsGenerator {
    Matrix hamiltonian;
    std::vector<Matrix> jumps;

    int dim() const { return static_cast<int>(hamiltonian.rows()); }

    static GklsGenerator make(Matrix h, std::vector<Matrix> jumps, double tol = 1e-10);
    static GklsGenerator dissipative(int d, std::vector<Matrix> jumps);
};

// ------------------------------- operations --------------------------------

// Every class the matrix satisfies within tol. Orthostochasticity is checked
// only when a unitary is supplied.
std::set<StochClass> classify_stochastic(const RealMatrix& m, double tol = 1e-10,
                                         const std::optional<Matrix>& unitary = std::nullopt);

StochasticMatrix tag_stochastic(const RealMatrix& m, double tol = 1e-10,
                                const std::optional<Matrix>& unitary = std::nullopt);

// p -> diag(p) in the canonical basis.
Matrix gamma_embed(const ProbabilityVector& p);

// p, phases -> rank-one projector onto sum_j sqrt(p_j) e^{i phi_j} |j>.
Matrix pi_embed(const ProbabilityVector& p, const RealVector& phases);

// rho -> (<i|rho|i>)_i in the chosen basis; tiny negative populations are
// clipped and the vector renormalized.
ProbabilityVector omega_reduce(const Matrix& rho, const BasisChoice& basis);
ProbabilityVector omega_reduce(const Matrix& rho);

// Column-stochastic S -> the diagonal channel X -> sum_ij S_ij <j|X|j> E_ii.
MapRep channel_from_stochastic(const StochasticMatrix& s);
MapRep channel_from_stochastic(const RealMatrix& s, double tol = 1e-10);

// Any linear map -> S_ij = <i|Phi(|j><j|)|i> in the chosen basis, tagged with
// whatever stochasticity classes the result satisfies.
StochasticMatrix stochastic_from_map(const MapRep& map, const BasisChoice& basis);
StochasticMatrix stochastic_from_map(const MapRep& map);

// Samples random (generally non-orthogonal) vector pairs and refutes
// positivity on <psi|Phi(|phi><phi|)|psi> < -tol. Undetermined otherwise.
struct StrongPositivityVerdict {
    bool refuted = false;
    double value = 0.0;  // most negative sampled form
    Vector psi;          // witness pair when refuted
    Vector phi;
    int samples_used = 0;
};
StrongPositivityVerdict check_strong_positivity(const MapRep& map, int samples,
                                                std::uint64_t seed,
                                                double tol = kDefaultViolationTol);

KolmogorovGenerator kolmogorov_from_rates(const RealMatrix& w);
bool is_kolmogorov(const RealMatrix& l, double tol = 1e-10);

// L -> dissipative generator with jump operators sqrt(W_ij) |i><j|.
GklsGenerator gkls_from_kolmogorov(const KolmogorovGenerator& l);

// Generator reduction L_ij = <i| L(|j><j|) |i> for an arbitrary generator
// superoperator (the generator need not be of GKLS form).
RealMatrix kolmogorov_from_gkls(const MapRep& generator, const BasisChoice& basis);
RealMatrix kolmogorov_from_gkls(const MapRep& generator);

// Draws Haar-random bases and reports the first basis (if any) whose
// reduction fails to be a Kolmogorov generator.
struct KossakowskiVerdict {
    bool consistent = true;
    int bases_checked = 0;
    std::optional<Matrix> failing_basis;
    RealMatrix failing_reduction;
};
KossakowskiVerdict kossakowski_sample_check(const MapRep& generator, int n_bases,
                                            std::uint64_t seed, double tol = 1e-10);

// Two classical shadows of a quantum semigroup: exp(t L_reduced) built from
// the reduced generator, against the reduction of each propagator exp(t L).
// The two disagree in general; the report records both and their gap without
// preferring either.
struct ReductionComparison {
    struct Row {
        double t = 0.0;
        RealMatrix from_reduced_generator;  // exp(t * reduce(L))
        RealMatrix reduced_propagator;      // reduce(exp(t * L))
        double max_deviation = 0.0;
    };
    std::vector<Row> rows;
    double worst_deviation = 0.0;
};
ReductionComparison compare_generator_reductions(const MapRep& generator,
                                                 const BasisChoice& basis,
                                                 const std::vector<double>& times);

}  // namespace posmap
