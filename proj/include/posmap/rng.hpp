// rng.hpp — Seeded splittable PRNG and random-matrix ensembles.
//
// All randomness in the library flows through SplitMix64 so that verdicts are
// reproducible bit-for-bit from (seed, stream index) on any platform. The
// normal sampler is a hand-rolled Box-Muller; std::normal_distribution is
// implementation-defined and would break cross-toolchain reproducibility.

#pragma once

#include <cstdint>
#include <cmath>

#include "posmap/types.hpp"

namespace posmap {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // Warm up so that small seeds do not produce correlated leading draws.
        next_u64();
        next_u64();
    }

    // Derive an independent stream, e.g. one per restart or per sampled basis.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        Rng mixer(seed);
        std::uint64_t s = mixer.next_u64() ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        return Rng(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller, caching the spare draw.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return Complex(re, im) / std::sqrt(2.0);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Complex Ginibre ensemble: i.i.d. standard complex normal entries.
inline Matrix ginibre(Rng& rng, int rows, int cols) {
    Matrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
    return g;
}

inline Vector random_unit_vector(Rng& rng, int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
    return v / v.norm();
}

// GUE-style random Hermitian matrix.
inline Matrix random_hermitian(Rng& rng, int d) {
    return hermitize(ginibre(rng, d, d));
}

// Haar unitary through QR of a Ginibre matrix with the phase convention fixed
// by the sign of R's diagonal.
inline Matrix haar_unitary(Rng& rng, int d) {
    const Matrix g = ginibre(rng, d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const Complex rii = r(i, i);
        const double mag = std::abs(rii);
        q.col(i) *= (mag > 0.0) ? rii / mag : Complex(1.0, 0.0);
    }
    return q;
}

// Full-rank random density matrix GG*/Tr(GG*).
inline Matrix random_density(Rng& rng, int d) {
    const Matrix g = ginibre(rng, d, d);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitize(rho);
}

// Uniform-ish point in the probability simplex (normalized exponentials).
inline RealVector random_simplex(Rng& rng, int d) {
    RealVector p(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        double u = 0.0;
        do {
            u = rng.uniform();
        } while (u <= 0.0);
        p(i) = -std::log(u);
        total += p(i);
    }
    return p / total;
}

// Random column-stochastic matrix: each column an independent simplex point.
inline RealMatrix random_column_stochastic(Rng& rng, int d) {
    RealMatrix s(d, d);
    for (int j = 0; j < d; ++j) s.col(j) = random_simplex(rng, d);
    return s;
}

}  // namespace posmap
