#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace subdiff::spec {

inline constexpr int kMaxDim = 6;

// Lattice point n in Z^N with eigenvalue |n|^2 = n_1^2 + ... + n_N^2.
struct Mode {
    std::array<int, kMaxDim> n{};
    int dim = 0;

    int norm2() const {
        int s = 0;
        for (int d = 0; d < dim; ++d) s += n[d] * n[d];
        return s;
    }
    Mode negated() const {
        Mode m = *this;
        for (int d = 0; d < dim; ++d) m.n[d] = -n[d];
        return m;
    }
    bool operator==(const Mode& o) const { return dim == o.dim && n == o.n; }
    bool operator<(const Mode& o) const { return n < o.n; } // lexicographic
};

// Band-limited Fourier data {g_n : |n|^2 < band_K} with the coefficient
// convention g_n = (2pi)^{-N} int g(x) e^{-inx} dx and synthesis
// sum_n g_n e^{inx}. Modes are kept lexicographically sorted, which fixes
// the reduction order everywhere downstream.
struct SpectralField {
    int dim_N = 0;
    double band_K = 0.0;
    std::vector<Mode> modes;                  // sorted, unique
    std::vector<std::complex<double>> coeffs; // parallel to modes

    std::size_t size() const { return modes.size(); }
    // index of a mode, or npos
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const Mode& m) const;
    std::complex<double> at(const Mode& m) const; // 0 if absent
    void sort_canonical();                        // sort modes (with coeffs) lexicographically
    void validate() const;                        // band/dim invariants

    // all lattice points |n|^2 < K, coefficients zero
    static SpectralField zeros(int dim_N, double band_K);
};

// Uniform samples on the torus (-pi, pi]^N: along each axis
// x_k = -pi + 2 pi (k+1)/M, k = 0..M-1, row-major flattening.
struct PhysicalGrid {
    int dim_N = 0;
    int points_per_axis = 0;
    std::vector<std::complex<double>> samples;

    std::size_t size() const { return samples.size(); }
    double coord(int k) const;
    std::size_t flat_index(const std::array<int, kMaxDim>& idx) const;
};

// Smallest grid that resolves the band without aliasing.
int min_grid_points(double band_K);

// Discrete Fourier coefficients g_n = M^{-N} sum_x g(x) e^{-inx} for all
// |n|^2 < band_K; exact for band-limited g on an alias-free grid.
// Throws std::domain_error if the grid is too coarse for the band.
SpectralField analyze(const PhysicalGrid& grid, double band_K);

// Samples of sum_n g_n e^{inx} on the M^N grid. analyze(synthesize(F)) = F
// on alias-free grids.
PhysicalGrid synthesize(const SpectralField& field, int grid_M);

// Direct-evaluation serial references for the two transforms.
SpectralField analyze_ref(const PhysicalGrid& grid, double band_K);
PhysicalGrid synthesize_ref(const SpectralField& field, int grid_M);

// A in frequency space: g_n -> |n|^2 g_n.
SpectralField laplacian_apply(const SpectralField& field);

// Operator power: g_n -> |n|^tau g_n (|0|^0 = 1, so tau = 0 is the
// identity). tau < 0 requires a vanishing mean mode.
SpectralField frac_power_apply(const SpectralField& field, double tau);

// Liouville norm ( sum (1+|n|^2)^a |g_n|^2 )^{1/2}; mode-ordered serial
// reduction, bit-stable.
double liouville_norm(const SpectralField& field, double a);

// Dyadic-shell mass profile and the a > N/2 membership flag.
struct MembershipReport {
    double a = 0.0;
    int dim_N = 0;
    bool condition_met = false; // a > N/2
    double norm = 0.0;          // liouville_norm(field, a)
    double zero_mode_mass = 0.0;
    struct Shell {
        int j;       // |n|^2 in [2^j, 2^{j+1})
        double mass; // sum over the shell of (1+|n|^2)^a |g_n|^2
    };
    std::vector<Shell> shells;
    double fitted_decay_rate = 0.0; // least-squares slope of log2(mass) vs j
};
MembershipReport membership_report(const SpectralField& field, double a, int N);

// Conjugate symmetry g_{-n} = conj(g_n) within tol (real-valued fields).
bool conjugate_symmetric(const SpectralField& field, double tol);

// M^{-N} sum |samples|^2; equals sum |g_n|^2 for alias-free band-limited data.
double parseval_l2sq(const PhysicalGrid& grid);

} // namespace subdiff::spec
