#include "subdiff/spectral.hpp"

#include "subdiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subdiff::spec {

namespace {

using cplx = std::complex<double>;

int band_radius(double band_K) {
    // largest |n_i| possible with |n|^2 < K
    if (!(band_K > 0.0)) throw std::domain_error("spectral: band_K must be positive");
    int r = static_cast<int>(std::floor(std::sqrt(band_K)));
    while (static_cast<double>(r) * r >= band_K) --r;
    return std::max(r, 0);
}

void check_dim(int dim_N) {
    if (dim_N < 1 || dim_N > kMaxDim)
        throw std::domain_error("spectral: dimension must lie in [1, 6]");
}

// per-axis tables e^{+i n x_k} for n in [-R, R]
std::vector<std::vector<cplx>> phase_table(int R, int M) {
    std::vector<std::vector<cplx>> t(2 * R + 1, std::vector<cplx>(M));
    for (int n = -R; n <= R; ++n)
        for (int k = 0; k < M; ++k) {
            double x = -M_PI + 2.0 * M_PI * (k + 1) / static_cast<double>(M);
            t[n + R][k] = std::polar(1.0, n * x);
        }
    return t;
}

void unflatten(std::size_t flat, int dim, int M, std::array<int, kMaxDim>& idx) {
    for (int d = dim - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % static_cast<std::size_t>(M));
        flat /= static_cast<std::size_t>(M);
    }
}

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

} // namespace

std::size_t SpectralField::find(const Mode& m) const {
    auto it = std::lower_bound(modes.begin(), modes.end(), m);
    if (it != modes.end() && *it == m)
        return static_cast<std::size_t>(it - modes.begin());
    return npos;
}

std::complex<double> SpectralField::at(const Mode& m) const {
    std::size_t i = find(m);
    return i == npos ? cplx{0.0, 0.0} : coeffs[i];
}

void SpectralField::sort_canonical() {
    std::vector<std::size_t> order(modes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return modes[a] < modes[b]; });
    std::vector<Mode> m2(modes.size());
    std::vector<cplx> c2(coeffs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        m2[i] = modes[order[i]];
        c2[i] = coeffs[order[i]];
    }
    modes = std::move(m2);
    coeffs = std::move(c2);
}

void SpectralField::validate() const {
    check_dim(dim_N);
    if (!(band_K > 0.0)) throw std::domain_error("SpectralField: band_K must be positive");
    if (modes.size() != coeffs.size())
        throw std::domain_error("SpectralField: modes/coeffs size mismatch");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].dim != dim_N) throw std::domain_error("SpectralField: mode dimension mismatch");
        if (static_cast<double>(modes[i].norm2()) >= band_K)
            throw std::domain_error("SpectralField: mode outside the band");
        if (i > 0 && !(modes[i - 1] < modes[i]))
            throw std::domain_error("SpectralField: modes must be sorted and unique");
    }
}

SpectralField SpectralField::zeros(int dim_N, double band_K) {
    check_dim(dim_N);
    const int R = band_radius(band_K);
    SpectralField f;
    f.dim_N = dim_N;
    f.band_K = band_K;
    Mode m;
    m.dim = dim_N;
    // lexicographic enumeration of |n|^2 < K
    std::array<int, kMaxDim> cur{};
    auto rec = [&](auto&& self, int d, int n2) -> void {
        if (d == dim_N) {
            if (n2 < band_K) {
                Mode mm;
                mm.dim = dim_N;
                mm.n = cur;
                f.modes.push_back(mm);
            }
            return;
        }
        for (int v = -R; v <= R; ++v) {
            int nn = n2 + v * v;
            if (static_cast<double>(nn) >= band_K) continue;
            cur[d] = v;
            self(self, d + 1, nn);
        }
        cur[d] = 0;
    };
    rec(rec, 0, 0);
    f.coeffs.assign(f.modes.size(), cplx{0.0, 0.0});
    return f;
}

double PhysicalGrid::coord(int k) const {
    return -M_PI + 2.0 * M_PI * (k + 1) / static_cast<double>(points_per_axis);
}

std::size_t PhysicalGrid::flat_index(const std::array<int, kMaxDim>& idx) const {
    std::size_t f = 0;
    for (int d = 0; d < dim_N; ++d)
        f = f * static_cast<std::size_t>(points_per_axis) + static_cast<std::size_t>(idx[d]);
    return f;
}

int min_grid_points(double band_K) {
    return 2 * static_cast<int>(std::ceil(std::sqrt(band_K))) + 1;
}

SpectralField analyze(const PhysicalGrid& grid, double band_K) {
    check_dim(grid.dim_N);
    const int M = grid.points_per_axis;
    if (M < min_grid_points(band_K))
        throw std::domain_error("analyze: grid too coarse for the band (aliasing)");
    if (grid.samples.size() != ipow(M, grid.dim_N))
        throw std::domain_error("analyze: sample count does not match M^N");

    SpectralField f = SpectralField::zeros(grid.dim_N, band_K);
    const int R = band_radius(band_K);
    const auto table = phase_table(R, M);
    const double norm = 1.0 / static_cast<double>(ipow(M, grid.dim_N));
    const std::size_t npts = grid.samples.size();

    par::for_each_index(static_cast<std::ptrdiff_t>(f.size()), true, [&](std::ptrdiff_t mi) {
        const Mode& mode = f.modes[mi];
        cplx acc{0.0, 0.0};
        std::array<int, kMaxDim> idx{};
        for (std::size_t p = 0; p < npts; ++p) {
            unflatten(p, grid.dim_N, M, idx);
            cplx phase{1.0, 0.0};
            for (int d = 0; d < grid.dim_N; ++d)
                phase *= table[mode.n[d] + R][idx[d]];
            acc += grid.samples[p] * std::conj(phase);
        }
        f.coeffs[mi] = acc * norm;
    });
    return f;
}

PhysicalGrid synthesize(const SpectralField& field, int grid_M) {
    field.validate();
    if (grid_M < min_grid_points(field.band_K))
        throw std::domain_error("synthesize: grid too coarse for the band (aliasing)");
    const int R = band_radius(field.band_K);
    const auto table = phase_table(R, grid_M);

    PhysicalGrid g;
    g.dim_N = field.dim_N;
    g.points_per_axis = grid_M;
    g.samples.assign(ipow(grid_M, field.dim_N), cplx{0.0, 0.0});

    par::for_each_index(static_cast<std::ptrdiff_t>(g.samples.size()), true, [&](std::ptrdiff_t p) {
        std::array<int, kMaxDim> idx{};
        unflatten(static_cast<std::size_t>(p), field.dim_N, grid_M, idx);
        cplx acc{0.0, 0.0};
        for (std::size_t mi = 0; mi < field.size(); ++mi) {
            cplx phase{1.0, 0.0};
            for (int d = 0; d < field.dim_N; ++d)
                phase *= table[field.modes[mi].n[d] + R][idx[d]];
            acc += field.coeffs[mi] * phase;
        }
        g.samples[p] = acc;
    });
    return g;
}

SpectralField analyze_ref(const PhysicalGrid& grid, double band_K) {
    check_dim(grid.dim_N);
    const int M = grid.points_per_axis;
    if (M < min_grid_points(band_K))
        throw std::domain_error("analyze_ref: grid too coarse for the band (aliasing)");
    SpectralField f = SpectralField::zeros(grid.dim_N, band_K);
    const double norm = 1.0 / static_cast<double>(grid.samples.size());
    for (std::size_t mi = 0; mi < f.size(); ++mi) {
        cplx acc{0.0, 0.0};
        std::array<int, kMaxDim> idx{};
        for (std::size_t p = 0; p < grid.samples.size(); ++p) {
            unflatten(p, grid.dim_N, M, idx);
            double dot = 0.0;
            for (int d = 0; d < grid.dim_N; ++d)
                dot += f.modes[mi].n[d] * grid.coord(idx[d]);
            acc += grid.samples[p] * std::polar(1.0, -dot);
        }
        f.coeffs[mi] = acc * norm;
    }
    return f;
}

PhysicalGrid synthesize_ref(const SpectralField& field, int grid_M) {
    field.validate();
    if (grid_M < min_grid_points(field.band_K))
        throw std::domain_error("synthesize_ref: grid too coarse for the band (aliasing)");
    PhysicalGrid g;
    g.dim_N = field.dim_N;
    g.points_per_axis = grid_M;
    g.samples.assign(ipow(grid_M, field.dim_N), cplx{0.0, 0.0});
    for (std::size_t p = 0; p < g.samples.size(); ++p) {
        std::array<int, kMaxDim> idx{};
        unflatten(p, field.dim_N, grid_M, idx);
        cplx acc{0.0, 0.0};
        for (std::size_t mi = 0; mi < field.size(); ++mi) {
            double dot = 0.0;
            for (int d = 0; d < field.dim_N; ++d)
                dot += field.modes[mi].n[d] * g.coord(idx[d]);
            acc += field.coeffs[mi] * std::polar(1.0, dot);
        }
        g.samples[p] = acc;
    }
    return g;
}

SpectralField laplacian_apply(const SpectralField& field) {
    SpectralField out = field;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.coeffs[i] *= static_cast<double>(out.modes[i].norm2());
    return out;
}

SpectralField frac_power_apply(const SpectralField& field, double tau) {
    SpectralField out = field;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int n2 = out.modes[i].norm2();
        if (n2 == 0) {
            if (tau < 0.0) {
                if (std::abs(out.coeffs[i]) != 0.0)
                    throw std::domain_error(
                        "frac_power_apply: negative power needs a vanishing mean mode");
                out.coeffs[i] = cplx{0.0, 0.0};
            }
            // |0|^tau: 1 for tau = 0, 0 for tau > 0
            else if (tau > 0.0)
                out.coeffs[i] = cplx{0.0, 0.0};
            continue;
        }
        out.coeffs[i] *= std::pow(static_cast<double>(n2), 0.5 * tau);
    }
    return out;
}

double liouville_norm(const SpectralField& field, double a) {
    double s = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i)
        s += std::pow(1.0 + field.modes[i].norm2(), a) * std::norm(field.coeffs[i]);
    return std::sqrt(s);
}

MembershipReport membership_report(const SpectralField& field, double a, int N) {
    MembershipReport r;
    r.a = a;
    r.dim_N = N;
    r.condition_met = a > 0.5 * static_cast<double>(N);
    r.norm = liouville_norm(field, a);

    int jmax = -1;
    for (const Mode& m : field.modes) {
        int n2 = m.norm2();
        if (n2 >= 1) jmax = std::max(jmax, static_cast<int>(std::floor(std::log2(n2))));
    }
    r.shells.resize(static_cast<std::size_t>(jmax + 1));
    for (int j = 0; j <= jmax; ++j) r.shells[j] = {j, 0.0};
    for (std::size_t i = 0; i < field.size(); ++i) {
        int n2 = field.modes[i].norm2();
        double mass = std::pow(1.0 + n2, a) * std::norm(field.coeffs[i]);
        if (n2 == 0)
            r.zero_mode_mass += mass;
        else
            r.shells[static_cast<std::size_t>(std::floor(std::log2(n2)))].mass += mass;
    }
    // least-squares slope of log2(mass) over shells with mass > 0
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& sh : r.shells) {
        if (sh.mass <= 0.0) continue;
        double x = sh.j, y = std::log2(sh.mass);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2 && sxx * cnt - sx * sx > 0)
        r.fitted_decay_rate = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return r;
}

bool conjugate_symmetric(const SpectralField& field, double tol) {
    for (std::size_t i = 0; i < field.size(); ++i) {
        cplx other = field.at(field.modes[i].negated());
        if (std::abs(other - std::conj(field.coeffs[i])) > tol) return false;
    }
    return true;
}

double parseval_l2sq(const PhysicalGrid& grid) {
    double s = 0.0;
    for (const cplx& v : grid.samples) s += std::norm(v);
    return s / static_cast<double>(grid.samples.size());
}

} // namespace subdiff::spec
