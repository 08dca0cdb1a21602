#include "gravidec/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "gravidec/errors.hpp"
#include "gravidec/kernels.hpp"
#include "gravidec/quadrature.hpp"

namespace gravidec {

namespace {

struct Factor {
    Eigen::MatrixXd root;  // root · rootᵀ = clamped matrix
    std::size_t clamped = 0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

Factor spectral_root(const Eigen::MatrixXd& m, double jitter, const char* what) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw PsdError(std::string(what) + ": eigensolver failed", NAN, NAN);
    Factor f;
    const auto& lambda = es.eigenvalues();
    f.min_eigenvalue = lambda.minCoeff();
    f.max_eigenvalue = lambda.maxCoeff();
    const double floor = -jitter * std::max(f.max_eigenvalue, 0.0);
    if (f.min_eigenvalue < floor) {
        throw PsdError(std::string(what) + ": covariance is indefinite beyond the allowed jitter", f.min_eigenvalue,
                       f.max_eigenvalue);
    }
    Eigen::VectorXd scale(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0.0) ++f.clamped;
        scale[i] = std::sqrt(std::max(lambda[i], 0.0));
    }
    f.root = es.eigenvectors() * scale.asDiagonal();
    return f;
}

void check_grid(const TimeGrid& grid) {
    if (grid.n < 2 || !std::isfinite(grid.t_f) || !(grid.t_f > 0.0)) {
        throw ArgumentError("time grid needs n >= 2 and a positive duration");
    }
}

double frobenius(const std::array<double, 9>& e, const std::array<double, 9>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < 9; ++i) s += e[i] * a[i];
    return s;
}

std::mt19937_64 sample_generator(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double mean_of(std::vector<double>& scratch) {
    return pairwise_sum(scratch) / static_cast<double>(scratch.size());
}

}  // namespace

void MCConfig::validate() const {
    if (n_steps < 8) throw ArgumentError("MC n_steps must be at least 8");
    if (n_samples < 100) throw ArgumentError("MC n_samples must be at least 100");
    if (!(psd_jitter >= 0.0) || !std::isfinite(psd_jitter)) throw ArgumentError("MC psd_jitter must be non-negative");
}

const std::array<std::array<double, 9>, 6>& symmetric_basis() {
    static const auto basis = [] {
        const double h = 1.0 / std::sqrt(2.0);
        std::array<std::array<double, 9>, 6> b{};
        b[0][0] = 1.0;
        b[1][4] = 1.0;
        b[2][8] = 1.0;
        b[3][1] = b[3][3] = h;
        b[4][2] = b[4][6] = h;
        b[5][5] = b[5][7] = h;
        return b;
    }();
    return basis;
}

Eigen::Matrix<double, 6, 6> tensor_block(const IsotropicRank4& tensor) {
    const Rank4 p = tensor.dense();
    const auto& basis = symmetric_basis();
    Eigen::Matrix<double, 6, 6> m;
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            double s = 0.0;
            for (std::size_t ij = 0; ij < 9; ++ij)
                for (std::size_t kl = 0; kl < 9; ++kl) s += basis[a][ij] * p[ij * 9 + kl] * basis[b][kl];
            m(a, b) = s;
        }
    }
    return m;
}

Eigen::MatrixXd NoiseCovariance::dense() const {
    const Eigen::Index n = time.rows();
    Eigen::MatrixXd d(6 * n, 6 * n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) d.block<6, 6>(6 * a, 6 * b) = time(a, b) * tensor;
    return d;
}

NoiseCovariance build_covariance(const GravitonState& state, double m0, const TimeGrid& grid) {
    check_grid(grid);
    NoiseCovariance cov;
    cov.grid = grid;
    cov.tensor = tensor_block(IsotropicRank4::graviton());
    cov.time.resize(grid.n, grid.n);
    for (int a = 0; a < grid.n; ++a) {
        cov.time(a, a) = noise_equal_time(state, m0, grid.at(a));
        for (int b = a + 1; b < grid.n; ++b) {
            cov.time(a, b) = cov.time(b, a) = noise_scalar(state, m0, grid.at(a), grid.at(b));
        }
    }
    return cov;
}

std::array<double, 9> NoiseField::tensor(std::size_t sample, int a) const {
    std::array<double, 9> out{};
    const auto& basis = symmetric_basis();
    for (int p = 0; p < 6; ++p) {
        const double c = component(sample, a, p);
        for (std::size_t i = 0; i < 9; ++i) out[i] += c * basis[p][i];
    }
    return out;
}

NoiseField sample_field(const NoiseCovariance& cov, const MCConfig& config) {
    config.validate();
    check_grid(cov.grid);
    const int n = cov.grid.n;
    if (cov.time.rows() != n || cov.time.cols() != n) throw ArgumentError("covariance does not match its grid");
    if (config.n_steps != n) throw ArgumentError("MC n_steps differs from the covariance grid");

    const Factor time = spectral_root(cov.time, config.psd_jitter, "time covariance");
    const Factor tensor = spectral_root(cov.tensor, config.psd_jitter, "tensor block");

    NoiseField field;
    field.grid = cov.grid;
    field.n_samples = config.n_samples;
    field.clamped_modes = time.clamped;
    field.min_eigenvalue = time.min_eigenvalue;
    field.max_eigenvalue = time.max_eigenvalue;
    const std::size_t stride = static_cast<std::size_t>(n) * 6;
    field.values.assign(config.n_samples * stride, 0.0);

    const auto draw = [&](std::size_t first, std::size_t last) {
        Eigen::Matrix<double, Eigen::Dynamic, 6> z(n, 6);
        Eigen::Matrix<double, Eigen::Dynamic, 6> x(n, 6);
        for (std::size_t k = first; k < last; ++k) {
            auto rng = sample_generator(config.seed, k);
            std::normal_distribution<double> normal(0.0, 1.0);
            for (int a = 0; a < n; ++a)
                for (int p = 0; p < 6; ++p) z(a, p) = normal(rng);
            x.noalias() = time.root * z * tensor.root.transpose();
            double* out = field.values.data() + k * stride;
            for (int a = 0; a < n; ++a)
                for (int p = 0; p < 6; ++p) out[a * 6 + p] = x(a, p);
        }
    };

    unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.n_samples));
    if (workers <= 1) {
        draw(0, config.n_samples);
        return field;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (config.n_samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t first = w * chunk;
        const std::size_t last = std::min(config.n_samples, first + chunk);
        if (first < last) pool.emplace_back(draw, first, last);
    }
    for (auto& t : pool) t.join();
    return field;
}

std::vector<double> phase_weights(const TimeGrid& grid, const SuperpositionPath& path) {
    check_grid(grid);
    path.validate();
    if (std::abs(grid.t_f - path.t_f) > 1e-12 * path.t_f) throw ArgumentError("path and grid durations differ");
    const auto& basis = symmetric_basis();
    const Vec3& xi = path.mean_position;
    std::vector<double> c(static_cast<std::size_t>(grid.n) * 6);
    for (int a = 0; a < grid.n; ++a) {
        const Vec3 d = path.separation(grid.at(a));
        std::array<double, 9> m{};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m[i * 3 + j] = xi[i] * d[j] + d[i] * xi[j];
        for (int p = 0; p < 6; ++p) c[static_cast<std::size_t>(a) * 6 + p] = grid.weight(a) * frobenius(basis[p], m);
    }
    return c;
}

double discrete_gamma(const NoiseCovariance& cov, const SuperpositionPath& path) {
    const auto c = phase_weights(cov.grid, path);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>> cm(c.data(), cov.grid.n, 6);
    return 0.5 * ((cov.time * cm).cwiseProduct(cm * cov.tensor)).sum();
}

GammaEstimate estimate_gamma(const NoiseField& field, const SuperpositionPath& path) {
    const auto c = phase_weights(field.grid, path);
    const std::size_t n_samples = field.n_samples;
    if (n_samples < 2) throw ArgumentError("estimate_gamma needs at least two samples");
    const std::size_t stride = c.size();

    std::vector<double> phase(n_samples), cosines(n_samples), sines(n_samples);
    std::vector<double> terms(stride);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double* v = field.values.data() + k * stride;
        for (std::size_t i = 0; i < stride; ++i) terms[i] = c[i] * v[i];
        phase[k] = pairwise_sum(terms);
        cosines[k] = std::cos(phase[k]);
        sines[k] = std::sin(phase[k]);
    }

    GammaEstimate est;
    est.n_samples = n_samples;
    const double nd = static_cast<double>(n_samples);
    const double cos_sum = pairwise_sum(cosines);
    est.mean_cos = cos_sum / nd;
    est.mean_sin = pairwise_sum(sines) / nd;
    if (!(est.mean_cos > 0.0)) {
        throw SaturationError("mean cos(phase) <= 0: decoherence is saturated, use a smaller t_f");
    }
    est.gamma = -std::log(est.mean_cos);

    std::vector<double> scratch(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double loo = (cos_sum - cosines[k]) / (nd - 1.0);
        if (!(loo > 0.0)) throw SaturationError("leave-one-out mean cos(phase) <= 0: use a smaller t_f");
        scratch[k] = -std::log(loo);
    }
    const double jack_mean = mean_of(scratch);
    for (auto& g : scratch) g = (g - jack_mean) * (g - jack_mean);
    est.std_error = std::sqrt((nd - 1.0) / nd * pairwise_sum(scratch));

    for (std::size_t k = 0; k < n_samples; ++k) scratch[k] = (sines[k] - est.mean_sin) * (sines[k] - est.mean_sin);
    est.sin_std_error = std::sqrt(pairwise_sum(scratch) / (nd - 1.0) / nd);

    const double phase_mean = mean_of(phase);
    for (std::size_t k = 0; k < n_samples; ++k) scratch[k] = (phase[k] - phase_mean) * (phase[k] - phase_mean);
    est.phase_variance = pairwise_sum(scratch) / (nd - 1.0);
    return est;
}

}  // namespace gravidec
