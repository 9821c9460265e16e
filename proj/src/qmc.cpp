#include "epz/qmc.hpp"

#include <bit>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

#include "epz/parallel.hpp"

namespace epz {

struct ScrambledSobol::Engine {
    boost::random::sobol gen;
    explicit Engine(int d) : gen(unsigned(d)) {}
};

ScrambledSobol::ScrambledSobol(int dim, std::uint64_t seed) : dim_(dim)
{
    if (dim < 1) throw std::invalid_argument("ScrambledSobol: dim must be positive");
    eng_ = std::make_unique<Engine>(dim);
    std::mt19937_64 rng(seed);
    rows_.resize(std::size_t(dim));
    shift_.resize(std::size_t(dim));
    // bit i counts from the most significant of the kBits kept digits
    for (int d = 0; d < dim; ++d) {
        for (int i = 0; i < kBits; ++i) {
            const std::uint64_t below = i == 0 ? 0 : (rng() >> (64 - i));
            rows_[d][i] = (below << (kBits - i)) | (std::uint64_t(1) << (kBits - 1 - i));
        }
        shift_[d] = rng() >> (64 - kBits);
    }
}

ScrambledSobol::~ScrambledSobol() = default;
ScrambledSobol::ScrambledSobol(ScrambledSobol&&) noexcept = default;

void ScrambledSobol::next(double* out)
{
    for (int d = 0; d < dim_; ++d) {
        const std::uint64_t x = std::uint64_t(eng_->gen()) >> (64 - kBits);
        std::uint64_t y = 0;
        for (int i = 0; i < kBits; ++i)
            y |= std::uint64_t(std::popcount(x & rows_[d][i]) & 1) << (kBits - 1 - i);
        y ^= shift_[d];
        out[d] = (double(y) + 0.5) * 0x1p-53;
    }
}

double ReplicateMeans::mean(int k) const
{
    double s = 0.0;
    for (const auto& r : means) s += r[k];
    return s / double(means.size());
}

double ReplicateMeans::stderr_of(int k) const
{
    const double m = mean(k);
    const double R = double(means.size());
    if (R < 2) return 0.0;
    double v = 0.0;
    for (const auto& r : means) v += (r[k] - m) * (r[k] - m);
    return std::sqrt(v / (R - 1.0) / R);
}

std::pair<double, double> ReplicateMeans::combine(const std::function<double(const std::vector<double>&)>& g) const
{
    std::vector<double> vals;
    for (const auto& r : means) vals.push_back(g(r));
    const double R = double(vals.size());
    double m = 0.0;
    for (double v : vals) m += v;
    m /= R;
    double var = 0.0;
    for (double v : vals) var += (v - m) * (v - m);
    return {m, R > 1 ? std::sqrt(var / (R - 1.0) / R) : 0.0};
}

ReplicateMeans qmc_integrate(int dim, int width, const QmcOptions& opt,
                             const std::function<void(const double*, double*)>& fn)
{
    if (opt.replicates < 1 || opt.log2_points < 0 || opt.log2_points > 30)
        throw std::invalid_argument("qmc_integrate: bad sampling budget");
    ReplicateMeans out;
    out.points_per_replicate = 1L << opt.log2_points;
    out.means.assign(std::size_t(opt.replicates), std::vector<double>(std::size_t(width), 0.0));
    parallel_for(opt.replicates, opt.threads, [&](int r) {
        std::vector<double> theta(std::size_t(std::max(dim, 1)), 0.0), acc(std::size_t(width), 0.0);
        const std::uint64_t seed = opt.seed * 0x9E3779B97F4A7C15ULL + std::uint64_t(r) * 0xBF58476D1CE4E5B9ULL + 1;
        if (dim == 0) {
            fn(theta.data(), acc.data());
            out.means[r] = acc;
            return;
        }
        ScrambledSobol sob(dim, seed);
        for (long i = 0; i < out.points_per_replicate; ++i) {
            sob.next(theta.data());
            fn(theta.data(), acc.data());
        }
        for (int k = 0; k < width; ++k) out.means[r][k] = acc[k] / double(out.points_per_replicate);
    });
    if (dim == 0) out.points_per_replicate = 1;
    return out;
}

}  // namespace epz
