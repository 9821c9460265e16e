#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace epz {

struct QmcOptions {
    int log2_points = 14;  // points per replicate
    int replicates = 8;
    std::uint64_t seed = 20240101;
    int threads = 1;
};

// Sobol points with a random linear (lower-triangular) scramble and a digital shift.
class ScrambledSobol {
public:
    ScrambledSobol(int dim, std::uint64_t seed);
    ~ScrambledSobol();
    ScrambledSobol(ScrambledSobol&&) noexcept;

    int dim() const { return dim_; }
    void next(double* out);

private:
    static constexpr int kBits = 53;
    struct Engine;
    int dim_;
    std::unique_ptr<Engine> eng_;
    std::vector<std::array<std::uint64_t, kBits>> rows_;
    std::vector<std::uint64_t> shift_;
};

struct ReplicateMeans {
    std::vector<std::vector<double>> means;  // [replicate][component]
    long points_per_replicate = 0;

    double mean(int k) const;
    double stderr_of(int k) const;
    // replicate-wise combination, e.g. a second difference of several components
    std::pair<double, double> combine(const std::function<double(const std::vector<double>&)>& g) const;
};

// fn(theta, acc) adds `width` values into acc for one point.
ReplicateMeans qmc_integrate(int dim, int width, const QmcOptions& opt,
                             const std::function<void(const double*, double*)>& fn);

}  // namespace epz
