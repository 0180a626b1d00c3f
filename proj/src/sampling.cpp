#include "fluidint/sampling.hpp"

#include "fluidint/errors.hpp"

#include <array>
#include <cmath>
#include <random>

namespace fluidint {

namespace {

constexpr std::array<int, 24> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                         41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double radical_inverse(std::uint64_t index, int base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
        f /= base;
    }
    return result;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 step
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<Point> halton_points(const Vec& lower, const Vec& upper, std::size_t count,
                                 std::uint64_t seed) {
    const Eigen::Index dim = lower.size();
    if (upper.size() != dim) throw Error(ErrorKind::DimensionMismatch, "sample box bounds differ in size");
    if (dim > static_cast<Eigen::Index>(kPrimes.size())) {
        throw Error(ErrorKind::ValidationError, "sample dimension too large");
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (!(lower[k] <= upper[k])) throw Error(ErrorKind::ValidationError, "sample box has lower > upper");
    }
    std::mt19937_64 rng(seed);
    Vec shift(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        // 53-bit uniform in [0, 1) independent of the standard library's distribution
        shift[k] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Point p(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            double u = radical_inverse(i + 1, kPrimes[static_cast<std::size_t>(k)]) + shift[k];
            u -= std::floor(u);
            p[k] = lower[k] + u * (upper[k] - lower[k]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<State> sample_states(const Vec& x_lower, const Vec& x_upper, const Vec& v_lower,
                                 const Vec& v_upper, std::size_t count, std::uint64_t seed) {
    const Eigen::Index n = x_lower.size();
    Vec lo(2 * n), hi(2 * n);
    lo << x_lower, v_lower;
    hi << x_upper, v_upper;
    std::vector<State> out;
    out.reserve(count);
    for (const Point& p : halton_points(lo, hi, count, seed)) out.push_back(State{p.head(n), p.tail(n)});
    return out;
}

}  // namespace fluidint
