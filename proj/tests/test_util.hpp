#pragma once

#include <complex>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qprod/potential.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline qprod::PotentialSpec load_fixture(const std::string& name) {
    return qprod::PotentialSpec::from_json(read_file(std::string(QPROD_FIXTURE_DIR) + "/" + name));
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// deterministic complex samples in a disc
struct ComplexSampler {
    std::mt19937 rng;
    explicit ComplexSampler(unsigned seed) : rng(seed) {}
    std::complex<double> in_disc(double radius) {
        std::uniform_real_distribution<double> u(-radius, radius);
        while (true) {
            const std::complex<double> z{u(rng), u(rng)};
            if (std::abs(z) <= radius) return z;
        }
    }
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> u(lo, hi);
        return u(rng);
    }
};

} // namespace testutil
