// Linear regression with the analog scheme: the Gram matrix of a short-fat
// data matrix is computed by distributed workers, the small solve happens
// locally.

#include <cmath>
#include <iostream>
#include <random>

#include "gramcode/adgmm.hpp"

using namespace gramcode;

int main() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    const std::size_t variables = 5, samples = 200;
    ComplexMatrix data(variables, samples);
    for (std::size_t i = 0; i < variables; ++i)
        for (std::size_t k = 0; k < samples; ++k) data.at(i, k) = dist(rng);

    std::vector<double> truth{1.0, -0.5, 0.25, 2.0, -1.5};
    std::vector<double> b(samples, 0.0);
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t i = 0; i < variables; ++i) b[k] += data.at(i, k).real() * truth[i];
        b[k] += 0.001 * dist(rng); // measurement noise
    }

    auto beta = lstsq(data, b, 4, 9);

    std::cout << "recovered coefficients:\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < variables; ++i) {
        std::cout << "  beta[" << i << "] = " << beta[i] << " (true " << truth[i] << ")\n";
        worst = std::max(worst, std::abs(beta[i] - truth[i]));
    }
    std::cout << "max deviation: " << worst << "\n";
    return worst < 0.05 ? 0 : 1;
}
