#pragma once

// Batch experiments over generated ensembles. Each returns tidy per-point
// rows plus the summary statistic the experiment is about.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hoi/dist.hpp"
#include "hoi/generators.hpp"

namespace hoi {

// Pearson product-moment correlation; NaN if either input is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct HamiltonianSweep {
    std::vector<std::size_t> orders;          // k values
    std::vector<EnsembleResult> ensembles;    // one per k
};

HamiltonianSweep hamiltonian_sweep(std::size_t n, double beta, const std::vector<std::size_t>& orders,
                                   std::size_t trials, std::uint64_t seed);

struct TseCorrelation {
    std::vector<double> tse;
    std::vector<double> tse_bipartition;
    std::vector<double> sum_cb;
    std::vector<double> omega;
    double r = 0.0;  // pearson(tse, sum_cb)
};

// `samples` flat-simplex tables over n bits; table i is random_simplex(.., seed, i).
TseCorrelation tse_correlation(std::size_t n, std::size_t samples, std::uint64_t seed, const LogUnit& u);

struct MixtureSweep {
    std::vector<double> lambda;
    std::vector<double> tse;
    std::vector<double> omega;
    std::vector<double> total_correlation;
    std::vector<double> binding_entropy;
};

// `grid` evenly spaced lambda values in [0, 1] (grid >= 2).
MixtureSweep mixture_sweep(std::size_t n, std::size_t grid, const LogUnit& u);

struct PsiComparison {
    std::vector<double> omega;
    std::vector<double> psi_convexity;
    std::vector<std::vector<double>> psi;
    double r = 0.0;  // pearson(omega, psi_convexity)
};

PsiComparison psi_comparison(std::size_t n, std::size_t samples, std::uint64_t seed, const LogUnit& u);

}  // namespace hoi
