#include "hoi/experiments.hpp"

#include <cmath>
#include <limits>

#include "hoi/error.hpp"
#include "hoi/metrics.hpp"
#include "hoi/parallel.hpp"

namespace hoi {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("pearson: need two equal-length samples");
    long double mx = 0.0L, my = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0L || syy == 0.0L) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

HamiltonianSweep hamiltonian_sweep(std::size_t n, double beta, const std::vector<std::size_t>& orders,
                                   std::size_t trials, std::uint64_t seed) {
    if (n > kGibbsCap) throw TooLarge("hamiltonian sweep: n exceeds the Gibbs enumeration cap");
    if (n > kDefaultSubsetCap) throw SubsetExplosion("hamiltonian sweep: n exceeds the subset cap");
    HamiltonianSweep out;
    for (auto k : orders) {
        out.orders.push_back(k);
        out.ensembles.push_back(ensemble_omega({n, k, beta, trials, seed}));
    }
    return out;
}

TseCorrelation tse_correlation(std::size_t n, std::size_t samples, std::uint64_t seed, const LogUnit& u) {
    if (n < 2) throw InvalidArgument("tse correlation: n must be >= 2");
    if (n > kDefaultSubsetCap) throw SubsetExplosion("tse correlation: n exceeds the subset cap");
    if (samples < 2) throw InvalidArgument("tse correlation: need at least 2 samples");
    TseCorrelation out;
    out.tse.resize(samples);
    out.tse_bipartition.resize(samples);
    out.sum_cb.resize(samples);
    out.omega.resize(samples);
    const std::vector<std::size_t> shape(n, 2);
    parallel_for(samples, [&](std::size_t i) {
        const auto t = random_simplex(shape, seed, i);
        out.tse[i] = tse_complexity(t, u);
        out.tse_bipartition[i] = tse_from_bipartitions(t, u);
        out.sum_cb[i] = total_correlation(t, u) + binding_entropy(t, u);
        out.omega[i] = o_information(t, u);
    });
    out.r = pearson(out.tse, out.sum_cb);
    return out;
}

MixtureSweep mixture_sweep(std::size_t n, std::size_t grid, const LogUnit& u) {
    if (grid < 2) throw InvalidArgument("mixture sweep: grid must have at least 2 points");
    if (n > kDefaultSubsetCap) throw SubsetExplosion("mixture sweep: n exceeds the subset cap");
    MixtureSweep out;
    for (std::size_t g = 0; g < grid; ++g) {
        const double lambda = (g + 1 == grid) ? 1.0 : static_cast<double>(g) / static_cast<double>(grid - 1);
        const auto t = mixture_copy_xor(n, lambda);
        out.lambda.push_back(lambda);
        out.tse.push_back(tse_complexity(t, u));
        out.omega.push_back(o_information(t, u));
        out.total_correlation.push_back(total_correlation(t, u));
        out.binding_entropy.push_back(binding_entropy(t, u));
    }
    return out;
}

PsiComparison psi_comparison(std::size_t n, std::size_t samples, std::uint64_t seed, const LogUnit& u) {
    if (n < 3) throw NeedAtLeastThreeVariables("psi comparison: n must be >= 3");
    if (n > kDefaultSubsetCap) throw SubsetExplosion("psi comparison: n exceeds the subset cap");
    if (samples < 2) throw InvalidArgument("psi comparison: need at least 2 samples");
    PsiComparison out;
    out.omega.resize(samples);
    out.psi_convexity.resize(samples);
    out.psi.resize(samples);
    const std::vector<std::size_t> shape(n, 2);
    parallel_for(samples, [&](std::size_t i) {
        const auto t = random_simplex(shape, seed, i);
        const auto prof = psi_profile(t, u);
        out.omega[i] = o_information(t, u);
        out.psi_convexity[i] = prof.convexity;
        out.psi[i] = prof.psi;
    });
    out.r = pearson(out.omega, out.psi_convexity);
    return out;
}

}  // namespace hoi
