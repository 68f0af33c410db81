#pragma once

// Scalar multivariate information measures on a JointTable.
//
// Conventions: every public function takes the unit the caller wants the
// answer in. Internally everything is computed in nats from marginal
// entropies and converted once at the boundary.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hoi/dist.hpp"

namespace hoi {

// Default cap on the variable count for operations that enumerate 2^n subsets.
inline constexpr std::size_t kDefaultSubsetCap = 12;

// Tolerance (in bits) used when two computation routes of the same quantity
// are cross-checked.
inline constexpr double kIdentityToleranceBits = 1e-9;

// Memoized marginal entropies H(X^S) in nats, keyed by the bitmask of S.
// Not thread-safe; create one per thread.
class SubsetEntropies {
public:
    explicit SubsetEntropies(const JointTable& t);

    std::size_t num_vars() const { return n_; }
    std::uint64_t full_mask() const { return full_; }
    const JointTable& table() const { return *table_; }

    double operator()(std::uint64_t mask);
    double operator()(const IndexSet& s) { return (*this)(s.mask()); }

    // I(A;B|G) in nats from cached entropies (no clamping).
    double mi(std::uint64_t a, std::uint64_t b, std::uint64_t given = 0);

private:
    const JointTable* table_;
    std::size_t n_;
    std::uint64_t full_;
    std::unordered_map<std::uint64_t, double> cache_;
};

double negentropy(const JointTable& t, const LogUnit& u);
double total_correlation(const JointTable& t, const LogUnit& u);
std::vector<double> residual_entropies(const JointTable& t, const LogUnit& u);
double binding_entropy(const JointTable& t, const LogUnit& u);

// C - B. Also evaluates the entropy-sum form (n-2)H + sum_j [H(X_j) - H(X_-j)]
// and throws InvariantViolation if the two disagree by more than 1e-9 bits.
double o_information(const JointTable& t, const LogUnit& u);
// The entropy-sum form on its own.
double o_information_entropy_form(const JointTable& t, const LogUnit& u);

// Co-information: -sum over non-empty subsets S of (-1)^|S| H(X^S).
double interaction_information(const JointTable& t, const LogUnit& u,
                               std::size_t max_vars = kDefaultSubsetCap);

// omega_ij = I(X_i;X_j) - I(X_i;X_j | rest).
double local_o_information(const JointTable& t, std::size_t i, std::size_t j, const LogUnit& u);

// Mean total correlation over all size-k subsets.
double avg_subset_correlation(const JointTable& t, std::size_t k, const LogUnit& u,
                              std::size_t max_vars = kDefaultSubsetCap);

// TSE complexity as the subset-correlation profile sum_k [k/n C - C_n(k)].
double tse_from_subset_correlations(const JointTable& t, const LogUnit& u,
                                    std::size_t max_vars = kDefaultSubsetCap);
// TSE complexity as averaged bipartition mutual informations over
// k = 1..floor(n/2); for even n the k = n/2 level has weight 1/2 because
// every bipartition appears twice at that level.
double tse_from_bipartitions(const JointTable& t, const LogUnit& u,
                             std::size_t max_vars = kDefaultSubsetCap);
// Both routes, cross-checked at 1e-9 bits; returns the first.
double tse_complexity(const JointTable& t, const LogUnit& u,
                      std::size_t max_vars = kDefaultSubsetCap);

// sum_i I(X_i; X_-i), which equals C + B.
double sum_single_vs_rest_mi(const JointTable& t, const LogUnit& u);

struct PsiProfile {
    // psi[k-1] for k = 1..n-1.
    std::vector<double> psi;
    // Psi: sum_{k=1}^{n-1} [psi(k) - (k/(n-1) (psi(n-1) - psi(1)) + psi(1))].
    // Negative for convex (synergy-like) profiles.
    double convexity = 0.0;
};

PsiProfile psi_profile(const JointTable& t, const LogUnit& u,
                       std::size_t max_vars = kDefaultSubsetCap);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double x, double slack = 0.0) const {
        return x >= lower - slack && x <= upper + slack;
    }
};

// Range of the O-information for n variables on alphabets of size <= alphabet_max.
Interval omega_bounds(std::size_t n, std::size_t alphabet_max, const LogUnit& u);

// Range of C(X^gamma) for any size-m subset, given the system's O-information
// (expressed in unit u).
Interval subset_correlation_bounds(double omega, std::size_t n, std::size_t m,
                                   std::size_t alphabet_max, const LogUnit& u);

// Range of the O-information implied by one size-m subset's total correlation.
Interval omega_bounds_given_subset(double subset_tc, std::size_t n, std::size_t m,
                                   std::size_t alphabet_max, const LogUnit& u);

struct MetricReport {
    LogUnit unit = LogUnit::bit();
    std::vector<std::size_t> shape;
    double joint_entropy = 0.0;
    double negentropy = 0.0;
    double total_correlation = 0.0;
    double binding_entropy = 0.0;
    double o_information = 0.0;
    double tse = 0.0;
    double sum_cb = 0.0;
    std::vector<double> residuals;
    std::vector<double> marginal_negentropies;
    // n x n, diagonal (and everything when n < 3) empty.
    std::vector<std::vector<std::optional<double>>> local_omega;
};

// Computes every field and verifies the report's identities; throws
// InvariantViolation if any of them fails at 1e-9 bits.
MetricReport metric_report(const JointTable& t, const LogUnit& u,
                           std::size_t max_vars = kDefaultSubsetCap);

}  // namespace hoi
