#pragma once

// Named distributions and random ensembles: extremal copy/xor systems, the
// binary-symmetric-channel family, copy/xor mixtures, flat-simplex draws and
// exact Gibbs distributions of spin Hamiltonians.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "hoi/dist.hpp"

namespace hoi {

inline constexpr std::size_t kGibbsCap = 20;

// All-equal configurations, mass 1/m each.
JointTable nary_copy(std::size_t n, std::size_t m);

// First n-1 variables i.i.d. uniform on m symbols, last one their sum mod m.
JointTable nary_xor(std::size_t n, std::size_t m);

enum class BscSide { upper, lower };

// X1, X2 fair bits joined by a binary symmetric channel with crossover eta.
// upper: X2 = X3 = ... = Xn.  lower: X3..X(n-1) fair and independent,
// Xn = parity of X1..X(n-1).
JointTable bsc_extremal(std::size_t n, double eta, BscSide side);

// (1 - lambda) * binary copy + lambda * binary xor, entrywise.
JointTable mixture_copy_xor(std::size_t n, double lambda);

// One draw from the flat Dirichlet on the simplex over shape's product space,
// via normalized unit exponentials from the given stream of `seed`.
JointTable random_simplex(const std::vector<std::size_t>& shape, std::uint64_t seed,
                          std::uint64_t stream = 0);

// Energy function -sum_gamma J_gamma prod_{i in gamma} x_i over spins x_i = +-1.
class Hamiltonian {
public:
    explicit Hamiltonian(std::size_t n);

    // Adds (or overwrites) the coupling of a non-empty index set.
    void set(const IndexSet& gamma, double coupling);

    std::size_t num_vars() const { return n_; }
    std::size_t max_order() const;
    const std::map<IndexSet, double>& terms() const { return terms_; }

    // Energy of a configuration given as alphabet symbols (0 -> -1, 1 -> +1).
    double energy(std::span<const std::size_t> symbols) const;

    // Relabels variables: variable i becomes perm[i].
    Hamiltonian relabeled(std::span<const std::size_t> perm) const;

private:
    std::size_t n_;
    std::map<IndexSet, double> terms_;
};

// All non-empty index sets of size <= k over n variables, ordered by size then
// lexicographically.
std::vector<IndexSet> interaction_sets(std::size_t n, std::size_t k);

// Couplings J_gamma ~ N(0, 1) for every set in interaction_sets(n, k), drawn in
// that order from the given stream.
Hamiltonian random_hamiltonian(std::size_t n, std::size_t k, std::uint64_t seed,
                               std::uint64_t stream = 0);

// p(x) = exp(-beta H(x)) / Z over {0,1}^n. Throws TooLarge above 20 variables.
JointTable gibbs(const Hamiltonian& h, double beta);

struct EnsembleSpec {
    std::size_t n = 5;
    std::size_t k = 2;
    double beta = 0.1;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
};

struct SampleSummary {
    double mean = 0.0;
    double sd = 0.0;         // sample standard deviation
    double std_error = 0.0;  // sd / sqrt(count)
    double ci_low = 0.0;     // mean -/+ 1.96 std_error
    double ci_high = 0.0;
};

SampleSummary summarize(const std::vector<double>& values);

struct EnsembleResult {
    std::vector<double> omega_bits;  // one per trial
    SampleSummary summary;
};

// Trial t draws random_hamiltonian(n, k, seed, t), builds its Gibbs table and
// records the O-information in bits.
EnsembleResult ensemble_omega(const EnsembleSpec& spec);

}  // namespace hoi
