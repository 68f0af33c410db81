#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hoi/error.hpp"
#include "hoi/experiments.hpp"
#include "hoi/generators.hpp"
#include "hoi/metrics.hpp"
#include "hoi/rng.hpp"
#include "oracle.hpp"

using namespace hoi;

namespace {

const LogUnit kBit = LogUnit::bit();

bool near(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

}  // namespace

TEST_CASE("counter rng is reproducible and stream-separated") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
    CounterRng u(1, 0);
    double mean = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        mean += v;
    }
    CHECK(std::fabs(mean / 20000 - 0.5) < 0.01);
    for (int i = 0; i < 1000; ++i) CHECK(u.below(7) < 7);
}

TEST_CASE("inverse normal cdf") {
    CHECK(std::fabs(inverse_normal_cdf(0.5)) < 1e-12);
    CHECK(std::fabs(inverse_normal_cdf(0.975) - 1.959963984540054) < 1e-9);
    CHECK(std::fabs(inverse_normal_cdf(0.001) + 3.090232306167813) < 1e-9);
    CHECK(std::fabs(inverse_normal_cdf(1e-10) + 6.361340902404056) < 1e-8);
}

TEST_CASE("nary copy examples") {
    CHECK(near(o_information(nary_copy(3, 2), kBit), 1.0));
    const auto c5 = nary_copy(5, 2);
    CHECK(near(total_correlation(c5, kBit), 4.0));
    CHECK(near(binding_entropy(c5, kBit), 1.0));
    CHECK(near(o_information(nary_copy(4, 3), kBit), 2.0 * std::log2(3.0)));
    CHECK_THROWS_AS(nary_copy(0, 2), InputError);
    CHECK_THROWS_AS(nary_copy(3, 1), InputError);
}

TEST_CASE("nary xor examples") {
    CHECK(near(o_information(nary_xor(3, 2), kBit), -1.0));
    const auto x5 = nary_xor(5, 2);
    CHECK(near(total_correlation(x5, kBit), 1.0));
    CHECK(near(binding_entropy(x5, kBit), 4.0));
    CHECK(near(o_information(x5, kBit), -3.0));
    const auto x4 = nary_xor(4, 2);
    CHECK(near(o_information(x4, kBit), -2.0));
    CHECK_FALSE(near(interaction_information(x4, kBit), o_information(x4, kBit)));
    CHECK(near(interaction_information(x4, kBit), oracle::interaction(oracle::from(x4))));
    CHECK_THROWS_AS(nary_xor(1, 2), InputError);
}

TEST_CASE("extremal generators attain the omega bounds") {
    for (std::size_t n = 3; n <= 7; ++n) {
        for (std::size_t m = 2; m <= 3; ++m) {
            const double l = std::log2(static_cast<double>(m));
            CHECK(near(o_information(nary_copy(n, m), kBit), (n - 2.0) * l));
            CHECK(near(o_information(nary_xor(n, m), kBit), (2.0 - n) * l));
        }
    }
}

TEST_CASE("bsc examples") {
    CHECK(bsc_extremal(4, 0.0, BscSide::upper) == nary_copy(4, 2));
    CHECK(near(o_information(bsc_extremal(4, 0.5, BscSide::upper), kBit), 1.0));
    for (std::size_t n = 3; n <= 5; ++n) {
        for (double eta : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
            const double h = oracle::binary_entropy(eta);
            CHECK(near(o_information(bsc_extremal(n, eta, BscSide::upper), kBit), n - 2.0 - h));
            const auto lower = bsc_extremal(n, eta, BscSide::lower);
            CHECK(near(o_information(lower, kBit), oracle::Omega(oracle::from(lower))));
            // X1 and X2 form a BSC pair, X3..X(n-1) are fair and Xn is the parity of X1..X(n-1).
            const auto o = oracle::from(lower);
            CHECK(near(oracle::MI(o, 1, 2), 1.0 - h));
            for (std::size_t j = 2; j + 1 < n; ++j) CHECK(near(oracle::H(o, oracle::bit(j)), 1.0));
            CHECK(near(oracle::H(o, oracle::full(o)), oracle::H(o, oracle::full(o) >> 1)));
        }
    }
    // n = 3: the parity construction attains -(n-3+H(eta)).
    CHECK(near(o_information(bsc_extremal(3, 0.1, BscSide::lower), kBit), -oracle::binary_entropy(0.1)));
    // n >= 4: it gives -(n-2) + 2(1-H(eta)) instead.
    for (std::size_t n = 4; n <= 6; ++n) {
        for (double eta : {0.0, 0.1, 0.3, 0.5}) {
            const double h = oracle::binary_entropy(eta);
            CHECK(near(o_information(bsc_extremal(n, eta, BscSide::lower), kBit), -(n - 2.0) + 2.0 * (1.0 - h)));
        }
    }
    CHECK_THROWS_AS(bsc_extremal(2, 0.1, BscSide::upper), InputError);
    CHECK_THROWS_AS(bsc_extremal(3, 1.5, BscSide::upper), InputError);
}

TEST_CASE("a duplicated variable keeps four-variable omega non-negative") {
    // With X1 = X2, omega(X1..X4) = I(X2;X3) + I(X2;X4), so no BSC system at
    // eta = 0 reaches the negative lower bound for n = 4.
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 200; ++rep) {
        const auto base = oracle::random_table({2, 2, 2}, rng);
        std::vector<double> p(16, 0.0);
        for (std::size_t f = 0; f < 8; ++f) p[((f >> 2) << 3) | f] = base.p[f];
        const auto t = make_joint({2, 2, 2, 2}, p);
        const double w = o_information(t, kBit);
        CHECK(near(w, oracle::MI(base, 1, 2) + oracle::MI(base, 1, 4)));
        CHECK(w >= -1e-12);
    }
}

TEST_CASE("mixture examples") {
    CHECK(mixture_copy_xor(3, 0.0) == nary_copy(3, 2));
    CHECK(mixture_copy_xor(4, 1.0) == nary_xor(4, 2));
    const auto m = mixture_copy_xor(3, 0.5);
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(near(m.probs()[i], 0.5 * nary_copy(3, 2).probs()[i] + 0.5 * nary_xor(3, 2).probs()[i], 1e-15));
        s += m.probs()[i];
    }
    CHECK(near(s, 1.0, 1e-12));
    CHECK(near(tse_complexity(mixture_copy_xor(3, 0.0), kBit), tse_complexity(mixture_copy_xor(3, 1.0), kBit)));
    CHECK_THROWS_AS(mixture_copy_xor(3, -0.1), InputError);
    CHECK_THROWS_AS(mixture_copy_xor(2, 0.5), InputError);
}

TEST_CASE("random simplex draws") {
    const auto a = random_simplex({2, 3}, 9, 0);
    const auto b = random_simplex({2, 3}, 9, 0);
    CHECK(a == b);
    CHECK_FALSE(a == random_simplex({2, 3}, 9, 1));
    double s = 0.0;
    for (double p : a.probs()) {
        CHECK(p >= 0.0);
        s += p;
    }
    CHECK(near(s, 1.0, 1e-12));

    std::vector<double> mean(4, 0.0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto t = random_simplex({2, 2}, 5, i);
        for (std::size_t k = 0; k < 4; ++k) mean[k] += t.probs()[k] / draws;
    }
    for (double m : mean) CHECK(std::fabs(m - 0.25) < 0.01);
    CHECK_THROWS_AS(random_simplex({1}, 1), InputError);
}

TEST_CASE("hamiltonian construction") {
    Hamiltonian h(3);
    h.set(IndexSet{0, 2}, 0.5);
    h.set(IndexSet{1}, -1.0);
    CHECK(h.max_order() == 2);
    CHECK(h.terms().size() == 2);
    // energy = -(0.5 * x0 x2 + (-1) * x1)
    CHECK(near(h.energy(std::vector<std::size_t>{1, 1, 1}), -(0.5 - 1.0), 1e-15));
    CHECK(near(h.energy(std::vector<std::size_t>{0, 1, 1}), -(-0.5 - 1.0), 1e-15));
    CHECK_THROWS_AS(h.set(IndexSet{}, 1.0), EmptyIndexSet);
    CHECK_THROWS_AS(h.set(IndexSet{3}, 1.0), IndexOutOfRange);
    CHECK(interaction_sets(4, 2).size() == 4 + 6);
    CHECK(interaction_sets(4, 2).front() == IndexSet{0});
    CHECK(interaction_sets(4, 2).back() == IndexSet{2, 3});
    const auto r = random_hamiltonian(5, 3, 1, 0);
    CHECK(r.terms().size() == 5 + 10 + 10);
    CHECK(r.max_order() == 3);
}

TEST_CASE("gibbs examples") {
    Hamiltonian zero(4);
    const auto u = gibbs(zero, 1.0);
    for (double p : u.probs()) CHECK(near(p, 1.0 / 16, 1e-15));
    CHECK(near(o_information(u, kBit), 0.0));

    Hamiltonian pairs(4);
    pairs.set(IndexSet{0, 1}, 0.8);
    pairs.set(IndexSet{2, 3}, -1.3);
    CHECK(near(o_information(gibbs(pairs, 1.0), kBit), 0.0));

    Hamiltonian parity(4);
    parity.set(IndexSet{0, 1, 2, 3}, 1.0);
    CHECK(near(o_information(gibbs(parity, 10.0), kBit), -2.0, 0.05));

    CHECK_THROWS_AS(gibbs(Hamiltonian(21), 0.1), TooLarge);
}

TEST_CASE("gibbs distribution matches direct Boltzmann weights") {
    const auto h = random_hamiltonian(4, 4, 3, 0);
    const auto t = gibbs(h, 0.7);
    std::vector<double> w(16);
    double z = 0.0;
    for (std::size_t f = 0; f < 16; ++f) {
        std::vector<std::size_t> cfg(4);
        for (std::size_t j = 0; j < 4; ++j) cfg[j] = (f >> (3 - j)) & 1U;
        double e = 0.0;
        for (const auto& [g, j] : h.terms()) {
            double prod = 1.0;
            for (auto i : g) prod *= cfg[i] ? 1.0 : -1.0;
            e -= j * prod;
        }
        w[f] = std::exp(-0.7 * e);
        z += w[f];
    }
    for (std::size_t f = 0; f < 16; ++f) CHECK(near(t.probs()[f], w[f] / z, 1e-14));
}

TEST_CASE("gibbs is permutation covariant") {
    const auto h = random_hamiltonian(4, 3, 11, 2);
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    const auto t = gibbs(h, 0.9);
    const auto tp = gibbs(h.relabeled(perm), 0.9);
    // Variable i of t is variable perm[i] of tp.
    std::vector<std::size_t> axes(4);
    for (std::size_t i = 0; i < 4; ++i) axes[perm[i]] = i;
    const auto moved = permute_axes(t, axes);
    for (std::size_t f = 0; f < t.size(); ++f) CHECK(near(moved.probs()[f], tp.probs()[f], 1e-14));
}

TEST_CASE("ensemble omega") {
    EnsembleSpec spec;
    spec.trials = 20;
    const auto a = ensemble_omega(spec);
    const auto b = ensemble_omega(spec);
    CHECK(a.omega_bits == b.omega_bits);
    CHECK(a.omega_bits.size() == 20);
    for (std::size_t t = 0; t < a.omega_bits.size(); ++t) {
        const auto table = gibbs(random_hamiltonian(spec.n, spec.k, spec.seed, t), spec.beta);
        CHECK(a.omega_bits[t] == doctest::Approx(o_information(table, kBit)).epsilon(1e-12));
        CHECK(omega_bounds(5, 2, kBit).contains(a.omega_bits[t], 1e-9));
    }
    spec.beta = 0.0;
    for (double w : ensemble_omega(spec).omega_bits) CHECK(std::fabs(w) <= 1e-12);
}

TEST_CASE("summaries") {
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(near(s.mean, 2.5));
    CHECK(near(s.sd, std::sqrt(5.0 / 3.0)));
    CHECK(near(s.std_error, s.sd / 2.0));
    CHECK(near(s.ci_low, 2.5 - 1.96 * s.std_error));
    CHECK(near(s.ci_high, 2.5 + 1.96 * s.std_error));
}

TEST_CASE("experiments") {
    CHECK(near(pearson({1, 2, 3}, {2, 4, 6}), 1.0));
    CHECK(near(pearson({1, 2, 3}, {3, 2, 1}), -1.0));
    CHECK(std::isnan(pearson({1, 1, 1}, {1, 2, 3})));

    const auto mix = mixture_sweep(3, 21, kBit);
    CHECK(mix.lambda.size() == 21);
    CHECK(mix.lambda.front() == 0.0);
    CHECK(mix.lambda.back() == 1.0);
    CHECK(near(mix.tse.front(), 1.0));
    CHECK(near(mix.tse.back(), 1.0));
    CHECK(near(mix.omega.front(), 1.0));
    CHECK(near(mix.omega.back(), -1.0));

    const auto tse = tse_correlation(3, 50, 1, kBit);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(near(tse.tse[i], tse.sum_cb[i] / 3.0));
        CHECK(near(tse.tse[i], tse.tse_bipartition[i]));
    }
    CHECK(near(tse.r, 1.0));

    const auto psi = psi_comparison(4, 20, 1, kBit);
    CHECK(psi.psi.size() == 20);
    CHECK(psi.psi.front().size() == 3);

    const auto sweep = hamiltonian_sweep(4, 0.1, {2, 3}, 10, 1);
    CHECK(sweep.orders == std::vector<std::size_t>{2, 3});
    CHECK(sweep.ensembles[1].omega_bits.size() == 10);
}
