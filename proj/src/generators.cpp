#include "hoi/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hoi/error.hpp"
#include "hoi/metrics.hpp"
#include "hoi/parallel.hpp"
#include "hoi/rng.hpp"

namespace hoi {

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, const char* what) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > (std::size_t{1} << 40) / base) {
            throw TooLarge(std::string(what) + ": table would be too large");
        }
        r *= base;
    }
    return r;
}

// Builds a table over {0..m-1}^n by evaluating `mass` at every configuration.
JointTable tabulate(std::size_t n, std::size_t m, const char* what,
                    const std::function<double(const std::vector<std::size_t>&)>& mass) {
    const std::size_t total = checked_pow(m, n, what);
    std::vector<double> probs(total);
    std::vector<std::size_t> cfg(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        probs[flat] = mass(cfg);
        for (std::size_t v = n; v-- > 0;) {
            if (++cfg[v] < m) break;
            cfg[v] = 0;
        }
    }
    return detail_trusted_table(std::vector<std::size_t>(n, m), std::move(probs));
}

double bsc_pair(std::size_t x1, std::size_t x2, double eta) {
    return 0.5 * (x1 == x2 ? 1.0 - eta : eta);
}

}  // namespace

JointTable nary_copy(std::size_t n, std::size_t m) {
    if (n < 1) throw InvalidArgument("nary_copy: n must be >= 1");
    if (m < 2) throw InvalidArgument("nary_copy: m must be >= 2");
    const double w = 1.0 / static_cast<double>(m);
    return tabulate(n, m, "nary_copy", [&](const std::vector<std::size_t>& x) {
        return std::all_of(x.begin(), x.end(), [&](std::size_t v) { return v == x[0]; }) ? w : 0.0;
    });
}

JointTable nary_xor(std::size_t n, std::size_t m) {
    if (n < 2) throw InvalidArgument("nary_xor: n must be >= 2");
    if (m < 2) throw InvalidArgument("nary_xor: m must be >= 2");
    const double w = 1.0 / std::pow(static_cast<double>(m), static_cast<double>(n - 1));
    return tabulate(n, m, "nary_xor", [&](const std::vector<std::size_t>& x) {
        const std::size_t s = std::accumulate(x.begin(), x.end() - 1, std::size_t{0}) % m;
        return s == x.back() ? w : 0.0;
    });
}

JointTable bsc_extremal(std::size_t n, double eta, BscSide side) {
    if (n < 3) throw InvalidArgument("bsc_extremal: n must be >= 3");
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("bsc_extremal: eta must lie in [0, 1]");
    if (side == BscSide::upper) {
        return tabulate(n, 2, "bsc_extremal", [&](const std::vector<std::size_t>& x) {
            for (std::size_t j = 2; j < n; ++j) {
                if (x[j] != x[1]) return 0.0;
            }
            return bsc_pair(x[0], x[1], eta);
        });
    }
    const double fair = std::ldexp(1.0, -static_cast<int>(n - 3));
    return tabulate(n, 2, "bsc_extremal", [&](const std::vector<std::size_t>& x) {
        const std::size_t parity = std::accumulate(x.begin(), x.end() - 1, std::size_t{0}) % 2;
        if (parity != x.back()) return 0.0;
        return bsc_pair(x[0], x[1], eta) * fair;
    });
}

JointTable mixture_copy_xor(std::size_t n, double lambda) {
    if (n < 3) throw InvalidArgument("mixture_copy_xor: n must be >= 3");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("mixture_copy_xor: lambda must lie in [0, 1]");
    const auto copy = nary_copy(n, 2);
    const auto xr = nary_xor(n, 2);
    std::vector<double> probs(copy.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = (1.0 - lambda) * copy.probs()[i] + lambda * xr.probs()[i];
    }
    return detail_trusted_table(copy.shape(), std::move(probs));
}

JointTable random_simplex(const std::vector<std::size_t>& shape, std::uint64_t seed, std::uint64_t stream) {
    if (shape.empty()) throw DimensionMismatch("random_simplex: empty shape");
    std::size_t total = 1;
    for (auto s : shape) {
        if (s < 1) throw DimensionMismatch("random_simplex: alphabet sizes must be >= 1");
        total *= s;
    }
    if (total < 2) throw InvalidArgument("random_simplex: need at least two outcomes");
    CounterRng rng(seed, stream);
    std::vector<double> probs(total);
    long double sum = 0.0L;
    for (auto& p : probs) {
        p = rng.exponential();
        sum += p;
    }
    for (auto& p : probs) p = static_cast<double>(p / sum);
    return detail_trusted_table(shape, std::move(probs));
}

// ---------------------------------------------------------------------------
// Hamiltonians

Hamiltonian::Hamiltonian(std::size_t n) : n_(n) {
    if (n < 1) throw InvalidArgument("Hamiltonian: n must be >= 1");
}

void Hamiltonian::set(const IndexSet& gamma, double coupling) {
    if (gamma.empty()) throw EmptyIndexSet("Hamiltonian: coupling index set is empty");
    gamma.check_bounds(n_);
    if (!std::isfinite(coupling)) throw InvalidArgument("Hamiltonian: coupling must be finite");
    terms_[gamma] = coupling;
}

std::size_t Hamiltonian::max_order() const {
    std::size_t k = 0;
    for (const auto& [g, _] : terms_) k = std::max(k, g.size());
    return k;
}

double Hamiltonian::energy(std::span<const std::size_t> symbols) const {
    double e = 0.0;
    for (const auto& [g, j] : terms_) {
        double prod = 1.0;
        for (auto i : g) prod *= symbols[i] ? 1.0 : -1.0;
        e -= j * prod;
    }
    return e;
}

Hamiltonian Hamiltonian::relabeled(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw NotAPermutation("relabeled: permutation length mismatch");
    Hamiltonian out(n_);
    for (const auto& [g, j] : terms_) {
        std::vector<std::size_t> idx;
        for (auto i : g) idx.push_back(perm[i]);
        out.set(IndexSet(std::move(idx)), j);
    }
    return out;
}

std::vector<IndexSet> interaction_sets(std::size_t n, std::size_t k) {
    std::vector<IndexSet> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t size) {
        if (cur.size() == size) {
            out.emplace_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1, size);
            cur.pop_back();
        }
    };
    for (std::size_t size = 1; size <= std::min(k, n); ++size) rec(0, size);
    return out;
}

Hamiltonian random_hamiltonian(std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t stream) {
    if (k < 1 || k > n) throw InvalidArgument("random_hamiltonian: need 1 <= k <= n");
    CounterRng rng(seed, stream);
    Hamiltonian h(n);
    for (const auto& g : interaction_sets(n, k)) h.set(g, rng.normal());
    return h;
}

JointTable gibbs(const Hamiltonian& h, double beta) {
    const std::size_t n = h.num_vars();
    if (n > kGibbsCap) {
        throw TooLarge("gibbs: " + std::to_string(n) + " spins exceeds the exact-enumeration cap of " +
                       std::to_string(kGibbsCap));
    }
    if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("gibbs: beta must be finite and >= 0");

    const std::size_t total = std::size_t{1} << n;
    std::vector<long double> logw(total);
    std::vector<std::size_t> cfg(n);
    long double top = -INFINITY;
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t j = 0; j < n; ++j) cfg[j] = flat >> (n - 1 - j) & 1u;
        logw[flat] = -static_cast<long double>(beta) * h.energy(cfg);
        top = std::max(top, logw[flat]);
    }
    long double z = 0.0L;
    for (auto& w : logw) {
        w = std::exp(w - top);
        z += w;
    }
    std::vector<double> probs(total);
    for (std::size_t i = 0; i < total; ++i) probs[i] = static_cast<double>(logw[i] / z);
    return detail_trusted_table(std::vector<std::size_t>(n, 2), std::move(probs));
}

SampleSummary summarize(const std::vector<double>& values) {
    SampleSummary s;
    if (values.empty()) return s;
    long double sum = 0.0L;
    for (double v : values) sum += v;
    s.mean = static_cast<double>(sum / values.size());
    if (values.size() > 1) {
        long double ss = 0.0L;
        for (double v : values) ss += (v - s.mean) * static_cast<long double>(v - s.mean);
        s.sd = static_cast<double>(std::sqrt(ss / (values.size() - 1)));
    }
    s.std_error = s.sd / std::sqrt(static_cast<double>(values.size()));
    s.ci_low = s.mean - 1.96 * s.std_error;
    s.ci_high = s.mean + 1.96 * s.std_error;
    return s;
}

EnsembleResult ensemble_omega(const EnsembleSpec& spec) {
    if (spec.trials < 1) throw InvalidArgument("ensemble: trials must be >= 1");
    if (spec.k < 2 || spec.k > spec.n) throw InvalidArgument("ensemble: need 2 <= k <= n");
    if (!(spec.beta >= 0.0)) throw InvalidArgument("ensemble: beta must be >= 0");
    EnsembleResult r;
    r.omega_bits.resize(spec.trials);
    const LogUnit bits = LogUnit::bit();
    parallel_for(spec.trials, [&](std::size_t t) {
        const auto h = random_hamiltonian(spec.n, spec.k, spec.seed, t);
        r.omega_bits[t] = o_information(gibbs(h, spec.beta), bits);
    });
    r.summary = summarize(r.omega_bits);
    return r;
}

}  // namespace hoi
