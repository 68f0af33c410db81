#include "hoi/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "hoi/error.hpp"

namespace hoi {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double clamp_rounding(double x) { return (x < 0.0 && x >= -kRoundingClamp) ? 0.0 : x; }

void check_agree(double a_nats, double b_nats, const char* what) {
    const double diff_bits = std::fabs(a_nats - b_nats) / kLn2;
    if (!(diff_bits <= kIdentityToleranceBits)) {
        throw InvariantViolation(std::string(what) + ": routes disagree by " +
                                 std::to_string(diff_bits) + " bits");
    }
}

void check_cap(std::size_t n, std::size_t max_vars, const char* what) {
    if (n > max_vars || n > 62) {
        throw SubsetExplosion(std::string(what) + ": " + std::to_string(n) +
                              " variables exceeds the subset-enumeration cap of " +
                              std::to_string(std::min<std::size_t>(max_vars, 62)));
    }
}

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

double tc_nats(SubsetEntropies& h, std::uint64_t mask) {
    double s = 0.0;
    for (std::size_t j = 0; j < h.num_vars(); ++j) {
        if (mask & bit(j)) s += h(bit(j));
    }
    return s - h(mask);
}

double residual_nats(SubsetEntropies& h, std::size_t j) {
    return clamp_rounding(h(h.full_mask()) - h(h.full_mask() & ~bit(j)));
}

double binding_nats(SubsetEntropies& h) {
    double b = h(h.full_mask());
    for (std::size_t j = 0; j < h.num_vars(); ++j) b -= residual_nats(h, j);
    return b;
}

double omega_entropy_form_nats(SubsetEntropies& h) {
    const std::size_t n = h.num_vars();
    double w = (static_cast<double>(n) - 2.0) * h(h.full_mask());
    for (std::size_t j = 0; j < n; ++j) w += h(bit(j)) - h(h.full_mask() & ~bit(j));
    return w;
}

double omega_nats(SubsetEntropies& h) {
    const double w = tc_nats(h, h.full_mask()) - binding_nats(h);
    check_agree(w, omega_entropy_form_nats(h), "o_information");
    return w;
}

double local_omega_nats(SubsetEntropies& h, std::size_t i, std::size_t j) {
    const std::uint64_t rest = h.full_mask() & ~bit(i) & ~bit(j);
    return h.mi(bit(i), bit(j)) - h.mi(bit(i), bit(j), rest);
}

// Masks of all size-k subsets of {0..n-1}, ascending.
std::vector<std::uint64_t> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < bit(n); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) == k) out.push_back(m);
    }
    return out;
}

double avg_tc_nats(SubsetEntropies& h, std::size_t k) {
    const auto subsets = subsets_of_size(h.num_vars(), k);
    double s = 0.0;
    for (auto m : subsets) s += tc_nats(h, m);
    return s / static_cast<double>(subsets.size());
}

double tse_profile_nats(SubsetEntropies& h) {
    const std::size_t n = h.num_vars();
    const double c = tc_nats(h, h.full_mask());
    double tse = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        tse += static_cast<double>(k) / static_cast<double>(n) * c - avg_tc_nats(h, k);
    }
    return tse;
}

double tse_bipartition_nats(SubsetEntropies& h) {
    const std::size_t n = h.num_vars();
    double tse = 0.0;
    for (std::size_t k = 1; 2 * k <= n; ++k) {
        const auto subsets = subsets_of_size(n, k);
        double s = 0.0;
        for (auto m : subsets) s += h.mi(m, h.full_mask() & ~m);
        const double weight = (2 * k == n) ? 0.5 : 1.0;
        tse += weight * s / static_cast<double>(subsets.size());
    }
    return tse;
}

double tse_nats(SubsetEntropies& h) {
    const double a = tse_profile_nats(h);
    check_agree(a, tse_bipartition_nats(h), "tse_complexity");
    return a;
}

void require_vars(const JointTable& t, std::size_t min_n, const char* what) {
    if (t.num_vars() < min_n) {
        if (min_n >= 3) {
            throw NeedAtLeastThreeVariables(std::string(what) + ": needs at least 3 variables");
        }
        throw InvalidArgument(std::string(what) + ": needs at least " + std::to_string(min_n) +
                              " variables");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

SubsetEntropies::SubsetEntropies(const JointTable& t)
    : table_(&t), n_(t.num_vars()) {
    if (n_ > 63) throw TooLarge("subset entropies limited to 63 variables");
    full_ = bit(n_) - 1;
}

double SubsetEntropies::operator()(std::uint64_t mask) {
    if (mask == 0) return 0.0;
    if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
    const double h = entropy_nats(*table_, IndexSet::from_mask(mask));
    cache_.emplace(mask, h);
    return h;
}

double SubsetEntropies::mi(std::uint64_t a, std::uint64_t b, std::uint64_t given) {
    auto& h = *this;
    return h(a | given) + h(b | given) - h(a | b | given) - h(given);
}

// ---------------------------------------------------------------------------

double negentropy(const JointTable& t, const LogUnit& u) {
    double max_h = 0.0;
    for (auto s : t.shape()) max_h += std::log(static_cast<double>(s));
    return u.from_nats(clamp_rounding(max_h - plogp_nats(t.probs())));
}

double total_correlation(const JointTable& t, const LogUnit& u) {
    SubsetEntropies h(t);
    return u.from_nats(clamp_rounding(tc_nats(h, h.full_mask())));
}

std::vector<double> residual_entropies(const JointTable& t, const LogUnit& u) {
    SubsetEntropies h(t);
    std::vector<double> r;
    for (std::size_t j = 0; j < t.num_vars(); ++j) r.push_back(u.from_nats(residual_nats(h, j)));
    return r;
}

double binding_entropy(const JointTable& t, const LogUnit& u) {
    SubsetEntropies h(t);
    return u.from_nats(clamp_rounding(binding_nats(h)));
}

double o_information(const JointTable& t, const LogUnit& u) {
    SubsetEntropies h(t);
    return u.from_nats(omega_nats(h));
}

double o_information_entropy_form(const JointTable& t, const LogUnit& u) {
    SubsetEntropies h(t);
    return u.from_nats(omega_entropy_form_nats(h));
}

double interaction_information(const JointTable& t, const LogUnit& u, std::size_t max_vars) {
    const std::size_t n = t.num_vars();
    check_cap(n, max_vars, "interaction_information");
    SubsetEntropies h(t);
    double s = 0.0;
    for (std::uint64_t m = 1; m < bit(n); ++m) {
        const double sign = (std::popcount(m) % 2 == 0) ? 1.0 : -1.0;
        s += sign * h(m);
    }
    return u.from_nats(-s);
}

double local_o_information(const JointTable& t, std::size_t i, std::size_t j, const LogUnit& u) {
    const std::size_t n = t.num_vars();
    if (i >= n || j >= n) throw IndexOutOfRange("local_o_information: pair index out of range");
    if (i == j) throw InvalidArgument("local_o_information: i and j must differ");
    require_vars(t, 3, "local_o_information");
    SubsetEntropies h(t);
    return u.from_nats(local_omega_nats(h, i, j));
}

double avg_subset_correlation(const JointTable& t, std::size_t k, const LogUnit& u,
                              std::size_t max_vars) {
    const std::size_t n = t.num_vars();
    if (k < 1 || k > n) {
        throw IndexOutOfRange("avg_subset_correlation: k must be in [1, " + std::to_string(n) + "]");
    }
    check_cap(n, max_vars, "avg_subset_correlation");
    SubsetEntropies h(t);
    return u.from_nats(avg_tc_nats(h, k));
}

double tse_from_subset_correlations(const JointTable& t, const LogUnit& u, std::size_t max_vars) {
    require_vars(t, 2, "tse_complexity");
    check_cap(t.num_vars(), max_vars, "tse_complexity");
    SubsetEntropies h(t);
    return u.from_nats(tse_profile_nats(h));
}

double tse_from_bipartitions(const JointTable& t, const LogUnit& u, std::size_t max_vars) {
    require_vars(t, 2, "tse_complexity");
    check_cap(t.num_vars(), max_vars, "tse_complexity");
    SubsetEntropies h(t);
    return u.from_nats(tse_bipartition_nats(h));
}

double tse_complexity(const JointTable& t, const LogUnit& u, std::size_t max_vars) {
    require_vars(t, 2, "tse_complexity");
    check_cap(t.num_vars(), max_vars, "tse_complexity");
    SubsetEntropies h(t);
    return u.from_nats(tse_nats(h));
}

double sum_single_vs_rest_mi(const JointTable& t, const LogUnit& u) {
    SubsetEntropies h(t);
    double s = 0.0;
    for (std::size_t i = 0; i < t.num_vars(); ++i) s += h.mi(bit(i), h.full_mask() & ~bit(i));
    return u.from_nats(s);
}

PsiProfile psi_profile(const JointTable& t, const LogUnit& u, std::size_t max_vars) {
    require_vars(t, 3, "psi_profile");
    const std::size_t n = t.num_vars();
    check_cap(n, max_vars, "psi_profile");
    SubsetEntropies h(t);

    PsiProfile out;
    for (std::size_t k = 1; k < n; ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (auto g : subsets_of_size(n, k)) {
            for (std::size_t j = 0; j < n; ++j) {
                if (g & bit(j)) continue;
                best = std::max(best, clamp_rounding(h.mi(bit(j), g)));
            }
        }
        out.psi.push_back(u.from_nats(best));
    }

    // Deviation from the reference line psi(1) + k/K [psi(K) - psi(1)] with
    // K = n - 1, the largest subset size that still excludes the target.
    const double first = out.psi.front();
    const double last = out.psi.back();
    const double top = static_cast<double>(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double line = static_cast<double>(k) / top * (last - first) + first;
        out.convexity += out.psi[k - 1] - line;
    }
    return out;
}

Interval omega_bounds(std::size_t n, std::size_t alphabet_max, const LogUnit& u) {
    if (n < 2) throw InvalidArgument("omega_bounds: n must be >= 2");
    if (alphabet_max < 2) throw InvalidArgument("omega_bounds: alphabet size must be >= 2");
    const double l = std::log(static_cast<double>(alphabet_max));
    const double span = (static_cast<double>(n) - 2.0) * l;
    return {u.from_nats(-span), u.from_nats(span)};
}

Interval subset_correlation_bounds(double omega, std::size_t n, std::size_t m,
                                   std::size_t alphabet_max, const LogUnit& u) {
    if (m < 1 || m >= n) throw InvalidArgument("subset_correlation_bounds: need 1 <= m < n");
    if (alphabet_max < 2) throw InvalidArgument("subset_correlation_bounds: alphabet size must be >= 2");
    const double l = std::log(static_cast<double>(alphabet_max));
    const double r = u.to_nats(omega) / l;
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double lower = std::max(0.0, r - (nn - mm - 1.0));
    const double upper = std::min(mm - 1.0, r + (nn - 2.0));
    return {u.from_nats(lower * l), u.from_nats(upper * l)};
}

Interval omega_bounds_given_subset(double subset_tc, std::size_t n, std::size_t m,
                                   std::size_t alphabet_max, const LogUnit& u) {
    if (m < 1 || m >= n) throw InvalidArgument("omega_bounds_given_subset: need 1 <= m < n");
    if (alphabet_max < 2) throw InvalidArgument("omega_bounds_given_subset: alphabet size must be >= 2");
    const double l = std::log(static_cast<double>(alphabet_max));
    const double c = u.to_nats(subset_tc);
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return {u.from_nats(c - (nn - 2.0) * l), u.from_nats(c + (nn - mm - 1.0) * l)};
}

MetricReport metric_report(const JointTable& t, const LogUnit& u, std::size_t max_vars) {
    const std::size_t n = t.num_vars();
    SubsetEntropies h(t);
    MetricReport r;
    r.unit = u;
    r.shape = t.shape();

    const double hj = h(h.full_mask());
    double max_h = 0.0;
    for (auto s : t.shape()) max_h += std::log(static_cast<double>(s));
    const double neg = clamp_rounding(max_h - hj);
    const double c = clamp_rounding(tc_nats(h, h.full_mask()));
    const double b = clamp_rounding(binding_nats(h));
    const double w = omega_nats(h);
    double cb_mi = 0.0;
    for (std::size_t i = 0; i < n; ++i) cb_mi += h.mi(bit(i), h.full_mask() & ~bit(i));

    check_agree(w, c - b, "metric_report: omega vs C - B");
    check_agree(c + b, cb_mi, "metric_report: C + B vs sum of single-vs-rest MI");

    double marg_neg_sum = 0.0;
    double resid_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double nj = clamp_rounding(std::log(static_cast<double>(t.shape()[j])) - h(bit(j)));
        const double rj = residual_nats(h, j);
        marg_neg_sum += nj;
        resid_sum += rj;
        r.marginal_negentropies.push_back(u.from_nats(nj));
        r.residuals.push_back(u.from_nats(rj));
    }
    check_agree(neg, marg_neg_sum + c, "metric_report: negentropy decomposition");
    check_agree(hj, resid_sum + b, "metric_report: entropy decomposition");

    r.joint_entropy = u.from_nats(hj);
    r.negentropy = u.from_nats(neg);
    r.total_correlation = u.from_nats(c);
    r.binding_entropy = u.from_nats(b);
    r.o_information = u.from_nats(w);
    r.sum_cb = u.from_nats(c + b);

    if (n >= 2) {
        check_cap(n, max_vars, "metric_report (tse)");
        r.tse = u.from_nats(tse_nats(h));
    }

    r.local_omega.assign(n, std::vector<std::optional<double>>(n));
    if (n >= 3) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = u.from_nats(local_omega_nats(h, i, j));
                r.local_omega[i][j] = v;
                r.local_omega[j][i] = v;
            }
        }
    }
    return r;
}

}  // namespace hoi
