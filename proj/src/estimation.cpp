#include "hoi/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hoi/error.hpp"
#include "hoi/metrics.hpp"
#include "hoi/parallel.hpp"
#include "hoi/rng.hpp"

namespace hoi {

namespace {

// Flat joint index of every time step.
std::vector<std::size_t> encode_steps(const SeriesTable& s) {
    const auto shape = s.shape();
    const std::size_t n = s.num_channels();
    std::vector<std::size_t> codes(s.num_steps());
    for (std::size_t t = 0; t < codes.size(); ++t) {
        std::size_t flat = 0;
        for (std::size_t c = 0; c < n; ++c) flat = flat * shape[c] + s.symbol(t, c);
        codes[t] = flat;
    }
    return codes;
}

JointTable table_from_counts(const std::vector<std::size_t>& shape, const std::vector<std::uint64_t>& counts,
                             std::size_t steps, double smoothing) {
    std::vector<double> probs(counts.size());
    if (smoothing > 0.0) {
        const double denom = static_cast<double>(steps) + smoothing * static_cast<double>(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            probs[i] = (static_cast<double>(counts[i]) + smoothing) / denom;
        }
    } else {
        const double denom = static_cast<double>(steps);
        for (std::size_t i = 0; i < counts.size(); ++i) probs[i] = static_cast<double>(counts[i]) / denom;
    }
    return detail_trusted_table(shape, std::move(probs));
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& spec, const std::string& name) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) throw InvalidArgument("metric '" + name + "': expected i,j");
    std::size_t i = 0, j = 0;
    try {
        i = std::stoul(spec.substr(0, comma));
        j = std::stoul(spec.substr(comma + 1));
    } catch (const std::exception&) {
        throw InvalidArgument("metric '" + name + "': indices must be positive integers");
    }
    if (i < 1 || j < 1) throw InvalidArgument("metric '" + name + "': indices are 1-based");
    return {i - 1, j - 1};
}

}  // namespace

SeriesTable::SeriesTable(std::vector<std::string> channels, std::vector<std::vector<std::string>> alphabets,
                         std::vector<std::uint32_t> data)
    : channels_(std::move(channels)), alphabets_(std::move(alphabets)), data_(std::move(data)) {
    const std::size_t n = channels_.size();
    if (n == 0) throw InvalidArgument("series: need at least one channel");
    if (alphabets_.size() != n) throw DimensionMismatch("series: one alphabet per channel required");
    for (std::size_t c = 0; c < n; ++c) {
        if (alphabets_[c].empty()) throw InvalidArgument("series: channel '" + channels_[c] + "' has an empty alphabet");
    }
    if (data_.empty()) throw EmptySeries("series: no time steps");
    if (data_.size() % n != 0) throw DimensionMismatch("series: data length is not a multiple of the channel count");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        const std::size_t c = k % n;
        if (data_[k] >= alphabets_[c].size()) {
            throw IndexOutOfRange("series: symbol index out of range at step " + std::to_string(k / n) +
                                  ", channel '" + channels_[c] + "'");
        }
    }
}

std::vector<std::size_t> SeriesTable::shape() const {
    std::vector<std::size_t> sh;
    for (const auto& a : alphabets_) sh.push_back(a.size());
    return sh;
}

JointTable empirical_joint(const SeriesTable& s, double smoothing) {
    if (smoothing < 0.0) throw InvalidArgument("empirical_joint: smoothing must be >= 0");
    const auto shape = s.shape();
    std::size_t cells = 1;
    for (auto a : shape) cells *= a;
    std::vector<std::uint64_t> counts(cells, 0);
    for (auto code : encode_steps(s)) ++counts[code];
    return table_from_counts(shape, counts, s.num_steps(), smoothing)
        .with_labels(s.channels());
}

SeriesTable sample_series(const JointTable& t, std::size_t steps, std::uint64_t seed) {
    if (steps == 0) throw EmptySeries("sample_series: steps must be >= 1");
    std::vector<double> cdf(t.size());
    std::partial_sum(t.probs().begin(), t.probs().end(), cdf.begin());
    CounterRng rng(seed, 0);
    const std::size_t n = t.num_vars();
    std::vector<std::uint32_t> data;
    data.reserve(steps * n);
    for (std::size_t k = 0; k < steps; ++k) {
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t flat = static_cast<std::size_t>(it - cdf.begin());
        if (flat >= t.size()) flat = t.size() - 1;
        for (auto v : t.config_of(flat)) data.push_back(static_cast<std::uint32_t>(v));
    }
    std::vector<std::string> channels;
    std::vector<std::vector<std::string>> alphabets;
    for (std::size_t j = 0; j < n; ++j) {
        channels.push_back("x" + std::to_string(j + 1));
        std::vector<std::string> a;
        for (std::size_t v = 0; v < t.shape()[j]; ++v) a.push_back(std::to_string(v));
        alphabets.push_back(std::move(a));
    }
    return SeriesTable(std::move(channels), std::move(alphabets), std::move(data));
}

Metric named_metric(const std::string& name) {
    if (name == "entropy") return [](const JointTable& t, const LogUnit& u) { return entropy(t, u); };
    if (name == "negentropy") return [](const JointTable& t, const LogUnit& u) { return negentropy(t, u); };
    if (name == "total_correlation") {
        return [](const JointTable& t, const LogUnit& u) { return total_correlation(t, u); };
    }
    if (name == "binding_entropy") {
        return [](const JointTable& t, const LogUnit& u) { return binding_entropy(t, u); };
    }
    if (name == "o_information") return [](const JointTable& t, const LogUnit& u) { return o_information(t, u); };
    if (name == "interaction_information") {
        return [](const JointTable& t, const LogUnit& u) { return interaction_information(t, u); };
    }
    if (name == "tse") return [](const JointTable& t, const LogUnit& u) { return tse_complexity(t, u); };

    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        const std::string kind = name.substr(0, colon);
        const auto [i, j] = parse_pair(name.substr(colon + 1), name);
        if (kind == "mi") {
            return [i, j](const JointTable& t, const LogUnit& u) {
                return mutual_information(t, IndexSet{i}, IndexSet{j}, std::nullopt, u);
            };
        }
        if (kind == "cmi") {
            return [i, j](const JointTable& t, const LogUnit& u) {
                const IndexSet rest = IndexSet{i, j}.complement(t.num_vars());
                return mutual_information(t, IndexSet{i}, IndexSet{j}, rest, u);
            };
        }
        if (kind == "omega") {
            return [i, j](const JointTable& t, const LogUnit& u) { return local_o_information(t, i, j, u); };
        }
    }
    throw InvalidArgument("unknown metric '" + name + "'");
}

std::size_t default_block_len(std::size_t steps) {
    auto l = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(steps))));
    // cbrt may land just above an exact integer cube root
    while (l > 1 && (l - 1) * (l - 1) * (l - 1) >= steps) --l;
    return std::max<std::size_t>(1, l);
}

std::vector<BootstrapResult> circular_block_bootstrap(const SeriesTable& s, const Statistic& stat,
                                                      const BootstrapOptions& opts, const LogUnit& u) {
    const std::size_t steps = s.num_steps();
    const std::size_t block = opts.block_len == 0 ? default_block_len(steps) : opts.block_len;
    if (block < 1) throw InvalidArgument("bootstrap: block length must be >= 1");
    if (block > steps) {
        throw BlockTooLong("bootstrap: block length " + std::to_string(block) + " exceeds series length " +
                           std::to_string(steps));
    }
    if (opts.replicates < 2) throw InvalidArgument("bootstrap: need at least 2 replicates");

    const auto shape = s.shape();
    const auto codes = encode_steps(s);
    std::size_t cells = 1;
    for (auto a : shape) cells *= a;

    std::vector<std::uint64_t> counts(cells, 0);
    for (auto c : codes) ++counts[c];
    const auto point = stat(table_from_counts(shape, counts, steps, opts.smoothing), u);

    const std::size_t blocks = (steps + block - 1) / block;
    std::vector<std::vector<double>> reps(opts.replicates);
    parallel_for(opts.replicates, [&](std::size_t r) {
        CounterRng rng(opts.seed, r);
        std::vector<std::uint64_t> rc(cells, 0);
        std::size_t filled = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            std::size_t pos = static_cast<std::size_t>(rng.below(steps));
            for (std::size_t k = 0; k < block && filled < steps; ++k, ++filled) {
                ++rc[codes[pos]];
                if (++pos == steps) pos = 0;
            }
        }
        reps[r] = stat(table_from_counts(shape, rc, steps, opts.smoothing), u);
    });

    std::vector<BootstrapResult> out(point.size());
    for (std::size_t m = 0; m < point.size(); ++m) {
        std::vector<double> vals(opts.replicates);
        for (std::size_t r = 0; r < opts.replicates; ++r) vals[r] = reps[r].at(m);
        std::sort(vals.begin(), vals.end());
        long double mean = 0.0L;
        for (double v : vals) mean += v;
        mean /= static_cast<long double>(vals.size());
        long double ss = 0.0L;
        for (double v : vals) ss += (v - mean) * (v - mean);
        out[m].point = point[m];
        out[m].std_error = static_cast<double>(std::sqrt(ss / static_cast<long double>(vals.size() - 1)));
        out[m].replicates = opts.replicates;
        out[m].block_len = block;
        out[m].seed = opts.seed;
    }
    return out;
}

BootstrapResult circular_block_bootstrap(const SeriesTable& s, const Metric& metric,
                                         const BootstrapOptions& opts, const LogUnit& u) {
    Statistic stat = [&metric](const JointTable& t, const LogUnit& unit) {
        return std::vector<double>{metric(t, unit)};
    };
    return circular_block_bootstrap(s, stat, opts, u).front();
}

PairwiseReport pairwise_report(const SeriesTable& s, const LogUnit& u, const BootstrapOptions& opts) {
    const std::size_t n = s.num_channels();
    if (n < 3) throw NeedAtLeastThreeVariables("pairwise_report: needs at least 3 channels");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }

    // Layout: per pair (mi, cmi, omega), then the global O-information.
    Statistic stat = [&pairs](const JointTable& t, const LogUnit& unit) {
        SubsetEntropies h(t);
        std::vector<double> v;
        v.reserve(3 * pairs.size() + 1);
        for (auto [i, j] : pairs) {
            const std::uint64_t a = std::uint64_t{1} << i;
            const std::uint64_t b = std::uint64_t{1} << j;
            const double mi = unit.from_nats(h.mi(a, b));
            const double cmi = unit.from_nats(h.mi(a, b, h.full_mask() & ~a & ~b));
            v.push_back(mi);
            v.push_back(cmi);
            v.push_back(mi - cmi);
        }
        v.push_back(o_information(t, unit));
        return v;
    };
    const auto res = circular_block_bootstrap(s, stat, opts, u);

    PairwiseReport rep;
    rep.unit = u;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        rep.rows.push_back({pairs[p].first, pairs[p].second, res[3 * p], res[3 * p + 1], res[3 * p + 2]});
    }
    rep.omega = res.back();
    return rep;
}

}  // namespace hoi
