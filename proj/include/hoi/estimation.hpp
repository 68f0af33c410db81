#pragma once

// Empirical joint distributions from categorical time series, with circular
// block-bootstrap standard errors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hoi/dist.hpp"

namespace hoi {

// T x n matrix of symbol indices with per-channel alphabets.
class SeriesTable {
public:
    // data is row-major: data[t * n + c]. Throws on inconsistent sizes,
    // out-of-alphabet symbols, T == 0 (EmptySeries) or n == 0.
    SeriesTable(std::vector<std::string> channels, std::vector<std::vector<std::string>> alphabets,
                std::vector<std::uint32_t> data);

    std::size_t num_channels() const { return channels_.size(); }
    std::size_t num_steps() const { return data_.size() / channels_.size(); }
    const std::vector<std::string>& channels() const { return channels_; }
    const std::vector<std::vector<std::string>>& alphabets() const { return alphabets_; }
    std::uint32_t symbol(std::size_t t, std::size_t c) const { return data_[t * channels_.size() + c]; }
    const std::vector<std::uint32_t>& data() const { return data_; }

    std::vector<std::size_t> shape() const;

private:
    std::vector<std::string> channels_;
    std::vector<std::vector<std::string>> alphabets_;
    std::vector<std::uint32_t> data_;
};

// Relative frequencies over the declared alphabets. With smoothing > 0 every
// cell gets `smoothing` pseudo-counts first (off by default).
JointTable empirical_joint(const SeriesTable& s, double smoothing = 0.0);

// T i.i.d. draws from t as a series (channels named x1..xn, symbols "0".."m-1").
SeriesTable sample_series(const JointTable& t, std::size_t steps, std::uint64_t seed);

// A scalar (or several) computed from a joint table in a given unit.
using Statistic = std::function<std::vector<double>(const JointTable&, const LogUnit&)>;
using Metric = std::function<double(const JointTable&, const LogUnit&)>;

// entropy, negentropy, total_correlation, binding_entropy, o_information,
// interaction_information, tse, and the pairwise forms mi:i,j  cmi:i,j
// omega:i,j with 1-based channel indices. Throws InvalidArgument otherwise.
Metric named_metric(const std::string& name);

struct BootstrapOptions {
    std::size_t block_len = 0;  // 0 selects default_block_len(T)
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    double smoothing = 0.0;
};

struct BootstrapResult {
    double point = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;
    std::size_t block_len = 0;
    std::uint64_t seed = 0;
};

// ceil(T^(1/3))
std::size_t default_block_len(std::size_t steps);

// Replicate r draws ceil(T / L) block starts uniformly from stream r of the
// seed, concatenates the wrap-around blocks of length L, truncates to T and
// evaluates the statistic on that replicate's empirical joint. std_error is
// the sample standard deviation of the sorted replicate values.
std::vector<BootstrapResult> circular_block_bootstrap(const SeriesTable& s, const Statistic& stat,
                                                      const BootstrapOptions& opts, const LogUnit& u);
BootstrapResult circular_block_bootstrap(const SeriesTable& s, const Metric& metric,
                                         const BootstrapOptions& opts, const LogUnit& u);

struct PairRow {
    std::size_t i = 0;
    std::size_t j = 0;
    BootstrapResult mi;
    BootstrapResult cmi;
    BootstrapResult omega;  // point is exactly mi.point - cmi.point
};

struct PairwiseReport {
    LogUnit unit = LogUnit::bit();
    std::vector<PairRow> rows;  // (0,1), (0,2), ..., (n-2,n-1)
    BootstrapResult omega;      // global O-information
};

// Requires n >= 3 (NeedAtLeastThreeVariables).
PairwiseReport pairwise_report(const SeriesTable& s, const LogUnit& u, const BootstrapOptions& opts);

}  // namespace hoi
