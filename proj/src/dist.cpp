#include "hoi/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hoi/error.hpp"

namespace hoi {

// ---------------------------------------------------------------------------
// LogUnit

LogUnit::LogUnit(double base, std::string name)
    : base_(base), ln_base_(std::log(base)), name_(std::move(name)) {}

LogUnit LogUnit::nat() { return LogUnit(std::exp(1.0), "nat"); }

LogUnit LogUnit::with_base(double base) {
    if (!(base > 1.0) || !std::isfinite(base)) {
        throw InvalidArgument("log base must be a finite real > 1, got " + std::to_string(base));
    }
    if (base == 2.0) return bit();
    if (base == 13.0) return mut();
    return LogUnit(base, "base:" + std::to_string(base));
}

LogUnit LogUnit::parse(const std::string& text) {
    if (text == "bit" || text == "bits") return bit();
    if (text == "nat" || text == "nats") return nat();
    if (text == "mut" || text == "muts") return mut();
    if (text.rfind("base:", 0) == 0) {
        std::size_t used = 0;
        double b = 0.0;
        try {
            b = std::stod(text.substr(5), &used);
        } catch (const std::exception&) {
            throw InvalidArgument("unit: cannot parse base in '" + text + "'");
        }
        if (used != text.size() - 5) throw InvalidArgument("unit: trailing characters in '" + text + "'");
        return with_base(b);
    }
    throw InvalidArgument("unit: expected bit|nat|mut|base:<real>, got '" + text + "'");
}

double LogUnit::log(double x) const { return std::log(x) / ln_base_; }

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet::IndexSet(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
        throw InvalidArgument("index set contains duplicate indices");
    }
}

IndexSet IndexSet::range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> v;
    for (std::size_t i = first; i < last; ++i) v.push_back(i);
    return IndexSet(std::move(v));
}

IndexSet IndexSet::from_mask(std::uint64_t mask) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < 64; ++i) {
        if (mask >> i & 1u) v.push_back(i);
    }
    return IndexSet(std::move(v));
}

bool IndexSet::contains(std::size_t i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
}

std::uint64_t IndexSet::mask() const {
    std::uint64_t m = 0;
    for (auto i : idx_) {
        if (i >= 64) throw IndexOutOfRange("index set mask limited to 64 variables");
        m |= std::uint64_t{1} << i;
    }
    return m;
}

void IndexSet::check_bounds(std::size_t n) const {
    if (!idx_.empty() && idx_.back() >= n) {
        throw IndexOutOfRange("variable index " + std::to_string(idx_.back()) +
                              " out of range for " + std::to_string(n) + " variables");
    }
}

IndexSet IndexSet::united(const IndexSet& other) const {
    std::vector<std::size_t> v;
    std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                   std::back_inserter(v));
    IndexSet out;
    out.idx_ = std::move(v);
    return out;
}

bool IndexSet::disjoint(const IndexSet& other) const {
    auto a = idx_.begin();
    auto b = other.idx_.begin();
    while (a != idx_.end() && b != other.idx_.end()) {
        if (*a == *b) return false;
        if (*a < *b) ++a; else ++b;
    }
    return true;
}

IndexSet IndexSet::complement(std::size_t n) const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i) {
        if (!contains(i)) v.push_back(i);
    }
    IndexSet out;
    out.idx_ = std::move(v);
    return out;
}

std::string IndexSet::to_string() const {
    std::string s;
    for (auto i : idx_) {
        if (i < 9) {
            s += static_cast<char>('1' + i);
        } else {
            s += "(" + std::to_string(i + 1) + ")";
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// JointTable

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t total = 1;
    for (auto s : shape) total *= s;
    return total;
}

void validate_shape(const std::vector<std::size_t>& shape) {
    if (shape.empty()) throw DimensionMismatch("shape: need at least one variable");
    for (std::size_t j = 0; j < shape.size(); ++j) {
        if (shape[j] < 1) {
            throw DimensionMismatch("shape[" + std::to_string(j) + "]: alphabet size must be >= 1");
        }
    }
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape) {
    std::vector<std::size_t> st(shape.size(), 1);
    for (std::size_t j = shape.size(); j-- > 1;) st[j - 1] = st[j] * shape[j];
    return st;
}

void renormalize(std::vector<double>& probs) {
    long double sum = 0.0L;
    for (double p : probs) sum += p;
    // Leave tables that are already normalized to rounding untouched.
    if (std::fabs(static_cast<double>(sum - 1.0L)) > 1e-15) {
        for (double& p : probs) p = static_cast<double>(p / sum);
    }
}

}  // namespace

std::size_t JointTable::max_alphabet() const {
    return *std::max_element(shape_.begin(), shape_.end());
}

std::size_t JointTable::flat_index(std::span<const std::size_t> config) const {
    if (config.size() != shape_.size()) {
        throw DimensionMismatch("configuration length does not match variable count");
    }
    std::size_t flat = 0;
    for (std::size_t j = 0; j < shape_.size(); ++j) {
        if (config[j] >= shape_[j]) throw IndexOutOfRange("symbol out of range for variable " + std::to_string(j));
        flat = flat * shape_[j] + config[j];
    }
    return flat;
}

double JointTable::at(std::span<const std::size_t> config) const {
    return probs_[flat_index(config)];
}

std::vector<std::size_t> JointTable::config_of(std::size_t flat) const {
    std::vector<std::size_t> cfg(shape_.size());
    for (std::size_t j = shape_.size(); j-- > 0;) {
        cfg[j] = flat % shape_[j];
        flat /= shape_[j];
    }
    return cfg;
}

JointTable JointTable::with_labels(std::vector<std::string> labels) const {
    if (!labels.empty() && labels.size() != shape_.size()) {
        throw DimensionMismatch("labels: expected " + std::to_string(shape_.size()) + " entries");
    }
    JointTable t = *this;
    t.labels_ = std::move(labels);
    return t;
}

JointTable make_joint(std::vector<std::size_t> shape, std::vector<double> probs,
                      std::vector<std::string> labels) {
    validate_shape(shape);
    if (probs.size() != shape_product(shape)) {
        throw DimensionMismatch("probs: length " + std::to_string(probs.size()) +
                                " does not match shape product " +
                                std::to_string(shape_product(shape)));
    }
    if (!labels.empty() && labels.size() != shape.size()) {
        throw DimensionMismatch("labels: expected " + std::to_string(shape.size()) + " entries");
    }
    long double sum = 0.0L;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double& p = probs[i];
        if (!std::isfinite(p)) throw NotNormalized("probs[" + std::to_string(i) + "]: not finite");
        if (p < 0.0) {
            if (p < -kNegativeClamp) {
                throw NegativeMass("probs[" + std::to_string(i) + "]: negative mass " + std::to_string(p));
            }
            p = 0.0;
        }
        sum += p;
    }
    if (std::fabs(static_cast<double>(sum) - 1.0) > kInputNormTolerance) {
        throw NotNormalized("probs: sum is " + std::to_string(static_cast<double>(sum)) + ", expected 1");
    }
    renormalize(probs);
    return JointTable(std::move(shape), std::move(probs), std::move(labels));
}

JointTable detail_trusted_table(std::vector<std::size_t> shape, std::vector<double> probs) {
    renormalize(probs);
    return JointTable(std::move(shape), std::move(probs), {});
}

JointTable marginalize(const JointTable& t, const IndexSet& keep) {
    if (keep.empty()) throw EmptyIndexSet("marginalize: keep set is empty");
    const std::size_t n = t.num_vars();
    keep.check_bounds(n);
    if (keep.size() == n) return t;

    const auto& shape = t.shape();
    std::vector<std::size_t> out_shape;
    for (auto j : keep) out_shape.push_back(shape[j]);

    // Stride of each input axis in the output (0 for summed-out axes).
    std::vector<std::size_t> ostride(n, 0);
    {
        auto st = strides_of(out_shape);
        for (std::size_t k = 0; k < keep.size(); ++k) ostride[keep[k]] = st[k];
    }

    std::vector<long double> acc(shape_product(out_shape), 0.0L);
    std::vector<std::size_t> digit(n, 0);
    std::size_t out = 0;
    const auto p = t.probs();
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc[out] += p[i];
        for (std::size_t v = n; v-- > 0;) {
            ++digit[v];
            out += ostride[v];
            if (digit[v] < shape[v]) break;
            out -= ostride[v] * shape[v];
            digit[v] = 0;
        }
    }
    std::vector<double> probs(acc.begin(), acc.end());
    std::vector<std::string> labels;
    if (!t.labels().empty()) {
        for (auto j : keep) labels.push_back(t.labels()[j]);
    }
    return detail_trusted_table(std::move(out_shape), std::move(probs)).with_labels(std::move(labels));
}

JointTable product(const JointTable& a, const JointTable& b) {
    std::vector<std::size_t> shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    std::vector<double> probs;
    probs.reserve(a.size() * b.size());
    for (double pa : a.probs()) {
        for (double pb : b.probs()) probs.push_back(pa * pb);
    }
    std::vector<std::string> labels;
    if (!a.labels().empty() && !b.labels().empty()) {
        labels = a.labels();
        labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    }
    return detail_trusted_table(std::move(shape), std::move(probs)).with_labels(std::move(labels));
}

JointTable permute_axes(const JointTable& t, std::span<const std::size_t> perm) {
    const std::size_t n = t.num_vars();
    if (perm.size() != n) throw NotAPermutation("permutation length does not match variable count");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw NotAPermutation("axis order is not a permutation");
        seen[p] = true;
    }
    std::vector<std::size_t> shape(n);
    for (std::size_t i = 0; i < n; ++i) shape[i] = t.shape()[perm[i]];
    std::vector<double> probs(t.size());
    const auto out_strides = strides_of(shape);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        auto cfg = t.config_of(flat);
        std::size_t o = 0;
        for (std::size_t i = 0; i < n; ++i) o += cfg[perm[i]] * out_strides[i];
        probs[o] = t.probs()[flat];
    }
    std::vector<std::string> labels;
    if (!t.labels().empty()) {
        for (auto p : perm) labels.push_back(t.labels()[p]);
    }
    return detail_trusted_table(std::move(shape), std::move(probs)).with_labels(std::move(labels));
}

// ---------------------------------------------------------------------------
// Entropy

double plogp_nats(std::span<const double> p) {
    long double h = 0.0L;
    for (double x : p) {
        if (x > 0.0) h -= static_cast<long double>(x) * std::log(static_cast<long double>(x));
    }
    return static_cast<double>(h);
}

double entropy_nats(const JointTable& t, const IndexSet& vars) {
    if (vars.empty()) return 0.0;
    if (vars.size() == t.num_vars()) {
        vars.check_bounds(t.num_vars());
        return plogp_nats(t.probs());
    }
    return plogp_nats(marginalize(t, vars).probs());
}

double entropy(const JointTable& t, const LogUnit& u) {
    return u.from_nats(plogp_nats(t.probs()));
}

double conditional_entropy(const JointTable& t, const IndexSet& target, const IndexSet& given,
                           const LogUnit& u) {
    if (!target.disjoint(given)) throw OverlappingSets("conditional_entropy: target and given overlap");
    target.check_bounds(t.num_vars());
    given.check_bounds(t.num_vars());
    double h = entropy_nats(t, target.united(given)) - entropy_nats(t, given);
    if (h < 0.0 && h >= -kRoundingClamp) h = 0.0;
    return u.from_nats(h);
}

double mutual_information(const JointTable& t, const IndexSet& a, const IndexSet& b,
                          const std::optional<IndexSet>& given, const LogUnit& u) {
    const IndexSet g = given.value_or(IndexSet{});
    if (!a.disjoint(b) || !a.disjoint(g) || !b.disjoint(g)) {
        throw OverlappingSets("mutual_information: argument sets must be pairwise disjoint");
    }
    a.check_bounds(t.num_vars());
    b.check_bounds(t.num_vars());
    g.check_bounds(t.num_vars());
    double mi = entropy_nats(t, a.united(g)) + entropy_nats(t, b.united(g)) -
                entropy_nats(t, a.united(b).united(g)) - entropy_nats(t, g);
    if (mi < 0.0 && mi >= -kRoundingClamp) mi = 0.0;
    return u.from_nats(mi);
}

}  // namespace hoi
