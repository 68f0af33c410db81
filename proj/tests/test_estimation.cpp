#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hoi/error.hpp"
#include "hoi/estimation.hpp"
#include "hoi/generators.hpp"
#include "hoi/metrics.hpp"
#include "oracle.hpp"

using namespace hoi;

namespace {

const LogUnit kBit = LogUnit::bit();

bool near(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

SeriesTable binary_series(std::size_t n, std::vector<std::uint32_t> data) {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < n; ++c) names.push_back("c" + std::to_string(c));
    return SeriesTable(names, std::vector<std::vector<std::string>>(n, {"0", "1"}), std::move(data));
}

}  // namespace

TEST_CASE("series table validation") {
    CHECK_THROWS_AS(binary_series(2, {}), EmptySeries);
    CHECK_THROWS_AS(binary_series(2, {0, 1, 1}), InputError);
    CHECK_THROWS_AS(binary_series(2, {0, 2}), InputError);
    const auto s = binary_series(2, {0, 1, 1, 0, 1, 1});
    CHECK(s.num_steps() == 3);
    CHECK(s.symbol(1, 0) == 1);
    CHECK(s.shape() == std::vector<std::size_t>{2, 2});
}

TEST_CASE("empirical joint examples") {
    const auto s = binary_series(2, {0, 0, 0, 0, 1, 1, 1, 1});
    const auto t = empirical_joint(s);
    CHECK(t.probs()[0] == 0.5);
    CHECK(t.probs()[3] == 0.5);
    CHECK(t.probs()[1] == 0.0);
    CHECK(near(mutual_information(t, IndexSet{0}, IndexSet{1}, std::nullopt, kBit), 1.0));

    const auto constant = empirical_joint(binary_series(3, std::vector<std::uint32_t>(30, 1)));
    CHECK(entropy(constant, kBit) == 0.0);

    const auto x = empirical_joint(sample_series(nary_xor(3, 2), 100000, 3));
    CHECK(std::fabs(o_information(x, kBit) + 1.0) < 0.02);

    const auto sm = empirical_joint(s, 1.0);
    CHECK(near(sm.probs()[1], 1.0 / 8.0, 1e-15));
}

TEST_CASE("empirical entropy is bounded by the observed support") {
    const auto s = sample_series(random_simplex({2, 3, 2}, 4), 50, 8);
    const auto t = empirical_joint(s);
    std::size_t distinct = 0;
    for (double p : t.probs()) distinct += p > 0;
    CHECK(entropy(t, kBit) <= std::log2(static_cast<double>(distinct)) + 1e-12);
}

TEST_CASE("named metrics") {
    const auto t = nary_copy(4, 2);
    CHECK(near(named_metric("o_information")(t, kBit), 2.0));
    CHECK(near(named_metric("total_correlation")(t, kBit), 3.0));
    CHECK(near(named_metric("mi:1,2")(t, kBit), 1.0));
    CHECK(near(named_metric("cmi:1,2")(t, kBit), 0.0));
    CHECK(near(named_metric("omega:1,4")(t, kBit), 1.0));
    CHECK(near(named_metric("tse")(t, kBit), tse_complexity(t, kBit)));
    CHECK_THROWS_AS(named_metric("nope"), InvalidArgument);
    CHECK_THROWS_AS(named_metric("mi:1"), InputError);
    CHECK_THROWS_AS(named_metric("mi:0,2"), InputError);
}

TEST_CASE("default block length") {
    CHECK(default_block_len(1) == 1);
    CHECK(default_block_len(8) == 2);
    CHECK(default_block_len(9) == 3);
    CHECK(default_block_len(1000) == 10);
    CHECK(default_block_len(1001) == 11);
    CHECK(default_block_len(100000) == 47);
}

TEST_CASE("bootstrap degenerate cases") {
    const auto constant = binary_series(3, std::vector<std::uint32_t>(60, 0));
    BootstrapOptions o;
    o.replicates = 20;
    CHECK(circular_block_bootstrap(constant, named_metric("entropy"), o, kBit).std_error == 0.0);

    const auto s = sample_series(random_simplex({2, 2, 2}, 1), 200, 2);
    o.block_len = 200;
    const auto rot = circular_block_bootstrap(s, named_metric("o_information"), o, kBit);
    CHECK(std::fabs(rot.std_error) < 1e-12);

    o.block_len = 1;
    o.replicates = 2;
    const auto minimal = circular_block_bootstrap(s, named_metric("entropy"), o, kBit);
    CHECK(minimal.std_error >= 0.0);
    CHECK(minimal.replicates == 2);

    o.block_len = 201;
    CHECK_THROWS_AS(circular_block_bootstrap(s, named_metric("entropy"), o, kBit), BlockTooLong);
    o.block_len = 0;
    o.replicates = 1;
    CHECK_THROWS_AS(circular_block_bootstrap(s, named_metric("entropy"), o, kBit), InputError);
}

TEST_CASE("bootstrap is deterministic and defaults the block length") {
    const auto s = sample_series(random_simplex({2, 2, 2}, 3), 500, 4);
    BootstrapOptions o;
    o.replicates = 50;
    o.seed = 17;
    const auto a = circular_block_bootstrap(s, named_metric("o_information"), o, kBit);
    const auto b = circular_block_bootstrap(s, named_metric("o_information"), o, kBit);
    CHECK(a.std_error == b.std_error);
    CHECK(a.point == b.point);
    CHECK(a.block_len == default_block_len(500));
    CHECK(a.seed == 17);
    o.seed = 18;
    CHECK(circular_block_bootstrap(s, named_metric("o_information"), o, kBit).std_error != a.std_error);
}

TEST_CASE("bootstrap coverage of the entropy") {
    const auto gen = random_simplex({2, 3}, 6);
    const double h = entropy(gen, kBit);
    int covered = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const auto s = sample_series(gen, 2000, 1000 + rep);
        BootstrapOptions o;
        o.replicates = 100;
        o.seed = rep;
        const auto r = circular_block_bootstrap(s, named_metric("entropy"), o, kBit);
        covered += std::fabs(r.point - h) <= 3 * r.std_error;
    }
    CHECK(covered >= 95);
}

TEST_CASE("pairwise report signs and row identity") {
    BootstrapOptions o;
    o.replicates = 30;
    const auto copy = pairwise_report(sample_series(nary_copy(4, 2), 2000, 1), kBit, o);
    CHECK(copy.rows.size() == 6);
    for (const auto& r : copy.rows) {
        CHECK(r.omega.point > 0);
        CHECK(r.omega.point == r.mi.point - r.cmi.point);
        CHECK(r.mi.std_error >= 0);
    }
    CHECK(copy.omega.point > 0);
    CHECK(copy.rows[0].i == 0);
    CHECK(copy.rows[0].j == 1);
    CHECK(copy.rows[5].i == 2);
    CHECK(copy.rows[5].j == 3);

    const auto x = pairwise_report(sample_series(nary_xor(4, 2), 5000, 2), kBit, o);
    for (const auto& r : x.rows) CHECK(r.omega.point < 0);
    CHECK(x.omega.point < 0);

    CHECK_THROWS_AS(pairwise_report(binary_series(2, {0, 1}), kBit, o), NeedAtLeastThreeVariables);
}

TEST_CASE("empirical omega is consistent as T grows") {
    const auto gen = random_simplex({2, 2, 2}, 12);
    const double w = o_information(gen, kBit);
    auto median_err = [&](std::size_t steps) {
        std::vector<double> errs;
        for (std::uint64_t rep = 0; rep < 20; ++rep) {
            errs.push_back(std::fabs(o_information(empirical_joint(sample_series(gen, steps, 500 + rep)), kBit) - w));
        }
        std::sort(errs.begin(), errs.end());
        return 0.5 * (errs[9] + errs[10]);
    };
    const double e3 = median_err(1000), e4 = median_err(10000), e5 = median_err(100000);
    CHECK(e4 < e3);
    CHECK(e5 < e4);
}
