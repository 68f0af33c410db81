#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hoi/cli.hpp"
#include "hoi/estimation.hpp"
#include "hoi/generators.hpp"
#include "hoi/io.hpp"

using namespace hoi;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("hoi_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string dist_file(const std::string& name, const JointTable& t) {
    return write(name, distribution_to_json(t).dump());
}

// Writes a series drawn from t with its sidecar; returns {csv, alphabet}.
std::pair<std::string, std::string> series_files(const std::string& name, const JointTable& t, std::size_t steps) {
    const auto s = sample_series(t, steps, 5);
    std::ostringstream csv;
    nlohmann::json chans = nlohmann::json::array();
    for (std::size_t c = 0; c < s.num_channels(); ++c) {
        csv << (c ? "," : "") << s.channels()[c];
        chans.push_back({{"name", s.channels()[c]}, {"alphabet", s.alphabets()[c]}});
    }
    csv << "\n";
    for (std::size_t r = 0; r < s.num_steps(); ++r) {
        for (std::size_t c = 0; c < s.num_channels(); ++c) {
            csv << (c ? "," : "") << s.alphabets()[c][s.symbol(r, c)];
        }
        csv << "\n";
    }
    return {write(name + ".csv", csv.str()), write(name + ".json", nlohmann::json{{"channels", chans}}.dump())};
}

}  // namespace

TEST_CASE("cli metrics") {
    const auto copy3 = dist_file("copy3.json", nary_copy(3, 2));
    auto r = run({"metrics", "--dist", copy3, "--unit", "bit"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["o_information"].get<double>() == doctest::Approx(1.0));
    CHECK(j["unit"] == "bit");

    r = run({"--unit", "nat", "metrics", "--dist", copy3});
    CHECK(nlohmann::json::parse(r.out)["o_information"].get<double>() == doctest::Approx(std::log(2.0)));

    r = run({"metrics", "--dist", copy3, "--format", "csv"});
    CHECK(r.out.rfind("field,value", 0) == 0);

    const auto [csv, alpha] = series_files("chords", random_simplex({3, 3, 2}, 2), 500);
    r = run({"metrics", "--series", csv, "--alphabet", alpha, "--unit", "mut"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["unit"] == "mut");
    CHECK(nlohmann::json::parse(r.out)["unit_base"].get<double>() == 13.0);
}

TEST_CASE("cli metrics errors") {
    const auto bad = write("bad.json", "{\"shape\": [2], \"probs\": [0.5,");
    auto r = run({"metrics", "--dist", bad});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());

    const auto field = write("field.json", R"({"shape":[2],"probs":[0.5,"x"]})");
    r = run({"metrics", "--dist", field});
    CHECK(r.code == 2);
    CHECK(r.err.find("probs[1]") != std::string::npos);

    r = run({"metrics", "--dist", (scratch() / "missing.json").string()});
    CHECK(r.code == 2);

    const auto big = dist_file("copy6.json", nary_copy(6, 2));
    r = run({"metrics", "--dist", big, "--max-vars", "5"});
    CHECK(r.code == 3);

    r = run({"metrics", "--dist", big, "--unit", "base:1"});
    CHECK(r.code == 2);

    const auto [csv, alpha] = series_files("noalpha", nary_copy(3, 2), 20);
    r = run({"metrics", "--series", csv});
    CHECK(r.code == 2);
    CHECK(r.err.find("alphabet") != std::string::npos);

    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"metrics", "--bogus"}).code == 2);
}

TEST_CASE("cli lattice") {
    const auto xor3 = dist_file("xor3.json", nary_xor(3, 2));
    auto r = run({"lattice", "--dist", xor3, "--all-paths", "--check"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["num_paths"] == 3);
    CHECK(j["nodes"].size() == 5);
    CHECK(j["edges"].size() == 6);
    for (const auto& p : j["paths"]) {
        CHECK(p["total_correlation"].get<double>() == doctest::Approx(1.0));
        CHECK(p["binding_entropy"].get<double>() == doctest::Approx(2.0));
        CHECK(p["o_information"].get<double>() == doctest::Approx(-1.0));
    }

    const auto any5 = dist_file("any5.json", random_simplex({2, 2, 2, 2, 2}, 8));
    r = run({"lattice", "--dist", any5, "--assembly", "--order", "4,2,1,3,5"});
    REQUIRE(r.code == 0);
    const auto a = nlohmann::json::parse(r.out);
    REQUIRE(a["paths"].size() == 1);
    CHECK(a["paths"][0]["edges"].size() == 4);
    CHECK(a["paths"][0]["edges"][0]["to"] == "1234|5");
    CHECK(a["paths"][0]["edges"][0]["term"] == "I(1234;5)");

    r = run({"lattice", "--dist", any5, "--format", "csv"});
    CHECK(r.out.rfind("path,step,from,to,term,v_h,v_r,v_s", 0) == 0);

    const auto eight = dist_file("copy8.json", nary_copy(8, 2));
    CHECK(run({"lattice", "--dist", eight, "--all-paths"}).code == 3);
    CHECK(run({"lattice", "--dist", eight, "--assembly"}).code == 0);
    const auto ten = dist_file("copy10.json", nary_copy(10, 2));
    CHECK(run({"lattice", "--dist", ten, "--assembly"}).code == 3);
    CHECK(run({"lattice", "--dist", any5, "--order", "1,2,3"}).code == 2);
    CHECK(run({"lattice", "--dist", any5, "--order", "1,2,3,4,9"}).code == 2);
}

TEST_CASE("cli generate") {
    auto r = run({"generate", "xor", "--n", "5", "--m", "2"});
    REQUIRE(r.code == 0);
    const auto t = distribution_from_json(r.out);
    CHECK(o_information(t, LogUnit::bit()) == doctest::Approx(-3.0));
    CHECK(nlohmann::json::parse(r.out)["provenance"]["generator"] == "xor");

    const auto g1 = run({"generate", "gibbs", "--n", "5", "--k", "3", "--beta", "0.1", "--seed", "7"});
    const auto g2 = run({"generate", "gibbs", "--n", "5", "--k", "3", "--beta", "0.1", "--seed", "7"});
    REQUIRE(g1.code == 0);
    CHECK(g1.out == g2.out);
    CHECK(nlohmann::json::parse(g1.out)["provenance"]["seed"] == 7);

    r = run({"generate", "mixture", "--n", "3", "--lambda", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(distribution_from_json(r.out).size() == 8);

    r = run({"generate", "hamiltonian", "--n", "4", "--k", "2", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto hpath = write("h.json", r.out);
    r = run({"generate", "gibbs", "--hamiltonian", hpath, "--beta", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(distribution_from_json(r.out) == gibbs(random_hamiltonian(4, 2, 3, 0), 0.5));

    CHECK(run({"generate", "random", "--shape", "2,3"}).code == 0);
    CHECK(run({"generate", "bsc", "--n", "4", "--eta", "0.1", "--side", "lower"}).code == 0);
    CHECK(run({"generate", "copy", "--n", "3", "--format", "csv"}).out.rfind("x1,x2,x3,p", 0) == 0);

    CHECK(run({"generate", "unicorn"}).code == 2);
    CHECK(run({"generate", "mixture", "--lambda", "2"}).code == 2);
    CHECK(run({"generate", "bsc", "--side", "middle"}).code == 2);
    CHECK(run({"generate", "copy", "--m", "1"}).code == 2);
    CHECK(run({"generate", "gibbs", "--n", "21", "--k", "1"}).code == 3);
}

TEST_CASE("cli experiment") {
    auto r = run({"experiment", "hamiltonian-sweep", "--n", "4", "--k", "2..3", "--trials", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("k,trial,omega_bits,seed\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 11);
    const auto side = nlohmann::json::parse(r.err);
    CHECK(side["provenance"]["seed"] == 1);
    CHECK(side["provenance"].contains("timestamp"));
    CHECK(side["summary"].contains("2"));
    const auto again = run({"experiment", "hamiltonian-sweep", "--n", "4", "--k", "2..3", "--trials", "5"});
    CHECK(again.out == r.out);

    r = run({"experiment", "tse-correlation", "--n", "3", "--samples", "50"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.err)["summary"]["pearson_tse_sum_cb"].get<double>() > 0.97);

    r = run({"experiment", "mixture-sweep", "--n", "3", "--grid", "21"});
    REQUIRE(r.code == 0);
    const auto s = nlohmann::json::parse(r.err)["summary"];
    CHECK(s["tse_at_0"].get<double>() == doctest::Approx(s["tse_at_1"].get<double>()));
    CHECK(s["omega_at_0"].get<double>() == doctest::Approx(1.0));
    CHECK(s["omega_at_1"].get<double>() == doctest::Approx(-1.0));

    r = run({"experiment", "psi-comparison", "--samples", "20", "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["rows"].size() == 20);

    const auto out = (scratch() / "sweep.csv").string();
    r = run({"experiment", "mixture-sweep", "--grid", "5", "--out", out});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(read_file(out).rfind("lambda,", 0) == 0);

    CHECK(run({"experiment", "warp-drive"}).code == 2);
    CHECK(run({"experiment", "tse-correlation", "--n", "13", "--samples", "2"}).code == 3);
    CHECK(run({"experiment", "hamiltonian-sweep", "--k", "two"}).code == 2);
}

TEST_CASE("cli bootstrap") {
    const auto [csv, alpha] = series_files("copy4", nary_copy(4, 2), 400);
    auto r = run({"bootstrap", "--series", csv, "--alphabet", alpha, "--replicates", "20"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "pair,mi,mi_se,cmi,cmi_se,omega_ij,omega_ij_se");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto cells = split_csv_line(line);
        REQUIRE(cells.size() == 7);
        CHECK(std::stod(cells[5]) > 0);
        CHECK(std::stod(cells[6]) >= 0);
        ++rows;
    }
    CHECK(rows == 7);

    r = run({"bootstrap", "--series", csv, "--alphabet", alpha, "--block-len", "1", "--replicates", "2"});
    CHECK(r.code == 0);

    r = run({"bootstrap", "--series", csv, "--alphabet", alpha, "--replicates", "10", "--metric", "o_information",
             "--metric", "mi:1,2"});
    REQUIRE(r.code == 0);
    std::istringstream mets(r.out);
    std::getline(mets, line);
    CHECK(line == "metric,value,se,block_len,replicates,seed");
    std::getline(mets, line);
    const auto first = split_csv_line(line);
    REQUIRE(first.size() == 6);
    CHECK(first[0] == "o_information");
    CHECK(std::fabs(std::stod(first[1]) - 2.0) < 0.01);

    const auto a1 = run({"bootstrap", "--series", csv, "--alphabet", alpha, "--replicates", "10", "--seed", "4"});
    const auto a2 = run({"bootstrap", "--series", csv, "--alphabet", alpha, "--replicates", "10", "--seed", "4"});
    CHECK(a1.out == a2.out);

    r = run({"bootstrap", "--series", csv});
    CHECK(r.code == 2);
    CHECK(r.err.find("alphabet") != std::string::npos);
    CHECK(run({"bootstrap", "--series", csv, "--alphabet", alpha, "--block-len", "1000"}).code == 2);
    CHECK(run({"bootstrap", "--series", csv, "--alphabet", alpha, "--metric", "nope"}).code == 2);
}
