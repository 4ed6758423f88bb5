// test_cli.cpp — end-to-end runs of the command-line tool

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int rc{-1};
    std::string out;
};

std::string cli() {
    const char* p = std::getenv("SQSIM_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SQSIM_CLI must point at the sqsim executable");
    return p;
}

Result run(const std::string& args) {
    Result r;
    const std::string cmd = cli() + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    const int st = pclose(f);
    r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sqsim_cli_" + tag + "_" + std::to_string(getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const TempDir& d, const std::string& name, json cfg) {
    if (!cfg.contains("output")) cfg["output"] = (d.path / (name + "_out")).string();
    const fs::path p = d.path / (name + ".json");
    std::ofstream(p) << cfg.dump();
    return p;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    for (std::string l; std::getline(ss, l);)
        if (!l.empty()) v.push_back(l);
    return v;
}

} // namespace

TEST_CASE("list-experiments prints every experiment") {
    auto r = run("list-experiments");
    CHECK(r.rc == 0);
    auto v = lines(r.out);
    CHECK(v.size() == 13);
    for (const char* e : {"spectrum", "rabi", "t1", "iswap-chevron", "cphase-cal", "readout-histogram", "paramp"})
        CHECK(std::find(v.begin(), v.end(), e) != v.end());
}

TEST_CASE("validate reports one diagnostic for a missing coupling") {
    TempDir d("val");
    auto p = write_config(d, "chev", {{"experiment", "iswap-chevron"}, {"seed", 1}, {"device", json::object()},
                                      {"parameters", json::object()}});
    auto r = run("validate " + p.string());
    CHECK(r.rc == 1);
    auto v = lines(r.out);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rfind("parameters.g_MHz", 0) == 0);
    CHECK_FALSE(fs::exists(d.path / "chev_out"));
}

TEST_CASE("validate names the device field for an out-of-range asymmetry") {
    TempDir d("asym");
    json dev = {{"qubit", {{"kind", "split_transmon"}, {"E_C_GHz", 0.25}, {"E_J_GHz", 19.5}, {"d", 1.5}}}};
    auto p = write_config(d, "spec", {{"experiment", "spectrum"}, {"seed", 1}, {"device", dev}, {"parameters", json::object()}});
    auto r = run("validate " + p.string());
    CHECK(r.rc == 1);
    auto v = lines(r.out);
    REQUIRE(v.size() >= 1);
    CHECK(v[0].rfind("device.qubit.d", 0) == 0);
}

TEST_CASE("validate accepts a complete config") {
    TempDir d("ok");
    auto p = write_config(d, "t1", {{"experiment", "t1"}, {"seed", 1}, {"device", json::object()},
                                    {"parameters", {{"T1_us", 85}}}});
    auto r = run("validate " + p.string());
    CHECK(r.rc == 0);
    CHECK(lines(r.out) == std::vector<std::string>{"ok"});
}

TEST_CASE("t1 run recovers the configured T1 within its confidence interval") {
    TempDir d("t1");
    auto p = write_config(d, "t1", {{"experiment", "t1"}, {"seed", 3}, {"device", json::object()},
                                    {"parameters", {{"T1_us", 85}}}});
    auto r = run("run " + p.string());
    REQUIRE(r.rc == 0);
    auto m = json::parse(r.out);
    CHECK(m["seed"] == 3);
    CHECK(m["config_hash"].get<std::string>().size() == 64);
    auto rep = json::parse(slurp(d.path / "t1_out" / "fit_report.json"));
    const double lo = rep["T_ci95_us"][0], hi = rep["T_ci95_us"][1];
    CHECK(lo <= 85.0);
    CHECK(hi >= 85.0);
    CHECK(rep["model"] == "exponential");
    CHECK(fs::exists(d.path / "t1_out" / "decay.csv"));
    CHECK(fs::exists(d.path / "t1_out" / "run_manifest.json"));
}

TEST_CASE("readout histogram at SNR 2 reports the formula error") {
    TempDir d("ro");
    auto p = write_config(d, "ro", {{"experiment", "readout-histogram"}, {"seed", 5}, {"device", json::object()},
                                    {"parameters", {{"snr_target", 2}, {"shots", 2000}}}});
    auto r = run("run " + p.string());
    REQUIRE(r.rc == 0);
    auto rep = json::parse(slurp(d.path / "ro_out" / "readout_report.json"));
    CHECK(rep["assignment_error_formula"].get<double>() == doctest::Approx(0.0786).epsilon(0.03));
    CHECK(rep["snr"].get<double>() == doctest::Approx(2.0).epsilon(0.05));
    auto csv = lines(slurp(d.path / "ro_out" / "shots.csv"));
    CHECK(csv.size() == 4001);
}

TEST_CASE("split-transmon spectrum peaks at zero flux") {
    TempDir d("spec");
    json dev = {{"qubit", {{"kind", "split_transmon"}, {"E_C_GHz", 0.25}, {"E_J_GHz", 19.5}, {"d", 0.2}}}};
    auto p = write_config(d, "spec", {{"experiment", "spectrum"}, {"seed", 1}, {"device", dev}, {"parameters", {{"points", 21}}}});
    REQUIRE(run("run " + p.string()).rc == 0);
    auto v = lines(slurp(d.path / "spec_out" / "spectrum.csv"));
    REQUIRE(v.size() == 22);
    double best = -1.0, best_phi = 99.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double phi, w;
        REQUIRE(std::sscanf(v[i].c_str(), "%lf,%lf", &phi, &w) == 2);
        if (w > best) {
            best = w;
            best_phi = phi;
        }
    }
    CHECK(best_phi == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("repeated runs are byte-identical and the hash ignores key order") {
    TempDir d("det");
    json params = {{"snr_target", 1.5}, {"shots", 500}};
    const std::string out = (d.path / "a_out").string();
    auto a = write_config(d, "a", {{"experiment", "readout-histogram"}, {"seed", 11}, {"device", json::object()},
                                   {"parameters", params}, {"output", out}});
    auto ra = run("run " + a.string());
    REQUIRE(ra.rc == 0);
    auto ma = json::parse(ra.out);
    std::vector<std::string> first;
    for (const auto& f : ma["files"]) first.push_back(slurp(d.path / "a_out" / f.get<std::string>()));

    auto b = write_config(d, "b", {{"output", out}, {"parameters", params}, {"device", json::object()}, {"seed", 11},
                                   {"experiment", "readout-histogram"}});
    auto rb = run("run " + b.string());
    REQUIRE(rb.rc == 0);
    auto mb = json::parse(rb.out);
    CHECK(mb["config_hash"] == ma["config_hash"]);
    REQUIRE(mb["files"] == ma["files"]);
    for (std::size_t i = 0; i < first.size(); ++i) {
        const std::string name = ma["files"][i];
        if (name == "run_manifest.json") continue;
        CHECK_MESSAGE(slurp(d.path / "a_out" / name) == first[i], name);
    }

    auto c = run("run " + a.string() + " --seed 12 --output " + (d.path / "c_out").string() + " --threads 4");
    REQUIRE(c.rc == 0);
    CHECK(json::parse(c.out)["config_hash"] != ma["config_hash"]);
    CHECK(slurp(d.path / "c_out" / "shots.csv") != slurp(d.path / "a_out" / "shots.csv"));
}

TEST_CASE("a numeric failure exits with 2 and leaves no partial outputs") {
    TempDir d("num");
    json dev = {{"readout", {{"resonator", {{"chi_MHz", 0}}}, {"chain", {{"stages", {{{"gain", 1}, {"T_N_K", 0}}}}}}}}};
    auto p = write_config(d, "num", {{"experiment", "readout-histogram"}, {"seed", 1}, {"device", dev}, {"parameters", {{"shots", 200}}}});
    auto r = run("run " + p.string());
    CHECK(r.rc == 2);
    const fs::path out = d.path / "num_out";
    CHECK((!fs::exists(out) || fs::is_empty(out)));
}

TEST_CASE("config errors exit with 1") {
    TempDir d("cfg");
    const fs::path bad = d.path / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run("run " + bad.string()).rc == 1);
    auto p = write_config(d, "unk", {{"experiment", "teleport"}, {"seed", 1}, {"device", json::object()}, {"parameters", json::object()}});
    CHECK(run("run " + p.string()).rc == 1);
    CHECK_FALSE(fs::exists(d.path / "unk_out"));
    CHECK(run("run " + (d.path / "missing.json").string()).rc == 1);
    CHECK(run("").rc == 1);
}
