// End-to-end checks of the command-line binary: exit codes, artifact
// contents, and byte-for-byte determinism.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "test_util.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("qwalk_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QWALK_CLI_BIN) + " " + args +
                            " >" + (work_dir() / "stdout.txt").string() +
                            " 2>" + (work_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << j.dump(2);
    return p;
}

json fig_config(double tm, double to, double tp, double dm, double d_o, double dp) {
    return json{{"grover",
                 json{{"theta_m", tm}, {"delta_m", dm}, {"theta_o", to},
                      {"delta_o", d_o}, {"theta_p", tp}, {"delta_p", dp}}},
                {"t", 100}};
}

}  // namespace

TEST_CASE("simulate emits a normalized distribution") {
    const double th = -9.0 / 12.0 * kPi, tho = 8.0 / 12.0 * kPi;
    const fs::path cfg = write_config("fig2.json", fig_config(th, tho, th, 0, 0, 0));
    const fs::path out = work_dir() / "sim";
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out.string()) == 0);

    const std::string csv = slurp(out / "distribution.csv");
    CHECK(csv.rfind("# config:", 0) == 0);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // config echo
    std::getline(lines, line);
    CHECK(line == "x,prob");
    double total = 0.0, mu0 = -1.0;
    while (std::getline(lines, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const int x = std::stoi(line.substr(0, comma));
        const double p = std::stod(line.substr(comma + 1));
        total += p;
        if (x == 0) mu0 = p;
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
    CHECK(mu0 > 0.01);
}

TEST_CASE("simulate with t=0 is a delta distribution") {
    const double th = -8.0 / 12.0 * kPi, tho = 8.0 / 12.0 * kPi;
    const fs::path cfg = write_config("fig1.json", fig_config(th, tho, th, 0, 0, 0));
    const fs::path out = work_dir() / "sim0";
    REQUIRE(run_cli("simulate --t 0 --format json --config " + cfg.string() +
                    " --out " + out.string()) == 0);
    const json doc = json::parse(slurp(out / "distribution.json"));
    CHECK(doc.at("t").get<long>() == 0);
    CHECK(doc.at("distribution").size() == 1);
    CHECK(doc.at("mu0").get<double>() == Catch::Approx(1.0).margin(1e-12));
    CHECK(doc.contains("config"));
}

TEST_CASE("angle shorthand from figure captions round-trips through configs") {
    json cfg = json{{"grover",
                     json{{"theta_m", "-9/12pi"}, {"delta_m", 0}, {"theta_o", "8/12pi"},
                          {"delta_o", 0}, {"theta_p", "-9/12pi"}, {"delta_p", 0}}},
                    {"t", 5}};
    const fs::path p = write_config("short.json", cfg);
    const fs::path out = work_dir() / "short";
    CHECK(run_cli("simulate --config " + p.string() + " --out " + out.string()) == 0);
}

TEST_CASE("malformed configs exit with code 2") {
    json bad = fig_config(1, 1, 1, 0, 0, 0);
    bad["grover"]["theta_m"] = "8/12tau";
    const fs::path p1 = write_config("bad_angle.json", bad);
    CHECK(run_cli("simulate --config " + p1.string()) == 2);
    const std::string err = slurp(work_dir() / "stderr.txt");
    CHECK(err.find("theta_m") != std::string::npos);

    json both = fig_config(1, 1, 1, 0, 0, 0);
    both["n"] = 3;
    const fs::path p2 = write_config("bad_both.json", both);
    CHECK(run_cli("simulate --config " + p2.string()) == 2);

    const fs::path p3 = write_config("bad_none.json", json{{"t", 3}});
    CHECK(run_cli("simulate --config " + p3.string()) == 2);

    CHECK(run_cli("simulate --config " + (work_dir() / "missing.json").string()) == 2);

    const fs::path p4 = work_dir() / "bad_syntax.json";
    std::ofstream(p4) << "{ not json";
    CHECK(run_cli("simulate --config " + p4.string()) == 2);
}

TEST_CASE("model validation failures exit with code 3") {
    const CoinProfile prof = qwtest::model_one_defect_rich().profile();
    json doc = profile_to_json(prof);
    doc["left"]["core"][0][0] = json::array({0.5, 0.0});  // break unitarity
    doc["t"] = 5;
    const fs::path p = write_config("nonunitary.json", doc);
    CHECK(run_cli("simulate --config " + p.string()) == 3);
    CHECK(run_cli("verify --config " + p.string()) == 3);
}

TEST_CASE("spectrum reports with agreement flags on the fixtures") {
    const double t8 = 8.0 / 12.0 * kPi, t9 = -9.0 / 12.0 * kPi;
    const fs::path out = work_dir() / "spec";

    // one eigenvalue, all sources agree
    const fs::path f1 = write_config("s_fig1.json", fig_config(-t8, t8, -t8, 0, 0, 0));
    REQUIRE(run_cli("spectrum --config " + f1.string() + " --out " + out.string()) == 0);
    json doc = json::parse(slurp(out / "spectrum.json"));
    REQUIRE(doc.at("entries").size() == 1);
    CHECK(doc["entries"][0]["lambda_radians"].get<double>() ==
          Catch::Approx(0.0).margin(1e-9));
    CHECK(doc["entries"][0]["agreement"]["closed_form"].get<bool>());
    CHECK(doc["entries"][0]["agreement"]["scan"].get<bool>());
    CHECK(doc["entries"][0]["agreement"]["oracle"].get<bool>());

    // three eigenvalues, conjugate pair included
    const fs::path f2 = write_config("s_fig2.json", fig_config(t9, t8, t9, 0, 0, 0));
    REQUIRE(run_cli("spectrum --config " + f2.string() + " --out " + out.string()) == 0);
    doc = json::parse(slurp(out / "spectrum.json"));
    REQUIRE(doc.at("entries").size() == 3);
    for (const json& e : doc["entries"]) {
        CHECK(e["agreement"]["closed_form"].get<bool>());
        CHECK(e["agreement"]["scan"].get<bool>());
        CHECK(e["agreement"]["oracle"].get<bool>());
        CHECK_FALSE(e["flagged"].get<bool>());
    }
    CHECK(doc["entries"][1]["lambda_radians"].get<double>() ==
          Catch::Approx(2.2737141413324151).margin(1e-8));
}

TEST_CASE("spectrum on the two-phase fixtures (band-edge cases)") {
    const fs::path out = work_dir() / "spec_tp";
    const double t11 = 11.0 / 12.0 * kPi, t1 = 1.0 / 12.0 * kPi;
    const double d3 = 3.0 / 12.0 * kPi, d1 = 1.0 / 12.0 * kPi;

    // wide angle: midpoint candidate is a genuine third eigenvalue
    const fs::path f3 = write_config("s_fig3.json", fig_config(t11, t11, t11, d3, d1, d1));
    REQUIRE(run_cli("spectrum --config " + f3.string() + " --out " + out.string()) == 0);
    json doc = json::parse(slurp(out / "spectrum.json"));
    REQUIRE(doc.at("entries").size() == 3);
    CHECK(doc["entries"][1]["lambda_radians"].get<double>() ==
          Catch::Approx(kPi / 6.0).margin(1e-8));
    for (const json& e : doc["entries"]) {
        CHECK(e["agreement"]["scan"].get<bool>());
        CHECK(e["agreement"]["oracle"].get<bool>());
    }

    // narrow angle: the candidate sits on the band edge and is excluded
    const fs::path f4 = write_config("s_fig4.json", fig_config(t1, t1, t1, d3, d1, d1));
    REQUIRE(run_cli("spectrum --config " + f4.string() + " --out " + out.string()) == 0);
    doc = json::parse(slurp(out / "spectrum.json"));
    REQUIRE(doc.at("entries").size() == 2);
    CHECK(doc["entries"][0]["lambda_radians"].get<double>() ==
          Catch::Approx(d1).margin(1e-9));
    CHECK(doc["entries"][1]["lambda_radians"].get<double>() ==
          Catch::Approx(d3).margin(1e-9));
}

TEST_CASE("eigvec reconstructs, reports decay rates, and rejects non-roots") {
    const double t8 = 8.0 / 12.0 * kPi, t9 = -9.0 / 12.0 * kPi;
    const fs::path cfg = write_config("e_fig2.json", fig_config(t9, t8, t9, 0, 0, 0));
    const fs::path out = work_dir() / "eig";

    REQUIRE(run_cli("eigvec --lambda 2.2737141413324151 --config " + cfg.string() +
                    " --out " + out.string()) == 0);
    const json rep = json::parse(slurp(out / "eigen_test.json"));
    CHECK(rep.at("pass").get<bool>());
    CHECK(rep.at("residual").get<double>() <= 1e-8);
    CHECK(std::abs(rep.at("zeta_lt_inf")[0].get<double>() + 0.41421356237309448) <= 1e-9);
    const std::string stdout_text = slurp(work_dir() / "stdout.txt");
    CHECK(stdout_text.find("residual") != std::string::npos);
    CHECK(stdout_text.find("max rel err") != std::string::npos);

    const std::string csv = slurp(out / "eigvec.csv");
    CHECK(csv.find("x,comp,re,im\n") != std::string::npos);

    // a tail phase returns the compact two-site vector
    REQUIRE(run_cli("eigvec --lambda 0 --config " + cfg.string() + " --out " +
                    out.string()) == 0);
    const std::string compact = slurp(out / "eigvec.csv");
    CHECK(compact.find("\n2,1,") != std::string::npos);  // support starts at site 2

    // off-spectrum phases exit with code 4
    CHECK(run_cli("eigvec --lambda 1.0 --config " + cfg.string() + " --out " +
                  out.string()) == 4);
    CHECK(run_cli("eigvec --lambda 0.5pi --config " + cfg.string() + " --out " +
                  out.string()) == 4);
}

TEST_CASE("verify passes on all four fixture configurations") {
    const double t8 = 8.0 / 12.0 * kPi, t9 = -9.0 / 12.0 * kPi;
    const double t11 = 11.0 / 12.0 * kPi, t1 = 1.0 / 12.0 * kPi;
    const double d3 = 3.0 / 12.0 * kPi, d1 = 1.0 / 12.0 * kPi;
    const fs::path out = work_dir() / "verify";

    const fs::path f1 = write_config("v_fig1.json", fig_config(-t8, t8, -t8, 0, 0, 0));
    const fs::path f2 = write_config("v_fig2.json", fig_config(t9, t8, t9, 0, 0, 0));
    const fs::path f3 = write_config("v_fig3.json", fig_config(t11, t11, t11, d3, d1, d1));
    const fs::path f4 = write_config("v_fig4.json", fig_config(t1, t1, t1, d3, d1, d1));
    for (const fs::path& cfg : {f1, f2, f3, f4}) {
        CHECK(run_cli("verify --config " + cfg.string() + " --out " + out.string()) == 0);
        const json doc = json::parse(slurp(out / "verify.json"));
        CHECK(doc.at("pass").get<bool>());
        for (const json& chk : doc.at("checks")) CHECK(chk.at("pass").get<bool>());
    }
}

TEST_CASE("outputs are byte-for-byte deterministic") {
    const double t8 = 8.0 / 12.0 * kPi, t9 = -9.0 / 12.0 * kPi;
    const fs::path cfg = write_config("d_fig2.json", fig_config(t9, t8, t9, 0, 0, 0));
    const fs::path out_a = work_dir() / "det_a";
    const fs::path out_b = work_dir() / "det_b";
    REQUIRE(run_cli("spectrum --config " + cfg.string() + " --out " + out_a.string()) == 0);
    REQUIRE(run_cli("spectrum --config " + cfg.string() + " --out " + out_b.string()) == 0);
    CHECK(slurp(out_a / "spectrum.json") == slurp(out_b / "spectrum.json"));

    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out_a.string()) == 0);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out_b.string()) == 0);
    CHECK(slurp(out_a / "distribution.csv") == slurp(out_b / "distribution.csv"));
}
