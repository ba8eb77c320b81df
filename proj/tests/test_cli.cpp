#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oamspec/fieldmap.hpp"
#include "oamspec/map_export.hpp"

namespace fs = std::filesystem;

#ifndef OAMSPEC_CLI_PATH
#error "OAMSPEC_CLI_PATH must point at the oamspec executable"
#endif

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Sandbox {
public:
    Sandbox() : dir_(fs::temp_directory_path() / ("oamspec-cli-" + std::to_string(std::random_device{}()))) {
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }

    const fs::path& dir() const { return dir_; }

    Run run(const std::string& args, const std::string& env = "") const {
        const std::string cmd = "cd '" + dir_.string() + "' && env -u OAMSPEC_OUT " + env + " '" OAMSPEC_CLI_PATH "' " +
                                args + " > stdout.txt 2> stderr.txt";
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir_ / "stdout.txt"), slurp(dir_ / "stderr.txt")};
    }

    void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

private:
    fs::path dir_;
};

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("map with overrides writes csv, image and sidecar") {
    Sandbox box;
    const Run r = box.run("map --builtin fig2a-l1 --set resolution=64 --out maps");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("fig2a-l1: 64x64") != std::string::npos);
    CHECK(r.out.find("max=") != std::string::npos);
    CHECK(r.out.find("argmax=") != std::string::npos);
    const auto map = oamspec::parse_map_csv(slurp(box.dir() / "maps" / "fig2a-l1.csv"));
    CHECK(map.grid.resolution == 64);
    CHECK(map.values.size() == 64u * 64u);
    CHECK(slurp(box.dir() / "maps" / "fig2a-l1.pgm").rfind("P5\n64 64\n255\n", 0) == 0);
    CHECK(slurp(box.dir() / "maps" / "fig2a-l1.range.txt").find("min=") == 0);
}

TEST_CASE("map summary reports the lobe count") {
    Sandbox box;
    const Run r = box.run("map --builtin fig2b-l3 --set resolution=96");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("peaks=3") != std::string::npos);
    CHECK(fs::exists(box.dir() / "fig2b-l3.csv"));
}

TEST_CASE("map of an l = 0 constant-field config is azimuthally uniform") {
    Sandbox box;
    box.write("custom.cfg", "label = flat\nwinding = 0\np = 1\nb0 = [0, 0]\nb1 = [0.6, 0]\nb2 = [0, 0.8]\ndelta_k = 0.4\nresolution = 48\n");
    REQUIRE(box.run("map --config custom.cfg").code == 0);
    const auto map = oamspec::parse_map_csv(slurp(box.dir() / "flat.csv"));
    // transposing the grid maps (x, y) to (-y, -x), same radius
    for (int row = 0; row < 48; ++row)
        for (int col = 0; col < 48; ++col)
            REQUIRE(std::abs(map.at(row, col) - map.at(col, row)) <= 1e-12 * std::abs(map.at(row, col)));

    REQUIRE(box.run("profile --config custom.cfg --r 0.8 --n-phi 90").code == 0);
    const auto prof = read_csv(box.dir() / "flat.profile.csv");
    REQUIRE(prof.size() == 91u);
    for (std::size_t i = 2; i < prof.size(); ++i) CHECK(std::stod(prof[i][1]) == std::stod(prof[1][1]));
}

TEST_CASE("identical invocations give byte-identical CSV") {
    Sandbox box;
    REQUIRE(box.run("map --builtin fig6b-l2 --set resolution=64 --out one").code == 0);
    REQUIRE(box.run("map --builtin fig6b-l2 --set resolution=64 --out two").code == 0);
    CHECK(slurp(box.dir() / "one" / "fig6b-l2.csv") == slurp(box.dir() / "two" / "fig6b-l2.csv"));
}

TEST_CASE("spectrum of free decay is a Lorentzian") {
    Sandbox box;
    const Run r = box.run("spectrum --set o01=0 --set omega02=0 --set b0=[0,0] --set b1=[1,0] --set delta1=0.5 "
                          "--set label=free --r 0.5");
    REQUIRE(r.code == 0);
    const auto rows = read_csv(box.dir() / "free.spectrum.csv");
    REQUIRE(rows.size() == 2002u);
    CHECK(rows[0] == std::vector<std::string>{"delta_k", "S"});
    double prev = -1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double dk = std::stod(rows[i][0]);
        const double s = std::stod(rows[i][1]);
        REQUIRE(dk > prev);
        prev = dk;
        REQUIRE(s == doctest::Approx(1.0 / ((dk - 0.5) * (dk - 0.5) + 0.25)).epsilon(1e-12));
    }
    CHECK(std::stod(rows[1][0]) == -10.0);
    CHECK(std::stod(rows[2001][0]) == 10.0);
}

TEST_CASE("spectrum at a map cell equals the map value") {
    Sandbox box;
    REQUIRE(box.run("map --builtin fig2b-l1 --set resolution=32").code == 0);
    const auto map = oamspec::parse_map_csv(slurp(box.dir() / "fig2b-l1.csv"));
    const int row = 9, col = 21;
    const double x = map.grid.x_at(col), y = map.grid.y_at(row);
    std::ostringstream args;
    args.precision(17);
    args << "spectrum --builtin fig2b-l1 --r " << std::hypot(x, y) << " --phi " << std::atan2(y, x)
         << " --dk-min -1 --dk-max 1 --points 3";
    REQUIRE(box.run(args.str()).code == 0);
    const auto rows = read_csv(box.dir() / "fig2b-l1.spectrum.csv");
    REQUIRE(rows.size() == 4u);
    CHECK(std::stod(rows[2][0]) == 0.0);
    CHECK(std::stod(rows[2][1]) == doctest::Approx(map.at(row, col)).epsilon(1e-13));
}

TEST_CASE("reproduce writes every panel") {
    Sandbox box;
    const Run r = box.run("reproduce fig6a --set resolution=32 --out fig6a");
    REQUIRE(r.code == 0);
    for (int l = 1; l <= 4; ++l) CHECK(fs::exists(box.dir() / "fig6a" / ("fig6a-l" + std::to_string(l) + ".csv")));
    REQUIRE(box.run("reproduce fig7b --set resolution=32 --out fig7b").code == 0);
    for (const char* roman : {"i", "ii", "iii", "iv"})
        CHECK(fs::exists(box.dir() / "fig7b" / (std::string("fig7b-") + roman + ".pgm")));

    const Run bad = box.run("reproduce fig9");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("fig9") != std::string::npos);
    CHECK(bad.err.find("fig2a, fig2b") != std::string::npos);
    CHECK(bad.err.find("fig7b") != std::string::npos);
}

TEST_CASE("sweep writes one map per value and an index") {
    Sandbox box;
    REQUIRE(box.run("sweep --builtin fig2b-l1 --set resolution=64 --param winding --values 1,2,3,4").code == 0);
    const auto index = read_csv(box.dir() / "fig2b-l1.sweep-winding.csv");
    REQUIRE(index.size() == 5u);
    CHECK(index[0] == std::vector<std::string>{"winding", "max_S", "peaks", "spots"});
    for (int l = 1; l <= 4; ++l) {
        CHECK(index[l][0] == std::to_string(l));
        CHECK(index[l][2] == std::to_string(l));
        CHECK(fs::exists(box.dir() / ("fig2b-l1.winding-" + std::to_string(l) + ".csv")));
    }

    REQUIRE(box.run("sweep --builtin fig3a-l1 --set resolution=32 --param p --values 0,0.5,1").code == 0);
    CHECK(read_csv(box.dir() / "fig3a-l1.sweep-p.csv").size() == 4u);

    REQUIRE(box.run("sweep --builtin fig4b-l2 --set resolution=32 --param delta_k --values -1,0,1").code == 0);
    CHECK(fs::exists(box.dir() / "fig4b-l2.delta_k--1.csv"));
    CHECK(read_csv(box.dir() / "fig4b-l2.sweep-delta_k.csv").size() == 4u);

    CHECK(box.run("sweep --builtin fig3a-l1 --param label --values a").code == 1);
    CHECK(box.run("sweep --builtin fig3a-l1 --param p --values 3").code == 3);
}

TEST_CASE("verify runs selected suites") {
    Sandbox box;
    const Run r = box.run("verify --suite scaling --trials 7 --seed 42");
    CHECK(r.code == 0);
    CHECK(r.out.find("seed 42") != std::string::npos);
    CHECK(r.out.find("scaling") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("checks=7 ") != std::string::npos);

    const Run two = box.run("verify --suite periodicity --suite mirror");
    CHECK(two.code == 0);
    CHECK(two.out.find("periodicity") != std::string::npos);
    CHECK(two.out.find("mirror") != std::string::npos);

    CHECK(box.run("verify --suite nonsense").code == 1);
}

TEST_CASE("verify exits 4 when a suite fails") {
    Sandbox box;
    const Run r = box.run("verify --suite rotation");
    CHECK(r.code == 4);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("exit codes") {
    Sandbox box;
    CHECK(box.run("").code == 1);
    CHECK(box.run("map --builtin fig2a-l1 --config x.cfg").code == 1);
    CHECK(box.run("map --builtin nosuch").code == 1);
    CHECK(box.run("map --builtin fig2a-l1 --set resolution").code == 1);

    box.write("bad.cfg", "p = 1\nflavour = strange\n");
    const Run parse = box.run("map --config bad.cfg");
    CHECK(parse.code == 2);
    CHECK(parse.err.find("flavour") != std::string::npos);

    CHECK(box.run("map --builtin fig2a-l1 --set p=2").code == 3);
    CHECK(box.run("spectrum --builtin fig2a-l1 --points 1").code == 3);
    CHECK(box.run("spectrum --builtin fig2a-l1 --dk-min 2 --dk-max 1").code == 3);

    box.write("blocker", "x");
    CHECK(box.run("map --builtin fig2a-l1 --set resolution=16 --out blocker/sub").code == 5);
    CHECK(box.run("map --config does-not-exist.cfg").code == 5);
}

TEST_CASE("output directory from the environment") {
    Sandbox box;
    REQUIRE(box.run("map --builtin fig3a-l1 --set resolution=16", "OAMSPEC_OUT=from-env").code == 0);
    CHECK(fs::exists(box.dir() / "from-env" / "fig3a-l1.csv"));
    REQUIRE(box.run("map --builtin fig3a-l1 --set resolution=16 --out flag", "OAMSPEC_OUT=from-env").code == 0);
    CHECK(fs::exists(box.dir() / "flag" / "fig3a-l1.csv"));
}
