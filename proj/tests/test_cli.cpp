#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const char* kChannelConfig = R"([mesh]
nx = 4
ny_free = 4
ny_por = 4

[porous]
phi = 0.4
k = 0.1

[interface_law]
type = bjs
alpha = 1.0

[problem]
pressure_gradient = -1.0

[run]
seed = 11
)";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fpflow_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FPFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("solve writes artifacts and exits cleanly") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.cfg";
    write_file(cfg, kChannelConfig);
    const fs::path out = tmp.path / "out";

    const int code = run_cli("solve --config " + cfg.string() + " --out " + out.string());
    CHECK(code == 0);
    CHECK(fs::exists(out / "solution.vtk"));
    CHECK(fs::exists(out / "interface_residuals.csv"));
    CHECK(fs::exists(out / "power_summary.csv"));

    const std::string csv = slurp(out / "interface_residuals.csv");
    CHECK(csv.find("# config_hash: 0x") != std::string::npos);
    CHECK(csv.find("# seed: 11") != std::string::npos);
    CHECK(csv.find("x_mid,r1,r2,r3,r4") != std::string::npos);
    CHECK(csv.find("\r") == std::string::npos);  // LF endings only

    const std::string vtk = slurp(out / "solution.vtk");
    CHECK(vtk.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
}

TEST_CASE("reruns with the same config and seed are byte-identical") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.cfg";
    write_file(cfg, kChannelConfig);
    const fs::path out1 = tmp.path / "a", out2 = tmp.path / "b";
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "interface_residuals.csv") == slurp(out2 / "interface_residuals.csv"));
    CHECK(slurp(out1 / "power_summary.csv") == slurp(out2 / "power_summary.csv"));
}

TEST_CASE("indefinite law is a config error naming the constraint") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "bad.cfg";
    write_file(cfg, "[interface_law]\ntype = coefficients\na11 = 1\na12 = 2\na22 = 1\n");
    const std::string cmd = std::string(FPFLOW_CLI_PATH) + " solve --config " + cfg.string() +
                            " --out " + (tmp.path / "o").string() + " 2> " +
                            (tmp.path / "err.txt").string() + " > /dev/null";
    const int code = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(code == 2);
    const std::string err = slurp(tmp.path / "err.txt");
    CHECK(err.find("semi-definite") != std::string::npos);
}

TEST_CASE("config diagnostics carry line numbers to the user") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "bad.cfg";
    write_file(cfg, "[mesh]\nnx = 4\nwhat = 1\n");
    const std::string cmd = std::string(FPFLOW_CLI_PATH) + " solve --config " + cfg.string() +
                            " 2> " + (tmp.path / "err.txt").string() + " > /dev/null";
    const int code = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(code == 2);
    const std::string err = slurp(tmp.path / "err.txt");
    CHECK(err.find("line 3") != std::string::npos);
}

TEST_CASE("missing config file and bad usage exit with code 2") {
    TempDir tmp;
    CHECK(run_cli("solve --config " + (tmp.path / "nope.cfg").string()) == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("verify --config x") == 2);  // --suite required
}

TEST_CASE("verify suite=jump runs end to end") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.cfg";
    write_file(cfg, kChannelConfig);
    const fs::path out = tmp.path / "out";
    const int code =
        run_cli("verify --config " + cfg.string() + " --suite jump --out " + out.string());
    CHECK(code == 0);
    CHECK(fs::exists(out / "jump_report.csv"));
    const std::string report = slurp(out / "jump_report.csv");
    CHECK(report.find("check,pass,value,threshold,note") != std::string::npos);
    CHECK(report.find("normal_jump_weighted,1") != std::string::npos);
}

TEST_CASE("unknown suite exits with a config error") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.cfg";
    write_file(cfg, kChannelConfig);
    CHECK(run_cli("verify --config " + cfg.string() + " --suite bogus") == 2);
}
