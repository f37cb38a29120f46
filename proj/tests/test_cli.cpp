#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI inside cwd with the given arguments; stdout is captured, stderr
// goes to err_file when given and is discarded otherwise.
Run cli(const std::string& args, const fs::path& cwd, const std::string& err_file = "/dev/null")
{
    const std::string cmd =
        "cd '" + cwd.string() + "' && '" + std::string(POLYCLUST_CLI_PATH) + "' " + args + " 2>" + err_file;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path workdir(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("polyclust_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_unity(const fs::path& path, std::size_t n)
{
    json c = json::array();
    for (std::size_t k = 0; k <= n; ++k)
        c.push_back({k == 0 ? -1.0 : k == n ? 1.0 : 0.0, 0.0});
    std::ofstream(path) << c.dump();
}

std::vector<std::string> csv_header(const std::string& text)
{
    std::vector<std::string> cols;
    std::istringstream line(text.substr(0, text.find('\n')));
    for (std::string c; std::getline(line, c, ',');)
        cols.push_back(c);
    return cols;
}

} // namespace

TEST_CASE("certify Z^64 - 1", "[cli]")
{
    const auto dir = workdir("certify");
    write_unity(dir / "p.json", 64);
    const auto r = cli("certify --input p.json", dir);
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("all_satisfied") == true);
    CHECK(j.at("degree") == 64);
    CHECK(j.at("sectors").size() == 78);
    CHECK(j.at("annulus").size() == 50);
    for (const auto& a : j.at("annulus")) {
        CHECK(a.at("satisfied") == true);
        CHECK(a.at("annulus") == 64);
    }
    CHECK(j.at("jensen").at("status") == "root_on_circle");

    const auto csv = cli("certify --input p.json --csv --rho-grid 0.1,0.2", dir);
    CHECK(csv.code == 0);
    CHECK(csv_header(csv.out) == std::vector<std::string>{"kind", "rho", "theta", "phi", "lhs", "rhs", "satisfied"});
    CHECK(csv.out.find("false") == std::string::npos);

    // a tiny constant makes the sector certificate fail
    write_unity(dir / "q.json", 5);
    const auto tight = cli("certify --input q.json --et-constant 1e-6", dir);
    CHECK(tight.code == 1);
    CHECK(json::parse(tight.out).at("all_satisfied") == false);

    // solver refuses to converge in one sweep
    std::ofstream(dir / "r.json") << "[1, 3, -2, 5, 7, -1, 2, 9, 4, 1, 1, -6, 2]";
    CHECK(cli("certify --input r.json --max-iterations 1", dir).code == 1);
    fs::remove_all(dir);
}

TEST_CASE("roots and count", "[cli]")
{
    const auto dir = workdir("roots");
    std::ofstream(dir / "p.json") << "[[2,0],[-2,0],[1,0]]"; // zeros 1 +- i
    const auto r = cli("roots --input p.json", dir);
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("converged") == true);
    CHECK(j.at("roots").size() == 2);
    CHECK(j.at("residuals").size() == 2);

    const auto c = cli("count --input p.json --rho-grid 0.5 --sectors 4", dir);
    CHECK(c.code == 0);
    CHECK(c.out.find("rho,inner,annulus,outer\n0.5,0,2,0\n") == 0);
    CHECK(c.out.find("theta,phi,count\n0,1.570796327,1\n") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sample is deterministic", "[cli]")
{
    const auto dir = workdir("sample");
    const auto a = cli("sample --model cauchy_scaled --n 30 --seed 9 --trial 2", dir);
    const auto b = cli("sample --model cauchy_scaled --n 30 --seed 9 --trial 2", dir);
    const auto c = cli("sample --model cauchy_scaled --n 30 --seed 9 --trial 3", dir);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    CHECK(json::parse(a.out).size() == 31);
    const auto m = cli(R"(sample --model '{"variant":"rademacher","p":0.9}' --n 10)", dir);
    CHECK(m.code == 0);
    CHECK(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST_CASE("experiment", "[cli]")
{
    const auto dir = workdir("experiment");
    const auto r = cli("experiment --model signed_uniform_int --degrees 200 --trials 50 --seed 1 --workers 2 "
                       "--out-dir out",
                       dir);
    CHECK(r.code == 0);
    const auto header = csv_header(r.out);
    REQUIRE(header.size() > 16);
    CHECK(header[0] == "degree");
    CHECK(header[15] == "pass_rate");
    std::istringstream rows(r.out);
    std::string line;
    std::getline(rows, line);
    std::getline(rows, line);
    CHECK(line.substr(0, 7) == "200,50,");

    // only the output directory is created
    std::vector<std::string> top;
    for (const auto& e : fs::directory_iterator(dir))
        top.push_back(e.path().filename().string());
    CHECK(top == std::vector<std::string>{"out"});
    for (const char* f : {"summary.csv", "trials.jsonl", "hist_modulus.csv", "hist_arg.csv", "roots_sample.svg"})
        CHECK(fs::exists(dir / "out" / f));

    std::size_t lines = 0;
    std::istringstream jsonl(slurp(dir / "out" / "trials.jsonl"));
    while (std::getline(jsonl, line)) {
        const auto rec = json::parse(line);
        for (const char* key : {"degree", "trial", "seed", "L_N", "converged", "counts", "certificates"})
            CHECK(rec.contains(key));
        ++lines;
    }
    CHECK(lines == 50);

    // same config via file, different worker count, identical trials
    std::ofstream(dir / "cfg.json")
        << R"({"model":"signed_uniform_int","degrees":[200],"trials":50,"seed":1,"workers":1})";
    CHECK(cli("experiment --config cfg.json --out-dir again", dir).code == 0);
    CHECK(slurp(dir / "out" / "trials.jsonl") == slurp(dir / "again" / "trials.jsonl"));
    fs::remove_all(dir);
}

TEST_CASE("selftest", "[cli]")
{
    const auto dir = workdir("selftest");
    const auto a = cli("selftest", dir);
    const auto b = cli("selftest", dir);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("all fixtures passed") != std::string::npos);

    const auto f = cli("selftest --inject-solver-fault 1", dir);
    CHECK(f.code == 1);
    CHECK(f.out.find("FAIL") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("usage errors exit 2", "[cli]")
{
    const auto dir = workdir("usage");
    CHECK(cli("", dir).code == 2);
    CHECK(cli("frobnicate", dir).code == 2);
    CHECK(cli("sample --n 5", dir).code == 2);
    CHECK(cli("sample --model nonsense --n 5", dir).code == 2);
    CHECK(cli("experiment --trials 3", dir).code == 2);
    CHECK(cli("experiment --out-dir o --alpha cubic", dir).code == 2);
    CHECK(cli("certify --input missing.json", dir).code == 2);
    std::ofstream(dir / "bad.json") << "[0, 1, 2]";
    CHECK(cli("roots --input bad.json", dir, (dir / "err.txt").string()).code == 2);
    CHECK(slurp(dir / "err.txt").find("error:") != std::string::npos);
    std::ofstream(dir / "junk.json") << "not json";
    CHECK(cli("roots --input junk.json", dir).code == 2);

    const auto v = cli("--version", dir);
    CHECK(v.code == 0);
    CHECK(v.out.rfind("polyclust ", 0) == 0);
    fs::remove_all(dir);
}
