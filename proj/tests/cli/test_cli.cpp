#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        const auto d = fs::temp_directory_path() / ("cvarkit_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = "cd '" + workdir().string() + "' && '" CVK_CLI "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::vector<std::string> out;
    std::istringstream in(slurp(p));
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(b)) {
        (void)e;
        ++count;
    }
    if (count != names.size()) return false;
    for (const auto& n : names)
        if (slurp(a / n) != slurp(b / n)) return false;
    return true;
}

std::string month(int t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d-%02d", 1990 + t / 12, t % 12 + 1);
    return buf;
}

// Disaster-intensity policy, two treated outcomes and their two controls sharing stochastic trends.
void write_application_panel() {
    std::mt19937_64 eng(2024);
    std::normal_distribution<double> z;
    std::exponential_distribution<double> ex(1.0);
    std::bernoulli_distribution hit(0.25);
    std::ofstream out(workdir() / "panel.csv");
    out << "date,IP_DEU,CD,MU_US,IP_US,MU_DEU\n";
    double c1 = 0, c2 = 0;
    for (int t = 0; t < 360; ++t) {
        c1 += z(eng);
        c2 += z(eng);
        const double cd = hit(eng) ? ex(eng) : 0.0;
        const double ip = c1 - 0.4 * cd + 0.5 * z(eng);
        const double mu = c2 + 0.2 * cd + 0.5 * z(eng);
        out << month(t) << "," << c1 + 0.5 * z(eng) << "," << cd << "," << mu << "," << ip << "," << c2 + 0.5 * z(eng)
            << "\n";
    }
    std::ofstream roles(workdir() / "roles.cfg");
    roles << "# application layout\nCD = policy:1\nIP_US = treated:1\nMU_US = treated:2\nIP_DEU = control:1\nMU_DEU = control:2\n";
}

void write_rank_panel(const std::string& name, bool cointegrated) {
    std::mt19937_64 eng(cointegrated ? 11 : 12);
    std::normal_distribution<double> z;
    std::ofstream out(workdir() / (name + ".csv"));
    out << "t,A,B\n";
    double trend = 0, other = 0;
    for (int t = 0; t < 500; ++t) {
        trend += 0.3 + z(eng);
        other += 0.2 + z(eng);
        const double b = cointegrated ? trend + z(eng) : other;
        out << t + 1 << "," << trend << "," << b << "\n";
    }
    std::ofstream roles(workdir() / (name + ".cfg"));
    roles << "A = policy:1\nB = treated:1\n";
}

struct Fixtures {
    Fixtures() {
        write_application_panel();
        write_rank_panel("coint", true);
        write_rank_panel("walks", false);
    }
};

const Fixtures& fixtures() {
    static const Fixtures f;
    return f;
}

}  // namespace

TEST_CASE("estimate writes the coefficient tables and a manifest") {
    (void)fixtures();
    REQUIRE(run("estimate --input panel.csv --roles roles.cfg --lags 1 --p-max 3 --out est") == 0);
    int a_rows = 0;
    for (const auto& l : lines(workdir() / "est/model_summary.csv"))
        if (l.rfind("A,", 0) == 0) ++a_rows;
    CHECK(a_rows == 3 * 3 * 1);
    CHECK(fs::exists(workdir() / "est/residual_diagnostics.csv"));
    CHECK(lines(workdir() / "est/bic_table.csv").size() == 4);
    const auto manifest = slurp(workdir() / "est/manifest.json");
    CHECK(manifest.find("\"argv\"") != std::string::npos);
    CHECK(manifest.find("fnv1a64") != std::string::npos);

    REQUIRE(run("estimate --input panel.csv --roles roles.cfg --lags 2 --out est2") == 0);
    a_rows = 0;
    for (const auto& l : lines(workdir() / "est2/model_summary.csv"))
        if (l.rfind("A,", 0) == 0) ++a_rows;
    CHECK(a_rows == 3 * 3 * 2);
}

TEST_CASE("validation failures exit with 2") {
    (void)fixtures();
    CHECK(run("estimate --input panel.csv --roles roles.cfg --lags 0 --out bad") == 2);
    CHECK(run("estimate --input missing.csv --roles roles.cfg --out bad") == 2);
    CHECK(run("estimate --input panel.csv --roles roles.cfg --mode nonsense --out bad") == 2);
    CHECK(run("irf --input panel.csv --roles roles.cfg --bootstrap 999 --out bad") == 2);
    CHECK(run("irf --input panel.csv --roles roles.cfg --mode cvar-vecm --rank 9 --out bad") == 2);
    CHECK(run("verify --theorem T1 --out bad") == 2);
    CHECK(run("bogus") == 2);
}

TEST_CASE("numerical failures exit with 3") {
    (void)fixtures();
    std::ofstream out(workdir() / "collinear.csv");
    out << "t,W,Y,Z\n";
    std::mt19937_64 eng(4);
    std::normal_distribution<double> z;
    for (int t = 0; t < 50; ++t) {
        const double w = std::round(8 * z(eng)), y = std::round(8 * z(eng));
        out << t << "," << w << "," << y << "," << w + y << "\n";
    }
    out.close();
    std::ofstream roles(workdir() / "collinear.cfg");
    roles << "W = policy:1\nY = treated:1\nZ = treated:2\n";
    roles.close();
    CHECK(run("estimate --input collinear.csv --roles collinear.cfg --out num") == 3);
}

TEST_CASE("replay reproduces the output tree byte for byte") {
    (void)fixtures();
    REQUIRE(run("irf --input panel.csv --roles roles.cfg --mode cvar-vecm --rank 3 --lags 1 --dummy-quantile 0.95 "
                "--bootstrap 199 --seed 3 --out orig") == 0);
    REQUIRE(run("replay --manifest orig/manifest.json --out again") == 0);
    CHECK(same_tree(workdir() / "orig", workdir() / "again"));
    REQUIRE(run("estimate --input panel.csv --roles roles.cfg --lags 1 --out e_orig") == 0);
    REQUIRE(run("replay --manifest e_orig/manifest.json --out e_again") == 0);
    CHECK(same_tree(workdir() / "e_orig", workdir() / "e_again"));
}

TEST_CASE("impulse responses") {
    (void)fixtures();
    SUBCASE("plain VAR has three series") {
        REQUIRE(run("irf --input panel.csv --roles roles.cfg --lags 1 --horizons 20 --out irf_var") == 0);
        const auto l = lines(workdir() / "irf_var/irf_point.csv");
        CHECK(l[0] == "horizon,series,response");
        CHECK(l.size() == 1 + 21 * 3);
        CHECK(l[1].rfind("0,CD,1", 0) == 0);
    }
    SUBCASE("VECM CVAR with the dummy policy has five series and bands") {
        REQUIRE(run("irf --input panel.csv --roles roles.cfg --mode cvar-vecm --rank 3 --lags 1 --dummy-quantile 0.95 "
                    "--bootstrap 999 --seed 7 --out irf_a") == 0);
        REQUIRE(run("irf --input panel.csv --roles roles.cfg --mode cvar-vecm --rank 3 --lags 1 --dummy-quantile 0.95 "
                    "--bootstrap 999 --seed 7 --out irf_b") == 0);
        const auto bands = lines(workdir() / "irf_a/irf_bands.csv");
        CHECK(bands[0] == "horizon,series,response,lower,upper");
        CHECK(bands.size() == 1 + 41 * 5);
        CHECK(fs::exists(workdir() / "irf_a/irf_diff_bands.csv"));
        CHECK(slurp(workdir() / "irf_a/irf_bands.csv") == slurp(workdir() / "irf_b/irf_bands.csv"));
        CHECK(slurp(workdir() / "irf_a/irf_diff_bands.csv") == slurp(workdir() / "irf_b/irf_diff_bands.csv"));
    }
    SUBCASE("simple-difference CVAR") {
        REQUIRE(run("irf --input panel.csv --roles roles.cfg --mode cvar-diff --dummy-threshold 0 --out irf_diff") == 0);
        const auto l = lines(workdir() / "irf_diff/irf_point.csv");
        CHECK(l[2].rfind("0,IP_US-IP_DEU,", 0) == 0);
    }
}

TEST_CASE("rank test") {
    (void)fixtures();
    REQUIRE(run("rank-test --input coint.csv --roles coint.cfg --lags 1 --out rank_c") == 0);
    auto l = lines(workdir() / "rank_c/trace_table.csv");
    CHECK(l[0] == "null_rank,eigenvalue,trace_stat,critical_value,reject");
    CHECK(l[1].substr(l[1].size() - 2) == ",1");
    CHECK(l[2].substr(l[2].size() - 2) == ",0");
    REQUIRE(run("rank-test --input walks.csv --roles walks.cfg --lags 1 --out rank_w") == 0);
    l = lines(workdir() / "rank_w/trace_table.csv");
    CHECK(l[1].substr(l[1].size() - 2) == ",0");

    std::ofstream one(workdir() / "one.cfg");
    one << "A = policy:1\n";
    one.close();
    std::ofstream csv(workdir() / "one.csv");
    csv << "t,A\n1,1\n2,3\n3,2\n4,5\n5,4\n";
    csv.close();
    CHECK(run("rank-test --input one.csv --roles one.cfg --out rank_one") == 2);
}

TEST_CASE("rank test with candidate controls") {
    (void)fixtures();
    std::ofstream good(workdir() / "cand_good.csv"), noise(workdir() / "cand_noise.csv");
    good << "date,ip,mu\n";
    noise << "date,ip,mu\n";
    const auto rows = lines(workdir() / "panel.csv");
    std::mt19937_64 eng(5);
    std::normal_distribution<double> z;
    double a = 0, b = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream ss(rows[i]);
        std::string date, ip_deu, cd, mu_us, ip_us, mu_deu;
        std::getline(ss, date, ',');
        std::getline(ss, ip_deu, ',');
        std::getline(ss, cd, ',');
        std::getline(ss, mu_us, ',');
        std::getline(ss, ip_us, ',');
        std::getline(ss, mu_deu, ',');
        a += z(eng);
        b += z(eng);
        good << date << "," << ip_deu << "," << mu_deu << "\n";
        noise << date << "," << a << "," << b << "\n";
    }
    good.close();
    noise.close();
    REQUIRE(run("rank-test --input panel.csv --roles roles.cfg --lags 1 --target-rank 2 --candidate noise=cand_noise.csv "
                "--candidate germany=cand_good.csv --out rank_cand") == 0);
    const auto ranking = lines(workdir() / "rank_cand/control_ranking.csv");
    REQUIRE(ranking.size() == 3);
    CHECK(ranking[1].rfind("1,germany,", 0) == 0);
    const auto table = lines(workdir() / "rank_cand/trace_table.csv");
    CHECK(table[0] == "null_rank,noise,germany,critical_value");
    CHECK(table.size() == 6);
    CHECK(run("rank-test --input panel.csv --roles roles.cfg --candidate broken --out rank_bad") == 2);
}

TEST_CASE("verify") {
    (void)fixtures();
    REQUIRE(run("verify --theorem T1 --pi 0.3 --effect 1.0 --T 10000 --reps 50 --seed 1 --out ver_t1") == 0);
    const auto report = slurp(workdir() / "ver_t1/verification_report.txt");
    CHECK(report.find("result=PASS") != std::string::npos);
    CHECK(report.find("estimand=ATE") != std::string::npos);
    CHECK(run("verify --theorem T1 --policy gaussian --seed 1 --out ver_bad") == 2);
    REQUIRE(run("verify --theorem T4 --reps 10 --seed 2 --out ver_t4") == 0);
    const auto t4 = slurp(workdir() / "ver_t4/verification_report.txt");
    CHECK(t4.find("extra.q0=") != std::string::npos);
    CHECK(t4.find("extra.integral_q1=") != std::string::npos);
    CHECK(t4.find("extra.acr=") != std::string::npos);
    REQUIRE(run("replay --manifest ver_t4/manifest.json --out ver_t4_again") == 0);
    CHECK(same_tree(workdir() / "ver_t4", workdir() / "ver_t4_again"));
}
