#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("rabe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        write("u.txt", "doctor\nnurse, cardiology  # comment\n");
        write("msg.txt", "line one\nline two\n");
    }
    void TearDown() override { fs::remove_all(dir_); }

    void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
    std::string read(const std::string& name) {
        std::ifstream f(dir_ / name, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    }

    Result run(const std::string& args) {
        std::string cmd = "cd '" + dir_.string() + "' && RABE_OUT_DIR=. '" RABE_CLI "' " + args + " 2>&1";
        FILE* p = popen(cmd.c_str(), "r");
        std::string out;
        char buf[4096];
        while (auto n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
        int status = pclose(p);
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
    }

    // Full pipeline with alice (satisfies) and bob (does not).
    void pipeline(const std::string& backend) {
        const std::string b = "--backend " + backend + " ";
        ASSERT_EQ(run(b + "--seed 1 setup --l 1 --universe u.txt").code, 0);
        ASSERT_EQ(run(b + "--seed 2 keygen --crs crs.json --aux aux.json --name alice").code, 0);
        ASSERT_EQ(run(b + "register --crs crs.json --aux aux.json --pk alice.pk.json --attrs doctor,cardiology").code, 0);
        ASSERT_EQ(run(b + "--seed 3 keygen --crs crs.json --aux aux.json --name bob").code, 0);
        ASSERT_EQ(run(b + "register --crs crs.json --aux aux.json --pk bob.pk.json --attrs nurse").code, 0);
        ASSERT_EQ(run(b + "--seed 4 encrypt --mpk mpk.json --policy 'doctor and cardiology' --in msg.txt --out ct.json").code, 0);
        ASSERT_EQ(run(b + "transform --crs crs.json --aux aux.json --pk alice.pk.json --ct ct.json --out ctp.json").code, 0);
        ASSERT_EQ(run(b + "decrypt --sk alice.sk.json --ctp ctp.json --ct ct.json --out plain.txt").code, 0);
        EXPECT_EQ(read("plain.txt"), read("msg.txt"));
        EXPECT_EQ(run(b + "transform --crs crs.json --aux aux.json --pk bob.pk.json --ct ct.json --out bob.ctp.json").code, 1);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, MockPipeline) { pipeline("mock-wide"); }

TEST_F(Cli, RealPipeline) { pipeline("real"); }

TEST_F(Cli, TamperedTransformAndFraudProof) {
    pipeline("mock-wide");
    auto env = nlohmann::json::parse(read("ctp.json"));
    auto hex = env["data"].get<std::string>();
    // Flip the last byte of C2' (the container ends with C2').
    hex.back() = hex.back() == '0' ? '1' : '0';
    env["data"] = hex;
    write("bad.json", env.dump());
    auto r = run("--backend mock-wide decrypt --sk alice.sk.json --ctp bad.json --ct ct.json");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("bottom"), std::string::npos);

    ASSERT_EQ(run("--backend mock-wide --seed 9 fraud-prove --sk alice.sk.json --pk alice.pk.json --ctp bad.json --out p.json").code, 0);
    r = run("--backend mock-wide fraud-verify --proof p.json --ctp bad.json --ct ct.json --pk alice.pk.json");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verdict: 1"), std::string::npos);

    ASSERT_EQ(run("--backend mock-wide --seed 9 fraud-prove --sk alice.sk.json --pk alice.pk.json --ctp ctp.json --out q.json").code, 0);
    r = run("--backend mock-wide fraud-verify --proof q.json --ctp ctp.json --ct ct.json --pk alice.pk.json");
    EXPECT_NE(r.out.find("verdict: 0"), std::string::npos);
}

TEST_F(Cli, SeededRunsAreByteIdentical) {
    ASSERT_EQ(run("--backend mock --seed 5 setup --l 2 --universe u.txt").code, 0);
    auto first = read("crs.json");
    ASSERT_EQ(run("--backend mock --seed 5 setup --l 2 --universe u.txt").code, 0);
    EXPECT_EQ(read("crs.json"), first);
    ASSERT_EQ(run("--backend mock --seed 6 setup --l 2 --universe u.txt").code, 0);
    EXPECT_NE(read("crs.json"), first);
}

TEST_F(Cli, MalformedInputAndUsage) {
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("--backend quantum setup --l 1 --universe u.txt").code, 2);
    EXPECT_EQ(run("setup --l 1 --universe missing.txt").code, 2);
    write("junk.json", "{\"format\":\"rabe\",\"data\":\"zz\"}");
    EXPECT_EQ(run("--backend mock keygen --crs junk.json --aux junk.json --name x").code, 2);
    ASSERT_EQ(run("--backend mock --seed 1 setup --l 0 --universe u.txt").code, 0);
    EXPECT_EQ(run("--backend mock encrypt --mpk mpk.json --policy 'doctor and' --in msg.txt").code, 2);
    // No registered user yet: a domain failure.
    EXPECT_EQ(run("--backend mock encrypt --mpk mpk.json --policy doctor --in msg.txt").code, 1);
    EXPECT_EQ(run("--backend mock-wide keygen --crs crs.json --aux aux.json --name x").code, 2);
}

TEST_F(Cli, BinaryArtifacts) {
    ASSERT_EQ(run("--backend mock --binary --seed 1 setup --l 0 --universe u.txt").code, 0);
    EXPECT_EQ(read("crs.bin").substr(0, 4), "RABE");
    EXPECT_EQ(run("--backend mock --binary --seed 2 keygen --crs crs.bin --aux aux.bin --name a").code, 0);
}

TEST_F(Cli, SimulateAndBench) {
    write("s.txt", "universe = a, b\nuser = a\nuser = b\npolicy = a\nstrategy = corrupt-C1\n");
    auto r = run("--backend mock-wide simulate --scenario s.txt --out rep.json");
    ASSERT_EQ(r.code, 0) << r.out;
    auto rep = nlohmann::json::parse(read("rep.json"));
    EXPECT_EQ(rep["outcome"], "refunded");
    EXPECT_EQ(rep["verdict"], 1);

    r = run("--backend mock-wide simulate --fuzz 20 --seed 3");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["traces"], 20);
    write("bad.txt", "universe = a\nuser = a\npolicy = (a\n");
    EXPECT_EQ(run("--backend mock simulate --scenario bad.txt").code, 2);

    r = run("--backend mock bench --attrs 2..6 --step 2 --reps 2 --out b.csv");
    ASSERT_EQ(r.code, 0) << r.out;
    auto csv = read("b.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "attrs,ct_bytes,ctp_bytes,encrypt_ms,transform_ms,decrypt_ms,decrypt_gt_exp");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_EQ(run("bench --attrs 9..3").code, 2);
}
