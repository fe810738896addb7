#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"

#ifndef WTCLI_PATH
#error "WTCLI_PATH must point at the wtcli executable"
#endif

namespace {

namespace fs = std::filesystem;

struct result {
    int code = -1;
    std::string out;
};

result run(const std::string& args)
{
    const std::string cmd = std::string(WTCLI_PATH) + " " + args + " 2>/dev/null";
    result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    char buf[4096];
    while (const auto got = std::fread(buf, 1, sizeof buf, pipe)) {
        r.out.append(buf, got);
    }
    const auto status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("wtcli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
        std::ofstream(dir_ / "fig2.txt", std::ios::binary) << oracle::fig2_text;
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, BuildIsByteIdenticalAcrossAlgorithms)
{
    for (const std::string algo : {"seq", "pwt", "dd"}) {
        ASSERT_EQ(run("build --input " + path("fig2.txt") + " --algo " + algo + " --threads 4 --output " +
                      path(algo + ".idx"))
                      .code,
                  0);
    }
    const auto seq = slurp(path("seq.idx"));
    EXPECT_FALSE(seq.empty());
    EXPECT_EQ(seq, slurp(path("pwt.idx")));
    EXPECT_EQ(seq, slurp(path("dd.idx")));

    ASSERT_EQ(run("build --input " + path("fig2.txt") + " --algo dd --segments 1 --threads 3 --output " +
                  path("dd1.idx"))
                  .code,
              0);
    EXPECT_EQ(seq, slurp(path("dd1.idx")));
}

TEST_F(Cli, BuildErrors)
{
    EXPECT_EQ(run("build --input " + path("missing.txt") + " --output " + path("x.idx")).code, 2);
    EXPECT_EQ(run("build --input " + path("fig2.txt") + " --algo dd --segments 31 --output " + path("x.idx")).code,
              2);
    EXPECT_EQ(run("build --input " + path("fig2.txt") + " --encoding 4b --output " + path("x.idx")).code, 2);
    EXPECT_EQ(run("build --output " + path("x.idx")).code, 2);
}

TEST_F(Cli, Queries)
{
    ASSERT_EQ(run("build --input " + path("fig2.txt") + " --output " + path("f.idx")).code, 0);
    const auto idx = "--index " + path("f.idx");
    EXPECT_EQ(run("query " + idx + " --op access --pos 24").out, "t\n");
    EXPECT_EQ(run("query " + idx + " --op rank --symbol t --pos 29").out, "3\n");
    EXPECT_EQ(run("query " + idx + " --op select --symbol a --ordinal 2").out, "17\n");
    EXPECT_EQ(run("query " + idx + " --op rank --symbol z --pos 29").out, "0\n");

    EXPECT_EQ(run("query " + idx + " --op select --symbol a --ordinal 3").code, 3);
    EXPECT_EQ(run("query " + idx + " --op access --pos 30").code, 3);
    EXPECT_EQ(run("query " + idx + " --op rank --symbol t --pos 30").code, 3);
    EXPECT_EQ(run("query " + idx + " --op select --symbol z --ordinal 1").code, 3);
    EXPECT_EQ(run("query --index " + path("fig2.txt") + " --op access --pos 0").code, 2);
}

TEST_F(Cli, GenWritesDataAndMetadata)
{
    const auto r = run("gen --kind cont --n 8 --sigma 4 --output " + path("c.bin"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(slurp(path("c.bin")), std::string("\0\0\1\1\2\2\3\3", 8));
    const auto meta = slurp(path("c.bin.meta"));
    EXPECT_NE(meta.find("kind=cont n=8 sigma=4 seed=42"), std::string::npos);

    ASSERT_EQ(run("gen --kind rand --n 1000 --sigma 16 --seed 5 --output " + path("r1.bin")).code, 0);
    ASSERT_EQ(run("gen --kind rand --n 1000 --sigma 16 --seed 5 --output " + path("r2.bin")).code, 0);
    ASSERT_EQ(run("gen --kind cont --n 1000 --sigma 16 --output " + path("c2.bin")).code, 0);
    const auto r1 = slurp(path("r1.bin"));
    EXPECT_EQ(r1, slurp(path("r2.bin")));
    auto sorted = r1;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, slurp(path("c2.bin")));
    EXPECT_NE(r1, sorted);

    EXPECT_EQ(run("gen --kind cont --n 3 --sigma 4 --output " + path("bad.bin")).code, 2);
}

TEST_F(Cli, BenchCsv)
{
    const auto csv = path("b.csv");
    const auto r = run("bench --gen cont:1048576:16:42 --algos seq,pwt,dd --threads 1,2 --segments 1,3 --reps 2 --csv " +
                       csv);
    ASSERT_EQ(r.code, 0);
    std::istringstream in(slurp(csv));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "algo,n,sigma,threads,segments,reps,median_seconds,peak_extra_bytes,dirs_included");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_NE(line.find(",1048576,16,"), std::string::npos) << line;
        EXPECT_EQ(line.back(), '0');
    }
    EXPECT_EQ(rows, 1 + 2 + 4); // seq once, pwt per thread count, dd per (threads, segments)

    const auto stdout_csv = run("bench --gen rand:5000:4:1 --algos dd --threads 2 --reps 1 --include-dirs");
    ASSERT_EQ(stdout_csv.code, 0);
    EXPECT_NE(stdout_csv.out.find("\ndd,5000,4,2,2,1,"), std::string::npos) << stdout_csv.out;
    EXPECT_EQ(stdout_csv.out.back(), '\n');
    EXPECT_EQ(stdout_csv.out[stdout_csv.out.size() - 2], '1');
}

TEST_F(Cli, BenchGenIsDeterministic)
{
    const std::string cmd = std::string(WTCLI_PATH) + " bench --gen cont:1048576:16:42 --algos seq --reps 1 2>&1 >/dev/null";
    auto hash_line = [&] {
        std::string out;
        FILE* pipe = popen(cmd.c_str(), "r");
        char buf[512];
        while (const auto got = std::fread(buf, 1, sizeof buf, pipe)) {
            out.append(buf, got);
        }
        pclose(pipe);
        return out.substr(out.find("hash="));
    };
    EXPECT_EQ(hash_line(), hash_line());
}

TEST_F(Cli, BenchUsageErrors)
{
    EXPECT_EQ(run("bench --input " + path("fig2.txt") + " --gen cont:8:4:1").code, 2);
    EXPECT_EQ(run("bench --algos seq").code, 2);
    EXPECT_EQ(run("bench --gen cont:8:4:1 --algos bogus").code, 2);
    EXPECT_EQ(run("bench --gen cont:8:4").code, 2);
}

TEST_F(Cli, ThreadsFromEnvironment)
{
    const std::string cmd = "WT_THREADS=3 " + std::string(WTCLI_PATH) + " bench --gen rand:5000:4:1 --algos pwt --reps 1";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    char buf[512];
    while (const auto got = std::fread(buf, 1, sizeof buf, pipe)) {
        out.append(buf, got);
    }
    pclose(pipe);
    EXPECT_NE(out.find("\npwt,5000,4,3,1,"), std::string::npos) << out;
}
