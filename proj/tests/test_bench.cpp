#include <gtest/gtest.h>

#include <wt/bench.hpp>
#include <wt/ingest.hpp>

TEST(Bench, Median)
{
    EXPECT_DOUBLE_EQ(wt::bench::median({5, 1, 3, 2, 4}), 3.0);
    EXPECT_DOUBLE_EQ(wt::bench::median({4, 1, 3, 2}), 2.5);
    EXPECT_THROW(wt::bench::median({}), wt::validation_error);
}

TEST(Bench, CsvRow)
{
    wt::bench::bench_record r{wt::algorithm::dd, 100, 4, 2, 3, 5, 0.25, 4096, true};
    EXPECT_EQ(wt::bench::to_csv(r), "dd,100,4,2,3,5,0.250000000,4096,1");
    EXPECT_EQ(wt::bench::csv_header, "algo,n,sigma,threads,segments,reps,median_seconds,peak_extra_bytes,dirs_included");
}

TEST(Bench, ParseAlgorithm)
{
    EXPECT_EQ(wt::bench::parse_algorithm("pwt"), wt::algorithm::pwt);
    EXPECT_THROW(wt::bench::parse_algorithm("levelWT"), wt::validation_error);
}

TEST(Bench, RunCaseRecordsConfiguration)
{
    const auto seq = wt::gen_dataset(wt::dataset_kind::rand, 50'000, 16, 1);
    const auto r = wt::bench::run_case(seq, {wt::algorithm::dd, 2, 3}, 3, false);
    EXPECT_EQ(r.n, 50'000u);
    EXPECT_EQ(r.sigma, 16u);
    EXPECT_EQ(r.threads, 2u);
    EXPECT_EQ(r.segments, 3u);
    EXPECT_EQ(r.reps, 3u);
    EXPECT_GT(r.median_seconds, 0.0);
    EXPECT_GT(r.peak_extra_bytes, 0u);

    const auto s = wt::bench::run_case(seq, {wt::algorithm::seq, 8, 8}, 1, true);
    EXPECT_EQ(s.threads, 1u);
    EXPECT_EQ(s.segments, 1u);
    EXPECT_TRUE(s.dirs_included);
    EXPECT_THROW(wt::bench::run_case(seq, {wt::algorithm::pwt, 1, 1}, 0, false), wt::validation_error);
}

TEST(Bench, PwtSingleThreadNearSequential)
{
    const auto seq = wt::gen_dataset(wt::dataset_kind::rand, 10'000'000, 4, 7);
    const auto s = wt::bench::run_case(seq, {wt::algorithm::seq, 1, 1}, 3, false);
    const auto p = wt::bench::run_case(seq, {wt::algorithm::pwt, 1, 1}, 3, false);
    EXPECT_LE(p.median_seconds, 1.5 * s.median_seconds) << "seq " << s.median_seconds << "s pwt " << p.median_seconds;
}
