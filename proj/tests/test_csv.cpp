#include <gtest/gtest.h>

#include <sstream>

#include "causalbic/csv.hpp"
#include "causalbic/errors.hpp"
#include "test_support.hpp"

using namespace causalbic;
namespace oracle = causalbic::testing;

namespace {

Dataset read(const std::string& text) {
    std::istringstream in(text);
    return read_dataset_csv(in);
}

std::string error_of(const std::string& text) {
    try {
        read(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(ReadDatasetCsv, ObservationalRow) {
    const auto data = read("target,x1,x2\n,0.5,-1.2\n");
    ASSERT_EQ(data.size(), 1U);
    EXPECT_EQ(data.dimension(), 2);
    EXPECT_TRUE(data.target(0).empty());
    EXPECT_EQ(data.row(0)[0], 0.5);
    EXPECT_EQ(data.row(0)[1], -1.2);
}

TEST(ReadDatasetCsv, MultiVertexTarget) {
    const auto data = read("target,x1,x2,x3\n1;3,0.0,0.0,0.0\n");
    EXPECT_EQ(data.target(0), InterventionTarget::of({0, 2}));
}

TEST(ReadDatasetCsv, ErrorsNameTheLine) {
    EXPECT_NE(error_of("target,x1,x2,x3\n,1,2,3\n4,0,0,0\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("target,x1,x2\n,1\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("target,x1,x2\n,1,abc\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("target,x1,x2\n0,1,2\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("target,x1,x2\n1;x,1,2\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("x1,x2\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("").find("line 1"), std::string::npos);
}

TEST(ReadDatasetCsv, PreservesRowOrderAndAcceptsCrlf) {
    const auto data = read("target,x1,x2\r\n2,3,1\r\n,4,1\r\n1,5,1\r\n");
    ASSERT_EQ(data.size(), 3U);
    EXPECT_EQ(data.target(0), InterventionTarget::of({1}));
    EXPECT_TRUE(data.target(1).empty());
    EXPECT_EQ(data.row(2)[0], 5.0);
}

TEST(WriteDatasetCsv, RoundTripsExactly) {
    CounterRng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 2 + static_cast<int>(rng() % 5);
        const auto model = sample_normalized_model(sample_random_dag(p, std::min(2.0, p - 1.0), rng()), rng());
        const auto family = oracle::random_conservative_family(p, rng);
        const auto data = oracle::sample_family_dataset(model, family, 10, oracle::random_spec(family, rng), rng());
        std::ostringstream out;
        write_dataset_csv(out, data);
        EXPECT_EQ(read(out.str()), data);
    }
    Dataset extremes(3);
    extremes.add_row(InterventionTarget::of({0, 2}), std::vector<double>{1e-300, -0.1, 1.0 / 3.0});
    std::ostringstream out;
    write_dataset_csv(out, extremes);
    EXPECT_EQ(out.str().substr(0, 13), "target,x1,x2,");
    EXPECT_EQ(read(out.str()), extremes);
}

TEST(FamilyFromDataset, IncludesEmptyTargetOnlyWithObservationalRows) {
    const auto mixed = read("target,x1,x2\n,1,2\n2,1,2\n");
    EXPECT_EQ(family_from_dataset(mixed), TargetFamily({InterventionTarget{}, InterventionTarget::of({1})}));
    const auto interventional = read("target,x1,x2\n1,1,2\n2,1,2\n");
    EXPECT_EQ(family_from_dataset(interventional),
              TargetFamily({InterventionTarget::of({0}), InterventionTarget::of({1})}));
    EXPECT_THROW(family_from_dataset(Dataset(2)), InputError);
}

TEST(FormatDouble, SeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
