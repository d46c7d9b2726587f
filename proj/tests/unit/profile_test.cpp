// Copyright 2026 The Scission Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "scission/error.hpp"
#include "scission/profile.hpp"

namespace scission {
namespace {

std::string profile_doc(const std::string& units, const std::string& model = "m",
                        const std::string& runs = "5") {
  return R"({"resource_id":"pi","tier":"device","model_name":")" + model + R"(","runs":)" +
         runs + R"(,"units":)" + units + "}";
}

PartitionSchema schema_with(std::size_t units) {
  PartitionSchema s = testing::make_schema(units, {}, std::vector<std::uint64_t>(units, 1), 1);
  s.model_name = "m";
  return s;
}

TEST(AggregateRuns, Mean) {
  const double one[] = {1.0};
  EXPECT_EQ(aggregate_runs(one), 1.0);
  const double zeros[] = {0.0, 0.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(aggregate_runs(zeros), 0.0);
  const double five[] = {0.010, 0.012, 0.011, 0.009, 0.013};
  EXPECT_NEAR(aggregate_runs(five), 0.011, 1e-15);
}

TEST(AggregateRuns, Errors) {
  EXPECT_THROW(aggregate_runs(std::span<const double>{}), DataError);
  const double negative[] = {0.1, -0.2};
  EXPECT_THROW(aggregate_runs(negative), DataError);
}

// Independent summation oracle: long double accumulation in a shuffled
// order. Also covers permutation invariance.
TEST(AggregateRuns, MatchesIndependentSummation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> sample(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> samples(5);
    for (double& s : samples) s = sample(rng);
    long double sum = 0.0L;
    for (double s : samples) sum += s;
    const double expected = static_cast<double>(sum / 5.0L);
    EXPECT_NEAR(aggregate_runs(samples), expected, 1e-12);
    std::shuffle(samples.begin(), samples.end(), rng);
    EXPECT_NEAR(aggregate_runs(samples), expected, 1e-12);
  }
}

TEST(IngestProfile, RecomputesMeanFromSamples) {
  const ResourceProfile p = ingest_profile(profile_doc(
      R"([{"unit_id":0,"mean_s":99,"samples_s":[0.010,0.012,0.011,0.009,0.013]},
          {"unit_id":1,"mean_s":0.5}])"));
  EXPECT_EQ(p.resource_id, "pi");
  EXPECT_EQ(p.tier, Tier::kDevice);
  EXPECT_EQ(p.runs, 5);
  ASSERT_EQ(p.unit_count(), 2u);
  EXPECT_NEAR(p.unit_times[0], 0.011, 1e-9);
  EXPECT_EQ(p.unit_times[1], 0.5);
  ASSERT_TRUE(p.raw_samples.has_value());
  EXPECT_EQ((*p.raw_samples)[0].size(), 5u);
}

TEST(IngestProfile, UnitsMayArriveOutOfOrder) {
  const ResourceProfile p = ingest_profile(
      profile_doc(R"([{"unit_id":1,"mean_s":0.2},{"unit_id":0,"mean_s":0.1}])"));
  EXPECT_EQ(p.unit_times, (std::vector<double>{0.1, 0.2}));
  EXPECT_FALSE(p.raw_samples.has_value());
}

TEST(IngestProfile, MissingUnitOfFiveUnitSchema) {
  const std::string doc = profile_doc(
      R"([{"unit_id":0,"mean_s":0.1},{"unit_id":1,"mean_s":0.1},{"unit_id":2,"mean_s":0.1},
          {"unit_id":4,"mean_s":0.1}])");
  try {
    ingest_profile(doc, schema_with(5));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("missing unit 3"), std::string::npos) << e.what();
  }
  const std::string truncated = profile_doc(
      R"([{"unit_id":0,"mean_s":0.1},{"unit_id":1,"mean_s":0.1},{"unit_id":2,"mean_s":0.1}])");
  try {
    ingest_profile(truncated, schema_with(5));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("missing unit 3"), std::string::npos) << e.what();
  }
}

TEST(IngestProfile, Errors) {
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0,"mean_s":-0.1}])")), DataError);
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0,"samples_s":[0.1,-1]}])")), DataError);
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0,"mean_s":0.1}])", "m", "0")), DataError);
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0,"mean_s":0.1},{"unit_id":0,"mean_s":0.1}])")),
               DataError);
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0}])")), DataError);
  EXPECT_THROW(ingest_profile(R"({"resource_id":"x","tier":"fog","model_name":"m","runs":1,"units":[]})"),
               DataError);
  EXPECT_THROW(ingest_profile("not json"), DataError);
  // Model mismatch and surplus units are alignment errors.
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0,"mean_s":0.1}])", "other"), schema_with(1)),
               DataError);
  EXPECT_THROW(ingest_profile(profile_doc(R"([{"unit_id":0,"mean_s":0.1},{"unit_id":1,"mean_s":0.1}])"),
                              schema_with(1)),
               DataError);
}

TEST(IngestProfile, SerializeRoundTrip) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const testing::Instance instance = testing::random_instance(rng);
    for (const auto& [id, profile] : instance.profiles) {
      const ResourceProfile back = ingest_profile(serialize_profile(profile), instance.schema);
      EXPECT_EQ(back.unit_times, profile.unit_times);
      EXPECT_EQ(back.tier, profile.tier);
      EXPECT_EQ(back.resource_id, profile.resource_id);
    }
  }
}

TEST(NativeTime, Sums) {
  ResourceProfile p;
  p.unit_times = {0.1, 0.2, 0.3};
  EXPECT_NEAR(native_time(p), 0.6, 1e-15);
  p.unit_times = {0.0, 0.0};
  EXPECT_EQ(native_time(p), 0.0);
}

TEST(NativeTime, MatchesOracleFold) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> time(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    ResourceProfile p;
    p.unit_times.resize(20);
    for (double& t : p.unit_times) t = time(rng);
    long double sum = 0.0L;
    for (auto it = p.unit_times.rbegin(); it != p.unit_times.rend(); ++it) sum += *it;
    EXPECT_NEAR(native_time(p), static_cast<double>(sum), 1e-12);
  }
}

}  // namespace
}  // namespace scission
