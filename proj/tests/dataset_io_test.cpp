#include <gtest/gtest.h>

#include <filesystem>

#include "matchfame/dataset_io.hpp"
#include "matchfame/solver.hpp"

namespace matchfame {
namespace {

namespace fs = std::filesystem;

class DatasetIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("matchfame_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

SynthConfig Config(CorruptionModel model) {
  SynthConfig cfg;
  cfg.n = 15;
  cfg.m = 7;
  cfg.model = model;
  cfg.seed = 8;
  return cfg;
}

TEST_F(DatasetIo, RoundTripIsByteIdentical) {
  for (const CorruptionModel& model :
       {CorruptionModel{UcmModel{0.4}}, CorruptionModel{LbcModel{3}}, CorruptionModel{LacModel{2}}}) {
    const auto cfg = Config(model);
    const auto inst = generate(cfg);
    const auto data = dataset_from_instance(inst, cfg);
    write_dataset(dir_ / "a", data);
    const auto back = read_dataset(dir_ / "a");
    write_dataset(dir_ / "b", back);
    for (const char* f : {"meta.json", "obs.coo", "gt_abs.coo", "labels.tsv"}) {
      EXPECT_EQ(read_text(dir_ / "a" / f), read_text(dir_ / "b" / f)) << f;
    }
    const auto again = instance_from_dataset(back);
    EXPECT_EQ(again.truth, inst.truth);
    EXPECT_EQ(again.bad, inst.bad);
    EXPECT_EQ(back.meta.model, model_name(model));
    ASSERT_EQ(again.graph.num_edges(), inst.graph.num_edges());
    for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
      EXPECT_EQ(again.graph.block(e), inst.graph.block(e));
    }
  }
}

TEST_F(DatasetIo, ResultFilesRoundTrip) {
  const auto cfg = Config(UcmModel{0.3});
  const auto inst = generate(cfg);
  const auto result = match_fame(inst.graph, CempConfig{}, SolverConfig{});
  write_s_hat(dir_ / "s_hat.tsv", inst.graph, result.s_hat);
  const auto s = read_s_hat(dir_ / "s_hat.tsv", inst.graph);
  EXPECT_EQ(s.values, result.s_hat.values);
  EXPECT_EQ(s.unverifiable, result.s_hat.unverifiable);

  write_matches(dir_ / "matches.coo", inst.graph, result.matches);
  EXPECT_EQ(read_matches(dir_ / "matches.coo", inst.graph), result.matches);

  write_assignment(dir_ / "assignment.coo", result.assignment);
  EXPECT_EQ(read_assignment(dir_ / "assignment.coo", inst.graph.keypoint_counts(),
                            result.assignment.universe_size),
            result.assignment);
}

TEST_F(DatasetIo, MalformedInputsThrow) {
  const auto cfg = Config(UcmModel{0.3});
  const auto inst = generate(cfg);
  write_dataset(dir_, dataset_from_instance(inst, cfg));
  const std::string obs = read_text(dir_ / "obs.coo");

  auto expect_bad = [&](const std::string& text) {
    write_text(dir_ / "obs.coo", text);
    EXPECT_THROW(read_dataset(dir_), DataError) << text.substr(0, 40);
  };
  expect_bad(obs.substr(0, obs.size() - 1));   // missing final newline
  expect_bad("0 1 0\n" + obs);                  // too few fields
  expect_bad("0  1 0 0\n" + obs);               // double space
  expect_bad("0 1 x 0\n" + obs);                // not a number
  expect_bad("0 0 0 0\n" + obs);                // self loop
  expect_bad("0 1 999 0\n" + obs);              // out of range row
  write_text(dir_ / "obs.coo", obs);
  EXPECT_NO_THROW(read_dataset(dir_));

  write_text(dir_ / "meta.json", "{\"format_version\": 99}\n");
  EXPECT_THROW(read_dataset(dir_), DataError);
  write_text(dir_ / "meta.json", "{not json");
  EXPECT_THROW(read_dataset(dir_), DataError);
  EXPECT_THROW(read_dataset(dir_ / "missing"), DataError);
}

TEST_F(DatasetIo, LabelsMustAgreeWithTruth) {
  const auto cfg = Config(UcmModel{0.5});
  const auto inst = generate(cfg);
  auto data = dataset_from_instance(inst, cfg);
  ASSERT_TRUE(data.labels.has_value());
  (*data.labels)[0] ^= 1;
  EXPECT_THROW(instance_from_dataset(data), DataError);
}

}  // namespace
}  // namespace matchfame
