#include "lognet/model.h"

#include <filesystem>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace lognet {
namespace {

using ::testing::HasSubstr;

ModelFile quantitative_model() {
  LearningSet set({{"wbc", FeatureKind::kQuantitative}, {"fever", FeatureKind::kBoolean}, {"rash", FeatureKind::kBoolean}},
                  {{4.1, 1, 0}, {5.0, 1, 1}, {7.3, 1, 0}, {8.8, 0, 1}, {5.5, 0, 0}, {9.1, 1, 1}, {6.0, 1, 1}, {7.0, 0, 0},
                   {6.2, 1, 0}},
                  {1, 1, 0, 0, 0, 0, 1, 0, 1});
  const BooleanLearningSet b = binarize(set);
  SynthesisConfig cfg;
  return model_from_synthesis(b, synthesize(b, cfg), cfg, "0.8");
}

std::string error_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ModelError& e) {
    return e.what();
  }
  return "";
}

TEST(ModelTest, RoundTrip) {
  const ModelFile m = quantitative_model();
  ASSERT_EQ(m.outcome, "success");
  const std::string text = serialize_model(m);
  const ModelFile back = parse_model(text);
  EXPECT_TRUE(semantically_equal(m, back));
  EXPECT_EQ(serialize_model(back), text);
  EXPECT_EQ(back.quantization, m.quantization);
  ASSERT_TRUE(back.quantization.thresholds[0]);
}

TEST(ModelTest, FileRoundTripAndDeterminism) {
  const auto dir = std::filesystem::temp_directory_path() / "lognet_model_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.json").string();
  save_model(quantitative_model(), path);
  const std::string first = read_file(path);
  save_model(quantitative_model(), path);
  EXPECT_EQ(read_file(path), first);
  EXPECT_TRUE(semantically_equal(load_model(path), quantitative_model()));
  EXPECT_THROW(load_model((dir / "missing.json").string()), ModelError);
}

TEST(ModelTest, ClassicRoundTrip) {
  const auto t = testing::and_with_flip();
  const BooleanLearningSet b = testing::to_bset(t);
  ClassicConfig cfg;
  const ModelFile m = model_from_classic(b, synthesize_classic(b, cfg), cfg, "2/3");
  EXPECT_EQ(m.criterion, Criterion::kClassic);
  const ModelFile back = parse_model(serialize_model(m));
  EXPECT_TRUE(semantically_equal(m, back));
  EXPECT_EQ(back.collective().chi0(), (Fraction{2, 3}));
}

TEST(ModelTest, CorruptionIsDetected) {
  const std::string text = serialize_model(quantitative_model());
  std::string edited = text;
  const auto pos = edited.find("\"mu\": 0");
  ASSERT_NE(pos, std::string::npos);
  edited.replace(pos, 7, "\"mu\": 1");
  EXPECT_THAT(error_of(edited), HasSubstr("digest"));

  std::string flipped = text;
  const auto name = flipped.find("fever");
  flipped[name] = 'F';
  EXPECT_THAT(error_of(flipped), HasSubstr("digest"));
}

TEST(ModelTest, VersionAndFormatChecks) {
  const std::string text = serialize_model(quantitative_model());
  std::string v2 = text;
  v2.replace(v2.find("\"format_version\": 1"), 19, "\"format_version\": 2");
  EXPECT_THAT(error_of(v2), HasSubstr("version"));
  EXPECT_THAT(error_of("{not json"), HasSubstr("malformed"));
  EXPECT_THAT(error_of("{\"format\": \"other\"}"), HasSubstr("not a lognet model"));
  EXPECT_THAT(error_of("[]"), HasSubstr("not a lognet model"));
}

TEST(ModelTest, SemanticValidation) {
  ModelFile bad = quantitative_model();
  bad.quantization.thresholds[0].reset();
  EXPECT_THAT(error_of(serialize_model(bad)), HasSubstr("threshold"));

  ModelFile wide = quantitative_model();
  wide.members.push_back({parse_signature("(g0 x0 x7)"), 0, 1});
  EXPECT_THAT(error_of(serialize_model(wide)), HasSubstr("unknown sensor"));

  ModelFile empty = quantitative_model();
  empty.members.clear();
  EXPECT_THAT(error_of(serialize_model(empty)), HasSubstr("no members"));
}

TEST(ModelTest, DigestCoversEverySemanticField) {
  const ModelFile base = quantitative_model();
  const std::string base_text = serialize_model(base);
  std::vector<ModelFile> variants(6, base);
  variants[0].chi0 = "0.9";
  variants[1].terminal_layer += 1;
  variants[2].quantization.thresholds[0]->u += 0.5;
  variants[3].features[1].name = "chills";
  variants[4].members.front().mu = 3;
  variants[5].criterion = Criterion::kClassic;
  for (const auto& v : variants) {
    const std::string text = serialize_model(v);
    EXPECT_NE(text.substr(text.find("\"digest\"")), base_text.substr(base_text.find("\"digest\"")));
  }
}

TEST(ModelTest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace lognet
