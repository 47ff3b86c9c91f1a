#include <gtest/gtest.h>

#include "k3lat/verification.hpp"

using namespace k3lat;

namespace {

const VerificationReport& lemma31() {
  static const VerificationReport r = verify_lemma_3_1();
  return r;
}
const VerificationReport& lemma32() {
  static const VerificationReport r = verify_lemma_3_2();
  return r;
}
const VerificationReport& prop33() {
  static const VerificationReport r = verify_prop_3_3();
  return r;
}

bool has_step(const VerificationReport& r, const std::string& prefix) {
  for (const auto& s : r.steps)
    if (s.description.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST(Verification, ThreeA2HasNoQuasiPrimitiveExtension) {
  const auto& r = lemma31();
  EXPECT_EQ(r.claim, "lemma31");
  EXPECT_EQ(r.status, Status::verified) << to_text(r);
  for (const auto& s : r.steps) EXPECT_TRUE(s.ok) << s.description;
  EXPECT_TRUE(r.certificates.contains("extensions"));
}

TEST(Verification, EightA2HasTwoQuasiPrimitiveExtensions) {
  const auto& r = lemma32();
  EXPECT_EQ(r.status, Status::verified) << to_text(r);
  for (const char* step : {"(a)", "(b)", "(c)", "(d)", "(e)", "(f)", "(g)"}) EXPECT_TRUE(has_step(r, step)) << step;
  EXPECT_TRUE(r.certificates.contains("pattern_(3,3)"));
  EXPECT_TRUE(r.certificates.contains("pattern_(4,1)"));
  EXPECT_TRUE(r.certificates.contains("order81"));
}

TEST(Verification, PropositionStepsAndScope) {
  const auto& r = prop33();
  EXPECT_EQ(r.status, Status::verified) << to_text(r);
  EXPECT_TRUE(r.certificates.contains("scope"));
  EXPECT_TRUE(r.certificates.contains("s_minus_c_identification"));
  for (const auto& s : r.steps) EXPECT_TRUE(s.ok) << s.description;
}

TEST(Verification, TheoremConsumesThreeComponents) {
  auto t = verify_final_theorem(TheoremComponents{lemma31(), lemma32(), prop33()});
  EXPECT_EQ(t.status, Status::verified);
  EXPECT_EQ(t.certificates["components"], nlohmann::ordered_json({"lemma31", "lemma32", "prop33"}));
  EXPECT_EQ(t.certificates["cusp_multiplicity"], "8");
}

TEST(Verification, TheoremReflectsFailingComponent) {
  VerificationReport broken = prop33();
  broken.status = Status::refuted;
  EXPECT_EQ(verify_final_theorem(TheoremComponents{lemma31(), lemma32(), broken}).status, Status::refuted);
  VerificationReport partial = lemma32();
  partial.status = Status::partial;
  EXPECT_EQ(verify_final_theorem(TheoremComponents{lemma31(), partial, prop33()}).status, Status::partial);
}

TEST(Verification, TightBoundsGivePartialReport) {
  EnumerationLimits tight;
  tight.max_elements = 50;
  auto r = verify_lemma_3_2(tight);
  EXPECT_EQ(r.status, Status::partial);
}

TEST(Verification, JsonIsDeterministic) {
  EXPECT_EQ(to_json(verify_prop_3_3({}, 7)).dump(), to_json(verify_prop_3_3({}, 7)).dump());
  EXPECT_EQ(to_json(verify_lemma_3_1()).dump(), to_json(lemma31()).dump());
  auto j = to_json(lemma31());
  for (const char* key : {"claim", "status", "steps", "certificates"}) EXPECT_TRUE(j.contains(key)) << key;
}
