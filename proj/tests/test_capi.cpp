#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "spectra/spectra.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

const fs::path kPacks = SPECTRA_PACKS_DIR;

std::string pack(const std::string& name) { return (kPacks / name).string(); }

Json take(char* s) {
  EXPECT_NE(s, nullptr);
  Json j = Json::parse(s ? s : "null");
  spk_string_free(s);
  return j;
}

TEST(CApi, LoadErrorsCarryMessages) {
  spk_datum* d = nullptr;
  EXPECT_EQ(spk_datum_load("/nonexistent.json", &d), SPK_INPUT_ERROR);
  EXPECT_EQ(d, nullptr);
  EXPECT_NE(std::string(spk_last_error()).find("nonexistent"), std::string::npos);
  EXPECT_EQ(spk_datum_load(nullptr, &d), SPK_INPUT_ERROR);
  EXPECT_EQ(spk_validate(nullptr, nullptr), SPK_INPUT_ERROR);
  spk_space* s = nullptr;
  EXPECT_EQ(spk_space_load(pack("a2.json").c_str(), &s), SPK_INPUT_ERROR);
}

TEST(CApi, ClosureAndWitness) {
  spk_datum* d = nullptr;
  ASSERT_EQ(spk_datum_load(pack("a2.json").c_str(), &d), SPK_OK);
  EXPECT_EQ(spk_datum_point_count(d), 2u);
  const char* ids[] = {"M1"};
  char* out = nullptr;
  ASSERT_EQ(spk_closure(d, ids, 1, &out), SPK_OK);
  const Json j = take(out);
  EXPECT_EQ(j["closure"], Json::array({"M1"}));
  EXPECT_TRUE(j["witnesses"].contains("M2"));
  ASSERT_EQ(spk_witness(d, "M2", ids, 1, &out), SPK_OK);
  const Json w = take(out);
  EXPECT_EQ(w["cokernel_dims"]["M1"], 0);
  EXPECT_EQ(w["cokernel_dims"]["M2"], 1);
  const char* bad[] = {"Q"};
  EXPECT_EQ(spk_closure(d, bad, 1, &out), SPK_INPUT_ERROR);
  EXPECT_NE(std::string(spk_last_error()).find("Q"), std::string::npos);
  spk_datum_free(d);
}

TEST(CApi, ValidateAndChecks) {
  spk_datum* d = nullptr;
  ASSERT_EQ(spk_datum_load(pack("a3.json").c_str(), &d), SPK_OK);
  char* out = nullptr;
  ASSERT_EQ(spk_validate(d, &out), SPK_OK);
  EXPECT_TRUE(take(out)["valid"].get<bool>());
  ASSERT_EQ(spk_check_datum(d, "all", 50, 3, &out), SPK_OK);
  const Json c = take(out);
  EXPECT_TRUE(c["passed"].get<bool>());
  for (const char* k : {"kuratowski", "t1", "serre", "perp", "routes"}) EXPECT_TRUE(c["results"].contains(k)) << k;
  EXPECT_EQ(spk_check_datum(d, "nope", 1, 1, &out), SPK_INPUT_ERROR);
  spk_datum_free(d);
}

TEST(CApi, SpaceQueries) {
  spk_space* s = nullptr;
  ASSERT_EQ(spk_space_load(pack("dvr-spec.json").c_str(), &s), SPK_OK);
  char* out = nullptr;
  ASSERT_EQ(spk_cb_rank_space(s, &out), SPK_OK);
  const Json j = take(out);
  EXPECT_EQ(j["space_rank"], 1);
  EXPECT_EQ(j["ranks"], (Json{{"eta", 0}, {"m", 1}}));
  ASSERT_EQ(spk_check_space(s, "t1", 0, 1, &out), SPK_VIOLATION);
  EXPECT_FALSE(take(out)["passed"].get<bool>());
  ASSERT_EQ(spk_check_space(s, "kuratowski", 0, 1, &out), SPK_OK);
  take(out);
  spk_space_free(s);
}

TEST(CApi, TowerQueries) {
  spk_tower* t = nullptr;
  ASSERT_EQ(spk_tower_load(pack("ainf-tower").c_str(), &t), SPK_OK);
  EXPECT_EQ(spk_tower_height(t), 8u);
  ASSERT_EQ(spk_tower_truncate(t, 4), SPK_OK);
  EXPECT_EQ(spk_tower_height(t), 4u);
  EXPECT_EQ(spk_tower_truncate(t, 9), SPK_INPUT_ERROR);
  char* out = nullptr;
  ASSERT_EQ(spk_tower_chain(t, "I", 0, &out), SPK_OK);
  const Json c = take(out);
  EXPECT_EQ(c["entries"][0]["fails_at"], 2);
  EXPECT_EQ(c["ar_stabilization"]["verdict"], "growing_up_to");
  char* dot = nullptr;
  ASSERT_EQ(spk_ar_tower(t, "I2", &out, &dot), SPK_OK);
  take(out);
  ASSERT_NE(dot, nullptr);
  EXPECT_NE(std::string(dot).find("\"I1\" -> \"I2\""), std::string::npos);
  spk_string_free(dot);
  EXPECT_EQ(spk_tower_chain(t, "J", 0, &out), SPK_INPUT_ERROR);
  spk_tower_free(t);
}

TEST(CApi, GenerateAndVerifyRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "spectra_capi";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string file = (dir / "a3.json").string();
  char* out = nullptr;
  ASSERT_EQ(spk_gen_pack_an(3, 0, file.c_str(), &out), SPK_OK);
  take(out);
  ASSERT_EQ(spk_verify_pack(file.c_str(), &out), SPK_OK);
  EXPECT_TRUE(take(out)["passed"].get<bool>());
  ASSERT_EQ(spk_verify_pack((dir / "a3.manifest.json").string().c_str(), &out), SPK_OK);
  take(out);
  // Flip one coefficient in the file.
  std::string text;
  {
    std::ifstream in(file);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto at = text.find("\"coeff\": \"1\"");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 12, "\"coeff\": \"5\"");
  std::ofstream(file) << text;
  ASSERT_EQ(spk_verify_pack(file.c_str(), &out), SPK_VIOLATION);
  const Json j = take(out);
  EXPECT_FALSE(j["certification"]["passed"].get<bool>());
  EXPECT_EQ(j["files"]["a3.json"], "mismatch");
  EXPECT_EQ(spk_gen_tower_ainf(3, 12, 2, (dir / "t").string().c_str(), &out), SPK_INPUT_ERROR);
  fs::remove_all(dir);
}

TEST(CApi, FileSchema) {
  char* s = nullptr;
  ASSERT_EQ(spk_file_schema(pack("a1.json").c_str(), &s), SPK_OK);
  EXPECT_STREQ(s, "stable-cat-datum/1");
  spk_string_free(s);
  ASSERT_EQ(spk_file_schema(pack("ainf-tower").c_str(), &s), SPK_OK);
  EXPECT_STREQ(s, "");
  spk_string_free(s);
}

}  // namespace
