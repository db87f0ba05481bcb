#include <gtest/gtest.h>

#include <filesystem>

#include "spectra/error.hpp"
#include "support.hpp"

using namespace spectra;
using namespace spectra::test;
using io::Json;

namespace {

std::string input_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(DatumJson, RoundTripIsByteStable) {
  for (int n = 1; n <= 5; ++n) {
    const auto path = packs_dir() / ("a" + std::to_string(n) + ".json");
    const std::string text = io::read_text(path);
    const CategoryDatum d = io::datum_from_json(Json::parse(text), "x");
    EXPECT_EQ(io::dump(io::datum_to_json(d)), text);
  }
}

TEST(DatumJson, RationalFieldRoundTrip) {
  const CategoryDatum d = single_point(Field(FieldSpec::rational()));
  const Json j = io::datum_to_json(d);
  EXPECT_EQ(j["field"]["kind"], "rational");
  EXPECT_EQ(j["identities"][0]["element"][0], "1/1");
  EXPECT_TRUE(validate_datum(io::datum_from_json(j, "x")).valid());
}

TEST(DatumJson, UnknownFieldRejectedWithLocation) {
  Json j = io::datum_to_json(load_pack("a2.json"));
  j["compose"][0]["extra"] = 1;
  const std::string msg = input_error([&] { io::datum_from_json(j, "a2.json"); });
  EXPECT_NE(msg.find("a2.json.compose[0]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("extra"), std::string::npos) << msg;
}

TEST(DatumJson, BadInputs) {
  const Json base = io::datum_to_json(load_pack("a2.json"));
  Json j = base;
  j["schema"] = "stable-cat-datum/2";
  EXPECT_NE(input_error([&] { io::datum_from_json(j, "f"); }).find("schema"), std::string::npos);
  j = base;
  j["compose"][0]["g"] = "nope";
  EXPECT_NE(input_error([&] { io::datum_from_json(j, "f"); }).find("unknown basis element"), std::string::npos);
  j = base;
  j["identities"][0]["element"] = Json::array({"1", "0"});
  EXPECT_NE(input_error([&] { io::datum_from_json(j, "f"); }).find("identities[0].element"), std::string::npos);
  j = base;
  j["field"] = Json{{"kind", "prime"}, {"p", 4}};
  EXPECT_NE(input_error([&] { io::datum_from_json(j, "f"); }).find("field.p"), std::string::npos);
  j = base;
  j["identities"][0]["element"][0] = 1;
  EXPECT_NE(input_error([&] { io::datum_from_json(j, "f"); }).find("strings"), std::string::npos);
  EXPECT_FALSE(input_error([] { io::parse_file("/nonexistent/x.json"); }).empty());
}

TEST(DatumJson, OmittedHomPairsAreZero) {
  Json j = io::datum_to_json(discrete({"A", "B"}));
  Json kept = Json::array();
  for (const auto& h : j["hom"])
    if (h["dim"] != 0) kept.push_back(h);
  j["hom"] = kept;
  const CategoryDatum d = io::datum_from_json(j, "x");
  EXPECT_EQ(d.hom_dim(0, 1), 0u);
  EXPECT_TRUE(validate_datum(d).valid());
}

TEST(FunctorJson, RoundTrip) {
  const CategoryDatum d = load_pack("a3.json");
  for (const auto& f : functor_family(d, 5, 2)) {
    const FpFunctor g = io::functor_from_json(d, io::functor_to_json(d, f), "f");
    EXPECT_EQ(g.presentation.source.summands, f.presentation.source.summands);
    EXPECT_EQ(g.presentation.blocks, f.presentation.blocks);
  }
}

TEST(SpaceJson, RoundTripBothForms) {
  const TableSpace s = io::load_space(packs_dir() / "dvr-spec.json");
  const TableSpace t = io::space_from_json(io::space_to_json(s), "x");
  for (std::uint64_t m = 0; m < 4; ++m) EXPECT_EQ(s.closure(subset_from_mask(2, m)), t.closure(subset_from_mask(2, m)));
  PointSet a(2), b(2);
  a.set(0);
  a.set(1);
  b.set(1);
  const TableSpace ug = TableSpace::union_generated({"eta", "m"}, {a, b});
  const Json j = io::space_to_json(ug);
  EXPECT_TRUE(j["union_generated"].get<bool>());
  EXPECT_EQ(j["closures"].size(), 2u);
  EXPECT_EQ(io::space_from_json(j, "x").closure(a), a);
}

TEST(SpaceJson, IncompleteTableRejected) {
  Json j = io::space_to_json(io::load_space(packs_dir() / "dvr-spec.json"));
  j["closures"].erase(j["closures"].size() - 1);
  EXPECT_NE(input_error([&] { io::space_from_json(j, "s"); }).find("missing a subset"), std::string::npos);
}

TEST(ManifestJson, RoundTrip) {
  const auto path = packs_dir() / "a3.manifest.json";
  const std::string text = io::read_text(path);
  EXPECT_EQ(io::dump(io::manifest_to_json(io::load_manifest(path))), text);
}

TEST(TowerJson, WriteAndReload) {
  const auto dir = std::filesystem::temp_directory_path() / "spectra_io_tower";
  std::filesystem::remove_all(dir);
  const GeneratedTower g = gen_ainf_tower(2, 6);
  io::write_tower(dir, g.tower, g.manifest);
  const auto lt = io::load_tower(dir);
  EXPECT_EQ(lt.tower.height(), 2u);
  EXPECT_EQ(lt.manifest.filename(), "manifest.json");
  EXPECT_TRUE(verify_tower(lt.tower).passed);
  const PackManifest m = io::load_manifest(lt.manifest);
  EXPECT_EQ(m.hashes.at("level2.json"), fnv1a64(io::read_text(dir / "level2.json")));
  std::filesystem::remove_all(dir);
}

TEST(Reports, CbJsonMarksInfinity) {
  PointSet all(1);
  all.set(0);
  CBReport r;
  r.points = {"x"};
  r.ranks = {std::nullopt};
  r.derivative_chain = {all};
  const Json j = io::cb_to_json(r);
  EXPECT_EQ(j["space_rank"], "infinity");
  EXPECT_EQ(j["ranks"]["x"], "infinity");
}

}  // namespace
