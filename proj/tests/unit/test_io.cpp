#include <gtest/gtest.h>

#include <filesystem>

#include "qmm/generators.hpp"
#include "qmm/io/mm_format.hpp"

using namespace qmm;
using namespace qmm::io;

namespace {

std::vector<unsigned char> bytes(std::string_view s) { return {s.begin(), s.end()}; }

MarginalSetFile sample(InstanceKind kind, LayoutKind layout, int n, std::uint64_t seed = 1) {
  InstanceSpec spec;
  spec.kind = kind;
  spec.layout = layout;
  spec.n = n;
  spec.seed = seed;
  return {gen(spec).ms, json{{"kind", std::string(to_string(kind))}, {"seed", seed}}};
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) text.replace(at, from.size(), to);
  return text;
}

}  // namespace

TEST(Base64, KnownVectors) {
  const std::vector<std::pair<std::string, std::string>> rfc{
      {"", ""}, {"f", "Zg=="}, {"fo", "Zm8="}, {"foo", "Zm9v"}, {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="},
      {"foobar", "Zm9vYmFy"}};
  for (const auto& [plain, enc] : rfc) {
    EXPECT_EQ(base64_encode(bytes(plain)), enc);
    EXPECT_EQ(base64_decode(enc), bytes(plain));
  }
  for (const char* bad : {"Zg=", "Zm9v!A==", "Zh==", "Zm9v\nYmFy", "=Zg="}) EXPECT_THROW(base64_decode(bad), FormatError) << bad;
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(MatrixPayload, KnownBytesAndRoundTrip) {
  EXPECT_EQ(encode_matrix(Matrix::Identity(1, 1)), "AAAAAAAA8D8AAAAAAAAAAA==");
  Matrix m(2, 2);
  m << Complex(0.5, 0), Complex(0, -0.25), Complex(0, 0.25), Complex(0.5, 0);
  const std::string enc = encode_matrix(m);
  EXPECT_EQ(enc, "AAAAAAAA4D8AAAAAAAAAAAAAAAAAAAAAAAAAAAAA0L8AAAAAAAAAAAAAAAAAANA/AAAAAAAA4D8AAAAAAAAAAA==");
  EXPECT_TRUE(decode_matrix(enc, 2) == m);
  EXPECT_THROW(decode_matrix(enc, 3), FormatError);
  Rng rng(1);
  const Matrix r = random_state(rng, SiteSet{1, 2, 3}, {2, 3, 2}).matrix();
  EXPECT_TRUE(decode_matrix(encode_matrix(r), r.rows()) == r);
}

TEST(MarginalSetFile, ByteIdenticalRoundTrip) {
  for (const auto& f : {sample(InstanceKind::ghz, LayoutKind::chain, 8), sample(InstanceKind::sequential, LayoutKind::hexgrid, 2, 4),
                        sample(InstanceKind::product, LayoutKind::chain, 4, 9)}) {
    const std::string text = serialize(f);
    const MarginalSetFile back = parse_marginal_set(text);
    EXPECT_EQ(serialize(back), text);
    EXPECT_EQ(back.meta, f.meta);
    for (std::size_t k = 0; k < f.ms.entries().size(); ++k)
      EXPECT_TRUE(back.ms.entries()[k].matrix() == f.ms.entries()[k].matrix());
    EXPECT_EQ(back.ms.geometry().layout().kind, f.ms.geometry().layout().kind);
    EXPECT_EQ(back.ms.geometry().clusters().size(), f.ms.geometry().clusters().size());
    EXPECT_EQ(text.back(), '\n');
  }
}

TEST(MarginalSetFile, LayoutShape) {
  const json j = to_json(sample(InstanceKind::ghz, LayoutKind::chain, 8));
  EXPECT_EQ(j.at("format"), 1);
  EXPECT_EQ(j.at("kind"), "marginal-set");
  ASSERT_EQ(j.at("marginals").size(), 3u);
  for (const json& m : j.at("marginals")) {
    EXPECT_EQ(m.at("dim"), 16);
    EXPECT_EQ(m.at("encoding"), "c128le-base64");
  }
  EXPECT_EQ(j.at("geometry").at("layout").at("kind"), "chain");
  EXPECT_EQ(j.at("geometry").at("cells").size(), 4u);
}

TEST(MarginalSetFile, CustomGeometry) {
  const std::vector<Vertex> v{{SiteId{1}, 2}, {SiteId{2}, 3}, {SiteId{3}, 2}};
  const Geometry g(v, {{SiteId{1}, SiteId{2}}, {SiteId{2}, SiteId{3}}},
                   {{"a", SiteSet{1}}, {"b", SiteSet{2}}, {"c", SiteSet{3}}},
                   {{{0, 1}, std::nullopt}, {{1, 2}, std::nullopt}, {{1}, 0}});
  Rng rng(3);
  const MarginalSetFile f{extract_marginals(random_state(rng, g.vertex_set(), {2, 3, 2}), g), json::object()};
  const std::string text = serialize(f);
  const MarginalSetFile back = parse_marginal_set(text);
  EXPECT_EQ(serialize(back), text);
  EXPECT_EQ(back.ms.geometry().layout().kind, LayoutKind::custom);
  EXPECT_EQ(back.ms.geometry().storage_of(2), 0u);
}

TEST(MarginalSetFile, CorruptionIsRejected) {
  const MarginalSetFile f = sample(InstanceKind::ghz, LayoutKind::chain, 6);
  const std::string good = serialize(f);
  const std::string payload = to_json(f).at("marginals")[0].at("payload");
  EXPECT_THROW(parse_marginal_set(good.substr(0, good.size() / 2)), FormatError);
  EXPECT_THROW(parse_marginal_set(replace_once(good, payload.substr(0, 8), "!!!!!!!!")), FormatError);
  EXPECT_THROW(parse_marginal_set(replace_once(good, payload, payload.substr(4))), FormatError);
  EXPECT_THROW(parse_marginal_set(replace_once(good, "\"format\": 1", "\"format\": 2")), FormatError);
  EXPECT_THROW(parse_marginal_set(replace_once(good, "\"marginal-set\"", "\"state\"")), FormatError);
  EXPECT_THROW(parse_marginal_set(replace_once(good, "c128le-base64", "raw")), FormatError);
  EXPECT_THROW(parse_marginal_set("[]"), FormatError);
  EXPECT_THROW(parse_marginal_set(replace_once(good, "\"dim\": 16", "\"dim\": 8")), LayoutError);

  json j = to_json(f);
  j["marginals"].erase(1);
  EXPECT_THROW(parse_marginal_set(dump(j)), LayoutError);
  j = to_json(f);
  j["marginals"][0]["payload"] = encode_matrix(-Matrix::Identity(16, 16));
  EXPECT_THROW(parse_marginal_set(dump(j)), InvalidStateError);
}

TEST(StateSidecar, RoundTrip) {
  Rng rng(5);
  const LocalState s = random_state(rng, SiteSet{2, 5}, {2, 3});
  const std::string text = serialize_state(s);
  const LocalState back = parse_state(text);
  EXPECT_TRUE(back.matrix() == canonical(s).matrix());
  EXPECT_EQ(serialize_state(back), text);
  EXPECT_THROW(parse_state(serialize(sample(InstanceKind::product, LayoutKind::chain, 4))), FormatError);
}

TEST(Fixtures, RoundTripWhenPresent) {
  const std::filesystem::path dir = QMM_FIXTURES;
  if (!std::filesystem::exists(dir)) GTEST_SKIP() << "no fixtures directory";
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".mm") continue;
    const std::string text = read_file(entry.path().string());
    EXPECT_EQ(serialize(parse_marginal_set(text)), text) << entry.path();
    ++seen;
  }
  EXPECT_GT(seen, 0);
}
