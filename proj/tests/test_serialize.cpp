// Round-trip and rejection tests for the JSON scheme/channel file format.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "qte/constructions.hpp"
#include "qte/sampling.hpp"
#include "qte/serialize.hpp"

using namespace qte;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::vector<std::string> kBits{"0", "1"};

double channel_residual_max(const KrausChannel& a, const KrausChannel& b) {
  return (a.choi() - b.choi()).norm_max();
}

}  // namespace

TEST_CASE("an authenticating scheme survives the JSON round trip") {
  AqecmScheme s = otp_accept(kBits);
  Json j = scheme_to_json(s);
  AqecmScheme t = scheme_from_json(j);

  REQUIRE(t.name == s.name);
  REQUIRE(t.messages == s.messages);
  REQUIRE(t.keys.labels == s.keys.labels);
  REQUIRE(t.keys.probs == s.keys.probs);
  REQUIRE(t.msg_space.dim() == s.msg_space.dim());
  REQUIRE(t.cipher_space.dim() == s.cipher_space.dim());
  REQUIRE(t.flag_space.dim() == s.flag_space.dim());
  REQUIRE(t.cipher_space.factor_count() == s.cipher_space.factor_count());
  for (int f = 0; f < s.cipher_space.factor_count(); ++f) {
    REQUIRE(t.cipher_space.factor(f).label == s.cipher_space.factor(f).label);
    REQUIRE(t.cipher_space.factor(f).classical == s.cipher_space.factor(f).classical);
  }

  REQUIRE(t.enc.size() == s.enc.size());
  REQUIRE(t.dec.size() == s.dec.size());
  for (size_t k = 0; k < s.enc.size(); ++k) {
    REQUIRE(channel_residual_max(t.enc[k], s.enc[k]) <= 1e-15);
    REQUIRE(channel_residual_max(t.dec[k], s.dec[k]) <= 1e-15);
  }

  // Behavioural invariants carry over exactly.
  REQUIRE(std::abs(correctness_gap(t) - correctness_gap(s)) <= 1e-15);
  REQUIRE(std::abs(encryption_gap(t).alpha - encryption_gap(s).alpha) <= 1e-15);
  for (int k = 0; k < s.keys.size(); ++k)
    REQUIRE((dbar_accept_effect(t, k) - dbar_accept_effect(s, k)).norm_max() <= 1e-15);
}

TEST_CASE("a scheme survives a save/load cycle through a file") {
  AqecmScheme s = conj_parity_pad(1);
  const std::string path = "tmp_scheme_roundtrip.json";
  save_scheme(s, path);
  AqecmScheme t = load_scheme(path);
  std::remove(path.c_str());
  REQUIRE(t.keys.size() == s.keys.size());
  for (size_t k = 0; k < s.enc.size(); ++k)
    REQUIRE(channel_residual_max(t.enc[k], s.enc[k]) <= 1e-15);
  REQUIRE(std::abs(correctness_gap(t) - correctness_gap(s)) <= 1e-15);
}

TEST_CASE("a bare channel survives the JSON round trip") {
  Rng rng(42);
  SpaceShape in = SpaceShape::single("X", 2);
  SpaceShape out = SpaceShape::single("Y", 3);
  KrausChannel c = random_cptp(rng, in, out, 2);
  KrausChannel d = channel_from_json(channel_to_json(c));
  REQUIRE(d.in_shape().dim() == 2);
  REQUIRE(d.out_shape().dim() == 3);
  REQUIRE(channel_residual_max(c, d) <= 1e-12);
  REQUIRE(validate_channel(d).cptp);
}

TEST_CASE("tampered documents are rejected with located schema errors") {
  AqecmScheme s = otp_accept(kBits);

  SECTION("a key distribution that does not sum to one") {
    Json j = scheme_to_json(s);
    j["key_dist"]["probs"] = {0.7, 0.7, 0.7, 0.7};
    REQUIRE_THROWS_WITH(scheme_from_json(j), ContainsSubstring("key_dist"));
  }
  SECTION("an unsupported schema revision") {
    Json j = scheme_to_json(s);
    j["schema"] = 2;
    REQUIRE_THROWS_WITH(scheme_from_json(j), ContainsSubstring("unsupported schema revision"));
  }
  SECTION("a matrix index outside the pool") {
    Json j = scheme_to_json(s);
    j["keyed_channels"]["enc"][0]["kraus"][0] = 999;
    REQUIRE_THROWS_WITH(scheme_from_json(j), ContainsSubstring("out of range"));
  }
  SECTION("the wrong document kind") {
    Json j = scheme_to_json(s);
    j["kind"] = "channel";
    REQUIRE_THROWS_WITH(scheme_from_json(j), ContainsSubstring("expected kind"));
  }
  SECTION("a missing top-level field") {
    Json j = scheme_to_json(s);
    j.erase("matrices");
    REQUIRE_THROWS_WITH(scheme_from_json(j), ContainsSubstring("missing field"));
  }
  SECTION("fewer messages than any scheme allows") {
    Json j = scheme_to_json(s);
    j["messages"] = Json::array({"only"});
    REQUIRE_THROWS_WITH(scheme_from_json(j), ContainsSubstring("at least two"));
  }
}

TEST_CASE("a stored channel that is not trace preserving is rejected on load") {
  SpaceShape x = SpaceShape::single("X", 2);
  KrausChannel bad(std::vector<CMatrix>{Complex(2.0, 0.0) * CMatrix::identity(2)}, x, x);
  Json j = channel_to_json(bad);
  REQUIRE_THROWS_WITH(channel_from_json(j), ContainsSubstring("stored channel is not CPTP"));
}

TEST_CASE("unreadable or malformed files fail with clear errors") {
  REQUIRE_THROWS_WITH(load_json("does_not_exist_anywhere.json"),
                      ContainsSubstring("cannot open"));
  const std::string path = "tmp_not_json.json";
  {
    std::ofstream out(path);
    out << "this is } not json [";
  }
  REQUIRE_THROWS_WITH(load_json(path), ContainsSubstring("not valid JSON"));
  std::remove(path.c_str());
}
