#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qte/scheme.hpp"
#include "qte/version.hpp"

namespace qte {

using Json = nlohmann::json;

// On-disk layout (schema 1): a top-level object carrying a shared pool of
// matrices (row-major [re, im] entry pairs) plus named shapes, the key
// distribution, and keyed channel lists referencing the pool by index.

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& where, const std::string& what) {
  throw Error("schema violation: " + where + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(where, "missing field '" + key + "'");
  return *it;
}

inline Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      data.push_back({m(r, c).real(), m(r, c).imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const Json& j, const std::string& where) {
  const Json& rows_j = field(j, "rows", where);
  const Json& cols_j = field(j, "cols", where);
  const Json& data = field(j, "data", where);
  if (!rows_j.is_number_integer() || !cols_j.is_number_integer())
    schema_fail(where, "rows/cols must be integers");
  int rows = rows_j.get<int>(), cols = cols_j.get<int>();
  if (rows <= 0 || cols <= 0) schema_fail(where, "rows/cols must be positive");
  if (!data.is_array() || static_cast<long long>(data.size()) !=
                              static_cast<long long>(rows) * cols)
    schema_fail(where, "data length must equal rows*cols");
  CMatrix m(rows, cols);
  long long i = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++i) {
      const Json& e = data[static_cast<size_t>(i)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        schema_fail(where, "entry " + std::to_string(i) + " must be a [re, im] pair");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

inline Json shape_to_json(const SpaceShape& s) {
  Json out = Json::array();
  for (int i = 0; i < s.factor_count(); ++i) {
    const auto& f = s.factor(i);
    out.push_back({{"label", f.label}, {"dim", f.dim}, {"classical", f.classical}});
  }
  return out;
}

inline SpaceShape shape_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array of factors");
  SpaceShape s = SpaceShape::scalar();
  int i = 0;
  for (const auto& f : j) {
    std::string fw = where + "[" + std::to_string(i++) + "]";
    const Json& dim = field(f, "dim", fw);
    if (!dim.is_number_integer() || dim.get<int>() <= 0)
      schema_fail(fw, "dim must be a positive integer");
    const Json& label = field(f, "label", fw);
    const Json& classical = field(f, "classical", fw);
    if (!label.is_string()) schema_fail(fw, "label must be a string");
    if (!classical.is_boolean()) schema_fail(fw, "classical must be a boolean");
    s = s.concat(SpaceShape::single(label.get<std::string>(), dim.get<int>(),
                                    classical.get<bool>()));
  }
  if (s.factor_count() == 0) schema_fail(where, "shape needs at least one factor");
  return s;
}

// Shared matrix pool: serializing interns, loading resolves indices.
struct MatrixPool {
  Json pool = Json::array();
  int intern(const CMatrix& m) {
    pool.push_back(matrix_to_json(m));
    return static_cast<int>(pool.size()) - 1;
  }
};

inline Json channel_to_json(const KrausChannel& c, MatrixPool& pool, const std::string& in_name,
                            const std::string& out_name) {
  Json kraus = Json::array();
  for (const auto& k : c.kraus()) kraus.push_back(pool.intern(k));
  return Json{{"in", in_name}, {"out", out_name}, {"kraus", std::move(kraus)}};
}

inline KrausChannel channel_from_json(const Json& j, const std::vector<CMatrix>& pool,
                                      const std::map<std::string, SpaceShape>& shapes,
                                      const std::string& where) {
  auto shape_of = [&](const std::string& key) -> const SpaceShape& {
    const Json& name = field(j, key, where);
    if (!name.is_string()) schema_fail(where, key + " must name a shape");
    auto it = shapes.find(name.get<std::string>());
    if (it == shapes.end()) schema_fail(where, "unknown shape '" + name.get<std::string>() + "'");
    return it->second;
  };
  const SpaceShape& in = shape_of("in");
  const SpaceShape& out = shape_of("out");
  const Json& kraus = field(j, "kraus", where);
  if (!kraus.is_array() || kraus.empty()) schema_fail(where, "kraus must be a non-empty array");
  std::vector<CMatrix> ops;
  for (const auto& idx : kraus) {
    if (!idx.is_number_integer()) schema_fail(where, "kraus entries must be matrix indices");
    long long i = idx.get<long long>();
    if (i < 0 || i >= static_cast<long long>(pool.size()))
      schema_fail(where, "matrix index " + std::to_string(i) + " out of range");
    const CMatrix& m = pool[static_cast<size_t>(i)];
    if (m.rows() != out.dim() || m.cols() != in.dim())
      schema_fail(where, "matrix " + std::to_string(i) + " does not match the channel shapes");
    ops.push_back(m);
  }
  return KrausChannel(std::move(ops), in, out);
}

inline std::vector<CMatrix> pool_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array of matrices");
  std::vector<CMatrix> out;
  int i = 0;
  for (const auto& m : j) out.push_back(matrix_from_json(m, where + "[" + std::to_string(i++) + "]"));
  return out;
}

inline void check_header(const Json& j, const std::string& kind) {
  const Json& schema = field(j, "schema", "$");
  if (!schema.is_number_integer() || schema.get<int>() != file_schema)
    schema_fail("$.schema", "unsupported schema revision");
  const Json& k = field(j, "kind", "$");
  if (!k.is_string() || k.get<std::string>() != kind)
    schema_fail("$.kind", "expected kind '" + kind + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Authenticating schemes.

inline Json scheme_to_json(const AqecmScheme& s) {
  detail::MatrixPool pool;
  Json enc = Json::array(), dec = Json::array();
  for (const auto& e : s.enc) enc.push_back(detail::channel_to_json(e, pool, "msg", "cipher"));
  for (const auto& d : s.dec) dec.push_back(detail::channel_to_json(d, pool, "cipher", "msg_flag"));
  Json shapes{{"msg", detail::shape_to_json(s.msg_space)},
              {"cipher", detail::shape_to_json(s.cipher_space)},
              {"flag", detail::shape_to_json(s.flag_space)},
              {"msg_flag", detail::shape_to_json(s.msg_space.concat(s.flag_space))}};
  return Json{{"schema", file_schema},
              {"kind", "aqecm"},
              {"name", s.name},
              {"messages", s.messages},
              {"key_dist", Json{{"labels", s.keys.labels}, {"probs", s.keys.probs}}},
              {"shapes", std::move(shapes)},
              {"matrices", std::move(pool.pool)},
              {"keyed_channels", Json{{"enc", std::move(enc)}, {"dec", std::move(dec)}}}};
}

inline AqecmScheme scheme_from_json(const Json& j) {
  detail::check_header(j, "aqecm");
  AqecmScheme s;
  const Json& name = detail::field(j, "name", "$");
  if (!name.is_string()) detail::schema_fail("$.name", "expected a string");
  s.name = name.get<std::string>();
  const Json& msgs = detail::field(j, "messages", "$");
  if (!msgs.is_array() || msgs.size() < 2)
    detail::schema_fail("$.messages", "expected at least two message labels");
  for (const auto& m : msgs) {
    if (!m.is_string()) detail::schema_fail("$.messages", "labels must be strings");
    s.messages.push_back(m.get<std::string>());
  }
  const Json& kd = detail::field(j, "key_dist", "$");
  const Json& labels = detail::field(kd, "labels", "$.key_dist");
  const Json& probs = detail::field(kd, "probs", "$.key_dist");
  if (!labels.is_array() || !probs.is_array() || labels.size() != probs.size())
    detail::schema_fail("$.key_dist", "labels and probs must be arrays of equal length");
  for (const auto& l : labels) s.keys.labels.push_back(l.get<std::string>());
  for (const auto& p : probs) {
    if (!p.is_number()) detail::schema_fail("$.key_dist.probs", "entries must be numbers");
    s.keys.probs.push_back(p.get<double>());
  }
  try {
    s.keys.validate();
  } catch (const Error& e) {
    detail::schema_fail("$.key_dist", e.what());
  }
  const Json& shapes_j = detail::field(j, "shapes", "$");
  std::map<std::string, SpaceShape> shapes;
  if (!shapes_j.is_object()) detail::schema_fail("$.shapes", "expected an object");
  for (auto it = shapes_j.begin(); it != shapes_j.end(); ++it)
    shapes.emplace(it.key(), detail::shape_from_json(it.value(), "$.shapes." + it.key()));
  for (const char* need : {"msg", "cipher", "flag", "msg_flag"})
    if (shapes.find(need) == shapes.end())
      detail::schema_fail("$.shapes", std::string("missing shape '") + need + "'");
  s.msg_space = shapes.at("msg");
  s.cipher_space = shapes.at("cipher");
  s.flag_space = shapes.at("flag");
  std::vector<CMatrix> pool = detail::pool_from_json(detail::field(j, "matrices", "$"), "$.matrices");
  const Json& kc = detail::field(j, "keyed_channels", "$");
  const Json& enc = detail::field(kc, "enc", "$.keyed_channels");
  const Json& dec = detail::field(kc, "dec", "$.keyed_channels");
  if (!enc.is_array() || !dec.is_array() || enc.size() != s.keys.labels.size() ||
      dec.size() != s.keys.labels.size())
    detail::schema_fail("$.keyed_channels", "need one encoder and one decoder per key");
  int i = 0;
  for (const auto& c : enc)
    s.enc.push_back(detail::channel_from_json(
        c, pool, shapes, "$.keyed_channels.enc[" + std::to_string(i++) + "]"));
  i = 0;
  for (const auto& c : dec)
    s.dec.push_back(detail::channel_from_json(
        c, pool, shapes, "$.keyed_channels.dec[" + std::to_string(i++) + "]"));
  try {
    s.validate();
  } catch (const Error& e) {
    detail::schema_fail("$", e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Bare channels (custom attacks).

inline Json channel_to_json(const KrausChannel& c) {
  detail::MatrixPool pool;
  Json body = detail::channel_to_json(c, pool, "in", "out");
  return Json{{"schema", file_schema},
              {"kind", "channel"},
              {"shapes", Json{{"in", detail::shape_to_json(c.in_shape())},
                              {"out", detail::shape_to_json(c.out_shape())}}},
              {"matrices", std::move(pool.pool)},
              {"kraus", body["kraus"]}};
}

inline KrausChannel channel_from_json(const Json& j) {
  detail::check_header(j, "channel");
  const Json& shapes_j = detail::field(j, "shapes", "$");
  std::map<std::string, SpaceShape> shapes{
      {"in", detail::shape_from_json(detail::field(shapes_j, "in", "$.shapes"), "$.shapes.in")},
      {"out", detail::shape_from_json(detail::field(shapes_j, "out", "$.shapes"), "$.shapes.out")}};
  std::vector<CMatrix> pool = detail::pool_from_json(detail::field(j, "matrices", "$"), "$.matrices");
  Json body{{"in", "in"}, {"out", "out"}, {"kraus", detail::field(j, "kraus", "$")}};
  KrausChannel c = detail::channel_from_json(body, pool, shapes, "$");
  ChannelCheck ck = validate_channel(c);
  if (!ck.cptp) detail::schema_fail("$", "stored channel is not CPTP");
  return c;
}

// ---------------------------------------------------------------------------
// File round trips.

inline void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "schema violation: cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  require(out.good(), "schema violation: write to '" + path + "' failed");
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "schema violation: cannot open '" + path + "' for reading");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) detail::schema_fail(path, "not valid JSON");
  return j;
}

inline void save_scheme(const AqecmScheme& s, const std::string& path) {
  save_json(scheme_to_json(s), path);
}
inline AqecmScheme load_scheme(const std::string& path) { return scheme_from_json(load_json(path)); }
inline void save_channel(const KrausChannel& c, const std::string& path) {
  save_json(channel_to_json(c), path);
}
inline KrausChannel load_channel(const std::string& path) {
  return channel_from_json(load_json(path));
}

}  // namespace qte
