#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qte/constructions.hpp"

namespace qte {

// Evaluated construction expression: one of the four scheme families.
struct SchemeValue {
  enum class Kind { aqecm, qecm, qecmr, qm };
  Kind kind = Kind::aqecm;
  AqecmScheme aqecm;
  QecmScheme qecm;
  QecmrScheme qecmr;
  QmScheme qm;

  const char* kind_name() const {
    switch (kind) {
      case Kind::aqecm: return "authenticating scheme";
      case Kind::qecm: return "plain scheme";
      case Kind::qecmr: return "revocation scheme";
      case Kind::qm: return "money scheme";
    }
    return "";
  }
};

namespace detail {

[[noreturn]] inline void expr_fail(const std::string& what) {
  throw Error("malformed expression: " + what);
}

struct ExprLexer {
  std::string src;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) expr_fail(std::string("expected '") + c + "' at offset " + std::to_string(pos));
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    if (pos == start) expr_fail("expected a name at offset " + std::to_string(start));
    return src.substr(start, pos - start);
  }
  double number() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) ||
                                src[pos] == '.' || src[pos] == '-' || src[pos] == '+' ||
                                src[pos] == 'e' || src[pos] == 'E'))
      ++pos;
    if (pos == start) expr_fail("expected a number at offset " + std::to_string(start));
    try {
      size_t used = 0;
      double v = std::stod(src.substr(start, pos - start), &used);
      if (used != pos - start) expr_fail("bad number at offset " + std::to_string(start));
      return v;
    } catch (const Error&) {
      throw;
    } catch (...) {
      expr_fail("bad number at offset " + std::to_string(start));
    }
  }
  bool number_starts() {
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
  }
};

inline std::vector<std::string> numbered_messages(int m) {
  require(m >= 2 && m <= 16, "alphabet mismatch: message count must lie in [2, 16]");
  std::vector<std::string> out;
  for (int i = 0; i < m; ++i) out.push_back(std::to_string(i));
  return out;
}

inline int expr_int(double v, const std::string& name) {
  double r = std::round(v);
  if (std::abs(v - r) > 1e-12) expr_fail("parameter '" + name + "' must be an integer");
  return static_cast<int>(r);
}

struct ExprCall {
  std::string name;
  std::vector<SchemeValue> schemes;
  std::vector<std::pair<std::string, double>> named;  // name may be "" for positional
};

inline const AqecmScheme& want_aqecm(const SchemeValue& v, const std::string& who) {
  if (v.kind != SchemeValue::Kind::aqecm)
    expr_fail(who + " needs an authenticating scheme argument, got a " +
              std::string(v.kind_name()));
  return v.aqecm;
}

// Resolve named plus positional parameters against the declared order.
inline std::map<std::string, double> bind_params(const ExprCall& c,
                                                 const std::vector<std::pair<std::string, double>>& decl) {
  std::map<std::string, double> out;
  for (const auto& d : decl) out[d.first] = d.second;
  size_t next_positional = 0;
  for (const auto& [name, value] : c.named) {
    std::string key = name;
    if (key.empty()) {
      if (next_positional >= decl.size()) expr_fail(c.name + ": too many numeric arguments");
      key = decl[next_positional++].first;
    } else if (out.find(key) == out.end()) {
      expr_fail(c.name + ": unknown parameter '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

inline SchemeValue eval_call(ExprCall c) {
  auto schemes_exactly = [&](size_t n) {
    if (c.schemes.size() != n)
      expr_fail(c.name + ": expected " + std::to_string(n) + " scheme argument(s), got " +
                std::to_string(c.schemes.size()));
  };
  SchemeValue out;
  if (c.name == "triv_reject" || c.name == "id_accept" || c.name == "otp_accept") {
    schemes_exactly(0);
    auto p = bind_params(c, {{"m", 2.0}});
    auto msgs = numbered_messages(expr_int(p["m"], "m"));
    out.aqecm = c.name == "triv_reject" ? triv_reject(std::move(msgs))
                : c.name == "id_accept" ? id_accept(std::move(msgs))
                                        : otp_accept(std::move(msgs));
  } else if (c.name == "qotp_accept") {
    schemes_exactly(0);
    auto p = bind_params(c, {{"n", 1.0}});
    out.aqecm = qotp_accept(expr_int(p["n"], "n"));
  } else if (c.name == "conj_parity_pad") {
    schemes_exactly(0);
    auto p = bind_params(c, {{"n", 2.0}});
    out.aqecm = conj_parity_pad(expr_int(p["n"], "n"));
  } else if (c.name == "parallel") {
    schemes_exactly(2);
    bind_params(c, {});
    out.aqecm = parallel_compose(want_aqecm(c.schemes[0], c.name), want_aqecm(c.schemes[1], c.name));
  } else if (c.name == "nfold") {
    schemes_exactly(1);
    auto p = bind_params(c, {{"n", 2.0}});
    out.aqecm = nfold(want_aqecm(c.schemes[0], c.name), expr_int(p["n"], "n"));
  } else if (c.name == "double") {
    schemes_exactly(1);
    bind_params(c, {});
    out.aqecm = double_of(want_aqecm(c.schemes[0], c.name));
  } else if (c.name == "star") {
    schemes_exactly(2);
    bind_params(c, {});
    out.aqecm = star_of(want_aqecm(c.schemes[0], c.name), want_aqecm(c.schemes[1], c.name));
  } else if (c.name == "xor_pad") {
    schemes_exactly(1);
    bind_params(c, {});
    out.aqecm = xor_pad(want_aqecm(c.schemes[0], c.name));
  } else if (c.name == "drop_flag") {
    schemes_exactly(1);
    bind_params(c, {});
    out.kind = SchemeValue::Kind::qecm;
    out.qecm = drop_flag(want_aqecm(c.schemes[0], c.name));
  } else if (c.name == "rev") {
    schemes_exactly(1);
    bind_params(c, {});
    out.kind = SchemeValue::Kind::qecmr;
    out.qecmr = rev_of(want_aqecm(c.schemes[0], c.name));
  } else if (c.name == "te") {
    schemes_exactly(1);
    bind_params(c, {});
    if (c.schemes[0].kind != SchemeValue::Kind::qecmr)
      expr_fail("te needs a revocation scheme argument, got a " +
                std::string(c.schemes[0].kind_name()));
    out.aqecm = te_of(c.schemes[0].qecmr);
  } else if (c.name == "qm") {
    schemes_exactly(1);
    auto p = bind_params(c, {{"gamma", 0.0}, {"weak", 0.0}});
    out.kind = SchemeValue::Kind::qm;
    out.qm = qm_of(want_aqecm(c.schemes[0], c.name), p["gamma"], p["weak"] != 0.0);
  } else {
    expr_fail("unknown construction '" + c.name + "'");
  }
  return out;
}

inline SchemeValue parse_call(ExprLexer& lex) {
  ExprCall call;
  call.name = lex.ident();
  if (lex.eat('(')) {
    if (!lex.eat(')')) {
      do {
        if (lex.number_starts()) {
          call.named.emplace_back("", lex.number());
        } else {
          size_t mark = lex.pos;
          std::string id = lex.ident();
          if (lex.eat('=')) {
            call.named.emplace_back(id, lex.number());
          } else {
            lex.pos = mark;
            call.schemes.push_back(parse_call(lex));
          }
        }
      } while (lex.eat(','));
      lex.expect(')');
    }
  }
  return eval_call(std::move(call));
}

}  // namespace detail

// Evaluate a construction expression such as
//   star(otp_accept, triv_reject)
//   xor_pad(conj_parity_pad(n=3))
//   qm(double(conj_parity_pad(n=1)), gamma=0)
inline SchemeValue eval_scheme_expr(const std::string& text) {
  detail::ExprLexer lex{text, 0};
  SchemeValue v = detail::parse_call(lex);
  if (!lex.at_end())
    detail::expr_fail("trailing input at offset " + std::to_string(lex.pos));
  return v;
}

}  // namespace qte
