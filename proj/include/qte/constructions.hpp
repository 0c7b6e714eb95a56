#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qte/scheme.hpp"

namespace qte {

namespace detail {

inline CMatrix flag_state(int b) { return CMatrix::projector(CMatrix::ket(2, b)); }

inline SpaceShape flag_shape() { return SpaceShape::single("F", 2, true); }

// Basis relabeling between two shapes of equal dimension (an identity
// matrix wearing different shapes), used to merge or split message spaces.
inline KrausChannel reshape_channel(const SpaceShape& in, const SpaceShape& out) {
  require(in.dim() == out.dim(), "shape mismatch: reshape between unequal dimensions");
  return KrausChannel({CMatrix::identity(in.dim())}, in, out);
}

// AND / OR of two flag qubits as classical channels F (x) F -> F.
inline KrausChannel flag_and_channel() {
  return function_channel({0, 0, 0, 1}, flag_shape().concat(flag_shape()), flag_shape());
}
inline KrausChannel flag_or_channel() {
  return function_channel({0, 1, 1, 1}, flag_shape().concat(flag_shape()), flag_shape());
}

inline std::vector<std::string> bitstrings(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(1) << n);
  for (int v = 0; v < (1 << n); ++v) {
    std::string s(static_cast<size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      if (v & (1 << (n - 1 - i))) s[static_cast<size_t>(i)] = '1';
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Baseline schemes.

enum class Baseline {
  TRIV_REJECT,      // identity transport, decoder always rejects
  ID_ACCEPT,        // identity transport, decoder always accepts
  OTP_ACCEPT,       // classical group one-time pad, always accepts
  QOTP_ACCEPT,      // Pauli one-time pad on qubit registers, always accepts
  CONJ_PARITY_PAD   // conjugate-coded qubits plus a parity-masked bit
};

namespace detail {

inline AqecmScheme make_transport(std::vector<std::string> messages, int flag_value,
                                  const std::string& name) {
  AqecmScheme s;
  s.name = name;
  s.messages = std::move(messages);
  int n = static_cast<int>(s.messages.size());
  s.keys = KeyDist::point("-");
  s.msg_space = SpaceShape::single("M", n, true);
  s.cipher_space = SpaceShape::single("C", n, true);
  s.flag_space = flag_shape();
  KrausChannel e = reshape_channel(s.msg_space, s.cipher_space);
  KrausChannel d = tensor(reshape_channel(s.cipher_space, s.msg_space),
                          prep_channel(flag_state(flag_value), flag_shape()));
  s.enc.push_back(std::move(e));
  s.dec.push_back(std::move(d));
  return s;
}

}  // namespace detail

inline AqecmScheme triv_reject(std::vector<std::string> messages) {
  return detail::make_transport(std::move(messages), 0, "triv_reject");
}

inline AqecmScheme id_accept(std::vector<std::string> messages) {
  return detail::make_transport(std::move(messages), 1, "id_accept");
}

// Group one-time pad: uniform key k, ciphertext k * m, decoded by k^{-1} *.
inline AqecmScheme otp_accept(std::vector<std::string> messages, const GroupTable* group = nullptr) {
  GroupTable g = group ? *group : GroupTable::cyclic(messages);
  g.validate();
  require(g.size() == static_cast<int>(messages.size()), "alphabet mismatch: group vs messages");
  AqecmScheme s;
  s.name = "otp_accept";
  s.messages = std::move(messages);
  int n = static_cast<int>(s.messages.size());
  s.keys = KeyDist::uniform(s.messages);
  s.msg_space = SpaceShape::single("M", n, true);
  s.cipher_space = SpaceShape::single("C", n, true);
  s.flag_space = detail::flag_shape();
  for (int k = 0; k < n; ++k) {
    std::vector<int> fwd(static_cast<size_t>(n)), bwd(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) fwd[static_cast<size_t>(m)] = g.apply(k, m);
    int kinv = g.inverse(k);
    for (int c = 0; c < n; ++c) bwd[static_cast<size_t>(c)] = g.apply(kinv, c);
    s.enc.push_back(function_channel(fwd, s.msg_space, s.cipher_space));
    s.dec.push_back(tensor(function_channel(bwd, s.cipher_space, s.msg_space),
                           prep_channel(detail::flag_state(1), detail::flag_shape())));
  }
  return s;
}

// Pauli one-time pad on n qubits; messages are the 2^n basis strings.
inline AqecmScheme qotp_accept(int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= 4, "dimension cap exceeded: qubit pad size");
  AqecmScheme s;
  s.name = "qotp_accept";
  s.messages = detail::bitstrings(n_qubits);
  int dim = 1 << n_qubits;
  s.msg_space = SpaceShape::single("M", dim, true);
  {
    std::vector<Factor> qs;
    for (int i = 0; i < n_qubits; ++i) qs.emplace_back("C" + std::to_string(i), 2, false);
    s.cipher_space = SpaceShape(std::move(qs));
  }
  s.flag_space = detail::flag_shape();

  EMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;

  std::vector<std::string> key_labels;
  for (const auto& a : detail::bitstrings(n_qubits))
    for (const auto& b : detail::bitstrings(n_qubits)) key_labels.push_back(a + ":" + b);
  s.keys = KeyDist::uniform(key_labels);

  for (const auto& a : detail::bitstrings(n_qubits))
    for (const auto& b : detail::bitstrings(n_qubits)) {
      CMatrix u = CMatrix::identity(1);
      for (int i = 0; i < n_qubits; ++i) {
        EMatrix f = EMatrix::Identity(2, 2);
        if (a[static_cast<size_t>(i)] == '1') f = x * f;
        if (b[static_cast<size_t>(i)] == '1') f = f * z;  // X^a Z^b per qubit
        u = tensor_product(u, CMatrix(EMatrix(f)));
      }
      KrausChannel pad = unitary_channel(u, s.cipher_space, s.cipher_space);
      KrausChannel unpad = unitary_channel(u.dagger(), s.cipher_space, s.cipher_space);
      s.enc.push_back(compose(pad, detail::reshape_channel(s.msg_space, s.cipher_space)));
      s.dec.push_back(tensor(compose(detail::reshape_channel(s.cipher_space, s.msg_space), unpad),
                             prep_channel(detail::flag_state(1), detail::flag_shape())));
    }
  return s;
}

// Conjugate-coded pad: key (theta, d) uniform on {0,1}^n x {0,1}^n, bit m
// sent as H^theta|d> qubits plus the classical bit m xor parity(d); decode
// measures each qubit in its basis, accepts only the exact outcome d, and
// unmasks the bit with the measured parity. Perfectly correct.
inline AqecmScheme conj_parity_pad(int n_qubits) {
  require(n_qubits >= 1 && n_qubits <= 4, "dimension cap exceeded: conjugate pad size");
  AqecmScheme s;
  s.name = "conj_parity_pad";
  s.messages = {"0", "1"};
  s.msg_space = SpaceShape::single("M", 2, true);
  {
    std::vector<Factor> fs;
    for (int i = 0; i < n_qubits; ++i) fs.emplace_back("Q" + std::to_string(i), 2, false);
    fs.emplace_back("B", 2, true);
    s.cipher_space = SpaceShape(std::move(fs));
  }
  s.flag_space = detail::flag_shape();

  EMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);

  auto qubit_ket = [&](int basis, int bit) {
    EMatrix v = EMatrix::Zero(2, 1);
    v(bit, 0) = 1.0;
    if (basis) v = h * v;
    return CMatrix(EMatrix(std::move(v)));
  };
  auto parity = [](const std::string& bits) {
    int p = 0;
    for (char c : bits) p ^= (c == '1');
    return p;
  };

  auto thetas = detail::bitstrings(n_qubits);
  std::vector<std::string> key_labels;
  for (const auto& th : thetas)
    for (const auto& d : thetas) key_labels.push_back(th + ":" + d);
  s.keys = KeyDist::uniform(key_labels);

  int cd = s.cipher_space.dim();
  for (const auto& th : thetas)
    for (const auto& d : thetas) {
      // Encoder: isometry |m> -> |psi_{theta,d}> (x) |m xor parity(d)>.
      CMatrix psi = CMatrix::identity(1);
      for (int i = 0; i < n_qubits; ++i)
        psi = tensor_product(psi, qubit_ket(th[static_cast<size_t>(i)] == '1',
                                            d[static_cast<size_t>(i)] == '1'));
      EMatrix enc_k = EMatrix::Zero(cd, 2);
      for (int m = 0; m < 2; ++m) {
        CMatrix cell = tensor_product(psi, CMatrix::ket(2, m ^ parity(d)));
        enc_k.col(m) = cell.eigen();
      }
      s.enc.push_back(KrausChannel({CMatrix(EMatrix(enc_k))}, s.msg_space, s.cipher_space));

      // Decoder: measure qubit i in basis theta_i, accept iff outcome = d,
      // output bit = transported bit xor parity(outcome).
      std::vector<CMatrix> kraus;
      SpaceShape out = s.msg_space.concat(s.flag_space);
      for (int o = 0; o < (1 << n_qubits); ++o)
        for (int c = 0; c < 2; ++c) {
          CMatrix bra = CMatrix::identity(1);
          int par_o = 0;
          bool accept = true;
          for (int i = 0; i < n_qubits; ++i) {
            int oi = (o >> (n_qubits - 1 - i)) & 1;
            par_o ^= oi;
            if (oi != (d[static_cast<size_t>(i)] == '1')) accept = false;
            bra = tensor_product(bra, qubit_ket(th[static_cast<size_t>(i)] == '1', oi).dagger());
          }
          bra = tensor_product(bra, CMatrix::ket(2, c).dagger());
          CMatrix out_ket = tensor_product(CMatrix::ket(2, c ^ par_o), CMatrix::ket(2, accept ? 1 : 0));
          kraus.push_back(CMatrix(EMatrix(out_ket.eigen() * bra.eigen())));
        }
      s.dec.push_back(KrausChannel(std::move(kraus), s.cipher_space, out));
    }
  return s;
}

inline AqecmScheme baseline_scheme(Baseline kind, int size_param) {
  switch (kind) {
    case Baseline::TRIV_REJECT: {
      std::vector<std::string> msgs;
      for (int i = 0; i < size_param; ++i) msgs.push_back(std::to_string(i));
      return triv_reject(std::move(msgs));
    }
    case Baseline::ID_ACCEPT: {
      std::vector<std::string> msgs;
      for (int i = 0; i < size_param; ++i) msgs.push_back(std::to_string(i));
      return id_accept(std::move(msgs));
    }
    case Baseline::OTP_ACCEPT: {
      std::vector<std::string> msgs;
      for (int i = 0; i < size_param; ++i) msgs.push_back(std::to_string(i));
      return otp_accept(std::move(msgs));
    }
    case Baseline::QOTP_ACCEPT:
      return qotp_accept(size_param);
    case Baseline::CONJ_PARITY_PAD:
      return conj_parity_pad(size_param);
  }
  throw Error("schema violation: unknown baseline");
}

// ---------------------------------------------------------------------------
// Parallel composition.

// S' (x) S'': product keys, product messages, both ciphertexts sent; the
// decoder runs both component decoders and ANDs the two flags.
inline AqecmScheme parallel_compose(const AqecmScheme& a, const AqecmScheme& b) {
  AqecmScheme s;
  s.name = "parallel(" + a.name + "," + b.name + ")";
  for (const auto& ma : a.messages)
    for (const auto& mb : b.messages) s.messages.push_back(ma + "," + mb);
  s.keys = a.keys.product(b.keys);
  s.msg_space = SpaceShape::single("M", a.msg_space.dim() * b.msg_space.dim(), true);
  s.cipher_space = a.cipher_space.concat(b.cipher_space);
  s.flag_space = detail::flag_shape();

  SpaceShape mm = a.msg_space.concat(b.msg_space);
  KrausChannel split = detail::reshape_channel(s.msg_space, mm);
  KrausChannel merge = detail::reshape_channel(mm, s.msg_space);

  // (M', F, M'', F) -> (M', M'', F, F)
  SpaceShape mfmf = a.msg_space.concat(detail::flag_shape())
                        .concat(b.msg_space)
                        .concat(detail::flag_shape());
  KrausChannel reorder = swap_channel(mfmf, {0, 2, 1, 3});
  KrausChannel and_flags =
      tensor(identity_channel(mm), detail::flag_and_channel());
  KrausChannel finish = compose(tensor(merge, identity_channel(detail::flag_shape())),
                                compose(and_flags, reorder));

  for (int ka = 0; ka < a.keys.size(); ++ka)
    for (int kb = 0; kb < b.keys.size(); ++kb) {
      const KrausChannel& ea = a.enc[static_cast<size_t>(ka)];
      const KrausChannel& eb = b.enc[static_cast<size_t>(kb)];
      const KrausChannel& da = a.dec[static_cast<size_t>(ka)];
      const KrausChannel& db = b.dec[static_cast<size_t>(kb)];
      s.enc.push_back(compose(tensor(ea, eb), split));
      s.dec.push_back(compose(finish, tensor(da, db)));
    }
  return s;
}

inline AqecmScheme nfold(const AqecmScheme& s, int n) {
  require(n >= 1, "shape mismatch: fold count");
  AqecmScheme acc = s;
  for (int i = 1; i < n; ++i) acc = parallel_compose(acc, s);
  acc.name = "nfold(" + s.name + "," + std::to_string(n) + ")";
  return acc;
}

// ---------------------------------------------------------------------------
// Doubling (the decode-twice counterexample construction).

// Keys are pairs; encoding stores the message under both keys alongside a
// selection qubit |0>; the decoder decodes both slots, ANDs the flags, and
// a selector keeps the message slot named by the selection qubit.
inline AqecmScheme double_of(const AqecmScheme& inner) {
  AqecmScheme s;
  s.name = "double(" + inner.name + ")";
  s.messages = inner.messages;
  s.keys = inner.keys.product(inner.keys);
  s.msg_space = inner.msg_space;
  SpaceShape sel = SpaceShape::single("S", 2, false);
  s.cipher_space = sel.concat(inner.cipher_space).concat(inner.cipher_space);
  s.flag_space = detail::flag_shape();

  int md = inner.msg_space.dim();
  SpaceShape mm = inner.msg_space.concat(inner.msg_space);

  // Copy isometry |m> -> |m, m>.
  EMatrix cp = EMatrix::Zero(static_cast<long long>(md) * md, md);
  for (int m = 0; m < md; ++m) cp(static_cast<long long>(m) * md + m, m) = 1.0;
  KrausChannel copy(
      {CMatrix(std::move(cp))}, inner.msg_space, mm);

  // Selector L(S (x) M (x) M) -> L(M): on |0> keep the first slot, on |1>
  // the second, tracing out the other.
  std::vector<CMatrix> sel_kraus;
  {
    SpaceShape smm = sel.concat(mm);
    int full = smm.dim();
    for (int branch = 0; branch < 2; ++branch)
      for (int j = 0; j < md; ++j) {
        EMatrix k = EMatrix::Zero(md, full);
        for (int kept = 0; kept < md; ++kept) {
          int m1 = branch == 0 ? kept : j;
          int m2 = branch == 0 ? j : kept;
          k(kept, (static_cast<long long>(branch) * md + m1) * md + m2) = 1.0;
        }
        sel_kraus.push_back(CMatrix(std::move(k)));
      }
  }
  KrausChannel selector(std::move(sel_kraus), sel.concat(mm), inner.msg_space);

  // Joint two-slot decoder with AND-ed flags: C (x) C -> M (x) M (x) F.
  SpaceShape mfmf = inner.msg_space.concat(detail::flag_shape())
                        .concat(inner.msg_space)
                        .concat(detail::flag_shape());
  KrausChannel reorder = swap_channel(mfmf, {0, 2, 1, 3});
  KrausChannel and_flags = tensor(identity_channel(mm), detail::flag_and_channel());

  for (int k0 = 0; k0 < inner.keys.size(); ++k0)
    for (int k1 = 0; k1 < inner.keys.size(); ++k1) {
      const KrausChannel& e0 = inner.enc[static_cast<size_t>(k0)];
      const KrausChannel& e1 = inner.enc[static_cast<size_t>(k1)];
      KrausChannel body = compose(tensor(e0, e1), copy);
      s.enc.push_back(compose(
          tensor(prep_channel(detail::flag_state(0), sel),
                 identity_channel(inner.cipher_space.concat(inner.cipher_space))),
          body));

      const KrausChannel& d0 = inner.dec[static_cast<size_t>(k0)];
      const KrausChannel& d1 = inner.dec[static_cast<size_t>(k1)];
      KrausChannel joint = compose(and_flags, compose(reorder, tensor(d0, d1)));
      // Id_S (x) joint, then selector on (S, M, M) keeping the flag.
      KrausChannel lifted = tensor(identity_channel(sel), joint);
      KrausChannel pick = tensor(selector, identity_channel(detail::flag_shape()));
      s.dec.push_back(compose(pick, lifted));
    }
  return s;
}

// ---------------------------------------------------------------------------
// Message-randomizing serial composition over a finite group.

// S * S': a uniform pad p is drawn, S carries p and S' carries p * m; the
// decoder decodes both, un-applies the pad coherently, and ORs the flags.
inline AqecmScheme star_of(const AqecmScheme& a, const AqecmScheme& b,
                           const GroupTable* group = nullptr) {
  require(a.messages == b.messages, "alphabet mismatch: star components");
  GroupTable g = group ? *group : GroupTable::cyclic(a.messages);
  g.validate();
  require(g.size() == static_cast<int>(a.messages.size()), "alphabet mismatch: group size");

  AqecmScheme s;
  s.name = "star(" + a.name + "," + b.name + ")";
  s.messages = a.messages;
  s.keys = a.keys.product(b.keys);
  s.msg_space = a.msg_space;
  s.cipher_space = a.cipher_space.concat(b.cipher_space);
  s.flag_space = detail::flag_shape();

  int n = static_cast<int>(s.messages.size());
  SpaceShape mm = s.msg_space.concat(s.msg_space);

  // U: |p, m> -> |p, p*m> and its inverse.
  EMatrix u = EMatrix::Zero(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int m = 0; m < n; ++m) u(p * n + g.apply(p, m), p * n + m) = 1.0;
  CMatrix ustar(std::move(u));

  // Pad-averaged encoder: Kraus (1/sqrt n) (Ka (x) Kb) U (|p> (x) I).
  for (int ka = 0; ka < a.keys.size(); ++ka)
    for (int kb = 0; kb < b.keys.size(); ++kb) {
      std::vector<CMatrix> ops;
      for (int p = 0; p < n; ++p) {
        EMatrix embed = EMatrix::Zero(n * n, n);  // |p> (x) I
        for (int m = 0; m < n; ++m) embed(p * n + m, m) = 1.0;
        EMatrix front = ustar.eigen() * embed / std::sqrt(static_cast<double>(n));
        for (const auto& kae : a.enc[static_cast<size_t>(ka)].kraus())
          for (const auto& kbe : b.enc[static_cast<size_t>(kb)].kraus())
            ops.push_back(CMatrix(EMatrix(tensor_product(kae, kbe).eigen() * front)));
      }
      s.enc.push_back(KrausChannel(std::move(ops), s.msg_space, s.cipher_space));
    }

  // Combiner W: (M, F, M, F) -> (M, F): reorder, OR the flags, undo the
  // group action, drop the pad slot.
  SpaceShape mfmf = s.msg_space.concat(detail::flag_shape())
                        .concat(s.msg_space)
                        .concat(detail::flag_shape());
  KrausChannel reorder = swap_channel(mfmf, {0, 2, 1, 3});
  KrausChannel or_flags = tensor(identity_channel(mm), detail::flag_or_channel());
  KrausChannel unstar =
      tensor(unitary_channel(ustar.dagger(), mm), identity_channel(detail::flag_shape()));
  KrausChannel drop_pad = tensor(discard_factors(mm, {0}), identity_channel(detail::flag_shape()));
  KrausChannel combiner = compose(drop_pad, compose(unstar, compose(or_flags, reorder)));

  for (int ka = 0; ka < a.keys.size(); ++ka)
    for (int kb = 0; kb < b.keys.size(); ++kb)
      s.dec.push_back(compose(
          combiner, tensor(a.dec[static_cast<size_t>(ka)], b.dec[static_cast<size_t>(kb)])));
  return s;
}

// The xor-pad composition S * Triv over the two-element group.
inline AqecmScheme xor_pad(const AqecmScheme& s) {
  require(s.message_count() == 2, "alphabet mismatch: xor pad needs binary messages");
  return star_of(s, triv_reject(s.messages));
}

// ---------------------------------------------------------------------------
// Message-alphabet restriction along an injection.

// s has message alphabet M'; inj embeds a smaller alphabet M into M' and
// retr maps back with retr(inj(m)) = m. The result encrypts M.
inline AqecmScheme extend_messages(const AqecmScheme& s, std::vector<std::string> messages,
                                   const std::vector<int>& inj, const std::vector<int>& retr) {
  int n_new = static_cast<int>(messages.size());
  require(static_cast<int>(inj.size()) == n_new, "alphabet mismatch: injection length");
  require(static_cast<int>(retr.size()) == s.message_count(), "alphabet mismatch: retraction length");
  for (int m = 0; m < n_new; ++m) {
    require(inj[static_cast<size_t>(m)] >= 0 && inj[static_cast<size_t>(m)] < s.message_count(),
            "alphabet mismatch: injection range");
    require(retr[static_cast<size_t>(inj[static_cast<size_t>(m)])] == m,
            "alphabet mismatch: retraction does not invert the injection");
  }
  AqecmScheme out;
  out.name = "restrict(" + s.name + ")";
  out.messages = std::move(messages);
  out.keys = s.keys;
  out.msg_space = SpaceShape::single("M", n_new, true);
  out.cipher_space = s.cipher_space;
  out.flag_space = s.flag_space;
  KrausChannel embed = function_channel(inj, out.msg_space, s.msg_space);
  KrausChannel back = tensor(function_channel(retr, s.msg_space, out.msg_space),
                             identity_channel(s.flag_space));
  for (int k = 0; k < s.keys.size(); ++k) {
    out.enc.push_back(compose(s.enc[static_cast<size_t>(k)], embed));
    out.dec.push_back(compose(back, s.dec[static_cast<size_t>(k)]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forgetting the flag.

inline QecmScheme drop_flag(const AqecmScheme& s) {
  QecmScheme out;
  out.name = "drop_flag(" + s.name + ")";
  out.messages = s.messages;
  out.keys = s.keys;
  out.msg_space = s.msg_space;
  out.cipher_space = s.cipher_space;
  out.enc = s.enc;
  SpaceShape mf = s.msg_space.concat(s.flag_space);
  KrausChannel forget = discard_factors(mf, {s.msg_space.factor_count()});
  for (int k = 0; k < s.keys.size(); ++k)
    out.dec.push_back(compose(forget, s.dec[static_cast<size_t>(k)]));
  return out;
}

// ---------------------------------------------------------------------------
// Revocation from a flagged scheme, and back.

// Rev(S): the ciphertext itself is the revocation token; verifying runs
// the decoder and keeps only the flag, decoding keeps only the message.
inline QecmrScheme rev_of(const AqecmScheme& s) {
  QecmrScheme out;
  out.name = "rev(" + s.name + ")";
  out.messages = s.messages;
  out.keys = s.keys;
  out.msg_space = s.msg_space;
  out.cipher_space = s.cipher_space;
  out.rev_space = s.cipher_space;
  out.flag_space = s.flag_space;
  out.enc = s.enc;
  out.rev = identity_channel(s.cipher_space);
  SpaceShape mf = s.msg_space.concat(s.flag_space);
  KrausChannel keep_msg = discard_factors(mf, {s.msg_space.factor_count()});
  KrausChannel keep_flag = discard_factors(mf, {0});
  for (int k = 0; k < s.keys.size(); ++k) {
    out.dec.push_back(compose(keep_msg, s.dec[static_cast<size_t>(k)]));
    out.ver.push_back(compose(keep_flag, s.dec[static_cast<size_t>(k)]));
  }
  return out;
}

// TE(S): decode a revocation scheme gently. The verification-of-revocation
// channel V_k o R has classical output; its coherent gentle measurement
// produces the verdict register while nearly preserving the ciphertext,
// which is then decoded normally. The verdict register is the flag.
inline AqecmScheme te_of(const QecmrScheme& s) {
  AqecmScheme out;
  out.name = "te(" + s.name + ")";
  out.messages = s.messages;
  out.keys = s.keys;
  out.msg_space = s.msg_space;
  out.cipher_space = s.cipher_space;
  out.flag_space = detail::flag_shape();
  out.enc = s.enc;
  for (int k = 0; k < s.keys.size(); ++k) {
    KrausChannel watch = compose(s.ver[static_cast<size_t>(k)], s.rev);  // C -> F, classical
    KrausChannel gentle = cgm_of_channel(watch, "F");                    // C -> C (x) F
    out.dec.push_back(
        compose(tensor(s.dec[static_cast<size_t>(k)], identity_channel(detail::flag_shape())),
                gentle));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantum money from an authenticating scheme.

// Banknotes are encodings of uniformly chosen messages under the scheme's
// keys; the verifier accepts a state iff the keyed decoder accepts it and
// returns the minted message. In the strong variant the (key, message)
// pairs are conditioned on near-perfect decodability (threshold gamma);
// if no pair qualifies, minting falls back to uniform keys with an
// always-accept verifier.
inline QmScheme qm_of(const AqecmScheme& s, double gamma, bool weak = false) {
  QmScheme out;
  out.name = std::string(weak ? "qm_weak(" : "qm(") + s.name + ")";
  out.note_space = s.cipher_space;
  int cd = s.cipher_space.dim();
  long long budget = static_cast<long long>(s.keys.size()) * s.message_count() *
                     static_cast<long long>(cd) * cd;
  require(budget <= limits::max_matrix_entries, "dimension cap exceeded: money scheme notes");

  SpaceShape mf = s.msg_space.concat(s.flag_space);
  std::vector<std::string> labels;
  std::vector<double> probs;
  auto add_pair = [&](int k, int m, double pr) {
    labels.push_back(s.keys.labels[static_cast<size_t>(k)] + "/" + s.messages[static_cast<size_t>(m)]);
    probs.push_back(pr);
    out.notes.push_back(s.enc[static_cast<size_t>(k)].apply(s.message_state(m)));
    CMatrix target = tensor_product(CMatrix::projector(CMatrix::ket(s.msg_space.dim(), m)),
                                    detail::flag_state(1));
    CMatrix accept = s.dec[static_cast<size_t>(k)].apply_adjoint(target);
    Povm povm;
    povm.space = s.cipher_space;
    povm.effects = {CMatrix::identity(cd) - accept, accept};
    out.ver.push_back(measure_channel(povm, "F"));
  };

  if (weak) {
    for (int k = 0; k < s.keys.size(); ++k) {
      if (s.keys.probs[static_cast<size_t>(k)] <= 0.0) continue;
      for (int m = 0; m < s.message_count(); ++m)
        add_pair(k, m, s.keys.probs[static_cast<size_t>(k)] / s.message_count());
    }
    out.keys.labels = std::move(labels);
    out.keys.probs = std::move(probs);
    out.keys.validate();
    return out;
  }

  // Strong variant: restrict to pairs decoding with probability >= 1-gamma.
  double total = 0.0;
  std::vector<std::pair<int, int>> good;
  for (int k = 0; k < s.keys.size(); ++k) {
    if (s.keys.probs[static_cast<size_t>(k)] <= 0.0) continue;
    for (int m = 0; m < s.message_count(); ++m) {
      CMatrix c = s.enc[static_cast<size_t>(k)].apply(s.message_state(m));
      double acc = dbar_apply(s, k, c)(m, m).real();
      if (acc >= 1.0 - gamma - tol::probability) {
        good.emplace_back(k, m);
        total += s.keys.probs[static_cast<size_t>(k)] / s.message_count();
      }
    }
  }
  if (good.empty()) {
    // Fallback: uniform pairs, verifier accepts everything.
    for (int k = 0; k < s.keys.size(); ++k)
      for (int m = 0; m < s.message_count(); ++m) {
        labels.push_back(s.keys.labels[static_cast<size_t>(k)] + "/" +
                         s.messages[static_cast<size_t>(m)]);
        probs.push_back(1.0 / (static_cast<double>(s.keys.size()) * s.message_count()));
        out.notes.push_back(s.enc[static_cast<size_t>(k)].apply(s.message_state(m)));
        Povm povm;
        povm.space = s.cipher_space;
        povm.effects = {CMatrix::zero(cd, cd), CMatrix::identity(cd)};
        out.ver.push_back(measure_channel(povm, "F"));
      }
    out.keys.labels = std::move(labels);
    out.keys.probs = std::move(probs);
    out.keys.validate();
    return out;
  }
  for (const auto& [k, m] : good)
    add_pair(k, m, s.keys.probs[static_cast<size_t>(k)] / s.message_count() / total);
  out.keys.labels = std::move(labels);
  out.keys.probs = std::move(probs);
  out.keys.validate();
  return out;
}

}  // namespace qte
