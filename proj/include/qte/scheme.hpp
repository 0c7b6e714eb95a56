#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qte/channel.hpp"

namespace qte {

// Finite distribution over key labels.
struct KeyDist {
  std::vector<std::string> labels;
  std::vector<double> probs;

  int size() const { return static_cast<int>(labels.size()); }

  void validate() const {
    require(!labels.empty() && labels.size() == probs.size(),
            "not a probability distribution: key labels vs probabilities");
    double sum = 0.0;
    for (double p : probs) {
      require(p >= -tol::probability, "not a probability distribution: negative key probability");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= tol::probability,
            "not a probability distribution: key probabilities sum");
  }

  static KeyDist uniform(std::vector<std::string> labels) {
    KeyDist k;
    k.probs.assign(labels.size(), 1.0 / static_cast<double>(labels.size()));
    k.labels = std::move(labels);
    return k;
  }

  static KeyDist point(std::string label) {
    KeyDist k;
    k.labels.push_back(std::move(label));
    k.probs.push_back(1.0);
    return k;
  }

  // Independent product; labels joined as "a|b".
  KeyDist product(const KeyDist& o) const {
    KeyDist out;
    out.labels.reserve(labels.size() * o.labels.size());
    out.probs.reserve(labels.size() * o.labels.size());
    for (size_t i = 0; i < labels.size(); ++i)
      for (size_t j = 0; j < o.labels.size(); ++j) {
        out.labels.push_back(labels[i] + "|" + o.labels[j]);
        out.probs.push_back(probs[i] * o.probs[j]);
      }
    return out;
  }
};

// Authenticating encryption scheme: keyed encoders M -> C and decoders
// C -> M (x) F with a dim-2 flag register whose |1> outcome means accept.
struct AqecmScheme {
  std::string name;
  std::vector<std::string> messages;
  KeyDist keys;
  SpaceShape msg_space;     // single classical factor, dim = |messages|
  SpaceShape cipher_space;
  SpaceShape flag_space;    // single factor of dim 2
  std::vector<KrausChannel> enc;  // indexed by key
  std::vector<KrausChannel> dec;  // indexed by key

  int message_count() const { return static_cast<int>(messages.size()); }
  int flag_factor() const { return msg_space.factor_count(); }  // position of F in M (x) F

  CMatrix message_state(int m) const {
    require(m >= 0 && m < message_count(), "alphabet mismatch: message index");
    CMatrix s = CMatrix::projector(CMatrix::ket(msg_space.dim(), m));
    s.set_shapes(msg_space, msg_space);
    return s;
  }

  void validate() const {
    keys.validate();
    require(message_count() >= 2, "alphabet mismatch: need at least two messages");
    require(msg_space.dim() == message_count(), "alphabet mismatch: message space dimension");
    require(flag_space.dim() == 2 && flag_space.factor_count() == 1,
            "shape mismatch: flag space must be one dim-2 factor");
    require(enc.size() == keys.labels.size() && dec.size() == keys.labels.size(),
            "shape mismatch: one encoder and decoder per key");
    for (size_t k = 0; k < enc.size(); ++k) {
      require(enc[k].in_shape().dim() == msg_space.dim() &&
                  enc[k].out_shape().dim() == cipher_space.dim(),
              "shape mismatch: encoder spaces");
      require(dec[k].in_shape().dim() == cipher_space.dim() &&
                  dec[k].out_shape().dim() == msg_space.dim() * 2,
              "shape mismatch: decoder spaces");
      ChannelCheck ce = validate_channel(enc[k]);
      require(ce.cptp, "not CPTP: encoder for key " + keys.labels[k]);
      ChannelCheck cd = validate_channel(dec[k]);
      require(cd.cptp, "not CPTP: decoder for key " + keys.labels[k]);
    }
  }
};

// Plain encryption scheme: decoders C -> M, no flag.
struct QecmScheme {
  std::string name;
  std::vector<std::string> messages;
  KeyDist keys;
  SpaceShape msg_space;
  SpaceShape cipher_space;
  std::vector<KrausChannel> enc;
  std::vector<KrausChannel> dec;

  int message_count() const { return static_cast<int>(messages.size()); }
  CMatrix message_state(int m) const {
    require(m >= 0 && m < message_count(), "alphabet mismatch: message index");
    CMatrix s = CMatrix::projector(CMatrix::ket(msg_space.dim(), m));
    s.set_shapes(msg_space, msg_space);
    return s;
  }
};

// Scheme with revocation: an unkeyed revocation channel C -> R and keyed
// verifiers R -> F alongside keyed decoders C -> M.
struct QecmrScheme {
  std::string name;
  std::vector<std::string> messages;
  KeyDist keys;
  SpaceShape msg_space;
  SpaceShape cipher_space;
  SpaceShape rev_space;
  SpaceShape flag_space;
  std::vector<KrausChannel> enc;  // M -> C
  std::vector<KrausChannel> dec;  // C -> M
  KrausChannel rev;               // C -> R, unkeyed
  std::vector<KrausChannel> ver;  // R -> F

  int message_count() const { return static_cast<int>(messages.size()); }
  CMatrix message_state(int m) const {
    require(m >= 0 && m < message_count(), "alphabet mismatch: message index");
    CMatrix s = CMatrix::projector(CMatrix::ket(msg_space.dim(), m));
    s.set_shapes(msg_space, msg_space);
    return s;
  }

  // Certified-deletion style: the verifier only reads the classical
  // content of the revocation register (V = V o Dephase_R for all keys).
  bool certified_deletion(double tolerance = tol::completeness) const {
    KrausChannel deph = dephase_channel(rev_space);
    for (const auto& v : ver)
      if ((compose(v, deph).choi() - v.choi()).norm_max() > tolerance) return false;
    return true;
  }
};

// Quantum money: per-key banknote states and verification channels N -> F.
struct QmScheme {
  std::string name;
  KeyDist keys;
  SpaceShape note_space;
  std::vector<CMatrix> notes;     // indexed by key
  std::vector<KrausChannel> ver;  // indexed by key
};

// ---------------------------------------------------------------------------
// Flag-conditioned channel applications.

// (I_M (x) <1|_F) D(rho) (I_M (x) |1>_F): the accepted branch of a decode,
// a completely positive trace non-increasing map on M.
inline CMatrix dbar_apply(const AqecmScheme& s, int k, const CMatrix& rho_c) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  CMatrix full = s.dec[static_cast<size_t>(k)].apply(rho_c);
  full.set_shapes(s.msg_space.concat(s.flag_space), s.msg_space.concat(s.flag_space));
  return project_factor(full, s.msg_space.factor_count(), 1);
}

// Same conditioning with a trailing auxiliary register kept: rho lives on
// C (x) A and the result on M (x) A.
inline CMatrix dbar_apply_with_aux(const AqecmScheme& s, int k, const CMatrix& rho_ca,
                                   const SpaceShape& aux) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  KrausChannel lifted = tensor(s.dec[static_cast<size_t>(k)], identity_channel(aux));
  CMatrix full = lifted.apply(rho_ca);
  SpaceShape out = s.msg_space.concat(s.flag_space).concat(aux);
  full.set_shapes(out, out);
  return project_factor(full, s.msg_space.factor_count(), 1);
}

// The accepted decode branch as an explicit completely positive map
// C -> M with Kraus (I_M (x) <1|_F) K_i.
inline KrausChannel dbar_channel(const AqecmScheme& s, int k) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  int md = s.msg_space.dim();
  std::vector<CMatrix> ops;
  for (const auto& ki : s.dec[static_cast<size_t>(k)].kraus()) {
    EMatrix cut(md, ki.cols());
    for (int m = 0; m < md; ++m) cut.row(m) = ki.eigen().row(2 * m + 1);  // (m, f=1)
    ops.push_back(CMatrix(std::move(cut)));
  }
  return KrausChannel(std::move(ops), s.cipher_space, s.msg_space);
}

// Tr[A B] without forming the product.
inline Complex trace_of_product(const CMatrix& a, const CMatrix& b) {
  require(a.rows() == b.cols() && a.cols() == b.rows(), "shape mismatch: trace of product");
  return (a.eigen().transpose().cwiseProduct(b.eigen())).sum();
}

// (Phi (x) Id_A)(omega) for the scalar completely positive map
// Phi(rho) = Tr[eff rho]; omega lives on C (x) A with C leading.
inline CMatrix effect_contract(const CMatrix& omega, const CMatrix& eff) {
  int dc = eff.rows();
  require(eff.cols() == dc, "shape mismatch: effect");
  require(dc > 0 && omega.rows() == omega.cols() && omega.rows() % dc == 0,
          "shape mismatch: effect contraction");
  int da = omega.rows() / dc;
  EMatrix r = EMatrix::Zero(da, da);
  for (int c = 0; c < dc; ++c)
    for (int cp = 0; cp < dc; ++cp) {
      Complex w = eff(cp, c);
      if (w != Complex(0.0, 0.0)) r += w * omega.eigen().block(c * da, cp * da, da, da);
    }
  return CMatrix(std::move(r));
}

// Dbar_k^dagger(I_M (x) |1><1|): the effect on C whose trace pairing gives
// the accept probability of the keyed decoder, message ignored.
inline CMatrix dbar_accept_effect(const AqecmScheme& s, int k) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  CMatrix target = tensor_product(CMatrix::identity(s.msg_space.dim()),
                                  CMatrix::projector(CMatrix::ket(2, 1)));
  return s.dec[static_cast<size_t>(k)].apply_adjoint(target);
}

// Dbar_k^dagger(|m><m| (x) |1><1|): accept AND decode-to-m effect on C.
inline CMatrix dbar_message_effect(const AqecmScheme& s, int k, int m) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  require(m >= 0 && m < s.message_count(), "shape mismatch: message index");
  CMatrix target = tensor_product(CMatrix::projector(CMatrix::ket(s.msg_space.dim(), m)),
                                  CMatrix::projector(CMatrix::ket(2, 1)));
  return s.dec[static_cast<size_t>(k)].apply_adjoint(target);
}

// <1| V_k(rho_r) |1>: acceptance probability of a revocation verifier.
inline double vbar_apply(const QecmrScheme& s, int k, const CMatrix& rho_r) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  CMatrix f = s.ver[static_cast<size_t>(k)].apply(rho_r);
  return f(1, 1).real();
}

// (V-bar_k (x) Id_A) applied to an operator on R (x) A.
inline CMatrix vbar_apply_with_aux(const QecmrScheme& s, int k, const CMatrix& rho_ra,
                                   const SpaceShape& aux) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  KrausChannel lifted = tensor(s.ver[static_cast<size_t>(k)], identity_channel(aux));
  CMatrix full = lifted.apply(rho_ra);
  SpaceShape out = s.flag_space.concat(aux);
  full.set_shapes(out, out);
  return project_factor(full, 0, 1);
}

// V_k^dagger(|1><1|): the accept effect of a revocation verifier on R.
inline CMatrix vbar_accept_effect(const QecmrScheme& s, int k) {
  require(k >= 0 && k < s.keys.size(), "shape mismatch: key index");
  return s.ver[static_cast<size_t>(k)].apply_adjoint(CMatrix::projector(CMatrix::ket(2, 1)));
}

// ---------------------------------------------------------------------------
// Correctness.

// 1 - min_m E_k <m| Dbar_k(E_k(m)) |m>.
inline double correctness_gap(const AqecmScheme& s) {
  double worst = 1.0;
  for (int m = 0; m < s.message_count(); ++m) {
    double avg = 0.0;
    for (int k = 0; k < s.keys.size(); ++k) {
      if (s.keys.probs[static_cast<size_t>(k)] <= 0.0) continue;
      CMatrix c = s.enc[static_cast<size_t>(k)].apply(s.message_state(m));
      CMatrix eff = dbar_message_effect(s, k, m);
      avg += s.keys.probs[static_cast<size_t>(k)] * trace_of_product(eff, c).real();
    }
    worst = std::min(worst, avg);
  }
  return 1.0 - worst;
}

inline double correctness_gap(const QecmScheme& s) {
  double worst = 1.0;
  for (int m = 0; m < s.message_count(); ++m) {
    double avg = 0.0;
    for (int k = 0; k < s.keys.size(); ++k) {
      CMatrix c = s.enc[static_cast<size_t>(k)].apply(s.message_state(m));
      CMatrix out = s.dec[static_cast<size_t>(k)].apply(c);
      avg += s.keys.probs[static_cast<size_t>(k)] * out(m, m).real();
    }
    worst = std::min(worst, avg);
  }
  return 1.0 - worst;
}

// Worst of the decode gap and the revocation-acceptance gap.
inline double correctness_gap(const QecmrScheme& s) {
  double worst_dec = 1.0, worst_rev = 1.0;
  for (int m = 0; m < s.message_count(); ++m) {
    double avg_dec = 0.0, avg_rev = 0.0;
    for (int k = 0; k < s.keys.size(); ++k) {
      CMatrix c = s.enc[static_cast<size_t>(k)].apply(s.message_state(m));
      CMatrix out = s.dec[static_cast<size_t>(k)].apply(c);
      avg_dec += s.keys.probs[static_cast<size_t>(k)] * out(m, m).real();
      avg_rev += s.keys.probs[static_cast<size_t>(k)] * vbar_apply(s, k, s.rev.apply(c));
    }
    worst_dec = std::min(worst_dec, avg_dec);
    worst_rev = std::min(worst_rev, avg_rev);
  }
  return 1.0 - std::min(worst_dec, worst_rev);
}

// 1 - min over positive-probability keys of the note acceptance.
inline double correctness_gap(const QmScheme& s) {
  double worst = 1.0;
  for (int k = 0; k < s.keys.size(); ++k) {
    if (s.keys.probs[static_cast<size_t>(k)] <= 0.0) continue;
    CMatrix f = s.ver[static_cast<size_t>(k)].apply(s.notes[static_cast<size_t>(k)]);
    worst = std::min(worst, f(1, 1).real());
  }
  return 1.0 - worst;
}

// ---------------------------------------------------------------------------
// Encryption.

// Largest trace distance between key-averaged encodings of two messages.
struct EncryptionGap {
  double alpha = 0.0;
  int arg_m0 = 0, arg_m1 = 1;
};

namespace detail {
template <typename SchemeT>
EncryptionGap encryption_gap_impl(const SchemeT& s) {
  std::vector<CMatrix> avg;
  avg.reserve(static_cast<size_t>(s.message_count()));
  for (int m = 0; m < s.message_count(); ++m) {
    CMatrix acc(s.cipher_space.dim(), s.cipher_space.dim());
    for (int k = 0; k < s.keys.size(); ++k)
      acc = acc + s.enc[static_cast<size_t>(k)].apply(s.message_state(m)) *
                      Complex(s.keys.probs[static_cast<size_t>(k)], 0.0);
    avg.push_back(std::move(acc));
  }
  EncryptionGap out;
  for (int i = 0; i < s.message_count(); ++i)
    for (int j = i + 1; j < s.message_count(); ++j) {
      double d = trace_distance(avg[static_cast<size_t>(i)], avg[static_cast<size_t>(j)]);
      if (d > out.alpha) {
        out.alpha = d;
        out.arg_m0 = i;
        out.arg_m1 = j;
      }
    }
  return out;
}
}  // namespace detail

inline EncryptionGap encryption_gap(const AqecmScheme& s) { return detail::encryption_gap_impl(s); }
inline EncryptionGap encryption_gap(const QecmScheme& s) { return detail::encryption_gap_impl(s); }
inline EncryptionGap encryption_gap(const QecmrScheme& s) { return detail::encryption_gap_impl(s); }

// ---------------------------------------------------------------------------
// Tamper evidence.

// Per-key conditioned distinguishability of two messages under an attack:
//   d_k = (1/2) || (Tr_M o Dbar_k (x) Id_A) A (E_k(m0) - E_k(m1)) ||_1.
// delta_hat is the smallest d with Pr_k[d_k <= d] >= 1 - d.
struct TamperProfile {
  std::vector<double> per_key;
  double expectation = 0.0;
  double delta_hat = 0.0;

  // Pr_k[d_k <= delta + slack] >= 1 - delta - slack.
  bool satisfies(const KeyDist& keys, double delta, double slack = tol::inequality) const {
    double good = 0.0;
    for (size_t k = 0; k < per_key.size(); ++k)
      if (per_key[k] <= delta + slack) good += keys.probs[k];
    return good >= 1.0 - delta - slack;
  }
};

namespace detail {
inline double compute_delta_hat(const KeyDist& keys, const std::vector<double>& d) {
  // Smallest x with Pr[d_k > x] <= x: scan thresholds at the observed
  // values; on [v_i, next) the tail is constant, so the best feasible
  // point of that interval is max(v_i, tail_i).
  std::vector<std::pair<double, double>> vp;  // (value, prob)
  for (size_t i = 0; i < d.size(); ++i) vp.emplace_back(d[i], keys.probs[i]);
  std::sort(vp.begin(), vp.end());
  double best = 1.0;
  double tail = 1.0;
  size_t i = 0;
  while (i < vp.size()) {
    double v = vp[i].first;
    while (i < vp.size() && vp[i].first == v) {
      tail -= vp[i].second;
      ++i;
    }
    if (tail < 0.0) tail = 0.0;
    best = std::min(best, std::max(v, tail));
  }
  return best;
}
}  // namespace detail

// The attack must map C to C (x) A with the cipher factors leading.
inline SpaceShape attack_aux_shape(const AqecmScheme& s, const KrausChannel& attack) {
  require(attack.in_shape().dim() == s.cipher_space.dim(), "attack shape mismatch: input space");
  const SpaceShape& out = attack.out_shape();
  int nc = s.cipher_space.factor_count();
  require(out.factor_count() >= nc, "attack shape mismatch: output factors");
  std::vector<int> lead;
  for (int i = 0; i < nc; ++i) lead.push_back(i);
  require(out.subset(lead).dims_equal(s.cipher_space),
          "attack shape mismatch: output must lead with the cipher space");
  std::vector<int> rest;
  for (int i = nc; i < out.factor_count(); ++i) rest.push_back(i);
  return out.subset(rest);
}

inline TamperProfile tamper_profile(const AqecmScheme& s, const KrausChannel& attack, int m0,
                                    int m1) {
  attack_aux_shape(s, attack);  // shape validation only
  TamperProfile out;
  out.per_key.reserve(static_cast<size_t>(s.keys.size()));
  for (int k = 0; k < s.keys.size(); ++k) {
    CMatrix c0 = s.enc[static_cast<size_t>(k)].apply(s.message_state(m0));
    CMatrix c1 = s.enc[static_cast<size_t>(k)].apply(s.message_state(m1));
    CMatrix sigma = attack.apply(c0 - c1);
    // (Tr_M o Dbar_k) is the scalar map rho -> Tr[eff rho]; contract the
    // cipher block of sigma against the effect, leaving the auxiliary.
    CMatrix reduced = effect_contract(sigma, dbar_accept_effect(s, k));
    out.per_key.push_back(0.5 * trace_norm(reduced));
    out.expectation += s.keys.probs[static_cast<size_t>(k)] * out.per_key.back();
  }
  out.delta_hat = detail::compute_delta_hat(s.keys, out.per_key);
  return out;
}

// Largest profile over all ordered message pairs (m0 < m1).
inline TamperProfile worst_tamper_profile(const AqecmScheme& s, const KrausChannel& attack) {
  TamperProfile worst;
  bool first = true;
  for (int i = 0; i < s.message_count(); ++i)
    for (int j = i + 1; j < s.message_count(); ++j) {
      TamperProfile p = tamper_profile(s, attack, i, j);
      if (first || p.delta_hat > worst.delta_hat) {
        worst = std::move(p);
        first = false;
      }
    }
  return worst;
}

// Conversions between the expectation form and the probability form of
// the tamper-evidence guarantee.
inline double te_delta_from_expectation(double expectation_bound) {
  return std::sqrt(expectation_bound);
}
inline double te_expectation_from_delta(double delta) { return 2.0 * delta - delta * delta; }

// ---------------------------------------------------------------------------
// Quantum money forgery.

// E_k (Vbar_k (x) Vbar_k) A(note_k): the probability that both halves of
// a forged pair pass verification, averaged over keys.
struct ForgeryValue {
  double value = 0.0;
  std::vector<double> per_key;
};

inline ForgeryValue qm_forgery_value(const QmScheme& s, const KrausChannel& attack) {
  int n = s.note_space.dim();
  require(attack.in_shape().dim() == n, "attack shape mismatch: note space");
  require(attack.out_shape().dim() == n * n, "attack shape mismatch: counterfeit output");
  ForgeryValue out;
  out.per_key.reserve(static_cast<size_t>(s.keys.size()));
  for (int k = 0; k < s.keys.size(); ++k) {
    CMatrix pair = attack.apply(s.notes[static_cast<size_t>(k)]);
    CMatrix accept =
        s.ver[static_cast<size_t>(k)].apply_adjoint(CMatrix::projector(CMatrix::ket(2, 1)));
    out.per_key.push_back(trace_of_product(tensor_product(accept, accept), pair).real());
    out.value += s.keys.probs[static_cast<size_t>(k)] * out.per_key.back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite group tables.

struct GroupTable {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> table;  // table[a][b] = a * b
  int identity = 0;

  int size() const { return static_cast<int>(elements.size()); }
  int apply(int a, int b) const { return table.at(static_cast<size_t>(a)).at(static_cast<size_t>(b)); }

  int inverse(int a) const {
    for (int b = 0; b < size(); ++b)
      if (apply(a, b) == identity) return b;
    throw Error("group table invalid: missing inverse");
  }

  void validate() const {
    int n = size();
    require(n >= 1 && static_cast<int>(table.size()) == n, "group table invalid: size");
    for (const auto& row : table) {
      require(static_cast<int>(row.size()) == n, "group table invalid: row size");
      for (int v : row) require(v >= 0 && v < n, "group table invalid: entry range");
    }
    for (int a = 0; a < n; ++a) {
      std::vector<bool> seen_row(static_cast<size_t>(n), false), seen_col(static_cast<size_t>(n), false);
      for (int b = 0; b < n; ++b) {
        require(!seen_row[static_cast<size_t>(apply(a, b))], "group table invalid: row repeats");
        seen_row[static_cast<size_t>(apply(a, b))] = true;
        require(!seen_col[static_cast<size_t>(apply(b, a))], "group table invalid: column repeats");
        seen_col[static_cast<size_t>(apply(b, a))] = true;
      }
      require(apply(identity, a) == a && apply(a, identity) == a,
              "group table invalid: identity element");
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          require(apply(apply(a, b), c) == apply(a, apply(b, c)),
                  "group table invalid: associativity");
    for (int a = 0; a < n; ++a) inverse(a);
  }

  // Cyclic group on the given labels in index order.
  static GroupTable cyclic(std::vector<std::string> labels) {
    GroupTable g;
    int n = static_cast<int>(labels.size());
    g.elements = std::move(labels);
    g.table.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g.table[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a + b) % n;
    g.identity = 0;
    return g;
  }
};

}  // namespace qte
