#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "qte/channel.hpp"
#include "qte/distance.hpp"
#include "qte/random.hpp"
#include "qte/scheme.hpp"

namespace qte {

// A named tampering channel C -> C (x) A (cipher factors leading, optional
// trailing auxiliary register kept by the adversary).
struct TamperAttack {
  std::string name;
  KrausChannel map;
};

// ---------------------------------------------------------------------------
// Gallery members.

inline TamperAttack identity_attack(const SpaceShape& cipher) {
  return {"identity", identity_channel(cipher)};
}

// Measure the full ciphertext in the computational basis and keep a copy
// of the outcome.
inline TamperAttack full_measure_attack(const SpaceShape& cipher) {
  int d = cipher.dim();
  require(static_cast<long long>(d) * d * d <= limits::max_matrix_entries,
          "dimension cap exceeded: full measurement attack");
  SpaceShape out = cipher.concat(SpaceShape::single("A", d, true));
  std::vector<CMatrix> kraus;
  for (int i = 0; i < d; ++i) {
    EMatrix k = EMatrix::Zero(static_cast<long long>(d) * d, d);
    k(static_cast<long long>(i) * d + i, i) = 1.0;
    kraus.push_back(CMatrix(std::move(k)));
  }
  return {"full_measure", KrausChannel(std::move(kraus), cipher, out)};
}

// A Haar-random isometry into cipher (x) aux.
inline TamperAttack random_isometry_attack(const SpaceShape& cipher, int aux_dim, Rng& rng) {
  require(aux_dim >= 1 && aux_dim <= 4, "dimension cap exceeded: attack auxiliary");
  int d = cipher.dim();
  SpaceShape out = cipher.concat(SpaceShape::single("A", aux_dim));
  CMatrix v = random_isometry(rng, d * aux_dim, d);
  return {"random_isometry", KrausChannel({std::move(v)}, cipher, out)};
}

// Bit flip on the last ciphertext factor (which must be a qubit-sized
// register).
inline TamperAttack bitflip_attack(const SpaceShape& cipher) {
  int nf = cipher.factor_count();
  require(nf >= 1 && cipher.factor(nf - 1).dim == 2, "attack shape mismatch: no trailing bit");
  EMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CMatrix u = tensor_product(CMatrix::identity(cipher.dim() / 2), CMatrix(EMatrix(x)));
  return {"bitflip", unitary_channel(u, cipher, cipher)};
}

// The coherent-gentle-measurement distinguisher: measure the optimal
// two-outcome discriminator between the key-averaged encodings of two
// messages, gently, keeping the outcome register.
inline TamperAttack cgm_distinguisher_attack(const AqecmScheme& s, int m0, int m1) {
  int d = s.cipher_space.dim();
  CMatrix avg0(d, d), avg1(d, d);
  for (int k = 0; k < s.keys.size(); ++k) {
    Complex w(s.keys.probs[static_cast<size_t>(k)], 0.0);
    avg0 = avg0 + s.enc[static_cast<size_t>(k)].apply(s.message_state(m0)) * w;
    avg1 = avg1 + s.enc[static_cast<size_t>(k)].apply(s.message_state(m1)) * w;
  }
  HelstromPair hp = helstrom_pair(avg0, avg1);
  Povm povm;
  povm.space = s.cipher_space;
  povm.effects = {hp.q, hp.p};  // outcome 1 votes for m0
  KrausChannel discriminate = measure_channel(povm, "Y");
  return {"cgm_distinguisher", cgm_of_channel(discriminate, "Y")};
}

// The default attack gallery for lower-bounding tamper distinguishability.
inline std::vector<TamperAttack> attack_gallery(const AqecmScheme& s, Rng& rng,
                                                int n_random = 2) {
  std::vector<TamperAttack> out;
  out.push_back(identity_attack(s.cipher_space));
  int nf = s.cipher_space.factor_count();
  if (nf >= 1 && s.cipher_space.factor(nf - 1).dim == 2)
    out.push_back(bitflip_attack(s.cipher_space));
  if (s.cipher_space.dim() <= 16) out.push_back(full_measure_attack(s.cipher_space));
  for (int i = 0; i < n_random; ++i) {
    Rng sub = rng.split("attack" + std::to_string(i));
    out.push_back(random_isometry_attack(s.cipher_space, 2, sub));
  }
  for (int i = 0; i < s.message_count(); ++i)
    for (int j = i + 1; j < s.message_count(); ++j)
      out.push_back(cgm_distinguisher_attack(s, i, j));
  return out;
}

// Best lower bound on the tamper-evidence parameter observable from a
// gallery of attacks: the largest per-attack threshold delta-hat, since a
// scheme violating the probability form at delta-hat cannot satisfy it at
// any smaller delta.
inline double best_tamper_lower_bound(const AqecmScheme& s,
                                      const std::vector<TamperAttack>& gallery) {
  double best = 0.0;
  for (const auto& a : gallery)
    best = std::max(best, worst_tamper_profile(s, a.map).delta_hat);
  return best;
}

// ---------------------------------------------------------------------------
// Split attacks against the doubling and pad-randomized compositions.

// On a doubled scheme with ciphertext Sel (x) C (x) C: discard the
// selection qubit and deal the two inner slots into two full ciphertexts,
//   (|0><0|, slot 1, mixed)  and  (|1><1|, mixed, slot 2),
// handing the second one to the adversary's register.
inline TamperAttack double_split_attack(const SpaceShape& double_cipher,
                                        int inner_cipher_factors) {
  int f = inner_cipher_factors;
  require(double_cipher.factor_count() == 1 + 2 * f && double_cipher.factor(0).dim == 2,
          "attack shape mismatch: not a doubled ciphertext");
  std::vector<int> inner_pos;
  for (int i = 0; i < f; ++i) inner_pos.push_back(1 + i);
  SpaceShape inner = double_cipher.subset(inner_pos);
  int d = inner.dim();
  // A density operator on the dealt pair has (4 d^4)^2 entries.
  long long out_dim = 4LL * d * d * d * d;
  require(out_dim * out_dim <= limits::max_matrix_entries,
          "dimension cap exceeded: split attack output");

  CMatrix mixed = CMatrix::identity(d) * Complex(1.0 / d, 0.0);
  SpaceShape sel = SpaceShape::single("S", 2);
  // Block order after the tensor: (Sel0, Sel1, PadA, PadB, Slot1, Slot2).
  KrausChannel build = tensor(
      {prep_channel(CMatrix::projector(CMatrix::ket(2, 0)), sel),
       prep_channel(CMatrix::projector(CMatrix::ket(2, 1)), sel), prep_channel(mixed, inner),
       prep_channel(mixed, inner), discard_factors(double_cipher, {0})});
  // Target order: (Sel0, Slot1, PadA | Sel1, PadB, Slot2).
  std::vector<int> perm(static_cast<size_t>(2 + 4 * f));
  perm[0] = 0;                                            // Sel0
  perm[1] = 1 + 2 * f;                                    // Sel1
  for (int i = 0; i < f; ++i) perm[static_cast<size_t>(2 + i)] = 1 + f + i;          // PadA
  for (int i = 0; i < f; ++i) perm[static_cast<size_t>(2 + f + i)] = 2 + 2 * f + i;  // PadB
  for (int i = 0; i < f; ++i) perm[static_cast<size_t>(2 + 2 * f + i)] = 1 + i;      // Slot1
  for (int i = 0; i < f; ++i) perm[static_cast<size_t>(2 + 3 * f + i)] = 2 + 3 * f + i;  // Slot2
  KrausChannel deal = swap_channel(build.out_shape(), perm);
  return {"double_split", compose(deal, build)};
}

// On a pad-randomized composition with ciphertext Ca (x) Cb: keep the a
// slot in one share and the b slot in the other, padding the holes with
// maximally mixed states.
inline TamperAttack share_split_attack(const SpaceShape& ca, const SpaceShape& cb) {
  int da = ca.dim(), db = cb.dim();
  long long full = static_cast<long long>(da) * db;
  // A density operator on the dealt pair has (full^2)^2 entries.
  require(full * full * full * full <= limits::max_matrix_entries,
          "dimension cap exceeded: split attack output");
  CMatrix mixed_a = CMatrix::identity(da) * Complex(1.0 / da, 0.0);
  CMatrix mixed_b = CMatrix::identity(db) * Complex(1.0 / db, 0.0);
  // Block order after the tensor: (Ca, Cb, PadB, PadA).
  KrausChannel build = tensor({identity_channel(ca.concat(cb)), prep_channel(mixed_b, cb),
                               prep_channel(mixed_a, ca)});
  int fa = ca.factor_count(), fb = cb.factor_count();
  // Target order: (Ca, PadB | PadA, Cb).
  std::vector<int> perm(static_cast<size_t>(2 * (fa + fb)));
  for (int i = 0; i < fa; ++i) perm[static_cast<size_t>(i)] = i;                        // Ca
  for (int i = 0; i < fb; ++i) perm[static_cast<size_t>(fa + i)] = fa + fb + fa + i;    // Cb
  for (int i = 0; i < fb; ++i) perm[static_cast<size_t>(fa + fb + i)] = fa + i;         // PadB
  for (int i = 0; i < fa; ++i) perm[static_cast<size_t>(fa + 2 * fb + i)] = fa + fb + i;  // PadA
  KrausChannel deal = swap_channel(build.out_shape(), perm);
  return {"share_split", compose(deal, build)};
}

// ---------------------------------------------------------------------------
// Structured (factorized) split evaluators.
//
// The full-matrix attacks above square the ciphertext dimension, which is
// out of reach for the larger pinned instances. Because the dealt shares
// are product states whose slots decode independently, the relevant
// statistics factor into per-slot scalars computable at the inner-scheme
// dimension. The factorized route is cross-checked against the generic
// route on small instances and against the enumeration oracles.

struct DoubleSplitReport {
  double half_decode_min = 1.0;   // min over keys, halves, messages of P[decode = m]
  double half_decode_max = 0.0;
  double forgery = 0.0;           // E[both shares pass verification], uniform (key, m)
};

inline DoubleSplitReport double_split_report(const AqecmScheme& inner) {
  int d = inner.cipher_space.dim();
  int nk = inner.keys.size(), nm = inner.message_count();
  CMatrix mixed = CMatrix::identity(d) * Complex(1.0 / d, 0.0);
  // Per-key tables. a[k][m]: accept AND decode = m on E_k(m); fm[k][m]:
  // decode = m with flag ignored; t[k]: accept probability on the mixed
  // state.
  std::vector<std::vector<double>> a(static_cast<size_t>(nk)), fm(static_cast<size_t>(nk));
  std::vector<double> t(static_cast<size_t>(nk));
  for (int k = 0; k < nk; ++k) {
    t[static_cast<size_t>(k)] = trace_of_product(dbar_accept_effect(inner, k), mixed).real();
    for (int m = 0; m < nm; ++m) {
      CMatrix c = inner.enc[static_cast<size_t>(k)].apply(inner.message_state(m));
      a[static_cast<size_t>(k)].push_back(
          trace_of_product(dbar_message_effect(inner, k, m), c).real());
      CMatrix any_flag = tensor_product(
          CMatrix::projector(CMatrix::ket(inner.msg_space.dim(), m)), CMatrix::identity(2));
      fm[static_cast<size_t>(k)].push_back(
          trace_of_product(inner.dec[static_cast<size_t>(k)].apply_adjoint(any_flag), c).real());
    }
  }
  DoubleSplitReport rep;
  double acc = 0.0;
  for (int k0 = 0; k0 < nk; ++k0)
    for (int k1 = 0; k1 < nk; ++k1)
      for (int m = 0; m < nm; ++m) {
        double v1 = a[static_cast<size_t>(k0)][static_cast<size_t>(m)] * t[static_cast<size_t>(k1)];
        double v2 = t[static_cast<size_t>(k0)] * a[static_cast<size_t>(k1)][static_cast<size_t>(m)];
        acc += v1 * v2;
        rep.half_decode_min = std::min({rep.half_decode_min,
                                        fm[static_cast<size_t>(k0)][static_cast<size_t>(m)],
                                        fm[static_cast<size_t>(k1)][static_cast<size_t>(m)]});
        rep.half_decode_max = std::max({rep.half_decode_max,
                                        fm[static_cast<size_t>(k0)][static_cast<size_t>(m)],
                                        fm[static_cast<size_t>(k1)][static_cast<size_t>(m)]});
      }
  rep.forgery = acc / (static_cast<double>(nk) * nk * nm);
  return rep;
}

struct ShareSplitReport {
  double half1_accept_min = 1.0, half1_accept_max = 0.0;
  double half2_accept_min = 1.0, half2_accept_max = 0.0;
  double half1_decode_min = 1.0, half1_decode_max = 0.0;
  double half2_decode_min = 1.0, half2_decode_max = 0.0;
  double forgery = 0.0;
};

// Factorized share-split statistics for star_of(a, b) over the cyclic
// group on the shared alphabet.
inline ShareSplitReport share_split_report(const AqecmScheme& a, const AqecmScheme& b,
                                           const GroupTable& g) {
  require(a.messages == b.messages, "alphabet mismatch: star components");
  int L = static_cast<int>(a.messages.size());
  require(g.size() == L, "alphabet mismatch: group size");

  // Joint decode tables per key: on input E_k(p) and on the mixed state,
  // the distribution over (decoded message, flag).
  auto tables = [&](const AqecmScheme& s) {
    int d = s.cipher_space.dim();
    CMatrix mixed = CMatrix::identity(d) * Complex(1.0 / d, 0.0);
    // [key][p][phat][flag] and [key][mhat][flag]
    std::vector<std::vector<std::vector<std::array<double, 2>>>> on_msg;
    std::vector<std::vector<std::array<double, 2>>> on_mixed;
    for (int k = 0; k < s.keys.size(); ++k) {
      std::vector<std::vector<std::array<double, 2>>> per_p;
      std::vector<std::array<double, 2>> mix(static_cast<size_t>(L), {0.0, 0.0});
      std::vector<CMatrix> effects;  // dec^dagger(|mhat><mhat| (x) |f><f|)
      for (int mh = 0; mh < L; ++mh)
        for (int fl = 0; fl < 2; ++fl) {
          CMatrix target = tensor_product(CMatrix::projector(CMatrix::ket(L, mh)),
                                          CMatrix::projector(CMatrix::ket(2, fl)));
          effects.push_back(s.dec[static_cast<size_t>(k)].apply_adjoint(target));
        }
      for (int p = 0; p < L; ++p) {
        CMatrix c = s.enc[static_cast<size_t>(k)].apply(s.message_state(p));
        std::vector<std::array<double, 2>> row(static_cast<size_t>(L), {0.0, 0.0});
        for (int mh = 0; mh < L; ++mh)
          for (int fl = 0; fl < 2; ++fl)
            row[static_cast<size_t>(mh)][static_cast<size_t>(fl)] =
                trace_of_product(effects[static_cast<size_t>(mh * 2 + fl)], c).real();
        per_p.push_back(std::move(row));
      }
      for (int mh = 0; mh < L; ++mh)
        for (int fl = 0; fl < 2; ++fl)
          mix[static_cast<size_t>(mh)][static_cast<size_t>(fl)] =
              trace_of_product(effects[static_cast<size_t>(mh * 2 + fl)], mixed).real();
      on_msg.push_back(std::move(per_p));
      on_mixed.push_back(std::move(mix));
    }
    return std::make_pair(std::move(on_msg), std::move(on_mixed));
  };
  auto [a_msg, a_mix] = tables(a);
  auto [b_msg, b_mix] = tables(b);

  ShareSplitReport rep;
  double forgery = 0.0;
  long long count = 0;
  for (int ka = 0; ka < a.keys.size(); ++ka)
    for (int kb = 0; kb < b.keys.size(); ++kb)
      for (int m = 0; m < L; ++m) {
        double pad_avg = 0.0;
        for (int p = 0; p < L; ++p) {
          int y = g.apply(p, m);
          double v1 = 0.0, v2 = 0.0, dec1 = 0.0, dec2 = 0.0;
          double rej_a_msg = 0.0, rej_b_mix = 0.0, rej_a_mix = 0.0, rej_b_msg = 0.0;
          for (int ph = 0; ph < L; ++ph) {
            int w = g.apply(ph, m);
            const auto& am = a_msg[static_cast<size_t>(ka)][static_cast<size_t>(p)][static_cast<size_t>(ph)];
            const auto& bx = b_mix[static_cast<size_t>(kb)][static_cast<size_t>(w)];
            v1 += am[1] * (bx[0] + bx[1]) + am[0] * bx[1];
            dec1 += (am[0] + am[1]) * (bx[0] + bx[1]);
            const auto& ax = a_mix[static_cast<size_t>(ka)][static_cast<size_t>(ph)];
            const auto& bm = b_msg[static_cast<size_t>(kb)][static_cast<size_t>(y)][static_cast<size_t>(w)];
            v2 += ax[1] * (bm[0] + bm[1]) + ax[0] * bm[1];
            dec2 += (ax[0] + ax[1]) * (bm[0] + bm[1]);
            rej_a_msg += am[0];
            rej_b_msg += b_msg[static_cast<size_t>(kb)][static_cast<size_t>(y)][static_cast<size_t>(ph)][0];
          }
          for (int mh = 0; mh < L; ++mh) {
            rej_b_mix += b_mix[static_cast<size_t>(kb)][static_cast<size_t>(mh)][0];
            rej_a_mix += a_mix[static_cast<size_t>(ka)][static_cast<size_t>(mh)][0];
          }
          double acc1 = 1.0 - rej_a_msg * rej_b_mix;
          double acc2 = 1.0 - rej_a_mix * rej_b_msg;
          rep.half1_accept_min = std::min(rep.half1_accept_min, acc1);
          rep.half1_accept_max = std::max(rep.half1_accept_max, acc1);
          rep.half2_accept_min = std::min(rep.half2_accept_min, acc2);
          rep.half2_accept_max = std::max(rep.half2_accept_max, acc2);
          rep.half1_decode_min = std::min(rep.half1_decode_min, dec1);
          rep.half1_decode_max = std::max(rep.half1_decode_max, dec1);
          rep.half2_decode_min = std::min(rep.half2_decode_min, dec2);
          rep.half2_decode_max = std::max(rep.half2_decode_max, dec2);
          pad_avg += v1 * v2 / L;
        }
        forgery += pad_avg;
        ++count;
      }
  rep.forgery = forgery / static_cast<double>(count);
  return rep;
}

// ---------------------------------------------------------------------------
// Hybrid lifts: turn an attack on a parallel composition into an attack on
// one component by hard-wiring the other component's ciphertext and
// decoder, keeping that decoder's flag (and the original auxiliary) as the
// new auxiliary register.

inline KrausChannel lift_attack_to_first(const KrausChannel& attack, const AqecmScheme& first,
                                         const AqecmScheme& second, int k2, int m2) {
  require(k2 >= 0 && k2 < second.keys.size(), "shape mismatch: key index");
  int n1 = first.cipher_space.factor_count();
  int n2 = second.cipher_space.factor_count();
  require(attack.in_shape().dim() == first.cipher_space.dim() * second.cipher_space.dim(),
          "attack shape mismatch: input space");
  CMatrix c2 = second.enc[static_cast<size_t>(k2)].apply(second.message_state(m2));
  KrausChannel grow =
      tensor(identity_channel(first.cipher_space), prep_channel(c2, second.cipher_space));
  KrausChannel after = compose(attack, grow);  // C1 -> C1 (x) C2 (x) A
  SpaceShape mid = first.cipher_space.concat(second.cipher_space);
  SpaceShape aux;
  {
    const SpaceShape& out = attack.out_shape();
    std::vector<int> rest;
    for (int i = n1 + n2; i < out.factor_count(); ++i) rest.push_back(i);
    aux = out.subset(rest);
  }
  KrausChannel decode2 = on_factors(second.dec[static_cast<size_t>(k2)],
                                    mid.concat(aux), n1);  // -> C1 (x) M2 (x) F (x) A
  SpaceShape with_result = first.cipher_space.concat(second.msg_space)
                               .concat(second.flag_space)
                               .concat(aux);
  std::vector<int> msg_positions;
  for (int i = 0; i < second.msg_space.factor_count(); ++i) msg_positions.push_back(n1 + i);
  KrausChannel drop_msg = discard_factors(with_result, msg_positions);
  return compose(drop_msg, compose(decode2, after));
}

inline KrausChannel lift_attack_to_second(const KrausChannel& attack, const AqecmScheme& first,
                                          const AqecmScheme& second, int k1, int m1) {
  require(k1 >= 0 && k1 < first.keys.size(), "shape mismatch: key index");
  int n1 = first.cipher_space.factor_count();
  int n2 = second.cipher_space.factor_count();
  require(attack.in_shape().dim() == first.cipher_space.dim() * second.cipher_space.dim(),
          "attack shape mismatch: input space");
  CMatrix c1 = first.enc[static_cast<size_t>(k1)].apply(first.message_state(m1));
  KrausChannel grow =
      tensor(prep_channel(c1, first.cipher_space), identity_channel(second.cipher_space));
  KrausChannel after = compose(attack, grow);  // C2 -> C1 (x) C2 (x) A
  SpaceShape mid = first.cipher_space.concat(second.cipher_space);
  SpaceShape aux;
  {
    const SpaceShape& out = attack.out_shape();
    std::vector<int> rest;
    for (int i = n1 + n2; i < out.factor_count(); ++i) rest.push_back(i);
    aux = out.subset(rest);
  }
  KrausChannel decode1 =
      on_factors(first.dec[static_cast<size_t>(k1)], mid.concat(aux), 0);  // M1 F C2 A
  SpaceShape with_result = first.msg_space.concat(first.flag_space)
                               .concat(second.cipher_space)
                               .concat(aux);
  std::vector<int> msg_positions;
  for (int i = 0; i < first.msg_space.factor_count(); ++i) msg_positions.push_back(i);
  KrausChannel drop_msg = discard_factors(with_result, msg_positions);  // F C2 A
  // Move the flag behind the ciphertext block: (F, C2, A) -> (C2, F, A).
  SpaceShape fca = first.flag_space.concat(second.cipher_space).concat(aux);
  std::vector<int> perm(static_cast<size_t>(fca.factor_count()));
  perm[0] = n2;
  for (int i = 0; i < n2; ++i) perm[static_cast<size_t>(1 + i)] = i;
  for (int i = 0; i < aux.factor_count(); ++i) perm[static_cast<size_t>(1 + n2 + i)] = n2 + 1 + i;
  KrausChannel reorder = swap_channel(fca, perm);
  return compose(reorder, compose(drop_msg, compose(decode1, after)));
}

// ---------------------------------------------------------------------------
// Revocation attacks and the certified-deletion game.

// The attack contract against a revocation scheme: C -> R (x) A with the
// revocation factors leading.
inline SpaceShape rev_attack_aux_shape(const QecmrScheme& s, const KrausChannel& attack) {
  require(attack.in_shape().dim() == s.cipher_space.dim(), "attack shape mismatch: input space");
  const SpaceShape& out = attack.out_shape();
  int nr = s.rev_space.factor_count();
  require(out.factor_count() >= nr, "attack shape mismatch: output factors");
  std::vector<int> lead;
  for (int i = 0; i < nr; ++i) lead.push_back(i);
  require(out.subset(lead).dims_equal(s.rev_space),
          "attack shape mismatch: output must lead with the revocation space");
  std::vector<int> rest;
  for (int i = nr; i < out.factor_count(); ++i) rest.push_back(i);
  return out.subset(rest);
}

// Adapt a tamper attack C -> C (x) A into a revocation attack against s
// by applying the honest revocation map to the returned ciphertext:
//   a |-> (rev (x) Id_A) o a.
// When tokens are full ciphertexts (rev = identity) the channel is
// unchanged up to composition with the identity.
inline KrausChannel rev_attack_from_tamper(const QecmrScheme& s, const KrausChannel& attack) {
  require(attack.in_shape().dim() == s.cipher_space.dim(), "attack shape mismatch: input space");
  int nc = s.cipher_space.factor_count();
  const SpaceShape& out = attack.out_shape();
  require(out.factor_count() >= nc, "attack shape mismatch: output factors");
  std::vector<int> lead;
  for (int i = 0; i < nc; ++i) lead.push_back(i);
  require(out.subset(lead).dims_equal(s.cipher_space),
          "attack shape mismatch: output must lead with the ciphertext space");
  return compose(on_factors(s.rev, out, 0), attack);
}

// Adapt a revocation attack C -> R (x) A against a scheme whose tokens are
// full ciphertexts (R-space = C-space) into a tamper attack on the
// underlying scheme: the channel is unchanged apart from validation.
inline KrausChannel tamper_attack_from_rev(const QecmrScheme& s, const KrausChannel& attack) {
  require(s.rev_space.dims_equal(s.cipher_space), "shape mismatch: tokens are not ciphertexts");
  rev_attack_aux_shape(s, attack);
  return attack;
}

// Per-key xi_k = (Vbar_k (x) Id_A) attack(E_k(m0) - E_k(m1)) and the
// expectation of half its trace norm.
struct RevAttackValue {
  std::vector<CMatrix> xi;  // per key, on A
  std::vector<double> per_key;
  double expectation = 0.0;
};

inline RevAttackValue rev_attack_value(const QecmrScheme& s, const KrausChannel& attack, int m0,
                                       int m1) {
  rev_attack_aux_shape(s, attack);
  RevAttackValue out;
  for (int k = 0; k < s.keys.size(); ++k) {
    CMatrix c0 = s.enc[static_cast<size_t>(k)].apply(s.message_state(m0));
    CMatrix c1 = s.enc[static_cast<size_t>(k)].apply(s.message_state(m1));
    CMatrix omega = attack.apply(c0 - c1);
    CMatrix xi = effect_contract(omega, vbar_accept_effect(s, k));
    out.per_key.push_back(0.5 * trace_norm(xi));
    out.expectation += s.keys.probs[static_cast<size_t>(k)] * out.per_key.back();
    out.xi.push_back(std::move(xi));
  }
  return out;
}

// The interactive deletion game. An adversary supplies a (possibly
// correlated) pair of candidate messages with side information, processes
// the ciphertext into a revocation token, and, after the token passes
// verification and the key is revealed, guesses which message was sent.
struct RevGame {
  CMatrix initial;       // state on M (x) M (x) A0
  SpaceShape aux0 = SpaceShape::scalar();
  KrausChannel process;  // C (x) A0 -> R (x) A1, revocation factors leading
  SpaceShape aux1 = SpaceShape::scalar();
  CMatrix accept;        // guess effect on K (x) A1
  bool flipped = false;  // use I - accept instead
};

// Probability that the adversary's guess effect fires in the given world
// (0: the first message register is encrypted, 1: the second), with the
// run conditioned on the revocation token being accepted.
inline double rev_game_value(const QecmrScheme& s, const RevGame& game, int world) {
  require(world == 0 || world == 1, "schema violation: game world");
  int md = s.msg_space.dim();
  KrausChannel pre =
      world == 0
          ? tensor({dephase_channel(s.msg_space), discard_channel(s.msg_space),
                    identity_channel(game.aux0)})
          : tensor({discard_channel(s.msg_space), dephase_channel(s.msg_space),
                    identity_channel(game.aux0)});
  require(game.initial.rows() == md * md * game.aux0.dim(), "shape mismatch: game initial state");
  CMatrix picked = pre.apply(game.initial);  // on M (x) A0
  int nk = s.keys.size();
  int da1 = game.aux1.dim();
  CMatrix tau(nk * da1, nk * da1);
  for (int k = 0; k < nk; ++k) {
    double pk = s.keys.probs[static_cast<size_t>(k)];
    if (pk <= 0.0) continue;
    KrausChannel enc_lift = tensor(s.enc[static_cast<size_t>(k)], identity_channel(game.aux0));
    CMatrix token = game.process.apply(enc_lift.apply(picked));  // on R (x) A1
    CMatrix xi = effect_contract(token, vbar_accept_effect(s, k));  // on A1
    for (int i = 0; i < da1; ++i)
      for (int j = 0; j < da1; ++j)
        tau.eigen()(k * da1 + i, k * da1 + j) = pk * xi(i, j);
  }
  CMatrix eff = game.flipped ? CMatrix::identity(nk * da1) - game.accept : game.accept;
  require(eff.rows() == nk * da1, "shape mismatch: game accept effect");
  return trace_of_product(eff, tau).real();
}

inline double rev_game_advantage(const QecmrScheme& s, const RevGame& game) {
  return rev_game_value(s, game, 0) - rev_game_value(s, game, 1);
}

// From a revocation attack, the canonical game strategy: submit the two
// basis messages, process with the attack, and guess with the optimal
// discriminator of the key-labeled accepted residues.
inline RevGame game_from_rev_attack(const QecmrScheme& s, const KrausChannel& attack, int m0,
                                    int m1) {
  RevGame game;
  SpaceShape aux1 = rev_attack_aux_shape(s, attack);
  int md = s.msg_space.dim();
  // The submitted side information is a dummy maximally mixed qubit which
  // the processing step discards before running the attack.
  game.aux0 = SpaceShape::single("A0", 2);
  game.initial = tensor_product(
      tensor_product(CMatrix::projector(CMatrix::ket(md, m0)),
                     CMatrix::projector(CMatrix::ket(md, m1))),
      CMatrix::identity(2) * Complex(0.5, 0.0));
  int nc = s.cipher_space.factor_count();
  KrausChannel drop_dummy =
      discard_factors(s.cipher_space.concat(game.aux0), {nc});
  game.process = compose(attack, drop_dummy);
  game.aux1 = aux1;
  RevAttackValue rav = rev_attack_value(s, attack, m0, m1);
  int nk = s.keys.size(), da1 = aux1.dim();
  CMatrix omega(nk * da1, nk * da1);
  for (int k = 0; k < nk; ++k)
    for (int i = 0; i < da1; ++i)
      for (int j = 0; j < da1; ++j)
        omega.eigen()(k * da1 + i, k * da1 + j) =
            s.keys.probs[static_cast<size_t>(k)] * rav.xi[static_cast<size_t>(k)](i, j);
  HelstromPair hp = helstrom_pair(omega, CMatrix(omega.rows(), omega.cols()));
  game.accept = hp.p;
  return game;
}

// Decompose a game's preparation into per-message-pair revocation attacks:
// conditioning the (classical) message registers on (m, m') leaves a side
// state sigma, and the pair attack is process o (Id (x) prep sigma).
struct RevPairAttack {
  double prob = 0.0;
  int m0 = 0, m1 = 0;
  KrausChannel attack;
};

inline std::vector<RevPairAttack> rev_attacks_from_game(const QecmrScheme& s,
                                                        const RevGame& game) {
  int md = s.msg_space.dim();
  std::vector<RevPairAttack> out;
  for (int m0 = 0; m0 < md; ++m0)
    for (int m1 = 0; m1 < md; ++m1) {
      CMatrix init = game.initial;
      init.set_shapes(s.msg_space.concat(s.msg_space).concat(game.aux0),
                      s.msg_space.concat(s.msg_space).concat(game.aux0));
      CMatrix cond = project_factor(project_factor(init, 0, m0), 0, m1);  // on A0
      double p = cond.trace().real();
      if (p <= tol::probability) continue;
      CMatrix sigma = cond * Complex(1.0 / p, 0.0);
      RevPairAttack pa;
      pa.prob = p;
      pa.m0 = m0;
      pa.m1 = m1;
      pa.attack = compose(game.process,
                          tensor(identity_channel(s.cipher_space), prep_channel(sigma, game.aux0)));
      out.push_back(std::move(pa));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Counterfeiting adapters for the money forgery game.

// Accepts either a map producing two note registers already, or a map
// producing one note register, which is padded with a maximally mixed
// second note.
inline KrausChannel qm_counterfeit_adapter(const KrausChannel& attack,
                                           const SpaceShape& note_space) {
  int d = note_space.dim();
  if (attack.out_shape().dim() == d * d) return attack;
  if (attack.out_shape().dim() == d) {
    CMatrix mixed = CMatrix::identity(d) * Complex(1.0 / d, 0.0);
    return tensor(attack, prep_channel(mixed, note_space));
  }
  throw Error("attack shape mismatch: counterfeit output");
}

}  // namespace qte
