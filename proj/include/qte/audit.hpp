// Seeded numerical audit harness: a registry of quantitative claims about
// the library's schemes, attacks, and bounds. Each case runs a deterministic
// desk-scale computation and reports one record per check, with signed
// residuals for identities and signed slack for one-sided bounds.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "attacks.hpp"
#include "constructions.hpp"
#include "enumeration.hpp"
#include "sampling.hpp"
#include "serialize.hpp"
#include "version.hpp"

namespace qte {

// ---------------------------------------------------------------------------
// Report plumbing.

struct CheckRecord {
  std::string name;
  std::string kind;  // "identity" or "bound"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;      // identity: lhs - rhs; bound: rhs - lhs
  double tolerance = 0.0;  // identity: |slack| <= tol; bound: slack >= -tol
  bool pass = false;
};

struct AuditCase {
  std::string id;
  std::map<std::string, double> params;  // advisory numeric overrides
  uint64_t seed = 1;
  int trials = 0;  // 0 keeps the registered default
  int dim_cap = limits::default_dim_cap;
};

struct AuditReport {
  std::string case_id;
  std::string claim;
  uint64_t seed = 1;
  int trials = 0;
  int dim_cap = limits::default_dim_cap;
  double wall_ms = 0.0;
  std::vector<CheckRecord> checks;
  std::string error;  // nonempty when the case aborted; pass is then false
  bool pass = false;
  std::string version = artifact_version;

  int passed_count() const {
    int n = 0;
    for (const auto& c : checks)
      if (c.pass) ++n;
    return n;
  }
};

// Collects check records with the two pass rules used everywhere:
// identities pass when |lhs - rhs| <= tolerance, one-sided bounds
// (lhs <= rhs) pass when rhs - lhs >= -tolerance.
class Recorder {
 public:
  void identity(const std::string& name, double lhs, double rhs,
                double tolerance = tol::identity) {
    CheckRecord r;
    r.name = name;
    r.kind = "identity";
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = lhs - rhs;
    r.tolerance = tolerance;
    r.pass = std::abs(r.slack) <= tolerance;
    checks.push_back(std::move(r));
  }

  void bound(const std::string& name, double lhs, double rhs,
             double tolerance = tol::inequality) {
    CheckRecord r;
    r.name = name;
    r.kind = "bound";
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tolerance = tolerance;
    r.pass = r.slack >= -tolerance;
    checks.push_back(std::move(r));
  }

  // An identity that must hold with no numerical allowance at all.
  void exact(const std::string& name, double lhs, double rhs) {
    identity(name, lhs, rhs, 0.0);
  }

  std::vector<CheckRecord> checks;
};

namespace detail {

inline int case_trials(const AuditCase& c, int fallback) {
  return c.trials > 0 ? c.trials : fallback;
}

inline std::string tr(int i) { return " [trial " + std::to_string(i) + "]"; }

// Worst entrywise disagreement of two channels over a basis of matrix
// units of the input space.
inline double channel_residual(const KrausChannel& a, const KrausChannel& b) {
  require(a.in_shape().dim() == b.in_shape().dim() &&
              a.out_shape().dim() == b.out_shape().dim(),
          "shape mismatch: channel comparison");
  int d = a.in_shape().dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::ketbra(d, i, j);
      worst = std::max(worst, (a.apply(unit) - b.apply(unit)).norm_max());
    }
  return worst;
}

// A revocation scheme with random channels but a genuinely classical
// verifier outcome, so that gentle decoding of it is well defined.
inline QecmrScheme random_qecmr_classical_ver(Rng& rng, int n_messages, int n_keys,
                                              int cipher_dim, int rev_dim) {
  QecmrScheme s = random_qecmr(rng, n_messages, n_keys, cipher_dim, rev_dim);
  for (int k = 0; k < n_keys; ++k)
    s.ver[static_cast<size_t>(k)] = measure_channel(random_povm(rng, rev_dim, 2), "F");
  return s;
}

inline std::vector<std::string> binary_messages() { return {"0", "1"}; }

// ---------------------------------------------------------------------------
// T01: the spectral two-outcome measurement attains the trace norm.

inline void run_t01(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 200);
  for (int t = 0; t < n; ++t) {
    int d = 2 + rng.next_int(7);  // 2..8
    CMatrix a = random_density(rng, d) * Complex(rng.next_double(), 0.0);
    CMatrix b = random_density(rng, d) * Complex(rng.next_double(), 0.0);
    HelstromPair hp = helstrom_pair(a, b);
    rec.identity("optimal test saturation equals the trace norm" + tr(t), hp.saturation,
                 trace_norm(a - b), tol::inequality);
  }
  CMatrix a0 = CMatrix::projector(CMatrix::ket(2, 0));
  CMatrix b0 = a0 * Complex(0.5, 0.0);
  rec.identity("pinned pair: trace norm of a half-weight difference", trace_norm(a0 - b0), 0.5,
               1e-12);
  rec.identity("pinned pair: saturation at the half-weight difference",
               helstrom_pair(a0, b0).saturation, 0.5, 1e-12);
}

// ---------------------------------------------------------------------------
// T02: closed form for the trace distance of subnormalized vector states.

inline void run_t02(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 200);
  for (int t = 0; t < n; ++t) {
    int d = 2 + rng.next_int(7);
    CMatrix u = random_ket(rng, d) * Complex(0.2 + 0.8 * rng.next_double(), 0.0);
    CMatrix v = random_ket(rng, d) * Complex(0.2 + 0.8 * rng.next_double(), 0.0);
    rec.identity("vector-state distance agrees with the spectral value" + tr(t), td_pure(u, v),
                 trace_distance(CMatrix::projector(u), CMatrix::projector(v)), tol::inequality);
  }
  double inv = 1.0 / std::sqrt(2.0);
  CMatrix plus = (CMatrix::ket(2, 0) + CMatrix::ket(2, 1)) * Complex(inv, 0.0);
  CMatrix minus = (CMatrix::ket(2, 0) - CMatrix::ket(2, 1)) * Complex(inv, 0.0);
  rec.identity("pinned pair: diagonal-basis conjugates are orthogonal", td_pure(plus, minus), 1.0,
               1e-12);
}

// ---------------------------------------------------------------------------
// T03: repeated copies separate at least exponentially fast.

inline void run_t03(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 50);
  for (int t = 0; t < n; ++t) {
    CMatrix p0 = CMatrix::projector(random_ket(rng, 2));
    CMatrix p1 = CMatrix::projector(random_ket(rng, 2));
    double d1 = trace_distance(p0, p1);
    CMatrix acc0 = p0, acc1 = p1;
    for (int copies = 1; copies <= 4; ++copies) {
      double lb = bound_eval(BoundKind::copies_lb, {{"t", static_cast<double>(copies)},
                                                    {"d", d1}});
      rec.bound("copy count " + std::to_string(copies) +
                    ": product-state distance above the exponential bound" + tr(t),
                lb, trace_distance(acc0, acc1), tol::inequality);
      if (copies < 4) {
        acc0 = tensor_product(acc0, p0);
        acc1 = tensor_product(acc1, p1);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// T04: trace norm is additive across labeled orthogonal blocks.

inline void run_t04(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 100);
  for (int t = 0; t < n; ++t) {
    int blocks = 2 + rng.next_int(4);  // 2..5
    int d = 2 + rng.next_int(5);       // 2..6
    CMatrix big(blocks * d, blocks * d);
    double sum = 0.0;
    for (int x = 0; x < blocks; ++x) {
      CMatrix m = random_gaussian(rng, d, d);
      sum += trace_norm(m);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) big.eigen()(x * d + i, x * d + j) = m(i, j);
    }
    rec.identity("blockwise trace norms add" + tr(t), trace_norm(big), sum, tol::inequality);
  }
}

// ---------------------------------------------------------------------------
// T05: coherent gentle measurement: marginal identity and disturbance bound.

inline void run_t05(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 200);
  for (int t = 0; t < n; ++t) {
    int dx = 2 + rng.next_int(5);  // 2..6
    int ny = 2 + rng.next_int(5);  // 2..6
    KrausChannel phi = measure_channel(random_povm(rng, dx, ny), "Y");
    KrausChannel cgm = cgm_of_channel(phi, "Y");
    // Marginal identity: discarding the input register and dephasing the
    // outcome register recovers the measured channel itself.
    int nx = phi.in_shape().factor_count();
    std::vector<int> drop;
    for (int i = 0; i < nx; ++i) drop.push_back(i);
    KrausChannel to_outcome = discard_factors(cgm.out_shape(), drop);
    SpaceShape yshape = to_outcome.out_shape();
    KrausChannel marginal = compose(dephase_channel(yshape), compose(to_outcome, cgm));
    rec.identity("outcome marginal reproduces the measured channel" + tr(t),
                 channel_residual(marginal, phi), 0.0, tol::identity);
    // Disturbance bound on a random subnormalized state and outcome.
    CMatrix rho = random_density(rng, dx) * Complex(0.2 + 0.8 * rng.next_double(), 0.0);
    int y = rng.next_int(ny);
    double trr = rho.trace().real();
    double py = phi.apply(rho)(y, y).real();
    double lhs =
        0.5 * trace_norm(cgm.apply(rho) -
                         tensor_product(rho, CMatrix::projector(CMatrix::ket(ny, y))));
    double rhs = std::sqrt(std::max(0.0, trr * trr - py * py));
    rec.bound("gentle disturbance below the near-certainty bound" + tr(t), lhs, rhs,
              tol::inequality);
  }
  // Pinned equality case: computational measurement of a diagonal-basis
  // state; both sides equal sqrt(3)/2.
  Povm comp;
  comp.space = SpaceShape::single("X", 2);
  comp.effects = {CMatrix::projector(CMatrix::ket(2, 0)), CMatrix::projector(CMatrix::ket(2, 1))};
  KrausChannel phi2 = measure_channel(comp, "Y");
  KrausChannel cgm2 = cgm_of_channel(phi2, "Y");
  double inv = 1.0 / std::sqrt(2.0);
  CMatrix plus = CMatrix::projector((CMatrix::ket(2, 0) + CMatrix::ket(2, 1)) * Complex(inv, 0.0));
  double target = std::sqrt(3.0) / 2.0;
  double lhs2 = 0.5 * trace_norm(cgm2.apply(plus) -
                                 tensor_product(plus, CMatrix::projector(CMatrix::ket(2, 0))));
  double py2 = phi2.apply(plus)(0, 0).real();
  double rhs2 = std::sqrt(std::max(0.0, 1.0 - py2 * py2));
  rec.identity("pinned equality case: disturbance side", lhs2, target, tol::inequality);
  rec.identity("pinned equality case: bound side", rhs2, target, tol::inequality);
}

// ---------------------------------------------------------------------------
// T06: scaling two states shrinks distance by at most half the larger weight.

inline void run_t06(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 200);
  for (int t = 0; t < n; ++t) {
    int d = 2 + rng.next_int(7);
    CMatrix r0 = random_density(rng, d);
    CMatrix r1 = random_density(rng, d);
    double t0 = rng.next_double(), t1 = rng.next_double();
    double lb = bound_eval(BoundKind::scaled_td_lb,
                           {{"t0", t0}, {"t1", t1}, {"d", trace_distance(r0, r1)}});
    rec.bound("scaled pair stays above half the larger weight times the distance" + tr(t), lb,
              trace_distance(r0 * Complex(t0, 0.0), r1 * Complex(t1, 0.0)), tol::inequality);
  }
}

// ---------------------------------------------------------------------------
// T07: parallel composition: gap additivity, accept factorization, lifts.

inline void run_t07(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 20);
  std::vector<AqecmScheme> heavy = {otp_accept(binary_messages()), id_accept(binary_messages()),
                                    triv_reject(binary_messages()), qotp_accept(1),
                                    conj_parity_pad(2)};
  std::vector<AqecmScheme> light = {otp_accept(binary_messages()), id_accept(binary_messages()),
                                    triv_reject(binary_messages()), qotp_accept(1)};
  for (int t = 0; t < n; ++t) {
    const AqecmScheme& a = heavy[static_cast<size_t>(rng.next_int(static_cast<int>(heavy.size())))];
    const AqecmScheme& b = light[static_cast<size_t>(rng.next_int(static_cast<int>(light.size())))];
    AqecmScheme par = parallel_compose(a, b);
    std::string pair = " [" + a.name + " x " + b.name + ", trial " + std::to_string(t) + "]";
    rec.bound("parallel correctness gap at most the sum of the component gaps" + pair,
              correctness_gap(par), correctness_gap(a) + correctness_gap(b), tol::identity);
    double worst_eff = 0.0;
    int nb = b.keys.size();
    for (int k = 0; k < par.keys.size(); ++k) {
      CMatrix want = tensor_product(dbar_accept_effect(a, k / nb), dbar_accept_effect(b, k % nb));
      worst_eff = std::max(worst_eff, (dbar_accept_effect(par, k) - want).norm_max());
    }
    rec.identity("accept effect factorizes across the product (worst key)" + pair, worst_eff, 0.0,
                 tol::identity);
    // Hybrid lifts preserve the contracted value: fixing one component's
    // ciphertext and decoding it inside the attack leaves the same reduced
    // operator once its flag is conditioned on accept.
    TamperAttack atk = random_isometry_attack(par.cipher_space, 2, rng);
    CMatrix flag1 = CMatrix::projector(CMatrix::ket(2, 1));
    int k1 = rng.next_int(a.keys.size());
    int k2 = rng.next_int(b.keys.size());
    {
      int m2 = rng.next_int(b.message_count());
      KrausChannel lift = lift_attack_to_first(atk.map, a, b, k2, m2);
      CMatrix sigma = a.enc[static_cast<size_t>(k1)].apply(a.message_state(0)) -
                      a.enc[static_cast<size_t>(k1)].apply(a.message_state(1));
      CMatrix c2 = b.enc[static_cast<size_t>(k2)].apply(b.message_state(m2));
      CMatrix direct = effect_contract(
          atk.map.apply(tensor_product(sigma, c2)),
          tensor_product(dbar_accept_effect(a, k1), dbar_accept_effect(b, k2)));
      CMatrix lifted =
          effect_contract(effect_contract(lift.apply(sigma), dbar_accept_effect(a, k1)), flag1);
      rec.identity("lift onto the first component preserves the contracted value" + pair,
                   (direct - lifted).norm_max(), 0.0, tol::identity);
    }
    {
      int m1 = rng.next_int(a.message_count());
      KrausChannel lift = lift_attack_to_second(atk.map, a, b, k1, m1);
      CMatrix sigma = b.enc[static_cast<size_t>(k2)].apply(b.message_state(0)) -
                      b.enc[static_cast<size_t>(k2)].apply(b.message_state(1));
      CMatrix c1 = a.enc[static_cast<size_t>(k1)].apply(a.message_state(m1));
      CMatrix direct = effect_contract(
          atk.map.apply(tensor_product(c1, sigma)),
          tensor_product(dbar_accept_effect(a, k1), dbar_accept_effect(b, k2)));
      CMatrix lifted =
          effect_contract(effect_contract(lift.apply(sigma), dbar_accept_effect(b, k2)), flag1);
      rec.identity("lift onto the second component preserves the contracted value" + pair,
                   (direct - lifted).norm_max(), 0.0, tol::identity);
    }
  }
}

// ---------------------------------------------------------------------------
// T08: a perfect ciphertext distinguisher becomes undetected maximal tampering.

inline void run_t08(const AuditCase&, Recorder& rec, Rng&) {
  AqecmScheme id2 = id_accept(binary_messages());
  TamperAttack atk = cgm_distinguisher_attack(id2, 0, 1);
  TamperProfile prof = tamper_profile(id2, atk.map, 0, 1);
  for (int k = 0; k < id2.keys.size(); ++k)
    rec.identity("conditioned disturbance is total under key " + std::to_string(k),
                 prof.per_key[static_cast<size_t>(k)], 1.0, tol::inequality);
  rec.identity("expected conditioned disturbance is total", prof.expectation, 1.0,
               tol::inequality);
  rec.identity("no nontrivial tamper-evidence level survives", prof.delta_hat, 1.0,
               tol::inequality);
}

// ---------------------------------------------------------------------------
// T09: baseline advantages and the tamper-evidence-to-encryption bound.

inline void run_t09(const AuditCase&, Recorder& rec, Rng& rng) {
  AqecmScheme otp = otp_accept(binary_messages());
  rec.identity("uniform-pad baseline has zero correctness gap", correctness_gap(otp), 0.0,
               tol::identity);
  rec.identity("uniform-pad baseline has zero distinguishing advantage",
               encryption_gap(otp).alpha, 0.0, tol::identity);
  AqecmScheme id2 = id_accept(binary_messages());
  rec.identity("transparent baseline has total distinguishing advantage",
               encryption_gap(id2).alpha, 1.0, tol::identity);
  AqecmScheme qotp = qotp_accept(1);
  rec.identity("qubit-pad baseline has zero distinguishing advantage",
               encryption_gap(qotp).alpha, 0.0, tol::identity);
  rec.identity("qubit-pad baseline has zero correctness gap", correctness_gap(qotp), 0.0,
               tol::identity);

  double prev_alpha = 0.0;
  for (int nq = 2; nq <= 4; ++nq) {
    AqecmScheme s = xor_pad(conj_parity_pad(nq));
    std::string tag = " [pad length " + std::to_string(nq) + "]";
    double alpha = encryption_gap(s).alpha;
    double eps = correctness_gap(s);
    Rng sub = rng.split("gallery" + std::to_string(nq));
    double delta_lb = best_tamper_lower_bound(s, attack_gallery(s, sub, 2));
    rec.bound("distinguishing advantage below the tamper-evidence bound" + tag, alpha,
              std::sqrt(19.0 * (delta_lb + std::sqrt(2.0 * std::max(0.0, eps)))),
              tol::inequality);
    if (nq > 2)
      rec.bound("distinguishing advantage does not grow with the pad length" + tag, alpha,
                prev_alpha, tol::inequality);
    prev_alpha = alpha;
  }
}

// ---------------------------------------------------------------------------
// T10: banknote correctness within the minting threshold.

inline void run_t10(const AuditCase&, Recorder& rec, Rng&) {
  {
    QmScheme q = qm_of(otp_accept(binary_messages()), 0.0);
    rec.bound("notes of the uniform-pad scheme verify at threshold zero", correctness_gap(q), 0.0,
              tol::identity);
  }
  {
    QmScheme q = qm_of(conj_parity_pad(2), 0.0);
    rec.bound("notes of the conjugate-coding scheme verify at threshold zero",
              correctness_gap(q), 0.0, tol::identity);
  }
  {
    QmScheme q = qm_of(conj_parity_pad(2), 0.3);
    rec.bound("a lenient threshold still bounds the verification gap", correctness_gap(q), 0.3,
              tol::identity);
  }
  {
    QmScheme q = qm_of(triv_reject(binary_messages()), 0.0);
    rec.exact("with no decodable pairs the fallback mint covers every pair",
              static_cast<double>(q.keys.size()), 2.0);
    rec.bound("the fallback verifier accepts its own notes", correctness_gap(q), 0.0,
              tol::probability);
  }
}

// ---------------------------------------------------------------------------
// T11: forgery values of money built on weak schemes.

inline void run_t11(const AuditCase&, Recorder& rec, Rng& rng) {
  AqecmScheme id2 = id_accept(binary_messages());
  {
    QmScheme q = qm_of(id2, 0.0);
    TamperAttack copy = full_measure_attack(id2.cipher_space);
    ForgeryValue fv = qm_forgery_value(q, qm_counterfeit_adapter(copy.map, q.note_space));
    rec.identity("measuring a transparent note forges it with certainty", fv.value, 1.0,
                 tol::inequality);
    // A forger that beats 1/|messages| certifies tampering weakness: the
    // certified level (value - 1/2)/4 must lie below an exhibited attack.
    Rng sub = rng.split("gallery");
    double delta_lb = best_tamper_lower_bound(id2, attack_gallery(id2, sub, 2));
    rec.bound("the forgery value certifies an exhibited tampering level", (fv.value - 0.5) / 4.0,
              delta_lb, tol::inequality);
  }
  {
    QmScheme q = qm_of(triv_reject(binary_messages()), 0.0);  // fallback mint
    KrausChannel atk =
        qm_counterfeit_adapter(identity_channel(q.note_space), q.note_space);
    ForgeryValue fv = qm_forgery_value(q, atk);
    rec.identity("the fallback mint is forged with certainty", fv.value, 1.0, tol::inequality);
    rec.bound("forgery exceeds the guessing level only because the scheme never decodes", 0.5,
              fv.value, tol::inequality);
    rec.bound("forgery still obeys the bound with the incorrectness term", fv.value,
              0.5 + 0.0 + 1.0, tol::inequality);
  }
  {
    QmScheme q = qm_of(triv_reject(binary_messages()), 0.0, true);  // honest weak verifier
    KrausChannel atk =
        qm_counterfeit_adapter(identity_channel(q.note_space), q.note_space);
    ForgeryValue fv = qm_forgery_value(q, atk);
    rec.identity("the honest verifier of the rejecting scheme accepts no forgery", fv.value, 0.0,
                 tol::probability);
  }
}

// ---------------------------------------------------------------------------
// T12: identifying a state from a labeled family.

inline void run_t12(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 100);
  for (int t = 0; t < n; ++t) {
    int d = 2 + rng.next_int(5);    // 2..6
    int ns = 2 + rng.next_int(3);   // 2..4
    std::vector<CMatrix> states;
    for (int m = 0; m < ns; ++m) states.push_back(random_density(rng, d));
    std::vector<double> mu = random_distribution(rng, ns);
    Povm povm = random_povm(rng, d, ns);
    double success = 0.0;
    for (int m = 0; m < ns; ++m)
      success += mu[static_cast<size_t>(m)] *
                 trace_of_product(povm.effects[static_cast<size_t>(m)],
                                  states[static_cast<size_t>(m)])
                     .real();
    double delta = 0.0;
    for (int i = 0; i < ns; ++i)
      for (int j = i + 1; j < ns; ++j)
        delta = std::max(delta, trace_distance(states[static_cast<size_t>(i)],
                                               states[static_cast<size_t>(j)]));
    double maxmu = *std::max_element(mu.begin(), mu.end());
    rec.bound("identification bounded by guessing plus pairwise distinguishability" + tr(t),
              success, maxmu * (1.0 - 2.0 * delta) + 2.0 * delta, tol::inequality);
  }
}

// ---------------------------------------------------------------------------
// T13: the deletion game and the accepted-residual distance translate.

inline void run_t13(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 10);
  for (int t = 0; t < n; ++t) {
    Rng sub = rng.split("scheme" + std::to_string(t));
    int nk = 2 + sub.next_int(2);        // 2..3 keys
    int cd = 3 + sub.next_int(2);        // cipher dim 3..4
    int rd = 2 + sub.next_int(2);        // token dim 2..3
    QecmrScheme s = random_qecmr(sub, 2, nk, cd, rd);
    SpaceShape aux = SpaceShape::single("A", 2);
    KrausChannel attack = random_cptp(sub, s.cipher_space, s.rev_space.concat(aux), 2);
    RevAttackValue val = rev_attack_value(s, attack, 0, 1);
    RevGame game = game_from_rev_attack(s, attack, 0, 1);
    double v0 = rev_game_value(s, game, 0);
    double v1 = rev_game_value(s, game, 1);
    RevGame flipped = game;
    flipped.flipped = true;
    double f0 = rev_game_value(s, flipped, 0);
    double f1 = rev_game_value(s, flipped, 1);
    rec.identity("flip-pair advantage sum equals twice the expected residual distance" + tr(t),
                 (v0 - v1) + (f1 - f0), 2.0 * val.expectation, tol::inequality);

    // A generic game is bounded by its decomposition into pair attacks.
    RevGame g;
    g.aux0 = SpaceShape::single("A0", 2);
    g.initial = random_density(sub, 2 * 2 * 2);
    g.aux1 = SpaceShape::single("A1", 2);
    g.process = random_cptp(sub, s.cipher_space.concat(g.aux0), s.rev_space.concat(g.aux1), 2);
    g.accept = random_povm(sub, s.keys.size() * 2, 2).effects[0];
    double adv = rev_game_advantage(s, g);
    double rhs = 0.0;
    for (const auto& pa : rev_attacks_from_game(s, g))
      rhs += pa.prob * 2.0 * rev_attack_value(s, pa.attack, pa.m0, pa.m1).expectation;
    rec.bound("game advantage below the pair-averaged residual bound" + tr(t), adv, rhs,
              tol::inequality);
  }
  // Honest-token sanity: the canonical game built from the do-nothing
  // attack on a faithful revocation scheme has no advantage.
  QecmrScheme honest = rev_of(otp_accept(binary_messages()));
  KrausChannel idc = identity_channel(honest.cipher_space);
  RevGame game = game_from_rev_attack(honest, idc, 0, 1);
  rec.identity("returning the token honestly yields zero advantage",
               rev_game_advantage(honest, game), 0.0, tol::probability);
}

// ---------------------------------------------------------------------------
// T14: gentle decoding of a revocation scheme: correctness and exact values.

inline void run_t14(const AuditCase&, Recorder& rec, Rng& rng) {
  QecmrScheme sr = rev_of(conj_parity_pad(2));
  double eps = correctness_gap(sr);
  AqecmScheme te = te_of(sr);
  rec.bound("gently decoded composite stays correct within twice the quartic root",
            correctness_gap(te), 2.0 * std::pow(std::max(0.0, eps), 0.25), tol::inequality);
  {
    Rng sub = rng.split("random");
    QecmrScheme s2 = random_qecmr_classical_ver(sub, 2, 2, 3, 3);
    rec.bound("quartic-root correctness bound on a random revocation scheme",
              correctness_gap(te_of(s2)),
              2.0 * std::pow(std::max(0.0, correctness_gap(s2)), 0.25), tol::inequality);
  }
  // Exact translation: a tamper attack on the gently decoded scheme is a
  // revocation attack on the base scheme with identical per-key values.
  Rng sub = rng.split("gallery");
  for (const auto& atk : attack_gallery(te, sub, 2)) {
    TamperProfile tp = tamper_profile(te, atk.map, 0, 1);
    KrausChannel ra = rev_attack_from_tamper(sr, atk.map);
    RevAttackValue rv = rev_attack_value(sr, ra, 0, 1);
    double worst = 0.0;
    for (int k = 0; k < sr.keys.size(); ++k)
      worst = std::max(worst, std::abs(tp.per_key[static_cast<size_t>(k)] -
                                       rv.per_key[static_cast<size_t>(k)]));
    rec.identity("per-key tamper values equal revocation-attack values [" + atk.name + "]", worst,
                 0.0, tol::inequality);
    rec.identity("expected tamper value equals the expected revocation value [" + atk.name + "]",
                 tp.expectation, rv.expectation, tol::inequality);
  }
  // And the reverse adaptation is the identity when tokens are ciphertexts.
  KrausChannel back = tamper_attack_from_rev(sr, identity_channel(sr.cipher_space));
  rec.identity("on token-equals-ciphertext schemes the reverse adaptation is the identity",
               channel_residual(back, identity_channel(sr.cipher_space)), 0.0, tol::identity);
}

// ---------------------------------------------------------------------------
// T15: the accept branch of gentle decoding equals the verified branch.

inline void run_t15(const AuditCase&, Recorder& rec, Rng& rng) {
  std::vector<QecmrScheme> schemes;
  schemes.push_back(rev_of(conj_parity_pad(2)));
  schemes.push_back(rev_of(otp_accept(binary_messages())));
  Rng sub = rng.split("random");
  schemes.push_back(random_qecmr_classical_ver(sub, 2, 3, 3, 2));
  for (const auto& s : schemes) {
    AqecmScheme te = te_of(s);
    double worst = 0.0;
    for (int k = 0; k < s.keys.size(); ++k)
      worst = std::max(
          worst, (dbar_accept_effect(te, k) -
                  s.rev.apply_adjoint(vbar_accept_effect(s, k)))
                     .norm_max());
    rec.identity("accept effect equals the verified revocation effect (worst key) [" + s.name +
                     "]",
                 worst, 0.0, tol::identity);
  }
}

// ---------------------------------------------------------------------------
// T16: flipping the shared pad bit flips the message undetected.

inline void run_t16(const AuditCase&, Recorder& rec, Rng&) {
  AqecmScheme s = xor_pad(conj_parity_pad(3));
  TamperAttack flip = bitflip_attack(s.cipher_space);
  double worst_state = 0.0;
  double min_success = 1.0;
  for (int k = 0; k < s.keys.size(); ++k)
    for (int b = 0; b < 2; ++b) {
      CMatrix enc_b = s.enc[static_cast<size_t>(k)].apply(s.message_state(b));
      CMatrix enc_flip = s.enc[static_cast<size_t>(k)].apply(s.message_state(1 - b));
      CMatrix attacked = flip.map.apply(enc_b);
      worst_state = std::max(worst_state, (attacked - enc_flip).norm_max());
      double success =
          trace_of_product(dbar_message_effect(s, k, 1 - b), attacked).real();
      min_success = std::min(min_success, success);
    }
  rec.identity("flipping the pad share maps each encoding onto the other message's (worst key)",
               worst_state, 0.0, tol::identity);
  rec.identity("the flipped message decodes and passes under every key", min_success, 1.0,
               tol::identity);
  TamperProfile prof = tamper_profile(s, flip.map, 0, 1);
  double worst_val = 0.0;
  for (double v : prof.per_key) worst_val = std::max(worst_val, v);
  rec.identity("the flip leaves no conditioned trace under any key", worst_val, 0.0,
               tol::probability);
  rec.identity("the flip leaves no conditioned trace in expectation", prof.expectation, 0.0,
               tol::probability);
  rec.identity("the flip certifies no tamper-evidence level", prof.delta_hat, 0.0,
               tol::probability);
}

// ---------------------------------------------------------------------------
// T17: conjugate-basis inputs stay perfectly distinguishable across keys.

inline void run_t17(const AuditCase&, Recorder& rec, Rng&) {
  AqecmScheme s = xor_pad(conj_parity_pad(2));
  double inv = 1.0 / std::sqrt(2.0);
  CMatrix plus = CMatrix::projector((CMatrix::ket(2, 0) + CMatrix::ket(2, 1)) * Complex(inv, 0.0));
  CMatrix minus =
      CMatrix::projector((CMatrix::ket(2, 0) - CMatrix::ket(2, 1)) * Complex(inv, 0.0));
  std::vector<CMatrix> enc_plus, enc_minus;
  for (int k = 0; k < s.keys.size(); ++k) {
    enc_plus.push_back(s.enc[static_cast<size_t>(k)].apply(plus));
    enc_minus.push_back(s.enc[static_cast<size_t>(k)].apply(minus));
  }
  double worst = 1.0;
  for (int k0 = 0; k0 < s.keys.size(); ++k0)
    for (int k1 = 0; k1 < s.keys.size(); ++k1)
      worst = std::min(worst, trace_distance(enc_plus[static_cast<size_t>(k0)],
                                             enc_minus[static_cast<size_t>(k1)]));
  rec.identity("diagonal-basis inputs remain orthogonal across every key pair", worst, 1.0,
               tol::inequality);
}

// ---------------------------------------------------------------------------
// T18: splitting attacks against doubled and pad-shared ciphertexts.

inline void run_t18(const AuditCase&, Recorder& rec, Rng&) {
  // Doubled scheme, smallest size: full channel value, factorized value,
  // and exhaustive enumeration all agree.
  AqecmScheme inner1 = conj_parity_pad(1);
  DoubleSplitReport d1 = double_split_report(inner1);
  oracle::DoubleOracleReport o1 = oracle::double_split_oracle_conj(1);
  rec.identity("doubled scheme: factorized forgery matches enumeration [1 qubit]", d1.forgery,
               o1.forgery, tol::inequality);
  rec.identity("doubled scheme: factorized half decode matches enumeration [1 qubit]",
               d1.half_decode_min, o1.half_decode_min, tol::inequality);
  {
    AqecmScheme dbl = double_of(inner1);
    QmScheme q = qm_of(dbl, 0.0);
    TamperAttack split =
        double_split_attack(dbl.cipher_space, inner1.cipher_space.factor_count());
    ForgeryValue fv = qm_forgery_value(q, qm_counterfeit_adapter(split.map, q.note_space));
    rec.identity("doubled scheme: full channel forgery matches the factorized value [1 qubit]",
                 fv.value, d1.forgery, tol::inequality);
  }
  // Doubled scheme at the pinned desk size: both halves decode perfectly,
  // the forgery matches enumeration and stays below certainty.
  DoubleSplitReport d3 = double_split_report(conj_parity_pad(3));
  oracle::DoubleOracleReport o3 = oracle::double_split_oracle_conj(3);
  rec.identity("doubled scheme: both halves decode with certainty [3 qubits]", d3.half_decode_min,
               1.0, tol::inequality);
  rec.exact("doubled scheme: enumeration confirms certain decoding [3 qubits]",
            o3.half_decode_min, 1.0);
  rec.identity("doubled scheme: forgery matches enumeration [3 qubits]", d3.forgery, o3.forgery,
               tol::inequality);
  rec.bound("doubled scheme: verification rejects at least one half [3 qubits]", d3.forgery,
            1.0 - tol::inequality, 0.0);

  // Pad-shared composition of two perfectly correct components.
  AqecmScheme a = conj_parity_pad(1);
  AqecmScheme b = conj_parity_pad(1);
  GroupTable g = GroupTable::cyclic(a.messages);
  ShareSplitReport sr = share_split_report(a, b, g);
  oracle::StarOracleReport so = oracle::star_split_oracle(oracle::star_component_conj(1),
                                                          oracle::star_component_conj(1), 2);
  rec.identity("shared pad: each first half accepts with certainty", sr.half1_accept_min, 1.0,
               tol::identity);
  rec.identity("shared pad: each second half accepts with certainty", sr.half2_accept_min, 1.0,
               tol::identity);
  rec.exact("shared pad: enumerated decode probability is exactly one half",
            so.half1_decode_min, 0.5);
  rec.identity("shared pad: first-half decode matches enumeration (min)", sr.half1_decode_min,
               so.half1_decode_min, tol::inequality);
  rec.identity("shared pad: first-half decode matches enumeration (max)", sr.half1_decode_max,
               so.half1_decode_max, tol::inequality);
  rec.identity("shared pad: second-half decode matches enumeration (min)", sr.half2_decode_min,
               so.half2_decode_min, tol::inequality);
  rec.identity("shared pad: second-half decode matches enumeration (max)", sr.half2_decode_max,
               so.half2_decode_max, tol::inequality);
  rec.identity("shared pad: factorized forgery matches enumeration", sr.forgery, so.forgery,
               tol::inequality);
  {
    AqecmScheme star = star_of(a, b, &g);
    QmScheme q = qm_of(star, 0.0);
    TamperAttack split = share_split_attack(a.cipher_space, b.cipher_space);
    ForgeryValue fv = qm_forgery_value(q, qm_counterfeit_adapter(split.map, q.note_space));
    rec.identity("shared pad: full channel forgery matches the factorized value", fv.value,
                 sr.forgery, tol::inequality);
  }
}

// ---------------------------------------------------------------------------
// T19: inclusion-exclusion for the pad-randomized serial composition.

inline void run_t19(const AuditCase&, Recorder& rec, Rng&) {
  struct Instance {
    AqecmScheme a, b;
    std::string label;
  };
  std::vector<Instance> instances;
  instances.push_back({conj_parity_pad(1), conj_parity_pad(1), "conjugate x conjugate"});
  instances.push_back({otp_accept(binary_messages()), triv_reject(binary_messages()),
                       "uniform pad x rejecting transport"});
  for (const auto& inst : instances) {
    GroupTable g = GroupTable::cyclic(inst.a.messages);
    AqecmScheme star = star_of(inst.a, inst.b, &g);
    int nb = inst.b.keys.size();
    double worst = 0.0;
    for (int k = 0; k < star.keys.size(); ++k) {
      CMatrix ea = dbar_accept_effect(inst.a, k / nb);
      CMatrix eb = dbar_accept_effect(inst.b, k % nb);
      CMatrix ia = CMatrix::identity(inst.a.cipher_space.dim());
      CMatrix ib = CMatrix::identity(inst.b.cipher_space.dim());
      CMatrix want =
          tensor_product(ea, ib) + tensor_product(ia, eb) - tensor_product(ea, eb);
      worst = std::max(worst, (dbar_accept_effect(star, k) - want).norm_max());
    }
    rec.identity("composite accept effect obeys inclusion-exclusion (worst key) [" + inst.label +
                     "]",
                 worst, 0.0, tol::identity);
  }
}

// ---------------------------------------------------------------------------
// T20: the always-rejecting transport admits no undetected tampering at all.

inline void run_t20(const AuditCase&, Recorder& rec, Rng& rng) {
  for (int nm = 2; nm <= 3; ++nm) {
    std::vector<std::string> msgs;
    for (int m = 0; m < nm; ++m) msgs.push_back(std::to_string(m));
    AqecmScheme s = triv_reject(msgs);
    Rng sub = rng.split("gallery" + std::to_string(nm));
    std::string tag = " [" + std::to_string(nm) + " messages]";
    for (const auto& atk : attack_gallery(s, sub, 2)) {
      double worst_val = 0.0, worst_exp = 0.0, worst_hat = 0.0;
      for (int i = 0; i < s.message_count(); ++i)
        for (int j = i + 1; j < s.message_count(); ++j) {
          TamperProfile p = tamper_profile(s, atk.map, i, j);
          for (double v : p.per_key) worst_val = std::max(worst_val, v);
          worst_exp = std::max(worst_exp, p.expectation);
          worst_hat = std::max(worst_hat, p.delta_hat);
        }
      rec.exact("every conditioned distance vanishes [" + atk.name + tag + "]", worst_val, 0.0);
      rec.exact("every expected value vanishes [" + atk.name + tag + "]", worst_exp, 0.0);
      rec.exact("no tampering level is certified [" + atk.name + tag + "]", worst_hat, 0.0);
    }
  }
}

// ---------------------------------------------------------------------------
// T21: tail, anti-concentration, and conditioning bounds for finite variables.

inline void run_t21(const AuditCase& c, Recorder& rec, Rng& rng) {
  int n = case_trials(c, 1000);
  {
    Rng sub = rng.split("tail");
    double worst = -1.0;
    for (int t = 0; t < n; ++t) {
      int atoms = 2 + sub.next_int(7);
      std::vector<double> p = random_distribution(sub, atoms);
      std::vector<double> x(static_cast<size_t>(atoms));
      for (auto& v : x) v = 2.0 * sub.next_double();
      double alpha = (0.02 + 0.98 * sub.next_double()) * 2.0;
      double expect = 0.0, pr = 0.0;
      for (int i = 0; i < atoms; ++i) {
        expect += p[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        if (x[static_cast<size_t>(i)] >= alpha) pr += p[static_cast<size_t>(i)];
      }
      double ub = bound_eval(BoundKind::markov_ub, {{"expect", expect}, {"alpha", alpha}});
      worst = std::max(worst, pr - ub);
    }
    rec.bound("tail probability at most expectation over threshold (worst of " +
                  std::to_string(n) + ")",
              worst, 0.0, tol::probability);
  }
  {
    Rng sub = rng.split("anticoncentration");
    double worst = -1.0;
    for (int t = 0; t < n; ++t) {
      int atoms = 2 + sub.next_int(7);
      double beta = 1.0 + sub.next_double();
      std::vector<double> p = random_distribution(sub, atoms);
      std::vector<double> x(static_cast<size_t>(atoms));
      for (auto& v : x) v = beta * sub.next_double();
      double alpha = 0.98 * beta * sub.next_double();
      double expect = 0.0, pr = 0.0;
      for (int i = 0; i < atoms; ++i) {
        expect += p[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        if (x[static_cast<size_t>(i)] > alpha) pr += p[static_cast<size_t>(i)];
      }
      double lb = bound_eval(BoundKind::conc_lb,
                             {{"expect", expect}, {"alpha", alpha}, {"beta", beta}});
      worst = std::max(worst, lb - pr);
    }
    rec.bound("bounded variables exceed a threshold with the guaranteed probability (worst of " +
                  std::to_string(n) + ")",
              worst, 0.0, tol::probability);
  }
  {
    Rng sub = rng.split("conditioning");
    double worst = -1.0;
    for (int t = 0; t < n; ++t) {
      int atoms = 2 + sub.next_int(7);
      std::vector<double> p = random_distribution(sub, atoms);
      double fmax = 0.5 + 2.0 * sub.next_double();
      std::vector<double> f(static_cast<size_t>(atoms));
      for (auto& v : f) v = fmax * sub.next_double();
      std::vector<bool> kept(static_cast<size_t>(atoms));
      for (int i = 0; i < atoms; ++i) kept[static_cast<size_t>(i)] = sub.next_int(2) == 0;
      double pg = 0.0;
      for (int i = 0; i < atoms; ++i)
        if (kept[static_cast<size_t>(i)]) pg += p[static_cast<size_t>(i)];
      if (pg < 0.1) {
        // Keep the heaviest atom so the conditional expectation is well
        // posed (its probability is at least 1/atoms >= 1/8).
        int arg = 0;
        for (int i = 1; i < atoms; ++i)
          if (p[static_cast<size_t>(i)] > p[static_cast<size_t>(arg)]) arg = i;
        if (!kept[static_cast<size_t>(arg)]) {
          kept[static_cast<size_t>(arg)] = true;
          pg += p[static_cast<size_t>(arg)];
        }
      }
      double ea = 0.0, num = 0.0;
      for (int i = 0; i < atoms; ++i) {
        ea += p[static_cast<size_t>(i)] * f[static_cast<size_t>(i)];
        if (kept[static_cast<size_t>(i)]) num += p[static_cast<size_t>(i)] * f[static_cast<size_t>(i)];
      }
      double eb = num / pg;
      worst = std::max(worst, std::abs(ea - eb) - fmax * (1.0 - pg));
    }
    rec.bound("conditioning shifts an expectation by at most range times escape (worst of " +
                  std::to_string(n) + ")",
              worst, 0.0, tol::probability);
  }
  {
    Rng sub = rng.split("identification");
    double worst = -1.0;
    for (int t = 0; t < n; ++t) {
      int d = 2 + sub.next_int(3);   // 2..4
      int ns = 2 + sub.next_int(2);  // 2..3
      std::vector<CMatrix> states;
      for (int m = 0; m < ns; ++m) states.push_back(random_density(sub, d));
      std::vector<double> mu = random_distribution(sub, ns);
      Povm povm = random_povm(sub, d, ns);
      double success = 0.0;
      for (int m = 0; m < ns; ++m)
        success += mu[static_cast<size_t>(m)] *
                   trace_of_product(povm.effects[static_cast<size_t>(m)],
                                    states[static_cast<size_t>(m)])
                       .real();
      double delta = 0.0;
      for (int i = 0; i < ns; ++i)
        for (int j = i + 1; j < ns; ++j)
          delta = std::max(delta, trace_distance(states[static_cast<size_t>(i)],
                                                 states[static_cast<size_t>(j)]));
      double maxmu = *std::max_element(mu.begin(), mu.end());
      worst = std::max(worst, success - (maxmu * (1.0 - 2.0 * delta) + 2.0 * delta));
    }
    rec.bound("state identification obeys the guessing-plus-distinguishability bound (worst of " +
                  std::to_string(n) + ")",
              worst, 0.0, tol::probability);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry.

struct RegistryEntry {
  std::string id;
  std::string claim;
  int default_trials = 1;
  int needed_dim = 2;  // largest scheme-space dimension the case declares
  std::function<void(const AuditCase&, Recorder&, Rng&)> run;
};

inline const std::vector<RegistryEntry>& audit_registry() {
  static const std::vector<RegistryEntry> entries = {
      {"T01",
       "The spectral two-outcome measurement attains the trace norm when distinguishing two "
       "subnormalized states.",
       200, 8, detail::run_t01},
      {"T02",
       "The closed form for the trace distance of subnormalized vector states matches the "
       "spectral computation.",
       200, 8, detail::run_t02},
      {"T03",
       "Product states of repeated copies separate at least as fast as the exponential bound "
       "in the copy count.",
       50, 16, detail::run_t03},
      {"T04", "The trace norm is additive across classically labeled orthogonal blocks.", 100, 30,
       detail::run_t04},
      {"T05",
       "The coherent gentle measurement reproduces the measured channel on its outcome register "
       "and disturbs the input no more than the near-certainty bound allows.",
       200, 36, detail::run_t05},
      {"T06",
       "Scaling two states by weights at most one shrinks their trace distance by at most half "
       "the larger weight.",
       200, 8, detail::run_t06},
      {"T07",
       "Correctness gaps add across parallel composition, the accept effect factorizes, and "
       "hybrid lifting preserves contracted attack values.",
       20, 64, detail::run_t07},
      {"T08",
       "A perfect distinguisher of ciphertexts converts into an undetected tampering with "
       "maximal conditioned disturbance.",
       1, 8, detail::run_t08},
      {"T09",
       "Baseline schemes have their exact advantages, and measured distinguishing advantage "
       "stays below the tamper-evidence bound without growing in the pad length.",
       1, 256, detail::run_t09},
      {"T10",
       "Banknotes minted from decodable pairs verify within the declared threshold; with no "
       "qualifying pairs the fallback mint accepts its own notes.",
       1, 8, detail::run_t10},
      {"T11",
       "Counterfeiting probabilities of money built on weak schemes match their closed forms "
       "and certify the schemes' tampering weakness.",
       1, 4, detail::run_t11},
      {"T12",
       "Identifying a state from a finite labeled family succeeds no more often than the "
       "guessing term plus twice the pairwise distinguishability.",
       100, 6, detail::run_t12},
      {"T13",
       "The interactive deletion game and the accepted-residual distance convert into each "
       "other with the stated factor of two.",
       10, 8, detail::run_t13},
      {"T14",
       "Gentle decoding of a revocation scheme stays correct within twice the quartic root of "
       "the base gap, and tamper values translate into revocation values exactly.",
       1, 32, detail::run_t14},
      {"T15",
       "The accept branch of the gently decoded scheme equals the verified revocation branch, "
       "key by key.",
       1, 32, detail::run_t15},
      {"T16", "Flipping the shared pad bit flips the decoded message undetected, with certainty.",
       1, 32, detail::run_t16},
      {"T17",
       "Diagonal-basis plus and minus inputs remain perfectly distinguishable under every pair "
       "of pad keys.",
       1, 16, detail::run_t17},
      {"T18",
       "Splitting a doubled or pad-shared ciphertext yields two halves that decode correctly "
       "while verification rejects at least one, matching exhaustive enumeration.",
       1, 32, detail::run_t18},
      {"T19",
       "The accept effect of the pad-randomized serial composition obeys inclusion-exclusion "
       "in the component accept effects.",
       1, 16, detail::run_t19},
      {"T20",
       "The always-rejecting transport scheme admits no undetected tampering at all: every "
       "attack value vanishes identically.",
       1, 3, detail::run_t20},
      {"T21",
       "Tail, anti-concentration, conditioning, and state-identification bounds hold with "
       "machine-level slack on random finite instances.",
       1000, 6, detail::run_t21},
  };
  return entries;
}

inline const RegistryEntry& find_audit(const std::string& id) {
  for (const auto& e : audit_registry())
    if (e.id == id) return e;
  throw Error("unknown audit id: " + id);
}

// ---------------------------------------------------------------------------
// Execution.

inline AuditReport run_audit(const AuditCase& c) {
  const RegistryEntry& entry = find_audit(c.id);  // throws on unknown id
  AuditReport report;
  report.case_id = entry.id;
  report.claim = entry.claim;
  report.seed = c.seed;
  report.trials = detail::case_trials(c, entry.default_trials);
  report.dim_cap = c.dim_cap;
  auto start = std::chrono::steady_clock::now();
  Recorder rec;
  try {
    require(c.dim_cap >= 1, "schema violation: dimension cap must be positive");
    require(c.dim_cap <= limits::max_dim, "dimension cap exceeded: cap above the global maximum");
    require(entry.needed_dim <= c.dim_cap,
            "dimension cap exceeded: case requires dimension " +
                std::to_string(entry.needed_dim));
    Rng rng = Rng(c.seed).split(entry.id);
    entry.run(c, rec, rng);
  } catch (const Error& e) {
    report.error = e.what();
  }
  auto stop = std::chrono::steady_clock::now();
  report.wall_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start).count();
  report.checks = std::move(rec.checks);
  bool all = report.error.empty();
  for (const auto& ck : report.checks) all = all && ck.pass;
  report.pass = all;
  return report;
}

// Runs every registered case with one shared seed. Cases are independent;
// they may execute concurrently, and the reports are merged back in
// registry order so the output is deterministic either way.
inline std::vector<AuditReport> run_all_audits(uint64_t seed, int trials = 0,
                                               int dim_cap = limits::default_dim_cap,
                                               bool parallel = true) {
  std::vector<AuditCase> cases;
  for (const auto& e : audit_registry()) {
    AuditCase c;
    c.id = e.id;
    c.seed = seed;
    c.trials = trials;
    c.dim_cap = dim_cap;
    cases.push_back(std::move(c));
  }
  std::vector<AuditReport> reports(cases.size());
  // Window the in-flight futures by the core count: beyond it, extra threads
  // only stack up allocation peaks without finishing any sooner.
  size_t window = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
  if (window > 1) {
    std::vector<std::future<AuditReport>> futures(cases.size());
    size_t launched = 0;
    for (size_t i = 0; i < cases.size(); ++i) {
      while (launched < cases.size() && launched < i + window) {
        AuditCase c = cases[launched];
        futures[launched] = std::async(std::launch::async, [c] { return run_audit(c); });
        ++launched;
      }
      reports[i] = futures[i].get();
    }
  } else {
    for (size_t i = 0; i < cases.size(); ++i) reports[i] = run_audit(cases[i]);
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Report emission.

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline Json check_to_json(const CheckRecord& c) {
  return Json{{"name", c.name},   {"kind", c.kind},           {"lhs", c.lhs},
              {"rhs", c.rhs},     {"slack", c.slack},         {"tolerance", c.tolerance},
              {"pass", c.pass}};
}

inline const char* csv_header() {
  return "case,check,kind,lhs,rhs,slack,tolerance,pass\n";
}

inline std::string csv_escape(const std::string& s) {
  bool quote = s.find_first_of(",\"\n") != std::string::npos;
  if (!quote) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline void csv_rows(const AuditReport& r, std::string& out) {
  for (const auto& c : r.checks) {
    out += csv_escape(r.case_id);
    out += ',';
    out += csv_escape(c.name);
    out += ',';
    out += c.kind;
    out += ',';
    out += fmt_double(c.lhs);
    out += ',';
    out += fmt_double(c.rhs);
    out += ',';
    out += fmt_double(c.slack);
    out += ',';
    out += fmt_double(c.tolerance);
    out += ',';
    out += c.pass ? "true" : "false";
    out += '\n';
  }
}

inline void text_report(const AuditReport& r, std::ostringstream& os) {
  os << "== " << r.case_id << "  " << (r.pass ? "PASS" : "FAIL") << "  ("
     << std::fixed << std::setprecision(1) << r.wall_ms << " ms)\n";
  os.unsetf(std::ios::floatfield);
  os << "   " << r.claim << "\n";
  os << "   seed " << r.seed << "  trials " << r.trials << "  dim_cap " << r.dim_cap
     << "  version " << r.version << "\n";
  if (!r.error.empty()) os << "   error: " << r.error << "\n";
  if (!r.checks.empty()) {
    os << "   " << std::left << std::setw(78) << "check" << std::setw(10) << "kind"
       << std::setw(24) << "lhs" << std::setw(24) << "rhs" << std::setw(24) << "slack"
       << std::setw(12) << "tol"
       << "ok\n";
    for (const auto& c : r.checks) {
      std::string name = c.name.size() > 76 ? c.name.substr(0, 73) + "..." : c.name;
      os << "   " << std::left << std::setw(78) << name << std::setw(10) << c.kind
         << std::setw(24) << fmt_double(c.lhs) << std::setw(24) << fmt_double(c.rhs)
         << std::setw(24) << fmt_double(c.slack) << std::setw(12) << fmt_double(c.tolerance)
         << (c.pass ? "yes" : "NO") << "\n";
    }
  }
  os << "   checks: " << r.checks.size() << ", passed: " << r.passed_count()
     << ", failed: " << (r.checks.size() - static_cast<size_t>(r.passed_count())) << "\n";
}

}  // namespace detail

inline Json report_to_json(const AuditReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(detail::check_to_json(c));
  return Json{{"case", r.case_id},   {"claim", r.claim},     {"seed", r.seed},
              {"trials", r.trials},  {"dim_cap", r.dim_cap}, {"wall_ms", r.wall_ms},
              {"version", r.version}, {"error", r.error},    {"pass", r.pass},
              {"checks", checks}};
}

inline std::string emit_report(const std::vector<AuditReport>& reports,
                               const std::string& format) {
  if (format == "json") {
    Json arr = Json::array();
    bool all = true;
    for (const auto& r : reports) {
      arr.push_back(report_to_json(r));
      all = all && r.pass;
    }
    Json doc{{"schema", file_schema},
             {"version", artifact_version},
             {"pass", all},
             {"reports", arr}};
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = detail::csv_header();
    for (const auto& r : reports) detail::csv_rows(r, out);
    return out;
  }
  if (format == "text") {
    std::ostringstream os;
    size_t checks = 0;
    int failed_cases = 0;
    for (const auto& r : reports) {
      detail::text_report(r, os);
      os << "\n";
      checks += r.checks.size();
      if (!r.pass) ++failed_cases;
    }
    os << "cases: " << reports.size() << ", failed: " << failed_cases
       << ", total checks: " << checks << "\n";
    return os.str();
  }
  throw Error("schema violation: report format must be json, csv, or text");
}

inline std::string emit_report(const AuditReport& report, const std::string& format) {
  return emit_report(std::vector<AuditReport>{report}, format);
}

}  // namespace qte
