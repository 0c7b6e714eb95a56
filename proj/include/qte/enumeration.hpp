#pragma once

// Exhaustive-enumeration oracles for the conjugate-coding schemes and
// their split attacks. Everything in this header is computed with plain
// scalar arithmetic over explicitly enumerated keys, basis states, and
// measurement outcomes -- deliberately independent of the operator-level
// machinery in the rest of the library, so the two routes can be compared
// against each other.

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "qte/error.hpp"

namespace qte::oracle {

namespace detail {

inline int parity(int bits, int n) {
  int p = 0;
  for (int i = 0; i < n; ++i) p ^= (bits >> i) & 1;
  return p;
}

// P[measuring basis-theta qubit of computational state b yields outcome o].
inline double qubit_outcome_given_basis_state(int theta, int o, int b) {
  if (theta == 0) return o == b ? 1.0 : 0.0;
  return 0.5;  // Hadamard basis vs computational state
}

// P[measuring basis-theta qubit of the conjugate-coded state (theta, d_i)
// yields outcome o]: bases agree, so the outcome is exact.
inline double qubit_outcome_given_coded_state(int o, int d) { return o == d ? 1.0 : 0.0; }

}  // namespace detail

// Decode statistics of one conjugate-pad key (theta, d), obtained by
// enumerating decoder outcomes (and, for mixed inputs, computational
// basis inputs).
struct ConjKeyStats {
  std::array<double, 2> accept_and_msg{};  // on E_k(m): accept AND decode = m
  std::array<double, 2> msg_only{};        // on E_k(m): decode = m, flag ignored
  double mixed_accept = 0.0;               // on I/d: accept probability
  std::array<double, 2> mixed_msg{};       // on I/d: P[decode = m'], flag ignored
  std::array<double, 2> mixed_accept_msg{};  // on I/d: accept AND decode = m'
};

inline ConjKeyStats conj_key_stats(int n, int theta, int d) {
  require(n >= 1 && n <= 6, "dimension cap exceeded: oracle pad size");
  ConjKeyStats st;
  int nn = 1 << n;
  // Encoded inputs: qubits are exactly (theta, d), the classical bit is
  // m xor parity(d).
  for (int m = 0; m < 2; ++m) {
    for (int o = 0; o < nn; ++o) {
      double p = 1.0;
      for (int i = 0; i < n; ++i)
        p *= detail::qubit_outcome_given_coded_state((o >> i) & 1, (d >> i) & 1);
      if (p == 0.0) continue;
      int c = m ^ detail::parity(d, n);
      int decoded = c ^ detail::parity(o, n);
      if (decoded == m) {
        st.msg_only[static_cast<size_t>(m)] += p;
        if (o == d) st.accept_and_msg[static_cast<size_t>(m)] += p;
      }
    }
  }
  // Maximally mixed input: enumerate computational qubit basis b and the
  // transported bit c, each uniform.
  for (int b = 0; b < nn; ++b)
    for (int c = 0; c < 2; ++c) {
      double w = 1.0 / (2.0 * nn);
      for (int o = 0; o < nn; ++o) {
        double p = w;
        for (int i = 0; i < n; ++i)
          p *= detail::qubit_outcome_given_basis_state((theta >> i) & 1, (o >> i) & 1,
                                                       (b >> i) & 1);
        if (p == 0.0) continue;
        int decoded = c ^ detail::parity(o, n);
        st.mixed_msg[static_cast<size_t>(decoded)] += p;
        if (o == d) {
          st.mixed_accept += p;
          st.mixed_accept_msg[static_cast<size_t>(decoded)] += p;
        }
      }
    }
  return st;
}

// ---------------------------------------------------------------------------
// The doubled conjugate-pad scheme under the split attack.

struct DoubleOracleReport {
  double half_decode_min = 1.0;  // min over keys, halves, messages of P[decode = m]
  double forgery = 0.0;          // E[both halves pass verification]
};

inline DoubleOracleReport double_split_oracle_conj(int n) {
  int nn = 1 << n;
  DoubleOracleReport rep;
  double acc = 0.0;
  long long pairs = 0;
  for (int t0 = 0; t0 < nn; ++t0)
    for (int d0 = 0; d0 < nn; ++d0) {
      ConjKeyStats s0 = conj_key_stats(n, t0, d0);
      for (int t1 = 0; t1 < nn; ++t1)
        for (int d1 = 0; d1 < nn; ++d1) {
          ConjKeyStats s1 = conj_key_stats(n, t1, d1);
          for (int m = 0; m < 2; ++m) {
            // Half 1 carries slot 0's coded state plus a mixed slot 1; the
            // selection qubit routes the message from slot 0. Verification
            // needs both slot flags.
            double v1 = s0.accept_and_msg[static_cast<size_t>(m)] * s1.mixed_accept;
            double v2 = s0.mixed_accept * s1.accept_and_msg[static_cast<size_t>(m)];
            acc += v1 * v2;
            rep.half_decode_min =
                std::min({rep.half_decode_min, s0.msg_only[static_cast<size_t>(m)],
                          s1.msg_only[static_cast<size_t>(m)]});
            ++pairs;
          }
        }
    }
  rep.forgery = acc / static_cast<double>(pairs);
  return rep;
}

// ---------------------------------------------------------------------------
// The pad-randomized serial composition under the share-split attack.

// Per-key decode tables of a star component over the alphabet {0..L-1}:
// on_msg[p][phat][f] is the joint decode distribution on input E_k(p),
// on_mixed[mhat][f] the one on a maximally mixed ciphertext.
struct StarComponentTables {
  int alphabet = 2;
  std::vector<std::vector<std::array<double, 2>>> on_msg;
  std::vector<std::array<double, 2>> on_mixed;
};

struct StarOracleComponent {
  std::vector<StarComponentTables> keys;  // uniform over entries
};

inline StarOracleComponent star_component_conj(int n) {
  StarOracleComponent comp;
  int nn = 1 << n;
  for (int t = 0; t < nn; ++t)
    for (int d = 0; d < nn; ++d) {
      ConjKeyStats st = conj_key_stats(n, t, d);
      StarComponentTables tab;
      tab.alphabet = 2;
      tab.on_msg.assign(2, std::vector<std::array<double, 2>>(2, {0.0, 0.0}));
      tab.on_mixed.assign(2, {0.0, 0.0});
      for (int p = 0; p < 2; ++p) {
        tab.on_msg[static_cast<size_t>(p)][static_cast<size_t>(p)][1] =
            st.accept_and_msg[static_cast<size_t>(p)];
        tab.on_msg[static_cast<size_t>(p)][static_cast<size_t>(p)][0] =
            st.msg_only[static_cast<size_t>(p)] - st.accept_and_msg[static_cast<size_t>(p)];
        // The conjugate decoder never reports the wrong bit on a faithful
        // ciphertext; enumeration confirms msg_only == 1.
        double other = 1.0 - st.msg_only[static_cast<size_t>(p)];
        tab.on_msg[static_cast<size_t>(p)][static_cast<size_t>(1 - p)][0] += other;
      }
      for (int mh = 0; mh < 2; ++mh) {
        tab.on_mixed[static_cast<size_t>(mh)][1] = st.mixed_accept_msg[static_cast<size_t>(mh)];
        tab.on_mixed[static_cast<size_t>(mh)][0] =
            st.mixed_msg[static_cast<size_t>(mh)] - st.mixed_accept_msg[static_cast<size_t>(mh)];
      }
      comp.keys.push_back(std::move(tab));
    }
  return comp;
}

// The always-rejecting transport scheme as a star component.
inline StarOracleComponent star_component_triv(int alphabet) {
  StarOracleComponent comp;
  StarComponentTables tab;
  tab.alphabet = alphabet;
  tab.on_msg.assign(static_cast<size_t>(alphabet),
                    std::vector<std::array<double, 2>>(static_cast<size_t>(alphabet), {0.0, 0.0}));
  tab.on_mixed.assign(static_cast<size_t>(alphabet), {0.0, 0.0});
  for (int p = 0; p < alphabet; ++p)
    tab.on_msg[static_cast<size_t>(p)][static_cast<size_t>(p)][0] = 1.0;
  for (int mh = 0; mh < alphabet; ++mh)
    tab.on_mixed[static_cast<size_t>(mh)][0] = 1.0 / alphabet;
  comp.keys.push_back(std::move(tab));
  return comp;
}

struct StarOracleReport {
  double half1_accept_min = 1.0, half1_accept_max = 0.0;
  double half2_accept_min = 1.0, half2_accept_max = 0.0;
  double half1_decode_min = 1.0, half1_decode_max = 0.0;
  double half2_decode_min = 1.0, half2_decode_max = 0.0;
  double forgery = 0.0;
};

// Shares of the split note: half 1 is (component-a slot of the note, fresh
// mixed b-slot), half 2 is (fresh mixed a-slot, component-b slot). Both are
// decoded by a full keyed decoder of the composition; the final message is
// pad^{-1} * payload over the cyclic group, the flag the OR of the slots.
inline StarOracleReport star_split_oracle(const StarOracleComponent& a,
                                          const StarOracleComponent& b, int alphabet) {
  StarOracleReport rep;
  int L = alphabet;
  double forgery = 0.0;
  long long count = 0;
  for (const auto& ta : a.keys)
    for (const auto& tb : b.keys) {
      require(ta.alphabet == L && tb.alphabet == L, "alphabet mismatch: oracle star tables");
      for (int m = 0; m < L; ++m) {
        double pad_avg = 0.0;
        for (int p = 0; p < L; ++p) {
          int y = (p + m) % L;  // payload carried by component b
          double v1 = 0.0, v2 = 0.0, acc1_rej = 0.0, acc2_rej = 0.0, dec1 = 0.0, dec2 = 0.0;
          for (int ph = 0; ph < L; ++ph) {
            int w = (ph + m) % L;  // payload consistent with decoding m
            const auto& am = ta.on_msg[static_cast<size_t>(p)][static_cast<size_t>(ph)];
            const auto& bx = tb.on_mixed[static_cast<size_t>(w)];
            v1 += am[1] * (bx[0] + bx[1]) + am[0] * bx[1];
            dec1 += (am[0] + am[1]) * (bx[0] + bx[1]);
            const auto& ax = ta.on_mixed[static_cast<size_t>(ph)];
            const auto& bm = tb.on_msg[static_cast<size_t>(y)][static_cast<size_t>(w)];
            v2 += ax[1] * (bm[0] + bm[1]) + ax[0] * bm[1];
            dec2 += (ax[0] + ax[1]) * (bm[0] + bm[1]);
          }
          // Accept probabilities (any decoded message): 1 - P[both flags 0].
          for (int ph = 0; ph < L; ++ph) acc1_rej += ta.on_msg[static_cast<size_t>(p)][static_cast<size_t>(ph)][0];
          double bmixrej = 0.0;
          for (int mh = 0; mh < L; ++mh) bmixrej += tb.on_mixed[static_cast<size_t>(mh)][0];
          double acc1 = 1.0 - acc1_rej * bmixrej;
          double amixrej = 0.0;
          for (int mh = 0; mh < L; ++mh) amixrej += ta.on_mixed[static_cast<size_t>(mh)][0];
          for (int ph = 0; ph < L; ++ph) acc2_rej += tb.on_msg[static_cast<size_t>(y)][static_cast<size_t>(ph)][0];
          double acc2 = 1.0 - amixrej * acc2_rej;
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
    }
  rep.forgery = forgery / static_cast<double>(count);
  return rep;
}

}  // namespace qte::oracle
