#include <algorithm>
#include <chrono>
#include <random>

#include <doctest.h>

#include "error_code.hpp"
#include "fixtures.hpp"
#include "logdet_oracle.hpp"
#include "timtin/gdof.hpp"

using namespace timtin;
using fixtures::vec2;

namespace {

CVector e(int n, int i) {
  CVector v = CVector::Zero(n);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("span scan skips span-redundant vectors") {
  ExponentSet set{{e(2, 0), e(2, 0), e(2, 1)}, {0.9, 0.5, 0.3}};
  const auto r = dominant_exponent_sum(set);
  CHECK(r.gamma == 2);
  CHECK(r.sum == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(r.selected == std::vector<std::size_t>{0, 2});
}

TEST_CASE("span scan of the empty set") {
  const auto r = dominant_exponent_sum({});
  CHECK(r.gamma == 0);
  CHECK(r.sum == 0.0);
}

TEST_CASE("span scan of the receiver-1 interference with an aligned pair") {
  // v31 at 0.7, v21 aligned with it at 0.5, v22 at 0.4.
  ExponentSet set{{vec2(1, 1), vec2(1, 1), vec2(1, -2)}, {0.7, 0.5, 0.4}};
  CHECK(dominant_exponent_sum(set).sum == doctest::Approx(1.1));
}

TEST_CASE("noise-floor vectors never enter the span") {
  ExponentSet set{{e(2, 0), e(2, 1)}, {0.0, 0.4}};
  const auto r = dominant_exponent_sum(set);
  CHECK(r.gamma == 1);
  CHECK(r.sum == doctest::Approx(0.4));
}

TEST_CASE("span scan input validation") {
  CHECK(error_of([] { dominant_exponent_sum({{e(2, 0)}, {-0.1}}); }) == ErrorCode::NegativeExponent);
  CHECK(error_of([] { dominant_exponent_sum({{e(2, 0)}, {0.1, 0.2}}); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(error_of([] { dominant_exponent_sum({{e(2, 0)}, {0.1}}, 0.0); }) ==
        ErrorCode::TolerancePositive);
}

TEST_CASE("span scan is invariant to input order") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = fixtures::uniform_int(rng, 1, 3);
    const int m = fixtures::uniform_int(rng, 0, 6);
    ExponentSet set;
    for (int i = 0; i < m; ++i) {
      // reuse an earlier direction now and then to create exact alignments
      if (i > 0 && fixtures::uniform_int(rng, 0, 2) == 0) {
        set.vectors.push_back(set.vectors[fixtures::uniform_int(rng, 0, i - 1)] * cplx(0, 1));
      } else {
        set.vectors.push_back(fixtures::random_unit(rng, n));
      }
      set.exponents.push_back(0.25 * fixtures::uniform_int(rng, 0, 6));
    }
    const double ref = dominant_exponent_sum(set).sum;
    std::vector<std::size_t> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ExponentSet shuffled;
    for (auto p : perm) {
      shuffled.vectors.push_back(set.vectors[p]);
      shuffled.exponents.push_back(set.exponents[p]);
    }
    CHECK(dominant_exponent_sum(shuffled).sum == doctest::Approx(ref).epsilon(1e-12));
  }
}

// Exponents sit on a 0.5 lattice: distinct levels must be separated by more
// than the finite-P correction P^-gap can blur at 1e12.
TEST_CASE("span scan matches the high-precision log-det slope at P = 1e12") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = fixtures::uniform_int(rng, 1, 3);
    const int m = fixtures::uniform_int(rng, 1, 5);
    ExponentSet set;
    for (int i = 0; i < m; ++i) {
      if (i > 0 && fixtures::uniform_int(rng, 0, 3) == 0) {
        set.vectors.push_back(set.vectors[fixtures::uniform_int(rng, 0, i - 1)]);
      } else {
        set.vectors.push_back(fixtures::random_unit(rng, n));
      }
      set.exponents.push_back(0.5 * fixtures::uniform_int(rng, 1, 4));
    }
    const double want = oracle::slope(set.vectors, set.exponents);
    CAPTURE(trial);
    CHECK(std::abs(dominant_exponent_sum(set).sum - want) < 1e-3);
  }
}

TEST_CASE("three-user two-stream example: closed form for receiver 1") {
  const auto f = fixtures::two_stream();
  const double r11 = 0, r12 = -0.1, r21 = 0, r22 = -0.1, r31 = 0;
  (void)r21;
  const double a11 = 1, a12 = 0.5, a13 = 0.7;
  const double closed = ((r11 + a11 + r12 + a11) - (r31 + a13 + r22 + a12)) / 2;
  CHECK(gdof_of_config(f.spec, f.tx)[0] == doctest::Approx(closed).epsilon(1e-12));
  CHECK(closed == doctest::Approx(0.4));
}

TEST_CASE("three-user example: per-stream ZF-SC accounting and order independence") {
  const auto f = fixtures::two_stream();
  const auto lex = zfsc_receivers(f.spec, f.tx, make_sc_order(f.tx, ScOrder::Lexicographic));
  const auto sg = stream_gdof(f.spec, f.tx, lex);
  // first stream zero-forces the other own stream and sees user 3 at 0.7
  CHECK(sg.per_stream[0][0] == doctest::Approx((1.0 - 0.7) / 2));
  // second stream, after cancelling the first, zero-forces the aligned pair
  CHECK(sg.per_stream[0][1] == doctest::Approx((0.9 - 0.4) / 2));
  const auto rev =
      zfsc_receivers(f.spec, f.tx, make_sc_order(f.tx, ScOrder::ReverseLexicographic));
  CHECK(stream_gdof(f.spec, f.tx, rev).per_user[0] == doctest::Approx(sg.per_user[0]));
}

TEST_CASE("decomposition example scheme gives 0.3 per user both ways") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = five_user_network();
  const auto tx = fixtures::example_scheme();
  const auto closed = gdof_of_config(spec, tx);
  const auto rx = zfsc_receivers(spec, tx, make_sc_order(tx, ScOrder::Lexicographic));
  const auto zf = stream_gdof(spec, tx, rx).per_user;
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(closed[k] - 0.3) < 1e-9);
    CHECK(std::abs(zf[k] - 0.3) < 1e-9);
  }
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
}

TEST_CASE("ZF-SC receivers attain the closed form on random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int K = fixtures::uniform_int(rng, 1, 4);
    const int n = fixtures::uniform_int(rng, 1, 3);
    auto spec = fixtures::random_spec(rng, K, 1.5);
    const auto tx = fixtures::random_tx(rng, K, n, 2);
    const auto closed = gdof_of_config(spec, tx);
    const auto rx = zfsc_receivers(spec, tx, make_sc_order(tx, ScOrder::Lexicographic));
    const auto zf = stream_gdof(spec, tx, rx).per_user;
    for (int k = 0; k < K; ++k) {
      CAPTURE(trial);
      CHECK(std::abs(closed[k] - zf[k]) < 1e-9);
      CHECK(closed[k] >= -1e-12);
      CHECK(closed[k] <= spec.alpha(k, k) + 1e-12);
    }
  }
}

TEST_CASE("finite-SNR rate slope tracks the GDoF") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int K = fixtures::uniform_int(rng, 2, 4);
    const int n = fixtures::uniform_int(rng, 1, 2);
    auto spec = fixtures::random_spec(rng, K, 1.0, true);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < K; ++j)
        if (k != j) spec.alpha(k, j) = 0.25 * std::round(spec.alpha(k, j) * 4);
    auto tx = fixtures::random_tx(rng, K, n, 2);
    for (auto& user : tx.powers)
      for (auto& r : user) r = -0.25 * fixtures::uniform_int(rng, 0, 3);
    const auto d = gdof_of_config(spec, tx);
    const auto lo = finite_snr_rates(spec, tx, 1e6);
    const auto hi = finite_snr_rates(spec, tx, 1e8);
    for (int k = 0; k < K; ++k) {
      CAPTURE(trial);
      CHECK(std::abs((hi[k] - lo[k]) / std::log2(100.0) - d[k]) < 0.05);
      CHECK(lo[k] >= 0.0);
    }
  }
}

TEST_CASE("finite-SNR rates need phases and P > 1") {
  auto spec = fixtures::walkthrough_channel();
  const auto tx = fixtures::walkthrough_init();
  CHECK(error_of([&] { finite_snr_rates(spec, tx, 100.0); }) == ErrorCode::MissingPhases);
  spec.theta = Eigen::MatrixXd::Zero(5, 5);
  CHECK(error_of([&] { finite_snr_rates(spec, tx, 1.0); }) == ErrorCode::InvalidPower);
}

TEST_CASE("configuration invariants") {
  TxConfig tx;
  tx.n = 1;
  tx.beams = {{e(1, 0), e(1, 0)}};
  tx.powers = {{0.0, 0.0}};
  CHECK(error_of([&] { validate(tx); }) == ErrorCode::InvalidStreamCount);
  tx.n = 2;
  tx.beams = {{vec2(1, 0)}};
  tx.powers = {{0.1}};
  CHECK(error_of([&] { validate(tx); }) == ErrorCode::InvalidPower);
  tx.beams = {{e(2, 0) * 2.0}};
  tx.powers = {{0.0}};
  CHECK(error_of([&] { validate(tx); }) == ErrorCode::DimensionMismatch);
}
