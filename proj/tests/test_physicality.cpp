#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "optensor/fragment.hpp"
#include "optensor/physicality.hpp"
#include "testutil.hpp"

using namespace optensor;

namespace {

Matrix swap_gate() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
  return s;
}

}  // namespace

TEST_CASE("identity-channel operator is physical") {
  const auto id = from_channel({Matrix::Identity(2, 2)},
                               {in_wire({"q", 2}, 1)},
                               {out_wire({"q", 2}, 2)});
  // The input-transposed Choi matrix of the identity channel is SWAP.
  CHECK((id.canonical().matrix() - swap_gate()).cwiseAbs().maxCoeff() < 1e-14);
  const auto v = check_physical(id);
  CHECK(v.psd_ok);
  CHECK(v.causal_ok);
  CHECK(v.ok());
}

TEST_CASE("2I over two wires signals to the past") {
  const auto t = OperatorTensor({out_wire({"q", 2}, 2), in_wire({"q", 2}, 1)},
                                2.0 * Matrix::Identity(4, 4));
  const auto v = check_physical(t);
  CHECK(v.psd_ok);
  CHECK_FALSE(v.causal_ok);
}

TEST_CASE("negative effect fails positivity") {
  Matrix m(2, 2);
  m << -1, 0, 0, 0;
  const auto t = OperatorTensor({in_wire({"q", 2}, 1)}, m);
  const auto v = check_physical(t);
  CHECK_FALSE(v.psd_ok);
  CHECK(v.min_eigen_after_input_transpose < -0.5);
}

TEST_CASE("complete sets") {
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  const auto e0 = from_effect(p0, in_wire({"q", 2}, 1));
  const auto e1 = from_effect(p1, in_wire({"q", 2}, 1));
  CHECK(check_complete_set({e0, e1}));
  CHECK_FALSE(check_complete_set({e0}));

  const auto other = from_effect(p0, in_wire({"q", 2}, 2));
  CHECK_THROWS_AS(check_complete_set({e0, other}), SignatureMismatch);
}

TEST_CASE("random two-outcome instruments are complete") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    // A trace-preserving channel split into two branches.
    const auto ks = testutil::random_channel(2, 4, rng);
    const std::vector<Matrix> a(ks.begin(), ks.begin() + 2);
    const std::vector<Matrix> b(ks.begin() + 2, ks.end());
    const auto ins = std::vector<WireInstance>{in_wire({"q", 2}, 1)};
    const auto outs = std::vector<WireInstance>{out_wire({"q", 2}, 2)};
    CHECK(check_complete_set({from_channel(a, ins, outs),
                              from_channel(b, ins, outs)}));
  }
}

TEST_CASE("from_state validates its input") {
  std::mt19937_64 rng(43);
  CHECK_NOTHROW(from_state(testutil::random_density(2, rng),
                           out_wire({"q", 2}, 1)));
  CHECK_NOTHROW(from_state(0.25 * Matrix::Identity(2, 2),
                           out_wire({"q", 2}, 1)));  // subnormalized
  Matrix neg(2, 2);
  neg << -0.1, 0, 0, 1.1;
  CHECK_THROWS_AS(from_state(neg, out_wire({"q", 2}, 1)), NotPhysicalInput);
  CHECK_THROWS_AS(from_state(2.0 * Matrix::Identity(2, 2),
                             out_wire({"q", 2}, 1)),
                  NotPhysicalInput);
}

TEST_CASE("from_effect validates its input") {
  CHECK_NOTHROW(from_effect(Matrix::Identity(2, 2), in_wire({"q", 2}, 1)));
  CHECK_THROWS_AS(from_effect(1.5 * Matrix::Identity(2, 2),
                              in_wire({"q", 2}, 1)),
                  NotPhysicalInput);
  Matrix neg(2, 2);
  neg << -0.1, 0, 0, 0.5;
  CHECK_THROWS_AS(from_effect(neg, in_wire({"q", 2}, 1)), NotPhysicalInput);
}

TEST_CASE("from_channel validates trace non-increase") {
  CHECK_THROWS_AS(from_channel({1.1 * Matrix::Identity(2, 2)},
                               {in_wire({"q", 2}, 1)},
                               {out_wire({"q", 2}, 2)}),
                  NotPhysicalInput);
  CHECK_THROWS_AS(from_channel({Matrix::Identity(3, 3)},
                               {in_wire({"q", 2}, 1)},
                               {out_wire({"q", 2}, 2)}),
                  NotPhysicalInput);
}

TEST_CASE("prep to deterministic effect gives probability one") {
  const auto prep = from_state(0.5 * Matrix::Identity(2, 2),
                               out_wire({"q", 2}, 1));
  const auto eff = from_effect(Matrix::Identity(2, 2), in_wire({"q", 2}, 1));
  CHECK(circuit_probability({{prep, eff}, auto_links({prep, eff})}) ==
        doctest::Approx(1.0));
}

TEST_CASE("identity channel acts as the identity") {
  std::mt19937_64 rng(47);
  const Matrix rho = testutil::random_density(2, rng);
  const auto prep = from_state(rho, out_wire({"q", 2}, 1));
  const auto id = from_channel({Matrix::Identity(2, 2)},
                               {in_wire({"q", 2}, 1)},
                               {out_wire({"q", 2}, 2)});
  const auto out = contract({{prep, id}, auto_links({prep, id})}).canonical();
  CHECK((out.matrix() - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fully depolarizing channel sends everything to I/2") {
  std::mt19937_64 rng(53);
  const Matrix rho = testutil::random_density(2, rng);
  // Kraus set {|i><j| / sqrt(2)} implements rho -> Tr(rho) I/2.
  std::vector<Matrix> ks;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix k = Matrix::Zero(2, 2);
      k(i, j) = 1.0 / std::sqrt(2.0);
      ks.push_back(k);
    }
  const auto prep = from_state(rho, out_wire({"q", 2}, 1));
  const auto dep = from_channel(ks, {in_wire({"q", 2}, 1)},
                                {out_wire({"q", 2}, 2)});
  const auto out = contract({{prep, dep}, auto_links({prep, dep})});
  CHECK((out.matrix() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("random channel operators pass both checks") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ks = testutil::random_channel(2, 3, rng);
    const auto t = from_channel(ks, {in_wire({"q", 2}, 1)},
                                {out_wire({"q", 2}, 2)});
    CHECK(check_physical(t).ok());
  }
}
