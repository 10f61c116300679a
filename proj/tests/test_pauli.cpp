#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <complex>
#include <vector>

#include "symmcirc/pauli.hpp"
#include "symmcirc/rng.hpp"

using namespace symmcirc;

namespace {

using Matrix = std::vector<std::vector<std::complex<double>>>;

Matrix dense_of(const PauliOperator& p) {
  size_t n = p.n_qubits();
  size_t dim = size_t{1} << n;
  uint64_t xm = 0, zm = 0;
  for (size_t i = 0; i < n; ++i) {
    if (p.x(i)) xm |= uint64_t{1} << i;
    if (p.z(i)) zm |= uint64_t{1} << i;
  }
  std::complex<double> ph{1.0, 0.0};
  const std::complex<double> i1{0.0, 1.0};
  for (unsigned k = 0; k < p.phase(); ++k) ph *= i1;
  Matrix m(dim, std::vector<std::complex<double>>(dim, {0.0, 0.0}));
  for (uint64_t b = 0; b < dim; ++b) {
    double s = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    m[b ^ xm][b] = ph * s;
  }
  return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  size_t dim = a.size();
  Matrix c(dim, std::vector<std::complex<double>>(dim, {0.0, 0.0}));
  for (size_t i = 0; i < dim; ++i)
    for (size_t k = 0; k < dim; ++k)
      for (size_t j = 0; j < dim; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

bool mat_close(const Matrix& a, const Matrix& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (std::abs(a[i][j] - b[i][j]) > 1e-12) return false;
  return true;
}

PauliOperator random_pauli(size_t n, Rng& rng) {
  PauliOperator p(n);
  for (size_t i = 0; i < n; ++i) {
    p.set_x(i, rng.next_bit());
    p.set_z(i, rng.next_bit());
  }
  p.set_sign(rng.next_bit() ? -1 : +1);  // Hermitian by construction
  return p;
}

}  // namespace

TEST_CASE("single-site factories and string round trips") {
  CHECK(PauliOperator::single(3, 1, 'X').to_string() == "+IXI");
  CHECK(PauliOperator::single(3, 0, 'Y').to_string() == "+YII");
  CHECK(PauliOperator::single(2, 1, 'Z', -1).to_string() == "-IZ");
  CHECK(PauliOperator::from_string("-XYZ").to_string() == "-XYZ");
  CHECK(PauliOperator::from_string("+IZI").sign() == +1);
  CHECK(PauliOperator::from_string("II").identity_bits());
  CHECK_THROWS(PauliOperator::from_string("AB"));
}

TEST_CASE("hermiticity and sign bookkeeping") {
  PauliOperator y = PauliOperator::single(1, 0, 'Y');
  CHECK(y.is_hermitian());
  CHECK(y.sign() == +1);
  y.negate();
  CHECK(y.sign() == -1);
  y.set_sign(+1);
  CHECK(y.sign() == +1);

  // i * X (phase 1, no Y) is not Hermitian.
  PauliOperator p = PauliOperator::single(1, 0, 'X');
  p.set_phase(1);
  CHECK_FALSE(p.is_hermitian());
  CHECK_THROWS(p.sign());
}

TEST_CASE("known products") {
  auto X = PauliOperator::from_string("X");
  auto Y = PauliOperator::from_string("Y");
  auto Z = PauliOperator::from_string("Z");
  CHECK((X * Y).same_bits(Z));
  CHECK((X * X).identity_bits());
  CHECK((X * X).sign() == +1);
  CHECK((Z * Z).sign() == +1);
  CHECK((Y * Y).sign() == +1);
  // XY = iZ, YX = -iZ: phases must differ by 2.
  CHECK((((X * Y).phase() - (Y * X).phase()) & 3) == 2);
  // (XZ) tensor (XZ) = (-iY) tensor (-iY) = -YY.
  CHECK((PauliOperator::from_string("XX") * PauliOperator::from_string("ZZ")) ==
        PauliOperator::from_string("-YY"));
}

TEST_CASE("multiplication matches dense matrices") {
  Rng rng(7);
  for (size_t n : {1u, 2u, 3u, 4u}) {
    for (int rep = 0; rep < 40; ++rep) {
      PauliOperator a = random_pauli(n, rng);
      PauliOperator b = random_pauli(n, rng);
      CHECK(mat_close(dense_of(a * b), mat_mul(dense_of(a), dense_of(b))));
    }
  }
}

TEST_CASE("commutation matches dense matrices") {
  Rng rng(11);
  for (int rep = 0; rep < 60; ++rep) {
    PauliOperator a = random_pauli(3, rng);
    PauliOperator b = random_pauli(3, rng);
    Matrix ab = mat_mul(dense_of(a), dense_of(b));
    Matrix ba = mat_mul(dense_of(b), dense_of(a));
    CHECK(a.commutes_with(b) == mat_close(ab, ba));
  }
}

TEST_CASE("endpoints, weight, word boundaries") {
  PauliOperator p(130);
  CHECK(p.left_endpoint() == 130);
  CHECK(p.right_endpoint() == 130);
  p.set_x(65, true);
  p.set_z(127, true);
  p.set_z(3, true);
  CHECK(p.left_endpoint() == 3);
  CHECK(p.right_endpoint() == 127);
  CHECK(p.weight() == 3);
  p.set_x(129, true);
  CHECK(p.right_endpoint() == 129);
  CHECK(p.y_count() == 0);
  p.set_z(65, true);
  CHECK(p.y_count() == 1);
}

TEST_CASE("products across word boundaries keep signs exact") {
  // Z-string times X-string overlapping in the second word.
  PauliOperator a(70), b(70);
  for (size_t i = 60; i < 70; ++i) a.set_z(i, true);
  b.set_x(64, true);
  b.set_x(65, true);
  PauliOperator ab = a * b;
  PauliOperator ba = b * a;
  CHECK(ab.same_bits(ba));
  CHECK(a.commutes_with(b));  // two anticommuting overlaps -> commute
  CHECK(ab.sign() == ba.sign());
}
