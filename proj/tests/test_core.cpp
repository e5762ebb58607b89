#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pwcs/core.hpp"
#include "pwcs/matrix_io.hpp"
#include "pwcs/synthetic.hpp"

using namespace pwcs;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "pwcs_core_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("equivalent dictionary identity cases") {
  SensingMatrix phi(Matrix::Identity(2, 2), DesignKind::random);
  Dictionary psi(Matrix::Identity(2, 2));
  EquivalentDictionary eq = equivalent_dictionary(phi, psi);
  CHECK(eq.raw.isApprox(Matrix::Identity(2, 2), 0.0));
  CHECK(eq.scale(0) == 1.0);
  CHECK(eq.scale(1) == 1.0);

  SensingMatrix phi2(2.0 * Matrix::Identity(2, 2), DesignKind::random);
  EquivalentDictionary eq2 = equivalent_dictionary(phi2, psi);
  CHECK(eq2.raw.isApprox(2.0 * Matrix::Identity(2, 2), 0.0));
  CHECK(eq2.scale(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eq2.scale(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eq2.normalized.isApprox(Matrix::Identity(2, 2), 1e-15));
}

TEST_CASE("equivalent dictionary matches brute-force product") {
  RngStream rng(7);
  Matrix phi_entries = gen_gaussian(3, 4, rng);
  Dictionary psi = gen_dictionary(4, 5, rng);
  SensingMatrix phi(phi_entries, DesignKind::random);
  EquivalentDictionary eq = equivalent_dictionary(phi, psi);
  Matrix expected = oracles::brute_force_product(phi_entries, psi.entries());
  CHECK((eq.raw - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("equivalent dictionary errors") {
  SensingMatrix phi(Matrix::Identity(2, 2), DesignKind::random);
  Dictionary psi3(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(equivalent_dictionary(phi, psi3), ContractError);

  // zero column in D must name the offending index
  Matrix singular(2, 2);
  singular << 1, 0, 0, 0;
  SensingMatrix phi_singular(singular, DesignKind::random);
  Matrix psi_entries(2, 2);
  psi_entries << 0, 1, 1, 0;
  try {
    equivalent_dictionary(phi_singular, Dictionary(psi_entries));
    FAIL("expected DegenerateColumnError");
  } catch (const DegenerateColumnError& e) {
    CHECK(e.column == 0);
  }
}

TEST_CASE("gram basics and brute-force oracle") {
  CHECK(gram(Matrix::Identity(3, 3)).entries.isApprox(Matrix::Identity(3, 3), 0.0));

  Matrix twin(3, 2);
  twin.col(0) = Vector::Unit(3, 1);
  twin.col(1) = Vector::Unit(3, 1);
  CHECK(gram(twin).entries(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

  RngStream rng(11);
  Matrix d = gen_gaussian(3, 4, rng);
  GramMatrix g = gram(d);
  CHECK((g.entries - oracles::brute_force_gram(d)).cwiseAbs().maxCoeff() < 1e-12);

  // PSD: all eigenvalues above -tolerance
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.entries);
  CHECK(eig.eigenvalues().minCoeff() > -1e-10 * g.entries.norm());
}

TEST_CASE("gram of equivalent dictionary equals the associativity route") {
  RngStream rng(13);
  Matrix phi_entries = gen_gaussian(4, 6, rng);
  Dictionary psi = gen_dictionary(6, 8, rng);
  SensingMatrix phi(phi_entries, DesignKind::random);
  Matrix lhs = gram(equivalent_dictionary(phi, psi).raw).entries;
  Matrix rhs = psi.entries().transpose() * phi_entries.transpose() * phi_entries *
               psi.entries();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("normalization is invariant to positive column rescaling") {
  RngStream rng(17);
  Matrix d = gen_gaussian(5, 7, rng);
  Vector factors(7);
  for (Index i = 0; i < 7; ++i) factors(i) = 0.25 + rng.uniform() * 4.0;
  auto [n1, s1] = normalize_columns(d);
  auto [n2, s2] = normalize_columns(d * factors.asDiagonal());
  CHECK((n1 - n2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reconstruction identity over the support") {
  RngStream rng(19);
  Dictionary psi = gen_dictionary(6, 9, rng);
  Vector coeffs = Vector::Zero(9);
  coeffs(2) = 1.5;
  coeffs(7) = -0.25;
  SparseSignal alpha(coeffs, {2, 7}, 3);
  Vector x = reconstruct(psi, alpha);
  Vector manual = 1.5 * psi.entries().col(2) - 0.25 * psi.entries().col(7);
  CHECK((x - manual).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((x - psi.entries() * coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("type invariants are enforced") {
  Matrix bad = Matrix::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(Dictionary{bad}, ContractError);
  CHECK_NOTHROW(Dictionary::normalized(bad));

  CHECK_THROWS_AS(SensingMatrix(Matrix::Zero(3, 2), DesignKind::random),
                  ContractError);
  CHECK_THROWS_AS(
      SensingMatrix(Matrix::Zero(2, 3), DesignKind::random, {}, -1.0),
      ContractError);

  Vector coeffs = Vector::Zero(4);
  coeffs(1) = 1.0;
  CHECK_THROWS_AS(SparseSignal(coeffs, {0}, 1), ContractError);   // off-support
  CHECK_THROWS_AS(SparseSignal(coeffs, {0, 1}, 1), ContractError);  // too large
  CHECK_NOTHROW(SparseSignal(coeffs, {1}, 2));
}

TEST_CASE("matrix file round trip") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  auto path = temp_file("ints.csv");
  store_matrix(m, path);
  CHECK(load_matrix(path) == m);

  RngStream rng(23);
  Matrix big = gen_gaussian(50, 200, rng);
  auto big_path = temp_file("big.csv");
  store_matrix(big, big_path);
  Matrix loaded = load_matrix(big_path);
  CHECK((loaded - big).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix parse errors carry context") {
  auto ragged = temp_file("ragged.csv");
  {
    std::ofstream out(ragged);
    out << "# rows=2 cols=3\n1,2,3\n4,5\n";
  }
  CHECK_THROWS_AS(load_matrix(ragged), ParseError);

  auto junk = temp_file("junk.csv");
  {
    std::ofstream out(junk);
    out << "# rows=1 cols=2\n1,abc\n";
  }
  try {
    load_matrix(junk);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("abc") != std::string::npos);
  }

  CHECK_THROWS_AS(load_matrix(temp_file("missing.csv")), IoError);
}
