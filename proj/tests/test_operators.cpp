#include "kdq/io.hpp"
#include "kdq/lie_algebra.hpp"
#include "kdq/operators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kdq;

namespace {

using P = Polynomial<Rational>;
using Field = PolyVectorField<Rational>;

P x(std::size_t i, std::size_t d = 3) { return P::variable(d, i); }

LieAlgebra bundled(const std::string& name) { return load_algebra(std::string(KDQ_DATA_DIR) + "/" + name + ".json"); }

P apply(const std::string& key, const std::vector<Field>& fields, const std::vector<P>& functions) {
  return evaluate_graph_operator<Rational>(AdmissibleGraph::parse(key), fields, functions);
}

P random_polynomial(std::mt19937_64& rng, std::size_t d, std::uint32_t max_degree) {
  std::uniform_int_distribution<int> coef(-3, 3);
  P p(d);
  for (const auto& e : monomials_up_to(d, max_degree))
    if (int c = coef(rng); c != 0 && rng() % 2) p.add_term(e, Rational(c));
  return p;
}

}  // namespace

TEST(GraphOperator, WedgeOnCoordinatesIsTheBivector) {
  auto alpha = poisson_bivector(bundled("heisenberg"));
  // Σ_{i,j} α^{ij} ∂_i x1 ∂_j x2 = α^{12} = x3.
  EXPECT_EQ(apply("1;2;g1,g2", {alpha}, {x(0), x(1)}), x(2));
  EXPECT_EQ(apply("1;2;g2,g1", {alpha}, {x(0), x(1)}), -x(2));
}

TEST(GraphOperator, VectorFieldActsAsDerivation) {
  Field xi(3, 1);
  xi.add_component({0}, x(1));  // x2 ∂1
  EXPECT_EQ(apply("1;1;g1", {xi}, {x(0)}), x(1));
  EXPECT_EQ(apply("1;1;g1", {xi}, {x(0) * x(0) * x(2)}), x(0) * x(1) * x(2) * Rational(2));
}

TEST(GraphOperator, DegreeMismatchGivesZero) {
  auto alpha = poisson_bivector(bundled("so3"));
  EXPECT_TRUE(apply("1;1;g1", {alpha}, {x(0)}).is_zero());
}

TEST(GraphOperator, RejectsWrongArity) {
  auto alpha = poisson_bivector(bundled("so3"));
  EXPECT_THROW(apply("1;2;g1,g2", {alpha, alpha}, {x(0), x(1)}), DimensionError);
  EXPECT_THROW(apply("1;2;g1,g2", {alpha}, {x(0)}), DimensionError);
  EXPECT_THROW(apply("1;2;g1,g2", {alpha}, {x(0), P::variable(2, 0)}), DimensionError);
}

TEST(GraphOperator, AgreesWithDirectIndexSummation) {
  std::mt19937_64 rng(11);
  for (auto name : {"so3", "sl2", "heisenberg"}) {
    auto alpha = poisson_bivector(bundled(name));
    for (auto key : {"2;2;2,g1;1,g2", "2;2;g1,2;g1,g2", "2;2;g1,g2;g2,g1", "2;2;2,g2;g1,1", "3;2;2,g1;3,g2;g1,g2",
                     "3;2;2,3;g1,g2;g2,g1"}) {
      auto g = AdmissibleGraph::parse(key);
      std::vector<Field> fields(g.n(), alpha);
      std::vector<P> fns = {random_polynomial(rng, 3, 3), random_polynomial(rng, 3, 3)};
      EXPECT_EQ(evaluate_graph_operator<Rational>(g, fields, fns), oracle::naive_graph_operator(g, fields, fns))
          << name << " " << key;
    }
  }
}

TEST(GraphOperator, Multilinear) {
  std::mt19937_64 rng(3);
  auto alpha = poisson_bivector(bundled("sl2"));
  auto f1 = random_polynomial(rng, 3, 2), f2 = random_polynomial(rng, 3, 2), g = random_polynomial(rng, 3, 2);
  const std::string key = "2;2;2,g1;g1,g2";
  EXPECT_EQ(apply(key, {alpha, alpha}, {f1 + f2 * Rational(3), g}),
            apply(key, {alpha, alpha}, {f1, g}) + apply(key, {alpha, alpha}, {f2, g}) * Rational(3));
}

TEST(GraphOperator, TwoEdgesIntoALinearCoefficientVanish) {
  // First-type vertex 1 receives edges from 2 and 3: a second derivative of a linear coefficient.
  std::mt19937_64 rng(5);
  auto alpha = poisson_bivector(bundled("so3"));
  auto g = AdmissibleGraph::parse("3;2;g1,g2;1,g1;1,g2");
  ASSERT_FALSE(linear_nonzero(g));
  EXPECT_TRUE(apply(g.key().text, {alpha, alpha, alpha}, {random_polynomial(rng, 3, 4), random_polynomial(rng, 3, 4)})
                  .is_zero());
}

TEST(Hkr, BivectorGivesHalfThePoissonBracket) {
  // Weights ±1/4 on the two orderings: (1/4)(U₁₂ − U₂₁) = ½{f,g}.
  std::mt19937_64 rng(9);
  for (auto name : {"heisenberg", "so3", "sl2"}) {
    auto L = bundled(name);
    auto alpha = poisson_bivector(L);
    auto f = random_polynomial(rng, 3, 3), g = random_polynomial(rng, 3, 3);
    std::vector<P> fns = {f, g};
    EXPECT_EQ(hkr_component<Rational>(alpha, fns), poisson_bracket(L, f, g) * Rational(1, 2)) << name;
  }
}

TEST(Hkr, VectorFieldAndTrivector) {
  Field xi(3, 1);
  xi.add_component({2}, x(0) * x(1));
  std::vector<P> one = {x(2) * x(2)};
  EXPECT_EQ(hkr_component<Rational>(xi, one), x(0) * x(1) * x(2) * Rational(2));

  // x1 ∂1∧∂2∧∂3 on (x1, x2, x3): every ordering contributes sgn(σ)²·x1/36, six of them.
  Field t(3, 3);
  t.add_component({0, 1, 2}, x(0));
  std::vector<P> three = {x(0), x(1), x(2)};
  EXPECT_EQ(hkr_component<Rational>(t, three), x(0) * Rational(1, 6));
}
