#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "meandev/distortion.hpp"
#include "meandev/errors.hpp"
#include "meandev/measures.hpp"
#include "oracles.hpp"

using namespace meandev;

namespace {

std::vector<DistortionFunction> shipped() {
  return {DistortionFunction::es_dev(0.9), DistortionFunction::es_dev(0.5), DistortionFunction::gini(),
          DistortionFunction::mad_half(), DistortionFunction::range(),
          DistortionFunction::piecewise_linear({0.0, 0.2, 0.7, 1.0}, {0.0, 0.5, 0.6, 0.0})};
}

// Brute-force [h]_q: minimize the midpoint-rule norm of h' - c over c.
double centered_norm_oracle(const DistortionFunction& h, double q) {
  auto norm = [&](double c) {
    const std::size_t n = 20000;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      s += std::pow(std::abs(h.left_derivative(t) - c), q);
    }
    return std::pow(s / static_cast<double>(n), 1.0 / q);
  };
  double lo = -5.0, hi = 15.0;
  for (int i = 0; i < 200; ++i) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    (norm(a) < norm(b) ? hi : lo) = (norm(a) < norm(b) ? b : a);
  }
  return norm(0.5 * (lo + hi));
}

}  // namespace

TEST(LeftDerivative, Examples) {
  EXPECT_NEAR(left_derivative_h(DistortionFunction::gini(), 0.5), 0.0, 1e-15);
  EXPECT_NEAR(left_derivative_h(DistortionFunction::es_dev(0.9), 0.05), 9.0, 1e-12);
  EXPECT_NEAR(left_derivative_h(DistortionFunction::es_dev(0.9), 1.0), -1.0, 1e-15);
  EXPECT_THROW((void)left_derivative_h(DistortionFunction::gini(), 0.0), DomainError);
}

TEST(LeftDerivative, MatchesFiniteDifference) {
  const auto h = DistortionFunction::es_dev(0.9);
  auto f = [&](double s) { return h(s); };
  EXPECT_NEAR(oracle::central_derivative(f, 0.05), 9.0, 1e-6);
  EXPECT_NEAR(oracle::central_derivative(f, 0.5), -1.0, 1e-6);
  const auto g = DistortionFunction::gini();
  for (double s : {0.1, 0.3, 0.77}) {
    EXPECT_NEAR(g.left_derivative(s), oracle::central_derivative([&](double t) { return g(t); }, s), 1e-6);
  }
}

TEST(ChoquetDeviation, Examples) {
  EXPECT_NEAR(choquet_deviation(DistortionFunction::es_dev(0.5), StateVector({0, 2})), 1.0, 1e-15);
  EXPECT_NEAR(choquet_deviation(DistortionFunction::gini(), StateVector({0, 2})), 0.5, 1e-15);
  for (const auto& h : shipped()) {
    EXPECT_EQ(choquet_deviation(h, StateVector::constant(7, 3.25)), 0.0) << h.name();
  }
  EXPECT_NEAR(choquet_deviation(DistortionFunction::range(), StateVector({1, 5, 2})), 4.0, 1e-15);
  EXPECT_NEAR(choquet_deviation(DistortionFunction::mad_half(), StateVector({0, 2})), 1.0, 1e-15);
}

TEST(Norms, EsDevL2IsThree) {
  EXPECT_NEAR(h_norms(DistortionFunction::es_dev(0.9), 2.0).l2_norm, 3.0, 1e-12);
}

TEST(Norms, GiniL2IsInverseRootThree) {
  EXPECT_NEAR(h_norms(DistortionFunction::gini(), 2.0).l2_norm, 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Norms, CenteredEsDevMatchesClosedForm) {
  for (double a : {0.9, 0.95}) {
    for (double p : {1.5, 2.0}) {
      const double q = p / (p - 1.0);
      const double expected = a * std::pow(std::pow(a, p) * (1 - a) + a * std::pow(1 - a, p), -1.0 / p);
      EXPECT_NEAR(h_norms(DistortionFunction::es_dev(a), q).centered_q_norm, expected, 1e-9) << a << " " << p;
    }
  }
}

TEST(Norms, CenteredAgreesWithBruteForce) {
  for (const auto& h : {DistortionFunction::gini(), DistortionFunction::mad_half(),
                        DistortionFunction::piecewise_linear({0.0, 0.2, 0.7, 1.0}, {0.0, 0.5, 0.6, 0.0})}) {
    for (double q : {1.5, 2.0, 3.0}) {
      EXPECT_NEAR(h_norms(h, q).centered_q_norm, centered_norm_oracle(h, q), 1e-6) << h.name() << " q=" << q;
    }
  }
}

TEST(Norms, CenteringShrinks) {
  for (const auto& h : shipped()) {
    if (h.kind() == DistortionFunction::Kind::Range) continue;
    for (double q : {1.2, 2.0, 4.0}) {
      const auto n = h_norms(h, q);
      EXPECT_LE(n.centered_q_norm, n.q_norm + 1e-12) << h.name();
      EXPECT_GE(n.centered_q_norm, 0.0);
    }
  }
}

TEST(Norms, RangeIsUndefined) {
  try {
    (void)h_norms(DistortionFunction::range(), 2.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("norm undefined"), std::string::npos);
  }
}

TEST(RangeNormalized, Examples) {
  EXPECT_TRUE(is_range_normalized(DistortionFunction::es_dev(0.9)));
  EXPECT_TRUE(is_range_normalized(DistortionFunction::gini()));
  EXPECT_FALSE(is_range_normalized(DistortionFunction::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 0.125, 0.0})));
  // Half of gini as a piecewise approximation: h'(1) = -0.5.
  std::vector<double> t, hv;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i / 100.0);
    hv.push_back(0.5 * (t.back() - t.back() * t.back()));
  }
  EXPECT_FALSE(is_range_normalized(DistortionFunction::piecewise_linear(t, hv)));
}

TEST(PiecewiseLinear, Validation) {
  EXPECT_THROW(DistortionFunction::piecewise_linear({0.0, 1.0}, {0.0, 0.1}), ParseError);
  EXPECT_THROW(DistortionFunction::piecewise_linear({0.0, 0.6, 0.5, 1.0}, {0, 0.1, 0.1, 0}), ParseError);
  EXPECT_THROW(DistortionFunction::piecewise_linear({0.0, 0.3, 0.6, 1.0}, {0, 0.1, 0.4, 0}), ParseError);
  EXPECT_THROW(DistortionFunction::piecewise_linear({0.0, 0.5}, {0, 0}), ParseError);
  EXPECT_THROW(DistortionFunction::es_dev(1.0), DomainError);
}

TEST(Property, ShippedDistortionsAreConcaveAndVanishAtEnds) {
  for (const auto& h : shipped()) {
    EXPECT_EQ(h(0.0), 0.0);
    EXPECT_EQ(h(1.0), 0.0);
    for (int i = 0; i <= 200; ++i) {
      for (int j = i; j <= 200; j += 13) {
        const double s = i / 200.0, t = j / 200.0;
        if (h.kind() == DistortionFunction::Kind::Range && (s == 0.0 || t == 1.0)) continue;
        ASSERT_GE(h(0.5 * (s + t)), 0.5 * (h(s) + h(t)) - 1e-12) << h.name();
      }
      ASSERT_GE(h(i / 200.0), 0.0);
    }
  }
}

TEST(Property, TranslationInvariance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const StateVector x(gen::random_vector(rng, gen::random_length(rng)));
    const double c = std::round(shift(rng));  // integral shifts keep the translated values exact
    for (const auto& h : shipped()) {
      ASSERT_NEAR(choquet_deviation(h, x.shifted(c)), choquet_deviation(h, x), 1e-12 * (1 + std::abs(c)));
    }
  }
}

TEST(Property, PositiveHomogeneity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> scale(0.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const StateVector x(gen::random_vector(rng, gen::random_length(rng)));
    const double l = scale(rng);
    for (const auto& h : shipped()) {
      const double base = choquet_deviation(h, x);
      ASSERT_NEAR(choquet_deviation(h, x.scaled(l)), l * base, 1e-12 * std::max(1.0, l * base));
    }
  }
}

TEST(Property, Subadditivity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = gen::random_length(rng);
    const StateVector x(gen::random_vector(rng, n)), y(gen::random_vector(rng, n));
    for (const auto& h : shipped()) {
      ASSERT_LE(choquet_deviation(h, x + y), choquet_deviation(h, x) + choquet_deviation(h, y) + 1e-12);
    }
  }
}

TEST(Property, StrictlyPositiveOnNonconstant) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    auto v = gen::random_vector(rng, gen::random_length(rng));
    v[0] += 1.0;  // never constant
    const StateVector x(v);
    if (std::ranges::all_of(v, [&](double a) { return a == v[0]; })) continue;
    EXPECT_GT(choquet_deviation(DistortionFunction::es_dev(0.9), x), 0.0);
    EXPECT_GT(choquet_deviation(DistortionFunction::gini(), x), 0.0);
  }
}

TEST(Property, GiniEqualsPairwiseFormula) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto v = gen::random_vector(rng, gen::random_length(rng, 1, 50));
    ASSERT_NEAR(choquet_deviation(DistortionFunction::gini(), StateVector(v)), oracle::pairwise_gini(v), 1e-12);
  }
}

TEST(Property, EsDevEqualsEsMinusMean) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> level(0.01, 0.99);
  for (int trial = 0; trial < 500; ++trial) {
    const auto v = gen::random_vector(rng, gen::random_length(rng));
    const double a = level(rng);
    const StateVector x(v);
    ASSERT_NEAR(choquet_deviation(DistortionFunction::es_dev(a), x), es_alpha(x, a) - x.mean(), 1e-12);
    ASSERT_NEAR(es_alpha(x, a), oracle::es_by_enumeration(v, a), 1e-10);
  }
}

TEST(Property, MadHalfIsAbsoluteDeviationAboutMedian) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    auto v = gen::random_vector(rng, gen::random_length(rng, 1, 50));
    auto sorted = v;
    std::ranges::sort(sorted);
    const double median = sorted[(sorted.size() - 1) / 2];
    double mad = 0.0;
    for (double a : v) mad += std::abs(a - median);
    mad /= static_cast<double>(v.size());
    ASSERT_NEAR(choquet_deviation(DistortionFunction::mad_half(), StateVector(v)), mad, 1e-12);
  }
}
