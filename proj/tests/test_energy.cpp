#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ptmc/chain.hpp"
#include "ptmc/energy.hpp"

using namespace ptmc;

TEST(DeriveParams, TableRows) {
  for (const auto& set : builtin_param_sets()) {
    const auto e = derive_params(set.nntm);
    EXPECT_NEAR(e.alpha, set.alpha, 0.05) << set.name;
    EXPECT_NEAR(e.beta, set.beta, 0.05) << set.name;
    EXPECT_NEAR(e.gamma, set.gamma, 0.05) << set.name;
  }
  const auto t89 = derive_params(builtin_params("turner89-cg"));
  EXPECT_NEAR(t89.alpha, -0.9, 1e-12);
  EXPECT_NEAR(t89.beta, -1.8, 1e-12);
  EXPECT_NEAR(t89.gamma, -1.7, 1e-12);
  const auto t04 = derive_params(builtin_params("turner04-gc"));
  EXPECT_NEAR(t04.alpha, -2.8, 1e-12);
  EXPECT_NEAR(t04.beta, -2.2, 1e-12);
  EXPECT_NEAR(t04.gamma, 0.9, 1e-12);
}

TEST(DeriveParams, ZeroInput) {
  const auto e = derive_params({});
  EXPECT_EQ(e.alpha, 0.0);
  EXPECT_EQ(e.beta, 0.0);
  EXPECT_EQ(e.gamma, 0.0);
  EXPECT_EQ(e.delta, 0.0);
}

TEST(DeriveParams, Delta) {
  // a + 8b + 2c + h + 2g for the 1989 (C, G) row.
  EXPECT_NEAR(derive_params(builtin_params("turner89-cg")).delta,
              4.6 + 3.2 + 0.2 - 10.9 - 3.2, 1e-12);
}

TEST(BuiltinParams, Rows) {
  const auto a = builtin_params("turner99-cg");
  EXPECT_EQ(a.a, 3.4);
  EXPECT_EQ(a.b, 0.0);
  EXPECT_EQ(a.c, 0.4);
  EXPECT_EQ(a.h, -12.9);
  EXPECT_EQ(a.f, 4.5);
  EXPECT_EQ(a.i, 2.3);
  EXPECT_EQ(a.g, -1.6);
  EXPECT_EQ(builtin_params("turner99-gc").h, -16.9);
  EXPECT_EQ(builtin_params("turner99-gc").g, -1.9);
  EXPECT_EQ(builtin_params("turner04-cg").a, 9.3);
  EXPECT_EQ(builtin_params("turner04-cg").c, -0.9);
  EXPECT_EQ(builtin_params("turner04-cg").g, -1.1);
  try {
    builtin_params("turner2024");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownParameterSet);
  }
}

TEST(ParamsText, NNTMKeys) {
  const auto e = parse_params_text("# 1989 C/G\na=4.6\nb=0.4\nc=0.1\nh=-10.9\nf=3.8\ni=3.0\ng=-1.6\n");
  EXPECT_NEAR(e.alpha, -0.9, 1e-12);
  EXPECT_NEAR(e.beta, -1.8, 1e-12);
}

TEST(ParamsText, DirectKeys) {
  const auto e = parse_params_text("alpha = 1.5\nbeta=-2\n");
  EXPECT_EQ(e.alpha, 1.5);
  EXPECT_EQ(e.beta, -2.0);
  EXPECT_EQ(e.gamma, 0.0);
}

TEST(ParamsText, Rejections) {
  for (const char* bad : {"alpha=1\n", "alpha=1\nbeta=x\n", "alpha=1\nbeta=2\na=1\n",
                          "alpha=1\nalpha=2\nbeta=0\n", "weird=1\n", "alpha 1\n", "a=1\nb=2\n"}) {
    try {
      parse_params_text(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParamsFileInvalid) << bad;
    }
  }
}

TEST(ResolveParams, NameOrFile) {
  EXPECT_NEAR(resolve_params("turner04-cg").beta, -3.0, 1e-12);
  const auto file = std::filesystem::temp_directory_path() / "ptmc_params_test.txt";
  {
    std::ofstream out(file);
    out << "alpha=0.25\nbeta=0.5\n";
  }
  EXPECT_EQ(resolve_params(file.string()).beta, 0.5);
  std::filesystem::remove(file);
  EXPECT_THROW(resolve_params("no-such-set"), Error);
}

TEST(TreeEnergy, Examples) {
  const EnergyParams e{0.7, -0.3, 0, 0};
  EXPECT_DOUBLE_EQ(tree_energy(text_to_tree("()"), e, false), 0.7);
  const auto t89 = derive_params(builtin_params("turner89-cg"));
  EXPECT_NEAR(tree_energy(decode(TwoMotzkinPath::parse("I")), t89, true), -4.4, 1e-12);
  for (const auto& x : enumerate_paths(5)) {
    EXPECT_EQ(tree_energy(decode(x), EnergyParams{}, true), 0.0);
  }
}

TEST(PathEnergy, Examples) {
  const EnergyParams e{1.25, -0.5, 0, 0};
  EXPECT_DOUBLE_EQ(path_energy(TwoMotzkinPath::parse(""), e), 1.25);
  EXPECT_DOUBLE_EQ(path_energy(TwoMotzkinPath::parse("UD"), e), 2.5);
}

TEST(PathEnergy, AgreesWithTreeEnergy) {
  const EnergyParams e{-0.9, -1.8, -1.7, 0};
  for (std::size_t m = 0; m <= 8; ++m) {
    for (const auto& x : enumerate_paths(m)) {
      ASSERT_EQ(path_energy(x, e), tree_energy(decode(x), e, false)) << x;
    }
  }
}

TEST(GibbsLogWeight, Examples) {
  EXPECT_EQ(gibbs_log_weight(TwoMotzkinPath::parse("UHID"), EnergyParams{}), 0.0);
  EXPECT_DOUBLE_EQ(gibbs_log_weight(TwoMotzkinPath::parse("HH"), {1, 0, 0, 0}), -3.0);
  EXPECT_DOUBLE_EQ(gibbs_log_weight(TwoMotzkinPath::parse("II"), {0, 1, 0, 0}), -2.0);
}

TEST(PathEnergy, MoveClassDeltas) {
  // Classify each neighbour by what changed and check the energy difference.
  const EnergyParams e{0.37, -1.21, 0, 0};
  for (std::size_t m = 1; m <= 6; ++m) {
    for (const auto& x : enumerate_paths(m)) {
      const auto cx = symbol_counts(x);
      for (const auto& [y, p] : neighbors(x, e)) {
        const auto cy = symbol_counts(y);
        const double delta = path_energy(y, e) - path_energy(x, e);
        if (cx.u != cy.u) {
          EXPECT_NEAR(std::abs(delta), std::abs(e.alpha), 1e-12);
        } else if (cx.h != cy.h) {
          EXPECT_NEAR(std::abs(delta), std::abs(e.alpha - e.beta), 1e-12);
        } else {
          EXPECT_EQ(cx, cy);
          EXPECT_EQ(delta, 0.0);
        }
      }
    }
  }
}
