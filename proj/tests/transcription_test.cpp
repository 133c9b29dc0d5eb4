#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "gasflow/parser.hpp"
#include "gasflow/transcription.hpp"

namespace {

using gasflow::AugmentedNetwork;
using gasflow::TranscribedNlp;
using gasflow::TranscriptionOptions;

AugmentedNetwork load_case6(double delta_km) {
  auto net = gasflow::load_network_file(std::string(GASFLOW_DATA_DIR) +
                                        "/case6.json");
  return gasflow::segment_network(net, delta_km);
}

// Small mixed network touching every constraint family: a bidirectional
// compressor, a two-segment pipe, a storage with its well, and both transfer
// kinds.
AugmentedNetwork mixed_network() {
  const char* doc = R"({
    "params": {"horizon_hours": 24},
    "junctions": [
      {"id": "j1", "slack": true, "slack_pressure": 4.0e6},
      {"id": "j2"},
      {"id": "j3"}
    ],
    "compressors": [
      {"id": "c1", "from": "j1", "to": "j2", "type": "bidirectional"}
    ],
    "pipes": [
      {"id": "p1", "from": "j2", "to": "j3", "length": 20000, "diameter": 0.6}
    ],
    "storages": [
      {"id": "s1", "junction": "j3", "reservoir_volume": 9.0998e6,
       "mass_min": 3.5e8, "mass_max": 6.2e8, "mass_initial": 4.96e8}
    ],
    "receipts": [
      {"id": "r1", "junction": "j1", "price": -1.24, "max_flow": 150}
    ],
    "deliveries": [
      {"id": "d1", "junction": "j3", "price": 3.0, "max_flow": 50}
    ]
  })";
  auto net = gasflow::parse_network(nlohmann::json::parse(doc));
  EXPECT_TRUE(net.valid());
  return gasflow::segment_network(net, 10.0);
}

TEST(Counting, MatchesClosedFormOnSixJunctionFixture) {
  AugmentedNetwork aug = load_case6(10.0);
  TranscribedNlp nlp(aug);
  const int N = 24;
  const int V = static_cast<int>(aug.junctions.size());
  const int P = static_cast<int>(aug.pipes.size());
  const int C = static_cast<int>(aug.compressors.size());
  const int T = static_cast<int>(aug.transfers.size());
  const int S = static_cast<int>(aug.storages.size());
  EXPECT_EQ(V, 31);
  EXPECT_EQ(P, 29);
  EXPECT_EQ(nlp.num_nodes(), N);
  EXPECT_EQ(nlp.num_vars(), N * (V + 4 * P + 3 * C + T + 5 * S));
  EXPECT_EQ(nlp.num_vars(), 3816);
  EXPECT_EQ(nlp.num_eq(), N * (V + 4 * P + 2 * C + 3 * S) + (N - 1) * S);
  EXPECT_EQ(nlp.num_eq(), 3624);
  EXPECT_EQ(nlp.num_ineq(), N * C);
  EXPECT_EQ(nlp.num_ineq(), 48);
}

TEST(Counting, FixedVariablesAreSlackDensitiesAndZeroNominations) {
  AugmentedNetwork aug = load_case6(10.0);
  TranscribedNlp nlp(aug);
  Eigen::VectorXd lo, hi;
  nlp.bounds(lo, hi);
  int fixed = 0;
  for (int i = 0; i < nlp.num_vars(); ++i) {
    if (lo[i] == hi[i]) ++fixed;
  }
  // 24 slack densities plus the 11 hours in which d4 nominates zero.
  EXPECT_EQ(fixed, 24 + 11);
  EXPECT_EQ(nlp.num_vars() - nlp.num_eq() - fixed, 157);
}

TEST(Counting, ReservoirInitialValueIsPinnedOnlyAtFirstNode) {
  AugmentedNetwork aug = mixed_network();
  TranscribedNlp nlp(aug);
  Eigen::VectorXd lo, hi;
  nlp.bounds(lo, hi);
  const auto& st = aug.storages[0];
  EXPECT_EQ(lo[nlp.storage_var(0, 0, 1)], hi[nlp.storage_var(0, 0, 1)]);
  EXPECT_NEAR(lo[nlp.storage_var(0, 0, 1)], st.rho_res_initial, 1e-14);
  for (int k = 1; k < nlp.num_nodes(); ++k) {
    EXPECT_LT(lo[nlp.storage_var(k, 0, 1)], hi[nlp.storage_var(k, 0, 1)]);
    EXPECT_NEAR(lo[nlp.storage_var(k, 0, 1)], st.rho_res_min, 1e-14);
    EXPECT_NEAR(hi[nlp.storage_var(k, 0, 1)], st.rho_res_max, 1e-14);
  }
}

TEST(Structure, MassRowsWrapAroundToLastNode) {
  AugmentedNetwork aug = mixed_network();
  TranscriptionOptions opts;
  opts.dt_hours = 6.0;
  TranscribedNlp nlp(aug, opts);
  const int N = nlp.num_nodes();
  ASSERT_EQ(N, 4);
  Eigen::VectorXd x;
  nlp.initial_point(x);
  std::vector<gasflow::Triplet> je, ji;
  nlp.jacobians(x, je, ji);
  const auto& sp = aug.pipes[0];
  int row = nlp.mass_row(0, 0);
  int want_col = nlp.rho_index(N - 1, sp.from);
  bool found = false;
  for (const auto& t : je) {
    if (t.row() == row && t.col() == want_col) {
      found = true;
      EXPECT_LT(t.value(), 0.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Structure, ReservoirRowsMarchForwardWithoutWraparound) {
  AugmentedNetwork aug = mixed_network();
  TranscriptionOptions opts;
  opts.dt_hours = 6.0;
  TranscribedNlp nlp(aug, opts);
  Eigen::VectorXd x;
  nlp.initial_point(x);
  std::vector<gasflow::Triplet> je, ji;
  nlp.jacobians(x, je, ji);
  int res_col = nlp.storage_var(0, 0, 1);
  for (const auto& t : je) {
    if (t.col() == res_col) {
      // rho_res at node 0 may appear only in the bottom-hole identity at
      // node 0 and in the first interval equation, never in a wrapped row.
      EXPECT_TRUE(t.row() == nlp.bottomhole_row(0, 0) ||
                  t.row() == nlp.reservoir_row(1, 0));
    }
  }
}

TEST(Feasibility, SteadyUniformFlowSatisfiesEqualities) {
  const char* doc = R"({
    "params": {"horizon_hours": 24},
    "junctions": [
      {"id": "j1", "slack": true, "slack_pressure": 4.0e6},
      {"id": "j2"}
    ],
    "pipes": [
      {"id": "p1", "from": "j1", "to": "j2", "length": 10000, "diameter": 0.6}
    ],
    "receipts": [
      {"id": "r1", "junction": "j1", "price": -1.24, "max_flow": 150}
    ],
    "deliveries": [
      {"id": "d1", "junction": "j2", "price": 3.0, "max_flow": 50}
    ]
  })";
  auto net = gasflow::parse_network(nlohmann::json::parse(doc));
  ASSERT_TRUE(net.valid());
  auto aug = gasflow::segment_network(net, 10.0);
  TranscriptionOptions opts;
  opts.dt_hours = 12.0;
  opts.smoothing = 0.0;
  TranscribedNlp nlp(aug, opts);

  const auto& sp = aug.pipes[0];
  double rho_i = aug.slack_density(0, 0.0);
  double phi = 0.005;
  double rho_j = gasflow::physics::steady_rho_downstream(sp, rho_i, phi);
  double f = sp.area * phi;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nlp.num_vars());
  for (int k = 0; k < nlp.num_nodes(); ++k) {
    x[nlp.rho_index(k, sp.from)] = rho_i;
    x[nlp.rho_index(k, sp.to)] = rho_j;
    x[nlp.pipe_var(k, 0, 0)] = phi;
    x[nlp.pipe_var(k, 0, 1)] = 0.0;
    x[nlp.pipe_var(k, 0, 2)] = phi;
    x[nlp.pipe_var(k, 0, 3)] = phi;
    x[nlp.transfer_var(k, 0)] = f;  // receipt
    x[nlp.transfer_var(k, 1)] = f;  // delivery
  }
  Eigen::VectorXd ce, ci;
  nlp.constraints(x, ce, ci);
  EXPECT_LT(ce.lpNorm<Eigen::Infinity>(), 1e-12);

  // Objective agrees with the physical bookkeeping: kappa weighting of the
  // negated profit, with prices in $ per (kg/s) held for one hour.
  double mf0 = aug.scales.mass_flow0();
  double f_kgps = f * mf0;
  double profit = (3.0 - 1.24) * f_kgps * 24.0;
  EXPECT_NEAR(nlp.profit_usd(x), profit, 1e-9 * std::abs(profit));
  EXPECT_NEAR(nlp.objective(x), 0.95 * -profit, 1e-9 * std::abs(profit));
  EXPECT_DOUBLE_EQ(nlp.energy_mwh(x), 0.0);
}

TEST(Bounds, TimeVaryingNominationsFollowTheSeries) {
  AugmentedNetwork aug = load_case6(10.0);
  TranscribedNlp nlp(aug);
  Eigen::VectorXd lo, hi;
  nlp.bounds(lo, hi);
  // d4 is the transfer that nominates 25 kg/s between hours 8 and 20.
  int d4 = -1;
  for (int t = 0; t < static_cast<int>(aug.transfers.size()); ++t) {
    if (aug.transfers[t].id == "d4") d4 = t;
  }
  ASSERT_GE(d4, 0);
  double mf0 = aug.scales.mass_flow0();
  for (int k = 0; k < 24; ++k) {
    double want = (k >= 8 && k < 21) ? 25.0 : 0.0;
    EXPECT_NEAR(hi[nlp.transfer_var(k, d4)] * mf0, want, 1e-9);
    EXPECT_NEAR(lo[nlp.transfer_var(k, d4)], 0.0, 1e-15);
  }
}

Eigen::VectorXd randomized_point(const TranscribedNlp& nlp, unsigned seed) {
  Eigen::VectorXd x;
  nlp.initial_point(x);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int i = 0; i < x.size(); ++i) x[i] += u(rng);
  return x;
}

TEST(Derivatives, JacobianMatchesFiniteDifferences) {
  AugmentedNetwork aug = mixed_network();
  TranscriptionOptions opts;
  opts.dt_hours = 6.0;
  opts.smoothing = 1e-3;
  TranscribedNlp nlp(aug, opts);
  const int n = nlp.num_vars();
  const int me = nlp.num_eq();
  const int mi = nlp.num_ineq();

  for (unsigned seed : {1u, 2u, 3u}) {
    Eigen::VectorXd x = randomized_point(nlp, seed);
    std::vector<gasflow::Triplet> je, ji;
    nlp.jacobians(x, je, ji);
    Eigen::MatrixXd JE = Eigen::MatrixXd::Zero(me, n);
    Eigen::MatrixXd JI = Eigen::MatrixXd::Zero(mi, n);
    for (const auto& t : je) JE(t.row(), t.col()) += t.value();
    for (const auto& t : ji) JI(t.row(), t.col()) += t.value();

    const double h = 1e-6;
    Eigen::VectorXd cep, cem, cip, cim;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      nlp.constraints(xp, cep, cip);
      nlp.constraints(xm, cem, cim);
      Eigen::VectorXd de = (cep - cem) / (2 * h);
      Eigen::VectorXd di = (cip - cim) / (2 * h);
      for (int r = 0; r < me; ++r) {
        ASSERT_NEAR(JE(r, i), de[r], 1e-5 * (1.0 + std::abs(de[r])))
            << "eq row " << r << " var " << i;
      }
      for (int r = 0; r < mi; ++r) {
        ASSERT_NEAR(JI(r, i), di[r], 1e-5 * (1.0 + std::abs(di[r])))
            << "ineq row " << r << " var " << i;
      }
    }
  }
}

TEST(Derivatives, GradientMatchesFiniteDifferences) {
  AugmentedNetwork aug = mixed_network();
  TranscriptionOptions opts;
  opts.dt_hours = 6.0;
  TranscribedNlp nlp(aug, opts);
  Eigen::VectorXd x = randomized_point(nlp, 5);
  Eigen::VectorXd g;
  nlp.gradient(x, g);
  const double h = 1e-6;
  for (int i = 0; i < nlp.num_vars(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    double fd = (nlp.objective(xp) - nlp.objective(xm)) / (2 * h);
    ASSERT_NEAR(g[i], fd, 1e-5 * (1.0 + std::abs(fd))) << "var " << i;
  }
}

TEST(Derivatives, LagrangianHessianMatchesFiniteDifferences) {
  AugmentedNetwork aug = mixed_network();
  TranscriptionOptions opts;
  opts.dt_hours = 6.0;
  opts.smoothing = 1e-3;
  TranscribedNlp nlp(aug, opts);
  const int n = nlp.num_vars();
  const double sigma = 0.7;

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd ye(nlp.num_eq()), yi(nlp.num_ineq());
  for (int i = 0; i < ye.size(); ++i) ye[i] = u(rng);
  for (int i = 0; i < yi.size(); ++i) yi[i] = u(rng);
  Eigen::VectorXd x = randomized_point(nlp, 7);

  std::vector<gasflow::Triplet> ht;
  nlp.lagrangian_hessian(x, sigma, ye, yi, ht);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : ht) {
    ASSERT_GE(t.row(), t.col()) << "hessian must be lower triangular";
    H(t.row(), t.col()) += t.value();
    if (t.row() != t.col()) H(t.col(), t.row()) += t.value();
  }

  auto grad_lag = [&](const Eigen::VectorXd& xx) {
    Eigen::VectorXd g;
    nlp.gradient(xx, g);
    g *= sigma;
    std::vector<gasflow::Triplet> je, ji;
    nlp.jacobians(xx, je, ji);
    for (const auto& t : je) g[t.col()] += t.value() * ye[t.row()];
    for (const auto& t : ji) g[t.col()] += t.value() * yi[t.row()];
    return g;
  };

  const double h = 1e-6;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    Eigen::VectorXd col = (grad_lag(xp) - grad_lag(xm)) / (2 * h);
    for (int r = 0; r < n; ++r) {
      ASSERT_NEAR(H(r, i), col[r], 1e-4 * (1.0 + std::abs(col[r])))
          << "row " << r << " col " << i;
    }
  }
}

TEST(Options, RejectsNonDividingStep) {
  AugmentedNetwork aug = mixed_network();
  TranscriptionOptions opts;
  opts.dt_hours = 7.0;
  EXPECT_THROW(TranscribedNlp(aug, opts), std::invalid_argument);
  opts.dt_hours = 24.0;
  EXPECT_THROW(TranscribedNlp(aug, opts), std::invalid_argument);
}

}  // namespace
