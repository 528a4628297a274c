#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cctskit/error.hpp"
#include "cctskit/phasing.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cctskit;
using namespace cctskit::phasing;

namespace {

using testfx::schedule;

double built_capacity(const netdesign::NetworkProblem& p, const PhasePlan& plan, std::size_t edge, std::size_t upto) {
  double c = 0;
  for (std::size_t t = 0; t <= upto; ++t)
    for (const auto& b : plan.phases[t].new_edges)
      if (b.edge == edge) c += p.economics.classes[static_cast<std::size_t>(b.pipe_class)].max_flow;
  return c;
}

void expect_plan_consistent(const netdesign::NetworkProblem& p, const PhaseSchedule& s, const PhasePlan& plan) {
  ASSERT_EQ(plan.phases.size(), s.periods.size());
  for (std::size_t t = 0; t < plan.phases.size(); ++t) {
    double inj = 0;
    for (double q : plan.phases[t].injection) inj += q;
    EXPECT_GE(inj, s.periods[t].target - 1e-7);
    for (std::size_t e = 0; e < p.candidate.edges.size(); ++e) {
      EXPECT_LE(std::abs(plan.phases[t].edge_flow[e]), built_capacity(p, plan, e, t) + 1e-7);
      if (t > 0) {
        EXPECT_GE(built_capacity(p, plan, e, t), built_capacity(p, plan, e, t - 1));
      }
    }
  }
}

}  // namespace

TEST(Phasing, LevelizedPostCreditWorkedValue) {
  PhaseSchedule s;
  const CreditPolicy policy;  // 85 $/t for 12 years when construction starts before 2033
  const auto c = levelized_phase_cost(0.0, 39e6, 1e6, s, policy, 2026);
  EXPECT_NEAR(c.pre_credit, 39.0, 1e-9);
  EXPECT_EQ(c.credit_rate, 85.0);
  const double a12 = oracle::annuity_by_sum(0.106, 12), a30 = oracle::annuity_by_sum(0.106, 30);
  EXPECT_NEAR(a12, 6.618, 0.001);
  EXPECT_NEAR(a30, 8.975, 0.001);
  EXPECT_NEAR(c.post_credit, 39.0 - 85.0 * a12 / a30, 1e-9);
  EXPECT_NEAR(c.post_credit, -23.7, 0.1);
}

TEST(Phasing, BaseRateAfterDeadline) {
  const auto c = levelized_phase_cost(0.0, 39e6, 1e6, PhaseSchedule{}, CreditPolicy{}, 2033);
  EXPECT_EQ(c.credit_rate, 17.0);
}

TEST(Phasing, CreditOverWholeLifeSubtractsRate) {
  PhaseSchedule s;
  CreditPolicy policy;
  policy.credit_years = s.operating_life;
  const auto c = levelized_phase_cost(3.0e8, 2.0e7, 2.5e6, s, policy, 2026);
  EXPECT_NEAR(c.post_credit, c.pre_credit - 85.0, 1e-9);
}

TEST(Phasing, PreCreditIsPvCostOverPvTonnes) {
  PhaseSchedule s;
  const auto c = levelized_phase_cost(5.0e8, 3.0e7, 2.0e6, s, CreditPolicy{}, 2026);
  const double a = oracle::annuity_by_sum(s.discount_rate, s.operating_life);
  EXPECT_NEAR(c.pre_credit, (5.0e8 + 3.0e7 * a) / (2.0e6 * a), 1e-9);
}

TEST(Phasing, PostNeverExceedsPreEqualOnlyWithoutCredit) {
  std::mt19937_64 rng(17);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  for (int i = 0; i < 200; ++i) {
    PhaseSchedule s;
    s.discount_rate = uni(0.0, 0.15);
    CreditPolicy policy;
    policy.bonus_rate = i % 4 == 0 ? 0.0 : uni(0.0, 120.0);
    policy.credit_years = static_cast<int>(uni(0, 30.99));
    const auto c = levelized_phase_cost(uni(0, 1e9), uni(0, 1e8), uni(1e5, 1e7), s, policy, 2026);
    EXPECT_LE(c.post_credit, c.pre_credit);
    const bool credited = policy.bonus_rate > 0.0 && policy.credit_years > 0;
    EXPECT_EQ(c.post_credit == c.pre_credit, !credited);
  }
}

TEST(Phasing, LevelizedRejectsBadInputs) {
  EXPECT_THROW(levelized_phase_cost(1.0, 1.0, 0.0, PhaseSchedule{}, CreditPolicy{}, 2026), DomainError);
  EXPECT_THROW(levelized_phase_cost(1.0, 1.0, -1.0, PhaseSchedule{}, CreditPolicy{}, 2026), DomainError);
  CreditPolicy policy;
  policy.credit_years = 31;
  EXPECT_THROW(levelized_phase_cost(1.0, 1.0, 1.0, PhaseSchedule{}, policy, 2026), ConfigError);
}

TEST(Phasing, ScheduleValidation) {
  EXPECT_NO_THROW(PhaseSchedule{}.validate());
  EXPECT_EQ(PhaseSchedule{}.base_year(), 2026);
  EXPECT_EQ(PhaseSchedule{}.horizon_end(), 2059);
  EXPECT_THROW(schedule({3.0, 2.0}).validate(), ConfigError);
  auto s = schedule({1.0, 2.0});
  s.periods[1].online_year = 2030;
  EXPECT_THROW(s.validate(), ConfigError);
  s = schedule({1.0, 2.0}, 40);
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(schedule({}).validate(), ConfigError);
}

TEST(Phasing, WeightsMatchYearByYearSums) {
  for (const auto& s : {PhaseSchedule{}, schedule({1.0, 2.0}, 3), schedule({1.0})}) {
    const auto w = phase_weights(s);
    const auto o = oracle::phase_weights_by_sum(s);
    ASSERT_EQ(w.operating_pv.size(), o.operating_pv.size());
    for (std::size_t p = 0; p < o.operating_pv.size(); ++p) {
      EXPECT_NEAR(w.operating_pv[p], o.operating_pv[p], 1e-12);
      EXPECT_NEAR(w.om_pv[p], o.om_pv[p], 1e-12);
      EXPECT_NEAR(w.build_pv[p], o.build_pv[p], 1e-12);
    }
    // Operating weights partition the horizon.
    double total = 0;
    for (double v : w.operating_pv) total += v;
    EXPECT_NEAR(total, w.om_pv.front(), 1e-12);
  }
}

TEST(Phasing, PerfectForesightMatchesEnumeration) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PhaseSchedule s;
    const auto p = testfx::small_phased_instance(seed, s);
    ASSERT_LE(p.candidate.edges.size(), 4u);
    const auto o = oracle::enumerate_design(oracle::phased_design_problem(p, s));
    ASSERT_TRUE(o.has_value()) << "seed " << seed;
    const auto plan = solve_phased(p, s);
    EXPECT_TRUE(plan.proven_optimal);
    EXPECT_NEAR(plan.discounted_cost, o->objective, 1e-7 * o->objective) << "seed " << seed;
    expect_plan_consistent(p, s, plan);
    ++compared;
  }
  EXPECT_EQ(compared, 20);
}

TEST(Phasing, ConstantTargetBuildsEverythingFirst) {
  for (auto p : {testfx::hub_problem(), testfx::clustered_line_problem()}) {
    const auto s = schedule({p.target, p.target, p.target});
    const auto plan = solve_phased(p, s);
    EXPECT_FALSE(plan.phases[0].new_edges.empty());
    EXPECT_TRUE(plan.phases[1].new_edges.empty());
    EXPECT_TRUE(plan.phases[2].new_edges.empty());
    EXPECT_EQ(plan.phases[1].new_tonnes, 0.0);
    EXPECT_TRUE(std::isnan(plan.phases[2].levelized.pre_credit));
    for (const auto& [year, cap] : plan.capital_by_year) {
      EXPECT_GE(year, 2026);
      if (year >= 2030) {
        EXPECT_EQ(cap, 0.0) << year;
      }
    }
  }
}

TEST(Phasing, PerfectForesightNoWorseThanMyopic) {
  struct Case {
    netdesign::NetworkProblem p;
    std::vector<double> targets;
  };
  std::vector<Case> cases{{testfx::three_sources_two_sinks(), {2.0, 4.0, 6.0}},
                          {testfx::hub_problem(), {2.0, 4.0, 6.6}},
                          {testfx::dedicated_trace_problem(), {4.0, 8.0, 11.0}},
                          {testfx::clustered_line_problem(), {0.8, 2.4, 4.0}}};
  int myopic_feasible = 0;
  for (const auto& c : cases) {
    const auto s = schedule(c.targets);
    const auto pf = solve_phased(c.p, s);
    expect_plan_consistent(c.p, s, pf);
    try {
      const auto my = solve_myopic(c.p, s);
      expect_plan_consistent(c.p, s, my);
      EXPECT_LE(pf.discounted_cost, my.discounted_cost * (1 + 1e-9));
      EXPECT_FALSE(my.proven_optimal);
      ++myopic_feasible;
    } catch (const InfeasibleError& e) {
      EXPECT_GE(e.period(), 1);  // only later targets can strand earlier builds
    }
  }
  EXPECT_GE(myopic_feasible, 2);
}

TEST(Phasing, CapitalByYearSpreadsOverConstructionLead) {
  const auto p = testfx::three_sources_two_sinks();
  const auto s = schedule({2.0, 4.0, 6.0});
  const auto plan = solve_phased(p, s);
  double phases = 0, years = 0;
  for (const auto& r : plan.phases) phases += r.capture_capital + r.transport_capital + r.storage_capital;
  for (const auto& [y, c] : plan.capital_by_year) years += c;
  EXPECT_NEAR(years, phases, 1e-6 * phases);
  for (const auto& r : plan.phases) {
    const double cohort = r.capture_capital + r.transport_capital + r.storage_capital;
    if (cohort == 0.0) continue;
    EXPECT_EQ(r.construction_start, r.online_year - s.construction_lead);
    EXPECT_GE(plan.capital_by_year.at(r.construction_start), cohort / s.construction_lead - 1e-6);
  }
}

TEST(Phasing, InfeasibleTargetNamesPeriod) {
  auto p = testfx::three_sources_two_sinks();
  const auto s = schedule({2.0, p.total_capture() + 1.0});
  try {
    solve_phased(p, s);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.binding(), "capture");
    EXPECT_EQ(e.period(), 1);
  }
}

TEST(Phasing, PhaseCsvHasOneRowPerPeriod) {
  const auto p = testfx::three_sources_two_sinks();
  const auto plan = solve_phased(p, schedule({2.0, 4.0, 6.0}));
  const auto dir = std::filesystem::temp_directory_path();
  write_phase_csv((dir / "cctskit_phases.csv").string(), plan);
  write_capital_by_year_csv((dir / "cctskit_capital.csv").string(), plan);
  std::ifstream in(dir / "cctskit_phases.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("period,online_year,construction_start,target_mt_y", 0), 0u);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 3);
}
