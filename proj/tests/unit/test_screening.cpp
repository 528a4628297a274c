#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cctskit/error.hpp"
#include "cctskit/fixtures.hpp"
#include "cctskit/screening.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cctskit;
using namespace cctskit::screening;
using testfx::corridor_fields;
using testfx::corridor_landcover;
using testfx::corridor_params;

namespace {

Mask random_mask(std::size_t n, double density, std::uint64_t seed, double cellsize = 100.0) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(density);
  Mask m({n, n, cellsize, 0.0, 0.0}, 0);
  for (auto& v : m.values()) v = b(rng) ? 1 : 0;
  return m;
}

bool subset(const Mask& a, const Mask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

void expect_matches_oracle(const RasterGrid& lc, const Mask& fields, const ScreeningParams& params) {
  Mask excluded(lc.spec(), 0);
  for (std::size_t i = 0; i < lc.size(); ++i)
    excluded[i] = params.excluded_landcover_classes.count(static_cast<int>(lc[i])) ? 1 : 0;
  const Mask a = oracle::dilate_all_pairs(excluded, params.landcover_buffer);
  const Mask b = oracle::dilate_all_pairs(fields, params.field_buffer);
  Mask free(lc.spec(), 0);
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = (!a[i] && !b[i]) ? 1 : 0;
  EXPECT_EQ(free_mask(lc, fields, params), free);

  std::vector<std::vector<Cell>> expected;
  for (auto& comp : oracle::flood_fill_components(free))
    if (static_cast<double>(comp.size()) * lc.spec().cell_area_km2() >= params.min_contiguous_area - 1e-9)
      expected.push_back(comp);
  const auto sites = screen_sites(lc, fields, params);
  ASSERT_EQ(sites.size(), expected.size());
  std::vector<std::vector<Cell>> got;
  for (const auto& s : sites) {
    got.push_back(s.cells);
    EXPECT_NEAR(s.area, static_cast<double>(s.cells.size()) * lc.spec().cell_area_km2(), 1e-9);
    EXPECT_GE(s.area, params.min_contiguous_area);
    for (const auto& c : s.cells) {
      EXPECT_GT(oracle::distance_to_set(excluded, c), params.landcover_buffer);
      EXPECT_GT(oracle::distance_to_set(fields, c), params.field_buffer);
    }
  }
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(got, expected);
  // Ordered by centroid y then x, ids sequential.
  for (std::size_t i = 0; i < sites.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "S%03zu", i + 1);
    EXPECT_EQ(sites[i].id, id);
    if (i > 0) {
      const bool ordered = sites[i - 1].y < sites[i].y || (sites[i - 1].y == sites[i].y && sites[i - 1].x <= sites[i].x);
      EXPECT_TRUE(ordered);
    }
  }
}

}  // namespace

TEST(Screening, DilationMatchesAllPairsOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Mask m = random_mask(25, 0.03, seed);
    for (double r : {0.0, 100.0, 141.0, 142.0, 250.0, 333.0}) EXPECT_EQ(buffer_exclusion(m, r), oracle::dilate_all_pairs(m, r)) << r;
  }
}

TEST(Screening, DilationIsExtensiveAndMonotone) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Mask small = random_mask(30, 0.02, seed);
    Mask big = small;
    const Mask extra = random_mask(30, 0.02, seed + 100);
    for (std::size_t i = 0; i < big.size(); ++i) big[i] = big[i] | extra[i];
    const Mask ds = buffer_exclusion(small, 230.0), db = buffer_exclusion(big, 230.0);
    EXPECT_TRUE(subset(small, ds));
    EXPECT_TRUE(subset(ds, db));
  }
}

TEST(Screening, ZeroRadiusIsIdentityAndNegativeRejected) {
  const Mask m = random_mask(10, 0.2, 9);
  EXPECT_EQ(buffer_exclusion(m, 0.0), m);
  EXPECT_THROW(buffer_exclusion(m, -1.0), DomainError);
}

TEST(Screening, ComponentsAreFourConnected) {
  Mask m({5, 5, 1000.0, 0, 0}, 0);
  m(0, 0) = 1;
  m(1, 1) = 1;  // diagonal only: separate components
  m(3, 3) = m(3, 4) = m(4, 3) = 1;
  const auto sites = contiguous_candidates(m, 0.5);
  ASSERT_EQ(sites.size(), 3u);
  EXPECT_EQ(contiguous_candidates(m, 2.0).size(), 1u);
}

TEST(Screening, CorridorFixtureMatchesBruteForce) {
  expect_matches_oracle(corridor_landcover(), corridor_fields(), corridor_params());
}

TEST(Screening, MiniGulfMatchesBruteForce) {
  const auto dir = std::filesystem::temp_directory_path() / "cctskit_screen_mg";
  fixtures::write_mini_gulf(dir);
  const RasterGrid lc = read_ascii_grid(dir / "landcover.asc");
  const Mask fields = to_mask(read_ascii_grid(dir / "active_fields.asc"));
  expect_matches_oracle(lc, fields, ScreeningParams{});
}

TEST(Screening, LargerBuffersNeverAddSites) {
  const auto lc = corridor_landcover();
  const auto fields = corridor_fields();
  auto p = corridor_params();
  std::size_t prev = screen_sites(lc, fields, p).size();
  for (double extra : {250.0, 500.0, 1000.0}) {
    p.landcover_buffer = 1000.0 + extra;
    const std::size_t n = screen_sites(lc, fields, p).size();
    EXPECT_LE(n, prev);
    prev = n;
  }
  p = corridor_params();
  prev = screen_sites(lc, fields, p).size();
  for (double area : {5.0, 10.0, 40.0}) {
    p.min_contiguous_area = area;
    const std::size_t n = screen_sites(lc, fields, p).size();
    EXPECT_LE(n, prev);
    prev = n;
  }
}

TEST(Screening, AnnouncedSitesBypassScreening) {
  CandidateSite a;
  a.id = "A1";
  a.area = 50.0;  // below the area rule, still kept
  const auto sites = screen_sites(corridor_landcover(), corridor_fields(), corridor_params(), {a});
  ASSERT_FALSE(sites.empty());
  EXPECT_EQ(sites.back().id, "A1");
  EXPECT_EQ(sites.back().source, SiteSource::Announced);
}

TEST(Screening, MisalignedFieldsRejected) {
  Mask fields({59, 60, 250.0, 0.0, 0.0}, 0);
  EXPECT_THROW(free_mask(corridor_landcover(), fields, corridor_params()), AlignmentError);
}

TEST(Screening, ParamsValidated) {
  ScreeningParams p;
  p.min_contiguous_area = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.field_buffer = -5.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Screening, SitesCsvRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "cctskit_sites.csv").string();
  auto sites = screen_sites(corridor_landcover(), corridor_fields(), corridor_params());
  write_sites_csv(path, sites);
  const auto back = read_sites_csv(path);
  ASSERT_EQ(back.size(), sites.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].id, sites[i].id);
    EXPECT_EQ(back[i].area, sites[i].area);
    EXPECT_EQ(back[i].x, sites[i].x);
  }
}
