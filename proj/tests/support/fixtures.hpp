#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "cctskit/costsurface.hpp"
#include "cctskit/netdesign.hpp"
#include "cctskit/phasing.hpp"
#include "cctskit/raster.hpp"
#include "cctskit/routing.hpp"
#include "cctskit/screening.hpp"

namespace testfx {

struct GraphEdge {
  std::size_t u, v;
  double length;    // km
  double weighted;  // km x weight
};

/// Candidate network without raster geometry; nodes at (x, y) in meters.
cctskit::routing::CandidateNetwork graph(const std::vector<std::pair<double, double>>& nodes,
                                         const std::vector<GraphEdge>& edges);

/// Three capacity classes (2, 5, 12 Mt/y); keeps enumeration suites small.
cctskit::netdesign::Economics three_class_economics();

/// Random connected instance: 4-6 nodes, <= 8 edges, 1-3 sources, 1-2 sinks.
cctskit::netdesign::NetworkProblem random_instance(std::uint64_t seed);

/// Three sources, two sinks, seven edges.
cctskit::netdesign::NetworkProblem three_sources_two_sinks();

/// Four sources and three sinks on a small graph with limited injectivity.
cctskit::netdesign::NetworkProblem dedicated_trace_problem();

/// Two clusters of sources, each with its own sink, plus an isolated pair.
cctskit::netdesign::NetworkProblem hub_problem();

/// Five sources spaced along a line and one distant sink, routed on a uniform
/// 1 km surface.
cctskit::netdesign::NetworkProblem clustered_line_problem();

/// Uniform 1 km surface with a populated burdened tract on the straight line
/// between one source and one sink; the detour around it is the second corridor.
struct TwoCorridor {
  cctskit::RasterGrid population;
  std::vector<cctskit::costsurface::Tract> tracts;
  cctskit::Cell source;
  cctskit::Cell sink;
};
TwoCorridor two_corridor();

/// Routes the two-corridor terminals over the surface and builds the problem,
/// with the SEJ3 layer measured on every edge.
cctskit::netdesign::NetworkProblem two_corridor_problem(const TwoCorridor& f, bool sej_on);

/// 3-4 nodes, <= 4 edges, one or two sources, one sink, with a two-period
/// schedule whose targets rise.
cctskit::netdesign::NetworkProblem small_phased_instance(std::uint64_t seed, cctskit::phasing::PhaseSchedule& schedule);

/// Schedule with periods 2030, 2030 + gap, ... carrying the given targets.
cctskit::phasing::PhaseSchedule schedule(const std::vector<double>& targets, int gap = 5);

/// 60 x 60 cells at 250 m: a road corridor, a river, a town and two oil fields.
cctskit::RasterGrid corridor_landcover();
cctskit::Mask corridor_fields();
cctskit::screening::ScreeningParams corridor_params();

/// Random strictly positive surface.
cctskit::RasterGrid random_surface(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.5,
                                   double hi = 5.0);

/// Problem on a candidate network routed over `surface` between the given cells.
cctskit::netdesign::NetworkProblem routed_problem(const cctskit::RasterGrid& surface,
                                                  const std::vector<std::tuple<std::string, cctskit::Cell, double, double>>& sources,
                                                  const std::vector<std::tuple<std::string, cctskit::Cell, double, double>>& sinks,
                                                  double target);

}  // namespace testfx
