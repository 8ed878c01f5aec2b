// Copyright 2026 The BNRO Concentrator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bnro/routing.hpp"

#include <random>
#include <stdexcept>

#include "bnro/verify.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace bnro {
namespace {

using testing::trace_path;
using Ranks = std::vector<std::optional<std::uint32_t>>;

constexpr SwitchMode kBar = SwitchMode::kBar;
constexpr SwitchMode kCross = SwitchMode::kCross;

std::vector<SwitchMode> modes_of(const std::vector<RouteHop>& path) {
  std::vector<SwitchMode> m;
  for (const auto& h : path) m.push_back(h.mode);
  return m;
}

// Every per-layer mode combination that carries `input` to `output`.
std::vector<std::vector<SwitchMode>> brute_force_paths(const Topology& t,
                                                       std::uint32_t input,
                                                       std::uint32_t output) {
  std::vector<std::vector<SwitchMode>> found;
  for (std::uint32_t bits = 0; bits < (1u << t.n_layers()); ++bits) {
    std::vector<SwitchMode> modes(t.n_layers());
    for (unsigned l = 0; l < t.n_layers(); ++l) {
      modes[l] = ((bits >> l) & 1u) ? kCross : kBar;
    }
    if (trace_path(t, input, modes) == output) found.push_back(modes);
  }
  return found;
}

TEST(RankActiveTest, Examples) {
  EXPECT_EQ(rank_active(DaqMask::from_string("00000000")), Ranks(8));
  Ranks all(8);
  for (std::uint32_t i = 0; i < 8; ++i) all[i] = i;
  EXPECT_EQ(rank_active(DaqMask::from_string("11111111")), all);
  const Ranks fig1b = {0, std::nullopt, 1, 2, std::nullopt, 3, 4, 5};
  EXPECT_EQ(rank_active(DaqMask::from_string("10110111")), fig1b);
}

TEST(AssignTargetsTest, FiveWordsFromZero) {
  const auto a = assign_targets(DaqMask::from_string("11111000"), 0);
  EXPECT_EQ(a.active_count, 5u);
  for (std::uint32_t k = 0; k < 5; ++k) EXPECT_EQ(a.target[k], k);
  for (std::uint32_t k = 5; k < 8; ++k) EXPECT_FALSE(a.target[k]);
}

TEST(AssignTargetsTest, SixWordsWrapFromFive) {
  const auto a = assign_targets(DaqMask::from_string("10110111"), 5);
  EXPECT_EQ(a.active_count, 6u);
  const Ranks want = {5, std::nullopt, 6, 7, std::nullopt, 0, 1, 2};
  EXPECT_EQ(a.target, want);
}

TEST(AssignTargetsTest, NoActiveInputs) {
  for (std::uint32_t t = 0; t < 8; ++t) {
    const auto a = assign_targets(DaqMask(8), t);
    EXPECT_EQ(a.active_count, 0u);
    EXPECT_EQ(a.target, Ranks(8));
  }
}

TEST(AssignTargetsTest, RejectsStartOutOfRange) {
  EXPECT_THROW(assign_targets(DaqMask(8), 8), std::out_of_range);
}

TEST(SelfRouteTest, IdentityRouteIsAllBar) {
  const Topology t = build_topology(4);
  for (std::uint32_t k = 0; k < 16; ++k) {
    for (const auto& hop : self_route(t, k, k)) EXPECT_EQ(hop.mode, kBar);
  }
}

TEST(SelfRouteTest, ZeroToSevenIsAllCross) {
  const Topology t = build_topology(3);
  const auto want = brute_force_paths(t, 0, 7);
  ASSERT_EQ(want.size(), 1u);
  EXPECT_EQ(want[0], (std::vector<SwitchMode>{kCross, kCross, kCross}));
  EXPECT_EQ(modes_of(self_route(t, 0, 7)), want[0]);
}

TEST(SelfRouteTest, FiveToNineOnSixteenPorts) {
  const Topology t = build_topology(4);
  // Frozen from the brute-force path oracle: 5 = 0101b, 9 = 1001b differ in
  // bits 2 and 3 only.
  const std::vector<SwitchMode> want = {kBar, kBar, kCross, kCross};
  EXPECT_EQ(brute_force_paths(t, 5, 9), std::vector<std::vector<SwitchMode>>{want});
  const auto path = self_route(t, 5, 9);
  EXPECT_EQ(modes_of(path), want);
  EXPECT_EQ(path.front().in, (PortRef{0, 2, 1}));
}

TEST(SelfRouteTest, RejectsOutOfRange) {
  const Topology t = build_topology(3);
  EXPECT_THROW(self_route(t, 8, 0), std::out_of_range);
  EXPECT_THROW(self_route(t, 0, 8), std::out_of_range);
}

TEST(SelfRouteTest, ArrivesEverywhereExhaustively) {
  for (unsigned n = 1; n <= 4; ++n) {
    const Topology t = build_topology(n);
    for (std::uint32_t k = 0; k < t.ports(); ++k) {
      for (std::uint32_t m = 0; m < t.ports(); ++m) {
        const auto path = self_route(t, k, m);
        ASSERT_EQ(path.size(), n);
        EXPECT_EQ(trace_path(t, k, modes_of(path)), m) << "N=" << n << " " << k << "->" << m;
        // Hops are consistent with the wiring.
        EXPECT_EQ(path[0].in, t.entry(k));
        for (unsigned l = 1; l < n; ++l) {
          const auto& prev = path[l - 1];
          EXPECT_EQ(path[l].in, t.follow({l - 1, prev.in.switch_index,
                                          switch_output(prev.mode, prev.in.port)}));
        }
      }
    }
  }
}

TEST(SelfRouteTest, ArrivesOnSampledThirtyTwoPortPairs) {
  const Topology t = build_topology(5);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000000; ++i) {
    const auto k = static_cast<std::uint32_t>(rng() % 32);
    const auto m = static_cast<std::uint32_t>(rng() % 32);
    ASSERT_EQ(trace_path(t, k, modes_of(self_route(t, k, m))), m);
  }
}

TEST(ComputeConfigTest, IdleMaskGivesAllBar) {
  const Topology t = build_topology(3);
  for (std::uint32_t s = 0; s < 8; ++s) {
    const RouteResult r = compute_config(t, DaqMask(8), s);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.plan().modes, std::vector<SwitchMode>(12, kBar));
    EXPECT_EQ(r.plan().assignment.active_count, 0u);
    for (const auto& u : r.plan().used) EXPECT_FALSE(u[0] || u[1]);
  }
}

TEST(ComputeConfigTest, FiveWordsFromZeroRouteStraight) {
  const Topology t = build_topology(3);
  const RouteResult r = compute_config(t, DaqMask::from_string("11111000"), 0);
  ASSERT_TRUE(r.ok());
  const auto perm = oracle_route(t, r.plan().modes);
  for (std::uint32_t k = 0; k < 5; ++k) EXPECT_EQ(perm[k], k);
  EXPECT_EQ(r.plan().modes, std::vector<SwitchMode>(12, kBar));
}

TEST(ComputeConfigTest, RejectsWrongMaskWidth) {
  EXPECT_THROW(compute_config(build_topology(3), DaqMask(4), 0),
               std::invalid_argument);
}

TEST(ComputeConfigTest, UsedFlagsFollowLivePaths) {
  const Topology t = build_topology(3);
  const DaqMask mask = DaqMask::from_string("10110111");
  const ConfigPlan plan = compute_config(t, mask, 5).plan();
  std::vector<std::array<bool, 2>> want(t.switch_count(), {false, false});
  for (std::uint32_t k = 0; k < 8; ++k) {
    if (!mask.test(k)) continue;
    for (const auto& hop : self_route(t, k, *plan.assignment.target[k])) {
      want[hop.in.layer * 4 + hop.in.switch_index][hop.in.port] = true;
      EXPECT_EQ(plan.mode(hop.in.layer, hop.in.switch_index), hop.mode);
    }
  }
  EXPECT_EQ(plan.used, want);
}

// 0->0 and 1->2 both need output 0 of layer-0 switch 0 (bit 0 of both
// targets is 0), which a concentration never asks for.
TEST(RouteAssignmentTest, ReportsCollisionAsValue) {
  const Topology t = build_topology(3);
  TargetAssignment a;
  a.target.resize(8);
  a.target[0] = 0;
  a.target[1] = 2;
  a.active_count = 2;
  const RouteResult r = route_assignment(t, a);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.collision(), (Collision{0, 0, 0, 1}));
  EXPECT_THROW((void)r.plan(), CollisionError);
  EXPECT_NE(r.collision().describe().find("layer 0 switch 0"), std::string::npos);
}

TEST(RouteAssignmentTest, CollisionDeeperInTheNetwork) {
  const Topology t = build_topology(3);
  TargetAssignment a;
  a.target.resize(8);
  // Inputs 0 and 2 meet at layer 1 switch 0 when both go up at layer 0;
  // targets 0 and 4 then need the same layer-1 output (bit 1 is 0 for both).
  a.target[0] = 0;
  a.target[2] = 4;
  a.active_count = 2;
  const RouteResult r = route_assignment(t, a);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.collision().layer, 1u);
  EXPECT_EQ(r.collision().switch_index, 0u);
}

// Layer-0 switch output taken by each word equals bit 0 of its target, so
// even targets go to the upper half and odd targets to the lower half.
TEST(ComputeConfigTest, ParityRouting) {
  for (unsigned n = 1; n <= 4; ++n) {
    const Topology t = build_topology(n);
    const std::uint32_t w = t.ports();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << w); ++bits) {
      const DaqMask mask = DaqMask::from_bits(bits, w);
      for (std::uint32_t s = 0; s < w; ++s) {
        const ConfigPlan plan = compute_config(t, mask, s).plan();
        for (std::uint32_t k = 0; k < w; ++k) {
          if (!plan.assignment.target[k]) continue;
          const PortRef in = t.entry(k);
          const unsigned out = switch_output(plan.mode(0, in.switch_index), in.port);
          ASSERT_EQ(out, *plan.assignment.target[k] & 1u);
        }
      }
    }
  }
}

TEST(ComputeConfigTest, MonotoneGap) {
  std::mt19937_64 rng(11);
  for (unsigned n = 1; n <= 6; ++n) {
    const std::uint32_t w = 1u << n;
    for (int trial = 0; trial < 2000; ++trial) {
      DaqMask mask(w);
      for (std::uint32_t k = 0; k < w; ++k) mask.set(k, rng() & 1u);
      const auto a = assign_targets(mask, static_cast<std::uint32_t>(rng() % w));
      for (std::uint32_t i = 0; i < w; ++i) {
        for (std::uint32_t j = i + 1; j < w; ++j) {
          if (!a.target[i] || !a.target[j]) continue;
          const std::uint32_t d = (*a.target[j] + w - *a.target[i]) % w;
          const std::uint32_t circular = std::min(d, w - d);
          ASSERT_LE(circular, j - i);
        }
      }
    }
  }
}

TEST(ComputeConfigTest, CollisionFreeForEverySixteenPortTask) {
  const Topology t = build_topology(4);
  for (std::uint64_t bits = 0; bits < (1u << 16); ++bits) {
    const DaqMask mask = DaqMask::from_bits(bits, 16);
    for (std::uint32_t s = 0; s < 16; ++s) {
      const RouteResult r = compute_config(t, mask, s);
      ASSERT_TRUE(r.ok()) << r.collision().describe();
      ASSERT_TRUE(solves_task(oracle_route(t, r.plan().modes), mask, s));
    }
  }
}

TEST(RenderPlanTest, MarksIdleLiveAndCross) {
  const Topology t = build_topology(2);
  const ConfigPlan plan = compute_config(t, DaqMask::from_string("1000"), 3).plan();
  // Input 0 -> output 3: cross, cross.
  EXPECT_EQ(render_plan(plan), "L0 X.\nL1 .X\n");
}

}  // namespace
}  // namespace bnro
