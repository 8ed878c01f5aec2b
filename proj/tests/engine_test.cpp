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

#include "bnro/engine.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

#include "bnro/streams.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace bnro {
namespace {

using testing::inputs_from_mask;
using testing::payloads;
using Slots = std::vector<std::optional<std::uint64_t>>;

// Three cycles of 8 inputs: 5, 6 and 6 DAQ words.
constexpr const char* kFigureMasks[] = {"11111000", "10110111", "01111011"};

TEST(EngineTest, FigureCycleOne) {
  Concentrator c(3);
  std::uint64_t next = 0;
  const CycleResult r = c.step(inputs_from_mask(kFigureMasks[0], next));
  EXPECT_FALSE(r.emitted);
  EXPECT_EQ(c.state().pointer, 5u);
  EXPECT_EQ(payloads(c.state().output),
            (Slots{0, 1, 2, 3, 4, std::nullopt, std::nullopt, std::nullopt}));
  EXPECT_TRUE(c.state().aux_empty());
}

TEST(EngineTest, FigureCycleTwo) {
  Concentrator c(3);
  std::uint64_t next = 0;
  c.step(inputs_from_mask(kFigureMasks[0], next));
  const CycleResult r = c.step(inputs_from_mask(kFigureMasks[1], next));
  ASSERT_TRUE(r.emitted);
  EXPECT_EQ(payloads(*r.emitted), (Slots{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_TRUE(r.emitted->complete());
  EXPECT_EQ(c.state().pointer, 3u);
  const std::vector<std::optional<DataWord>> want_aux = {
      DataWord::daq(8, 5), DataWord::daq(9, 6), DataWord::daq(10, 7),
      std::nullopt,        std::nullopt,        std::nullopt,
      std::nullopt};
  EXPECT_EQ(c.state().aux, want_aux);
}

TEST(EngineTest, FigureCycleThree) {
  Concentrator c(3);
  std::uint64_t next = 0;
  c.step(inputs_from_mask(kFigureMasks[0], next));
  c.step(inputs_from_mask(kFigureMasks[1], next));
  const CycleResult r = c.step(inputs_from_mask(kFigureMasks[2], next));
  ASSERT_TRUE(r.emitted);
  EXPECT_EQ(payloads(*r.emitted), (Slots{8, 9, 10, 11, 12, 13, 14, 15}));
  EXPECT_EQ(c.state().pointer, 1u);
  ASSERT_TRUE(c.state().aux[0]);
  EXPECT_EQ(c.state().aux[0]->payload, 16u);
  EXPECT_EQ(r.assignment.active_count, 6u);
}

TEST(FlushTest, FreshStateYieldsNothing) {
  Concentrator c(3);
  EXPECT_FALSE(c.flush());
}

TEST(FlushTest, AfterCycleOne) {
  Concentrator c(3);
  std::uint64_t next = 0;
  c.step(inputs_from_mask(kFigureMasks[0], next));
  const auto partial = c.flush();
  ASSERT_TRUE(partial);
  EXPECT_EQ(partial->occupancy, 5u);
  EXPECT_EQ(payloads(*partial),
            (Slots{0, 1, 2, 3, 4, std::nullopt, std::nullopt, std::nullopt}));
  EXPECT_FALSE(c.flush());
  EXPECT_EQ(c.state(), ConcentratorState::fresh(8));
}

TEST(FlushTest, AfterCycleThreeHoldsTheAuxWord) {
  Concentrator c(3);
  std::uint64_t next = 0;
  for (const char* m : kFigureMasks) c.step(inputs_from_mask(m, next));
  const auto partial = c.flush();
  ASSERT_TRUE(partial);
  EXPECT_EQ(partial->occupancy, 1u);
  EXPECT_EQ(payloads(*partial)[0], 16u);
}

TEST(EngineTest, ExactFillEmitsWithEmptyAux) {
  Concentrator c(3);
  std::uint64_t next = 0;
  c.step(inputs_from_mask("11100000", next));
  const CycleResult r = c.step(inputs_from_mask("00011111", next));
  ASSERT_TRUE(r.emitted);
  EXPECT_EQ(payloads(*r.emitted), (Slots{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(c.state().pointer, 0u);
  EXPECT_TRUE(c.state().aux_empty());
  EXPECT_FALSE(c.flush());
}

TEST(EngineTest, IdleCycleChangesNothing) {
  Concentrator c(3);
  std::uint64_t next = 0;
  c.step(inputs_from_mask("11000000", next));
  const ConcentratorState before = c.state();
  const CycleResult r = c.step(inputs_from_mask("00000000", next));
  EXPECT_FALSE(r.emitted);
  EXPECT_EQ(c.state(), before);
}

TEST(EngineTest, NonDaqPayloadsNeverReachRecords) {
  Concentrator c(1);
  InputVector v = {DataWord{99, 0, WordKind::kNonDaq}, DataWord::daq(0, 1)};
  c.step(v);
  v = {DataWord::daq(1, 0), DataWord{98, 1, WordKind::kNonDaq}};
  const auto r = c.step(v);
  ASSERT_TRUE(r.emitted);
  EXPECT_EQ(payloads(*r.emitted), (Slots{0, 1}));
}

TEST(EngineTest, RejectsWrongInputWidth) {
  Concentrator c(3);
  EXPECT_THROW(c.step(InputVector(4)), std::invalid_argument);
}

TEST(EngineTest, PureStepMatchesWrapper) {
  const Topology t = build_topology(3);
  ConcentratorState s = ConcentratorState::fresh(8);
  Concentrator c(t);
  std::uint64_t a = 0, b = 0;
  for (const char* m : kFigureMasks) {
    StepOutput out = step(t, s, inputs_from_mask(m, a));
    s = out.state;
    const CycleResult r = c.step(inputs_from_mask(m, b));
    EXPECT_EQ(out.result.emitted, r.emitted);
    EXPECT_EQ(s, c.state());
  }
}

TEST(EngineTest, SnapshotReplay) {
  Concentrator c(4);
  TraceGenerator gen({16, {0.6}, 5, 50});
  for (int i = 0; i < 20; ++i) c.step(gen.next());
  const ConcentratorState snap = c.state();
  std::vector<InputVector> rest;
  while (!gen.done()) rest.push_back(gen.next());
  std::vector<std::optional<OutputRecord>> first, second;
  for (const auto& in : rest) first.push_back(c.step(in).emitted);
  c.restore(snap);
  for (const auto& in : rest) second.push_back(c.step(in).emitted);
  EXPECT_EQ(first, second);
}

TEST(EngineTest, TraceHookSeesEveryCycle) {
  Concentrator c(3);
  std::vector<CycleTrace> seen;
  c.set_trace_hook([&](const CycleTrace& t) { seen.push_back(t); });
  std::uint64_t next = 0;
  for (const char* m : kFigureMasks) c.step(inputs_from_mask(m, next));
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[1].cycle, 1u);
  EXPECT_EQ(seen[1].mask.to_string(), "10110111");
  EXPECT_EQ(seen[1].pointer_before, 5u);
  EXPECT_EQ(seen[1].pointer_after, 3u);
  EXPECT_TRUE(seen[1].emitted);
  EXPECT_FALSE(seen[0].emitted);
}

// Conservation, density/order, pointer law, single emission and the aux
// invariant over random traces.
TEST(EnginePropertyTest, RandomTraces) {
  std::mt19937_64 rng(2024);
  for (unsigned n = 1; n <= 5; ++n) {
    for (double p : {0.05, 0.3, 0.7, 1.0}) {
      const std::uint32_t w = 1u << n;
      const Trace trace = gen_trace({w, {p}, rng(), 3000});
      Concentrator c(n);
      std::vector<OutputRecord> records;
      bool emitted_last = false;
      for (const auto& inputs : trace) {
        const std::uint32_t before = c.state().pointer;
        const auto m = static_cast<std::uint32_t>(
            std::count_if(inputs.begin(), inputs.end(),
                          [](const DataWord& d) { return d.is_daq(); }));
        if (!emitted_last) ASSERT_TRUE(c.state().aux_empty());
        const CycleResult r = c.step(inputs);
        ASSERT_EQ(c.state().pointer, (before + m) % w);
        ASSERT_EQ(r.emitted.has_value(), m > 0 && before + m >= w);
        for (std::uint32_t i = c.state().pointer; i < c.state().aux.size(); ++i) {
          ASSERT_FALSE(c.state().aux[i]);
        }
        emitted_last = r.emitted.has_value();
        if (r.emitted) records.push_back(*r.emitted);
      }
      if (auto partial = c.flush()) records.push_back(*partial);
      const ValidationReport rep = validate(records);
      EXPECT_TRUE(rep.ok) << "N=" << n << " p=" << p;
      std::uint64_t daq = 0;
      for (const auto& in : trace) {
        for (const auto& d : in) daq += d.is_daq();
      }
      EXPECT_EQ(rep.words_checked, daq);
    }
  }
}

std::vector<std::pair<std::uint64_t, OutputRecord>> run_unpipelined(
    unsigned n, const Trace& trace) {
  Concentrator c(n);
  std::vector<std::pair<std::uint64_t, OutputRecord>> out;
  for (std::uint64_t i = 0; i < trace.size(); ++i) {
    if (auto r = c.step(trace[i]).emitted) out.emplace_back(i, *r);
  }
  return out;
}

void expect_shifted(unsigned n, std::uint32_t mask, const Trace& trace) {
  const auto reference = run_unpipelined(n, trace);
  PipelinedConcentrator p = PipelinedConcentrator::from_mask(n, mask);
  const unsigned latency = static_cast<unsigned>(std::popcount(mask));
  ASSERT_EQ(p.latency(), latency);
  std::vector<std::pair<std::uint64_t, OutputRecord>> got;
  for (std::uint64_t i = 0; i < trace.size(); ++i) {
    if (auto r = p.step(trace[i]).emitted) got.emplace_back(i, *r);
  }
  const auto tail = p.drain();
  const std::size_t partials = std::count_if(
      tail.begin(), tail.end(), [](const OutputRecord& r) { return !r.complete(); });
  ASSERT_LE(partials, 1u);
  ASSERT_EQ(got.size() + tail.size() - partials, reference.size()) << "mask " << mask;
  std::size_t j = 0;
  for (; j < got.size(); ++j) {
    ASSERT_EQ(got[j].first, reference[j].first + latency) << "mask " << mask;
    ASSERT_EQ(got[j].second, reference[j].second);
  }
  for (const auto& rec : tail) {
    if (!rec.complete()) break;
    ASSERT_LT(j, reference.size());
    EXPECT_GE(reference[j].first + latency, trace.size());
    EXPECT_EQ(rec, reference[j].second);
    ++j;
  }
  EXPECT_EQ(j, reference.size());
}

TEST(PipelineTest, NoRegistersBehavesLikeStep) {
  const Trace trace = gen_trace({16, {0.5}, 3, 2000});
  expect_shifted(4, 0, trace);
}

TEST(PipelineTest, EveryLayerRegistered) {
  const Trace trace = gen_trace({16, {0.7}, 4, 2000});
  expect_shifted(4, 0xF, trace);
}

TEST(PipelineTest, SingleRegisteredLayer) {
  const Trace trace = gen_trace({16, {0.4}, 5, 2000});
  for (std::uint32_t l = 0; l < 4; ++l) expect_shifted(4, 1u << l, trace);
}

TEST(PipelineTest, EverySubsetOnEightPorts) {
  const Trace trace = gen_trace({8, {0.5}, 6, 1000});
  for (std::uint32_t mask = 0; mask < 8; ++mask) expect_shifted(3, mask, trace);
}

TEST(PipelineTest, WarmUpEmitsNothing) {
  PipelinedConcentrator p = PipelinedConcentrator::from_mask(4, 0xF);
  TraceGenerator gen({16, {1.0}, 1, 4});
  while (!gen.done()) EXPECT_FALSE(p.step(gen.next()).emitted);
}

TEST(PipelineTest, DrainReturnsThePartialRecord) {
  PipelinedConcentrator p = PipelinedConcentrator::from_mask(3, 0b101);
  std::uint64_t next = 0;
  for (const char* m : kFigureMasks) p.step(inputs_from_mask(m, next));
  const auto tail = p.drain();
  ASSERT_EQ(tail.size(), 3u);
  EXPECT_EQ(payloads(tail[0]), (Slots{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(payloads(tail[1]), (Slots{8, 9, 10, 11, 12, 13, 14, 15}));
  EXPECT_EQ(tail[2].occupancy, 1u);
}

TEST(PipelineTest, RejectsBadFlags) {
  EXPECT_THROW(PipelinedConcentrator(3, {true, false}), std::invalid_argument);
  EXPECT_THROW(PipelinedConcentrator::from_mask(3, 0x8), std::invalid_argument);
  EXPECT_THROW(PipelinedConcentrator::from_mask(0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace bnro
