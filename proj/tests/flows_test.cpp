#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dosim/flows/flow_table.hpp"

using namespace dosim;
using namespace dosim::flows;

namespace {

sim::Packet packet(NodeId src, NodeId dst, std::uint32_t size = 500) {
  sim::Packet p;
  p.src = src;
  p.dst = dst;
  p.size = size;
  return p;
}

}  // namespace

TEST(Features, UniformHundredPacketWindow) {
  WindowStats s;
  s.pkt_count = 100;
  s.byte_sum = 100 * 500;
  s.subwindow_counts.fill(10);
  s.dst_fanin = 1;
  const auto f = extract_features(s);
  ASSERT_TRUE(f);
  EXPECT_NEAR((*f)[0], 4.6151, 1e-4);
  EXPECT_NEAR((*f)[1], 0.3333, 1e-4);
  EXPECT_DOUBLE_EQ((*f)[2], 1.0);
  EXPECT_NEAR((*f)[3], 0.6931, 1e-4);
  EXPECT_NEAR(f->packet_rate(), 100.0, 1e-9);
}

TEST(Features, SinglePacketCorner) {
  WindowStats s;
  s.pkt_count = 1;
  s.byte_sum = 1500;
  s.subwindow_counts[3] = 1;
  s.dst_fanin = 1;
  const auto f = *extract_features(s);
  EXPECT_DOUBLE_EQ(f[0], std::log(2.0));
  EXPECT_DOUBLE_EQ(f[1], 1.0);
  EXPECT_DOUBLE_EQ(f[2], 10.0);
  EXPECT_DOUBLE_EQ(f[3], std::log(2.0));
}

TEST(Features, EmptyWindowHasNoVector) { EXPECT_FALSE(extract_features(WindowStats{}).has_value()); }

TEST(Features, BurstinessStaysInBoundsOnRandomWindows) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 10000; ++i) {
    WindowStats s;
    for (auto& c : s.subwindow_counts) {
      c = gen() % 4 == 0 ? gen() % 1000 : 0;
      s.pkt_count += c;
    }
    if (s.pkt_count == 0) {
      s.subwindow_counts[gen() % kSubwindows] = 1;
      s.pkt_count = 1;
    }
    s.byte_sum = s.pkt_count * (1 + gen() % 70000);
    s.dst_fanin = 1 + gen() % 20;
    const auto f = extract_features(s);
    ASSERT_TRUE(f && f->finite());
    ASSERT_GE((*f)[2], 1.0 - 1e-12);
    ASSERT_LE((*f)[2], 10.0 + 1e-12);
    // identical stats give bitwise identical vectors
    ASSERT_EQ(*f, *extract_features(s));
  }
}

TEST(FlowTable, SubwindowIndexing) {
  FlowTable t;
  t.update_flow(packet(1, 2), 0.05);
  t.update_flow(packet(1, 2), 0.15);
  const auto s = t.update_flow(packet(1, 2), 0.95);
  EXPECT_EQ(s.pkt_count, 3u);
  EXPECT_EQ(s.subwindow_counts, (std::array<std::uint64_t, kSubwindows>{1, 1, 0, 0, 0, 0, 0, 0, 0, 1}));
}

TEST(FlowTable, FirstPacketStartsAFlow) {
  FlowTable t;
  const auto s = t.update_flow(packet(1, 2), 0.3);
  EXPECT_EQ(s.pkt_count, 1u);
  EXPECT_EQ(s.dst_fanin, 1u);
  EXPECT_EQ(t.tracked_flows(), 1u);
}

TEST(FlowTable, FanInCountsDistinctSources) {
  FlowTable t;
  t.update_flow(packet(1, 9), 0.1);
  t.update_flow(packet(2, 9), 0.2);
  const auto w = t.close_window(1.0);
  ASSERT_EQ(w.reports.size(), 2u);
  for (const auto& [key, v] : w.reports) EXPECT_DOUBLE_EQ(v.fan_in(), std::log(3.0));
}

TEST(FlowTable, OutOfWindowIsAContractViolation) {
  FlowTable t;
  EXPECT_THROW(t.update_flow(packet(1, 2), 1.0), WindowError);
  EXPECT_THROW(t.update_flow(packet(1, 2), -0.1), WindowError);
  EXPECT_THROW(t.close_window(0.5), WindowError);
}

TEST(FlowTable, QuietWindowReportsNothing) {
  FlowTable t;
  EXPECT_TRUE(t.close_window(1.0).reports.empty());
}

TEST(FlowTable, IdleFlowIsClosedNotReported) {
  FlowTable t;
  t.update_flow(packet(1, 2), 0.5);
  t.update_flow(packet(3, 2), 0.5);
  auto w = t.close_window(1.0);
  EXPECT_EQ(w.reports.size(), 2u);
  for (int k = 2; k <= 6; ++k) {
    t.update_flow(packet(3, 2), k - 0.5);
    w = t.close_window(k);
    if (k < 6) {
      EXPECT_TRUE(w.closed.empty()) << k;
    }
  }
  // flow 1>2 last seen at 0.5, idle 5.5 s by t=6
  ASSERT_EQ(w.closed.size(), 1u);
  EXPECT_EQ(w.closed[0], (FlowKey{1, 2, Proto::Udp}));
  ASSERT_EQ(w.reports.size(), 1u);
  EXPECT_EQ(w.reports[0].first, (FlowKey{3, 2, Proto::Udp}));
}

TEST(FlowTable, EveryPacketLandsInExactlyOneSubwindow) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> when(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    FlowTable t;
    std::uint64_t n = 0;
    WindowStats last;
    for (int i = 0; i < 100; ++i) {
      last = t.update_flow(packet(1, 2), when(gen));
      ++n;
    }
    std::uint64_t sum = 0;
    for (auto c : last.subwindow_counts) sum += c;
    ASSERT_EQ(sum, n);
    ASSERT_EQ(last.pkt_count, n);
  }
}
