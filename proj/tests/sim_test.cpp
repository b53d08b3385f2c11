#include <gtest/gtest.h>

#include <random>

#include "dosim/agents/signature.hpp"
#include "dosim/rng.hpp"
#include "dosim/sim/engine.hpp"
#include "dosim/sim/host.hpp"
#include "dosim/sim/link_queue.hpp"
#include "dosim/sim/network.hpp"

using namespace dosim;
using namespace dosim::sim;

namespace {

Topology pair_topology(double capacity, double latency, std::uint32_t queue_limit = 100) {
  Topology t;
  t.add_node(Node{"A"});
  t.add_node(Node{"B"});
  Link l;
  l.id = "ab";
  l.from = 0;
  l.to = 1;
  l.capacity = capacity;
  l.latency = latency;
  l.queue_limit = queue_limit;
  t.add_link(l);
  return t;
}

Packet packet(NodeId src, NodeId dst, std::uint32_t size = 500, Proto proto = Proto::Udp) {
  Packet p;
  p.src = src;
  p.dst = dst;
  p.size = size;
  p.proto = proto;
  return p;
}

}  // namespace

TEST(Engine, SameTimeEventsRunInScheduleOrder) {
  Engine e;
  std::vector<int> order;
  e.schedule(1.0, [&] { order.push_back(1); });
  e.schedule(1.0, [&] { order.push_back(2); });
  e.schedule(0.5, [&] { order.push_back(0); });
  e.run_until(2.0);
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(e.now(), 2.0);
}

TEST(Engine, EventAtNowRunsBeforeLaterOnes) {
  Engine e;
  std::vector<int> order;
  e.schedule(1.0, [&] {
    e.schedule(1.0 + 1e-9, [&] { order.push_back(2); });
    e.schedule(e.now(), [&] { order.push_back(1); });
  });
  e.run_until(5.0);
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(Engine, RejectsPastEvents) {
  Engine e;
  e.run_until(3.0);
  EXPECT_THROW(e.schedule(2.0, [] {}), CausalityError);
  EXPECT_THROW(e.run_until(1.0), CausalityError);
}

TEST(Engine, EmptyRunParksClockAtEnd) {
  Engine e;
  Network net(e, pair_topology(100, 0.01));
  const auto s = net.run_until(10.0);
  EXPECT_EQ(e.now(), 10.0);
  EXPECT_EQ(s.injected, 0u);
  EXPECT_EQ(s.delivered, 0u);
  EXPECT_EQ(s.in_flight, 0u);
}

TEST(Engine, TraceHashIsReproducible) {
  auto run = [] {
    Engine e;
    for (int i = 0; i < 50; ++i) e.schedule(0.1 * (i % 7), [] {});
    e.run_until(1.0);
    return e.trace_hash();
  };
  EXPECT_EQ(run(), run());
}

TEST(LinkQueue, ServiceTimeChainsOnBusyUntil) {
  Link link;
  link.capacity = 100;
  link.queue_limit = 10;
  LinkQueue q;
  auto first = enqueue_packet(q, Packet{}, 0.0, link);
  auto second = enqueue_packet(q, Packet{}, 0.0, link);
  ASSERT_TRUE(std::holds_alternative<Enqueued>(first));
  ASSERT_TRUE(std::holds_alternative<Enqueued>(second));
  EXPECT_DOUBLE_EQ(std::get<Enqueued>(first).depart, 0.01);
  EXPECT_DOUBLE_EQ(std::get<Enqueued>(second).depart, 0.02);
}

TEST(LinkQueue, DropTailWhenFull) {
  Link link;
  link.queue_limit = 2;
  LinkQueue q;
  enqueue_packet(q, Packet{}, 0.0, link);
  enqueue_packet(q, Packet{}, 0.0, link);
  EXPECT_TRUE(std::holds_alternative<QueueFull>(enqueue_packet(q, Packet{}, 0.0, link)));
  EXPECT_EQ(q.queued.size(), 2u);
}

TEST(Network, SinglePacketDeliveryTime) {
  Engine e;
  Network net(e, pair_topology(100, 0.01));
  SimTime arrived = -1;
  net.hooks().on_arrive = [&](NodeId, const Packet&, HostOutcome, SimTime t) { arrived = t; };
  net.inject(packet(0, 1));
  const auto s = net.run_until(1.0);
  EXPECT_DOUBLE_EQ(arrived, 0.02);
  EXPECT_EQ(s.delivered, 1u);
  EXPECT_TRUE(s.conserved());
}

TEST(Network, FifoServiceAndQueueBound) {
  Engine e;
  Network net(e, pair_topology(100, 0.0, 3));
  std::vector<PacketId> order;
  net.hooks().on_arrive = [&](NodeId, const Packet& p, HostOutcome, SimTime) { order.push_back(p.id); };
  std::size_t max_queue = 0;
  net.hooks().on_transmit = [&](LinkId, const Packet&, SimTime) {
    max_queue = std::max(max_queue, net.queue(0, 0).queued.size());
  };
  for (int i = 0; i < 10; ++i) net.inject(packet(0, 1));
  const auto s = net.run_until(1.0);
  EXPECT_EQ(s.queue_dropped, 7u);
  EXPECT_EQ(order, (std::vector<PacketId>{1, 2, 3}));
  EXPECT_LE(max_queue, 3u);
}

TEST(Network, InFlightCountsQueuedAndOnWire) {
  Engine e;
  Network net(e, pair_topology(10, 1.0));
  for (int i = 0; i < 3; ++i) net.inject(packet(0, 1));
  const auto s = net.run_until(0.15);  // first packet on the wire, two queued
  EXPECT_EQ(s.in_flight, 3u);
  EXPECT_TRUE(s.conserved());
}

TEST(Network, HostsDoNotForwardTransit) {
  Topology t;
  t.add_node(Node{"A"});
  t.add_node(Node{"B"});
  t.add_node(Node{"C"});
  t.add_link(Link{"ab", 0, 1});
  t.add_link(Link{"bc", 1, 2});
  Engine e;
  EXPECT_THROW(Network(e, t), TopologyError);
}

TEST(Topology, RejectsDisconnectedGraph) {
  Topology t;
  t.add_node(Node{"A"});
  t.add_node(Node{"B"});
  EXPECT_THROW(t.validate(), TopologyError);
  EXPECT_THROW(t.add_node(Node{"A"}), TopologyError);
}

TEST(Routing, ShortestPathThroughRouters) {
  Topology t;
  t.add_node(Node{"A"});
  t.add_node(Node{"R1", NodeKind::Router});
  t.add_node(Node{"R2", NodeKind::Router});
  t.add_node(Node{"B"});
  t.add_link(Link{"a-r1", 0, 1});
  t.add_link(Link{"r1-r2", 1, 2});
  t.add_link(Link{"r2-b", 2, 3});
  t.add_link(Link{"a-r2", 0, 2});
  const auto r = RoutingTable::compute(t);
  EXPECT_EQ(r.hops(0, 3), 2);
  EXPECT_EQ(r.next_hop(0, 3)->next, 2u);
  EXPECT_EQ(r.next_hop(3, 0)->next, 2u);
  EXPECT_EQ(r.next_hop(3, 0)->dir, 1);
}

TEST(Host, PingOfDeathCrashesOnlyVulnerableHosts) {
  Node weak{"W"};
  weak.vulnerable_to = {AttackKind::PingOfDeath};
  HostState vulnerable(0, weak);
  HostState patched(1, Node{"P"});
  const auto pod = packet(2, 0, 70000, Proto::Icmp);
  EXPECT_EQ(host_process(vulnerable, pod, 1.0), HostOutcome::CrashTriggered);
  EXPECT_EQ(vulnerable.status(), HostStatus::Crashed);
  EXPECT_EQ(host_process(vulnerable, packet(2, 0), 1.1), HostOutcome::DeadDrop);
  EXPECT_EQ(host_process(patched, packet(2, 1, 70000, Proto::Icmp), 1.0), HostOutcome::Accepted);
  EXPECT_EQ(patched.status(), HostStatus::Up);
}

TEST(Host, MemorySlotsRefuseNewFlows) {
  Node n{"H"};
  n.mem_slots = 1;
  HostState h(0, n);
  EXPECT_EQ(host_process(h, packet(1, 0), 0.0), HostOutcome::Accepted);
  EXPECT_EQ(host_process(h, packet(2, 0), 0.1), HostOutcome::RefusedMem);
  EXPECT_EQ(host_process(h, packet(1, 0), 0.2), HostOutcome::Accepted);
  EXPECT_EQ(h.mem_used(), 1u);
  // idle release after 5 s
  EXPECT_EQ(host_process(h, packet(2, 0), 5.3), HostOutcome::Accepted);
}

TEST(Host, CpuUtilisationOverSlidingSecond) {
  Node n{"H"};
  n.cpu_capacity = 1000;
  HostState h(0, n);
  EXPECT_DOUBLE_EQ(advance_host_resources(h, 0.1, 0.5), 0.0);
  for (int i = 0; i < 500; ++i) host_process(h, packet(1, 0), 1.0 + i * 0.001);
  EXPECT_DOUBLE_EQ(advance_host_resources(h, 0.1, 1.5), 0.5);
  for (int i = 0; i < 2000; ++i) host_process(h, packet(1, 0), 1.6 + i * 0.0001);
  EXPECT_DOUBLE_EQ(advance_host_resources(h, 0.1, 1.9), 1.0);
  EXPECT_THROW(advance_host_resources(h, 0.0, 2.0), std::invalid_argument);
  EXPECT_EQ(h.util_history().back().first, 1.9);
}

TEST(Host, EchoRequestIsReflectedToSpoofedSource) {
  Topology t;
  t.add_node(Node{"ATK"});
  t.add_node(Node{"R", NodeKind::Router});
  t.add_node(Node{"REFL"});
  t.add_node(Node{"V"});
  t.add_link(Link{"a", 0, 1});
  t.add_link(Link{"b", 1, 2});
  t.add_link(Link{"c", 1, 3});
  Engine e;
  Network net(e, t);
  std::vector<std::pair<NodeId, FlowKey>> arrivals;
  net.hooks().on_arrive = [&](NodeId at, const Packet& p, HostOutcome, SimTime) {
    arrivals.emplace_back(at, p.flow_key());
  };
  auto trigger = packet(0, 2, 64, Proto::Icmp);
  trigger.spoofed_src = 3;
  trigger.echo_request = true;
  net.inject(trigger);
  const auto s = net.run_until(1.0);
  ASSERT_EQ(arrivals.size(), 2u);
  EXPECT_EQ(arrivals[1].first, 3u);
  EXPECT_EQ(arrivals[1].second, (FlowKey{2, 3, Proto::Icmp}));
  EXPECT_EQ(s.injected, 2u);
  EXPECT_TRUE(s.conserved());
}

TEST(Host, RecoveryAfterReboot) {
  Topology t = pair_topology(1000, 0.001);
  Topology t2;
  Node a{"A"};
  Node b{"B"};
  b.vulnerable_to = {AttackKind::Land};
  b.recovery_after = 2.0;
  t2.add_node(a);
  t2.add_node(b);
  t2.add_link(t.link(0));
  Engine e;
  Network net(e, t2);
  std::vector<SimTime> recovered;
  net.hooks().on_recover = [&](NodeId, SimTime at) { recovered.push_back(at); };
  auto land = packet(0, 1, 60, Proto::TcpLike);
  land.spoofed_src = 1;
  net.inject(land);
  net.run_until(1.0);
  EXPECT_EQ(net.host(1).status(), HostStatus::Crashed);
  net.run_until(3.0);
  EXPECT_EQ(net.host(1).status(), HostStatus::Up);
  ASSERT_EQ(recovered.size(), 1u);
}

TEST(Network, CrashedHostEmitsNothing) {
  Node b{"B"};
  b.vulnerable_to = {AttackKind::PingOfDeath};
  Topology t;
  t.add_node(Node{"A"});
  t.add_node(b);
  t.add_link(Link{"ab", 0, 1});
  Engine e;
  Network net(e, t);
  net.inject(packet(0, 1, 70000, Proto::Icmp));
  net.run_until(1.0);
  EXPECT_FALSE(net.inject(packet(1, 0)).has_value());
  EXPECT_EQ(net.stats().injected, 1u);
}

TEST(Network, FilterDropsBeforeQueueing) {
  Topology t;
  t.add_node(Node{"A"});
  t.add_node(Node{"N", NodeKind::Ne});
  t.add_node(Node{"B"});
  t.add_link(Link{"an", 0, 1});
  t.add_link(Link{"nb", 1, 2});
  Engine e;
  Network net(e, t);
  net.hooks().filter = [](NodeId, const Packet& p, SimTime) -> std::optional<FilterHit> {
    if (p.proto == Proto::Udp) return FilterHit{7, 1.0};
    return std::nullopt;
  };
  int filtered = 0;
  net.hooks().on_drop = [&](const Packet&, DropReason r, NodeId at, std::optional<LinkId> link,
                            std::optional<FilterHit> hit, SimTime) {
    EXPECT_EQ(r, DropReason::Filter);
    EXPECT_EQ(at, 1u);
    EXPECT_FALSE(link.has_value());
    EXPECT_EQ(hit->rule, 7u);
    ++filtered;
  };
  net.inject(packet(0, 2));
  net.inject(packet(0, 2, 500, Proto::TcpLike));
  const auto s = net.run_until(1.0);
  EXPECT_EQ(filtered, 1);
  EXPECT_EQ(s.filter_dropped, 1u);
  EXPECT_EQ(s.delivered, 1u);
  EXPECT_TRUE(s.conserved());
}

// Conservation on random star-of-routers topologies with random traffic.
TEST(Network, ConservationOnRandomMiniTopologies) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 300; ++trial) {
    Topology t;
    const int routers = 1 + static_cast<int>(gen() % 3);
    const int hosts = 2 + static_cast<int>(gen() % 4);
    for (int r = 0; r < routers; ++r) t.add_node(Node{"R" + std::to_string(r), NodeKind::Router});
    for (int r = 1; r < routers; ++r) {
      Link l{"rr" + std::to_string(r), static_cast<NodeId>(r - 1), static_cast<NodeId>(r)};
      l.capacity = 50 + static_cast<double>(gen() % 200);
      l.queue_limit = 1 + gen() % 8;
      t.add_link(l);
    }
    for (int h = 0; h < hosts; ++h) {
      const auto id = t.add_node(Node{"H" + std::to_string(h)});
      Link l{"h" + std::to_string(h), id, static_cast<NodeId>(gen() % routers)};
      l.capacity = 50 + static_cast<double>(gen() % 200);
      l.queue_limit = 1 + gen() % 8;
      l.latency = 0.001 * static_cast<double>(gen() % 20);
      t.add_link(l);
    }
    Engine e;
    Network net(e, t);
    const auto n = static_cast<NodeId>(t.nodes().size());
    for (int k = 0; k < 200; ++k) {
      const SimTime at = 0.001 * static_cast<double>(gen() % 1000);
      const NodeId src = routers + static_cast<NodeId>(gen() % hosts);
      NodeId dst = routers + static_cast<NodeId>(gen() % hosts);
      if (dst == src) dst = (dst + 1 - routers) % hosts + routers;
      e.schedule(at, [&net, src, dst] { net.inject(packet(src, dst)); });
    }
    (void)n;
    const SimTime stop = 0.2 + 0.001 * static_cast<double>(gen() % 2000);
    const auto s = net.run_until(stop);
    ASSERT_TRUE(s.conserved()) << "trial " << trial;
  }
}

TEST(Signature, MatchesOversizeAndLand) {
  auto pod = packet(1, 2, 70000, Proto::Icmp);
  EXPECT_EQ(agents::signature_match(pod), AttackKind::PingOfDeath);
  auto land = packet(1, 2, 60, Proto::TcpLike);
  land.spoofed_src = 2;
  EXPECT_EQ(agents::signature_match(land), AttackKind::Land);
  EXPECT_FALSE(agents::signature_match(packet(1, 2)).has_value());
  EXPECT_FALSE(agents::signature_match(packet(1, 2, 65535)).has_value());
}

TEST(Rng, SubstreamsAreIndependentOfEachOther) {
  auto a1 = Rng::substream(5, "legit/0");
  auto a2 = Rng::substream(5, "legit/0");
  auto b = Rng::substream(5, "legit/1");
  auto c = Rng::substream(6, "legit/0");
  const double x = a1.uniform();
  EXPECT_EQ(x, a2.uniform());
  EXPECT_NE(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  for (int i = 0; i < 1000; ++i) {
    const double u = a1.uniform(0.9, 1.1);
    ASSERT_GE(u, 0.9);
    ASSERT_LT(u, 1.1);
  }
}

TEST(Packet, FlowKeyUsesSpoofedSource) {
  auto p = packet(1, 2);
  EXPECT_EQ(p.flow_key(), (FlowKey{1, 2, Proto::Udp}));
  p.spoofed_src = 9;
  EXPECT_EQ(p.flow_key(), (FlowKey{9, 2, Proto::Udp}));
}
