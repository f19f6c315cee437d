#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "diffflow/traffic.hpp"

using namespace diffflow;

namespace {

// Exact mean of a Poisson(mean) truncated to [lo, hi], by direct
// summation of the renormalized pmf.
double truncated_poisson_mean(double mean, int lo, int hi) {
    double mass = 0.0, weighted = 0.0;
    double p = std::exp(-mean);  // P(k=0)
    for (int k = 0; k <= hi; ++k) {
        if (k >= lo) {
            mass += p;
            weighted += k * p;
        }
        p *= mean / (k + 1);
    }
    return weighted / mass;
}

}  // namespace

TEST_CASE("flow sizes respect their class ranges") {
    WorkloadParams p;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        int s = sample_flow_size(FlowClass::Short, p, rng);
        REQUIRE(s >= 1);
        REQUIRE(s <= 10);
        int l = sample_flow_size(FlowClass::Long, p, rng);
        REQUIRE(l >= 11);
        REQUIRE(l <= 1000);
    }
}

TEST_CASE("truncated short-flow sizes keep their mean near 6") {
    WorkloadParams p;
    std::mt19937_64 rng(11);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += sample_flow_size(FlowClass::Short, p, rng);
    double empirical = sum / n;

    double exact = truncated_poisson_mean(6.0, 1, 10);
    CHECK(std::abs(exact - 6.0) < 0.1);  // truncation barely moves the mean
    // Monte Carlo within 3 sigma of the exact truncated mean (sd < 2.5).
    CHECK(std::abs(empirical - exact) < 3.0 * 2.5 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(empirical - 6.0) < 0.1);
}

TEST_CASE("arrival rate maps Erlang load to flows per second") {
    WorkloadParams p;
    CHECK(arrival_rate_for_load(p, 1e9) > 0);

    p.load = 0.8;
    // E[size] = (0.9*6 + 0.1*666) * 12000 bits = 864,000 bits.
    CHECK(mean_flow_size_bits(p) == Catch::Approx(864000.0));
    CHECK(arrival_rate_for_load(p, 1e9) == Catch::Approx(0.8e9 / 864000.0));

    WorkloadParams half = p;
    half.load = 0.4;
    CHECK(arrival_rate_for_load(p, 1e9) ==
          Catch::Approx(2.0 * arrival_rate_for_load(half, 1e9)));
}

TEST_CASE("workload generation is deterministic and well formed") {
    Topology topo = build_reference_topology();
    WorkloadParams p;
    p.flow_count = 5000;
    p.seed = 42;

    auto a = generate_workload(p, topo);
    auto b = generate_workload(p, topo);
    REQUIRE(a.size() == b.size());
    std::set<std::pair<std::uint32_t, std::uint32_t>> port_pairs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].arrival == b[i].arrival);
        CHECK(a[i].size_packets == b[i].size_packets);
        CHECK(a[i].key == b[i].key);
        CHECK(a[i].src != a[i].dst);
        if (i) CHECK(a[i].arrival > a[i - 1].arrival);
        int lo = a[i].cls == FlowClass::Short ? 1 : 11;
        int hi = a[i].cls == FlowClass::Short ? 10 : 1000;
        CHECK(a[i].size_packets >= lo);
        CHECK(a[i].size_packets <= hi);
        port_pairs.insert({a[i].key.src_port, a[i].key.dst_port});
    }
    CHECK(port_pairs.size() == a.size());  // keys unique within the run
}

TEST_CASE("short fraction one yields only short flows") {
    Topology topo = build_reference_topology();
    WorkloadParams p;
    p.flow_count = 2000;
    p.short_fraction = 1.0;
    for (const FlowSpec& f : generate_workload(p, topo))
        REQUIRE(f.cls == FlowClass::Short);
}

TEST_CASE("class split stays within binomial bounds") {
    Topology topo = build_reference_topology();
    WorkloadParams p;
    p.flow_count = 100000;
    p.seed = 3;
    auto flows = generate_workload(p, topo);
    int shorts = 0;
    for (const FlowSpec& f : flows)
        if (f.cls == FlowClass::Short) ++shorts;
    double n = p.flow_count;
    double sigma = std::sqrt(n * 0.9 * 0.1);
    CHECK(std::abs(shorts - 0.9 * n) < 3.0 * sigma);
}

TEST_CASE("long flows dominate the byte volume at defaults") {
    Topology topo = build_reference_topology();
    WorkloadParams p;
    p.flow_count = 50000;
    p.seed = 9;
    double long_bytes = 0, total = 0;
    for (const FlowSpec& f : generate_workload(p, topo)) {
        double b = f.size_packets * 1500.0;
        total += b;
        if (f.cls == FlowClass::Long) long_bytes += b;
    }
    // 666*0.1 / (666*0.1 + 6*0.9) = 0.925 expected share.
    CHECK(long_bytes / total == Catch::Approx(0.925).margin(0.02));
}

TEST_CASE("workload dump round-trips byte-identically") {
    Topology topo = build_reference_topology();
    WorkloadParams p;
    p.flow_count = 1000;
    p.seed = 17;
    auto flows = generate_workload(p, topo);

    std::ostringstream first_dump;
    dump_workload(flows, p, first_dump);
    std::istringstream in(first_dump.str());
    auto loaded = load_workload(in, topo);

    REQUIRE(loaded.size() == flows.size());
    for (std::size_t i = 0; i < flows.size(); ++i) {
        CHECK(loaded[i].arrival == flows[i].arrival);
        CHECK(loaded[i].key == flows[i].key);
        CHECK(loaded[i].size_packets == flows[i].size_packets);
        CHECK(loaded[i].cls == flows[i].cls);
        CHECK(loaded[i].src == flows[i].src);
        CHECK(loaded[i].dst == flows[i].dst);
    }

    std::ostringstream second;
    dump_workload(loaded, p, second);
    CHECK(first_dump.str() == second.str());
}
