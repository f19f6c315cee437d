#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffflow/core.hpp"
#include "diffflow/forwarding.hpp"
#include "diffflow/topology.hpp"

namespace diffflow {

enum class FlowClass : std::uint8_t { Short, Long };

inline const char* flow_class_name(FlowClass c) {
    return c == FlowClass::Short ? "short" : "long";
}

struct FlowSpec {
    std::uint32_t flow_id = 0;
    FiveTuple key;
    FlowClass cls = FlowClass::Short;
    int size_packets = 0;  // H
    int src = 0;           // server ordinals
    int dst = 0;
    simtime_ps arrival = 0;
};

enum class TrafficMatrix : std::uint8_t { UniformRandom, FixedPairs };

struct WorkloadParams {
    double short_fraction = 0.9;
    double mean_short_packets = 6.0;
    double mean_long_packets = 666.0;
    int short_min = 1, short_max = 10;
    int long_min = 11, long_max = 1000;
    double load = 0.1;  // Erlang offered per source-server uplink
    std::int64_t packet_size_bytes = 1500;
    int flow_count = 50000;
    TrafficMatrix matrix = TrafficMatrix::UniformRandom;
    std::uint64_t seed = 1;

    void validate() const {
        if (load <= 0) throw std::invalid_argument("workload.load must be > 0");
        if (short_fraction < 0 || short_fraction > 1)
            throw std::invalid_argument("workload.short_fraction must lie in [0,1]");
        if (mean_short_packets < short_min || mean_short_packets > short_max)
            throw std::invalid_argument("workload.mean_short_packets outside class range");
        if (mean_long_packets < long_min || mean_long_packets > long_max)
            throw std::invalid_argument("workload.mean_long_packets outside class range");
        if (flow_count <= 0) throw std::invalid_argument("workload.flow_count must be > 0");
    }
};

// Poisson size draw, resampled until it falls in the class range.
// Clamping instead would pile mass on the boundaries and shift the mean.
template <typename Rng>
int sample_flow_size(FlowClass cls, const WorkloadParams& p, Rng& rng) {
    double mean = cls == FlowClass::Short ? p.mean_short_packets : p.mean_long_packets;
    int lo = cls == FlowClass::Short ? p.short_min : p.long_min;
    int hi = cls == FlowClass::Short ? p.short_max : p.long_max;
    std::poisson_distribution<int> draw(mean);
    for (;;) {
        int v = draw(rng);
        if (v >= lo && v <= hi) return v;
    }
}

inline double mean_flow_size_bits(const WorkloadParams& p) {
    double mean_packets = p.short_fraction * p.mean_short_packets +
                          (1.0 - p.short_fraction) * p.mean_long_packets;
    return mean_packets * static_cast<double>(p.packet_size_bytes) * 8.0;
}

// Flow arrival rate per source server such that the offered bit rate on
// each access uplink equals load * link_rate.
inline double arrival_rate_for_load(const WorkloadParams& p, double link_rate_bps) {
    if (p.load <= 0) return 0.0;
    return p.load * link_rate_bps / mean_flow_size_bits(p);
}

inline std::uint32_t server_ip(const Topology& topo, int server_ordinal) {
    int tor = topo.tier_index(topo.tor_of_server(topo.server_node(server_ordinal)));
    int pod = tor / topo.params().tors_per_pod;
    int servers_per_pod = topo.params().tors_per_pod * topo.params().servers_per_tor;
    int local = server_ordinal % servers_per_pod;
    return (172u << 24) | (16u << 16) | (static_cast<std::uint32_t>(pod + 1) << 8) |
           static_cast<std::uint32_t>(local + 1);
}

// Pure function of (seed, flow_id, endpoints): replaying a dumped
// workload regenerates identical keys. Port pairs are unique per flow
// via an affine bijection on a mixed-radix split of the flow id.
inline FiveTuple synth_five_tuple(std::uint64_t seed, std::uint32_t flow_id, int src, int dst,
                                  const Topology& topo) {
    constexpr std::uint32_t kSpan = 60000;
    std::uint64_t b1 = derive_seed(seed, 0x706f7274u) % kSpan;
    std::uint64_t b2 = derive_seed(seed, 0x74726f70u) % kSpan;
    std::uint32_t lo = flow_id % kSpan;
    std::uint32_t hi = (flow_id / kSpan) % kSpan;
    FiveTuple t;
    t.src_ip = server_ip(topo, src);
    t.dst_ip = server_ip(topo, dst);
    t.src_port = static_cast<std::uint16_t>(1024 + (7919ull * lo + b1) % kSpan);
    t.dst_port = static_cast<std::uint16_t>(1024 + (7121ull * hi + b2) % kSpan);
    t.protocol = 6;
    return t;
}

// Time-ordered Poisson workload. Draw order per flow is fixed
// (inter-arrival, class, size, endpoints) so a seed pins every field.
inline std::vector<FlowSpec> generate_workload(const WorkloadParams& p, const Topology& topo) {
    p.validate();
    int ns = topo.num_servers();
    if (ns < 2) throw std::invalid_argument("workload needs at least 2 servers");

    std::mt19937_64 rng(derive_seed(p.seed, 0x776b6c64u));
    double rate_per_server = arrival_rate_for_load(p, topo.params().link_rate_bps);
    double aggregate_rate = rate_per_server * ns;
    std::exponential_distribution<double> inter_arrival(aggregate_rate);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_src(0, ns - 1);
    std::uniform_int_distribution<int> pick_other(0, ns - 2);

    std::vector<FlowSpec> flows;
    flows.reserve(p.flow_count);
    simtime_ps now = 0;
    for (int i = 0; i < p.flow_count; ++i) {
        simtime_ps dt = seconds_to_ps(inter_arrival(rng));
        now += dt > 0 ? dt : 1;

        FlowSpec f;
        f.flow_id = static_cast<std::uint32_t>(i);
        f.arrival = now;
        f.cls = unit(rng) < p.short_fraction ? FlowClass::Short : FlowClass::Long;
        f.size_packets = sample_flow_size(f.cls, p, rng);
        if (p.matrix == TrafficMatrix::FixedPairs) {
            f.src = pick_src(rng);
            f.dst = (f.src + ns / 2) % ns;
        } else {
            f.src = pick_src(rng);
            int d = pick_other(rng);
            f.dst = d >= f.src ? d + 1 : d;
        }
        f.key = synth_five_tuple(p.seed, f.flow_id, f.src, f.dst, topo);
        flows.push_back(f);
    }
    return flows;
}

// Line-oriented dump: one flow per line,
//   flow_id arrival_time class size_packets src dst
// The header records the seed so keys can be resynthesized on load.
inline void dump_workload(const std::vector<FlowSpec>& flows, const WorkloadParams& p,
                          std::ostream& os) {
    os << "# diffflow-workload v1 seed=" << p.seed << "\n";
    for (const FlowSpec& f : flows) {
        os << f.flow_id << ' ' << format_double(to_seconds(f.arrival)) << ' '
           << flow_class_name(f.cls) << ' ' << f.size_packets << ' ' << f.src << ' ' << f.dst
           << '\n';
    }
}

inline void dump_workload_file(const std::vector<FlowSpec>& flows, const WorkloadParams& p,
                               const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write workload dump: " + path);
    dump_workload(flows, p, os);
}

inline std::vector<FlowSpec> load_workload(std::istream& is, const Topology& topo) {
    std::string line;
    std::uint64_t seed = 0;
    bool have_seed = false;
    std::vector<FlowSpec> flows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto at = line.find("seed=");
            if (at != std::string::npos) {
                seed = std::stoull(line.substr(at + 5));
                have_seed = true;
            }
            continue;
        }
        std::istringstream ls(line);
        FlowSpec f;
        std::string cls, arrival;
        if (!(ls >> f.flow_id >> arrival >> cls >> f.size_packets >> f.src >> f.dst))
            throw std::runtime_error("workload dump: malformed line: " + line);
        f.arrival = seconds_to_ps(parse_double(arrival));
        f.cls = cls == "short" ? FlowClass::Short : FlowClass::Long;
        if (!have_seed) throw std::runtime_error("workload dump: missing seed header");
        f.key = synth_five_tuple(seed, f.flow_id, f.src, f.dst, topo);
        flows.push_back(f);
    }
    return flows;
}

inline std::vector<FlowSpec> load_workload_file(const std::string& path, const Topology& topo) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read workload dump: " + path);
    return load_workload(is, topo);
}

}  // namespace diffflow
