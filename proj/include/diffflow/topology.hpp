#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffflow/core.hpp"

namespace diffflow {

enum class Tier : std::uint8_t { Server, Tor, Aggregation, Core };

inline const char* tier_name(Tier t) {
    switch (t) {
        case Tier::Server: return "server";
        case Tier::Tor: return "tor";
        case Tier::Aggregation: return "aggregation";
        case Tier::Core: return "core";
    }
    return "?";
}

struct TopologyParams {
    // Tier populations. Defaults give the two-pod leaf-spine fabric:
    // 8 servers, 4 ToRs, 4 aggregation switches, 2 cores.
    int pods = 2;
    int tors_per_pod = 2;
    int servers_per_tor = 2;
    int aggs_per_pod = 2;
    int cores = 2;

    double link_rate_bps = 1e9;
    std::int64_t packet_size_bytes = 1500;
    simtime_ps service_tor = microseconds(3);
    simtime_ps service_agg = microseconds(3);
    simtime_ps service_core = microseconds(12);
    std::int64_t queue_capacity_bytes = 1'500'000;

    int num_servers() const { return pods * tors_per_pod * servers_per_tor; }
    int num_tors() const { return pods * tors_per_pod; }
    int num_aggs() const { return pods * aggs_per_pod; }
    int num_nodes() const { return num_servers() + num_tors() + num_aggs() + cores; }

    // Queue capacity in packets, per class queue (1.5 MB / 1500 B = 1000).
    int queue_capacity_packets() const {
        return static_cast<int>(queue_capacity_bytes / packet_size_bytes);
    }
    simtime_ps packet_tx_time() const {
        return transmission_time_ps(packet_size_bytes, link_rate_bps);
    }
};

// One equal-cost shortest path, server to server.
struct Path {
    std::vector<int> nodes;   // flat node ids, source server first
    int hop_count = 0;        // forwarding (non-server) nodes on the path
    simtime_ps ideal_delay = 0;
};

struct PathSet {
    int src = -1;
    int dst = -1;
    std::vector<Path> paths;  // ascending by (ideal_delay, node sequence)
    int count() const { return static_cast<int>(paths.size()); }
    simtime_ps min_delay() const { return paths.front().ideal_delay; }
    simtime_ps max_delay() const { return paths.back().ideal_delay; }
};

// Directed link; the egress port lives at `owner`.
struct Port {
    int id = -1;
    int owner = -1;
    int peer = -1;
    int index_at_owner = -1;  // physical port index, ascending by peer id
    double capacity_bps = 0;
};

class Topology {
public:
    explicit Topology(const TopologyParams& p) : params_(p) {
        if (p.pods <= 0 || p.tors_per_pod <= 0 || p.servers_per_tor <= 0 ||
            p.aggs_per_pod <= 0 || p.cores <= 0)
            throw std::invalid_argument("topology: tier populations must be positive");
        if (p.link_rate_bps <= 0 || p.packet_size_bytes <= 0 || p.queue_capacity_bytes <= 0)
            throw std::invalid_argument("topology: rates and sizes must be positive");
        build_nodes();
        build_links();
        build_routing();
    }

    const TopologyParams& params() const { return params_; }

    int num_nodes() const { return params_.num_nodes(); }
    int num_servers() const { return params_.num_servers(); }
    int num_ports() const { return static_cast<int>(ports_.size()); }

    Tier tier_of(int node) const { return tiers_[node]; }
    bool is_server(int node) const { return tiers_[node] == Tier::Server; }

    // Ordinal within the node's own tier.
    int tier_index(int node) const { return tier_index_[node]; }

    int server_node(int server_ordinal) const { return server_ordinal; }
    int tor_node(int tor_ordinal) const { return params_.num_servers() + tor_ordinal; }
    int agg_node(int agg_ordinal) const {
        return params_.num_servers() + params_.num_tors() + agg_ordinal;
    }
    int core_node(int core_ordinal) const {
        return params_.num_servers() + params_.num_tors() + params_.num_aggs() + core_ordinal;
    }

    int tor_of_server(int server) const { return tor_node(server / params_.servers_per_tor); }

    // S1..S8, T1..T4, A1..A4, C1..C2 (1-based within tier).
    std::string node_name(int node) const {
        static const char* prefix[] = {"S", "T", "A", "C"};
        return std::string(prefix[static_cast<int>(tiers_[node])]) +
               std::to_string(tier_index_[node] + 1);
    }

    simtime_ps service_time(int node) const { return service_time_[node]; }

    const std::vector<Port>& ports() const { return ports_; }
    const Port& port(int id) const { return ports_[id]; }
    const std::vector<int>& egress_ports(int node) const { return egress_[node]; }

    int port_between(int from, int to) const {
        for (int pid : egress_[from])
            if (ports_[pid].peer == to) return pid;
        throw std::invalid_argument("no link " + node_name(from) + "->" + node_name(to));
    }

    // Candidate egress ports at `node` lying on shortest paths toward
    // `dst_server`, ascending by physical port index.
    const std::vector<int>& next_hop_ports(int node, int dst_server) const {
        return next_hops_[node * num_servers() + dst_server];
    }

    int hop_distance(int node, int dst_server) const {
        return dist_[node * num_servers() + dst_server];
    }

    const PathSet& paths_between(int src_server, int dst_server) const {
        if (!is_server(src_server) || !is_server(dst_server))
            throw std::invalid_argument("paths_between: endpoints must be servers");
        if (src_server == dst_server)
            throw std::invalid_argument("paths_between: src == dst");
        return path_sets_[src_server * num_servers() + dst_server];
    }

    // Store-and-forward delay of one packet over `path` in an empty
    // network: per-hop transmission plus each forwarding node's service.
    simtime_ps ideal_path_delay(const Path& path, std::int64_t packet_bytes) const {
        if (packet_bytes <= 0) throw std::invalid_argument("ideal_path_delay: packet size");
        simtime_ps d = 0;
        for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
            const Port& p = ports_[port_between(path.nodes[i], path.nodes[i + 1])];
            d += transmission_time_ps(packet_bytes, p.capacity_bps);
        }
        for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i)
            d += service_time_[path.nodes[i]];
        return d;
    }

    simtime_ps ideal_path_delay(const Path& path) const {
        return ideal_path_delay(path, params_.packet_size_bytes);
    }

    // Round-trip reference used by the retransmission timer: twice the
    // ideal delay of the fastest path between the endpoints.
    simtime_ps rtt(int src_server, int dst_server) const {
        return 2 * paths_between(src_server, dst_server).min_delay();
    }

private:
    void build_nodes() {
        int n = params_.num_nodes();
        tiers_.resize(n);
        tier_index_.resize(n);
        service_time_.resize(n);
        int at = 0;
        for (int i = 0; i < params_.num_servers(); ++i, ++at) {
            tiers_[at] = Tier::Server;
            tier_index_[at] = i;
            service_time_[at] = 0;
        }
        for (int i = 0; i < params_.num_tors(); ++i, ++at) {
            tiers_[at] = Tier::Tor;
            tier_index_[at] = i;
            service_time_[at] = params_.service_tor;
        }
        for (int i = 0; i < params_.num_aggs(); ++i, ++at) {
            tiers_[at] = Tier::Aggregation;
            tier_index_[at] = i;
            service_time_[at] = params_.service_agg;
        }
        for (int i = 0; i < params_.cores; ++i, ++at) {
            tiers_[at] = Tier::Core;
            tier_index_[at] = i;
            service_time_[at] = params_.service_core;
        }
    }

    void add_bidir_link(int a, int b) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }

    void build_links() {
        adjacency_.assign(num_nodes(), {});
        // Servers connect in pairs to their ToR.
        for (int s = 0; s < params_.num_servers(); ++s)
            add_bidir_link(server_node(s), tor_of_server(s));
        // Each ToR connects to every aggregation switch in its pod.
        for (int t = 0; t < params_.num_tors(); ++t) {
            int pod = t / params_.tors_per_pod;
            for (int a = 0; a < params_.aggs_per_pod; ++a)
                add_bidir_link(tor_node(t), agg_node(pod * params_.aggs_per_pod + a));
        }
        // Every aggregation switch connects to every core.
        for (int a = 0; a < params_.num_aggs(); ++a)
            for (int c = 0; c < params_.cores; ++c)
                add_bidir_link(agg_node(a), core_node(c));

        egress_.assign(num_nodes(), {});
        for (int n = 0; n < num_nodes(); ++n) {
            std::sort(adjacency_[n].begin(), adjacency_[n].end());
            for (int peer : adjacency_[n]) {
                Port p;
                p.id = static_cast<int>(ports_.size());
                p.owner = n;
                p.peer = peer;
                p.index_at_owner = static_cast<int>(egress_[n].size());
                p.capacity_bps = params_.link_rate_bps;
                egress_[n].push_back(p.id);
                ports_.push_back(p);
            }
        }
    }

    void build_routing() {
        int n = num_nodes();
        int ns = num_servers();
        dist_.assign(static_cast<std::size_t>(n) * ns, -1);
        next_hops_.assign(static_cast<std::size_t>(n) * ns, {});

        // BFS from each destination server over the (symmetric) graph.
        for (int d = 0; d < ns; ++d) {
            std::vector<int> q{server_node(d)};
            dist_[server_node(d) * ns + d] = 0;
            for (std::size_t head = 0; head < q.size(); ++head) {
                int u = q[head];
                for (int v : adjacency_[u]) {
                    if (dist_[v * ns + d] < 0) {
                        dist_[v * ns + d] = dist_[u * ns + d] + 1;
                        q.push_back(v);
                    }
                }
            }
            for (int u = 0; u < n; ++u) {
                if (u == server_node(d)) continue;
                for (int pid : egress_[u]) {
                    int v = ports_[pid].peer;
                    if (dist_[v * ns + d] == dist_[u * ns + d] - 1)
                        next_hops_[u * ns + d].push_back(pid);
                }
            }
        }

        path_sets_.resize(static_cast<std::size_t>(ns) * ns);
        for (int s = 0; s < ns; ++s)
            for (int d = 0; d < ns; ++d)
                if (s != d) path_sets_[s * ns + d] = enumerate(s, d);
    }

    PathSet enumerate(int s, int d) const {
        PathSet ps;
        ps.src = server_node(s);
        ps.dst = server_node(d);
        std::vector<int> cur{ps.src};
        collect_paths(ps, cur, d);
        for (Path& p : ps.paths) {
            p.hop_count = static_cast<int>(p.nodes.size()) - 2;
            p.ideal_delay = ideal_path_delay(p);
        }
        std::sort(ps.paths.begin(), ps.paths.end(), [](const Path& a, const Path& b) {
            if (a.ideal_delay != b.ideal_delay) return a.ideal_delay < b.ideal_delay;
            return a.nodes < b.nodes;
        });
        return ps;
    }

    void collect_paths(PathSet& ps, std::vector<int>& cur, int dst_server) const {
        int here = cur.back();
        if (here == server_node(dst_server)) {
            Path p;
            p.nodes = cur;
            ps.paths.push_back(std::move(p));
            return;
        }
        for (int pid : next_hops_[here * num_servers() + dst_server]) {
            cur.push_back(ports_[pid].peer);
            collect_paths(ps, cur, dst_server);
            cur.pop_back();
        }
    }

    TopologyParams params_;
    std::vector<Tier> tiers_;
    std::vector<int> tier_index_;
    std::vector<simtime_ps> service_time_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<Port> ports_;
    std::vector<std::vector<int>> egress_;
    std::vector<int> dist_;
    std::vector<std::vector<int>> next_hops_;
    std::vector<PathSet> path_sets_;
};

inline Topology build_reference_topology(const TopologyParams& params = {}) {
    return Topology(params);
}

inline PathSet enumerate_paths(const Topology& topo, int src_server, int dst_server) {
    return topo.paths_between(src_server, dst_server);
}

}  // namespace diffflow
