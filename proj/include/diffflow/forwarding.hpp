#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffflow/core.hpp"

namespace diffflow {

struct FiveTuple {
    std::uint32_t src_ip = 0;
    std::uint32_t dst_ip = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t protocol = 6;  // TCP tag

    bool operator==(const FiveTuple&) const = default;
};

inline std::string ip_to_string(std::uint32_t ip) {
    std::ostringstream os;
    os << ((ip >> 24) & 0xff) << '.' << ((ip >> 16) & 0xff) << '.' << ((ip >> 8) & 0xff)
       << '.' << (ip & 0xff);
    return os.str();
}

// Seeded 64-bit hash over the canonical 13-byte encoding of the tuple.
// FNV-1a accumulate, splitmix finalize; deterministic for a fixed seed.
inline std::uint64_t flow_hash(const FiveTuple& t, std::uint64_t seed) {
    std::array<std::uint8_t, 13> bytes{};
    auto put32 = [&](int at, std::uint32_t v) {
        bytes[at] = v >> 24;
        bytes[at + 1] = (v >> 16) & 0xff;
        bytes[at + 2] = (v >> 8) & 0xff;
        bytes[at + 3] = v & 0xff;
    };
    put32(0, t.src_ip);
    put32(4, t.dst_ip);
    bytes[8] = t.src_port >> 8;
    bytes[9] = t.src_port & 0xff;
    bytes[10] = t.dst_port >> 8;
    bytes[11] = t.dst_port & 0xff;
    bytes[12] = t.protocol;

    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h);
}

struct FiveTupleHash {
    std::size_t operator()(const FiveTuple& t) const { return flow_hash(t, 0); }
};

// Hash-pinned selection: identical (key, seed, candidates) always picks
// the same port, which is what gives ECMP its flow affinity.
inline int ecmp_select(const FiveTuple& key, const std::vector<int>& candidates,
                       std::uint64_t hash_seed) {
    if (candidates.empty()) throw std::invalid_argument("ecmp_select: no candidates");
    return candidates[flow_hash(key, hash_seed) % candidates.size()];
}

// Independent uniform draw per packet.
template <typename Rng>
int rps_select(const std::vector<int>& candidates, Rng& rng) {
    if (candidates.empty()) throw std::invalid_argument("rps_select: no candidates");
    if (candidates.size() == 1) return candidates[0];
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
}

struct MacAddress {
    std::array<std::uint8_t, 6> bytes{};
    bool operator==(const MacAddress&) const = default;

    std::string to_string() const {
        static const char* hex = "0123456789abcdef";
        std::string s;
        for (int i = 0; i < 6; ++i) {
            if (i) s += ':';
            s += hex[bytes[i] >> 4];
            s += hex[bytes[i] & 0xf];
        }
        return s;
    }
};

// One interface per server, addresses assigned in server order.
inline MacAddress make_server_mac(int server_ordinal) {
    MacAddress m;
    m.bytes = {0x00, 0x11, 0x22, 0x01, 0x23,
               static_cast<std::uint8_t>(0x42 + server_ordinal)};
    return m;
}

struct PacketHeader {
    std::optional<int> in_port;
    MacAddress src_mac;
    MacAddress dst_mac;
    FiveTuple tuple;
};

enum class ActionKind : std::uint8_t { FixedEgress, RandomEgress, DefaultEcmp };

struct Action {
    ActionKind kind = ActionKind::DefaultEcmp;
    int fixed_port = -1;               // FixedEgress
    std::vector<int> eligible_ports;   // RandomEgress
};

struct ForwardingRule {
    // Exact-match fields; in_port is optional as in the table examples.
    std::optional<int> in_port;
    MacAddress src_mac;
    MacAddress dst_mac;
    FiveTuple tuple;
    Action action;
    int priority = 0;

    bool matches(const PacketHeader& h) const {
        if (in_port && (!h.in_port || *h.in_port != *in_port)) return false;
        return src_mac == h.src_mac && dst_mac == h.dst_mac && tuple == h.tuple;
    }
};

// Ordered rule list with an always-matching ECMP default, so lookup is
// total over packets.
class RuleTable {
public:
    void install(ForwardingRule rule) {
        if (rule.action.kind == ActionKind::RandomEgress && rule.action.eligible_ports.empty())
            throw std::invalid_argument("rule: RandomEgress needs a non-empty port set");
        rules_.push_back(std::move(rule));
    }

    const Action& lookup(const PacketHeader& h) const {
        const ForwardingRule* best = nullptr;
        for (const ForwardingRule& r : rules_) {
            if (!r.matches(h)) continue;
            if (!best || r.priority > best->priority) best = &r;
        }
        return best ? best->action : default_action_;
    }

    std::size_t size() const { return rules_.size(); }
    const std::vector<ForwardingRule>& rules() const { return rules_; }

    // Human-readable match/action table for debugging.
    std::string dump() const {
        std::ostringstream os;
        os << "in_port src_mac dst_mac src_ip dst_ip src_port dst_port action\n";
        for (const ForwardingRule& r : rules_) {
            os << (r.in_port ? std::to_string(*r.in_port) : std::string("*")) << ' '
               << r.src_mac.to_string() << ' ' << r.dst_mac.to_string() << ' '
               << ip_to_string(r.tuple.src_ip) << ' ' << ip_to_string(r.tuple.dst_ip) << ' '
               << r.tuple.src_port << ' ' << r.tuple.dst_port << ' ';
            if (r.action.kind == ActionKind::FixedEgress) {
                os << "egress:" << r.action.fixed_port;
            } else {
                os << "random-egress:{";
                for (std::size_t i = 0; i < r.action.eligible_ports.size(); ++i)
                    os << (i ? "," : "") << r.action.eligible_ports[i];
                os << '}';
            }
            os << '\n';
        }
        os << "* * * * * * * ecmp-default\n";
        return os.str();
    }

private:
    std::vector<ForwardingRule> rules_;
    Action default_action_{};
};

}  // namespace diffflow
