#pragma once

#include <cstdint>
#include <vector>

#include "wbq/wlan.hpp"

namespace wbq {

struct Point {
    double x = 0;
    double y = 0;
};

double distance_m(const Point& a, const Point& b);

struct UePlacement {
    Point pos;
    int cell = 0;  // index into Deployment::aps
};

// Cellular layout: APs on a hexagonal grid (center cell first, then rings),
// UEs dropped uniformly inside the disc of their cell. Inter-site distance is
// sqrt(3) * cell_radius, so neighbouring discs tile the plane with overlap.
struct Deployment {
    std::vector<Point> aps;
    std::vector<UePlacement> ues;
    double cell_radius_m = 10.0;
    std::uint64_t seed = 0;

    std::vector<int> cell_population() const;  // UEs per cell, self included
};

// Deterministic under (n_users, seed): the same seed reproduces the same
// layout bit for bit.
Deployment generate_deployment(int n_users, std::uint64_t seed, int n_aps = 19,
                               double cell_radius_m = 10.0);

// Min-hop relay tree over the feasible AP-AP links, rooted at the winner
// (AP 0). Long-range AP pairs fall below the receiver sensitivity under the
// obstacle-heavy loss model, so blocks propagate hop by hop; every peer
// still receives exactly one unicast (its tree edge).
struct RelayTree {
    std::vector<int> parent;      // parent[0] = -1
    std::vector<int> depth;       // hops from the winner
    std::vector<McsEntry> edge;   // modulation of parent[i] -> i (i >= 1)
};

// Modulation choices per link in a concrete deployment.
struct DeploymentLinks {
    std::vector<McsEntry> ue_link;  // UE -> its AP
    RelayTree p2p;                  // block propagation paths
};

// Throws ModelError naming the first infeasible UE link or unreachable peer.
DeploymentLinks assess_links(const Deployment& dep, const PhyMacParams& phy,
                             const McsTable& mcs);

}  // namespace wbq
