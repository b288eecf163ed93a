#include "wbq/deploy.hpp"

#include <cmath>
#include <random>
#include <string>

#include "wbq/errors.hpp"

namespace wbq {

double distance_m(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

struct Cube {
    int x, y, z;
};

// Hexagonal rings around the origin in cube coordinates.
std::vector<Cube> hex_spiral(int count) {
    static const Cube dirs[6] = {{1, -1, 0}, {1, 0, -1}, {0, 1, -1},
                                 {-1, 1, 0}, {-1, 0, 1}, {0, -1, 1}};
    std::vector<Cube> cells;
    cells.push_back({0, 0, 0});
    for (int ring = 1; static_cast<int>(cells.size()) < count; ++ring) {
        Cube c{-ring, 0, ring};  // ring start: `ring` steps along dirs[4]
        for (int side = 0; side < 6; ++side) {
            for (int step = 0; step < ring; ++step) {
                cells.push_back(c);
                c = {c.x + dirs[side].x, c.y + dirs[side].y, c.z + dirs[side].z};
                if (static_cast<int>(cells.size()) == count) return cells;
            }
        }
    }
    return cells;
}

}  // namespace

std::vector<int> Deployment::cell_population() const {
    std::vector<int> pop(aps.size(), 0);
    for (const auto& ue : ues) ++pop[ue.cell];
    return pop;
}

Deployment generate_deployment(int n_users, std::uint64_t seed, int n_aps,
                               double cell_radius_m) {
    if (n_users < 0) throw ConfigError("deployment: n_users must be >= 0");
    if (n_aps < 1) throw ConfigError("deployment: n_aps must be >= 1");
    if (!(cell_radius_m > 0)) throw ConfigError("deployment: cell radius must be > 0");

    Deployment dep;
    dep.cell_radius_m = cell_radius_m;
    dep.seed = seed;
    const double isd = std::sqrt(3.0) * cell_radius_m;
    for (const Cube& c : hex_spiral(n_aps)) {
        // axial (q, r) = (x, z); pointy-top pixel conversion
        const double q = c.x, r = c.z;
        dep.aps.push_back({isd * (q + r / 2.0), isd * (std::sqrt(3.0) / 2.0) * r});
    }

    std::mt19937_64 gen(seed);
    auto uniform = [&]() { return (gen() >> 11) * 0x1.0p-53; };
    dep.ues.reserve(n_users);
    for (int u = 0; u < n_users; ++u) {
        UePlacement ue;
        ue.cell = static_cast<int>(uniform() * n_aps);
        if (ue.cell >= n_aps) ue.cell = n_aps - 1;
        const double radius = cell_radius_m * std::sqrt(uniform());
        const double angle = 2.0 * M_PI * uniform();
        ue.pos = {dep.aps[ue.cell].x + radius * std::cos(angle),
                  dep.aps[ue.cell].y + radius * std::sin(angle)};
        dep.ues.push_back(ue);
    }
    return dep;
}

namespace {

std::optional<McsEntry> link_choice(const Point& a, const Point& b,
                                    const PhyMacParams& phy, const McsTable& mcs) {
    const double d = std::max(distance_m(a, b), 1e-3);
    const double rx = phy.tx_power_dbm - path_loss_db(d, phy);
    return mcs.select(rx, phy.cca_dbm);
}

}  // namespace

DeploymentLinks assess_links(const Deployment& dep, const PhyMacParams& phy,
                             const McsTable& mcs) {
    DeploymentLinks links;
    links.ue_link.reserve(dep.ues.size());
    for (std::size_t u = 0; u < dep.ues.size(); ++u) {
        const auto entry =
            link_choice(dep.ues[u].pos, dep.aps[dep.ues[u].cell], phy, mcs);
        if (!entry)
            throw ModelError("infeasible link (ue " + std::to_string(u) +
                             "): rx power below sensitivity");
        links.ue_link.push_back(*entry);
    }

    // Breadth-first min-hop tree from the winner over feasible AP pairs,
    // deterministic by index order.
    const int n = static_cast<int>(dep.aps.size());
    RelayTree& tree = links.p2p;
    tree.parent.assign(n, -1);
    tree.depth.assign(n, -1);
    tree.edge.assign(n, McsEntry{});
    tree.depth[0] = 0;
    std::vector<int> frontier = {0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int from : frontier) {
            for (int to = 0; to < n; ++to) {
                if (tree.depth[to] >= 0) continue;
                const auto entry = link_choice(dep.aps[from], dep.aps[to], phy, mcs);
                if (!entry) continue;
                tree.parent[to] = from;
                tree.depth[to] = tree.depth[from] + 1;
                tree.edge[to] = *entry;
                next.push_back(to);
            }
        }
        frontier = std::move(next);
    }
    for (int a = 1; a < n; ++a)
        if (tree.depth[a] < 0)
            throw ModelError("infeasible link (peer " + std::to_string(a) +
                             " unreachable from the winner over feasible hops)");
    return links;
}

}  // namespace wbq
