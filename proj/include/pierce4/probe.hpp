#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pierce4/oracles.hpp"
#include "pierce4/piercing.hpp"

namespace pierce4 {

// ---------------------------------------------------------------------------
// Statistics over generated corpora: how often the optimal piercing of the
// chosen non-excluded union needs at most 3 points, versus the certificate
// the pipeline produced. Purely informational; the certificate size is only
// required never to beat the exact optimum.
// ---------------------------------------------------------------------------

struct ProbeCase {
    std::string body;
    int n_families = 0;
    std::uint64_t seed = 0;
    int cert_size = 0;
    int optimum = 0;  // exact minimum for the certificate's excluded family
    Branch branch = Branch::TransversalFourPoints;
};

struct ProbeRow {
    std::string body;
    int n_families = 0;
    int cases = 0;
    int optimum_le3 = 0;
    int max_cert = 0;
    int max_optimum = 0;
};

struct ProbeStats {
    std::vector<ProbeCase> cases;
    std::vector<ProbeRow> rows;
    int total = 0;
    int fallback_count = 0;
    bool cert_never_below_optimum = true;
};

/// Runs pierce and the exact oracle on one generated instance.
inline ProbeCase probe_one(const GenConfig& cfg, const PierceConfig& pcfg = {}) {
    const Instance inst = gen_instance(cfg);
    const PiercingCertificate cert = pierce(inst, pcfg);

    std::vector<ConvexPolygon> polys;
    for (std::size_t i = 0; i < inst.families.size(); ++i) {
        if (static_cast<int>(i) == cert.excluded_family) continue;
        for (const auto& x : inst.families[i]) polys.push_back(inst.body.translated(x));
    }
    // Search stops at 3; a miss means the optimum is 4 because the
    // certificate itself is a piercing set of size at most 4.
    const auto sol = brute_force_piercing(polys, 3);
    const int optimum = sol ? sol->k : 4;

    ProbeCase out;
    out.body = cfg.body;
    out.n_families = cfg.n_families;
    out.seed = cfg.seed;
    out.cert_size = static_cast<int>(cert.points.size());
    out.optimum = optimum;
    out.branch = cert.branch;
    return out;
}

/// Aggregates probe cases into per-(body, n) rows.
inline ProbeStats conjecture_probe(const std::vector<GenConfig>& corpus, int jobs = 1,
                                   const PierceConfig& pcfg = {}) {
    ProbeStats stats;
    stats.cases.resize(corpus.size());
    stats.total = static_cast<int>(corpus.size());

    if (jobs <= 1) {
        for (std::size_t i = 0; i < corpus.size(); ++i) stats.cases[i] = probe_one(corpus[i], pcfg);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= corpus.size()) return;
                stats.cases[i] = probe_one(corpus[i], pcfg);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::map<std::pair<std::string, int>, ProbeRow> rows;
    for (const auto& c : stats.cases) {
        auto& row = rows[{c.body, c.n_families}];
        row.body = c.body;
        row.n_families = c.n_families;
        row.cases += 1;
        if (c.optimum <= 3) row.optimum_le3 += 1;
        row.max_cert = std::max(row.max_cert, c.cert_size);
        row.max_optimum = std::max(row.max_optimum, c.optimum);
        if (c.cert_size < c.optimum) stats.cert_never_below_optimum = false;
        if (c.branch == Branch::FallbackBruteForce) stats.fallback_count += 1;
    }
    for (auto& [key, row] : rows) stats.rows.push_back(row);
    return stats;
}

/// Deterministic corpus used by the end-to-end suites: bodies cycle through
/// the named shapes, family counts cycle through {2, 3, 5} with sizes chosen
/// to keep every fallback union within the brute-force limit.
inline std::vector<GenConfig> build_corpus(std::uint64_t seed_lo, std::uint64_t seed_hi) {
    static const std::vector<std::string> bodies = {
        "disk256", "square",      "triangle",    "kgon:5",   "kgon:6",
        "kgon:7",  "kgon:12",     "ellipse256:2", "reuleaux192", "random:16",
    };
    static const std::vector<double> spreads = {0.05, 0.15, 0.3};

    std::vector<GenConfig> corpus;
    for (std::uint64_t seed = seed_lo; seed <= seed_hi && seed_hi >= seed_lo; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.body = bodies[static_cast<std::size_t>(seed % bodies.size())];
        cfg.spread = spreads[static_cast<std::size_t>((seed / 3) % spreads.size())];
        const int which = static_cast<int>(seed % 3);
        if (which == 0) {
            cfg.n_families = 2;
            cfg.sizes = {static_cast<int>(seed % 7) + 2, static_cast<int>((seed / 2) % 8) + 1};
        } else if (which == 1) {
            cfg.n_families = 3;
            cfg.sizes = {static_cast<int>(seed % 6) + 1, 3, static_cast<int>((seed / 5) % 6) + 1};
        } else {
            cfg.n_families = 5;
            cfg.sizes = {2, static_cast<int>(seed % 4) + 1, 1, static_cast<int>((seed / 7) % 4) + 1, 2};
        }
        corpus.push_back(std::move(cfg));
    }
    return corpus;
}

}  // namespace pierce4
