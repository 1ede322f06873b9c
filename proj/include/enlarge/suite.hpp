#pragma once

// Seeded property suite. Each instance index draws its own generator stream, so results do not
// depend on how instances are spread over workers.

#include "enlarge/io.hpp"
#include "enlarge/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace enlarge::suite {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
    io::Json reproducer;  // set on failure
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    std::size_t instances = 100;
    unsigned workers = 1;
    std::size_t assets_per_instance = 20;
    std::size_t failure_every = 5;   // every n-th instance forces a support failure
    std::size_t kernel_events = 10;  // inaccessible events per instance
};

/// Stream seed of one instance (splitmix64 of seed and index).
std::uint64_t instance_seed(std::uint64_t seed, std::size_t index);

/// Connector search against the oracle on one random single-filtration instance.
std::vector<CheckResult> single_filtration_checks(Rng& rng);

/// Drift, support, verdict, lifting and deflator checks on one random enlargement.
std::vector<CheckResult> enlargement_checks(Rng& rng, bool force_failure, std::size_t assets);

/// Initial and progressive enlargement cross-checks.
std::vector<CheckResult> model_crosschecks(Rng& rng);

/// Kernel identities on random event data.
std::vector<CheckResult> kernel_checks(Rng& rng, std::size_t events);

/// All of the above for one index.
std::vector<CheckResult> run_instance(const SuiteOptions& opts, std::size_t index);

struct Tally {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct Violation {
    std::size_t index = 0;
    CheckResult check;
};

struct SuiteSummary {
    std::vector<Tally> tallies;  // in order of first appearance
    std::optional<Violation> first_violation;
};

SuiteSummary run_suite(const SuiteOptions& opts);

io::Json to_json(const SuiteSummary& s, const SuiteOptions& opts);

}  // namespace enlarge::suite
