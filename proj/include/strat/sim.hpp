#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strat/column.hpp"
#include "strat/policy.hpp"
#include "strat/tree.hpp"

namespace strat {

enum class SelectionScheme { kNeutralDrift, kTournament };

struct SimConfig {
  std::uint64_t population_size = 2;  // N >= 2
  std::uint64_t generations = 1;      // G >= 1
  SelectionScheme selection = SelectionScheme::kNeutralDrift;
  unsigned tournament_k = 2;
  PolicySpec policy = PolicySpec::recency_proportional(3);
  unsigned width_bits = 64;
  std::uint64_t seed = 0;
  // synchronous: whole-population generational replacement (every extant
  // column has depth G). Otherwise a steady-state birth/death process runs
  // N*G events and depths vary.
  bool synchronous = true;

  void validate() const;
};

struct SimResult {
  PhyloTree ground_truth;           // exact tracked phylogeny, unreduced
  std::vector<Column> population;   // end-state columns
  std::vector<std::string> labels;  // taxon ids, aligned with population
  std::uint64_t seed = 0;
};

// Runs the N-constant model against a pruning tracker, propagating one
// column per individual. Deterministic per seed: selection, differentia and
// fitness noise draw from labeled substreams of the run seed.
SimResult simulate(const SimConfig& config);

struct FootprintFit {
  PolicySpec policy;
  bool fits = true;                  // false: sparsest fallback in force
  std::uint64_t end_state_bits = 0;  // retained_count(depth) * width
};

// Parameter maximizing the end-state column payload without exceeding
// target_bits at the given depth; the sparsest parameterization (flagged)
// when even it does not fit.
FootprintFit fit_policy_to_footprint(PolicyFamily family, unsigned width_bits,
                                     std::uint64_t target_bits,
                                     std::uint64_t depth);

enum class ReconstructionMethod { kUpgma, kTrie };

ReconstructionMethod method_from_name(const std::string& name);
const char* method_name(ReconstructionMethod m);

PhyloTree reconstruct(const std::vector<Column>& population,
                      const std::vector<std::string>& labels,
                      ReconstructionMethod method, double confidence);

// collapse unifurcations and prune the stem, the shared normal form for
// comparing reconstructions against ground truth
PhyloTree reduce_for_comparison(const PhyloTree& tree);

struct RunReport {
  std::uint64_t seed = 0;
  PolicyFamily family = PolicyFamily::kFixedResolution;
  std::uint64_t param = 0;
  unsigned width_bits = 0;
  std::uint64_t max_column_bits = 0;  // largest end-state payload
  std::uint64_t rf_distance = 0;
  double rf_similarity = 0.0;
  double wall_ms_reconstruct = 0.0;

  static const char* csv_header();
  std::string csv_row() const;
};

RunReport evaluate(const SimResult& sim, ReconstructionMethod method,
                   double confidence);

}  // namespace strat
