#pragma once

// Shared test fixtures: seeded generators, the reference trace enumerator,
// hand-built reference terms and the property runners used by both the unit
// suite and the acceptance binary.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "roust/analysis.hpp"
#include "roust/types.hpp"

namespace rt {

using namespace roust;

// ---------------------------------------------------------------------------
// Generators

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(g_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(g_) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(static_cast<int>(v.size()))]; }

 private:
  std::mt19937_64 g_;
};

struct GenOptions {
  std::vector<std::string> roles = {"A", "B", "C", "S"};
  std::vector<std::string> labels = {"M1", "M2", "M3"};
  int max_depth = 4;
  int max_branches = 3;
  double p_end = 0.15;
  double p_rec = 0.3;
  double p_shared = 0.5;  // all branches share one continuation
};

/// Closed, contractive canonical global type.
Global random_global(Rng& rng, const GenOptions& opt = {});

// ---------------------------------------------------------------------------
// Reference trace enumerator, written straight from the rules with its own
// substitution and an unfolding budget in place of a cycle check.

std::vector<std::pair<ActionLabel, Global>> naive_steps(const Global& g);
std::set<Trace> naive_traces(const Global& g, std::size_t depth);

// ---------------------------------------------------------------------------
// Reference terms

Global travel();         // G_travel
Global travel_routed();  // G^R_travel
Global merge_g1();
Global merge_g2();
Global enc_example();         // p -> q : M1 . s -> q : M2 . end
Global enc_example_routed();  // p -> q via s : M1 . s -> q : M2 . end

std::string protocol_path(const std::string& name);
Global load_protocol(const std::string& name);

struct CorpusEntry {
  std::string name;
  std::string router;
};
const std::vector<CorpusEntry>& corpus();

// ---------------------------------------------------------------------------
// Properties

struct PropResult {
  std::string name;
  std::size_t cases = 0;     // cases that met the precondition and were checked
  std::size_t attempts = 0;  // generated terms
  std::vector<std::string> failures;  // first few counterexamples

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

PropResult prop_projection_encoding_commute(std::uint64_t seed, std::size_t n);
PropResult prop_encoding_centroid(std::uint64_t seed, std::size_t n);
PropResult prop_encoding_participants(std::uint64_t seed, std::size_t n);
PropResult prop_encoding_privacy(std::uint64_t seed, std::size_t n);
PropResult prop_encoding_substitution(std::uint64_t seed, std::size_t n);
PropResult prop_projection_participation(std::uint64_t seed, std::size_t n);
PropResult prop_wf_implies_routed_wf(std::uint64_t seed, std::size_t n);
PropResult prop_routed_wf_implies_wf(std::uint64_t seed, std::size_t n);
PropResult prop_preservation_progress(std::uint64_t seed, std::size_t n);
PropResult prop_local_lts_merge(std::uint64_t seed, std::size_t n);

std::vector<PropResult> all_properties(std::uint64_t seed, std::size_t n);

}  // namespace rt
