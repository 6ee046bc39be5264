#pragma once

#include <string>
#include <vector>

#include "pnil/rng.hpp"

namespace pnil {

struct PropertyResult {
  std::string name;
  bool passed = false;
  long long checks = 0;
  std::string detail;  // first failure, when any
};

// Randomized property suites. Counts are the contract: callers that need the
// pinned acceptance numbers pass them explicitly.
PropertyResult prop_field_frobenius(u64 seed, int samples);
PropertyResult prop_field_ring_laws(u64 seed, int trials);
PropertyResult prop_qcombinat_all();
PropertyResult prop_acyclicity(u64 seed, int trials, const std::vector<int>& Ns);
PropertyResult prop_homotopy_invariance(u64 seed, int trials);
PropertyResult prop_tensor_homotopy(u64 seed, int trials);
PropertyResult prop_hexagon(u64 seed, int trials);
PropertyResult prop_long_exact(u64 seed, int trials);
PropertyResult prop_string_roundtrip(u64 seed, int trials);
PropertyResult prop_euler_tensor(u64 seed, int trials);
PropertyResult prop_regrading(u64 seed, int trials);
PropertyResult prop_iota_transport(u64 seed, int trials);
PropertyResult prop_beta_soundness(u64 seed, int trials);
PropertyResult prop_koszul_finiteness();
PropertyResult prop_minimal_model(u64 seed, int trials);
PropertyResult prop_composition_series(u64 seed, int trials);
PropertyResult prop_cone_fiber(u64 seed, int trials);
PropertyResult prop_certificates(u64 seed);

struct SuiteResult {
  std::string module_name;
  bool passed = true;
  std::vector<PropertyResult> properties;
};

/// The per-module invariant suites with their documented default counts.
/// `only` restricts to a single module when nonempty.
std::vector<SuiteResult> run_selftest(u64 seed, const std::string& only = "");

}  // namespace pnil
