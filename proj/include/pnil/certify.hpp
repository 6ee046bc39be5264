#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pnil/groupchain.hpp"
#include "pnil/pdg.hpp"
#include "pnil/polymatrix.hpp"
#include "pnil/rng.hpp"

namespace pnil {

/// Candidate for the nilpotent-matrix rank bound: degrees c_1..c_l and an
/// l x l polynomial matrix over a field of characteristic p. Verdicts live
/// in CertReport.
struct Certificate {
  FieldSpecPtr spec;  // coefficient field F_{p^m}
  int p = 2;
  int n = 1;
  std::vector<int> c;
  PolyMatrix D;

  int size() const { return static_cast<int>(c.size()); }
};

struct CertBudget {
  int m_exhaustive = 2;    // exhaust points of F_{p^m} for compatible m <= this
  int m_random = 4;        // degree of the sampling field (rounded up to compatible)
  int random_trials = 64;
  u64 seed = 1;
};

struct CertReport {
  // verdicts
  bool homogeneous = false;
  bool p_nilpotent = false;
  bool strictly_upper = false;      // condition i
  bool zero_fiber_nilpotent = false;  // condition ii: (D(0))^{p-1} = 0
  bool rank_condition = false;      // condition iii at every tested x != 0
  bool size_divisible = false;      // p | l, required for the rank target

  // sampling metadata
  int rank_target = 0;
  std::vector<int> fields_exhausted;  // extension degrees fully enumerated
  long long exhaustive_points = 0;    // projective representatives tested
  int random_points = 0;
  int random_field_degree = 0;
  // Schwartz-Zippel: chance that a fixed nonzero polynomial of the maximal
  // minor degree vanishes at one uniform point, and over all trials
  double sz_bound_per_trial = 1.0;
  double sz_bound_aggregate = 1.0;
  std::string failure_witness;

  bool pass() const {
    return homogeneous && p_nilpotent && strictly_upper && zero_fiber_nilpotent &&
           rank_condition && size_divisible;
  }
};

CertReport cert_check(const Certificate& C, const CertBudget& budget);

/// Partition of the matrix size by Jordan block sizes, from the rank
/// sequence of powers. Throws std::domain_error on non-nilpotent input.
std::vector<int> cert_jordan_type(const Matrix& Dx);

struct BoundReport {
  int ell = 0;
  int dim_h_even = 0;
  int dim_h_odd = 0;
  long long chi = 0;
  bool chi_zero_identity = false;  // ell == dim H * p / 2 checked when chi == 0
  int composition_size = -1;       // -1 when the cross-check was skipped
};

/// The size bookkeeping l = (p-1) dim H_even + dim H_odd for a perfect
/// complex, with the Euler-characteristic identity and an optional
/// cross-check against the composition series of beta(iota C).
BoundReport cert_bound_report(const KGComplex& C, bool cross_check = true);

/// Certificate extracted from a composition series (or any PDGModule).
Certificate certificate_from_module(const PDGModule& M);

enum class SearchMode { exhaustive, random };

struct SearchBudget {
  long long max_candidates = 2000000;
  long long random_candidates = 10000;
  u64 seed = 1;
  CertBudget check;
};

struct SearchOutcome {
  std::vector<Certificate> found;
  bool exhausted = false;       // full canonical space enumerated
  long long candidates = 0;     // canonical candidates examined
  long long space_size = 0;     // coefficient assignments before dedup
  bool budget_exceeded = false;
};

/// Enumerates strictly upper triangular candidates with homogeneous entries
/// of the degrees forced by c (negative forced degrees are identically zero),
/// up to rescaling each basis vector, and filters by D^p = 0, condition ii,
/// and the rank condition via cert_check.
SearchOutcome cert_search(u64 p, int n, int ell, const std::vector<int>& c,
                          const FieldSpecPtr& coeff_field, SearchMode mode,
                          const SearchBudget& budget);

}  // namespace pnil
