#pragma once

// Regular building parameters, Hecke structure constants and the exact kernel
// of the retracted walk on W.

#include "coxwalk/coxeter.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxwalk {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BuildingSpec {
  CoxeterSystem system;
  std::vector<int> q;  // thickness per generator; all 1 is the thin building
};

// Throws ValidationError on a q that no thick building can have; returns
// warnings for constraints outside the proven list (odd m other than 3).
std::vector<std::string> validate_building(const BuildingSpec& b);

Int q_of(const BuildingSpec& b, const GroupElement& w);

struct Feasibility {
  bool feasible = false;
  std::string reason;
};

// a >= b >= c >= 2, kInf not allowed (triangle groups have finite labels).
// Throws ValidationError for spherical or unsorted input.
Feasibility triangle_feasibility(int a, int b, int c);

struct TriangleVerdict {
  std::array<int, 3> triple;
  Feasibility verdict;
};
// Every non-spherical sorted triple over {2,3,4,6,8}.
std::vector<TriangleVerdict> enumerate_triangles();

struct WalkStep {
  Word word;  // ShortLex normal form
  Rat p;
  GroupElement element;
};

struct WalkSpec {
  std::vector<WalkStep> steps;
  int L0 = 0;
};

// Validates p > 0, sum exactly 1, reduced and pairwise distinct words, and a
// support that is not just the identity.  Words are replaced by their NF.
WalkSpec make_walk(const CoxeterSystem& W, const std::vector<std::pair<Word, Rat>>& steps);
WalkSpec nearest_neighbour_walk(const CoxeterSystem& W);

struct Term {
  GroupElement element;
  Rat coeff;
};
// Keyed by CoxeterSystem::key.
using ElementMap = std::map<std::string, Term>;

// alpha^w_{u,v} for all w, by induction along a reduced word of v.
ElementMap hecke_product(const BuildingSpec& b, const GroupElement& u, const GroupElement& v);

struct KernelRow {
  GroupElement source;
  ElementMap entries;
};

// Both the structure-constant formula and per-letter mass propagation; throws
// std::logic_error if they differ.
KernelRow kernel_row(const BuildingSpec& b, const WalkSpec& walk, const GroupElement& u);
// Per-letter propagation only.
ElementMap kernel_row_fast(const BuildingSpec& b, const WalkSpec& walk, const GroupElement& u);
// Structure-constant formula only.
ElementMap kernel_row_hecke(const BuildingSpec& b, const WalkSpec& walk, const GroupElement& u);

struct ReturnSeries {
  std::vector<Rat> p;           // p[k] = return probability after k steps, k = 0..n
  std::vector<double> rho_hat;  // rho_hat[k] = p[2k]^(1/2k) for 1 <= 2k <= n; rho_hat[0] unused
  std::size_t max_states = 0;
};

// Exact distribution of the retracted walk from 1 for n steps.  Throws
// CapExceeded when the support outgrows state_cap elements.
ReturnSeries n_step_return(const BuildingSpec& b, const WalkSpec& walk, int n, std::size_t state_cap = 400000);

struct SpectralCondition {
  bool satisfied = true;
  std::vector<int> witness;  // a finite-type I with sum_{s not in I} q_s < |I|
};
SpectralCondition spectral_condition(const BuildingSpec& b);

enum class Generation { Yes, No, Inconclusive };

struct GenerationReport {
  Generation verdict = Generation::Inconclusive;
  std::string reason;
};
GenerationReport support_generates(const CoxeterSystem& W, const WalkSpec& walk, int depth_cap);

std::string to_string(Generation g);

}  // namespace coxwalk
