#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdop/presets.hpp"

namespace qdop {

enum class CheckStatus { Pass, Fail };

struct Report {
  std::string id;
  CheckStatus status = CheckStatus::Pass;
  std::string witness;  // nonempty exactly when status is Fail
  double elapsed_ms = 0;

  bool passed() const { return status == CheckStatus::Pass; }
};

struct CheckInfo {
  std::string id;
  std::string preset;  // preset names the check builds, comma separated
  std::string anchor;  // the statement being confirmed, quoted
};

struct VerifyOptions {
  // Rational specializations by parameter name; each preset takes the pins
  // naming its own parameters.
  std::map<std::string, Rational> pins;
  std::size_t n = 3;  // arity of the quantum n-space checks
  // Test hook: checks whose id matches one of these globs have their first
  // comparison perturbed so that they fail with a genuine witness.
  std::vector<std::string> faults;
  std::size_t threads = 0;  // run_suite workers; 0 picks the hardware count
};

const std::vector<CheckInfo>& check_catalog();

// Throws UnknownCheckId, or PreconditionViolated for degenerate pins.
Report run_check(const std::string& id, const VerifyOptions& opts = {});
// All checks whose id matches the glob, ordered by catalog position.
std::vector<Report> run_suite(const std::string& filter = "*", const VerifyOptions& opts = {});

// Image of a generator under an anti-homomorphism: coeff * letters.
using AntiMap = std::map<std::string, Word>;

// Pass when, for every relation sum c_w w = 0 of the preset, the reversed
// image sum c_w Phi(w_k)...Phi(w_1) vanishes. The witness names the first
// relation that survives.
Report check_antihom(const AntiMap& map, const AlgebraPreset& preset);

// Preset maps used by the anti-isomorphism checks.
AntiMap one_variable_opposite_map(const AlgebraPreset& one_variable);
// Phi(d_i) = -s_i d_i = -del_i, Phi(r_i) = s_i r_i = x_i, Phi(sigma_g) = sigma_{-g}.
AntiMap torus_opposite_map(const AlgebraPreset& skew_group);
// Phi(d_i) = -sm_i d_i, Phi(r_i) = s_i r_i, Phi(sigma_g) = sigma_g; fails on
// d_i d_j = q_ij d_j d_i since it does not preserve degrees.
AntiMap torus_opposite_map_literal(const AlgebraPreset& skew_group);
AntiMap identity_map(const AlgebraPreset& preset);

struct MatrixUnitResult {
  Report report;
  std::size_t span_dimension = 0;
};

// Builds phi = del_n ... del_1 and realizes every matrix unit E_{b2,b1} as
// alpha * xi_{b2} * phi * xi_b, then certifies that the 4^n units span.
// Requires 1 <= n <= 6; throws ConstructionFailed when a unit is not realized.
MatrixUnitResult exterior_matrix_units(std::size_t n, const std::map<std::string, Rational>& pins = {});

}  // namespace qdop
