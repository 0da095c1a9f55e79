#pragma once

// Declarative model descriptions (JSON).
//
//   {"model": "zero"}
//   {"model": "explicit", "alphas": [[re, im], ...]}
//   {"model": "sparse", "eta": 0.5, "lengths": [2, 4, 64]}
//   {"model": "sparse", "eta": 0.5, "lengths": {"log2_factorial": 2, "count": 3}}
//   {"model": "walk", "coins": [[[re, im], [re, im], [re, im], [re, im]], ...]}
//   {"model": "walk", "sparse": {"eta": 0.5, "lengths": [5]}}
//
// Every model accepts an optional "lambda_phase_radians". Walk coins are listed
// from site 1 in row-major order c11, c12, c21, c22.

#include <optional>
#include <string>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/coin.hpp"
#include "cmvwalk/dynamics.hpp"
#include "cmvwalk/sparse_model.hpp"

namespace cmvwalk {

enum class ModelKind { Zero, Explicit, Sparse, Walk };

struct ModelSpec {
  ModelKind kind = ModelKind::Zero;
  std::vector<DiskCoefficient> alphas;   // explicit
  std::optional<SparseSpec> sparse;      // sparse, or the walk's sparse-coin rule
  CoinSequence coins;                    // walk
  double lambda_phase_radians = 0.0;

  bool is_walk() const { return kind == ModelKind::Walk; }
  /// eta when the model is sparse or walk-sparse.
  std::optional<double> eta() const;
  /// Verblunsky sequence of the model (for walks, after the gauge transform),
  /// including the boundary phase.
  VerblunskySequence sequence() const;
  /// Walk coins (identity coins for non-walk models is an error).
  CoinSequence walk_coins() const;
  Observable observable() const { return is_walk() ? Observable::WalkSite : Observable::CmvSite; }
};

/// Throws ValidationError naming the offending field, or the line and column
/// of a JSON syntax error.
ModelSpec parse_model(const std::string& text);
ModelSpec load_model_file(const std::string& path);

}  // namespace cmvwalk
