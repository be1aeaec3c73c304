#pragma once

#include <Eigen/Core>

namespace cwc {

/// Polyhedral cone in one of its two representations.
///
/// Halfspace: {x : rows * x <= 0}. Generator: nonnegative combinations of the
/// rows. Lines appear as a pair of opposite rows in either form.
struct PolyCone
{
  enum class Rep
  {
    Halfspace,
    Generator,
  };

  Rep rep = Rep::Halfspace;
  Eigen::MatrixXd rows;

  int dim() const { return static_cast<int>(rows.cols()); }
  int size() const { return static_cast<int>(rows.rows()); }

  static PolyCone halfspaces(Eigen::MatrixXd a) { return {Rep::Halfspace, std::move(a)}; }
  static PolyCone generators(Eigen::MatrixXd r) { return {Rep::Generator, std::move(r)}; }

  /// Membership; generator form solves a small LP.
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
};

struct DdOptions
{
  /// Zero test for constraint/ray products (rows and rays are unit-normalized).
  double zero_tol = 1e-9;
  /// Relative singular-value threshold deciding numerical rank.
  double rank_tol = 1e-9;
  /// Run the LP redundancy pass on the output.
  bool prune_with_lp = false;
};

struct DdResult
{
  PolyCone cone;
  int rank = 0;
  /// The input spans less than the ambient space (output carries lines).
  bool rank_deficient = false;
  /// Some singular value sits close to the rank threshold.
  bool ill_conditioned = false;
};

/// Motzkin double description: converts a cone to the other representation.
/// Output rays/normals are unit-norm and duplicate-free.
DdResult double_description(const PolyCone& input, const DdOptions& options = {});

/// Removes rows of {x : A x <= 0} implied by the others (one LP per row).
Eigen::MatrixXd prune_redundant_halfspaces(const Eigen::MatrixXd& A, double tol = 1e-9);

}  // namespace cwc
