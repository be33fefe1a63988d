#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fockbound::lp {

enum class Sense { LessEq, GreaterEq };
enum class Direction { Minimize, Maximize };
enum class Status { Optimal, Infeasible, IterationLimit };

struct InequalityRow {
  std::vector<double> coeffs;
  Sense sense = Sense::LessEq;
  double rhs = 0.0;
};

struct EqualityRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

/// Bounded-variable linear program: all variables live in finite boxes
/// within [0,1].
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<InequalityRow> inequalities;
  std::vector<EqualityRow> equalities;
  std::vector<double> lower;
  std::vector<double> upper;

  void validate() const;
};

struct ScalingRecord {
  std::vector<double> inequality_divisors;
  std::vector<double> equality_divisors;
};

struct ScaledProgram {
  LinearProgram program;
  ScalingRecord record;
  /// Set when some all-zero row contradicts its right-hand side outright.
  /// Indexing: inequality rows first, then equality rows.
  std::optional<int> trivially_infeasible_row;
};

/// Row equilibration: each row is divided by its max-magnitude coefficient.
/// Columns stay at unit scale (variables are probabilities), so the solution
/// and objective are unchanged.
ScaledProgram scale(const LinearProgram& lp);

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> primal;
  double feasibility_residual = 0.0;
  long iterations = 0;
};

/// Deterministic bounded-variable revised simplex. Dantzig pricing with a
/// Bland's-rule fallback after a degeneracy streak; feasibility tolerance
/// 1e-9 and reduced-cost tolerance 1e-10 on row-scaled data. Programs with
/// many inequality rows are solved by row generation: optimize over a working
/// subset, add violated rows with a warm-started basis, and finish only when
/// every row of the full program is satisfied.
Solution solve(const LinearProgram& lp, Direction direction);

/// Portable text form for external cross-checks; round-trips bit-exactly.
std::string to_text(const LinearProgram& lp);
LinearProgram from_text(const std::string& text);

}  // namespace fockbound::lp
