#include "fockbound/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fockbound::lp {

namespace {

constexpr double kFeasTol = 1e-9;    // feasibility, on scaled rows
constexpr double kCostTol = 1e-10;   // reduced-cost optimality
constexpr double kPivotTol = 1e-9;   // smallest usable ratio-test rate
constexpr double kDegenStep = 1e-12;
constexpr int kDegenStreakForBland = 50;
constexpr int kRefactorInterval = 100;
constexpr int kDirectRowLimit = 512;   // below this, skip row generation
constexpr std::size_t kRowsPerRound = 256;
constexpr long kMaxIterations = 200000;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_row_width(const std::vector<double>& coeffs, int num_vars, const char* kind) {
  if (static_cast<int>(coeffs.size()) != num_vars) {
    throw std::invalid_argument(std::string("LinearProgram: ") + kind +
                                " row width differs from variable count");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("LinearProgram: non-finite coefficient");
    }
  }
}

}  // namespace

void LinearProgram::validate() const {
  if (num_vars <= 0) throw std::invalid_argument("LinearProgram: no variables");
  if (num_vars > 50000) throw std::invalid_argument("LinearProgram: variable cap exceeded");
  if (inequalities.size() + equalities.size() > 100000) {
    throw std::invalid_argument("LinearProgram: row cap exceeded");
  }
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(lower.size()) != num_vars ||
      static_cast<int>(upper.size()) != num_vars) {
    throw std::invalid_argument("LinearProgram: objective/bound lengths mismatch");
  }
  for (int j = 0; j < num_vars; ++j) {
    const double lo = lower[static_cast<std::size_t>(j)];
    const double hi = upper[static_cast<std::size_t>(j)];
    if (!(lo <= hi) || lo < 0.0 || hi > 1.0) {
      throw std::invalid_argument("LinearProgram: bounds must satisfy 0 <= lo <= hi <= 1");
    }
    if (!std::isfinite(objective[static_cast<std::size_t>(j)])) {
      throw std::invalid_argument("LinearProgram: non-finite objective");
    }
  }
  for (const auto& r : inequalities) {
    check_row_width(r.coeffs, num_vars, "inequality");
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("LinearProgram: non-finite rhs");
  }
  for (const auto& r : equalities) {
    check_row_width(r.coeffs, num_vars, "equality");
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("LinearProgram: non-finite rhs");
  }
}

ScaledProgram scale(const LinearProgram& lp) {
  lp.validate();
  ScaledProgram out;
  out.program = lp;
  auto scale_row = [](std::vector<double>& coeffs, double& rhs) {
    double mx = 0.0;
    for (double c : coeffs) mx = std::max(mx, std::abs(c));
    if (mx == 0.0) return 1.0;
    for (double& c : coeffs) c /= mx;
    rhs /= mx;
    return mx;
  };
  auto is_zero_row = [](const std::vector<double>& coeffs) {
    for (double c : coeffs) {
      if (c != 0.0) return false;
    }
    return true;
  };
  int idx = 0;
  for (auto& r : out.program.inequalities) {
    out.record.inequality_divisors.push_back(scale_row(r.coeffs, r.rhs));
    if (!out.trivially_infeasible_row && is_zero_row(r.coeffs) &&
        ((r.sense == Sense::LessEq && r.rhs < 0.0) ||
         (r.sense == Sense::GreaterEq && r.rhs > 0.0))) {
      out.trivially_infeasible_row = idx;
    }
    ++idx;
  }
  for (auto& r : out.program.equalities) {
    out.record.equality_divisors.push_back(scale_row(r.coeffs, r.rhs));
    if (!out.trivially_infeasible_row && is_zero_row(r.coeffs) && r.rhs != 0.0) {
      out.trivially_infeasible_row = idx;
    }
    ++idx;
  }
  return out;
}

namespace {

enum class VarState : char { Basic, AtLower, AtUpper };

/// Bounded-variable revised simplex over a growable working set of rows.
/// Columns 0..ns-1 are structural; working row i contributes a logical column
/// ns+i (a slack in [0,inf) for <= rows, fixed at zero for equality rows).
/// The basis inverse is kept explicitly and refactorized periodically; adding
/// rows keeps the current basis and enters the new logicals as basic, so a
/// re-optimization after a row-generation round starts warm.
class Simplex {
 public:
  Simplex(const Eigen::MatrixXd& full_cols, const Eigen::VectorXd& full_rhs,
          const std::vector<char>& full_is_eq, Eigen::VectorXd cost)
      : full_cols_(full_cols),
        full_rhs_(full_rhs),
        full_is_eq_(full_is_eq),
        ns_(static_cast<int>(full_cols.rows())),
        cost_(std::move(cost)) {}

  void set_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
    lo_ = lo;
    hi_ = hi;
    state_.assign(static_cast<std::size_t>(ns_), VarState::AtLower);
    for (int j = 0; j < ns_; ++j) {
      if (cost_(j) < 0.0) state_[static_cast<std::size_t>(j)] = VarState::AtUpper;
    }
  }

  void add_rows(const std::vector<int>& row_ids) {
    const int old_m = m_;
    const int add = static_cast<int>(row_ids.size());
    if (add == 0 && old_m == 0) {
      binv_.resize(0, 0);
      at_.resize(ns_, 0);
      b_.resize(0);
      xb_.resize(0);
      return;
    }
    m_ += add;
    at_.conservativeResize(ns_, m_);
    b_.conservativeResize(m_);
    for (int i = 0; i < add; ++i) {
      at_.col(old_m + i) = full_cols_.col(row_ids[static_cast<std::size_t>(i)]);
      b_(old_m + i) = full_rhs_(row_ids[static_cast<std::size_t>(i)]);
    }

    Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(m_, m_);
    if (old_m > 0) {
      grown.topLeftCorner(old_m, old_m) = binv_;
      Eigen::MatrixXd new_on_basic(add, old_m);
      for (int i = 0; i < add; ++i) {
        for (int p = 0; p < old_m; ++p) {
          new_on_basic(i, p) = column_entry(basic_[static_cast<std::size_t>(p)], old_m + i);
        }
      }
      grown.bottomLeftCorner(add, old_m) = -new_on_basic * binv_;
    }
    grown.bottomRightCorner(add, add).setIdentity();
    binv_ = std::move(grown);

    for (int i = 0; i < add; ++i) {
      const int row_id = row_ids[static_cast<std::size_t>(i)];
      const bool eq = full_is_eq_[static_cast<std::size_t>(row_id)] != 0;
      lo_.push_back(0.0);
      hi_.push_back(eq ? 0.0 : kInf);
      state_.push_back(VarState::Basic);
      basic_.push_back(ns_ + old_m + i);
    }
    recompute_basics();
  }

  Status optimize(long* iterations) {
    Status st = run_phase(true, iterations);
    if (st != Status::Optimal) return st;
    if (max_violation() > kFeasTol) return Status::Infeasible;
    return run_phase(false, iterations);
  }

  Eigen::VectorXd structural_vector() const {
    Eigen::VectorXd x(ns_);
    for (int j = 0; j < ns_; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      x(j) = state_[sj] == VarState::AtUpper ? hi_[sj] : lo_[sj];
    }
    for (int i = 0; i < m_; ++i) {
      const int col = basic_[static_cast<std::size_t>(i)];
      if (col < ns_) x(col) = xb_(i);
    }
    return x;
  }

 private:
  double column_entry(int col, int row) const {
    if (col < ns_) return at_(col, row);
    return col - ns_ == row ? 1.0 : 0.0;
  }

  Eigen::VectorXd extract_column(int col) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
    if (col < ns_) {
      a = at_.row(col).transpose();
    } else {
      a(col - ns_) = 1.0;
    }
    return a;
  }

  double bound_value(int col) const {
    const std::size_t sc = static_cast<std::size_t>(col);
    return state_[sc] == VarState::AtUpper ? hi_[sc] : lo_[sc];
  }

  void recompute_basics() {
    Eigen::VectorXd r = b_;
    for (int j = 0; j < ns_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
      const double v = bound_value(j);
      if (v != 0.0) r -= at_.row(j).transpose() * v;
    }
    // Nonbasic logicals sit at zero, so they contribute nothing.
    xb_ = binv_ * r;
  }

  void refactorize() {
    if (m_ == 0) return;
    Eigen::MatrixXd basis(m_, m_);
    for (int p = 0; p < m_; ++p) {
      const int col = basic_[static_cast<std::size_t>(p)];
      if (col < ns_) {
        basis.col(p) = at_.row(col).transpose();
      } else {
        basis.col(p).setZero();
        basis(col - ns_, p) = 1.0;
      }
    }
    binv_ = basis.partialPivLu().inverse();
    recompute_basics();
  }

  double max_violation() const {
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const std::size_t col = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
      worst = std::max(worst, lo_[col] - xb_(i));
      if (std::isfinite(hi_[col])) worst = std::max(worst, xb_(i) - hi_[col]);
    }
    return worst;
  }

  Status run_phase(bool phase1, long* iterations) {
    int degen_streak = 0;
    int since_refactor = 0;
    while (true) {
      if (*iterations >= kMaxIterations) return Status::IterationLimit;
      if (phase1 && max_violation() <= kFeasTol) return Status::Optimal;

      // Reduced costs: d_j = c_j - y . a_j with y = B^-T c_B. In phase 1 the
      // cost sits on violated basics only (-1 below lower, +1 above upper).
      Eigen::VectorXd obj_on_basic(m_);
      for (int i = 0; i < m_; ++i) {
        const std::size_t col = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
        if (phase1) {
          double g = 0.0;
          if (xb_(i) < lo_[col] - kFeasTol) g = -1.0;
          else if (std::isfinite(hi_[col]) && xb_(i) > hi_[col] + kFeasTol) g = 1.0;
          obj_on_basic(i) = g;
        } else {
          const int c = basic_[static_cast<std::size_t>(i)];
          obj_on_basic(i) = c < ns_ ? cost_(c) : 0.0;
        }
      }
      Eigen::VectorXd y =
          m_ > 0 ? Eigen::VectorXd(binv_.transpose() * obj_on_basic) : Eigen::VectorXd(0);
      Eigen::VectorXd d_struct = m_ > 0 ? Eigen::VectorXd(-(at_ * y))
                                        : Eigen::VectorXd(Eigen::VectorXd::Zero(ns_));
      if (!phase1) d_struct += cost_;

      const bool bland = degen_streak >= kDegenStreakForBland;
      int entering = -1;
      double best_gain = kCostTol;
      auto consider = [&](int col, double d) {
        const std::size_t sc = static_cast<std::size_t>(col);
        if (state_[sc] == VarState::Basic || lo_[sc] == hi_[sc]) return;
        double gain = 0.0;
        if (state_[sc] == VarState::AtLower && d < -kCostTol) gain = -d;
        else if (state_[sc] == VarState::AtUpper && d > kCostTol) gain = d;
        if (gain == 0.0) return;
        if (bland) {
          if (entering == -1) entering = col;
        } else if (gain > best_gain) {
          best_gain = gain;
          entering = col;
        }
      };
      for (int j = 0; j < ns_; ++j) {
        consider(j, d_struct(j));
        if (bland && entering != -1) break;
      }
      if (!(bland && entering != -1)) {
        for (int i = 0; i < m_; ++i) {
          consider(ns_ + i, -y(i));
          if (bland && entering != -1) break;
        }
      }

      if (entering == -1) {
        if (phase1) {
          return max_violation() <= kFeasTol ? Status::Optimal : Status::Infeasible;
        }
        return Status::Optimal;
      }

      const std::size_t se = static_cast<std::size_t>(entering);
      const double dir = state_[se] == VarState::AtLower ? 1.0 : -1.0;
      const Eigen::VectorXd w = binv_ * extract_column(entering);

      // Ratio test: first bound crossing among basics, or the entering
      // variable reaching its opposite bound. In phase 1 a violated basic
      // blocks at its violated bound, where it turns feasible and leaves.
      double step = std::isfinite(hi_[se] - lo_[se]) ? hi_[se] - lo_[se] : kInf;
      int leave_pos = -1;
      bool leave_at_upper = false;
      double leave_rate = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double rate = dir * w(i);  // decrease rate of xb_(i)
        if (std::abs(rate) < kPivotTol) continue;
        const std::size_t col = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
        const double v = xb_(i);
        const bool below = phase1 && v < lo_[col] - kFeasTol;
        const bool above = phase1 && std::isfinite(hi_[col]) && v > hi_[col] + kFeasTol;
        double t = kInf;
        bool at_upper = false;
        if (rate > 0.0) {
          if (above) {
            t = (v - hi_[col]) / rate;
            at_upper = true;
          } else if (!below) {
            t = (v - lo_[col]) / rate;
          }
        } else {
          if (below) {
            t = (lo_[col] - v) / (-rate);
          } else if (!above && std::isfinite(hi_[col])) {
            t = (hi_[col] - v) / (-rate);
            at_upper = true;
          }
        }
        if (t == kInf) continue;
        t = std::max(t, 0.0);

        bool take;
        if (t < step - kDegenStep) {
          take = true;
        } else if (t <= step + kDegenStep) {
          if (leave_pos == -1) {
            take = true;  // prefer a pivot over a bound flip on a tie
          } else if (bland) {
            take = basic_[static_cast<std::size_t>(i)] <
                   basic_[static_cast<std::size_t>(leave_pos)];
          } else {
            take = std::abs(rate) > std::abs(leave_rate);
          }
        } else {
          take = false;
        }
        if (take) {
          step = std::min(step, t);
          leave_pos = i;
          leave_at_upper = at_upper;
          leave_rate = rate;
        }
      }

      if (step == kInf) {
        throw std::logic_error("Simplex: unbounded direction in a boxed program");
      }

      ++*iterations;
      if (step <= kDegenStep) ++degen_streak; else degen_streak = 0;

      if (leave_pos == -1) {
        // Bound flip, no basis change.
        if (m_ > 0) xb_ -= dir * step * w;
        state_[se] = state_[se] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        continue;
      }

      const double enter_value = bound_value(entering) + dir * step;
      const int leaving = basic_[static_cast<std::size_t>(leave_pos)];
      xb_ -= dir * step * w;
      state_[static_cast<std::size_t>(leaving)] =
          leave_at_upper ? VarState::AtUpper : VarState::AtLower;
      state_[se] = VarState::Basic;
      basic_[static_cast<std::size_t>(leave_pos)] = entering;

      const Eigen::RowVectorXd pivot_row = binv_.row(leave_pos) / w(leave_pos);
      for (int i = 0; i < m_; ++i) {
        if (i == leave_pos || w(i) == 0.0) continue;
        binv_.row(i) -= w(i) * pivot_row;
      }
      binv_.row(leave_pos) = pivot_row;
      xb_(leave_pos) = enter_value;

      if (++since_refactor >= kRefactorInterval) {
        refactorize();
        since_refactor = 0;
      }
    }
  }

  const Eigen::MatrixXd& full_cols_;
  const Eigen::VectorXd& full_rhs_;
  const std::vector<char>& full_is_eq_;
  const int ns_;
  Eigen::VectorXd cost_;

  int m_ = 0;
  Eigen::MatrixXd at_;  // ns x m, one column per working-set row
  Eigen::VectorXd b_;
  std::vector<double> lo_, hi_;
  std::vector<VarState> state_;
  std::vector<int> basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
};

}  // namespace

Solution solve(const LinearProgram& lp, Direction direction) {
  ScaledProgram scaled = scale(lp);
  Solution sol;
  if (scaled.trivially_infeasible_row) {
    sol.status = Status::Infeasible;
    return sol;
  }
  const LinearProgram& p = scaled.program;
  const int ns = p.num_vars;
  const int n_ineq = static_cast<int>(p.inequalities.size());
  const int n_rows = n_ineq + static_cast<int>(p.equalities.size());

  // Canonical row pool: every row as <= (or ==), one matrix column per row.
  Eigen::MatrixXd full_cols(ns, n_rows);
  Eigen::VectorXd full_rhs(n_rows);
  std::vector<char> full_is_eq(static_cast<std::size_t>(n_rows), 0);
  for (int r = 0; r < n_ineq; ++r) {
    const auto& row = p.inequalities[static_cast<std::size_t>(r)];
    const double sign = row.sense == Sense::LessEq ? 1.0 : -1.0;
    for (int j = 0; j < ns; ++j) {
      full_cols(j, r) = sign * row.coeffs[static_cast<std::size_t>(j)];
    }
    full_rhs(r) = sign * row.rhs;
  }
  for (std::size_t r = 0; r < p.equalities.size(); ++r) {
    const auto& row = p.equalities[r];
    for (int j = 0; j < ns; ++j) full_cols(j, n_ineq + static_cast<int>(r)) = row.coeffs[static_cast<std::size_t>(j)];
    full_rhs(n_ineq + static_cast<int>(r)) = row.rhs;
    full_is_eq[static_cast<std::size_t>(n_ineq) + r] = 1;
  }

  Eigen::VectorXd cost(ns);
  for (int j = 0; j < ns; ++j) {
    cost(j) = p.objective[static_cast<std::size_t>(j)] *
              (direction == Direction::Maximize ? -1.0 : 1.0);
  }

  Simplex splx(full_cols, full_rhs, full_is_eq, std::move(cost));
  splx.set_bounds(p.lower, p.upper);

  const bool direct = n_rows <= kDirectRowLimit;
  std::vector<int> initial;
  std::vector<char> in_working(static_cast<std::size_t>(n_rows), 0);
  for (int r = 0; r < n_rows; ++r) {
    if (direct || full_is_eq[static_cast<std::size_t>(r)]) {
      initial.push_back(r);
      in_working[static_cast<std::size_t>(r)] = 1;
    }
  }
  splx.add_rows(initial);

  long iterations = 0;
  Status st = splx.optimize(&iterations);

  while (st == Status::Optimal && !direct) {
    const Eigen::VectorXd x = splx.structural_vector();
    const Eigen::VectorXd activity = full_cols.transpose() * x;
    std::vector<std::pair<double, int>> violated;
    for (int r = 0; r < n_rows; ++r) {
      if (in_working[static_cast<std::size_t>(r)]) continue;
      const double v = activity(r) - full_rhs(r);
      if (v > 0.5 * kFeasTol) violated.emplace_back(-v, r);
    }
    if (violated.empty()) break;
    std::sort(violated.begin(), violated.end());
    std::vector<int> add;
    for (std::size_t i = 0; i < violated.size() && i < kRowsPerRound; ++i) {
      add.push_back(violated[i].second);
      in_working[static_cast<std::size_t>(violated[i].second)] = 1;
    }
    splx.add_rows(add);
    st = splx.optimize(&iterations);
  }

  sol.status = st;
  sol.iterations = iterations;
  if (st != Status::Optimal) return sol;

  const Eigen::VectorXd x = splx.structural_vector();
  sol.primal.assign(x.data(), x.data() + ns);
  double obj = 0.0;
  for (int j = 0; j < ns; ++j) obj += lp.objective[static_cast<std::size_t>(j)] * x(j);
  sol.objective = obj;

  double resid = 0.0;
  const Eigen::VectorXd activity = full_cols.transpose() * x;
  for (int r = 0; r < n_rows; ++r) {
    const double gap = activity(r) - full_rhs(r);
    resid = std::max(resid, full_is_eq[static_cast<std::size_t>(r)] ? std::abs(gap) : gap);
  }
  for (int j = 0; j < ns; ++j) {
    resid = std::max(resid, p.lower[static_cast<std::size_t>(j)] - x(j));
    resid = std::max(resid, x(j) - p.upper[static_cast<std::size_t>(j)]);
  }
  sol.feasibility_residual = std::max(resid, 0.0);
  return sol;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_text(const LinearProgram& lp) {
  std::ostringstream os;
  os << "lpformat 1\n";
  os << "vars " << lp.num_vars << "\n";
  os << "objective";
  for (double c : lp.objective) os << ' ' << format_double(c);
  os << "\nbounds\n";
  for (int j = 0; j < lp.num_vars; ++j) {
    os << format_double(lp.lower[static_cast<std::size_t>(j)]) << ' '
       << format_double(lp.upper[static_cast<std::size_t>(j)]) << "\n";
  }
  os << "rows " << lp.inequalities.size() << ' ' << lp.equalities.size() << "\n";
  for (const auto& r : lp.inequalities) {
    for (double c : r.coeffs) os << format_double(c) << ' ';
    os << (r.sense == Sense::LessEq ? "<=" : ">=") << ' ' << format_double(r.rhs) << "\n";
  }
  for (const auto& r : lp.equalities) {
    for (double c : r.coeffs) os << format_double(c) << ' ';
    os << "= " << format_double(r.rhs) << "\n";
  }
  return os.str();
}

LinearProgram from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  auto expect = [&](const std::string& want) {
    if (!(is >> tok) || tok != want) {
      throw std::invalid_argument("from_text: expected '" + want + "'");
    }
  };
  expect("lpformat");
  int version = 0;
  if (!(is >> version) || version != 1) {
    throw std::invalid_argument("from_text: unsupported format version");
  }
  LinearProgram lp;
  expect("vars");
  if (!(is >> lp.num_vars) || lp.num_vars <= 0) {
    throw std::invalid_argument("from_text: bad variable count");
  }
  expect("objective");
  lp.objective.resize(static_cast<std::size_t>(lp.num_vars));
  for (auto& c : lp.objective) {
    if (!(is >> c)) throw std::invalid_argument("from_text: truncated objective");
  }
  expect("bounds");
  lp.lower.resize(static_cast<std::size_t>(lp.num_vars));
  lp.upper.resize(static_cast<std::size_t>(lp.num_vars));
  for (int j = 0; j < lp.num_vars; ++j) {
    if (!(is >> lp.lower[static_cast<std::size_t>(j)] >> lp.upper[static_cast<std::size_t>(j)])) {
      throw std::invalid_argument("from_text: truncated bounds");
    }
  }
  expect("rows");
  std::size_t n_ineq = 0, n_eq = 0;
  if (!(is >> n_ineq >> n_eq)) throw std::invalid_argument("from_text: bad row counts");
  for (std::size_t r = 0; r < n_ineq + n_eq; ++r) {
    std::vector<double> coeffs(static_cast<std::size_t>(lp.num_vars));
    for (auto& c : coeffs) {
      if (!(is >> c)) throw std::invalid_argument("from_text: truncated row");
    }
    std::string sense;
    double rhs = 0.0;
    if (!(is >> sense >> rhs)) throw std::invalid_argument("from_text: truncated row");
    if (r < n_ineq) {
      if (sense != "<=" && sense != ">=") {
        throw std::invalid_argument("from_text: bad inequality sense");
      }
      lp.inequalities.push_back(
          {std::move(coeffs), sense == "<=" ? Sense::LessEq : Sense::GreaterEq, rhs});
    } else {
      if (sense != "=") throw std::invalid_argument("from_text: bad equality sense");
      lp.equalities.push_back({std::move(coeffs), rhs});
    }
  }
  lp.validate();
  return lp;
}

}  // namespace fockbound::lp
