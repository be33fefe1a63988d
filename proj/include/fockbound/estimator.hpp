#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fockbound/devices.hpp"
#include "fockbound/forward_model.hpp"
#include "fockbound/lp.hpp"
#include "fockbound/photon_vector.hpp"

namespace fockbound::estimator {

/// The finite unknown set: all pairs (n, x) with total(n) <= m_cut and
/// total(x) <= total(n), enumerated in a stable (total(n), n, total(x), x)
/// lexicographic order.
class TruncationSet {
 public:
  TruncationSet(int ports_in, int ports_out, int m_cut);

  int m_cut() const { return m_cut_; }
  int ports_in() const { return ports_in_; }
  int ports_out() const { return ports_out_; }
  int variable_count() const { return static_cast<int>(pairs_.size()); }

  const std::vector<PhotonVector>& inputs() const { return inputs_; }
  const std::pair<PhotonVector, PhotonVector>& pair(int var) const {
    return pairs_[static_cast<std::size_t>(var)];
  }
  /// Variable range [begin, end) of the block belonging to input n.
  std::pair<int, int> block(int input_idx) const {
    return blocks_[static_cast<std::size_t>(input_idx)];
  }

  /// Variable index of (n, x), or -1 when outside the truncation.
  int find(const PhotonVector& n, const PhotonVector& x) const;

 private:
  int ports_in_, ports_out_, m_cut_;
  std::vector<PhotonVector> inputs_;
  std::vector<std::pair<PhotonVector, PhotonVector>> pairs_;
  std::vector<std::pair<int, int>> blocks_;
  std::map<std::pair<PhotonVector, PhotonVector>, int> index_;
};

struct BuiltProgram {
  lp::LinearProgram program;  // row-scaled
  lp::ScalingRecord scaling;
  TruncationSet trunc;
  std::vector<double> leftover;  // per setting
  double leftover_max = 0.0;
  std::vector<std::string> warnings;
};

/// Assembles the estimation linear program from observed click statistics:
/// per setting and pattern the two truncation inequalities with coefficients
/// P_n^mu P^kappa(theta|x), one normalization equality per input in the
/// truncation set, and [0,1] boxes on every unknown.
BuiltProgram build_program(const std::vector<ObservedStatistics>& dataset, int m_cut);

struct BoundResult {
  PhotonVector target_n, target_x;
  double lower = 0.0, upper = 1.0;
  double leftover_max = 0.0;
  int variables = 0, inequality_rows = 0, equality_rows = 0;
  lp::Status lower_status = lp::Status::Infeasible;
  lp::Status upper_status = lp::Status::Infeasible;

  bool ok() const {
    return lower_status == lp::Status::Optimal && upper_status == lp::Status::Optimal;
  }
};

/// Lower and upper LP bounds on P(x|n) for one target inside the truncation.
BoundResult bound(const PhotonVector& target_n, const PhotonVector& target_x,
                  const BuiltProgram& built);

enum class ExperimentKind { Beamsplitter, Tritter };

/// Symmetric per-port decoy grids with the experiment's setting cardinalities
/// (six intensities and five effective efficiencies for the beamsplitter,
/// three and two for the tritter), plus matching truncation and dark-count
/// defaults. All values can be overridden through configuration.
struct DecoyGrids {
  std::vector<double> intensities;
  std::vector<double> efficiencies;
  int m_cut = 10;
  double p_dark = 1e-6;
};

DecoyGrids default_settings(ExperimentKind kind);

nlohmann::json bound_result_to_json(const BoundResult& r);

nlohmann::json dataset_to_json(const std::vector<ObservedStatistics>& dataset);
std::vector<ObservedStatistics> dataset_from_json(const nlohmann::json& j);

}  // namespace fockbound::estimator
