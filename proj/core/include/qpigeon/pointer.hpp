#pragma once

#include <utility>
#include <vector>

#include "qpigeon/operator.hpp"
#include "qpigeon/pigeonhole.hpp"
#include "qpigeon/state.hpp"

namespace qpigeon {

// Simultaneous couplings must commute within this commutator norm.
inline constexpr double kCommuteTol = 1e-12;
// Postselection probabilities below this are treated as impossible.
inline constexpr double kPostselectFloor = 1e-14;
// Branches with squared norm at or below this are dropped while coupling.
inline constexpr double kBranchPruneTol = 1e-24;

// Default coupling-strength sweep: one decade, shifts well above grid noise
// and well below the pointer width.
inline const std::vector<double> kDefaultEpsilons = {0.2, 0.1, 0.05, 0.025,
                                                     0.0125};

// Grid-discretized Gaussian pointer. positions are midpoints, symmetric
// about 0; amplitudes are grid-normalized (sum |psi|^2 * spacing = 1).
struct PointerRegister {
  int n_points;
  double spacing;
  double sigma;
  std::vector<double> positions;
  std::vector<Complex> amplitudes;
};

// Gaussian exp(-x^2 / 4 sigma^2), so sigma^2 is the position variance and
// the momentum variance is 1 / (4 sigma^2).
PointerRegister gaussian_pointer(double sigma, double half_width,
                                 int n_points);

// One impulsive observable-pointer coupling of dimensionless strength.
struct CouplingSpec {
  Operator observable;
  double strength;
  int pointer_index;
};

// System x pointers state as a sum of product branches: each branch holds
// an (unnormalized, mutually orthogonal across branches) system component
// and one wave per pointer. Dense tensors over several 1024-point grids
// would be unrepresentable; the branch form is exact.
struct JointBranch {
  StateVector system;
  std::vector<std::vector<Complex>> waves;
};

struct JointState {
  int system_dim;
  std::vector<PointerRegister> pointers;  // grid metadata, initial waves
  std::vector<JointBranch> branches;
};

// Pointer-only state left after postselecting the system factor.
struct PointerBranch {
  Complex coeff;
  std::vector<std::vector<Complex>> waves;
};

struct PointerState {
  std::vector<PointerRegister> grids;
  std::vector<PointerBranch> branches;
};

// Applies exp(-i strength A x p_pointer) for every coupling. Observables
// must be pairwise commuting; each branch pointer wave is translated by
// strength * eigenvalue, exactly, in the conjugate basis.
JointState couple(const StateVector& system,
                  const std::vector<PointerRegister>& pointers,
                  const std::vector<CouplingSpec>& couplings);

// Total squared norm of a joint state (1 within 1e-9 after couple).
double joint_norm_squared(const JointState& joint);

// Projects the system factor onto post and renormalizes; returns the
// pointer-only state and the success probability.
std::pair<PointerState, double> postselect_pointers(const JointState& joint,
                                                    const StateVector& post);

// Mean of the indexed pointer's marginal position / momentum distribution.
double pointer_mean_position(const JointState& joint, int index);
double pointer_mean_position(const PointerState& state, int index);
double pointer_mean_momentum(const JointState& joint, int index);
double pointer_mean_momentum(const PointerState& state, int index);

// Marginal position density on the pointer's grid (sums to 1 over spacing).
std::vector<double> marginal_position_density(const JointState& joint,
                                              int index);
std::vector<double> marginal_position_density(const PointerState& state,
                                              int index);

// Least-squares fit of values(epsilon) to c1 e + c2 e^2; residual is rms.
struct FitResult {
  double c1;
  double c2;
  double residual;
};

FitResult fit_linear_quadratic(const std::vector<double>& epsilons,
                               const std::vector<double>& values);

// General least-squares fit onto the monomials x^powers[k]; returns one
// coefficient per power.
std::vector<double> fit_polynomial(const std::vector<double>& xs,
                                   const std::vector<double>& ys,
                                   const std::vector<int>& powers);

struct SweepConfig {
  std::vector<double> epsilons = kDefaultEpsilons;
  double sigma = 1.0;
  double half_width = 10.0;
  int n_points = 1024;
  bool postselect = true;
};

struct SweepRow {
  double epsilon;
  int pointer_id;
  double mean_position;
  double mean_momentum;
};

struct SweepResult {
  std::vector<SweepRow> rows;     // epsilon-major, pointer-minor
  std::vector<FitResult> fits;    // per pointer, over mean_position
};

// Couples all three pair projectors simultaneously at every epsilon (one
// pointer per pair, ordered as kPairOrder) and fits the per-pointer mean
// position shifts.
SweepResult sweep_couplings(const PigeonholeScenario& scenario,
                            const SweepConfig& config);

// The per-pointer (slope, curvature, residual) fits of the sweep.
std::vector<FitResult> shift_slope(const PigeonholeScenario& scenario,
                                   const SweepConfig& config);

}  // namespace qpigeon
