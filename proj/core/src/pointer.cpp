#include "qpigeon/pointer.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "qpigeon/fft.hpp"
#include "qpigeon/spectrum.hpp"

namespace qpigeon {

namespace {

void check_pointer_index(size_t count, int index) {
  if (index < 0 || static_cast<size_t>(index) >= count) {
    throw std::invalid_argument("pointer index out of range: " +
                                std::to_string(index));
  }
}

Complex grid_inner(const std::vector<Complex>& u, const std::vector<Complex>& v,
                   double spacing) {
  Complex sum = 0.0;
  for (size_t j = 0; j < u.size(); ++j) sum += std::conj(u[j]) * v[j];
  return sum * spacing;
}

// Both joint and postselected states are sums of product branches; the only
// difference is the weight matrix W_{bb'} carrying the non-pointer factors
// (system Gram vs. coefficient products). Marginals are bilinear forms in
// the branches, so everything below works off this view.
struct Bundle {
  const std::vector<PointerRegister>* grids;
  std::vector<const std::vector<std::vector<Complex>>*> waves;
  std::vector<Complex> weight;  // row-major B x B
};

Bundle make_bundle(const JointState& joint) {
  Bundle b{&joint.pointers, {}, {}};
  const size_t n = joint.branches.size();
  b.waves.reserve(n);
  for (const auto& branch : joint.branches) b.waves.push_back(&branch.waves);
  b.weight.resize(n * n);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) {
      b.weight[r * n + c] =
          inner(joint.branches[r].system, joint.branches[c].system);
    }
  }
  return b;
}

Bundle make_bundle(const PointerState& state) {
  Bundle b{&state.grids, {}, {}};
  const size_t n = state.branches.size();
  b.waves.reserve(n);
  for (const auto& branch : state.branches) b.waves.push_back(&branch.waves);
  b.weight.resize(n * n);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) {
      b.weight[r * n + c] =
          std::conj(state.branches[r].coeff) * state.branches[c].coeff;
    }
  }
  return b;
}

// Per-pointer Gram matrices g_q[r*B+c] = <wave_{r,q}|wave_{c,q}>.
std::vector<std::vector<Complex>> all_grams(const Bundle& b) {
  const size_t B = b.waves.size();
  const size_t P = b.grids->size();
  std::vector<std::vector<Complex>> g(P, std::vector<Complex>(B * B));
  for (size_t q = 0; q < P; ++q) {
    const double spacing = (*b.grids)[q].spacing;
    for (size_t r = 0; r < B; ++r) {
      for (size_t c = 0; c < B; ++c) {
        g[q][r * B + c] =
            grid_inner((*b.waves[r])[q], (*b.waves[c])[q], spacing);
      }
    }
  }
  return g;
}

double total_norm(const Bundle& b, const std::vector<std::vector<Complex>>& g) {
  const size_t B = b.waves.size();
  Complex norm = 0.0;
  for (size_t r = 0; r < B; ++r) {
    for (size_t c = 0; c < B; ++c) {
      Complex term = b.weight[r * B + c];
      for (const auto& gq : g) term *= gq[r * B + c];
      norm += term;
    }
  }
  return norm.real();
}

double mean_impl(const Bundle& b, int index, bool momentum) {
  check_pointer_index(b.grids->size(), index);
  const size_t B = b.waves.size();
  const size_t p = static_cast<size_t>(index);
  const auto g = all_grams(b);
  const double norm = total_norm(b, g);
  if (!(norm > 0.0)) {
    throw std::runtime_error("state has vanishing norm");
  }
  const PointerRegister& grid = (*b.grids)[p];
  const size_t n = static_cast<size_t>(grid.n_points);

  std::vector<std::vector<Complex>> target(B);
  std::vector<double> axis;
  double cell = grid.spacing;
  if (momentum) {
    axis = dft_frequencies(grid.n_points, grid.spacing);
    cell /= static_cast<double>(n);  // Parseval weight for the raw transform
    for (size_t r = 0; r < B; ++r) {
      target[r] = (*b.waves[r])[p];
      dft_forward(target[r]);
    }
  } else {
    axis = grid.positions;
    for (size_t r = 0; r < B; ++r) target[r] = (*b.waves[r])[p];
  }

  Complex acc = 0.0;
  for (size_t r = 0; r < B; ++r) {
    for (size_t c = 0; c < B; ++c) {
      Complex w = b.weight[r * B + c];
      for (size_t q = 0; q < g.size(); ++q) {
        if (q != p) w *= g[q][r * B + c];
      }
      if (w == Complex(0.0, 0.0)) continue;
      Complex moment = 0.0;
      for (size_t j = 0; j < n; ++j) {
        moment += axis[j] * std::conj(target[r][j]) * target[c][j];
      }
      acc += w * moment * cell;
    }
  }
  return acc.real() / norm;
}

std::vector<double> density_impl(const Bundle& b, int index) {
  check_pointer_index(b.grids->size(), index);
  const size_t B = b.waves.size();
  const size_t p = static_cast<size_t>(index);
  const auto g = all_grams(b);
  const double norm = total_norm(b, g);
  if (!(norm > 0.0)) {
    throw std::runtime_error("state has vanishing norm");
  }
  const size_t n = static_cast<size_t>((*b.grids)[p].n_points);
  std::vector<Complex> density(n, 0.0);
  for (size_t r = 0; r < B; ++r) {
    for (size_t c = 0; c < B; ++c) {
      Complex w = b.weight[r * B + c];
      for (size_t q = 0; q < g.size(); ++q) {
        if (q != p) w *= g[q][r * B + c];
      }
      if (w == Complex(0.0, 0.0)) continue;
      const auto& wr = (*b.waves[r])[p];
      const auto& wc = (*b.waves[c])[p];
      for (size_t j = 0; j < n; ++j) {
        density[j] += w * std::conj(wr[j]) * wc[j];
      }
    }
  }
  std::vector<double> out(n);
  for (size_t j = 0; j < n; ++j) out[j] = density[j].real() / norm;
  return out;
}

}  // namespace

PointerRegister gaussian_pointer(double sigma, double half_width,
                                 int n_points) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("pointer width must be positive");
  }
  if (half_width < 5.0 * sigma) {
    throw std::invalid_argument("half width must be at least 5 sigma");
  }
  if (n_points < 64) {
    throw std::invalid_argument("pointer grid requires at least 64 points");
  }
  const double spacing = 2.0 * half_width / static_cast<double>(n_points);
  if (spacing > sigma / 4.0) {
    throw std::invalid_argument("pointer under-resolved");
  }
  PointerRegister reg;
  reg.n_points = n_points;
  reg.spacing = spacing;
  reg.sigma = sigma;
  reg.positions.resize(static_cast<size_t>(n_points));
  reg.amplitudes.resize(static_cast<size_t>(n_points));
  double norm2 = 0.0;
  for (int j = 0; j < n_points; ++j) {
    // Midpoint grid: exactly parity-symmetric about 0.
    const double x = -half_width + (static_cast<double>(j) + 0.5) * spacing;
    const double a = std::exp(-x * x / (4.0 * sigma * sigma));
    reg.positions[static_cast<size_t>(j)] = x;
    reg.amplitudes[static_cast<size_t>(j)] = Complex(a, 0.0);
    norm2 += a * a;
  }
  const double scale = 1.0 / std::sqrt(norm2 * spacing);
  for (auto& amp : reg.amplitudes) amp *= scale;
  return reg;
}

JointState couple(const StateVector& system,
                  const std::vector<PointerRegister>& pointers,
                  const std::vector<CouplingSpec>& couplings) {
  std::set<int> used;
  std::vector<Operator> observables;
  observables.reserve(couplings.size());
  for (const auto& coupling : couplings) {
    if (coupling.observable.dim() != system.dim()) {
      throw std::invalid_argument(
          "coupling observable dimension mismatch: " +
          std::to_string(coupling.observable.dim()) + " vs " +
          std::to_string(system.dim()));
    }
    if (!std::isfinite(coupling.strength)) {
      throw std::invalid_argument("coupling strength must be finite");
    }
    check_pointer_index(pointers.size(), coupling.pointer_index);
    if (!used.insert(coupling.pointer_index).second) {
      throw std::invalid_argument("pointer index reused across couplings");
    }
    observables.push_back(coupling.observable.has_flag(kHermitian)
                              ? coupling.observable
                              : with_flags(coupling.observable, kHermitian));
  }
  for (size_t i = 0; i < observables.size(); ++i) {
    for (size_t j = i + 1; j < observables.size(); ++j) {
      const Operator ab = multiply(observables[i], observables[j]);
      const Operator ba = multiply(observables[j], observables[i]);
      if (max_abs_diff(ab, ba) > kCommuteTol) {
        throw std::invalid_argument(
            "observables do not commute; apply couplings sequentially");
      }
    }
  }

  JointState joint{system.dim(), pointers, {}};
  JointBranch root{system, {}};
  root.waves.reserve(pointers.size());
  for (const auto& reg : pointers) root.waves.push_back(reg.amplitudes);
  joint.branches.push_back(std::move(root));

  for (size_t ci = 0; ci < couplings.size(); ++ci) {
    const CouplingSpec& cs = couplings[ci];
    if (cs.strength == 0.0) continue;
    const Spectrum spectrum = hermitian_spectrum(observables[ci]);
    const double spacing = pointers[static_cast<size_t>(cs.pointer_index)].spacing;
    std::vector<JointBranch> next;
    for (const auto& branch : joint.branches) {
      for (const auto& pair : spectrum.pairs) {
        StateVector component = apply(pair.projector, branch.system);
        if (norm_squared(component) <= kBranchPruneTol) continue;
        JointBranch nb{std::move(component), branch.waves};
        translate(nb.waves[static_cast<size_t>(cs.pointer_index)], spacing,
                  cs.strength * pair.eigenvalue);
        next.push_back(std::move(nb));
      }
    }
    joint.branches = std::move(next);
  }
  return joint;
}

double joint_norm_squared(const JointState& joint) {
  const Bundle b = make_bundle(joint);
  return total_norm(b, all_grams(b));
}

std::pair<PointerState, double> postselect_pointers(const JointState& joint,
                                                    const StateVector& post) {
  if (post.dim() != joint.system_dim) {
    throw std::invalid_argument("postselect state dimension mismatch: " +
                                std::to_string(post.dim()) + " vs " +
                                std::to_string(joint.system_dim));
  }
  if (!is_normalized(post)) {
    throw std::invalid_argument("postselect state is not normalized");
  }
  PointerState state{joint.pointers, {}};
  state.branches.reserve(joint.branches.size());
  for (const auto& branch : joint.branches) {
    state.branches.push_back({inner(post, branch.system), branch.waves});
  }
  const Bundle b = make_bundle(state);
  const double probability = total_norm(b, all_grams(b));
  if (probability < kPostselectFloor) {
    throw std::runtime_error("postselection failed");
  }
  const double scale = 1.0 / std::sqrt(probability);
  for (auto& branch : state.branches) branch.coeff *= scale;
  return {std::move(state), probability};
}

double pointer_mean_position(const JointState& joint, int index) {
  return mean_impl(make_bundle(joint), index, false);
}

double pointer_mean_position(const PointerState& state, int index) {
  return mean_impl(make_bundle(state), index, false);
}

double pointer_mean_momentum(const JointState& joint, int index) {
  return mean_impl(make_bundle(joint), index, true);
}

double pointer_mean_momentum(const PointerState& state, int index) {
  return mean_impl(make_bundle(state), index, true);
}

std::vector<double> marginal_position_density(const JointState& joint,
                                              int index) {
  return density_impl(make_bundle(joint), index);
}

std::vector<double> marginal_position_density(const PointerState& state,
                                              int index) {
  return density_impl(make_bundle(state), index);
}

std::vector<double> fit_polynomial(const std::vector<double>& xs,
                                   const std::vector<double>& ys,
                                   const std::vector<int>& powers) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("fit requires matching x and y counts");
  }
  if (powers.empty()) {
    throw std::invalid_argument("fit requires at least one power");
  }
  const std::set<double> distinct(xs.begin(), xs.end());
  if (distinct.size() < powers.size()) {
    throw std::invalid_argument("fit is under-determined");
  }
  const size_t k = powers.size();
  std::vector<double> m(k * k, 0.0);
  std::vector<double> rhs(k, 0.0);
  std::vector<double> basis(k);
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t a = 0; a < k; ++a) basis[a] = std::pow(xs[i], powers[a]);
    for (size_t a = 0; a < k; ++a) {
      rhs[a] += basis[a] * ys[i];
      for (size_t c = 0; c < k; ++c) m[a * k + c] += basis[a] * basis[c];
    }
  }
  // Gaussian elimination with partial pivoting on the normal equations.
  for (size_t col = 0; col < k; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < k; ++r) {
      if (std::abs(m[r * k + col]) > std::abs(m[pivot * k + col])) pivot = r;
    }
    if (std::abs(m[pivot * k + col]) < 1e-300) {
      throw std::runtime_error("fit system is singular");
    }
    if (pivot != col) {
      for (size_t c = 0; c < k; ++c) std::swap(m[pivot * k + c], m[col * k + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    for (size_t r = col + 1; r < k; ++r) {
      const double factor = m[r * k + col] / m[col * k + col];
      for (size_t c = col; c < k; ++c) m[r * k + c] -= factor * m[col * k + c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> coeffs(k, 0.0);
  for (size_t r = k; r-- > 0;) {
    double value = rhs[r];
    for (size_t c = r + 1; c < k; ++c) value -= m[r * k + c] * coeffs[c];
    coeffs[r] = value / m[r * k + r];
  }
  return coeffs;
}

FitResult fit_linear_quadratic(const std::vector<double>& epsilons,
                               const std::vector<double>& values) {
  const auto coeffs = fit_polynomial(epsilons, values, {1, 2});
  double ss = 0.0;
  for (size_t i = 0; i < epsilons.size(); ++i) {
    const double fitted =
        coeffs[0] * epsilons[i] + coeffs[1] * epsilons[i] * epsilons[i];
    ss += (values[i] - fitted) * (values[i] - fitted);
  }
  return {coeffs[0], coeffs[1],
          std::sqrt(ss / static_cast<double>(epsilons.size()))};
}

SweepResult sweep_couplings(const PigeonholeScenario& scenario,
                            const SweepConfig& config) {
  const std::set<double> distinct(config.epsilons.begin(),
                                  config.epsilons.end());
  if (distinct.size() < 4) {
    throw std::invalid_argument("at least 4 distinct epsilon values required");
  }
  for (const double eps : config.epsilons) {
    // Pair projectors have maximal eigenvalue 1.
    if (std::abs(eps) > config.half_width / 4.0) {
      throw std::invalid_argument("epsilon out of resolvable range");
    }
  }

  SweepResult result;
  for (const double eps : config.epsilons) {
    std::vector<PointerRegister> pointers;
    std::vector<CouplingSpec> couplings;
    for (size_t k = 0; k < kPairOrder.size(); ++k) {
      pointers.push_back(
          gaussian_pointer(config.sigma, config.half_width, config.n_points));
      couplings.push_back({scenario.pair_projectors.at(kPairOrder[k]), eps,
                           static_cast<int>(k)});
    }
    const JointState joint = couple(scenario.pre, pointers, couplings);
    if (config.postselect) {
      const auto [state, probability] = postselect_pointers(joint, scenario.post);
      (void)probability;
      for (int k = 0; k < static_cast<int>(kPairOrder.size()); ++k) {
        result.rows.push_back({eps, k, pointer_mean_position(state, k),
                               pointer_mean_momentum(state, k)});
      }
    } else {
      for (int k = 0; k < static_cast<int>(kPairOrder.size()); ++k) {
        result.rows.push_back({eps, k, pointer_mean_position(joint, k),
                               pointer_mean_momentum(joint, k)});
      }
    }
  }

  for (int k = 0; k < static_cast<int>(kPairOrder.size()); ++k) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : result.rows) {
      if (row.pointer_id == k) {
        xs.push_back(row.epsilon);
        ys.push_back(row.mean_position);
      }
    }
    result.fits.push_back(fit_linear_quadratic(xs, ys));
  }
  return result;
}

std::vector<FitResult> shift_slope(const PigeonholeScenario& scenario,
                                   const SweepConfig& config) {
  return sweep_couplings(scenario, config).fits;
}

}  // namespace qpigeon
