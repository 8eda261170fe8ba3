#include "unistoq/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "unistoq/numerics.hpp"

namespace unistoq {

PermutationSpec::PermutationSpec(int n_, std::vector<std::vector<int>> cycles_)
    : n(n_), cycles(std::move(cycles_)) {
  require(n > 0, "permutation: positive size required");
  image_.assign(static_cast<size_t>(n), -1);
  for (const auto& cycle : cycles) {
    require(!cycle.empty(), "permutation: empty cycle");
    for (size_t a = 0; a < cycle.size(); ++a) {
      const int from = cycle[a];
      const int to = cycle[(a + 1) % cycle.size()];
      require(from >= 0 && from < n, "permutation: cycle index out of range");
      require(image_[static_cast<size_t>(from)] == -1, "permutation: cycles are not disjoint");
      image_[static_cast<size_t>(from)] = to;
    }
  }
  for (int j = 0; j < n; ++j)
    require(image_[static_cast<size_t>(j)] != -1, "permutation: cycles must cover every index");
}

Matrix PermutationSpec::matrix() const {
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) m(image(j), j) = 1.0;
  return m;
}

namespace {

// principal phase of the k-th eigenvalue exp(2 pi i k / L), in (-pi, pi]
double principal_phase(int k, int cycle_len) {
  const int m = 2 * k <= cycle_len ? k : k - cycle_len;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(cycle_len);
}

} // namespace

CMatrix permutation_power_interpolation(const PermutationSpec& sigma, double t, double dt) {
  require(dt > 0.0, "permutation interpolation: dt must be positive");
  const double s = t / dt;
  const int n = sigma.n;
  CMatrix out = CMatrix::Zero(n, n);

  for (const auto& cycle : sigma.cycles) {
    const int len = static_cast<int>(cycle.size());
    // eigenvector for exp(2 pi i k/L) has components omega^{-a}/sqrt(L) on
    // the cycle, so the projector contributes omega^{b-a}/L at (c_a, c_b)
    for (int k = 0; k < len; ++k) {
      const double theta = principal_phase(k, len);
      const Complex scale = std::polar(1.0 / static_cast<double>(len), theta * s);
      for (int a = 0; a < len; ++a)
        for (int b = 0; b < len; ++b) {
          const double ang =
              2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(b - a) /
              static_cast<double>(len);
          out(cycle[static_cast<size_t>(a)], cycle[static_cast<size_t>(b)]) +=
              scale * std::polar(1.0, ang);
        }
    }
  }
  return out;
}

StochasticSystem permutation_unistochastic_system(const PermutationSpec& sigma,
                                                  const TimeGrid& grid, double dt,
                                                  const ProbabilityVector& p0) {
  require(dt > 0.0, "permutation system: dt must be positive");
  require(p0.size() == sigma.n, "permutation system: p0 length mismatch");
  StochasticSystem sys;
  sys.n = sigma.n;
  sys.grid = grid;
  sys.p0 = p0;
  sys.transitions.reserve(static_cast<size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    const double t = grid.at(k);
    // |Sigma^0|^2 is the identity analytically; write it down rather than
    // round-trip through the Fourier sum
    Matrix g = t == 0.0 ? Matrix::Identity(sigma.n, sigma.n)
                        : Matrix(permutation_power_interpolation(sigma, t, dt).cwiseAbs2());
    sys.transitions.push_back({std::move(g), t});
  }
  return sys;
}

CMatrix hamiltonian_from_permutation(const PermutationSpec& sigma, double dt) {
  require(dt > 0.0, "hamiltonian: dt must be positive");
  const int n = sigma.n;
  CMatrix h = CMatrix::Zero(n, n);
  for (const auto& cycle : sigma.cycles) {
    const int len = static_cast<int>(cycle.size());
    for (int k = 0; k < len; ++k) {
      const double energy = -principal_phase(k, len) / dt;
      if (energy == 0.0) continue;
      for (int a = 0; a < len; ++a)
        for (int b = 0; b < len; ++b) {
          const double ang =
              2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(b - a) /
              static_cast<double>(len);
          h(cycle[static_cast<size_t>(a)], cycle[static_cast<size_t>(b)]) +=
              energy / static_cast<double>(len) * std::polar(1.0, ang);
        }
    }
  }
  return h;
}

StochasticSystem markov_chain_system(const TransitionMatrix& g_dt, int steps,
                                     const ProbabilityVector& p0) {
  const double dt = g_dt.time_label;
  require(dt > 0.0, "markov chain: base time label must be positive");
  const auto n = g_dt.entries.rows();
  require(g_dt.entries.cols() == n && n > 0, "markov chain: square base matrix required");
  require(g_dt.entries.minCoeff() >= -tol::entry_bounds, "markov chain: negative base entry");
  require(num::column_sum_defect(g_dt.entries) <= tol::stochastic,
          "markov chain: base matrix is not column-stochastic");
  require(p0.entries.size() == n, "markov chain: p0 length mismatch");
  require(steps >= 1, "markov chain: at least one step required");

  std::vector<double> times;
  times.reserve(static_cast<size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k) * dt);

  StochasticSystem sys;
  sys.n = static_cast<int>(n);
  sys.grid = TimeGrid(times);
  sys.p0 = p0;
  Matrix power = Matrix::Identity(n, n);
  sys.transitions.push_back({power, 0.0});
  for (int k = 1; k <= steps; ++k) {
    power = g_dt.entries * power;
    sys.transitions.push_back({power, times[static_cast<size_t>(k)]});
  }
  return sys;
}

StochasticSystem rds_to_stochastic_system(const FiniteRDS& rds, const ProbabilityVector& p0) {
  const int n = rds.n;
  require(n > 0, "rds: positive state count required");
  require(p0.size() == n, "rds: p0 length mismatch");
  require(!rds.outcomes.empty(), "rds: at least one outcome required");
  const int nt = rds.grid.size();
  double weight_sum = 0.0;
  for (const auto& outcome : rds.outcomes) {
    require(outcome.weight >= 0.0, "rds: negative weight");
    weight_sum += outcome.weight;
    require(outcome.map.rows() == n && outcome.map.cols() == nt, "rds: map table shape mismatch");
    require(outcome.map.minCoeff() >= 0 && outcome.map.maxCoeff() < n,
            "rds: map value out of range");
    for (int j = 0; j < n; ++j)
      require(outcome.map(j, rds.grid.zero_index()) == j, "rds: map at time 0 is not the identity");
  }
  require(std::abs(weight_sum - 1.0) <= tol::entry_bounds, "rds: weights must sum to 1");

  StochasticSystem sys;
  sys.n = n;
  sys.grid = rds.grid;
  sys.p0 = p0;
  sys.transitions.reserve(static_cast<size_t>(nt));
  for (int k = 0; k < nt; ++k) {
    Matrix g;
    if (k == rds.grid.zero_index()) {
      // identity maps put the whole sample space on i = j; that measure is 1
      // by definition, independent of how the weights round
      g = Matrix::Identity(n, n);
    } else {
      g = Matrix::Zero(n, n);
      for (const auto& outcome : rds.outcomes)
        for (int j = 0; j < n; ++j) g(outcome.map(j, k), j) += outcome.weight;
    }
    sys.transitions.push_back({std::move(g), rds.grid.at(k)});
  }
  return sys;
}

StochasticSystem random_stochastic_system(int n, const TimeGrid& grid, std::uint64_t seed) {
  require(n > 0, "random system: positive size required");
  std::mt19937_64 rng(seed);

  StochasticSystem sys;
  sys.n = n;
  sys.grid = grid;
  Vector p(n);
  for (int i = 0; i < n; ++i) p[i] = num::uniform_unit(rng);
  sys.p0.entries = p / p.sum();

  sys.transitions.reserve(static_cast<size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    const double t = grid.at(k);
    Matrix g;
    if (k == grid.zero_index()) {
      g = Matrix::Identity(n, n);
    } else {
      g.resize(n, n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) g(i, j) = num::uniform_unit(rng);
        g.col(j) /= g.col(j).sum();
      }
    }
    sys.transitions.push_back({std::move(g), t});
  }
  return sys;
}

FiniteRDS random_finite_rds(int n, const TimeGrid& grid, int outcomes, std::uint64_t seed) {
  require(n > 0 && outcomes > 0, "random rds: positive sizes required");
  std::mt19937_64 rng(seed);
  FiniteRDS rds;
  rds.n = n;
  rds.grid = grid;

  Vector w(outcomes);
  for (int o = 0; o < outcomes; ++o) w[o] = num::uniform_unit(rng);
  w /= w.sum();

  rds.outcomes.resize(static_cast<size_t>(outcomes));
  for (int o = 0; o < outcomes; ++o) {
    auto& outcome = rds.outcomes[static_cast<size_t>(o)];
    outcome.weight = w[o];
    outcome.map.resize(n, grid.size());
    for (int k = 0; k < grid.size(); ++k)
      for (int j = 0; j < n; ++j) {
        if (k == grid.zero_index())
          outcome.map(j, k) = j;
        else
          outcome.map(j, k) =
              std::min(n - 1, static_cast<int>(num::uniform_unit(rng) * static_cast<double>(n)));
      }
  }
  return rds;
}

} // namespace unistoq
