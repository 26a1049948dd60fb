#include "watatani/quasi_basis.hpp"

#include <cmath>

namespace wat {

namespace {

// State of one restart: for every block i, the columns of V[i] are the
// row-major vectorizations of the i-th blocks of the d unitaries.
struct SearchState {
  std::vector<Mat> v;
};

Mat gram(const SearchState& s, const RVec& t) {
  Mat g = Mat::Zero(s.v[0].cols(), s.v[0].cols());
  for (std::size_t i = 0; i < s.v.size(); ++i) g.noalias() += t(static_cast<Eigen::Index>(i)) * s.v[i].adjoint() * s.v[i];
  return g;
}

double objective(const Mat& g) { return (g - Mat::Identity(g.rows(), g.cols())).squaredNorm(); }

void retract(SearchState& s, const std::vector<int>& dims) {
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    const int n = dims[i];
    for (Eigen::Index k = 0; k < s.v[i].cols(); ++k) {
      Eigen::Map<Mat> w(s.v[i].col(k).data(), n, n);
      const Mat u = polar_unitary(w);
      w = u;
    }
  }
}

}  // namespace

UnitarySearchResult unitary_basis_search(const TraceState& tr, const UnitarySearchConfig& cfg) {
  if (cfg.max_iterations <= 0 || cfg.restarts <= 0 || cfg.target_residual <= 0.0)
    throw Error("search configuration values must be positive");
  const auto& p = tr.algebra;
  const int d = p.total_dim();
  for (int i = 0; i < p.block_count(); ++i)
    if (std::abs(tr.t(i) - static_cast<double>(p.block_size(i)) / d) > 1e-9)
      throw Error("no unitary orthonormal basis can exist: the trace is not the Markov trace of C ⊂ P");

  UnitarySearchResult res;
  if (p.block_count() == 1) {
    QuasiBasis qb = weyl_clock_shift_basis(p.block_size(0));
    res.success = true;
    res.exact = true;
    res.best_residual = qb.orthonormal_residual;
    res.best_restart = 0;
    res.basis = std::move(qb);
    return res;
  }

  const std::vector<int>& dims = p.dims();
  res.best_residual = std::numeric_limits<double>::infinity();
  SearchState best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
    SearchState s;
    for (int n : dims) {
      Mat v(n * n, d);
      for (int k = 0; k < d; ++k) {
        const Mat u = random_unitary(n, rng);
        v.col(k) = Eigen::Map<const Vec>(u.data(), n * n);
      }
      s.v.push_back(v);
    }
    Mat g = gram(s, tr.t);
    double f = objective(g);
    double eta = 0.25;
    for (int it = 0; it < cfg.max_iterations && std::sqrt(f) > cfg.target_residual; ++it) {
      const Mat gi = g - Mat::Identity(d, d);
      SearchState trial = s;
      for (std::size_t i = 0; i < s.v.size(); ++i)
        trial.v[i] -= eta * 2.0 * tr.t(static_cast<Eigen::Index>(i)) * (s.v[i] * gi);
      retract(trial, dims);
      const Mat g2 = gram(trial, tr.t);
      const double f2 = objective(g2);
      if (f2 < f) {
        s = std::move(trial);
        g = g2;
        f = f2;
        eta = std::min(eta * 1.5, 8.0);
      } else {
        eta *= 0.5;
        if (eta < 1e-14) break;
      }
    }
    ++res.restarts_run;
    const double resid = std::sqrt(f);
    if (resid < res.best_residual) {
      res.best_residual = resid;
      res.best_restart = r;
      best = s;
    }
    if (resid <= cfg.target_residual) break;
  }
  if (res.best_residual <= cfg.target_residual) {
    std::vector<Element> el;
    for (int k = 0; k < d; ++k) {
      Element w;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const int n = dims[i];
        w.blocks.push_back(Eigen::Map<const Mat>(best.v[i].col(k).data(), n, n));
      }
      el.push_back(std::move(w));
    }
    // Orthonormality holds to the search residual, so verify at that scale.
    QuasiBasis qb = verify_quasi_basis(trace_expectation(tr), std::move(el),
                                       std::max(kTol, 10.0 * d * cfg.target_residual));
    res.success = qb.orthonormal && qb.unitary && qb.two_sided;
    res.basis = std::move(qb);
  }
  return res;
}

}  // namespace wat
