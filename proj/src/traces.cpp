#include "watatani/traces.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace wat {

TraceState::TraceState(MultiMatrixAlgebra a, RVec t_vec) : algebra(std::move(a)), t(std::move(t_vec)) {
  if (t.size() != algebra.block_count()) throw Error("trace vector length does not match the number of blocks");
  double s = 0.0;
  for (int i = 0; i < algebra.block_count(); ++i) s += algebra.block_size(i) * t(i);
  if (std::abs(s - 1.0) > 1e-9) throw Error("trace vector is not normalized: sum n_i t_i = " + std::to_string(s));
  if (t.minCoeff() < 0.0) throw Error("trace vector has negative entries");
}

cd TraceState::operator()(const Element& x) const {
  if (!algebra.contains(x)) throw Error("trace applied to an element of another algebra");
  cd s = 0.0;
  for (int i = 0; i < algebra.block_count(); ++i) s += t(i) * x.blocks[i].trace();
  return s;
}

Eigen::RowVectorXcd TraceState::functional() const {
  Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(algebra.total_dim());
  for (int i = 0; i < algebra.block_count(); ++i)
    for (int k = 0; k < algebra.block_size(i); ++k) r(algebra.unit_index(i, k, k)) = t(i);
  return r;
}

double TraceState::tracial_residual() const {
  double worst = 0.0;
  const auto u = matrix_units(algebra);
  for (const auto& e : u)
    for (const auto& f : u) worst = std::max(worst, std::abs((*this)(e * f) - (*this)(f * e)));
  return worst;
}

TraceState markov_trace_of_scalars(const MultiMatrixAlgebra& a) {
  RVec t(a.block_count());
  for (int i = 0; i < a.block_count(); ++i) t(i) = static_cast<double>(a.block_size(i)) / a.total_dim();
  return TraceState(a, t);
}

MarkovTrace markov_trace(const UnitalInclusion& inc) {
  if (!inc.connected()) {
    std::ostringstream os;
    os << "inclusion is not connected; components:";
    for (const auto& [b, a] : inc.components()) {
      os << " {B";
      for (int i : b) os << " " << i;
      os << " | A";
      for (int j : a) os << " " << j;
      os << "}";
    }
    throw Error(os.str());
  }
  const RMat lam = inc.inclusion_matrix().cast<double>();
  const RMat m = lam.transpose() * lam;
  Eigen::SelfAdjointEigenSolver<RMat> es(m);
  const Eigen::Index top = m.rows() - 1;
  RVec v = es.eigenvectors().col(top);
  if (v.sum() < 0) v = -v;
  const auto& a = inc.ambient();
  double s = 0.0;
  for (int j = 0; j < a.block_count(); ++j) s += a.block_size(j) * v(j);
  v /= s;
  if (v.minCoeff() <= 0.0) throw NumericalError("Perron-Frobenius vector is not strictly positive");
  MarkovTrace out;
  out.modulus = es.eigenvalues()(top);
  out.residual = (m * v - out.modulus * v).norm();
  out.trace = TraceState(a, v);
  return out;
}

IndexValue make_index_value(const MultiMatrixAlgebra& a, const Element& x, double tol) {
  IndexValue iv;
  iv.algebra = a;
  iv.element = x;
  iv.coefficients.resize(a.block_count());
  for (int i = 0; i < a.block_count(); ++i) {
    const int n = a.block_size(i);
    const cd c = x.blocks[i].trace() / static_cast<double>(n);
    iv.central_residual = std::max(iv.central_residual, (x.blocks[i] - c * Mat::Identity(n, n)).norm());
    if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) throw NumericalError("index element is not self-adjoint");
    iv.coefficients(i) = c.real();
  }
  const double scale = std::max(1.0, iv.coefficients.cwiseAbs().maxCoeff());
  if (iv.central_residual > tol * scale) throw NumericalError("index element is not central (residual " + std::to_string(iv.central_residual) + ")");
  if (iv.coefficients.minCoeff() <= tol) throw NumericalError("index element is not positive invertible");
  iv.scalar = iv.coefficients.maxCoeff() - iv.coefficients.minCoeff() <= tol * scale;
  if (iv.scalar) iv.value = iv.coefficients.mean();
  return iv;
}

IndexValue trace_index(const TraceState& tr) {
  if (!tr.faithful()) throw Error("trace is not faithful");
  const auto& a = tr.algebra;
  Element x = a.zero();
  for (int i = 0; i < a.block_count(); ++i) {
    const double n = a.block_size(i);
    x.blocks[i] = (n * n / tr.projection_trace(i)) * Mat::Identity(a.block_size(i), a.block_size(i));
  }
  return make_index_value(a, x);
}

std::string IndexValue::describe() const {
  std::ostringstream os;
  os << std::setprecision(12);
  if (scalar) {
    os << value;
    return os.str();
  }
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (i) os << " + ";
    os << coefficients(i) << "*p" << i;
  }
  return os.str();
}

}  // namespace wat
