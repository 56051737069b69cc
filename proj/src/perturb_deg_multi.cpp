// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/perturb_deg_multi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wellsep/error.hpp"

namespace wellsep {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kSingularFloor = 1e-10;

void require_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " has shape " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                              "x" + std::to_string(cols));
}

double asymmetry(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
}

void require_degenerate(const std::vector<BoundState>& s1, const std::vector<BoundState>& s2) {
  const double e = s1.front().energy;
  auto check = [e](const BoundState& b) {
    if (std::abs(b.energy - e) > kDegeneracyTolerance * std::max(1.0, std::abs(e)))
      throw Error(ErrorCode::NotDegenerate, "state '" + b.label + "' is not degenerate with the others");
  };
  std::for_each(s1.begin(), s1.end(), check);
  std::for_each(s2.begin(), s2.end(), check);
}

}  // namespace

void MultiBlock::validate() const {
  if (n1 < 1 || n2 < 1) throw Error(ErrorCode::ShapeMismatch, "both orbital sets must be non-empty");
  if (n1 < n2) throw Error(ErrorCode::ShapeMismatch, "convention n1 >= n2 violated; swap the wells");
  require_shape(alpha, n1, n1, "alpha");
  require_shape(beta, n2, n2, "beta");
  require_shape(gamma, n1, n2, "gamma");
  require_shape(delta, n1, n2, "delta");
  if (!alpha.allFinite() || !beta.allFinite() || !gamma.allFinite() || !delta.allFinite())
    throw Error(ErrorCode::InvalidArgument, "block matrices must be finite");
  const double scale = std::max({1.0, alpha.cwiseAbs().maxCoeff(), beta.cwiseAbs().maxCoeff()});
  if (asymmetry(alpha) > kSymmetryTol * scale || asymmetry(beta) > kSymmetryTol * scale)
    throw Error(ErrorCode::InvalidArgument, "alpha and beta must be symmetric");
}

MultiBlock MultiBlock::from_matrices(Eigen::MatrixXd alpha, Eigen::MatrixXd beta, Eigen::MatrixXd gamma,
                                     Eigen::MatrixXd delta) {
  MultiBlock b;
  b.n1 = static_cast<int>(gamma.rows());
  b.n2 = static_cast<int>(gamma.cols());
  b.alpha = std::move(alpha);
  b.beta = std::move(beta);
  b.gamma = std::move(gamma);
  b.delta = std::move(delta);
  b.validate();
  return b;
}

MultiBlock build_blocks(const std::vector<BoundState>& states1, const std::vector<BoundState>& states2,
                        const Potential& v1, const Potential& v2, const QuadratureSpec& spec) {
  if (states1.empty() || states2.empty())
    throw Error(ErrorCode::ShapeMismatch, "both orbital sets must be non-empty");
  if (states1.size() < states2.size())
    throw Error(ErrorCode::ShapeMismatch, "convention n1 >= n2 violated; swap the wells");
  require_degenerate(states1, states2);
  v1.validate();
  v2.validate();
  const auto n1 = static_cast<Eigen::Index>(states1.size());
  const auto n2 = static_cast<Eigen::Index>(states2.size());
  MultiBlock b;
  b.n1 = static_cast<int>(n1);
  b.n2 = static_cast<int>(n2);
  b.alpha.resize(n1, n1);
  b.beta.resize(n2, n2);
  b.gamma.resize(n1, n2);
  b.delta.resize(n1, n2);
  Eigen::MatrixXd alt(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      b.alpha(i, j) = b.alpha(j, i) =
          matrix_element(states1[i].wavefunction, v2, states1[j].wavefunction, spec);
  for (Eigen::Index i = 0; i < n2; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      b.beta(i, j) = b.beta(j, i) = matrix_element(states2[i].wavefunction, v1, states2[j].wavefunction, spec);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) {
      const auto& k = states1[i].wavefunction;
      const auto& kb = states2[j].wavefunction;
      b.gamma(i, j) = matrix_element(k, v2, kb, spec);
      alt(i, j) = matrix_element(k, v1, kb, spec);
      b.delta(i, j) = inner_product(k, kb, spec);
    }
  b.gamma_mismatch = (alt - b.gamma).cwiseAbs().maxCoeff();
  b.validate();
  return b;
}

MOSolution mo_eigensolve(const MultiBlock& block) {
  block.validate();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block.gamma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  if (!(top > 0.0)) throw Error(ErrorCode::UnresolvedDegeneracy, "Gamma vanishes: no first-order splitting");
  MOSolution s;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < kSingularFloor * top)
      throw Error(ErrorCode::UnresolvedDegeneracy,
                  "Gamma is rank deficient; extra zero modes beyond the n1 - n2 kernel");
    PairedMode m;
    m.lambda = sv(i);
    m.u = svd.matrixU().col(i);
    m.v = svd.matrixV().col(i);
    for (Eigen::Index j = 0; j < sv.size(); ++j)
      if (j != i && std::abs(sv(j) - sv(i)) <= kSingularFloor * top) ++m.multiplicity;
    s.paired.push_back(std::move(m));
  }
  for (Eigen::Index c = sv.size(); c < block.n1; ++c) s.kernel.push_back(KernelMode{svd.matrixU().col(c), {}});
  return s;
}

MultiSandwiches multi_sandwiches(const GreenOperator& g1p, const GreenOperator& g2p, const Potential& v1,
                                 const Potential& v2, const std::vector<BoundState>& states1,
                                 const std::vector<BoundState>& states2) {
  for (const auto& k : states1)
    if (!g1p.excludes_own(k)) throw Error(ErrorCode::InvalidArgument, "g1p must exclude '" + k.label + "'");
  for (const auto& k : states2)
    if (!g2p.excludes_own(k)) throw Error(ErrorCode::InvalidArgument, "g2p must exclude '" + k.label + "'");
  const auto n1 = static_cast<Eigen::Index>(states1.size());
  const auto n2 = static_cast<Eigen::Index>(states2.size());
  MultiSandwiches s;
  s.s2.resize(n1, n1);
  s.s1.resize(n2, n2);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      s.s2(i, j) = s.s2(j, i) =
          green_sandwich(states1[i].wavefunction, v2, g2p, v2, states1[j].wavefunction).total;
  for (Eigen::Index i = 0; i < n2; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      s.s1(i, j) = s.s1(j, i) =
          green_sandwich(states2[i].wavefunction, v1, g1p, v1, states2[j].wavefunction).total;
  return s;
}

MOSolution multi_second_order(const MultiBlock& block, const MOSolution& sol, const MultiSandwiches& s) {
  block.validate();
  if (block.n1 != block.n2) throw Error(ErrorCode::ShapeMismatch, "multi_second_order needs n1 == n2");
  require_shape(s.s2, block.n1, block.n1, "s2");
  require_shape(s.s1, block.n2, block.n2, "s1");
  MOSolution out = sol;
  const Eigen::MatrixXd a = block.alpha + s.s2;
  const Eigen::MatrixXd b = block.beta + s.s1;
  for (auto& m : out.paired) {
    const double cross = m.u.dot(block.delta * m.v);
    m.dE2 = 0.5 * m.u.dot(a * m.u) + 0.5 * m.v.dot(b * m.v) - m.lambda * cross;
  }
  return out;
}

MOSolution kernel_second_order(const MultiBlock& block, const MOSolution& sol, const MultiSandwiches& s) {
  block.validate();
  if (block.n1 <= block.n2) throw Error(ErrorCode::ShapeMismatch, "kernel_second_order needs n1 > n2");
  require_shape(s.s2, block.n1, block.n1, "s2");
  if (static_cast<int>(sol.kernel.size()) != block.n1 - block.n2)
    throw Error(ErrorCode::ShapeMismatch, "solution does not carry n1 - n2 kernel modes");
  Eigen::MatrixXd K(block.n1, static_cast<Eigen::Index>(sol.kernel.size()));
  for (std::size_t j = 0; j < sol.kernel.size(); ++j) K.col(static_cast<Eigen::Index>(j)) = sol.kernel[j].U;
  const Eigen::MatrixXd eff = K.transpose() * (block.alpha + s.s2) * K;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(eff);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "kernel eigensolve failed");

  MOSolution out = sol;
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  out.kernel_basis_nonunique = false;
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    out.kernel[static_cast<std::size_t>(j)] = KernelMode{K * es.eigenvectors().col(j), ev(j)};
    if (j > 0 && ev(j) - ev(j - 1) <= kSingularFloor * std::max(scale, 1e-300)) out.kernel_basis_nonunique = true;
  }
  return out;
}

Eigen::VectorXd block_spectrum(const MultiBlock& block) {
  block.validate();
  const Eigen::Index n = block.n1 + block.n2;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.topRightCorner(block.n1, block.n2) = block.gamma;
  m.bottomLeftCorner(block.n2, block.n1) = block.gamma.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "block eigensolve failed");
  return es.eigenvalues();
}

}  // namespace wellsep
