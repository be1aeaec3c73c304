#include "cwc/preview.hpp"

#include <limits>
#include <stdexcept>

namespace cwc {

ComState integrate(const ComState& x, const Vec3& u, double dt)
{
  return {x.p + dt * x.v + 0.5 * dt * dt * u, x.v + dt * u};
}

std::vector<ComState> propagate(const ComState& x0, const std::vector<Vec3>& u, double dt)
{
  if (!(dt > 0.)) throw std::invalid_argument("propagate: dt must be positive");
  std::vector<ComState> out{x0};
  out.reserve(u.size() + 1);
  for (const auto& uk : u) out.push_back(integrate(out.back(), uk, dt));
  return out;
}

Mat6 transition_matrix(int k, double dt)
{
  Mat6 phi = Mat6::Identity();
  phi.topRightCorner<3, 3>() = k * dt * Mat3::Identity();
  return phi;
}

Eigen::MatrixXd control_matrix(int k, int N, double dt)
{
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(6, 3 * N);
  for (int i = 0; i < k; ++i) {
    psi.block<3, 3>(0, 3 * i) = dt * dt * (k - i - 0.5) * Mat3::Identity();
    psi.block<3, 3>(3, 3 * i) = dt * Mat3::Identity();
  }
  return psi;
}

void validate(const PreviewProblem& pp)
{
  if (pp.N < 1) throw std::invalid_argument("preview: N must be at least 1");
  if (!(pp.dt > 0.)) throw std::invalid_argument("preview: dt must be positive");
  int next = 0;
  for (const auto& s : pp.segments) {
    if (s.begin != next || s.end <= s.begin) throw std::invalid_argument("preview: segments must partition [0, N)");
    if (s.cone.rows() > 0 && s.cone.cols() != 3) throw std::invalid_argument("preview: cone rows must be 3 wide");
    if (s.tube.rows() > 0 && s.tube.dim() != 3) throw std::invalid_argument("preview: tube rows must be 3 wide");
    next = s.end;
  }
  if (!pp.segments.empty() && next != pp.N) throw std::invalid_argument("preview: segments must partition [0, N)");
}

PreviewQp assemble_qp(const PreviewProblem& pp)
{
  validate(pp);
  const int N = pp.N;
  const int n = 3 * N;
  const Vec6 x0 = pp.x0.stacked();

  PreviewQp out;
  const Eigen::MatrixXd psi_N = control_matrix(N, N, pp.dt);
  const Vec6 free_N = transition_matrix(N, pp.dt) * x0 - pp.xT.stacked();
  out.qp.H = 2. * (psi_N.transpose() * psi_N + pp.eps * Eigen::MatrixXd::Identity(n, n));
  out.qp.f = 2. * psi_N.transpose() * free_N;

  for (const auto& s : pp.segments) {
    out.cone_rows += (s.end - s.begin) * static_cast<int>(s.cone.rows());
    out.tube_rows += (s.end - s.begin) * s.tube.rows();
  }
  out.qp.A_ub = Eigen::MatrixXd::Zero(out.cone_rows + out.tube_rows, n);
  out.qp.b_ub.resize(out.cone_rows + out.tube_rows);
  int row = 0;
  for (const auto& s : pp.segments) {
    const Eigen::VectorXd cg = s.cone * pp.g;
    for (int k = s.begin; k < s.end; ++k) {
      const int L = static_cast<int>(s.cone.rows());
      out.qp.A_ub.block(row, 3 * k, L, 3) = s.cone;
      out.qp.b_ub.segment(row, L) = cg;
      row += L;
    }
  }
  for (const auto& s : pp.segments) {
    for (int k = s.begin; k < s.end; ++k) {
      const int m = s.tube.rows();
      const Eigen::MatrixXd psi = control_matrix(k + 1, N, pp.dt).topRows(3);
      const Vec3 free_p = (transition_matrix(k + 1, pp.dt) * x0).head<3>();
      out.qp.A_ub.middleRows(row, m) = s.tube.A * psi;
      out.qp.b_ub.segment(row, m) = s.tube.b - s.tube.A * free_p;
      row += m;
    }
  }
  out.qp.A_eq.resize(0, n);
  out.qp.b_eq.resize(0);
  return out;
}

PreviewSolution solve_preview(const PreviewProblem& pp, const QpOptions& options)
{
  const PreviewQp pq = assemble_qp(pp);
  PreviewSolution sol;
  sol.cone_rows = pq.cone_rows;
  sol.tube_rows = pq.tube_rows;
  const QpResult r = qp_solve(pq.qp, options);
  sol.status = r.status;
  if (!r.optimal()) return sol;

  sol.kkt_residual = kkt_residual(pq.qp, r);
  sol.min_slack = std::numeric_limits<double>::infinity();
  if (pq.qp.A_ub.rows() > 0) {
    const Eigen::VectorXd slack = pq.qp.b_ub - pq.qp.A_ub * r.x;
    for (Eigen::Index i = 0; i < slack.size(); ++i) {
      sol.min_slack = std::min(sol.min_slack, slack(i) / std::max(pq.qp.A_ub.row(i).norm(), 1e-300));
    }
  }
  for (int k = 0; k < pp.N; ++k) sol.controls.u.push_back(r.x.segment<3>(3 * k));
  auto states = propagate(pp.x0, sol.controls.u, pp.dt);
  sol.controls.states.assign(states.begin() + 1, states.end());
  return sol;
}

}  // namespace cwc
