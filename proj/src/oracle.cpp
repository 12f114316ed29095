#include "bjns/oracle.hpp"

#include <string>

namespace bjns {

Eigen::MatrixXd dense_B(const Eigen::MatrixXd& S) {
  const int p = static_cast<int>(S.rows());
  const int E = edge_count(p);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(E, E);
  for (int r = 0; r < E; ++r) {
    const Edge ab = edge_at(r, p);
    for (int c = 0; c < E; ++c) {
      const Edge cd = edge_at(c, p);
      if (r == c) {
        B(r, c) = S(ab.i, ab.i) + S(ab.j, ab.j);
        continue;
      }
      // Shared index between {a,b} and {c,d}, if any.
      int shared = -1;
      if (ab.i == cd.i || ab.i == cd.j) shared = ab.i;
      if (ab.j == cd.i || ab.j == cd.j) shared = ab.j;
      if (shared < 0) continue;
      const int x = (ab.i == shared) ? ab.j : ab.i;
      const int y = (cd.i == shared) ? cd.j : cd.i;
      B(r, c) = S(x, y);
    }
  }
  return B;
}

Eigen::VectorXd DenseQuadForm::theta_vector(const ThetaState& theta) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<long>(E) * C);
  for (int e = 0; e < E; ++e) {
    const EdgeCoefficients& coef = theta.edge(e);
    if (!coef.absent()) v(coef.active_component * E + e) = coef.value;
  }
  return v;
}

Eigen::VectorXd DenseQuadForm::delta_vector(const DiagState& delta) const {
  Eigen::VectorXd v(static_cast<long>(K) * p);
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < p; ++i) v(delta_index(k, i)) = delta.get(k, i);
  return v;
}

double DenseQuadForm::quadratic(const Eigen::VectorXd& theta_vec,
                                const Eigen::VectorXd& delta_vec) const {
  return theta_vec.dot(upsilon * theta_vec) +
         2.0 * theta_vec.dot(A * delta_vec) + delta_vec.dot(D * delta_vec);
}

DenseQuadForm materialize_oracle(const GroupStats& stats, const ModelSpec& spec,
                                 const DiagState& delta,
                                 std::optional<Eigen::VectorXd> group_weights) {
  if (spec.p > 50 || spec.n_components() > 15)
    throw InvalidArgument(
        "materialize_oracle: test-scale guard exceeded (p <= 50 and at most "
        "15 components), got p=" + std::to_string(spec.p) + ", C=" +
        std::to_string(spec.n_components()));

  DenseQuadForm out;
  out.p = spec.p;
  out.E = edge_count(spec.p);
  out.C = spec.n_components();
  out.K = spec.K;

  Eigen::VectorXd w = group_weights.value_or(Eigen::VectorXd::Ones(spec.K));
  if (w.size() != spec.K)
    throw InvalidArgument("materialize_oracle: weight vector size mismatch");

  std::vector<Eigen::MatrixXd> B(spec.K);
  for (int k = 0; k < spec.K; ++k) B[k] = w(k) * dense_B(stats.S[k]);

  const long dim = static_cast<long>(out.E) * out.C;
  out.upsilon = Eigen::MatrixXd::Zero(dim, dim);
  for (int r = 0; r < out.C; ++r) {
    for (int c = 0; c < out.C; ++c) {
      const std::uint32_t shared =
          spec.components[r].mask() & spec.components[c].mask();
      if (shared == 0) continue;
      for (int k : GroupSet(shared).members())
        out.upsilon.block(static_cast<long>(r) * out.E,
                          static_cast<long>(c) * out.E, out.E, out.E) +=
            B[k - 1];
    }
  }

  out.A = Eigen::MatrixXd::Zero(dim, static_cast<long>(spec.K) * spec.p);
  for (int r = 0; r < out.C; ++r) {
    for (int k : spec.components[r].members()) {
      const Eigen::MatrixXd& S = stats.S[k - 1];
      for (int e = 0; e < out.E; ++e) {
        const Edge ij = edge_at(e, spec.p);
        const double sij = w(k - 1) * S(ij.i, ij.j);
        out.A(static_cast<long>(r) * out.E + e, out.delta_index(k - 1, ij.i)) = sij;
        out.A(static_cast<long>(r) * out.E + e, out.delta_index(k - 1, ij.j)) = sij;
      }
    }
  }

  out.D = Eigen::MatrixXd::Zero(static_cast<long>(spec.K) * spec.p,
                                static_cast<long>(spec.K) * spec.p);
  for (int k = 0; k < spec.K; ++k)
    for (int i = 0; i < spec.p; ++i)
      out.D(out.delta_index(k, i), out.delta_index(k, i)) =
          w(k) * stats.S[k](i, i);

  out.a = out.A * out.delta_vector(delta);
  return out;
}

}  // namespace bjns
