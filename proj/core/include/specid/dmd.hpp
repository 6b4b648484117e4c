#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specid/types.hpp"

namespace specid {

enum class EmbeddingLayout {
  // Windows of every trajectory concatenated column-wise: p*c rows.
  pooled,
  // Trajectories stacked as extra observables: q*p*c rows, one column per
  // window start.
  stacked,
};

enum class Centering {
  none,
  final_snapshot,  // subtract each trajectory's last sample
  equilibrium,     // subtract a known reference value per measured signal
};

std::string to_string(EmbeddingLayout layout);
std::string to_string(Centering centering);
EmbeddingLayout parse_layout(const std::string& s);
Centering parse_centering(const std::string& s);

/// Paired delay-embedded data: column j of Y is column j of X advanced by dt.
struct DelayEmbedding {
  int delays = 1;
  EmbeddingLayout layout = EmbeddingLayout::pooled;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
};

/// Each series is p x (K+1). Windows stack f(k dt), ..., f((k+c-1) dt).
DelayEmbedding hankel_embed(const std::vector<Eigen::MatrixXd>& series, int delays,
                            EmbeddingLayout layout = EmbeddingLayout::pooled);

/// Returns centered copies of the series. `reference` holds one value per
/// measured signal and is only used by Centering::equilibrium.
std::vector<Eigen::MatrixXd> center_series(const std::vector<Eigen::MatrixXd>& series,
                                           Centering centering,
                                           const Eigen::VectorXd& reference = {});

struct RitzSpectrum {
  ComplexList discrete;
  ComplexList continuous;
  int svd_rank = 0;
  std::vector<std::string> warnings;
};

/// Exact DMD: X = U S V^T truncated at singular values > svd_tol * s_max,
/// eigenvalues of U^T Y V S^{-1}. Fills `discrete` and `svd_rank` only.
RitzSpectrum dmd_eigs(const DelayEmbedding& emb, double svd_tol = 1e-10);

/// Principal log(z) / dt. Values with |z| < 1e-12 are dropped with a warning.
ComplexList to_continuous(const ComplexList& discrete, double dt,
                          std::vector<std::string>* warnings = nullptr);

/// dmd_eigs followed by to_continuous plus the aliasing guard.
RitzSpectrum estimate_spectrum(const DelayEmbedding& emb, double dt, double svd_tol);

// `re,im` CSV used for every eigenvalue list.
void write_complex_csv(std::ostream& out, const ComplexList& values);
ComplexList read_complex_csv(std::istream& in);

}  // namespace specid
