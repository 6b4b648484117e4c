#include "specid/dmd.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "csv.hpp"
#include "specid/error.hpp"

namespace specid {

std::string to_string(EmbeddingLayout layout) {
  return layout == EmbeddingLayout::pooled ? "pooled" : "stacked";
}

std::string to_string(Centering centering) {
  switch (centering) {
    case Centering::none: return "none";
    case Centering::final_snapshot: return "final_snapshot";
    case Centering::equilibrium: return "equilibrium";
  }
  return "none";
}

EmbeddingLayout parse_layout(const std::string& s) {
  if (s == "pooled") return EmbeddingLayout::pooled;
  if (s == "stacked") return EmbeddingLayout::stacked;
  throw InvalidArgument("unknown embedding layout '" + s + "' (pooled|stacked)");
}

Centering parse_centering(const std::string& s) {
  if (s == "none") return Centering::none;
  if (s == "final_snapshot") return Centering::final_snapshot;
  if (s == "equilibrium") return Centering::equilibrium;
  throw InvalidArgument("unknown centering '" + s + "' (none|final_snapshot|equilibrium)");
}

DelayEmbedding hankel_embed(const std::vector<Eigen::MatrixXd>& series, int delays,
                            EmbeddingLayout layout) {
  if (series.empty()) throw InvalidArgument("hankel_embed: no series");
  if (delays < 1) throw InvalidArgument("hankel_embed: delays must be >= 1");
  const Eigen::Index p = series.front().rows();
  if (p == 0) throw InvalidArgument("hankel_embed: series has no signals");
  Eigen::Index total_windows = 0;
  for (const auto& s : series) {
    if (s.rows() != p) throw InvalidArgument("hankel_embed: series differ in signal count");
    // K + 1 samples give K - c + 1 (X, Y) window pairs.
    if (s.cols() <= delays) {
      throw InvalidArgument("hankel_embed: window of " + std::to_string(delays) +
                            " delays does not fit a series of " + std::to_string(s.cols()) +
                            " samples");
    }
    total_windows += s.cols() - delays;
  }

  DelayEmbedding emb;
  emb.delays = delays;
  emb.layout = layout;
  const Eigen::Index c = delays;

  if (layout == EmbeddingLayout::pooled) {
    emb.X.resize(p * c, total_windows);
    emb.Y.resize(p * c, total_windows);
    Eigen::Index col = 0;
    for (const auto& s : series) {
      const Eigen::Index windows = s.cols() - c;
      for (Eigen::Index k = 0; k < windows; ++k, ++col) {
        for (Eigen::Index d = 0; d < c; ++d) {
          emb.X.block(d * p, col, p, 1) = s.col(k + d);
          emb.Y.block(d * p, col, p, 1) = s.col(k + d + 1);
        }
      }
    }
    return emb;
  }

  const Eigen::Index len = series.front().cols();
  for (const auto& s : series) {
    if (s.cols() != len) {
      throw InvalidArgument("hankel_embed: stacked layout needs equal-length series");
    }
  }
  const Eigen::Index q = static_cast<Eigen::Index>(series.size());
  const Eigen::Index windows = len - c;
  emb.X.resize(q * p * c, windows);
  emb.Y.resize(q * p * c, windows);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index k = 0; k < windows; ++k) {
      for (Eigen::Index d = 0; d < c; ++d) {
        const Eigen::Index row = (j * c + d) * p;
        emb.X.block(row, k, p, 1) = series[j].col(k + d);
        emb.Y.block(row, k, p, 1) = series[j].col(k + d + 1);
      }
    }
  }
  return emb;
}

std::vector<Eigen::MatrixXd> center_series(const std::vector<Eigen::MatrixXd>& series,
                                           Centering centering,
                                           const Eigen::VectorXd& reference) {
  std::vector<Eigen::MatrixXd> out = series;
  for (auto& s : out) {
    switch (centering) {
      case Centering::none:
        break;
      case Centering::final_snapshot: {
        const Eigen::VectorXd last = s.col(s.cols() - 1);
        s.colwise() -= last;
        break;
      }
      case Centering::equilibrium:
        if (reference.size() != s.rows()) {
          throw InvalidArgument("center_series: reference needs one value per signal");
        }
        s.colwise() -= reference;
        break;
    }
  }
  return out;
}

RitzSpectrum dmd_eigs(const DelayEmbedding& emb, double svd_tol) {
  if (emb.X.rows() != emb.Y.rows() || emb.X.cols() != emb.Y.cols() || emb.X.size() == 0) {
    throw InvalidArgument("dmd_eigs: X and Y must be nonempty and of equal shape");
  }
  if (!emb.X.allFinite() || !emb.Y.allFinite()) {
    throw InvalidArgument("dmd_eigs: non-finite data");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(emb.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) {
    throw DegenerateData("dmd_eigs: data matrix is zero");
  }
  int rank = 0;
  while (rank < s.size() && s(rank) > svd_tol * s(0)) ++rank;
  if (rank == 0) throw DegenerateData("dmd_eigs: all singular values below threshold");

  const Eigen::MatrixXd U = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXd V = svd.matrixV().leftCols(rank);
  const Eigen::VectorXd inv_s = s.head(rank).cwiseInverse();
  const Eigen::MatrixXd reduced = U.transpose() * emb.Y * V * inv_s.asDiagonal();

  Eigen::EigenSolver<Eigen::MatrixXd> eig(reduced, false);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("dmd_eigs: eigensolver failed on the reduced operator (rank " +
                           std::to_string(rank) + ")");
  }
  RitzSpectrum out;
  out.svd_rank = rank;
  out.discrete.assign(eig.eigenvalues().begin(), eig.eigenvalues().end());
  sort_complex(out.discrete);
  return out;
}

ComplexList to_continuous(const ComplexList& discrete, double dt,
                          std::vector<std::string>* warnings) {
  if (!(dt > 0.0)) throw InvalidArgument("to_continuous: dt must be positive");
  ComplexList out;
  out.reserve(discrete.size());
  for (const auto& z : discrete) {
    if (std::abs(z) < 1e-12) {
      if (warnings) {
        warnings->push_back("dropped discrete eigenvalue with modulus " +
                            detail::format_double(std::abs(z)) + " before the log map");
      }
      continue;
    }
    out.push_back(std::log(z) / dt);
  }
  return out;
}

RitzSpectrum estimate_spectrum(const DelayEmbedding& emb, double dt, double svd_tol) {
  RitzSpectrum out = dmd_eigs(emb, svd_tol);
  out.continuous = to_continuous(out.discrete, dt, &out.warnings);
  for (const auto& mu : out.continuous) {
    if (std::abs(mu.imag()) * dt >= 0.95 * std::numbers::pi) {
      out.warnings.push_back("possible aliasing: |Im(mu)| dt = " +
                             detail::format_double(std::abs(mu.imag()) * dt) +
                             " is close to pi");
    }
  }
  return out;
}

void write_complex_csv(std::ostream& out, const ComplexList& values) {
  out << "re,im\n";
  for (const auto& z : values) {
    out << detail::format_double(z.real()) << ',' << detail::format_double(z.imag()) << '\n';
  }
}

ComplexList read_complex_csv(std::istream& in) {
  ComplexList out;
  std::string line;
  while (detail::next_data_line(in, line)) {
    if (detail::trim(line).rfind("re", 0) == 0) continue;
    auto fields = detail::split(line);
    if (fields.size() != 2) throw IoError("complex csv: expected `re,im`, got '" + line + "'");
    out.emplace_back(detail::parse_double(fields[0]), detail::parse_double(fields[1]));
  }
  return out;
}

}  // namespace specid
