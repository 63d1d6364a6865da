#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bmland/manifold.hpp"
#include "bmland/objective.hpp"
#include "bmland/rng.hpp"

namespace bmland {

// [I; -I], the n x (n/2) axial position. n must be even and >= 2.
Point axial(Eigen::Index n);

// k x k matrix with unit diagonal and -1/(k - 1.5) off the diagonal. k >= 2.
SymMatrix almost_average(Eigen::Index k);

// Optimal value 4p(1 - (p-1)/(p-1.5)) of the block almost-average instance,
// attained by the all-ones matrix. p >= 2.
double almost_average_opt_value(Eigen::Index p);

// [[M, M], [M, M]] + diag(alpha).
SymMatrix block_cost(const SymMatrix& m, const Vector& alpha);
inline SymMatrix block_cost(const SymMatrix& m) { return block_cost(m, Vector::Zero(2 * m.dim())); }

inline constexpr int kDefaultMaxRetries = 16;
double default_mu(Eigen::Index k);

struct PseudoPdDraw {
  SymMatrix m;
  double epsilon;
  int attempts;
};

// Draws U in R^{k x (k-1)} with N(mu, 1) entries and returns
// M = U U^T - eps I, eps = min_i lambda_min((U U^T)[i]) / 2. Each draw is
// checked for: lambda_min(M[i]) >= eps for every i, nonnegative entries, and
// lambda_min(M) = -eps. Throws ConstructionFailed after max_retries draws.
PseudoPdDraw random_pseudo_pd(Eigen::Index k, double mu, Rng& rng,
                              int max_retries = kDefaultMaxRetries);

struct PaddedInstance {
  SymMatrix a;
  Point y;
};

// A' = [[A, 0], [0, 0]], Y' = [Y; G]. G defaults to rows e_1.
PaddedInstance pad_instance(const SymMatrix& a, const Point& y, Eigen::Index n_prime,
                            const std::optional<RowMatrix>& filler_rows = std::nullopt);

// Serializable description of a block cost instance.
struct InstanceSpec {
  enum class Construction { AlmostAverage, RandomGaussian, Explicit };

  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Construction construction = Construction::AlmostAverage;
  Vector alpha;
  double mu = 0.0;                    // RandomGaussian
  std::uint64_t seed = 0;             // RandomGaussian
  std::optional<Matrix> block;        // Explicit, or the realized random block

  SymMatrix realize() const;
};

std::string to_string(InstanceSpec::Construction c);
InstanceSpec::Construction construction_from_string(const std::string& s);

nlohmann::json to_json(const InstanceSpec& spec);
InstanceSpec instance_from_json(const nlohmann::json& j);

// Whitespace-separated dense matrix, one row per line.
Matrix read_matrix_text(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix_text(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace bmland
