#include "bmland/instances.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bmland/linalg.hpp"

namespace bmland {

Point axial(Eigen::Index n) {
  if (n < 2 || n % 2 != 0) throw InvalidDimensions("axial: n must be even and >= 2");
  const Eigen::Index half = n / 2;
  RowMatrix y(n, half);
  y.topRows(half).setIdentity();
  y.bottomRows(half) = -RowMatrix::Identity(half, half);
  return Point(std::move(y));
}

SymMatrix almost_average(Eigen::Index k) {
  if (k < 2) throw InvalidDimensions("almost_average: k must be >= 2");
  const double off = -1.0 / (static_cast<double>(k) - 1.5);
  Matrix m = Matrix::Constant(k, k, off);
  m.diagonal().setOnes();
  return SymMatrix(std::move(m));
}

double almost_average_opt_value(Eigen::Index p) {
  if (p < 2) throw InvalidDimensions("almost_average_opt_value: p must be >= 2");
  const double pd = static_cast<double>(p);
  return 4.0 * pd * (1.0 - (pd - 1.0) / (pd - 1.5));
}

SymMatrix block_cost(const SymMatrix& m, const Vector& alpha) {
  const Eigen::Index k = m.dim();
  if (alpha.size() != 2 * k) {
    throw InvalidDimensions("block_cost: alpha has length " + std::to_string(alpha.size()) +
                            ", expected " + std::to_string(2 * k));
  }
  Matrix a(2 * k, 2 * k);
  a << m.matrix(), m.matrix(), m.matrix(), m.matrix();
  a.diagonal() += alpha;
  return SymMatrix(std::move(a));
}

double default_mu(Eigen::Index k) {
  return 2.0 * std::sqrt(std::log(static_cast<double>(std::max<Eigen::Index>(k, 2))));
}

PseudoPdDraw random_pseudo_pd(Eigen::Index k, double mu, Rng& rng, int max_retries) {
  if (k < 2) throw InvalidDimensions("random_pseudo_pd: k must be >= 2");
  if (!(mu > 0.0)) throw InvalidInput("random_pseudo_pd: mu must be positive");
  if (max_retries < 1) throw InvalidInput("random_pseudo_pd: max_retries must be >= 1");

  double last_min_sub = std::numeric_limits<double>::quiet_NaN();
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    Matrix u(k, k - 1);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k - 1; ++j) u(i, j) = rng.normal(mu, 1.0);

    // lambda_min((U U^T)[i]) = sigma_min(U with row i deleted)^2.
    double min_sub = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      Matrix ui(k - 1, k - 1);
      ui.topRows(i) = u.topRows(i);
      ui.bottomRows(k - 1 - i) = u.bottomRows(k - 1 - i);
      const Vector sv = Eigen::JacobiSVD<Matrix>(ui).singularValues();
      min_sub = std::min(min_sub, sv(sv.size() - 1) * sv(sv.size() - 1));
    }
    last_min_sub = min_sub;
    const double eps = 0.5 * min_sub;
    if (!(eps > 0.0)) continue;

    Matrix m = u * u.transpose();
    m = 0.5 * (m + m.transpose()).eval();
    m.diagonal().array() -= eps;

    bool ok = (m.array() >= 0.0).all();
    for (Eigen::Index i = 0; ok && i < k; ++i) {
      ok = min_eigenvalue(remove_index(m, i)) >= eps - 1e-9;
    }
    ok = ok && std::abs(min_eigenvalue(m) + eps) <= 1e-9;
    if (ok) return {SymMatrix(std::move(m)), eps, attempt};
  }
  throw ConstructionFailed("random_pseudo_pd: no valid draw after " + std::to_string(max_retries) +
                               " attempts",
                           max_retries, last_min_sub);
}

PaddedInstance pad_instance(const SymMatrix& a, const Point& y, Eigen::Index n_prime,
                            const std::optional<RowMatrix>& filler_rows) {
  require_matching(a, y, "pad_instance");
  const Eigen::Index n = a.dim();
  const Eigen::Index p = y.p();
  if (n_prime < n) throw InvalidDimensions("pad_instance: n_prime must be >= n");
  const Eigen::Index extra = n_prime - n;

  RowMatrix filler;
  if (filler_rows) {
    filler = *filler_rows;
    if (filler.rows() != extra || filler.cols() != p) {
      throw InvalidDimensions("pad_instance: filler rows must be (n_prime - n) x p");
    }
    if (extra > 0 && !check_point(filler).ok) throw InvalidInput("pad_instance: filler rows must be unit norm");
  } else {
    filler = RowMatrix::Zero(extra, p);
    if (extra > 0) filler.col(0).setOnes();
  }

  Matrix ap = Matrix::Zero(n_prime, n_prime);
  ap.topLeftCorner(n, n) = a.matrix();
  RowMatrix yp(n_prime, p);
  yp.topRows(n) = y.matrix();
  yp.bottomRows(extra) = filler;
  return {SymMatrix(std::move(ap)), Point(std::move(yp))};
}

std::string to_string(InstanceSpec::Construction c) {
  switch (c) {
    case InstanceSpec::Construction::AlmostAverage: return "almost-average";
    case InstanceSpec::Construction::RandomGaussian: return "random";
    case InstanceSpec::Construction::Explicit: return "explicit";
  }
  return "unknown";
}

InstanceSpec::Construction construction_from_string(const std::string& s) {
  if (s == "almost-average") return InstanceSpec::Construction::AlmostAverage;
  if (s == "random") return InstanceSpec::Construction::RandomGaussian;
  if (s == "explicit") return InstanceSpec::Construction::Explicit;
  throw InvalidInput("unknown construction '" + s + "'");
}

SymMatrix InstanceSpec::realize() const {
  if (n < 4 || n % 2 != 0) throw InvalidDimensions("InstanceSpec: n must be even and >= 4");
  const Eigen::Index k = n / 2;
  const Vector shift = alpha.size() == 0 ? Vector::Zero(n) : alpha;
  if (block) {
    if (block->rows() != k || block->cols() != k) throw InvalidDimensions("InstanceSpec: block must be (n/2) x (n/2)");
    return block_cost(SymMatrix(*block), shift);
  }
  switch (construction) {
    case Construction::AlmostAverage: return block_cost(almost_average(k), shift);
    case Construction::RandomGaussian: {
      Rng rng(seed);
      return block_cost(random_pseudo_pd(k, mu > 0.0 ? mu : default_mu(k), rng).m, shift);
    }
    case Construction::Explicit: break;
  }
  throw InvalidInput("InstanceSpec: explicit construction requires a block");
}

nlohmann::json to_json(const InstanceSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["p"] = spec.p;
  j["construction"] = to_string(spec.construction);
  const Vector alpha = spec.alpha.size() == 0 ? Vector::Zero(spec.n) : spec.alpha;
  j["alpha"] = std::vector<double>(alpha.data(), alpha.data() + alpha.size());
  if (spec.block) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < spec.block->rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < spec.block->cols(); ++c) row.push_back((*spec.block)(i, c));
      rows.push_back(std::move(row));
    }
    j["block"] = std::move(rows);
  }
  if (spec.construction == InstanceSpec::Construction::RandomGaussian) {
    j["seed"] = spec.seed;
    j["mu"] = spec.mu;
  }
  return j;
}

InstanceSpec instance_from_json(const nlohmann::json& j) {
  try {
    InstanceSpec spec;
    spec.n = j.at("n").get<Eigen::Index>();
    spec.p = j.at("p").get<Eigen::Index>();
    spec.construction = construction_from_string(j.at("construction").get<std::string>());
    if (j.contains("alpha")) {
      const auto alpha = j.at("alpha").get<std::vector<double>>();
      spec.alpha = Eigen::Map<const Vector>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
      if (spec.alpha.size() != spec.n) throw InvalidDimensions("instance JSON: alpha must have length n");
    } else {
      spec.alpha = Vector::Zero(spec.n);
    }
    if (j.contains("block")) {
      const auto rows = j.at("block").get<std::vector<std::vector<double>>>();
      Matrix b(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != b.cols()) throw InvalidDimensions("instance JSON: ragged block");
        for (std::size_t c = 0; c < rows[i].size(); ++c) b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
      }
      spec.block = std::move(b);
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mu")) spec.mu = j.at("mu").get<double>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("instance JSON: ") + e.what());
  }
}

Matrix read_matrix_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw InvalidInput("matrix text: bad number '" + tok + "'");
      } catch (const std::logic_error&) {
        throw InvalidInput("matrix text: bad number '" + tok + "'");
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw InvalidDimensions("matrix text: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidDimensions("matrix text: no rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_matrix_text(in);
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m(i, c);
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_matrix_text(out, m);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace bmland
