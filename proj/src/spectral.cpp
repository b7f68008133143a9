#include "tilemeasure/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tilemeasure/errors.hpp"
#include "tilemeasure/substitution.hpp"

namespace tilemeasure {
namespace {

using Vec = std::vector<double>;

Vec multiply(const SubstitutionMatrix& a, const Vec& v, bool transpose) {
  const std::size_t n = a.size();
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += static_cast<double>(transpose ? a(j, i) : a(i, j)) * v[j];
    }
    out[i] = s;
  }
  return out;
}

double sum(const Vec& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double inner(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct PowerResult {
  Vec vector;
  double rayleigh = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

PowerResult power_iteration(const SubstitutionMatrix& a, bool transpose, const PerronOptions& opt) {
  const std::size_t n = a.size();
  PowerResult r;
  Vec v(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    Vec w = multiply(a, v, transpose);
    r.rayleigh = sum(w);  // v sums to 1
    for (auto& x : w) x /= r.rayleigh;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(w[i] - v[i]));
    v = std::move(w);
    r.iterations = it;
    if (change <= opt.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.vector = std::move(v);
  return r;
}

double eig_residual(const SubstitutionMatrix& a, const Vec& v, double gamma, bool transpose) {
  const Vec w = multiply(a, v, transpose);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(w[i] - gamma * v[i]));
  return worst;
}

}  // namespace

SubstitutionMatrix::SubstitutionMatrix(std::size_t n, std::vector<std::int64_t> row_major)
    : n_(n), entries_(std::move(row_major)) {
  if (entries_.size() != n * n) throw std::invalid_argument("matrix entry count does not match size");
  for (const auto e : entries_) {
    if (e < 0) throw std::invalid_argument("substitution matrix entries must be non-negative");
  }
}

std::int64_t SubstitutionMatrix::column_sum(std::size_t j) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, j);
  return s;
}

std::int64_t SubstitutionMatrix::total() const {
  return std::accumulate(entries_.begin(), entries_.end(), std::int64_t{0});
}

SubstitutionMatrix build_matrix(const SubstitutionSystem& sys) {
  SubstitutionMatrix a(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j) {
    for (const auto& c : sys.rule(j)) ++a(c.child, j);
  }
  return a;
}

std::optional<unsigned> primitivity_exponent(const SubstitutionMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return std::nullopt;
  const std::size_t bound = n * n - 2 * n + 2;
  std::vector<char> base(n * n), power(n * n);
  for (std::size_t i = 0; i < n * n; ++i) base[i] = a(i / n, i % n) > 0;
  power = base;
  for (std::size_t m = 1; m <= bound; ++m) {
    if (std::all_of(power.begin(), power.end(), [](char c) { return c != 0; })) {
      return static_cast<unsigned>(m);
    }
    std::vector<char> next(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!power[i * n + k]) continue;
        for (std::size_t j = 0; j < n; ++j) next[i * n + j] |= base[k * n + j];
      }
    }
    power = std::move(next);
  }
  return std::nullopt;
}

SpectralData perron(const SubstitutionMatrix& a, double lambda, const PerronOptions& options) {
  if (!primitivity_exponent(a)) throw SpectralError("substitution matrix is not primitive");

  const PowerResult right = power_iteration(a, false, options);
  const PowerResult left = power_iteration(a, true, options);
  SpectralData d;
  d.v_right = right.vector;
  d.v_left = left.vector;
  d.gamma = sum(multiply(a, d.v_right, false)) / sum(d.v_right);

  const double sl = sum(d.v_left);
  for (auto& x : d.v_left) x /= sl;
  const double scale = 1.0 / inner(d.v_left, d.v_right);
  for (auto& x : d.v_right) x *= scale;

  d.residuals.eig_left = eig_residual(a, d.v_left, d.gamma, true);
  d.residuals.eig_right = eig_residual(a, d.v_right, d.gamma, false);
  d.residuals.biorth = std::abs(inner(d.v_left, d.v_right) - 1.0);
  d.residuals.lambda = std::abs(d.gamma - lambda * lambda);
  d.residuals.iterations = std::max(left.iterations, right.iterations);

  if (!left.converged || !right.converged) {
    std::ostringstream os;
    os << "power iteration did not converge after " << d.residuals.iterations
       << " iterations (left residual " << d.residuals.eig_left << ", right residual "
       << d.residuals.eig_right << ")";
    throw SpectralError(os.str());
  }
  return d;
}

SpectralData spectral_data(const SubstitutionSystem& sys) {
  SpectralData d = perron(build_matrix(sys), sys.lambda());
  for (const auto& p : sys.prototiles()) d.vertex_counts.push_back(static_cast<std::int64_t>(p.shape.size()));
  return d;
}

std::vector<BigInt> type_counts(const SubstitutionMatrix& a, std::size_t k) {
  const std::size_t n = a.size();
  std::vector<BigInt> v(n, BigInt(1));
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<BigInt> next(n, BigInt(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (a(i, j) != 0) next[i] += a(i, j) * v[j];
      }
    }
    v = std::move(next);
  }
  return v;
}

BigInt count_tiles(const SubstitutionMatrix& a, std::size_t k) {
  BigInt total = 0;
  for (const auto& c : type_counts(a, k)) total += c;
  return total;
}

BigInt count_subtiles(const SubstitutionMatrix& a, std::size_t k, std::size_t s) {
  const std::size_t n = a.size();
  if (s >= n) throw std::invalid_argument("prototile index out of range");
  // Row vector 1^T A^k.
  std::vector<BigInt> row(n, BigInt(1));
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<BigInt> next(n, BigInt(0));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (a(i, j) != 0) next[j] += row[i] * a(i, j);
      }
    }
    row = std::move(next);
  }
  return row[s];
}

BigInt count_vertex_incidences(const SubstitutionMatrix& a, const std::vector<std::int64_t>& vcount,
                               std::size_t k) {
  if (vcount.size() != a.size()) throw std::invalid_argument("vertex count vector has the wrong size");
  const auto counts = type_counts(a, k);
  BigInt total = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) total += vcount[j] * counts[j];
  return total;
}

double projection_defect(const SubstitutionMatrix& a, const SpectralData& spectral, std::size_t k) {
  const std::size_t n = a.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<double> next(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        const double mil = m[i * n + l];
        if (mil == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          next[i * n + j] += mil * (static_cast<double>(a(l, j)) / spectral.gamma);
        }
      }
    }
    m = std::move(next);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += std::abs(m[i * n + j] - spectral.v_right[i] * spectral.v_left[j]);
    }
    worst = std::max(worst, row);
  }
  return worst;
}

}  // namespace tilemeasure
