#include "copent/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "copent/error.hpp"
#include "copent/rng.hpp"
#include "json.hpp"

namespace copent {

double normal_quantile(double p) {
  // Acklam's coefficients.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (!(p > 0.0 && p < 1.0)) throw Error("normal quantile: p must lie in (0, 1)");
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace copent

namespace copent::synth {

namespace {

constexpr double kPsdTolerance = 1e-10;

double normal(SplitMix64& rng) { return normal_quantile(rng.uniform_open()); }

double uniform_pi(SplitMix64& rng) { return std::numbers::pi * (2.0 * rng.uniform() - 1.0); }

std::vector<Column> empty_columns(const std::vector<std::string>& names, std::size_t n) {
  std::vector<Column> cols;
  for (const auto& name : names) cols.push_back({name, std::vector<double>(n), std::vector<bool>(n, false)});
  return cols;
}

void check_rho(double rho, std::string_view what) {
  if (!(std::abs(rho) < 1.0)) throw Error(std::string(what) + " must satisfy |rho| < 1");
}

void check_groups(const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) throw Error("synth: need at least one group");
  for (std::size_t s : sizes)
    if (s < 2) throw Error("synth: group sizes must be >= 2");
}

Dataset gaussian(const Matrix& correlation, std::vector<std::string> names, std::size_t n, std::uint64_t seed) {
  const Matrix l = cholesky_psd(correlation);
  const std::size_t d = correlation.rows;
  auto cols = empty_columns(names, n);
  SplitMix64 rng(seed);
  std::vector<double> z(d);
  for (std::size_t t = 0; t < n; ++t) {
    for (auto& v : z) v = normal(rng);
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) s += l(i, j) * z[j];
      cols[i].values[t] = s;
    }
  }
  return Dataset(std::move(cols), n);
}

std::vector<std::string> group_names(const std::vector<std::size_t>& sizes) {
  std::vector<std::string> names;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    for (std::size_t m = 0; m < sizes[g]; ++m)
      names.push_back("G" + std::to_string(g + 1) + "_" + std::to_string(m + 1));
  return names;
}

struct Generator {
  std::size_t n;
  std::uint64_t seed;

  Dataset operator()(const GaussianPair& k) const {
    check_rho(k.rho, "gaussian_pair rho");
    Matrix c(2, 2, k.rho);
    c(0, 0) = c(1, 1) = 1.0;
    return gaussian(c, {"X", "Y"}, n, seed);
  }

  Dataset operator()(const GaussianMatrix& k) const {
    const Matrix& c = k.correlation;
    if (c.rows == 0 || c.rows != c.cols) throw Error("gaussian_matrix: correlation must be square and non-empty");
    for (std::size_t i = 0; i < c.rows; ++i) {
      if (std::abs(c(i, i) - 1.0) > kPsdTolerance) throw Error("gaussian_matrix: diagonal must be 1");
      for (std::size_t j = 0; j < c.cols; ++j)
        if (c(i, j) != c(j, i)) throw Error("gaussian_matrix: correlation must be symmetric");
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < c.rows; ++i) names.push_back("V" + std::to_string(i + 1));
    return gaussian(c, std::move(names), n, seed);
  }

  Dataset operator()(const Functional& k) const {
    if (!(k.noise_sd >= 0.0)) throw Error("functional: noise_sd must be >= 0");
    auto cols = empty_columns({"X", "Y"}, n);
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < n; ++t) {
      double x = 0.0, y = 0.0;
      switch (k.transform) {
        case Transform::cube: x = normal(rng); y = x * x * x; break;
        case Transform::exp: x = normal(rng); y = std::exp(x); break;
        case Transform::sin: x = uniform_pi(rng); y = std::sin(x); break;
      }
      if (k.noise_sd > 0.0) y += k.noise_sd * normal(rng);
      cols[0].values[t] = x;
      cols[1].values[t] = y;
    }
    return Dataset(std::move(cols), n);
  }

  Dataset operator()(const Blocks& k) const {
    check_groups(k.group_sizes);
    return gaussian(block_correlation(k.group_sizes, k.within_rho, k.between_rho), group_names(k.group_sizes), n,
                    seed);
  }

  Dataset operator()(const NonlinearBlocks& k) const {
    check_groups(k.group_sizes);
    if (!(k.noise_sd >= 0.0)) throw Error("nonlinear_blocks: noise_sd must be >= 0");
    auto cols = empty_columns(group_names(k.group_sizes), n);
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t c = 0;
      for (std::size_t size : k.group_sizes) {
        const double x = uniform_pi(rng);
        cols[c++].values[t] = x;
        for (std::size_t m = 1; m < size; ++m) {
          double y = std::cos(static_cast<double>(m) * x);
          if (k.noise_sd > 0.0) y += k.noise_sd * normal(rng);
          cols[c++].values[t] = y;
        }
      }
    }
    return Dataset(std::move(cols), n);
  }

  Dataset operator()(const Uniform& k) const {
    if (k.n_cols == 0) throw Error("uniform: need at least one column");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k.n_cols; ++i) names.push_back("U" + std::to_string(i + 1));
    auto cols = empty_columns(names, n);
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < n; ++t)
      for (auto& col : cols) col.values[t] = rng.uniform();
    return Dataset(std::move(cols), n);
  }
};

}  // namespace

Matrix cholesky_psd(const Matrix& a) {
  const std::size_t n = a.rows;
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t p = 0; p < j; ++p) diag -= l(j, p) * l(j, p);
    if (diag < -kPsdTolerance) throw Error("correlation matrix is not positive semi-definite");
    const double pivot = diag > kPsdTolerance ? std::sqrt(diag) : 0.0;
    l(j, j) = pivot;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      if (pivot == 0.0) {
        if (std::abs(s) > 1e-8) throw Error("correlation matrix is not positive semi-definite");
        l(i, j) = 0.0;
      } else {
        l(i, j) = s / pivot;
      }
    }
  }
  return l;
}

Matrix block_correlation(const std::vector<std::size_t>& group_sizes, double within_rho, double between_rho) {
  check_rho(within_rho, "within_rho");
  check_rho(between_rho, "between_rho");
  std::vector<std::size_t> group_of;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) group_of.insert(group_of.end(), group_sizes[g], g);
  const std::size_t d = group_of.size();
  Matrix c(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      c(i, j) = i == j ? 1.0 : (group_of[i] == group_of[j] ? within_rho : between_rho);
  return c;
}

Dataset generate(const SynthSpec& spec) {
  return std::visit(Generator{spec.n_rows, spec.seed}, spec.kind);
}

Transform parse_transform(std::string_view s) {
  if (s == "cube") return Transform::cube;
  if (s == "exp") return Transform::exp;
  if (s == "sin") return Transform::sin;
  throw Error("unknown transform '" + std::string(s) + "' (expected cube, exp or sin)");
}

SynthSpec parse_spec(std::string_view json_text) {
  using nlohmann::json;
  try {
    const json j = json::parse(json_text);
    SynthSpec spec;
    spec.n_rows = j.value("n_rows", std::size_t{1000});
    spec.seed = j.value("seed", std::uint64_t{1});
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian_pair") {
      spec.kind = GaussianPair{j.at("rho").get<double>()};
    } else if (kind == "gaussian_matrix") {
      const auto rows = j.at("correlation").get<std::vector<std::vector<double>>>();
      Matrix c(rows.size(), rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw Error("gaussian_matrix: correlation must be square");
        for (std::size_t k = 0; k < rows.size(); ++k) c(i, k) = rows[i][k];
      }
      spec.kind = GaussianMatrix{std::move(c)};
    } else if (kind == "functional") {
      spec.kind = Functional{parse_transform(j.at("transform").get<std::string>()), j.value("noise_sd", 0.0)};
    } else if (kind == "blocks") {
      spec.kind = Blocks{j.at("group_sizes").get<std::vector<std::size_t>>(), j.at("within_rho").get<double>(),
                         j.value("between_rho", 0.0)};
    } else if (kind == "nonlinear_blocks") {
      spec.kind = NonlinearBlocks{j.at("group_sizes").get<std::vector<std::size_t>>(), j.value("noise_sd", 0.1)};
    } else if (kind == "uniform") {
      spec.kind = Uniform{j.value("n_cols", std::size_t{2})};
    } else {
      throw Error("synth: unknown kind '" + kind + "'");
    }
    return spec;
  } catch (const json::exception& e) {
    throw Error(std::string("synth spec: ") + e.what());
  }
}

}  // namespace copent::synth
