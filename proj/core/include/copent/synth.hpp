#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "copent/dataset.hpp"
#include "copent/matrix.hpp"

namespace copent::synth {

// (X, Y) standard normal with correlation rho. Columns "X", "Y".
struct GaussianPair {
  double rho = 0.0;
};

// Standard normal vector with the given correlation matrix. Columns "V1".."Vd".
struct GaussianMatrix {
  Matrix correlation;
};

enum class Transform { cube, exp, sin };

// (X, g(X) + noise). X ~ N(0, 1) for cube and exp, X ~ U(-pi, pi) for sin.
struct Functional {
  Transform transform = Transform::cube;
  double noise_sd = 0.0;
};

// Gaussian vector with block-constant correlation: within_rho inside each
// group, between_rho across groups. Columns "G<g>_<m>".
struct Blocks {
  std::vector<std::size_t> group_sizes;
  double within_rho = 0.0;
  double between_rho = 0.0;
};

// Independent groups whose members are nonlinear functions of one latent
// X ~ U(-pi, pi): member 1 is X, member m > 1 is cos((m-1) X) + noise.
// Within a group every Pearson correlation is zero in the population while
// the dependence is strong.
struct NonlinearBlocks {
  std::vector<std::size_t> group_sizes;
  double noise_sd = 0.1;
};

// Independent U(0, 1) columns "U1".."Ud".
struct Uniform {
  std::size_t n_cols = 2;
};

using Kind = std::variant<GaussianPair, GaussianMatrix, Functional, Blocks, NonlinearBlocks, Uniform>;

struct SynthSpec {
  Kind kind;
  std::size_t n_rows = 1000;
  std::uint64_t seed = 1;
};

// Deterministic for a fixed spec. Normals come from the inverse normal CDF of
// a SplitMix64 uniform stream, drawn row by row.
Dataset generate(const SynthSpec& spec);

// Lower-triangular L with L L^T = a. Accepts positive semi-definite input
// (zero pivots give zero columns) and throws copent::Error otherwise.
Matrix cholesky_psd(const Matrix& a);

// Block-constant correlation matrix used by the Blocks kind.
Matrix block_correlation(const std::vector<std::size_t>& group_sizes, double within_rho, double between_rho);

// JSON form, e.g. {"kind": "blocks", "group_sizes": [3, 3], "within_rho": 0.9,
// "between_rho": 0, "n_rows": 2000, "seed": 7}.
SynthSpec parse_spec(std::string_view json_text);

Transform parse_transform(std::string_view s);

}  // namespace copent::synth
