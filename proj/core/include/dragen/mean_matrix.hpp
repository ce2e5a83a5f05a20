#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"

namespace dragen {

enum class Granularity { Constructor, Type };

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Expected offspring per parent kind: entry (i, j) is the mean number of
/// kind-j individuals produced by one kind-i parent. `index` holds
/// constructor ids or type ids depending on the granularity.
struct MeanMatrix {
  Granularity granularity = Granularity::Type;
  std::vector<std::uint32_t> index;
  DenseMatrix entries;

  std::size_t dimension() const { return index.size(); }
};

struct PopulationVector {
  Granularity granularity = Granularity::Type;
  std::vector<std::uint32_t> index;
  std::vector<double> values;
};

/// m(C_i, C_j) = branching_factor(C_i, type(C_j)) * p(C_j), over family constructors.
MeanMatrix mean_matrix_constructors(const Universe& u, const ProbMap& p);

/// m(T_u, T_v) = sum over C in cons(T_u) of branching_factor(C, T_v) * p(C).
MeanMatrix mean_matrix_types(const Universe& u, const ProbMap& p);

/// Constructor granularity: p(C) for root-type constructors, 0 elsewhere.
/// Type granularity: 1 at the root, 0 elsewhere.
PopulationVector initial_population(const Universe& u, const ProbMap& p, Granularity granularity);

/// E[G_n] by n successive vector-matrix products.
PopulationVector expected_generation(const PopulationVector& g0, const MeanMatrix& m, unsigned n);

/// E[P_n] = E[G_0] + ... + E[G_n], accumulated iteratively so a singular
/// (I - M) needs no special handling.
PopulationVector expected_population(const PopulationVector& g0, const MeanMatrix& m, unsigned n);

/// v^T * M. Throws ModelError on dimension mismatch.
std::vector<double> left_multiply(std::span<const double> v, const DenseMatrix& m);

}  // namespace dragen
