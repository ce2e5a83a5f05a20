#include "dragen/mean_matrix.hpp"

#include <string>

#include "dragen/error.hpp"

namespace dragen {

namespace {

void require_cover(const Universe& u, const ProbMap& p) {
  if (p.size() != u.constructors().size()) {
    throw ModelError("probability map does not cover the universe (" + std::to_string(p.size()) +
                     " of " + std::to_string(u.constructors().size()) + " constructors)");
  }
}

void require_dimensions(const PopulationVector& g0, const MeanMatrix& m) {
  if (g0.values.size() != m.dimension() || m.entries.rows() != m.dimension() ||
      m.entries.cols() != m.dimension()) {
    throw ModelError("population vector of length " + std::to_string(g0.values.size()) +
                     " does not match mean matrix of dimension " + std::to_string(m.dimension()));
  }
}

}  // namespace

std::vector<double> left_multiply(std::span<const double> v, const DenseMatrix& m) {
  if (v.size() != m.rows()) {
    throw ModelError("vector of length " + std::to_string(v.size()) + " cannot multiply a " +
                     std::to_string(m.rows()) + "-row matrix");
  }
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0.0) continue;
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * row[j];
  }
  return out;
}

MeanMatrix mean_matrix_constructors(const Universe& u, const ProbMap& p) {
  require_cover(u, p);
  const std::size_t d = u.family_constructor_count();
  MeanMatrix m{Granularity::Constructor, {}, DenseMatrix(d, d)};
  for (std::uint32_t i = 0; i < d; ++i) m.index.push_back(i);
  for (std::uint32_t i = 0; i < d; ++i) {
    for (const FieldRef& f : u.constructor(ConstructorId{i}).fields) {
      if (f.kind != FieldRef::Kind::Family) continue;
      // Each family field contributes p(C_j) for every constructor C_j of its type.
      for (ConstructorId j : u.type(f.type).constructors) m.entries(i, j.value) += p[j];
    }
  }
  return m;
}

MeanMatrix mean_matrix_types(const Universe& u, const ProbMap& p) {
  require_cover(u, p);
  const std::size_t d = u.family_size();
  MeanMatrix m{Granularity::Type, {}, DenseMatrix(d, d)};
  for (std::uint32_t t = 0; t < d; ++t) m.index.push_back(t);
  for (std::uint32_t t = 0; t < d; ++t) {
    for (ConstructorId c : u.type(TypeId{t}).constructors) {
      for (const FieldRef& f : u.constructor(c).fields) {
        if (f.kind == FieldRef::Kind::Family) m.entries(t, f.type.value) += p[c];
      }
    }
  }
  return m;
}

PopulationVector initial_population(const Universe& u, const ProbMap& p, Granularity granularity) {
  require_cover(u, p);
  PopulationVector g{granularity, {}, {}};
  if (granularity == Granularity::Type) {
    for (std::uint32_t t = 0; t < u.family_size(); ++t) {
      g.index.push_back(t);
      g.values.push_back(TypeId{t} == u.root() ? 1.0 : 0.0);
    }
    return g;
  }
  for (std::uint32_t c = 0; c < u.family_constructor_count(); ++c) {
    const ConstructorId id{c};
    g.index.push_back(c);
    g.values.push_back(u.constructor(id).owner == u.root() ? p[id] : 0.0);
  }
  return g;
}

PopulationVector expected_generation(const PopulationVector& g0, const MeanMatrix& m, unsigned n) {
  require_dimensions(g0, m);
  PopulationVector g = g0;
  for (unsigned k = 0; k < n; ++k) g.values = left_multiply(g.values, m.entries);
  return g;
}

PopulationVector expected_population(const PopulationVector& g0, const MeanMatrix& m, unsigned n) {
  require_dimensions(g0, m);
  PopulationVector total = g0;
  std::vector<double> g = g0.values;
  for (unsigned k = 1; k <= n; ++k) {
    g = left_multiply(g, m.entries);
    for (std::size_t i = 0; i < g.size(); ++i) total.values[i] += g[i];
  }
  return total;
}

}  // namespace dragen
