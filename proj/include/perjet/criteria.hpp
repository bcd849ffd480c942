#ifndef PERJET_CRITERIA_HPP
#define PERJET_CRITERIA_HPP

namespace perjet {

/// Numeric inputs of the exceptionality test.
struct CriteriaInput {
  long pbar = 0;  // period dimension
  long e = 0;     // orbit dimension
  long dim_s = 0; // relative dimension of the base
  long d = 0;     // jet / locus dimension
};

/// The codimension condition under which a d-dimensional jet landing in a
/// dimension-e orbit family is atypical: P-bar - e > dim S - d.
inline bool exceptionality_predicate(const CriteriaInput& c) { return c.pbar - c.e > c.dim_s - c.d; }

/// Hypothesis of the transcendence step: codim U < codim T + codim graph.
inline bool ax_schanuel_gap(long codim_u, long codim_t, long codim_graph) {
  return codim_u < codim_t + codim_graph;
}

} // namespace perjet

#endif
