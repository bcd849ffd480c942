#ifndef PERJET_REPORT_HPP
#define PERJET_REPORT_HPP

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "connection.hpp"
#include "criteria.hpp"
#include "lie.hpp"
#include "mazur.hpp"
#include "period.hpp"

namespace perjet {

struct StabilizerSection {
  bool ok = false;
  std::string error;
  unsigned dim = 0;
  std::vector<unsigned> hodge; // h^{-w}..h^{w}
  int level = 0;
  unsigned e = 0;
  bool symmetric = false;
  bool killing_nondegenerate = false;
  bool properly_contained = false;    // strictly inside the ambient algebra
  std::vector<std::string> certificate; // rows of an ambient element outside the stabilizer
};

struct OrdinarySection {
  bool ok = false;
  std::string error;
  std::uint64_t p = 0;
  std::vector<unsigned> hodge_numbers; // computed, highest step first
  std::vector<unsigned> valuations;
  unsigned det_valuation = 0;
  bool det_consistent = false;
  bool ordinary = false;
};

struct ExceptionalityLine {
  long d = 0;
  long pbar = 0, e = 0, dim_s = 0;
  bool exceptional = false;
};

struct HypothesisReport {
  std::string field;
  unsigned rank = 0;
  int weight = 0;
  unsigned dim_s = 0;

  bool flatness_ok = false;
  std::string flatness_error;
  bool flat = false;
  std::string flatness_witness;

  bool has_polarization = false;
  StabilizerSection ambient;               // Aut(Q)
  std::optional<StabilizerSection> tensor; // stabilizer of {Q} + flat tensors
  long pbar = 0;
  bool level_at_least_3 = false;

  std::optional<OrdinarySection> ordinary;

  std::vector<ExceptionalityLine> exceptionality; // ambient vs tensor-set orbits
};

namespace detail_report {

template <class K>
std::string matrix_row_string(const Matrix<K>& m, unsigned i) {
  std::string s = "[";
  for (unsigned j = 0; j < m.cols(); ++j) {
    if (j) s += ", ";
    s += to_string(m(i, j));
  }
  return s + "]";
}

template <class K>
StabilizerSection stabilizer_section(const ConjugatePair<K>& pair, const std::vector<Tensor<K>>& tensors,
                                     const std::vector<Matrix<K>>& ambient_basis) {
  StabilizerSection out;
  try {
    auto basis = stabilizer_algebra<K>(pair.flag.rank(), tensors);
    out.dim = static_cast<unsigned>(basis.size());
    auto graded = adjoint_hodge_numbers(basis, EndGrading<K>(pair));
    out.hodge = graded.hodge;
    auto inv = numeric_invariants(graded);
    out.level = inv.level;
    out.e = inv.e;
    out.symmetric = inv.symmetric;
    out.killing_nondegenerate = basis.empty() ? true : killing_form(basis).nondegenerate;

    if (!ambient_basis.empty()) {
      unsigned m = pair.flag.rank();
      std::vector<std::vector<K>> flat_stab;
      for (const auto& b : basis) flat_stab.push_back(flatten(b));
      auto stab_space = Subspace<K>::span(m * m, flat_stab);
      out.properly_contained = basis.size() < ambient_basis.size();
      for (const auto& a : ambient_basis) {
        if (stab_space.contains(flatten(a))) continue;
        for (unsigned i = 0; i < m; ++i) out.certificate.push_back(matrix_row_string(a, i));
        break;
      }
    }
    out.ok = true;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

} // namespace detail_report

/// Full hypothesis report for a chart: flatness, the ambient Aut(Q) analysis,
/// the flat-tensor stabilizer analysis, ordinariness of attached Frobenius
/// data, and the exceptionality verdicts for each locus dimension d. Failing
/// sections record their error and never suppress the others.
template <class K>
HypothesisReport hypothesis_report(const ConnectionChart<K>& chart,
                                   const std::optional<FrobeniusModule>& frobenius,
                                   const std::vector<K>& tensor_point) {
  HypothesisReport rep;
  rep.field = chart.field.kind == FieldKind::Rationals ? "rationals" : "F_" + std::to_string(chart.field.p);
  rep.rank = chart.m();
  rep.weight = chart.flag_shape.w;
  rep.dim_s = chart.n();

  try {
    auto w = curvature_witness(chart);
    rep.flat = !w.has_value();
    if (w) {
      rep.flatness_witness = "curvature (" + std::to_string(w->l1 + 1) + "," + std::to_string(w->l2 + 1) +
                             ") entry (" + std::to_string(w->i + 1) + "," + std::to_string(w->j + 1) +
                             ") = " + w->entry.str(chart.coordinates);
    }
    rep.flatness_ok = true;
  } catch (const Error& e) {
    rep.flatness_error = e.what();
  }

  rep.has_polarization = chart.polarization.has_value();
  std::vector<Matrix<K>> ambient_basis;
  if (rep.has_polarization) {
    auto f = standard_flag<K>(chart.flag_shape);
    Matrix<K> rev(chart.m(), chart.m(), ScalarOps<K>::zero());
    for (unsigned i = 0; i < chart.m(); ++i) rev(i, chart.m() - 1 - i) = ScalarOps<K>::one();
    try {
      auto fc = flag_from_matrix(rev, chart.flag_shape.reversed());
      auto pair = conjugate_decomposition(f, fc);
      auto qt = form_as_tensor(*chart.polarization);
      ambient_basis = stabilizer_algebra<K>(chart.m(), std::vector<Tensor<K>>{qt});
      rep.ambient = detail_report::stabilizer_section(pair, {qt}, {});
      rep.ambient.properly_contained = false;
      rep.pbar = rep.ambient.ok ? static_cast<long>(rep.ambient.e) : 0;
      rep.level_at_least_3 = rep.ambient.ok && rep.ambient.level >= 3;

      // the tensor-set stabilizer: Q together with the chart's flat tensors
      if (!chart.flat_tensors.empty()) {
        StabilizerSection ts;
        try {
          std::vector<Tensor<K>> tensors = {qt};
          for (const auto& [idx, t] : chart.flat_tensors) {
            Tensor<K> at_point(idx, chart.m());
            for (std::size_t k = 0; k < t.data().size(); ++k)
              at_point.data()[k] = t.data()[k].evaluate(tensor_point);
            tensors.push_back(std::move(at_point));
          }
          ts = detail_report::stabilizer_section(pair, tensors, ambient_basis);
        } catch (const Error& e) {
          ts.ok = false;
          ts.error = e.what();
        }
        rep.tensor = ts;
      }

      // exceptionality verdicts for each d, against the tensor-set orbit if
      // present, else the ambient orbit
      long e_used = rep.tensor && rep.tensor->ok ? static_cast<long>(rep.tensor->e)
                                                 : static_cast<long>(rep.ambient.e);
      for (long d = 1; d <= static_cast<long>(rep.dim_s); ++d) {
        CriteriaInput ci{rep.pbar, e_used, static_cast<long>(rep.dim_s), d};
        rep.exceptionality.push_back({d, rep.pbar, e_used, static_cast<long>(rep.dim_s),
                                      exceptionality_predicate(ci)});
      }
    } catch (const Error& e) {
      rep.ambient.ok = false;
      rep.ambient.error = e.what();
    }
  }

  if (frobenius) {
    OrdinarySection os;
    os.p = frobenius->p;
    try {
      auto filts = mazur_filtrations(*frobenius);
      os.hodge_numbers = filts.hodge.shape().hodge;
      os.valuations = filts.valuations;
      os.det_valuation = filts.det_valuation;
      os.det_consistent = filts.det_consistent;
      os.ordinary = is_ordinary(filts.hodge, filts.conjugate);
      os.ok = true;
    } catch (const Error& e) {
      os.error = e.what();
    }
    rep.ordinary = os;
  }
  return rep;
}

namespace detail_report {

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

inline void render_stabilizer(std::ostream& out, const std::string& title, const StabilizerSection& s,
                              bool show_containment) {
  out << "[" << title << "]\n";
  if (!s.ok) {
    out << "error = " << s.error << "\n\n";
    return;
  }
  out << "dim = " << s.dim << "\n";
  out << "adjoint_hodge_numbers = [";
  for (std::size_t i = 0; i < s.hodge.size(); ++i) out << (i ? ", " : "") << s.hodge[i];
  out << "]\n";
  out << "level = " << s.level << "\n";
  out << "e = " << s.e << "\n";
  out << "symmetric = " << bool_str(s.symmetric) << "\n";
  out << "killing_nondegenerate = " << bool_str(s.killing_nondegenerate) << "\n";
  if (show_containment) {
    out << "properly_contained_in_ambient = " << bool_str(s.properly_contained) << "\n";
    if (!s.certificate.empty()) {
      out << "complement_certificate = ";
      for (std::size_t i = 0; i < s.certificate.size(); ++i) out << (i ? " " : "") << s.certificate[i];
      out << "\n";
    }
  }
  out << "\n";
}

} // namespace detail_report

inline std::string render_text(const HypothesisReport& rep, bool include_flatness = true) {
  using detail_report::bool_str;
  std::ostringstream out;
  out << "perjet hypothesis report\n";
  out << "========================\n\n";
  out << "[field]\n";
  out << "kind = " << rep.field << "\n";
  out << "rank = " << rep.rank << "\n";
  out << "weight = " << rep.weight << "\n";
  out << "dim_s = " << rep.dim_s << "\n\n";

  if (include_flatness) {
    out << "[flatness]\n";
    if (!rep.flatness_ok)
      out << "error = " << rep.flatness_error << "\n\n";
    else if (rep.flat)
      out << "flat = true\n\n";
    else
      out << "flat = false\nwitness = " << rep.flatness_witness << "\n\n";
  }

  if (rep.has_polarization) {
    detail_report::render_stabilizer(out, "ambient Aut(Q)", rep.ambient, false);
    if (rep.ambient.ok) {
      out << "[hypotheses]\n";
      out << "period_dimension = " << rep.pbar << "\n";
      out << "level_at_least_3 = " << bool_str(rep.level_at_least_3);
      if (!rep.level_at_least_3) out << "  # level >= 3 hypothesis fails";
      out << "\n";
      out << "hodge_numbers_symmetric = " << bool_str(rep.ambient.symmetric) << "\n\n";
    }
    if (rep.tensor) detail_report::render_stabilizer(out, "tensor-set stabilizer", *rep.tensor, true);
  } else {
    out << "[ambient Aut(Q)]\n";
    out << "error = no polarization supplied\n\n";
  }

  if (rep.ordinary) {
    const auto& os = *rep.ordinary;
    out << "[ordinariness]\n";
    if (!os.ok) {
      out << "error = " << os.error << "\n\n";
    } else {
      out << "p = " << os.p << "\n";
      out << "hodge_numbers = [";
      for (std::size_t i = 0; i < os.hodge_numbers.size(); ++i) out << (i ? ", " : "") << os.hodge_numbers[i];
      out << "]\n";
      out << "frobenius_valuations = [";
      for (std::size_t i = 0; i < os.valuations.size(); ++i) out << (i ? ", " : "") << os.valuations[i];
      out << "]\n";
      out << "det_valuation = " << os.det_valuation << " (" << (os.det_consistent ? "consistent" : "inconsistent")
          << ")\n";
      out << "ordinary = " << bool_str(os.ordinary) << "\n\n";
    }
  }

  if (!rep.exceptionality.empty()) {
    out << "[exceptionality]\n";
    for (const auto& line : rep.exceptionality) {
      out << "d = " << line.d << ": P-bar - e = " << (line.pbar - line.e) << ", dim_s - d = "
          << (line.dim_s - line.d) << " -> " << bool_str(line.exceptional) << "\n";
    }
  }
  return out.str();
}

inline nlohmann::json render_json(const HypothesisReport& rep) {
  nlohmann::json j;
  j["field"] = {{"kind", rep.field}, {"rank", rep.rank}, {"weight", rep.weight}, {"dim_s", rep.dim_s}};
  if (rep.flatness_ok) {
    j["flatness"]["flat"] = rep.flat;
    if (!rep.flat) j["flatness"]["witness"] = rep.flatness_witness;
  } else {
    j["flatness"]["error"] = rep.flatness_error;
  }
  auto stab_json = [](const StabilizerSection& s, bool containment) {
    nlohmann::json out;
    if (!s.ok) {
      out["error"] = s.error;
      return out;
    }
    out["dim"] = s.dim;
    out["adjoint_hodge_numbers"] = s.hodge;
    out["level"] = s.level;
    out["e"] = s.e;
    out["symmetric"] = s.symmetric;
    out["killing_nondegenerate"] = s.killing_nondegenerate;
    if (containment) {
      out["properly_contained_in_ambient"] = s.properly_contained;
      if (!s.certificate.empty()) out["complement_certificate"] = s.certificate;
    }
    return out;
  };
  if (rep.has_polarization) {
    j["ambient"] = stab_json(rep.ambient, false);
    if (rep.ambient.ok) {
      j["hypotheses"] = {{"period_dimension", rep.pbar},
                         {"level_at_least_3", rep.level_at_least_3},
                         {"hodge_numbers_symmetric", rep.ambient.symmetric}};
    }
    if (rep.tensor) j["tensor_stabilizer"] = stab_json(*rep.tensor, true);
  } else {
    j["ambient"]["error"] = "no polarization supplied";
  }
  if (rep.ordinary) {
    const auto& os = *rep.ordinary;
    if (!os.ok) {
      j["ordinariness"]["error"] = os.error;
    } else {
      j["ordinariness"] = {{"p", os.p},
                           {"hodge_numbers", os.hodge_numbers},
                           {"frobenius_valuations", os.valuations},
                           {"det_valuation", os.det_valuation},
                           {"det_consistent", os.det_consistent},
                           {"ordinary", os.ordinary}};
    }
  }
  if (!rep.exceptionality.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& line : rep.exceptionality)
      arr.push_back({{"d", line.d},
                     {"pbar", line.pbar},
                     {"e", line.e},
                     {"dim_s", line.dim_s},
                     {"exceptional", line.exceptional}});
    j["exceptionality"] = arr;
  }
  return j;
}

} // namespace perjet

#endif
