// perjet: exact computation of infinitesimal period maps, flag-orbit
// analysis, and Frobenius filtration extraction on connection charts.

#include <CLI11.hpp>

#include <cctype>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <perjet/perjet.hpp>

using namespace perjet;

namespace {

struct CommonOpts {
  std::string chart_path;
  std::string point;
  std::string frame = "identity";
  std::string jet;
  unsigned order = 1;
  std::uint64_t prime = 0; // reduce a rational chart mod p before running
  bool json = false;
};

template <class K>
K scalar_from_string(const std::string& text, const CoefficientField& field) {
  // integers and a/b fractions
  if constexpr (std::is_same_v<K, Rat>) {
    (void)field;
    return rat_from_string(text);
  } else {
    return Fp::from_rat(rat_from_string(text), field.p);
  }
}

template <class K>
std::vector<K> parse_point(const std::string& text, const std::vector<std::string>& coords,
                           const CoefficientField& field) {
  std::vector<std::optional<K>> slots(coords.size());
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) fail(Errc::ParseError, "--point entries look like name=value");
    std::string name = item.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    std::string value = item.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    bool found = false;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == name) {
        slots[i] = scalar_from_string<K>(value, field);
        found = true;
      }
    if (!found) fail(Errc::ParseError, "--point names a coordinate '" + name + "' not in the chart");
  }
  std::vector<K> out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!slots[i]) fail(Errc::ParseError, "--point is missing coordinate '" + coords[i] + "'");
    out.push_back(*slots[i]);
  }
  return out;
}

template <class K>
Matrix<K> parse_frame(const std::string& text, unsigned m, const CoefficientField& field) {
  if (text == "identity") return Matrix<K>::identity(m, ScalarOps<K>::zero(), ScalarOps<K>::one());
  Matrix<K> out(m, m, ScalarOps<K>::zero());
  std::stringstream rows(text);
  std::string row;
  unsigned i = 0;
  while (std::getline(rows, row, ';')) {
    if (i >= m) fail(Errc::ParseError, "--frame has too many rows");
    std::stringstream cells(row);
    std::string cell;
    unsigned j = 0;
    while (std::getline(cells, cell, ',')) {
      if (j >= m) fail(Errc::ParseError, "--frame row has too many entries");
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      out(i, j) = scalar_from_string<K>(cell, field);
      ++j;
    }
    if (j != m) fail(Errc::ParseError, "--frame row has too few entries");
    ++i;
  }
  if (i != m) fail(Errc::ParseError, "--frame has too few rows");
  return out;
}

/// Identifier scan for jet variables: plain `t` counts as t1.
unsigned jet_dimension(const std::string& text) {
  unsigned d = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 't') continue;
    if (i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_')) continue;
    std::size_t j = i + 1;
    std::string digits;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) digits += text[j++];
    if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_')) continue;
    if (!digits.empty()) d = std::max(d, static_cast<unsigned>(std::stoul(digits)));
  }
  return d;
}

template <class K>
Jet<K> parse_jet(const std::string& text, const std::optional<std::vector<K>>& point, unsigned n, unsigned r,
                 const CoefficientField& field) {
  // split into coordinates at top-level commas
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != n)
    fail(Errc::ParseError, "--jet needs one coordinate per chart coordinate (" + std::to_string(n) + ")");

  unsigned d = 1;
  for (const auto& p : parts) d = std::max(d, jet_dimension(p));
  std::vector<std::string> vars;
  for (unsigned v = 1; v <= d; ++v) vars.push_back("t" + std::to_string(v));

  require_order_invertible(field, r);
  std::vector<TruncatedSeries<K>> coords;
  for (unsigned i = 0; i < n; ++i) {
    // rewrite bare `t` as `t1`
    std::string src;
    for (std::size_t k = 0; k < parts[i].size(); ++k) {
      src += parts[i][k];
      if (parts[i][k] == 't') {
        bool prev_word = k > 0 && (std::isalnum(static_cast<unsigned char>(parts[i][k - 1])) || parts[i][k - 1] == '_');
        bool next_word = k + 1 < parts[i].size() &&
                         (std::isalnum(static_cast<unsigned char>(parts[i][k + 1])) || parts[i][k + 1] == '_');
        if (!prev_word && !next_word) src += '1';
      }
    }
    auto poly = parse_polynomial_expr<K>(src, vars, field);
    auto series = poly.taylor_at(std::vector<K>(d, ScalarOps<K>::zero()), r);
    if (point) {
      K c0 = series.constant_term();
      if (is_zero(c0)) {
        series.set_coefficient(MultiIndex(d, 0), (*point)[i]);
      } else if (!(c0 == (*point)[i])) {
        fail(Errc::ParseError, "--jet constant term disagrees with --point in coordinate " + std::to_string(i + 1));
      }
    }
    coords.push_back(std::move(series));
  }
  return Jet<K>(d, r, std::move(coords));
}

template <class K>
std::vector<std::string> offset_names(const ConnectionChart<K>& chart) {
  std::vector<std::string> names;
  for (const auto& c : chart.coordinates) names.push_back("d" + c);
  return names;
}

std::string join_point(const std::vector<std::string>& coords, const std::vector<std::string>& values) {
  std::string s;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ", ";
    s += coords[i] + " = " + values[i];
  }
  return s;
}

template <class K>
std::vector<std::string> point_strings(const std::vector<K>& point) {
  std::vector<std::string> out;
  for (const auto& x : point) out.push_back(to_string(x));
  return out;
}

template <class K>
int run_check_flat_typed(const ConnectionChart<K>& chart, const CommonOpts& opts) {
  auto w = curvature_witness(chart);
  if (opts.json) {
    nlohmann::json j;
    j["flat"] = !w.has_value();
    if (w)
      j["witness"] = {{"l1", w->l1 + 1},
                      {"l2", w->l2 + 1},
                      {"i", w->i + 1},
                      {"j", w->j + 1},
                      {"entry", w->entry.str(chart.coordinates)}};
    std::cout << j.dump(2) << "\n";
  } else if (!w) {
    std::cout << "flat\n";
  } else {
    std::cout << "not flat\n";
    std::cout << "witness: curvature (" << w->l1 + 1 << "," << w->l2 + 1 << ") entry (" << w->i + 1 << ","
              << w->j + 1 << ") = " << w->entry.str(chart.coordinates) << "\n";
  }
  return w ? 1 : 0;
}

template <class K>
int run_solve_limp_typed(const ConnectionChart<K>& chart, const CommonOpts& opts) {
  if (opts.point.empty()) fail(Errc::ParseError, "solve-limp needs --point");
  auto s = parse_point<K>(opts.point, chart.coordinates, chart.field);
  auto f0 = parse_frame<K>(opts.frame, chart.m(), chart.field);
  auto limp = solve_limp(chart, s, f0, opts.order);
  auto names = offset_names(chart);
  if (opts.json) {
    nlohmann::json j;
    j["point"] = point_strings(s);
    j["order"] = opts.order;
    nlohmann::json entries = nlohmann::json::array();
    for (unsigned i = 0; i < chart.m(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (unsigned k = 0; k < chart.m(); ++k) row.push_back(limp.solution(i, k).str(names));
      entries.push_back(row);
    }
    j["flat_frame"] = entries;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "flat frame at (" << join_point(chart.coordinates, point_strings(s)) << "), order " << opts.order
            << "\n";
  for (unsigned i = 0; i < chart.m(); ++i)
    for (unsigned k = 0; k < chart.m(); ++k)
      std::cout << "f[" << i + 1 << "][" << k + 1 << "] = " << limp.solution(i, k).str(names) << "\n";
  auto verify = verify_flat_frame(limp);
  std::cout << "verified = " << (verify ? "false" : "true") << "\n";
  return verify ? 1 : 0;
}

template <class K>
int run_eval_jet_typed(const ConnectionChart<K>& chart, const CommonOpts& opts) {
  if (opts.jet.empty()) fail(Errc::ParseError, "eval-jet needs --jet");
  std::optional<std::vector<K>> point;
  if (!opts.point.empty()) point = parse_point<K>(opts.point, chart.coordinates, chart.field);
  auto jet = parse_jet<K>(opts.jet, point, chart.n(), opts.order, chart.field);
  auto f0 = parse_frame<K>(opts.frame, chart.m(), chart.field);
  FrameAssignment<K> fr{jet.basepoint(), f0};
  auto fj = eval_eta(chart, jet, fr, opts.order);

  std::vector<std::string> tvars;
  for (unsigned v = 1; v <= jet.dim(); ++v) tvars.push_back("t" + std::to_string(v));
  std::vector<TruncatedSeries<K>> entries_flat;
  for (unsigned i = 0; i < chart.m(); ++i)
    for (unsigned k = 0; k < chart.m(); ++k) entries_flat.push_back(fj.representative()(i, k));
  bool constant = jet_classify(Jet<K>(fj.dim(), fj.order(), entries_flat)).constant;

  if (opts.json) {
    nlohmann::json j;
    j["point"] = point_strings(jet.basepoint());
    j["order"] = opts.order;
    j["d"] = jet.dim();
    j["shape"] = {{"rank", fj.shape().m}, {"weight", fj.shape().w}, {"hodge_numbers", fj.shape().hodge}};
    nlohmann::json ent = nlohmann::json::array();
    for (unsigned i = 0; i < chart.m(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (unsigned k = 0; k < chart.m(); ++k) row.push_back(fj.representative()(i, k).str(tvars));
      ent.push_back(row);
    }
    j["representative"] = ent;
    j["constant"] = constant;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "flag jet at (" << join_point(chart.coordinates, point_strings(jet.basepoint())) << "), d = "
            << jet.dim() << ", order " << opts.order << "\n";
  std::cout << "shape: rank " << fj.shape().m << ", weight " << fj.shape().w << ", hodge numbers [";
  for (std::size_t i = 0; i < fj.shape().hodge.size(); ++i) std::cout << (i ? ", " : "") << fj.shape().hodge[i];
  std::cout << "]\n";
  for (unsigned i = 0; i < chart.m(); ++i)
    for (unsigned k = 0; k < chart.m(); ++k)
      std::cout << "M[" << i + 1 << "][" << k + 1 << "] = " << fj.representative()(i, k).str(tvars) << "\n";
  std::cout << "constant = " << (constant ? "true" : "false") << "\n";
  return 0;
}

template <class K>
int run_flag_analyze_typed(const ConnectionChart<K>& chart, const CommonOpts& opts) {
  std::vector<K> pt(chart.n(), ScalarOps<K>::zero());
  if (!opts.point.empty()) pt = parse_point<K>(opts.point, chart.coordinates, chart.field);
  auto rep = hypothesis_report(chart, std::nullopt, pt);
  rep.exceptionality.clear();
  if (opts.json) {
    auto j = render_json(rep);
    j.erase("flatness");
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << render_text(rep, /*include_flatness=*/false);
  return 0;
}

int run_mazur(const ChartFile& file, bool json, bool ordinary_mode) {
  auto mod = load_frobenius(file);
  if (!mod) fail(Errc::ParseError, "chart file has no [frobenius] section");
  auto filts = mazur_filtrations(*mod);
  bool ordinary = is_ordinary(filts.hodge, filts.conjugate);

  if (json) {
    nlohmann::json j;
    j["p"] = mod->p;
    j["precision"] = mod->precision;
    j["weight"] = mod->weight;
    j["frobenius_valuations"] = filts.valuations;
    j["hodge_numbers"] = filts.hodge.shape().hodge;
    j["det_valuation"] = filts.det_valuation;
    j["det_consistent"] = filts.det_consistent;
    auto flag_json = [](const Flag<Fp>& f) {
      nlohmann::json steps = nlohmann::json::array();
      for (int p2 = f.weight(); p2 >= 0; --p2) {
        nlohmann::json basis = nlohmann::json::array();
        for (const auto& v : f.step(p2).basis()) {
          std::vector<std::string> row;
          for (const auto& x : v) row.push_back(to_string(x));
          basis.push_back(row);
        }
        steps.push_back({{"step", p2}, {"basis", basis}});
      }
      return steps;
    };
    j["hodge_filtration"] = flag_json(filts.hodge);
    j["conjugate_filtration"] = flag_json(filts.conjugate);
    j["ordinary"] = ordinary;
    std::cout << j.dump(2) << "\n";
    return ordinary_mode && !ordinary ? 1 : 0;
  }

  if (ordinary_mode) {
    std::cout << "ordinary = " << (ordinary ? "true" : "false") << "\n";
    return ordinary ? 0 : 1;
  }

  std::cout << "mazur filtrations (p = " << mod->p << ", precision = " << mod->precision << ", weight "
            << mod->weight << ")\n";
  std::cout << "frobenius_valuations = [";
  for (std::size_t i = 0; i < filts.valuations.size(); ++i) std::cout << (i ? ", " : "") << filts.valuations[i];
  std::cout << "]\n";
  std::cout << "hodge_numbers = [";
  const auto& h = filts.hodge.shape().hodge;
  for (std::size_t i = 0; i < h.size(); ++i) std::cout << (i ? ", " : "") << h[i];
  std::cout << "]\n";
  std::cout << "det_valuation = " << filts.det_valuation << " ("
            << (filts.det_consistent ? "consistent" : "inconsistent") << ")\n";
  auto print_flag = [](const char* name, const Flag<Fp>& f) {
    for (int p2 = f.weight(); p2 >= 0; --p2) {
      std::cout << name << "^" << p2 << " basis:";
      auto basis = f.step(p2).basis();
      if (basis.empty()) std::cout << " (zero)";
      for (const auto& v : basis) {
        std::cout << " [";
        for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << to_string(v[i]);
        std::cout << "]";
      }
      std::cout << "\n";
    }
  };
  print_flag("F", filts.hodge);
  print_flag("F_c", filts.conjugate);
  std::cout << "ordinary = " << (ordinary ? "true" : "false") << "\n";
  return 0;
}

template <class K>
int run_report_typed(const ConnectionChart<K>& chart, const ChartFile& file, const CommonOpts& opts) {
  std::vector<K> pt(chart.n(), ScalarOps<K>::zero());
  if (!opts.point.empty()) pt = parse_point<K>(opts.point, chart.coordinates, chart.field);
  auto mod = load_frobenius(file);
  auto rep = hypothesis_report(chart, mod, pt);
  if (opts.json)
    std::cout << render_json(rep).dump(2) << "\n";
  else
    std::cout << render_text(rep);
  return 0;
}

template <int (*Fn)(const ConnectionChart<Rat>&, const CommonOpts&),
          int (*FnP)(const ConnectionChart<Fp>&, const CommonOpts&)>
int dispatch_chart(const CommonOpts& opts) {
  auto file = parse_chart_file(opts.chart_path);
  auto field = chart_field(file);
  if (field.kind == FieldKind::Rationals && opts.prime != 0)
    return FnP(reduce_chart_mod_p(load_chart<Rat>(file), opts.prime), opts);
  if (opts.prime != 0 && field.kind == FieldKind::PrimeField && opts.prime != field.p)
    fail(Errc::ParseError, "--prime disagrees with the chart's field");
  if (field.kind == FieldKind::Rationals) return Fn(load_chart<Rat>(file), opts);
  return FnP(load_chart<Fp>(file), opts);
}

int run_report(const CommonOpts& opts) {
  auto file = parse_chart_file(opts.chart_path);
  auto field = chart_field(file);
  if (field.kind == FieldKind::Rationals && opts.prime != 0)
    return run_report_typed<Fp>(reduce_chart_mod_p(load_chart<Rat>(file), opts.prime), file, opts);
  if (field.kind == FieldKind::Rationals) return run_report_typed<Rat>(load_chart<Rat>(file), file, opts);
  return run_report_typed<Fp>(load_chart<Fp>(file), file, opts);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"perjet: infinitesimal period maps, flag orbits, and Frobenius filtrations on connection charts"};
  app.require_subcommand(1);

  CommonOpts opts;
  long pbar = 0, e = 0, dim_s = 0, d = 0;
  long codim_u = -1, codim_t = -1, codim_graph = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("chart", opts.chart_path, "chart file")->required();
    cmd->add_flag("--json", opts.json, "emit machine-readable JSON");
    cmd->add_option("--prime", opts.prime, "reduce a rational chart mod p first");
    return cmd;
  };

  auto* check = add_common(app.add_subcommand("check-flat", "test flatness of the connection"));
  auto* solve = add_common(app.add_subcommand("solve-limp", "solve the formal flat frame at a point"));
  solve->add_option("--point", opts.point, "basepoint, e.g. l=2")->required();
  solve->add_option("--frame", opts.frame, "initial frame: 'identity' or rows 'a,b;c,d'");
  solve->add_option("--order", opts.order, "truncation order")->required();
  auto* evalj = add_common(app.add_subcommand("eval-jet", "evaluate the period map on a jet"));
  evalj->add_option("--point", opts.point, "basepoint, e.g. l=2");
  evalj->add_option("--jet", opts.jet, "jet coordinates, e.g. \"2+t1, t2\"")->required();
  evalj->add_option("--frame", opts.frame, "initial frame: 'identity' or rows 'a,b;c,d'");
  evalj->add_option("--order", opts.order, "truncation order")->required();
  auto* flaga = add_common(app.add_subcommand("flag-analyze", "orbit and Lie analysis of the chart data"));
  flaga->add_option("--point", opts.point, "where to evaluate non-constant flat tensors");
  auto* mazur_cmd = add_common(app.add_subcommand("mazur", "Mazur filtrations from the [frobenius] section"));
  auto* ord = add_common(app.add_subcommand("ordinary", "ordinariness test from the [frobenius] section"));
  auto* crit = app.add_subcommand("criteria", "numeric exceptionality predicates");
  crit->add_flag("--json", opts.json, "emit machine-readable JSON");
  crit->add_option("--pbar", pbar, "period dimension")->required();
  crit->add_option("--e", e, "orbit dimension")->required();
  crit->add_option("--dim-s", dim_s, "relative dimension of the base")->required();
  crit->add_option("--d", d, "jet/locus dimension")->required();
  crit->add_option("--codim-u", codim_u, "codimension of the intersection component");
  crit->add_option("--codim-t", codim_t, "codimension of the algebraic locus");
  crit->add_option("--codim-graph", codim_graph, "codimension of the graph");
  auto* rep = add_common(app.add_subcommand("report", "full hypothesis report"));
  rep->add_option("--point", opts.point, "where to evaluate non-constant flat tensors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    std::cerr << err.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) return dispatch_chart<run_check_flat_typed<Rat>, run_check_flat_typed<Fp>>(opts);
    if (solve->parsed()) return dispatch_chart<run_solve_limp_typed<Rat>, run_solve_limp_typed<Fp>>(opts);
    if (evalj->parsed()) return dispatch_chart<run_eval_jet_typed<Rat>, run_eval_jet_typed<Fp>>(opts);
    if (flaga->parsed()) return dispatch_chart<run_flag_analyze_typed<Rat>, run_flag_analyze_typed<Fp>>(opts);
    if (mazur_cmd->parsed()) return run_mazur(parse_chart_file(opts.chart_path), opts.json, false);
    if (ord->parsed()) return run_mazur(parse_chart_file(opts.chart_path), opts.json, true);
    if (rep->parsed()) return run_report(opts);
    if (crit->parsed()) {
      CriteriaInput ci{pbar, e, dim_s, d};
      bool exc = exceptionality_predicate(ci);
      bool have_gap = codim_u >= 0 && codim_t >= 0 && codim_graph >= 0;
      bool gap = have_gap && ax_schanuel_gap(codim_u, codim_t, codim_graph);
      if (opts.json) {
        nlohmann::json j;
        j["exceptional"] = exc;
        j["pbar"] = pbar;
        j["e"] = e;
        j["dim_s"] = dim_s;
        j["d"] = d;
        if (have_gap) j["ax_schanuel_gap"] = gap;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "exceptionality: P-bar - e = " << (pbar - e) << ", dim_s - d = " << (dim_s - d) << " -> "
                  << (exc ? "true" : "false") << "\n";
        if (have_gap)
          std::cout << "ax-schanuel gap: codim_u = " << codim_u << " < codim_t + codim_graph = "
                    << (codim_t + codim_graph) << " -> " << (gap ? "true" : "false") << "\n";
      }
      return 0;
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
