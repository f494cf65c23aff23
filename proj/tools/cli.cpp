#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "orthopart/bounds.hpp"
#include "orthopart/cobordism.hpp"
#include "orthopart/masspart.hpp"
#include "orthopart/solver.hpp"
#include "point_io.hpp"

namespace orthopart::cli {

namespace {

using nlohmann::json;

struct Globals {
  bool quiet = false;
  std::size_t threads = 0;
  std::string format = "json";
};

std::string num(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// "110;011*3" -> 110, 011, 011, 011
std::vector<GroupElement> parse_forms(const std::string& text) {
  std::vector<GroupElement> forms;
  for (const auto& raw : io::split(text, ';')) {
    const std::string tok = trim(raw);
    if (tok.empty()) continue;
    std::size_t count = 1;
    std::string bits = tok;
    if (const auto star = tok.find('*'); star != std::string::npos) {
      bits = trim(tok.substr(0, star));
      const std::string c = trim(tok.substr(star + 1));
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
      if (ec != std::errc() || ptr != c.data() + c.size()) throw std::invalid_argument("bad multiplicity in '" + tok + "'");
    }
    const auto g = GroupElement::parse(bits);
    forms.insert(forms.end(), count, g);
  }
  return forms;
}

std::vector<unsigned> parse_dims(const std::string& text) {
  std::vector<unsigned> dims;
  for (const auto& raw : io::split(text, ',')) {
    const std::string tok = trim(raw);
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument("bad dimension '" + tok + "'");
    dims.push_back(v);
  }
  return dims;
}

std::vector<WeightedPointMeasure> load_measures(const std::string& list) {
  std::vector<WeightedPointMeasure> out;
  for (const auto& raw : io::split(list, ',')) {
    const std::string path = trim(raw);
    if (path.empty()) continue;
    out.push_back(io::read_points(path));
  }
  if (out.empty()) throw io::InputError("no point files given");
  return out;
}

double default_tol(const std::vector<WeightedPointMeasure>& measures) {
  std::size_t smallest = measures.front().size();
  for (const auto& mu : measures) smallest = std::min(smallest, mu.size());
  return 4.0 / std::sqrt(static_cast<double>(smallest));
}

json report_json(const CriterionReport& r, const std::vector<GroupElement>& forms) {
  json j;
  j["nonzero"] = r.nonzero;
  j["witness"] = r.witness ? json(r.witness->exponents) : json(nullptr);
  j["ring"] = {{"caps", r.ring.caps()}};
  j["method"] = to_string(r.method);
  j["forms"] = json::array();
  for (const auto& f : forms) j["forms"].push_back(f.to_string());
  return j;
}

json bound_json(const BoundRecord& b) {
  json j{{"m", b.m}, {"k", b.k}, {"n", b.n}, {"lower", b.lower}, {"upper", b.upper}, {"tight", b.tight}};
  j["closed_form"] =
      b.closed_form ? json{{"family", b.closed_form->family}, {"value", b.closed_form->value}} : json(nullptr);
  return j;
}

json equipartition_json(const EquipartitionReport& r) {
  json j{{"k", r.k},
         {"n", r.n},
         {"pass", r.pass},
         {"max_deviation", r.max_deviation},
         {"orthogonality_residual", r.orthogonality_residual},
         {"boundary_fraction", r.boundary_fraction}};
  j["g_values"] = json::array();
  for (const auto& g : r.g_values) j["g_values"].push_back({{"planes", g.planes}, {"g", g.g}});
  j["cells"] = json::array();
  for (const auto& c : r.cells)
    j["cells"].push_back(
        {{"planes", c.planes}, {"measure", c.measure}, {"masses", c.masses}, {"max_deviation", c.max_deviation}});
  return j;
}

void equipartition_csv(std::ostream& out, const EquipartitionReport& r) {
  out << "measure,planes,cell,mass,max_deviation\n";
  for (const auto& c : r.cells) {
    std::string planes;
    for (std::size_t i = 0; i < c.planes.size(); ++i) planes += (i ? " " : "") + std::to_string(c.planes[i]);
    for (std::size_t cell = 0; cell < c.masses.size(); ++cell)
      out << c.measure << ',' << planes << ',' << cell << ',' << num(c.masses[cell]) << ',' << num(c.max_deviation)
          << '\n';
  }
}

json planes_json(const HyperplaneTuple& t) {
  json j = json::array();
  for (const auto& h : t.planes()) j.push_back(h.unit());
  return j;
}

// ---- subcommands ----

int do_criterion(const Globals& g, std::ostream& out, const std::vector<GroupElement>& forms,
                 const CriterionReport& r) {
  if (g.format == "csv") {
    out << "nonzero,witness,method,caps\n";
    std::string w, caps;
    if (r.witness)
      for (std::size_t i = 0; i < r.witness->exponents.size(); ++i)
        w += (i ? " " : "") + std::to_string(r.witness->exponents[i]);
    for (std::size_t i = 0; i < r.ring.caps().size(); ++i) caps += (i ? " " : "") + std::to_string(r.ring.caps()[i]);
    out << (r.nonzero ? "true" : "false") << ',' << w << ',' << to_string(r.method) << ',' << caps << '\n';
  } else {
    emit(out, report_json(r, forms));
  }
  return r.nonzero ? kOk : kNegative;
}

int do_bounds(const Globals& g, std::ostream& out, const std::string& m, const std::string& k,
              const std::string& n) {
  NMode mode;
  if (trim(n) == "k")
    mode.equals_k = true;
  else
    mode.range = parse_range(n);
  const auto rows = bounds_table(parse_range(m), parse_range(k), mode);
  if (g.format == "csv") {
    out << bounds_csv(rows);
  } else {
    json j{{"rows", json::array()}};
    for (const auto& r : rows) j["rows"].push_back(bound_json(r));
    emit(out, j);
  }
  return kOk;
}

struct VerifyArgs {
  std::string points, planes, mode = "float";
  std::size_t n = 0;
  std::optional<double> tol;
  double orth_tol = 1e-9;
  bool allow_nonorthogonal = false;
};

int do_verify(const Globals& g, std::ostream& out, const VerifyArgs& a) {
  const auto measures = load_measures(a.points);
  const auto planes = io::read_planes(a.planes);
  VerifyOptions opts;
  opts.tol = a.tol.value_or(default_tol(measures));
  opts.orth_tol = a.orth_tol;
  opts.require_orthogonal = !a.allow_nonorthogonal;
  opts.mode = a.mode == "exact" ? EvalMode::exact : EvalMode::floating;
  const auto report = verify_equipartition(measures, planes, a.n, opts);
  if (g.format == "csv")
    equipartition_csv(out, report);
  else
    emit(out, equipartition_json(report));
  return report.pass ? kOk : kNegative;
}

struct SolveArgs {
  std::string points, out_path;
  std::size_t k = 0, n = 0;
  std::size_t restarts = 64, max_iters = 2000;
  std::uint64_t seed = 42;
  std::optional<double> tol, residual_tol;
  double smoothing = 0.0;
};

int do_solve(const Globals& g, std::ostream& out, std::ostream& err, const SolveArgs& a) {
  const auto measures = load_measures(a.points);
  const std::size_t d = measures.front().dim();
  const std::size_t k = a.k ? a.k : d;
  const std::size_t n = a.n ? a.n : std::min<std::size_t>(2, k);
  SolveOptions opts;
  opts.restarts = a.restarts;
  opts.max_iters = a.max_iters;
  opts.seed = a.seed;
  opts.verify_tol = a.tol.value_or(default_tol(measures));
  opts.residual_tol = a.residual_tol.value_or(*opts.verify_tol * *opts.verify_tol);
  opts.smoothing_width = a.smoothing;
  opts.threads = g.threads;
  const auto r = solve_orthogonal(measures, k, n, opts);
  if (!g.quiet)
    err << "solve: " << to_string(r.status) << " after " << r.restarts_used << " restart(s), residual "
        << num(r.residual) << '\n';

  json j{{"status", to_string(r.status)},
         {"residual", r.residual},
         {"restarts_used", r.restarts_used},
         {"seed", a.seed},
         {"frame", r.config.frame},
         {"offsets", r.config.offsets},
         {"planes", planes_json(r.config.planes)},
         {"report", equipartition_json(r.verified)}};
  if (!a.out_path.empty()) io::write_file(a.out_path, j.dump(2) + "\n");
  if (g.format == "csv")
    equipartition_csv(out, r.verified);
  else
    emit(out, j);
  return r.status == SolveStatus::solved ? kOk : kNegative;
}

int do_pancake(const Globals& g, std::ostream& out, std::ostream& err, const std::string& points,
               const std::string& out_path, double tol) {
  const auto mu = io::read_points(points);
  const auto r = pancake_solve(mu, {.tol = tol});
  if (!g.quiet) err << "pancake: " << to_string(r.status) << " after " << r.evaluations << " evaluation(s)\n";
  json j{{"status", to_string(r.status)},
         {"theta", r.theta},
         {"offsets", r.offsets},
         {"lines", planes_json(r.lines)},
         {"open_masses", r.open_masses},
         {"final_masses", r.final_masses},
         {"boundary_points", r.boundary_points}};
  if (!out_path.empty()) io::write_file(out_path, j.dump(2) + "\n");
  if (g.format == "csv") {
    out << "quadrant,open_mass,final_mass\n";
    for (int q = 0; q < 4; ++q) out << q << ',' << num(r.open_masses[q]) << ',' << num(r.final_masses[q]) << '\n';
  } else {
    emit(out, j);
  }
  return r.status == SolveStatus::solved ? kOk : kNegative;
}

int do_selftest(const Globals& g, std::ostream& out, std::ostream& err, unsigned identity_k, unsigned scan_k,
                unsigned scan_q) {
  json identity = json::array();
  bool pass = true;
  for (unsigned k = 1; k <= identity_k; ++k)
    for (unsigned n = 1; n <= k; ++n) {
      const bool match = build_P(k, n, untruncated_ring_for_P(k, n)) == permutation_sum_P(k, n);
      pass = pass && match;
      identity.push_back({{"k", k}, {"n", n}, {"match", match}});
      if (!g.quiet) err << "selftest: product identity k=" << k << " n=" << n << (match ? " ok" : " MISMATCH") << '\n';
    }
  const auto scan = pstar_headroom_scan(scan_k, scan_q);
  pass = pass && scan.violations.empty();
  if (!g.quiet) err << "selftest: headroom scan " << scan.cases << " cases, " << scan.violations.size() << " violations\n";

  if (g.format == "csv") {
    out << "check,k,n,result\n";
    for (const auto& row : identity)
      out << "identity," << row["k"] << ',' << row["n"] << ',' << (row["match"].get<bool>() ? "pass" : "fail") << '\n';
    out << "headroom," << scan_k << ",," << (scan.violations.empty() ? "pass" : "fail") << '\n';
  } else {
    json j{{"pass", pass},
           {"identity", identity},
           {"headroom",
            {{"k_max", scan_k},
             {"q_max", scan_q},
             {"cases", scan.cases},
             {"violations", scan.violations.size()},
             {"equalities_at_i0", scan.equalities_at_i0},
             {"equalities_n2", scan.equalities_n2}}}};
    emit(out, j);
  }
  return pass ? kOk : kNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal mass partitions: criteria, bounds, verification and solving", "orthopart"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--quiet", g.quiet, "Suppress progress on stderr");
  app.add_option("--threads", g.threads, "Worker threads (default: available cores)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  // criterion
  auto* crit = app.add_subcommand("criterion", "Nonvanishing test for a product of linear forms");
  crit->require_subcommand(1);
  CriterionOptions copts;
  bool no_certificate = false;
  crit->add_option("--term-guard", copts.term_guard, "Abort expansions with more terms than this");
  crit->add_flag("--no-certificate", no_certificate, "Always expand the full product");
  std::string forms_text, dims_text;
  auto* spheres = crit->add_subcommand("spheres", "Product of spheres with the given dimensions");
  spheres->add_option("--dims", dims_text, "Comma separated sphere dimensions")->required();
  spheres->add_option("--forms", forms_text, "Semicolon separated bit strings, optional *count")->required();
  unsigned st_n = 0, st_k = 0;
  bool coordinate_family = false;
  auto* stiefel = crit->add_subcommand("stiefel", "Stiefel manifold of k-frames in R^n");
  stiefel->add_option("--n", st_n)->required();
  stiefel->add_option("--k", st_k)->required();
  auto* stiefel_forms = stiefel->add_option("--forms", forms_text, "Semicolon separated bit strings");
  stiefel->add_flag("--coordinate-family", coordinate_family, "Use e_i repeated n-i times for i = 1..k")
      ->excludes(stiefel_forms);

  // bounds
  std::string b_m = "1", b_k = "2", b_n = "2";
  auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds on the dimension");
  bounds->add_option("--m", b_m, "Number of measures: value or lo..hi");
  bounds->add_option("--k", b_k, "Number of hyperplanes: value or lo..hi");
  bounds->add_option("--n", b_n, "Subset order: value, lo..hi, or k");

  // verify
  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a hyperplane tuple against point sets");
  verify->add_option("--points", va.points, "Comma separated point files")->required();
  verify->add_option("--planes", va.planes, "JSON file of (t0, ..., td) rows")->required();
  verify->add_option("--n", va.n)->required()->check(CLI::PositiveNumber);
  verify->add_option("--tol", va.tol, "Cell fraction tolerance (default 4/sqrt(N))");
  verify->add_option("--orth-tol", va.orth_tol);
  verify->add_option("--mode", va.mode)->check(CLI::IsMember({"exact", "float"}));
  verify->add_flag("--allow-nonorthogonal", va.allow_nonorthogonal);

  // solve
  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Search for mutually orthogonal equipartitioning hyperplanes");
  solve->add_option("--points", sa.points, "Comma separated point files")->required();
  solve->add_option("--k", sa.k, "Number of hyperplanes (default d)");
  solve->add_option("--n", sa.n, "Subset order (default min(2, k))");
  solve->add_option("--restarts", sa.restarts)->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", sa.max_iters)->check(CLI::PositiveNumber);
  solve->add_option("--seed", sa.seed);
  solve->add_option("--tol", sa.tol, "Cell fraction tolerance (default 4/sqrt(N))");
  solve->add_option("--residual-tol", sa.residual_tol, "Residual target (default tol^2)");
  solve->add_option("--smoothing", sa.smoothing, "Sigmoid width during search, 0 for hard sides");
  solve->add_option("--out", sa.out_path, "Also write the result here");

  // pancake
  std::string p_points, p_out;
  double p_tol = 0.0;
  auto* pancake = app.add_subcommand("pancake", "Two perpendicular lines quartering a planar point set");
  pancake->add_option("--points", p_points)->required();
  pancake->add_option("--out", p_out);
  pancake->add_option("--tol", p_tol, "Allowed quadrant deviation as a fraction of the total");

  // selftest
  unsigned t_identity = 4, t_scan = 6, t_q = 6;
  auto* selftest = app.add_subcommand("selftest", "Internal consistency checks");
  selftest->add_option("--identity-k", t_identity);
  selftest->add_option("--scan-k", t_scan);
  selftest->add_option("--scan-q", t_q);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (g.threads == 0) g.threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    if (*crit) {
      copts.use_certificate = !no_certificate;
      if (*spheres) {
        const auto forms = parse_forms(forms_text);
        return do_criterion(g, out, forms, criterion_spheres(forms, parse_dims(dims_text), copts));
      }
      std::vector<GroupElement> forms;
      if (coordinate_family) {
        if (st_k > st_n) throw std::invalid_argument("stiefel needs k <= n");
        for (unsigned i = 0; i < st_k; ++i) forms.insert(forms.end(), st_n - 1 - i, GroupElement::generator(st_k, i));
      } else {
        if (forms_text.empty()) throw std::invalid_argument("stiefel needs --forms or --coordinate-family");
        forms = parse_forms(forms_text);
      }
      return do_criterion(g, out, forms, criterion_stiefel(forms, st_n, st_k, copts));
    }
    if (*bounds) return do_bounds(g, out, b_m, b_k, b_n);
    if (*verify) return do_verify(g, out, va);
    if (*solve) return do_solve(g, out, err, sa);
    if (*pancake) return do_pancake(g, out, err, p_points, p_out, p_tol);
    if (*selftest) return do_selftest(g, out, err, t_identity, t_scan, t_q);
  } catch (const BoundaryPoint& e) {
    err << "error: " << e.what() << '\n';
    return kNegative;
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace orthopart::cli
