// Command-line front end: one verb per object. Outputs are deterministic
// JSON (or CSV for tables) with a metadata block; files are written
// atomically. Exit codes: 0 ok, 2 parse error, 3 cap exceeded, 4 internal
// invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "nopt/collapse.hpp"
#include "nopt/constants.hpp"
#include "nopt/counting.hpp"
#include "nopt/discrepancy.hpp"
#include "nopt/io.hpp"
#include "nopt/minimize.hpp"
#include "nopt/optimal.hpp"
#include "nopt/quantize.hpp"

using nlohmann::json;
using namespace nopt;

namespace {

struct Common {
  std::string field_spec = "Q(i)";
  std::string out_path;
  std::string format = "json";
  std::string config_path;
  uint64_t seed = 1;
  int threads = 1;
  long enum_cap = 100000000;
  long nudge_box = 200;
  long term_cap = 10000000;
  double slack_B = 1.0;
  double nudge_tol = 1e-9;
  std::map<std::string, std::string> config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--field", field_spec, "field spec: Q, Q(i), Q(sqrt:D)");
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--seed", seed, "deterministic seed");
    cmd->add_option("--threads", threads, "worker pool size");
    cmd->add_option("--enum-cap", enum_cap, "enumeration cap");
  }

  void load() {
    if (config_path.empty()) return;
    config = load_config(config_path);
    auto grab = [&](const char* key, auto& slot) {
      auto it = config.find(key);
      if (it != config.end()) {
        std::istringstream ss(it->second);
        ss >> slot;
      }
    };
    grab("seed", seed);
    grab("threads", threads);
    grab("enum_cap", enum_cap);
    grab("nudge_box", nudge_box);
    grab("term_cap", term_cap);
    grab("B", slack_B);
    grab("nudge_tol", nudge_tol);
  }

  const QuadraticField& field() const { return QuadraticField::parse(field_spec); }

  void emit(const QuadraticField& k, const std::string& command, const json& result,
            const std::string& csv_text = "") {
    if (format == "csv" && !csv_text.empty()) {
      std::string payload = "# version=" + std::string(kVersion) +
                            " measure=" + kMeasureConvention + " field=" + k.spec_string() +
                            " command=" + command + " seed=" + std::to_string(seed) + "\n" +
                            csv_text;
      if (out_path.empty())
        std::cout << payload;
      else
        atomic_write(out_path, payload);
      return;
    }
    json doc;
    doc["meta"] = run_metadata(k, command, seed, config);
    doc["result"] = result;
    std::string payload = doc.dump(2) + "\n";
    if (out_path.empty())
      std::cout << payload;
    else
      atomic_write(out_path, payload);
  }
};

json verdict_to_json(const QuadraticField& k, const Verdict& v) {
  json out;
  out["optimal"] = v.optimal;
  json checked = json::array();
  for (auto& [P, l] : v.checked) {
    json c;
    c["p"] = P.p.get_str();
    c["norm"] = P.residue_norm().get_str();
    c["max_level"] = l;
    checked.push_back(c);
  }
  out["checked"] = checked;
  if (v.witness) {
    json w;
    w["p"] = v.witness->P.p.get_str();
    w["norm"] = v.witness->P.residue_norm().get_str();
    w["level"] = v.witness->l;
    w["class_hi"] = v.witness->class_hi.get_str();
    w["class_lo"] = v.witness->class_lo.get_str();
    w["count_hi"] = v.witness->count_hi;
    w["count_lo"] = v.witness->count_lo;
    out["witness"] = w;
  }
  return out;
}

VPoint parse_vpoint(const QuadraticField& k, const std::string& s) {
  VPoint v;
  std::istringstream ss(s);
  char comma;
  if (!(ss >> v.v0)) throw ParseError("bad V-point: " + s);
  if (ss >> comma >> v.v1) {
    // two coordinates given
  } else if (!k.is_rational()) {
    v.v1 = k.is_imaginary() ? 0.0 : v.v0;
  }
  return v;
}

Region load_region(const QuadraticField& k, const std::string& region_file,
                   const std::string& disk_inline, const std::string& box_inline,
                   const std::string& grid_file) {
  if (!region_file.empty()) {
    std::ifstream in(region_file);
    if (!in) throw ParseError("cannot open " + region_file);
    std::stringstream buf;
    buf << in.rdbuf();
    return Region::from_json(k, buf.str());
  }
  if (!disk_inline.empty()) {
    double cx, cy, r;
    char c;
    std::istringstream ss(disk_inline);
    if (!(ss >> cx >> c >> cy >> c >> r)) throw ParseError("--disk wants cx,cy,r");
    return Region::make_disk(k, cx, cy, r);
  }
  if (!box_inline.empty()) {
    double ax, bx, ay, by;
    char c;
    std::istringstream ss(box_inline);
    if (!(ss >> ax >> c >> bx >> c >> ay >> c >> by))
      throw ParseError("--box wants ax,bx,ay,by");
    return Region::make_box(k, ax, bx, ay, by);
  }
  if (!grid_file.empty()) return Region::make_level_set(load_grid(grid_file));
  throw ParseError("a region is required (--region, --disk, --box, or --grid)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for p-orderings, n-optimal sets, unit counting, and "
               "energy-minimizing measures in quadratic fields"};
  app.require_subcommand(1);

  Common C;

  // ---- field-info ----
  auto* cmd_info = app.add_subcommand("field-info", "field invariants");
  C.attach(cmd_info);

  // ---- p-ordering ----
  auto* cmd_pord = app.add_subcommand("p-ordering", "greedy p-ordering and its valuations");
  long arg_p = 2, arg_idx = 0, arg_n = 8;
  std::string arg_set;
  cmd_pord->add_option("--p", arg_p, "rational prime below the ideal");
  cmd_pord->add_option("--prime-index", arg_idx, "which prime above p (split: 0 or 1)");
  cmd_pord->add_option("--n", arg_n, "ordering length n");
  cmd_pord->add_option("--set", arg_set, "JSON set file (default: ambient ring)");
  C.attach(cmd_pord);

  // ---- factorial ----
  auto* cmd_fact = app.add_subcommand("factorial", "generalized factorial n!_k");
  long fact_n = 6;
  cmd_fact->add_option("--n", fact_n, "n");
  C.attach(cmd_fact);

  // ---- certify ----
  auto* cmd_cert = app.add_subcommand("certify", "n-optimality certification, both routes");
  std::string cert_set;
  cmd_cert->add_option("--set", cert_set, "JSON set file")->required();
  C.attach(cmd_cert);

  // ---- search ----
  auto* cmd_search = app.add_subcommand("search", "exhaustive n-optimal search in a box");
  long search_n = 2, search_box = 4, search_resume = 0, search_nodecap = 50000000;
  cmd_search->add_option("--n", search_n, "n");
  cmd_search->add_option("--box", search_box, "coordinate bound");
  cmd_search->add_option("--resume", search_resume, "resume token (branch index)");
  cmd_search->add_option("--node-cap", search_nodecap, "DFS node cap");
  C.attach(cmd_search);

  // ---- count ----
  auto* cmd_count = app.add_subcommand("count", "norm-pair counts |x(a-x)| <= X^2");
  std::string count_a = "1";
  double count_X = 2;
  std::string count_Xgrid;
  long count_M = 0;
  cmd_count->add_option("--a", count_a, "element a");
  cmd_count->add_option("--X", count_X, "X");
  cmd_count->add_option("--X-grid", count_Xgrid, "comma list of X values: scaling fit mode");
  cmd_count->add_option("--M", count_M, "unit tail threshold for S(a,X)");
  C.attach(cmd_count);

  // ---- unit-eq ----
  auto* cmd_ueq = app.add_subcommand("unit-eq", "unit equation census");
  std::string ueq_a1 = "1", ueq_a2 = "1", ueq_a3 = "1";
  long ueq_bound = 24;
  double ueq_avgX = 0;
  cmd_ueq->add_option("--a1", ueq_a1, "alpha_1");
  cmd_ueq->add_option("--a2", ueq_a2, "alpha_2");
  cmd_ueq->add_option("--a3", ueq_a3, "alpha_3");
  cmd_ueq->add_option("--bound", ueq_bound, "unit exponent bound");
  cmd_ueq->add_option("--average-X", ueq_avgX, "sum nu over orbit pairs with |a1 a2| <= X^2");
  C.attach(cmd_ueq);

  // ---- ideal-sum ----
  auto* cmd_isum = app.add_subcommand("ideal-sum", "principal-ideal Tauberian sums");
  double isum_X = 100;
  int isum_r = 0;
  cmd_isum->add_option("--X", isum_X, "norm bound");
  cmd_isum->add_option("--r", isum_r, "log-weight power");
  C.attach(cmd_isum);

  // ---- sector-primes ----
  auto* cmd_sect = app.add_subcommand("sector-primes", "prime elements in sector dilates");
  double sect_rlo = 1, sect_rhi = 2, sect_tlo = 0.1, sect_thi = 1.4;
  std::string sect_ts = "5,10,15,20,25,30,35,40";
  cmd_sect->add_option("--r-lo", sect_rlo, "annulus inner radius");
  cmd_sect->add_option("--r-hi", sect_rhi, "annulus outer radius");
  cmd_sect->add_option("--theta-lo", sect_tlo, "sector start angle");
  cmd_sect->add_option("--theta-hi", sect_thi, "sector end angle");
  cmd_sect->add_option("--dilations", sect_ts, "comma list of dilation factors");
  C.attach(cmd_sect);

  // ---- energy ----
  auto* cmd_energy = app.add_subcommand("energy", "grid or discrete log-energy");
  std::string energy_grid, energy_set, energy_T = "";
  double energy_sx = 1, energy_sy = 1;
  cmd_energy->add_option("--grid", energy_grid, "grid snapshot file");
  cmd_energy->add_option("--set", energy_set, "JSON set file (discrete energy)");
  cmd_energy->add_option("--T", energy_T, "comma list of truncation levels");
  cmd_energy->add_option("--sx", energy_sx, "rescale coordinate 1");
  cmd_energy->add_option("--sy", energy_sy, "rescale coordinate 2");
  C.attach(cmd_energy);

  // ---- energy-min ----
  auto* cmd_emin = app.add_subcommand("energy-min", "constrained energy minimizer");
  long emin_res = 256, emin_rounds = 64;
  double emin_box = 0, emin_tol = 1e-7;
  std::string emin_grid_out, emin_trace_out;
  cmd_emin->add_option("--res", emin_res, "grid resolution (>= 64)");
  cmd_emin->add_option("--box", emin_box, "box halfwidth");
  cmd_emin->add_option("--tol", emin_tol, "energy tolerance");
  cmd_emin->add_option("--max-rounds", emin_rounds, "iteration cap");
  cmd_emin->add_option("--grid-out", emin_grid_out, "grid snapshot output path");
  cmd_emin->add_option("--trace-out", emin_trace_out, "energy trace CSV path");
  C.attach(cmd_emin);

  // ---- collapse ----
  auto* cmd_coll = app.add_subcommand("collapse", "Steiner-type collapsing of a grid");
  std::string coll_in, coll_out;
  int coll_axis = 0;
  double coll_cx = 0, coll_cy = 0;
  bool coll_auto = false;
  cmd_coll->add_option("--grid", coll_in, "input grid snapshot")->required();
  cmd_coll->add_option("--grid-out", coll_out, "output grid snapshot");
  cmd_coll->add_option("--axis", coll_axis, "coordinate to collapse (0 or 1)");
  cmd_coll->add_option("--center", coll_cx, "collapse center");
  cmd_coll->add_option("--center-y", coll_cy, "second center coordinate (complex)");
  cmd_coll->add_flag("--auto-center", coll_auto, "use the mass median / centroid");
  C.attach(cmd_coll);

  // ---- quantize ----
  auto* cmd_quant = app.add_subcommand("quantize", "lattice quantizer E_n of a region");
  std::string quant_region, quant_disk, quant_box, quant_grid;
  long quant_n = 100;
  cmd_quant->add_option("--region", quant_region, "region JSON file");
  cmd_quant->add_option("--disk", quant_disk, "inline disk cx,cy,r");
  cmd_quant->add_option("--box", quant_box, "inline box ax,bx,ay,by");
  cmd_quant->add_option("--grid", quant_grid, "indicator grid snapshot");
  cmd_quant->add_option("--n", quant_n, "target count n");
  C.attach(cmd_quant);

  // ---- discrepancy ----
  auto* cmd_disc = app.add_subcommand("discrepancy", "lattice point discrepancy D_t(U, v)");
  std::string disc_region, disc_disk, disc_box, disc_grid, disc_t = "1", disc_v = "0,0";
  long disc_budget = 0;
  cmd_disc->add_option("--region", disc_region, "region JSON file");
  cmd_disc->add_option("--disk", disc_disk, "inline disk cx,cy,r");
  cmd_disc->add_option("--box", disc_box, "inline box ax,bx,ay,by");
  cmd_disc->add_option("--grid", disc_grid, "indicator grid snapshot");
  cmd_disc->add_option("--t", disc_t, "dilation t (one or two coordinates)");
  cmd_disc->add_option("--v", disc_v, "shift v");
  cmd_disc->add_option("--max-budget", disc_budget,
                       "sample budget: report a maximal-discrepancy lower bound");
  C.attach(cmd_disc);

  // ---- find-bad-dilate ----
  auto* cmd_bad = app.add_subcommand("find-bad-dilate", "search for |D_t(U,v)| > 1");
  std::string bad_region, bad_disk, bad_box, bad_grid;
  long bad_budget = 1000000;
  cmd_bad->add_option("--region", bad_region, "region JSON file");
  cmd_bad->add_option("--disk", bad_disk, "inline disk cx,cy,r");
  cmd_bad->add_option("--box", bad_box, "inline box ax,bx,ay,by");
  cmd_bad->add_option("--grid", bad_grid, "indicator grid snapshot");
  cmd_bad->add_option("--budget", bad_budget, "probe budget");
  C.attach(cmd_bad);

  // ---- constants ----
  auto* cmd_const = app.add_subcommand("constants", "analytic constants bundle");
  C.attach(cmd_const);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    C.load();
    const QuadraticField& k = C.field();

    if (cmd_info->parsed()) {
      json r;
      r["d"] = k.d();
      r["disc"] = k.disc().get_str();
      r["degree"] = k.degree();
      r["signature"] = {k.r1(), k.r2()};
      r["omega"] = k.omega_string();
      r["class_number"] = k.class_number();
      r["torsion_order"] = k.torsion_order();
      r["regulator"] = k.regulator();
      if (k.unit_rank() == 1) {
        r["fundamental_unit"] = format_elem(k, k.fundamental_unit());
        r["fundamental_unit_norm"] = k.fundamental_unit_norm();
      }
      C.emit(k, "field-info", r);
    } else if (cmd_pord->parsed()) {
      auto primes = factor_rational_prime(k, mpz_class(arg_p));
      if (arg_idx < 0 || arg_idx >= (long)primes.size())
        throw ParseError("--prime-index out of range");
      const PrimeIdeal& P = primes[arg_idx];
      POrderingResult res = arg_set.empty()
                                ? p_ordering_ambient(k, P, arg_n)
                                : p_ordering(k, load_set(k, arg_set), P, arg_n);
      json r;
      r["prime"] = {{"p", P.p.get_str()}, {"norm", P.residue_norm().get_str()}};
      r["sequence"] = set_to_json(k, res.sequence);
      r["valuations"] = res.valuations;
      C.emit(k, "p-ordering", r);
    } else if (cmd_fact->parsed()) {
      FactoredIdeal f = generalized_factorial(k, fact_n);
      json r;
      r["n"] = fact_n;
      json factors = json::array();
      for (auto& [P, e] : f.factors)
        factors.push_back({{"p", P.p.get_str()},
                           {"norm", P.residue_norm().get_str()},
                           {"exponent", e}});
      r["factors"] = factors;
      r["norm"] = f.norm.get_str();
      if (fact_n >= 1) {
        auto nl = factorial_norm_log(k, fact_n);
        r["log_norm"] = nl.log_norm;
        r["excess_rate"] = nl.excess_rate;
      }
      C.emit(k, "factorial", r);
    } else if (cmd_cert->parsed()) {
      std::vector<Elem> S = load_set(k, cert_set);
      Verdict v = certify_n_optimal(k, S);
      bool via_vol = certify_via_volume(k, S);
      json r = verdict_to_json(k, v);
      r["via_volume"] = via_vol;
      r["routes_agree"] = (v.optimal == via_vol);
      if (v.optimal != via_vol) throw InvariantError("certification routes disagree");
      C.emit(k, "certify", r);
    } else if (cmd_search->parsed()) {
      SearchOptions opt;
      opt.threads = C.threads;
      opt.node_cap = search_nodecap;
      opt.resume_branch = search_resume;
      SearchStatus st;
      auto sets = search_n_optimal(k, search_n, search_box, opt, &st);
      json r;
      r["complete"] = st.complete;
      r["nodes"] = st.nodes;
      if (!st.complete) r["resume_token"] = st.next_branch;
      json arr = json::array();
      for (auto& S : sets) arr.push_back(set_to_json(k, S));
      r["sets"] = arr;
      r["count"] = sets.size();
      C.emit(k, "search", r);
      if (!st.complete) return 3;
    } else if (cmd_count->parsed()) {
      Elem a = parse_elem(k, count_a);
      if (!count_Xgrid.empty()) {
        std::vector<double> Xs;
        std::vector<Elem> as;
        std::stringstream ss(count_Xgrid);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          Xs.push_back(std::stod(tok));
          as.push_back(a);
        }
        FitResult fit = fit_count_scaling(k, as, Xs);
        std::string csv = "X,count\n";
        json rows = json::array();
        for (size_t i = 0; i < Xs.size(); ++i) {
          long c = count_norm_pairs(k, a, Xs[i]).count;
          csv += std::to_string(Xs[i]) + "," + std::to_string(c) + "\n";
          rows.push_back({{"X", Xs[i]}, {"count", c}});
        }
        csv += "# slope=" + std::to_string(fit.slope) +
               " slope_minus_bound=" + std::to_string(fit.slope_minus_bound) + "\n";
        json r;
        r["rows"] = rows;
        r["slope"] = fit.slope;
        r["slope_minus_bound"] = fit.slope_minus_bound;
        r["note"] = fit.note;
        C.emit(k, "count", r, csv);
      } else {
        FundamentalDomain F = build_fundamental_domain(k, C.nudge_box);
        NormPairCount np = count_norm_pairs(k, a, count_X, true, C.enum_cap);
        SaxRecord sax = count_S_aX(k, F, a, count_X, count_M, C.enum_cap, C.slack_B);
        json r;
        r["count"] = np.count;
        if (sax.slack_warning) r["slack_warning"] = "||a|| < X e^{-B}";
        r["solutions"] = set_to_json(k, np.solutions);
        r["sax_count"] = sax.count;
        r["sax_tail_count"] = sax.tail_count;
        r["reduction_ok"] = (np.count <= 2 * sax.count + 2);
        C.emit(k, "count", r);
      }
    } else if (cmd_ueq->parsed()) {
      Elem a1 = parse_elem(k, ueq_a1), a2 = parse_elem(k, ueq_a2), a3 = parse_elem(k, ueq_a3);
      json r;
      if (ueq_avgX > 0) {
        AvgUnitEqResult avg = average_unit_equation_sum(k, a3, ueq_avgX, ueq_bound);
        r["sum_nu"] = avg.total;
        r["norm_pair_count"] = avg.norm_pair_count;
        r["identity_holds"] = avg.match;
        if (!avg.match) throw InvariantError("average unit-equation identity failed");
      } else {
        UnitEqResult ue = unit_equation_solutions(k, a1, a2, a3, ueq_bound);
        r["nu"] = ue.nu;
        r["complete"] = ue.complete;
        r["certified_bound"] = ue.certified_bound;
        json sols = json::array();
        for (auto& [l1, l2] : ue.solutions)
          sols.push_back({format_elem(k, l1), format_elem(k, l2)});
        r["solutions"] = sols;
        long evertse = 3;
        for (int i = 0; i < k.degree(); ++i) evertse *= 7;
        r["evertse_bound"] = evertse;
        if (ue.nu > evertse) throw InvariantError("Evertse bound violated");
      }
      C.emit(k, "unit-eq", r);
    } else if (cmd_isum->parsed()) {
      IdealSumResult res = principal_ideal_sum(k, isum_X, isum_r, C.enum_cap);
      json r;
      r["X"] = isum_X;
      r["r"] = isum_r;
      r["sum"] = res.sum;
      r["terms"] = res.terms;
      r["main_term"] = res.main_term;
      r["ratio"] = res.ratio;
      std::string csv = "X,r,sum,terms,main_term,ratio\n" + std::to_string(isum_X) + "," +
                        std::to_string(isum_r) + "," + std::to_string(res.sum) + "," +
                        std::to_string(res.terms) + "," + std::to_string(res.main_term) +
                        "," + std::to_string(res.ratio) + "\n";
      C.emit(k, "ideal-sum", r, csv);
    } else if (cmd_sect->parsed()) {
      std::vector<double> ts;
      std::stringstream ss(sect_ts);
      std::string tok;
      while (std::getline(ss, tok, ',')) ts.push_back(std::stod(tok));
      auto rows = sector_prime_survey(k, sect_rlo, sect_rhi, sect_tlo, sect_thi, ts, C.threads);
      json r = json::array();
      std::string csv = "t,points,prime_points\n";
      bool empty_dilate = false;
      for (auto& row : rows) {
        r.push_back({{"t", row.t}, {"points", row.points}, {"primes", row.prime_points}});
        csv += std::to_string(row.t) + "," + std::to_string(row.points) + "," +
               std::to_string(row.prime_points) + "\n";
        if (row.prime_points == 0) empty_dilate = true;
      }
      json res;
      res["rows"] = r;
      res["empty_dilate_flag"] = empty_dilate;
      C.emit(k, "sector-primes", res, csv);
    } else if (cmd_energy->parsed()) {
      json r;
      if (!energy_set.empty()) {
        std::vector<Elem> S = load_set(k, energy_set);
        VPoint s{energy_sx, energy_sy};
        if (k.is_rational()) s.v1 = 0;
        r["discrete_energy"] = energy_discrete(k, S, s);
      } else if (!energy_grid.empty()) {
        DensityGrid g = load_grid(energy_grid);
        EnergyOptions opt;
        if (!energy_T.empty()) {
          std::stringstream ss(energy_T);
          std::string tok;
          while (std::getline(ss, tok, ',')) opt.T_values.push_back(std::stod(tok));
        }
        EnergyReport rep = energy(g, opt);
        r["I"] = rep.I;
        r["mass"] = rep.mass;
        r["quadrature_error"] = rep.quadrature_error;
        json ts = json::array();
        for (auto& [T, IT] : rep.I_T) ts.push_back({{"T", T}, {"I_T", IT}});
        r["I_T"] = ts;
      } else {
        throw ParseError("energy needs --grid or --set");
      }
      C.emit(k, "energy", r);
    } else if (cmd_emin->parsed()) {
      MinimizeParams mp;
      mp.resolution = emin_res;
      mp.box_halfwidth = emin_box;
      mp.tolerance = emin_tol;
      mp.max_rounds = emin_rounds;
      MinimizeResult res = minimize_energy(k, mp);
      if (!emin_grid_out.empty()) save_grid(res.grid, emin_grid_out);
      if (!emin_trace_out.empty()) {
        std::string csv = "round,step,I,mass,accepted\n";
        for (auto& row : res.trace)
          csv += std::to_string(row.round) + "," + row.step + "," + std::to_string(row.I) +
                 "," + std::to_string(row.mass) + "," + (row.accepted ? "1" : "0") + "\n";
        atomic_write(emin_trace_out, csv);
      }
      json r;
      r["converged"] = res.converged;
      r["rounds"] = res.rounds;
      r["I"] = res.report.I;
      r["mass"] = res.report.mass;
      r["quadrature_error"] = res.report.quadrature_error;
      if (!emin_grid_out.empty()) r["grid_out"] = emin_grid_out;
      C.emit(k, "energy-min", r);
      if (!res.converged) return 3;
    } else if (cmd_coll->parsed()) {
      DensityGrid g = load_grid(coll_in);
      double ccx = coll_cx, ccy = coll_cy;
      if (coll_auto) {
        if (QuadraticField::get(g.d).is_imaginary()) {
          auto [mx, my] = mass_centroid(g);
          ccx = mx;
          ccy = my;
        } else {
          ccx = mass_median(g, coll_axis);
        }
      }
      DensityGrid c = collapse(g, coll_axis, ccx, ccy);
      if (!coll_out.empty()) save_grid(c, coll_out);
      json r;
      r["mass_before"] = g.mass();
      r["mass_after"] = c.mass();
      r["I_before"] = energy(g).I;
      r["I_after"] = energy(c).I;
      r["center"] = {ccx, ccy};
      C.emit(k, "collapse", r);
    } else if (cmd_quant->parsed()) {
      Region U = load_region(k, quant_region, quant_disk, quant_box, quant_grid);
      QuantizeResult q = quantize(k, U, quant_n, C.enum_cap);
      json r;
      r["n"] = quant_n;
      r["count"] = q.count;
      r["scale"] = q.scale;
      r["points"] = set_to_json(k, q.points);
      if (q.count >= 2) r["discrete_energy"] = q.discrete_energy;
      C.emit(k, "quantize", r);
    } else if (cmd_disc->parsed()) {
      Region U = load_region(k, disc_region, disc_disk, disc_box, disc_grid);
      VPoint t = parse_vpoint(k, disc_t), v = parse_vpoint(k, disc_v);
      json r;
      if (disc_budget > 0) {
        auto mb = max_discrepancy_lower(k, U, t, disc_budget, C.seed);
        r["max_discrepancy_lower"] = mb.bound;
        r["witness_v"] = {mb.witness_v.v0, mb.witness_v.v1};
        r["samples"] = mb.samples;
      } else {
        auto d = discrepancy(k, U, t, v, C.enum_cap);
        r["N"] = d.N;
        r["main_term"] = d.main_term;
        r["D"] = d.D;
      }
      C.emit(k, "discrepancy", r);
    } else if (cmd_bad->parsed()) {
      Region U = load_region(k, bad_region, bad_disk, bad_box, bad_grid);
      auto w = find_bad_dilate(k, U, bad_budget, C.seed);
      json r;
      r["found"] = w.has_value();
      if (w) {
        r["t"] = {w->t.v0, w->t.v1};
        r["v"] = {w->v.v0, w->v.v1};
        r["N"] = w->N;
        r["main_term"] = w->main_term;
        r["D"] = w->D;
        r["probes"] = w->probes;
      } else {
        r["exhausted_budget"] = bad_budget;
      }
      C.emit(k, "find-bad-dilate", r);
    } else if (cmd_const->parsed()) {
      const FieldConstants& fc = field_constants(k, C.term_cap);
      json r;
      auto put = [&](const char* name, const ValueWithError& v) {
        r[name] = {{"value", v.value}, {"error", v.error}};
      };
      put("rho", fc.rho);
      put("gamma_k", fc.gamma_k);
      put("gamma_Q", fc.gamma_Q);
      put("L1", fc.L1);
      put("L1_prime", fc.L1prime);
      put("energy_lower_constant", fc.bound);
      r["route_gap"] = fc.route_gap;
      r["routes"] = {"L-series at 1 (primary)", "Laurent expansion, Richardson (check)"};
      r["term_cap"] = fc.term_cap;
      C.emit(k, "constants", r);
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
