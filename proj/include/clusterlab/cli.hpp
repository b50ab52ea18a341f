#pragma once

// Command-line front end. run() returns the process exit code:
// 0 success, 1 invalid arguments, 2 failed identity check, 3 capacity error.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "clusterlab/duality.hpp"
#include "clusterlab/io.hpp"
#include "clusterlab/meanfield.hpp"
#include "clusterlab/symmetry.hpp"

namespace clusterlab::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kCheckFailed = 2, kCapacity = 3 };

using nlohmann::json;

inline json conventions_json() {
  return {{"mu_y_phase", to_string(kMuPhase)},
          {"parity_tie", "P=+1 (even Z-parity sector)"},
          {"string_order", "decorated: (-1)^(N-2) X_1 Y_2 Z..Z Y_(N-1) X_N"},
          {"duality_boundary_reading", to_string(BoundaryReading::corrected)},
          {"symmetry_tail", "searched"},
          {"energy_scale", kEnergyScale}};
}

inline void emit_json(const json& j, const std::string& out, std::ostream& os) {
  if (out.empty()) {
    os << j.dump(2) << "\n";
  } else {
    write_file_atomic(out, j.dump(2) + "\n");
  }
}

inline std::string joined_command(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

inline ChainSpec parse_extents(const std::string& text) {
  std::vector<int> ext;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    const int v = std::stoi(part, &used);
    if (used != part.size() || v < 1) throw std::invalid_argument("bad extents '" + text + "'");
    ext.push_back(v);
  }
  if (ext.empty()) throw std::invalid_argument("bad extents '" + text + "'");
  return ChainSpec::hypercubic(ext, Boundary::periodic);
}

inline json residual_json(const DualityResidual& r) {
  return {{"n_sites", r.n_sites},
          {"lambda", r.lambda},
          {"identity", to_string(r.identity)},
          {"reading", to_string(r.reading)},
          {"max_entry_deviation", r.max_entry_deviation},
          {"bulk_deviation", r.bulk_deviation},
          {"phase_convention", r.phase_convention},
          {"alternative_phase_deviation", r.alternative_phase_deviation},
          {"tolerance", kDualityTolerance}};
}

// ---------------------------------------------------------------------------
// selftest

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
};

inline std::vector<Check> selftest_checks() {
  std::vector<Check> out;
  auto add = [&](std::string name, bool pass, double value) { out.push_back({std::move(name), pass, value}); };

  {
    const auto spec = ChainSpec::chain(8, 0.0, Boundary::periodic);
    const auto obs = evaluate_observables(spec);
    add("cluster_energy_N8", std::abs(obs.energy + 8.0) < 1e-10 && obs.ground_degeneracy == 1, obs.energy);
    add("cluster_string_order_N8", std::abs(obs.string_order - 1.0) < 1e-10, obs.string_order);
  }
  {
    double worst = 0.0;
    for (int n : {6, 8, 10})
      for (int i = 0; i <= 8; ++i) {
        const double l = 0.25 * i;
        const double e = ground_state(build_hamiltonian(ChainSpec::chain(n, l, Boundary::periodic))).energy;
        worst = std::max(worst, std::abs(e - ground_energy_ff(l, n)));
      }
    add("ed_vs_free_fermion", worst < 1e-9, worst);
  }
  {
    double worst = 0.0;
    for (int n : {4, 6, 8}) {
      worst = std::max(worst, verify_duality_identity(n, 0.0, DualityIdentity::open_cluster).max_entry_deviation);
      worst = std::max(worst, verify_duality_identity(n, 0.0, DualityIdentity::periodic_cluster).max_entry_deviation);
      for (double l : {0.5, 2.0})
        worst = std::max(worst, verify_duality_identity(n, l, DualityIdentity::periodic_full).max_entry_deviation);
    }
    add("duality_identities", worst <= 1e-12, worst);
  }
  {
    double worst = 0.0;
    for (double l : {0.25, 0.5, 2.0, 4.0}) worst = std::max(worst, std::abs(gap(l) - l * gap(1.0 / l)));
    add("gap_self_duality", worst < 1e-9, worst);
  }
  {
    const auto ops = logical_operators(8);
    const auto r = verify_algebra(ops, 8);
    const double dev = dense_algebra_deviation(ops);
    add("symmetry_algebra_L8", r.squares_ok && r.pattern_ok && r.commutes_with_H0 && dev < 1e-12, dev);
  }
  {
    const double c = geometric_entanglement(build_cluster_state(ChainSpec::chain(8, 0.0, Boundary::periodic))).epsilon;
    add("cluster_entanglement_N8", std::abs(c - 4.0) < 1e-6, c);
    const double g = geometric_entanglement(ghz_state(8)).epsilon;
    add("ghz_entanglement_N8", std::abs(g - 1.0) < 1e-6, g);
  }
  {
    const auto s = susceptibility(ChainSpec::hypercubic({8}), 0);
    add("meanfield_sum_rule", std::abs(s.sum_rule - 1.0) < 1e-10, s.sum_rule);
    add("meanfield_quadrature", std::abs(s.chi - s.chi_quadrature) < 1e-8, std::abs(s.chi - s.chi_quadrature));
  }
  return out;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"clusterlab: cluster-Ising chain toolkit", "clusterlab"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "ground-state observables and geometric entanglement over a lambda grid");
  std::vector<int> sweep_n;
  std::string sweep_lambda = "0:2:0.02", sweep_boundary = "periodic", sweep_out = ".";
  std::uint64_t seed = OptimizerOptions{}.seed;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool no_cache = false;
  std::vector<std::string> plots;
  sweep->add_option("--n", sweep_n, "chain lengths (even, <= 16)")->required()->delimiter(',');
  sweep->add_option("--lambda", sweep_lambda, "start:stop:step or a single value")->capture_default_str();
  sweep->add_option("--boundary", sweep_boundary, "periodic | open")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output directory")->capture_default_str();
  sweep->add_option("--seed", seed, "optimizer seed")->capture_default_str();
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_flag("--no-cache", no_cache, "ignore and do not write the results cache");
  sweep->add_option("--plot", plots, "x:y column pair for an SVG (repeatable)");

  // dispersion
  auto* disp = app.add_subcommand("dispersion", "Bogoliubov modes of one fermion sector");
  int disp_n = 12;
  double disp_lambda = 0.5;
  std::string disp_sector = "antiperiodic", disp_out;
  disp->add_option("--n", disp_n)->capture_default_str();
  disp->add_option("--lambda", disp_lambda)->capture_default_str();
  disp->add_option("--sector", disp_sector, "periodic | antiperiodic")->capture_default_str();
  disp->add_option("--out", disp_out, "JSON file (default stdout)");

  // duality-check
  auto* dual = app.add_subcommand("duality-check", "exact matrix check of a duality identity");
  int dual_n = 6;
  double dual_lambda = 0.0;
  std::string dual_identity = "full", dual_reading = "corrected", dual_out;
  dual->add_option("--n", dual_n)->capture_default_str();
  dual->add_option("--lambda", dual_lambda)->capture_default_str();
  dual->add_option("--identity", dual_identity, "open | periodic-cluster | full")->capture_default_str();
  dual->add_option("--reading", dual_reading, "corrected | printed")->capture_default_str();
  dual->add_option("--out", dual_out, "JSON file (default stdout)");

  // symmetry-check
  auto* sym = app.add_subcommand("symmetry-check", "logical-operator algebra of the open cluster chain");
  std::vector<int> sym_lengths{8, 14, 20, 26};
  std::string sym_out;
  sym->add_option("--L", sym_lengths, "chain lengths")->delimiter(',')->capture_default_str();
  sym->add_option("--out", sym_out, "JSON file (default stdout)");

  // entanglement
  auto* ent = app.add_subcommand("entanglement", "geometric entanglement of one state");
  int ent_n = 8;
  double ent_lambda = 0.0;
  std::string ent_state = "ground", ent_boundary = "periodic", ent_out;
  bool ent_full = false;
  ent->add_option("--n", ent_n)->capture_default_str();
  ent->add_option("--lambda", ent_lambda)->capture_default_str();
  ent->add_option("--boundary", ent_boundary)->capture_default_str();
  ent->add_option("--state", ent_state, "ground | cluster | ghz | dual")->capture_default_str();
  ent->add_option("--seed", seed)->capture_default_str();
  ent->add_flag("--full", ent_full, "also optimize all 2N angles (N <= 10)");
  ent->add_option("--out", ent_out, "JSON file (default stdout)");

  // meanfield
  auto* mf = app.add_subcommand("meanfield", "cluster susceptibility and the mean-field critical coupling");
  std::string mf_extents = "8", mf_out;
  int mf_site = 0;
  mf->add_option("--extents", mf_extents, "periodic lattice, e.g. 8 or 3x3")->capture_default_str();
  mf->add_option("--site", mf_site)->capture_default_str();
  mf->add_option("--out", mf_out, "JSON file (default stdout)");

  // selftest
  auto* self = app.add_subcommand("selftest", "invariant suite at N <= 10");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    os << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    os << tool_version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  try {
    if (*sweep) {
      const auto t0 = std::chrono::steady_clock::now();
      const Boundary b = parse_boundary(sweep_boundary);
      const auto grid = parse_lambda_range(sweep_lambda);
      if (plots.empty()) plots = {"lambda:geo_ent_per_site", "lambda:geo_ent_deriv"};
      std::vector<std::pair<std::string, std::string>> plot_cols;
      for (const auto& p : plots) {
        const auto c = p.find(':');
        if (c == std::string::npos) throw std::invalid_argument("--plot expects x:y");
        plot_cols.emplace_back(p.substr(0, c), p.substr(c + 1));
        column_value(SweepRecord{}, plot_cols.back().first);
        column_value(SweepRecord{}, plot_cols.back().second);
      }
      for (int n : sweep_n) {
        if (n > 16) throw CapacityError("sweep: N > 16");
        if (n < 4 || n % 2) throw std::invalid_argument("sweep: N must be even and >= 4");
      }
      OptimizerOptions opt;
      opt.seed = seed;
      const SweepCache cache(cache_directory(), !no_cache);
      std::vector<SweepRecord> all;
      json manifest;
      manifest["command_line"] = joined_command(argc, argv);
      manifest["seed"] = seed;
      manifest["tool_version"] = tool_version();
      manifest["conventions"] = conventions_json();
      manifest["cache_directory"] = no_cache ? "" : cache.directory().string();
      const std::filesystem::path out(sweep_out);
      for (int n : sweep_n) {
        const auto spec = ChainSpec::chain(n, grid.front(), b);
        int hits = 0;
        const auto rows = run_sweep(spec, grid, opt, jobs, &cache, &hits);
        const std::string name = "sweep_N" + std::to_string(n) + "_" + to_string(b) + ".csv";
        write_file_atomic(out / name, to_csv(rows));
        manifest["files"].push_back(name);
        manifest["specs"].push_back(spec.canonical());
        manifest["lambda_star"][std::to_string(n)] = derivative_peak(rows);
        manifest["cache_hits"][std::to_string(n)] = hits;
        all.insert(all.end(), rows.begin(), rows.end());
      }
      if (all.size() >= 2) {
        for (const auto& [x, y] : plot_cols) {
          const std::string name = std::string("sweep_") + to_string(b) + "_" + x + "_" + y + ".svg";
          write_file_atomic(out / name, emit_svg(all, x, y));
          manifest["files"].push_back(name);
        }
      }
      manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
      return kOk;
    }
    if (*disp) {
      const auto s = parse_fermion_sector(disp_sector);
      json modes = json::array();
      for (const auto& m : dispersion(disp_lambda, disp_n, s))
        modes.push_back({{"k", m.k},
                         {"theta", m.theta},
                         {"Lambda", m.Lambda},
                         {"eps", m.eps},
                         {"delta", m.delta},
                         {"u", m.u},
                         {"v_re", m.v.real()},
                         {"v_im", m.v.imag()},
                         {"degenerate", m.degenerate}});
      json j{{"n_sites", disp_n},
             {"lambda", disp_lambda},
             {"sector", to_string(s)},
             {"spin_parity", spin_parity_of(s)},
             {"energy_scale", kEnergyScale},
             {"modes", modes},
             {"bdg_spectrum", bdg_spectrum(disp_lambda, disp_n, s)},
             {"sector_ground_energy", sector_ground_energy(disp_lambda, disp_n, s)},
             {"gap_thermodynamic", gap(disp_lambda)}};
      emit_json(j, disp_out, os);
      return kOk;
    }
    if (*dual) {
      DualityIdentity id;
      if (dual_identity == "full") id = DualityIdentity::periodic_full;
      else if (dual_identity == "open") id = DualityIdentity::open_cluster;
      else if (dual_identity == "periodic-cluster") id = DualityIdentity::periodic_cluster;
      else throw std::invalid_argument("--identity must be open, periodic-cluster or full");
      BoundaryReading reading;
      if (dual_reading == "corrected") reading = BoundaryReading::corrected;
      else if (dual_reading == "printed") reading = BoundaryReading::printed;
      else throw std::invalid_argument("--reading must be corrected or printed");
      const auto r = verify_duality_identity(dual_n, dual_lambda, id, reading);
      const bool ok = r.max_entry_deviation <= kDualityTolerance;
      auto j = residual_json(r);
      j["pass"] = ok;
      emit_json(j, dual_out, os);
      return ok ? kOk : kCheckFailed;
    }
    if (*sym) {
      const auto s = verify_algebra_lengths(sym_lengths);
      json reports = json::array();
      bool ok = true;
      for (std::size_t i = 0; i < s.reports.size(); ++i) {
        const auto& r = s.reports[i];
        const auto& ops = s.operators[i];
        json pairs = json::array();
        for (const auto& p : r.pair_classes)
          pairs.push_back({{"a", to_string(p.a)},
                           {"b", to_string(p.b)},
                           {"anticommute", p.cls == Commutation::anticommuting},
                           {"expected_anticommute", p.expected_anticommuting}});
        json j{{"length", r.length},
               {"squares_ok", r.squares_ok},
               {"pattern_ok", r.pattern_ok},
               {"commutes_with_H0", r.commutes_with_H0},
               {"pair_classes", pairs},
               {"tail_kind", ops.tail_convention.kind},
               {"tail_window", ops.tail_convention.window},
               {"tail_corrections", ops.tail_convention.corrections}};
        for (auto n : kLogicalNames) j["operators"][to_string(n)] = ops.get(n).letters();
        if (r.length <= 10) j["dense_deviation"] = dense_algebra_deviation(ops);
        ok = ok && r.squares_ok && r.pattern_ok && r.commutes_with_H0;
        reports.push_back(j);
      }
      json printed_family = json::array();
      for (int L : sym_lengths)
        if (is_odd_multiple_of_three(L)) printed_family.push_back(L);
      json j{{"reports", reports},
             {"rejected_lengths", s.rejected_lengths},
             {"odd_multiples_of_three_requested", printed_family},
             {"pass", ok}};
      emit_json(j, sym_out, os);
      return ok ? kOk : kCheckFailed;
    }
    if (*ent) {
      if (ent_n > 16) throw CapacityError("entanglement: N > 16");
      StateVector v;
      const auto spec = ChainSpec::chain(ent_n, ent_lambda, parse_boundary(ent_boundary));
      if (ent_state == "ground") v = representative_ground_state(spec);
      else if (ent_state == "cluster") v = build_cluster_state(spec);
      else if (ent_state == "ghz") v = ghz_state(ent_n);
      else if (ent_state == "dual") v = dual_of_cluster_state(ent_n);
      else throw std::invalid_argument("--state must be ground, cluster, ghz or dual");
      OptimizerOptions opt;
      opt.seed = seed;
      const auto r = geometric_entanglement(v, opt);
      json j{{"n_sites", ent_n},
             {"state", ent_state},
             {"lambda", ent_lambda},
             {"boundary", ent_boundary},
             {"seed", seed},
             {"epsilon", r.epsilon},
             {"epsilon_per_site", r.epsilon / ent_n},
             {"best_ansatz", r.best_ansatz.as_array()},
             {"starts_used", r.starts_used},
             {"spread", std::isfinite(r.spread) ? json(r.spread) : json(nullptr)},
             {"ambiguous", r.ambiguous}};
      if (ent_full) j["epsilon_full_2n"] = geometric_entanglement_full(v, opt);
      emit_json(j, ent_out, os);
      return kOk;
    }
    if (*mf) {
      const auto lat = parse_extents(mf_extents);
      const auto s = susceptibility(lat, mf_site);
      const double lc = critical_coupling(lat.dimension(), s.chi);
      json j{{"lattice", s.lattice},
             {"dimension", lat.dimension()},
             {"site", s.site},
             {"chi", s.chi},
             {"chi_quadrature", s.chi_quadrature},
             {"sum_rule", s.sum_rule},
             {"ground_degeneracy", s.ground_degeneracy},
             {"degenerate", s.degenerate},
             {"lambda_c", lc},
             {"claimed_lambda_c", 1.0},
             {"deviation", lc - 1.0}};
      emit_json(j, mf_out, os);
      return kOk;
    }
    if (*self) {
      const auto checks = selftest_checks();
      bool ok = true;
      json arr = json::array();
      for (const auto& c : checks) {
        ok = ok && c.pass;
        arr.push_back({{"check", c.name}, {"pass", c.pass}, {"value", c.value}});
      }
      emit_json(json{{"checks", arr}, {"pass", ok}}, "", os);
      return ok ? kOk : kCheckFailed;
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::out_of_range& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace clusterlab::cli
