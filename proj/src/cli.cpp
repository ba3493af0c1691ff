#include "qecsense/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qecsense/bosonic.hpp"
#include "qecsense/dephasing.hpp"
#include "qecsense/io.hpp"
#include "qecsense/model.hpp"
#include "qecsense/simulator.hpp"

namespace qecsense::cli {

using io::json;
using linalg::Complex;

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QECSENSE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

namespace {

struct Tolerances {
  double kl = 1e-9;
  double signal = 1e-9;
  double rank = 1e-10;

  model::KlTolerances kl_tol() const { return {kl, signal}; }
};

struct Sinks {
  std::string out_path;
  std::string report_path;
};

void add_tolerances(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--tol-kl", tol.kl, "Knill-Laflamme deviation tolerance")->capture_default_str();
  cmd->add_option("--tol-signal", tol.signal, "minimum logical signal")->capture_default_str();
  cmd->add_option("--tol-rank", tol.rank, "span rank and HNLS tolerance")->capture_default_str();
}

void add_sinks(CLI::App* cmd, Sinks& sinks) {
  cmd->add_option("--out", sinks.out_path, "CSV output file (stdout when omitted)");
  cmd->add_option("--report", sinks.report_path, "JSON report file (stdout when omitted)");
}

// CSV goes to --out, JSON to --report; whatever has no file lands on stdout.
void emit(const Sinks& sinks, std::ostream& out, const io::CsvTable* csv, const json* report) {
  if (csv) {
    if (sinks.out_path.empty())
      out << csv->str();
    else
      io::write_atomic(sinks.out_path, csv->str());
  }
  if (report) {
    const std::string text = report->dump(2) + "\n";
    if (!sinks.report_path.empty())
      io::write_atomic(sinks.report_path, text);
    else
      out << text;
  }
}

json kl_json(const model::KlReport& r) {
  return {{"linear_deviation", r.linear_deviation},
          {"quadratic_deviation", r.quadratic_deviation},
          {"signal", r.signal},
          {"pass", r.pass}};
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw Error(ErrorKind::SchemaError, what + ": cannot parse \"" + item + "\" as a number");
  }
  if (out.empty()) throw Error(ErrorKind::SchemaError, what + ": empty list");
  return out;
}

std::size_t parse_ring_size(std::string text) {
  if (text.rfind("N=", 0) == 0) text = text.substr(2);
  const auto v = parse_list(text, "--ring");
  if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0]))
    throw Error(ErrorKind::SchemaError, "--ring: expected a positive integer");
  return static_cast<std::size_t>(v[0]);
}

struct CorrelationSource {
  std::string model_path;
  std::string ring;
  std::string alpha;
  double t2 = 1.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", model_path, "dephasing model JSON");
    cmd->add_option("--ring", ring, "ring size, as N or N=<n>");
    cmd->add_option("--alpha", alpha, "ring correlations by distance, comma separated");
    cmd->add_option("--T2", t2, "single-qubit dephasing time for --ring")->capture_default_str();
  }


  dephasing::CorrelationModel load() const {
    if (!ring.empty()) {
      if (!model_path.empty()) throw Error(ErrorKind::SchemaError, "--ring and --model are exclusive");
      const std::size_t n = parse_ring_size(ring);
      std::vector<double> a = alpha.empty() ? std::vector<double>(n / 2, 0.0) : parse_list(alpha, "--alpha");
      return dephasing::ring_model(n, a, t2);
    }
    if (model_path.empty()) throw Error(ErrorKind::SchemaError, "a --model or --ring is required");
    auto any = io::parse_model(std::filesystem::path(model_path));
    if (auto* cm = std::get_if<dephasing::CorrelationModel>(&any)) return *cm;
    throw Error(ErrorKind::SchemaError, "/: expected a dephasing model with \"C\" and \"h\"");
  }
};

std::vector<std::string> sensitivity_cells(const dephasing::SensitivityReport& r) {
  return {std::to_string(r.n),         r.hnls ? "true" : "false",    io::format_double(r.eta1),
          io::format_double(r.eta_par), io::format_double(r.eta_ghz), io::format_double(r.eta_qec),
          std::to_string(r.best_u)};
}

const std::vector<std::string> kDephasingHeader{"N", "hnls", "eta1", "eta_par", "eta_ghz", "eta_qec", "best_u"};
const std::vector<std::string> kBosonicHeader{"s", "M", "ratio", "F_coeff", "F_opt_bound", "binomial_ratio"};

json sensitivity_json(const dephasing::SensitivityReport& r) {
  return {{"N", r.n},           {"hnls", r.hnls},       {"eta1", r.eta1},
          {"eta_par", r.eta_par}, {"eta_ghz", r.eta_ghz}, {"eta_qec", r.eta_qec},
          {"best_u", r.best_u}, {"heisenberg", r.heisenberg}, {"unit_gaps", r.unit_gaps}};
}

enum class DesignChoice { Auto, Exact, Approx, Beyond };

DesignChoice parse_design_choice(const std::string& s) {
  if (s == "auto") return DesignChoice::Auto;
  if (s == "exact") return DesignChoice::Exact;
  if (s == "approx") return DesignChoice::Approx;
  if (s == "beyond") return DesignChoice::Beyond;
  throw Error(ErrorKind::SchemaError, "--design: expected auto, exact, approx or beyond");
}

dephasing::QubitDesign make_design(const dephasing::CorrelationModel& cm, const dephasing::NoiseModes& modes,
                                   DesignChoice choice, std::optional<double> gamma,
                                   std::optional<std::size_t> u) {
  if (choice == DesignChoice::Auto) choice = modes.hnls ? DesignChoice::Exact : DesignChoice::Beyond;
  switch (choice) {
    case DesignChoice::Exact:
      return dephasing::design_exact(cm);
    case DesignChoice::Approx:
      return gamma ? dephasing::design_approx(cm, *gamma) : dephasing::design_approx_max(cm);
    default:
      return dephasing::design_beyond_hnls(cm, gamma, u, &modes);
  }
}

const char* kind_name(dephasing::DesignKind k) {
  switch (k) {
    case dephasing::DesignKind::Exact:
      return "exact";
    case dephasing::DesignKind::Approximate:
      return "approx";
    default:
      return "beyond";
  }
}

json design_json(const dephasing::CorrelationModel& cm, const dephasing::NoiseModes& modes,
                 const dephasing::QubitDesign& d, const Tolerances& tol) {
  json j{{"kind", kind_name(d.kind)}, {"b", d.b},         {"theta", d.theta},
         {"gamma", d.gamma},          {"gamma_max", d.gamma_max}, {"qfi_coeff", d.qfi_coeff}};
  j["u"] = d.u ? json(*d.u) : json(nullptr);
  j["kl"] = kl_json(model::verify_kl(d.code, dephasing::to_lindblad(cm, modes), tol.kl_tol()));
  const auto rec = dephasing::build_recovery(d, modes);
  const auto eff = dephasing::effective_dynamics(cm, d, modes, rec);
  j["effective"] = {{"A", eff.a},
                    {"B", eff.b},
                    {"h_eff_coeff", eff.h_eff_coeff},
                    {"l_eff_coeff", eff.l_eff_coeff},
                    {"residual", eff.residual},
                    {"sensitivity", dephasing::qubit_sensitivity(eff.a, eff.b, cm.t2)}};
  j["kraus_count"] = rec.kraus_ops.size();
  return j;
}

// ---- design ----

struct DesignOpts {
  std::string model_path;
  std::uint64_t seed = 0x5eed;
  Tolerances tol;
  Sinks sinks;
};

int cmd_design(const DesignOpts& o, std::ostream& out) {
  auto any = io::parse_model(std::filesystem::path(o.model_path));
  model::LindbladModel lm;
  if (auto* p = std::get_if<model::LindbladModel>(&any))
    lm = *p;
  else if (auto* b = std::get_if<bosonic::FockModel>(&any))
    lm = bosonic::to_lindblad(*b);
  else
    lm = [&] {
      const auto& cm = std::get<dephasing::CorrelationModel>(any);
      return dephasing::to_lindblad(cm, dephasing::decompose_modes(cm));
    }();

  const auto span = model::build_span(lm, o.tol.rank);
  const auto hnls = model::hnls_check(lm.hamiltonian, span, o.tol.rank);
  if (!hnls.holds)
    throw Error(ErrorKind::HnlsViolated,
                "H lies in the Lindblad span (residual " + io::format_double(hnls.residual_norm) + ")");
  model::DiagonalModel diag;
  try {
    diag = model::diagonalize_commuting(lm, o.seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotCommuting) throw;
    throw Error(ErrorKind::NotCommuting,
                std::string("HNLS holds but model is non-commuting; Theorem 1 inapplicable (") + e.what() + ")");
  }
  const auto r = model::design_code_theorem1(diag);
  json report{{"hnls", {{"holds", hnls.holds}, {"residual_norm", hnls.residual_norm}}},
              {"lp_value", r.lp_value},
              {"dual_value", r.dual_value},
              {"qfi_coeff", r.qfi_coeff},
              {"design_vector", r.design_vector},
              {"code", {{"ket0", io::to_json(r.code.ket0)}, {"ket1", io::to_json(r.code.ket1)}}},
              {"kl", kl_json(model::verify_kl(r.code, lm, o.tol.kl_tol()))}};
  emit(o.sinks, out, nullptr, &report);
  return 0;
}

// ---- dephasing / sensitivity ----

struct DephasingOpts {
  CorrelationSource src;
  bool exact = false, approx = false, beyond = false;
  std::optional<double> gamma;
  std::optional<std::size_t> u;
  Tolerances tol;
  Sinks sinks;
};

int cmd_dephasing(const DephasingOpts& o, std::ostream& out) {
  const auto cm = o.src.load();
  const auto rep = dephasing::sensitivity_report(cm);
  io::CsvTable csv(kDephasingHeader);
  csv.add_row(sensitivity_cells(rep));
  std::optional<json> report;
  if (o.exact || o.approx || o.beyond) {
    const auto modes = dephasing::decompose_modes(cm);
    const auto choice = o.exact ? DesignChoice::Exact : o.approx ? DesignChoice::Approx : DesignChoice::Beyond;
    report = design_json(cm, modes, make_design(cm, modes, choice, o.gamma, o.u), o.tol);
  }
  emit(o.sinks, out, &csv, report ? &*report : nullptr);
  return 0;
}

int cmd_sensitivity(const CorrelationSource& src, const Sinks& sinks, std::ostream& out) {
  const auto cm = src.load();
  const json report = sensitivity_json(dephasing::sensitivity_report(cm));
  emit(sinks, out, nullptr, &report);
  return 0;
}

// ---- bosonic ----

std::vector<std::string> bosonic_cells(int s, int m, double kappa) {
  const bosonic::FockModel fm{m, s, kappa, {}};
  const auto cheb = bosonic::chebyshev_code(fm);
  const auto q = bosonic::chebyshev_qfi(cheb, fm);
  double bin_ratio = std::numeric_limits<double>::quiet_NaN();
  if (m % s == 0 && m / s >= 2) {
    const auto b = bosonic::binomial_code(fm);
    const double r = bosonic::signal(b.supports, b.weights, s) / bosonic::signal(cheb.supports, cheb.weights, s);
    bin_ratio = r * r;
  }
  return {std::to_string(s),        std::to_string(m),          io::format_double(q.ratio),
          io::format_double(q.f_coeff), io::format_double(q.f_opt_bound), io::format_double(bin_ratio)};
}

struct BosonicOpts {
  int s = 2;
  int m = 100;
  double kappa = 1.0;
  bool binomial = false;
  bool lp = false;
  Tolerances tol;
  Sinks sinks;
};

int cmd_bosonic(const BosonicOpts& o, std::ostream& out) {
  const bosonic::FockModel fm{o.m, o.s, o.kappa, {}};
  io::CsvTable csv(kBosonicHeader);
  csv.add_row(bosonic_cells(o.s, o.m, o.kappa));

  const auto cheb = bosonic::chebyshev_code(fm);
  json report{{"chebyshev",
               {{"supports", cheb.supports},
                {"weights", cheb.weights},
                {"signal", bosonic::signal(cheb.supports, cheb.weights, o.s)},
                {"kl", kl_json(bosonic::verify_bosonic(cheb.code, fm, o.tol.kl_tol()))}}}};
  const double sn = std::sin(std::numbers::pi / o.s);
  report["correctable_loss_plus_gain"] = static_cast<int>(std::floor(0.5 * o.m * sn * sn - 1.0));
  if (o.binomial) {
    const auto b = bosonic::binomial_code(fm);
    report["binomial"] = {{"supports", b.supports},
                          {"weights", b.weights},
                          {"signal", bosonic::signal(b.supports, b.weights, o.s)},
                          {"kl", kl_json(bosonic::verify_bosonic(b.code, fm, o.tol.kl_tol()))}};
  }
  if (o.lp) {
    const auto r = bosonic::lp_code_bosonic(fm);
    report["lp"] = {{"signal", r.signal},
                    {"unrestricted_signal", r.unrestricted_signal},
                    {"excluded", r.excluded},
                    {"design_vector", r.design.design_vector},
                    {"kl", kl_json(bosonic::verify_bosonic(r.design.code, fm, o.tol.kl_tol()))}};
  }
  const bool want_report = o.binomial || o.lp || !o.sinks.report_path.empty();
  emit(o.sinks, out, &csv, want_report ? &report : nullptr);
  return 0;
}

// ---- simulate ----

struct SimulateOpts {
  CorrelationSource src;
  double t = 1.0;
  double dt = 1e-2;
  std::optional<double> step;
  double omega = 1.0;
  std::string design = "auto";
  std::optional<double> gamma;
  std::optional<std::size_t> u;
  bool no_recovery = false;
  Sinks sinks;
};

int cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  model::LindbladModel lm;
  model::CodePair code;
  std::optional<model::RecoveryChannel> recovery;
  json report;
  std::optional<dephasing::CorrelationModel> cm;

  if (!o.src.ring.empty()) {
    cm = o.src.load();
  } else {
    if (o.src.model_path.empty()) throw Error(ErrorKind::SchemaError, "a --model or --ring is required");
    auto any = io::parse_model(std::filesystem::path(o.src.model_path));
    if (auto* p = std::get_if<dephasing::CorrelationModel>(&any)) {
      cm = *p;
    } else if (auto* b = std::get_if<bosonic::FockModel>(&any)) {
      lm = bosonic::to_lindblad(*b);
      code = bosonic::chebyshev_code(*b).code;
      report["code"] = "chebyshev";
    } else {
      lm = std::get<model::LindbladModel>(any);
      code = model::design_code_theorem1(model::diagonalize_commuting(lm)).code;
      report["code"] = "theorem1";
    }
  }
  double t2 = 1.0;
  if (cm) {
    const auto modes = dephasing::decompose_modes(*cm);
    const auto d = make_design(*cm, modes, parse_design_choice(o.design), o.gamma, o.u);
    lm = dephasing::to_lindblad(*cm, modes);
    code = d.code;
    if (!o.no_recovery) recovery = dephasing::build_recovery(d, modes);
    const auto rec = recovery ? *recovery : dephasing::build_recovery(d, modes);
    const auto eff = dephasing::effective_dynamics(*cm, d, modes, rec);
    report["code"] = kind_name(d.kind);
    report["predicted"] = {{"A", eff.a}, {"B", eff.b}};
    t2 = cm->t2;
  }

  std::vector<Complex> plus(code.dim());
  for (std::size_t i = 0; i < plus.size(); ++i) plus[i] = (code.ket0[i] + code.ket1[i]) / std::sqrt(2.0);
  const simulator::Schedule sched{o.t, o.dt, o.step.value_or(o.dt / 50.0), o.omega};

  io::CsvTable csv({"time", "codespace_pop", "bloch_x", "bloch_y", "bloch_z"});
  std::vector<linalg::DenseMatrix> traj;
  std::vector<double> times;
  simulator::evolve(lm, simulator::pure_density(plus), sched, recovery ? &*recovery : nullptr,
                    [&](double t, const linalg::DenseMatrix& rho) {
                      const auto s = simulator::logical_state(rho, code);
                      csv.add_row({io::format_double(t), io::format_double(s.population),
                                   io::format_double(s.bloch[0]), io::format_double(s.bloch[1]),
                                   io::format_double(s.bloch[2])});
                      traj.push_back(rho);
                      times.push_back(t);
                    });
  if (traj.size() >= 3 && o.omega != 0.0) {
    try {
      const auto f = simulator::logical_qubit_fit(traj, times, code, o.omega, t2);
      report["fit"] = {{"A", f.a_fit}, {"B", f.b_fit}, {"min_population", f.min_population}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::LeakageTooLarge) throw;
      report["fit"] = {{"error", e.what()}};
    }
  }
  const bool want_report = !o.sinks.report_path.empty() || !o.sinks.out_path.empty();
  emit(o.sinks, out, &csv, want_report ? &report : nullptr);
  return 0;
}

// ---- sweep ----

struct SweepOpts {
  std::string command;
  std::vector<std::string> grids;
  Sinks sinks;
};

int cmd_sweep(const SweepOpts& o, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& g : o.grids) {
    const auto eq = g.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::SchemaError, "--grid: expected key=v1,v2,...");
    axes.emplace_back(g.substr(0, eq), parse_list(g.substr(eq + 1), "--grid " + g.substr(0, eq)));
  }
  const std::vector<std::string> allowed =
      o.command == "bosonic" ? std::vector<std::string>{"s", "M", "kappa"}
                             : std::vector<std::string>{"N", "alpha", "T2"};
  if (o.command != "bosonic" && o.command != "dephasing")
    throw Error(ErrorKind::SchemaError, "sweep: command must be bosonic or dephasing");
  std::map<std::string, std::vector<double>> grid;
  for (auto& [k, v] : axes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw Error(ErrorKind::SchemaError, "--grid: unknown key \"" + k + "\" for " + o.command);
    grid[k] = v;
  }
  const std::string required = o.command == "bosonic" ? "M" : "N";
  if (!grid.count(required)) throw Error(ErrorKind::SchemaError, "--grid: " + required + " is required");

  std::vector<std::map<std::string, double>> jobs{{}};
  for (const auto& [k, vals] : grid) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& j : jobs)
      for (double v : vals) {
        auto n = j;
        n[k] = v;
        next.push_back(std::move(n));
      }
    jobs = std::move(next);
  }

  const auto& header = o.command == "bosonic" ? kBosonicHeader : kDephasingHeader;
  std::vector<std::vector<std::string>> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& j = jobs[i];
      auto get = [&](const char* k, double def) { return j.count(k) ? j.at(k) : def; };
      try {
        if (o.command == "bosonic") {
          rows[i] = bosonic_cells(static_cast<int>(get("s", 2)), static_cast<int>(get("M", 0)), get("kappa", 1.0));
        } else {
          const auto n = static_cast<std::size_t>(get("N", 0));
          std::vector<double> alpha(n / 2, 0.0);
          if (!alpha.empty()) alpha[0] = get("alpha", 0.0);
          rows[i] = sensitivity_cells(dephasing::sensitivity_report(dephasing::ring_model(n, alpha, get("T2", 1.0))));
        }
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = worker_count(jobs.size());
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  io::CsvTable csv(header);
  bool failed = false;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i].empty()) {
      csv.add_row(rows[i]);
      continue;
    }
    failed = true;
    std::ostringstream key;
    for (const auto& [k, v] : jobs[i]) key << k << "=" << io::format_double(v) << " ";
    err << "sweep job " << key.str() << "failed: " << errors[i] << "\n";
  }
  emit(o.sinks, out, &csv, nullptr);
  return failed ? 2 : 0;
}

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::SchemaError ? 1 : 2; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error-corrected sensing code designer"};
  app.require_subcommand(1);

  DesignOpts design;
  auto* c_design = app.add_subcommand("design", "Optimal code for a commuting Lindblad model");
  c_design->add_option("--model", design.model_path, "model JSON")->required();
  c_design->add_option("--seed", design.seed, "seed for the common-eigenbasis mix")->capture_default_str();
  add_tolerances(c_design, design.tol);
  c_design->add_option("--out,--report", design.sinks.report_path, "JSON report file");

  DephasingOpts deph;
  auto* c_deph = app.add_subcommand("dephasing", "correlated dephasing sensitivities and designs");
  deph.src.add(c_deph);
  auto* f_exact = c_deph->add_flag("--exact", deph.exact, "exact HNLS design");
  auto* f_approx = c_deph->add_flag("--approx", deph.approx, "approximate design on ker C");
  auto* f_beyond = c_deph->add_flag("--beyond", deph.beyond, "beyond-HNLS design");
  f_exact->excludes(f_approx)->excludes(f_beyond);
  f_approx->excludes(f_beyond);
  c_deph->add_option("--gamma", deph.gamma, "design scale γ");
  c_deph->add_option("--u", deph.u, "uncorrected mode index for --beyond");
  add_tolerances(c_deph, deph.tol);
  add_sinks(c_deph, deph.sinks);

  CorrelationSource sens_src;
  Sinks sens_sinks;
  auto* c_sens = app.add_subcommand("sensitivity", "sensitivity report as JSON");
  sens_src.add(c_sens);
  c_sens->add_option("--out,--report", sens_sinks.report_path, "JSON report file");

  BosonicOpts bos;
  auto* c_bos = app.add_subcommand("bosonic", "Chebyshev code near-optimality");
  c_bos->add_option("--s", bos.s, "signal order")->capture_default_str();
  c_bos->add_option("--M", bos.m, "Fock truncation")->capture_default_str();
  c_bos->add_option("--kappa", bos.kappa, "loss rate")->capture_default_str();
  c_bos->add_flag("--binomial", bos.binomial, "include the binomial code in the report");
  c_bos->add_flag("--lp", bos.lp, "include the LP-designed code in the report");
  add_tolerances(c_bos, bos.tol);
  add_sinks(c_bos, bos.sinks);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Lindblad trajectory of the logical |+> state");
  sim.src.add(c_sim);
  c_sim->add_option("--t", sim.t, "total time")->capture_default_str();
  c_sim->add_option("--dt", sim.dt, "recovery interval")->capture_default_str();
  c_sim->add_option("--step", sim.step, "RK4 step (default dt/50)");
  c_sim->add_option("--omega", sim.omega, "signal strength")->capture_default_str();
  c_sim->add_option("--design", sim.design, "auto, exact, approx or beyond")->capture_default_str();
  c_sim->add_option("--gamma", sim.gamma, "design scale γ");
  c_sim->add_option("--u", sim.u, "uncorrected mode index");
  c_sim->add_flag("--no-recovery", sim.no_recovery, "skip recovery");
  add_sinks(c_sim, sim.sinks);

  SweepOpts sweep;
  auto* c_sweep = app.add_subcommand("sweep", "parameter grid over bosonic or ring dephasing rows");
  c_sweep->add_option("command", sweep.command, "bosonic or dephasing")->required();
  c_sweep->add_option("--grid", sweep.grids, "key=v1,v2,... (repeatable)")->required();
  c_sweep->add_option("--out", sweep.sinks.out_path, "CSV output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_design->parsed()) return cmd_design(design, out);
    if (c_deph->parsed()) return cmd_dephasing(deph, out);
    if (c_sens->parsed()) return cmd_sensitivity(sens_src, sens_sinks, out);
    if (c_bos->parsed()) return cmd_bosonic(bos, out);
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    return cmd_sweep(sweep, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qecsense::cli
