// Command dispatch for the `toric` executable. Kept in a header so the
// commands can be exercised in-process.
//
// Exit status: 0 all checks pass, 1 some check fails, 2 parse error or
// unknown catalog name, 3 precondition violation, 4 numeric non-convergence.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toric/config.hpp"
#include "toric/errors.hpp"
#include "toric/polytope.hpp"
#include "toric/quadric_config.hpp"
#include "toric/reduction_catalog.hpp"
#include "toric/report.hpp"
#include "toric/submanifold.hpp"
#include "toric/symplectic.hpp"
#include "toric/torus_actions.hpp"

namespace toric {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitParse = 2, kExitPrecondition = 3, kExitConvergence = 4 };

struct CliFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> step;
  std::map<std::string, double> tolerances;
  std::string report_path;
};

/// Effective settings: built-in defaults, then the config file, then
/// TORIC_* environment variables, then command-line flags.
struct RunSettings {
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  MetricSpec spec;
  std::map<std::string, double> tol = {
      {"membership", 1e-10}, {"frame", 1e-10},   {"lagrangian", 1e-8},  {"minimal", 1e-4},
      {"hminimal", 1e-4},    {"noether", 1e-8},  {"variation", 1e-3},   {"ntilde", 1e-8},
      {"cp-lagrangian", 1e-8}, {"cp-variation", 1e-3},
  };

  double operator[](const std::string& name) const { return tol.at(name); }
};

namespace detail {

inline std::optional<std::string> env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

inline double parse_positive(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !(v > 0)) throw ParseError(what + ": bad value '" + text + "'");
  return v;
}

inline std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError(what + ": bad value '" + text + "'");
  return v;
}

inline std::string env_tol_name(std::string name) {
  for (auto& ch : name) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return "TORIC_TOL_" + name;
}

}  // namespace detail

inline RunSettings resolve_settings(const ConfigFile& cfg, const CliFlags& flags) {
  RunSettings s;
  if (cfg.seed) s.seed = *cfg.seed;
  for (const auto& [name, v] : cfg.tolerances) {
    if (!s.tol.count(name)) throw ParseError("unknown tolerance '" + name + "'");
    s.tol[name] = v;
  }
  if (auto v = detail::env("TORIC_SEED")) s.seed = detail::parse_count(*v, "TORIC_SEED");
  if (auto v = detail::env("TORIC_SAMPLES")) s.samples = detail::parse_count(*v, "TORIC_SAMPLES");
  if (auto v = detail::env("TORIC_STEP")) s.spec.step = detail::parse_positive(*v, "TORIC_STEP");
  for (auto& [name, v] : s.tol)
    if (auto e = detail::env(detail::env_tol_name(name))) v = detail::parse_positive(*e, detail::env_tol_name(name));
  if (flags.seed) s.seed = *flags.seed;
  if (flags.samples) s.samples = *flags.samples;
  if (flags.step) s.spec.step = *flags.step;
  for (const auto& [name, v] : flags.tolerances) {
    if (!s.tol.count(name)) throw ParseError("unknown tolerance '" + name + "'");
    s.tol[name] = v;
  }
  s.spec.tol.membership = s["membership"];
  s.spec.tol.frame = s["frame"];
  s.spec.tol.curvature = s["minimal"];
  s.spec.tol.variation = s["variation"];
  return s;
}

// ---------------------------------------------------------------------------
// individual checks

namespace detail {

inline double exact_flag(bool ok) { return ok ? 0.0 : 1.0; }

inline void print_matrix(std::ostream& out, const char* name, const IntegerMatrix& m) {
  out << name << " =";
  for (std::size_t i = 0; i < m.rows(); ++i) out << ' ' << to_string(m.row(i));
  out << '\n';
}

inline void print_vertex(std::ostream& out, const Vertex& v) {
  out << "vertex " << to_string(v.point) << " active facets (";
  for (std::size_t i = 0; i < v.active.size(); ++i) out << (i ? "," : "") << v.active[i];
  out << ")\n";
}

inline std::string index_list(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

/// T_Gamma-invariant test functions for the Noether check.
inline std::vector<std::pair<std::string, SmoothFunction>> invariant_hamiltonians(std::size_t m) {
  std::vector<std::pair<std::string, SmoothFunction>> out;
  out.emplace_back("sum |z_k|^2", SmoothFunction{[](const Eigen::VectorXcd& z) { return z.squaredNorm(); },
                                                   [](const Eigen::VectorXcd& z) { return Eigen::VectorXcd(2.0 * z); }});
  if (m >= 2)
    out.emplace_back("|z_1|^2 |z_2|^2",
                     SmoothFunction{[](const Eigen::VectorXcd& z) { return std::norm(z(0)) * std::norm(z(1)); },
                                    [](const Eigen::VectorXcd& z) {
                                      Eigen::VectorXcd g = Eigen::VectorXcd::Zero(z.size());
                                      g(0) = 2.0 * std::norm(z(1)) * z(0);
                                      g(1) = 2.0 * std::norm(z(0)) * z(1);
                                      return g;
                                    }});
  out.emplace_back("sum k |z_k|^4", SmoothFunction{[](const Eigen::VectorXcd& z) {
                                                     double s = 0;
                                                     for (Eigen::Index k = 0; k < z.size(); ++k)
                                                       s += static_cast<double>(k + 1) * std::pow(std::norm(z(k)), 2);
                                                     return s;
                                                   },
                                                   [](const Eigen::VectorXcd& z) {
                                                     Eigen::VectorXcd g(z.size());
                                                     for (Eigen::Index k = 0; k < z.size(); ++k)
                                                       g(k) = 4.0 * static_cast<double>(k + 1) * std::norm(z(k)) * z(k);
                                                     return g;
                                                   }});
  return out;
}

}  // namespace detail

inline VerificationReport verify_lagrangian(const QuadricConfiguration& q, const RunSettings& s) {
  const auto pts = sample_chart_points(q, s.samples, s.seed, s.spec);
  double lag = 0, frame = 0, member = 0;
  for (const auto& p : pts) {
    const TangentFrame f = tangent_frame_N(q, p, s.spec);
    lag = std::max(lag, lagrangian_residual(f.vectors, s.spec.omega_scale));
    frame = std::max(frame, frame_defect(q, p.z, f));
    member = std::max(member, membership_residual(q, p.z));
  }
  VerificationReport r;
  r.add("membership", member, s["membership"], pts.size(), s.seed);
  r.add("frame-orthonormality", frame, s["frame"], pts.size(), s.seed);
  r.add("lagrangian", lag, s["lagrangian"], pts.size(), s.seed);
  return r;
}

inline VerificationReport verify_minimal(const QuadricConfiguration& q, const RunSettings& s) {
  const auto pts = sample_chart_points(q, s.samples, s.seed, s.spec);
  double worst = 0;
  for (const auto& p : pts) worst = std::max(worst, minimality_residual_in_Z(q, p, s.spec));
  VerificationReport r;
  r.add("minimal-in-Z", worst, s["minimal"], pts.size(), s.seed);
  return r;
}

inline VerificationReport verify_hminimal(const QuadricConfiguration& q, const RunSettings& s) {
  const std::size_t count = std::min<std::size_t>(s.samples, 20);
  const auto pts = sample_chart_points(q, count, s.seed, s.spec);
  double worst = 0;
  for (const auto& p : pts) worst = std::max(worst, hminimality_residual(q, p, s.spec));
  VerificationReport r;
  r.add("h-minimal", worst, s["hminimal"], pts.size(), s.seed);
  return r;
}

inline VerificationReport verify_noether(const QuadricConfiguration& q, const RunSettings& s) {
  const std::size_t count = std::min<std::size_t>(s.samples, 20);
  const auto pts = sample_chart_points(q, count, s.seed, s.spec);
  VerificationReport r;
  for (const auto& [name, f] : detail::invariant_hamiltonians(q.ambient_dimension())) {
    double worst = 0;
    for (const auto& p : pts) worst = std::max(worst, noether_drift(q, f, p.z, s.spec, s.seed));
    r.add("noether-drift[" + name + "]", worst, s["noether"], pts.size(), s.seed);
  }
  return r;
}

/// Hamiltonian-variation ratio at three sample points (five Hamiltonians each).
inline VerificationReport verify_variation(const QuadricConfiguration& q, const RunSettings& s, std::ostream& out) {
  VerificationReport r;
  if (q.ambient_dimension() - q.quadric_count() > 3) {
    out << "verify-variation: skipped (patch quadrature implemented for dim N <= 3)\n";
    return r;
  }
  const auto pts = sample_chart_points(q, 3, s.seed, s.spec);
  double worst = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    worst = std::max(worst, hamiltonian_variation_check(q, pts[i], 5, s.seed + i, s.spec).max_ratio);
  r.add("hamiltonian-variation-ratio", worst, s["variation"], 15, s.seed);
  return r;
}

inline VerificationReport verify_ntilde(const StackResult& st, const RunSettings& s, std::ostream& out) {
  VerificationReport r;
  r.add("stack-valid", detail::exact_flag(st.verdict.valid()), 0.0, 1, s.seed);
  if (!st.verdict.valid()) {
    out << "stack_double: " << st.verdict.failure;
    if (st.verdict.witness) out << " witness " << detail::index_list(*st.verdict.witness);
    out << '\n';
    return r;
  }
  const DoubleConfiguration& d = *st.config;
  const auto pts = sample_ntilde_points(d, s.samples, s.seed, s.spec);
  double lag = 0, member = 0;
  for (const auto& p : pts) {
    lag = std::max(lag, ntilde_lagrangian_residual(d, p, {}, s.spec));
    member = std::max(member, membership_residual(d.stacked(), p.z));
  }
  r.add("ntilde-membership", member, s["membership"], pts.size(), s.seed);
  r.add("ntilde-lagrangian", lag, s["ntilde"], pts.size(), s.seed);
  if (sphere_radius_squared(d.gamma_cfg())) {
    double cp_lag = 0, cp_var = 0;
    const std::size_t count = std::min<std::size_t>(pts.size(), 3);
    for (std::size_t i = 0; i < count; ++i) {
      const VerificationReport c = cp_chart_verify(d, pts[i], s.seed + i, s.spec);
      cp_lag = std::max(cp_lag, c.records[0].residual);
      cp_var = std::max(cp_var, c.records[1].residual);
    }
    r.add("cp-lagrangian", cp_lag, s["cp-lagrangian"], count, s.seed);
    r.add("cp-hamiltonian-stationarity", cp_var, s["cp-variation"], 3 * count, s.seed);
  }
  return r;
}

// ---------------------------------------------------------------------------
// commands

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "gale",           "check-simple",   "check-delzant",   "check-free",     "check-nondeg",
      "classify",       "verify-lagrangian", "verify-minimal", "verify-hminimal", "verify-noether",
      "verify-variation", "verify-ntilde",  "report-all"};
  return names;
}

namespace detail {

inline VerificationReport cmd_gale(const ConfigFile& cfg, const RunSettings& s, std::ostream& out) {
  const QuadricConfiguration q = quadrics_of(cfg);
  print_matrix(out, "Gamma", q.gamma());
  out << "c = " << to_string(q.c()) << '\n';
  if (const auto a = sphere_radius_squared(q)) out << "Z_Gamma: sphere sum |z_k|^2 = " << to_string(*a) << '\n';
  VerificationReport r;
  if (cfg.mode == ConfigMode::Polytope) {
    const PolytopePresentation p = polytope_of(cfg);
    const bool annihilates = (q.gamma() * p.matrix_a().transpose()).is_zero();
    r.add("gale-annihilates-normals", exact_flag(annihilates), 0.0, 1, s.seed);
    r.add("gale-offsets", exact_flag(to_rational(q.gamma()) * p.offsets() == q.c()), 0.0, 1, s.seed);
  } else {
    r.add("quadric-rank", exact_flag(rank(q.gamma()) == q.quadric_count()), 0.0, 1, s.seed);
  }
  return r;
}

inline VerificationReport cmd_simple(const ConfigFile& cfg, const RunSettings& s, std::ostream& out) {
  const SimplicityVerdict v = is_simple(polytope_of(cfg));
  out << (v.simple ? "simple\n" : "not simple at ");
  if (v.witness) print_vertex(out, *v.witness);
  VerificationReport r;
  r.add("simple", exact_flag(v.simple), 0.0, 1, s.seed);
  return r;
}

inline VerificationReport cmd_delzant(const ConfigFile& cfg, const RunSettings& s, std::ostream& out) {
  const DelzantVerdict v = is_delzant(polytope_of(cfg));
  if (v.delzant) {
    out << "Delzant\n";
  } else {
    out << "not Delzant: determinant " << v.determinant.str() << " at ";
    print_vertex(out, *v.witness);
  }
  VerificationReport r;
  r.add("delzant", exact_flag(v.delzant), 0.0, 1, s.seed);
  return r;
}

inline VerificationReport cmd_free(const ConfigFile& cfg, const RunSettings& s, std::ostream& out) {
  const QuadricConfiguration q = cfg.mode == ConfigMode::Double && double_of(cfg).config
                                     ? double_of(cfg).config->stacked()
                                     : quadrics_of(cfg);
  const FreenessVerdict v = freeness_check(q);
  out << (v.free ? "free" : "not free") << " (" << v.supports_checked << " realizable supports checked)";
  if (v.witness) out << " witness support " << index_list(*v.witness);
  out << '\n';
  VerificationReport r;
  r.add("free", exact_flag(v.free), 0.0, 1, s.seed);
  return r;
}

inline VerificationReport cmd_nondeg(const ConfigFile& cfg, const RunSettings& s, std::ostream& out) {
  const NondegeneracyReport v = nondegeneracy_check(quadrics_of(cfg));
  out << "lattice rank " << v.lattice_rank << '\n';
  if (v.b_witness) out << "condition (b) witness " << index_list(*v.b_witness) << '\n';
  VerificationReport r;
  r.add("nondegenerate-a", exact_flag(v.cond_a), 0.0, 1, s.seed);
  r.add("nondegenerate-b", exact_flag(v.cond_b), 0.0, 1, s.seed);
  r.add("nondegenerate-c", exact_flag(v.cond_c), 0.0, 1, s.seed);
  return r;
}

inline VerificationReport cmd_classify(const ConfigFile& cfg, const RunSettings& s, std::ostream& out) {
  const TopologyDescriptor t = classify_N(quadrics_of(cfg), cfg.l);
  out << "N = " << t.name << '\n';
  for (const auto& f : t.facts) out << "  " << f << '\n';
  VerificationReport r;
  r.add("classified", 0.0, 0.0, 1, s.seed);
  return r;
}

inline VerificationReport dispatch(const std::string& command, const ConfigFile& cfg, const RunSettings& s,
                                   std::ostream& out) {
  auto needs_quadrics = [&] { return quadrics_of(cfg); };
  if (command == "gale") return cmd_gale(cfg, s, out);
  if (command == "check-simple") return cmd_simple(cfg, s, out);
  if (command == "check-delzant") return cmd_delzant(cfg, s, out);
  if (command == "check-free") return cmd_free(cfg, s, out);
  if (command == "check-nondeg") return cmd_nondeg(cfg, s, out);
  if (command == "classify") return cmd_classify(cfg, s, out);
  if (command == "verify-lagrangian") return verify_lagrangian(needs_quadrics(), s);
  if (command == "verify-minimal") return verify_minimal(needs_quadrics(), s);
  if (command == "verify-hminimal") return verify_hminimal(needs_quadrics(), s);
  if (command == "verify-noether") return verify_noether(needs_quadrics(), s);
  if (command == "verify-variation") return verify_variation(needs_quadrics(), s, out);
  if (command == "verify-ntilde") return verify_ntilde(double_of(cfg), s, out);
  if (command == "report-all") {
    VerificationReport r;
    if (cfg.mode == ConfigMode::Polytope) {
      r.append(cmd_gale(cfg, s, out));
      r.append(cmd_simple(cfg, s, out));
      r.append(cmd_delzant(cfg, s, out));
    }
    if (cfg.mode == ConfigMode::Double) {
      r.append(verify_ntilde(double_of(cfg), s, out));
      return r;
    }
    r.append(cmd_nondeg(cfg, s, out));
    r.append(cmd_free(cfg, s, out));
    const QuadricConfiguration q = needs_quadrics();
    r.append(verify_lagrangian(q, s));
    r.append(verify_minimal(q, s));
    r.append(verify_hminimal(q, s));
    r.append(verify_noether(q, s));
    r.append(verify_variation(q, s, out));
    return r;
  }
  throw ParseError("unknown command '" + command + "'");
}

}  // namespace detail

struct CommandResult {
  int exit_code = kExitPass;
  VerificationReport report;
};

/// Runs one command on a parsed configuration. Human-readable output goes
/// to `out`, diagnostics to `err`; the machine report is written to
/// flags.report_path when set.
inline CommandResult run_command(const std::string& command, const ConfigFile& cfg, const CliFlags& flags,
                                 std::ostream& out, std::ostream& err) {
  CommandResult res;
  try {
    const RunSettings s = resolve_settings(cfg, flags);
    res.report = detail::dispatch(command, cfg, s, out);
    res.report.write_human(out);
    if (!flags.report_path.empty()) {
      std::ofstream f(flags.report_path, std::ios::binary);
      if (!f) throw PreconditionError("cannot write report to '" + flags.report_path + "'");
      res.report.write_machine(f);
    }
    res.exit_code = res.report.pass() ? kExitPass : kExitFail;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    res.exit_code = kExitParse;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    res.exit_code = kExitConvergence;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    res.exit_code = kExitPrecondition;
  }
  return res;
}

inline CommandResult run_command_file(const std::string& command, const std::string& config_path,
                                      const CliFlags& flags, std::ostream& out, std::ostream& err) {
  ConfigFile cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw ParseError("cannot open '" + config_path + "'");
    cfg = parse_config(in);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return {kExitParse, {}};
  }
  return run_command(command, cfg, flags, out, err);
}

/// Writes the canonical config of a catalog entry.
inline int emit_catalog(const std::string& name, const std::string& path, std::ostream& err) {
  try {
    const std::string text = print_config(catalog_config(name));
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "cannot write '" << path << "'\n";
      return kExitPrecondition;
    }
    f << text;
    return kExitPass;
  } catch (const UnknownCatalogName& e) {
    err << e.what() << '\n';
    return kExitParse;
  }
}

inline int cli_main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Verification of H-minimal Lagrangian submanifolds built from intersections of quadrics"};
  app.require_subcommand(1);
  CliFlags flags;
  std::vector<std::string> tol_overrides;
  std::string config_path, catalog_name, output_path;

  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "configuration file")->required();
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--samples", flags.samples, "number of sample points");
    sub->add_option("--step", flags.step, "finite-difference step");
    sub->add_option("--tol", tol_overrides, "tolerance override name=value");
    sub->add_option("--report", flags.report_path, "write the machine-readable report here");
  }
  auto* emit = app.add_subcommand("emit", "write a catalog configuration");
  emit->add_option("name", catalog_name)->required();
  emit->add_option("path", output_path)->required();
  auto* list = app.add_subcommand("catalog", "list catalog names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  if (emit->parsed()) return emit_catalog(catalog_name, output_path, err);
  if (list->parsed()) {
    for (const auto& n : catalog_names()) out << n << '\n';
    return kExitPass;
  }
  for (const auto& t : tol_overrides) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      err << "parse error: --tol expects name=value\n";
      return kExitParse;
    }
    try {
      flags.tolerances[t.substr(0, eq)] = detail::parse_positive(t.substr(eq + 1), "--tol");
    } catch (const ParseError& e) {
      err << "parse error: " << e.what() << '\n';
      return kExitParse;
    }
  }
  for (auto* sub : app.get_subcommands())
    if (sub != emit && sub != list) return run_command_file(sub->get_name(), config_path, flags, out, err).exit_code;
  return kExitParse;
}

}  // namespace toric
