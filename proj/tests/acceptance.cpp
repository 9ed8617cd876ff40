// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "toric/cli.hpp"
#include "toric/toric.hpp"

using namespace toric;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

QuadricConfiguration catalog_quadrics(const std::string& name) { return quadrics_of(catalog_config(name)); }

const std::vector<std::string> kPolytopes = {"triangle",           "triangle-nondelzant", "square",
                                             "simplex:1",          "simplex:2",           "simplex:3",
                                             "simplex:4",          "simplex-product:2,2", "simplex-product:2,3",
                                             "simplex-product:3,2", "simplex-product:3,3"};

const std::vector<std::string> kQuadricFamilies = {"one-quadric:2", "one-quadric:3", "one-quadric:4",
                                                   "two-quadrics:2,2"};

// ---------------------------------------------------------------------------

Outcome gale_exactness() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> num_d(-30, 30), den_d(1, 12);
  for (const auto& name : kPolytopes) {
    if (name == "triangle-nondelzant") continue;
    const PolytopePresentation p = polytope_of(catalog_config(name));
    const QuadricConfiguration q = gale_dual(p);
    o.require((q.gamma() * p.normals()).is_zero(), name + ": Gamma A^t != 0");
    const RationalVector gb = to_rational(q.gamma()) * p.offsets();
    for (int t = 0; t < 20; ++t) {
      RationalVector x(p.dimension());
      for (auto& xi : x) xi = Rational(num_d(rng), den_d(rng));
      o.require(to_rational(q.gamma()) * embed_point(p, x) == gb, name + ": Gamma i(x) != Gamma b");
    }
  }
  o.note(std::to_string(kPolytopes.size() - 1) + " polytopes, 20 rational points each");
  return o;
}

Outcome triangle_pipeline() {
  Outcome o;
  const QuadricConfiguration q = gale_dual(polytope_of(catalog_config("triangle")));
  o.require(q.gamma() == IntegerMatrix{{1, 1, 1}}, "unexpected Gamma");
  o.require(q.c() == RationalVector{Rational(1)}, "c = " + to_string(q.c()));
  const auto a = sphere_radius_squared(q);
  o.require(a && *a == 1, "not recognized as the unit sphere");
  o.note("Gamma = (1,1,1), c = 1, Z = S^5");
  return o;
}

Outcome delzant_equals_freeness() {
  Outcome o;
  int compared = 0, failing = 0;
  for (const auto& name : kPolytopes) {
    const PolytopePresentation p = polytope_of(catalog_config(name));
    const bool delzant = is_delzant(p).delzant;
    const bool free = freeness_check(gale_dual(p)).free;
    o.require(delzant == free, name + ": Delzant " + std::to_string(delzant) + " vs free " + std::to_string(free));
    ++compared;
    failing += !delzant;
  }
  o.require(compared >= 6, "fewer than 6 polytopes");
  o.require(failing >= 1, "no failing case");
  const DelzantVerdict v = is_delzant(polytope_of(catalog_config("triangle-nondelzant")));
  o.require(!v.delzant && v.determinant == -2, "det -2 witness missing");
  o.note(std::to_string(compared) + " polytopes, " + std::to_string(failing) + " non-Delzant");
  return o;
}

Outcome lagrangian() {
  Outcome o;
  double worst = 0, control = 1e300;
  for (const auto& name : kQuadricFamilies) {
    const QuadricConfiguration q = catalog_quadrics(name);
    for (const auto& p : sample_chart_points(q, 100, 7)) {
      worst = std::max(worst, lagrangian_residual(q, p));
      control = std::min(control, lagrangian_residual(tangent_frame_Z(q, p.z).vectors));
    }
  }
  o.require(worst < 1e-8, "residual " + num(worst));
  o.require(control > 0.1, "Z-frame control " + num(control));
  o.note("max residual " + num(worst) + ", min control " + num(control));
  return o;
}

Outcome minimal() {
  Outcome o;
  double worst = 0;
  for (const auto& name : kQuadricFamilies) {
    const QuadricConfiguration q = catalog_quadrics(name);
    for (const auto& p : sample_chart_points(q, 100, 7)) worst = std::max(worst, minimality_residual_in_Z(q, p));
  }
  // circles of unequal radii: a torus in S^3 that is not an orbit of the diagonal circle
  const double a = 0.9 / std::sqrt(2.0), b = std::sqrt(1 - a * a);
  const ExplicitChart torus(
      2,
      [a, b](const Eigen::VectorXd& s) {
        return Eigen::VectorXcd(Eigen::Vector2cd(std::polar(a, s(0)), std::polar(b, s(1))));
      });
  const double control = minimality_residual_in_Z(catalog_quadrics("one-quadric:2"), torus, vec({0.3, 1.1}), 1e-4);
  o.require(worst < 1e-4, "residual " + num(worst));
  o.require(control > 0.1, "unequal-radii control " + num(control));
  o.note("max residual " + num(worst) + ", control " + num(control));
  return o;
}

Outcome first_variation() {
  Outcome o;
  const QuadricConfiguration circle(IntegerMatrix{{1}}, {Rational(1)});
  const NChart chart = make_n_chart(circle, vec({1.0}));
  const VariationField radial = [](const Eigen::VectorXd&, const Eigen::VectorXcd& z) {
    return Eigen::VectorXcd(z / z.norm());
  };
  const VolumeVariation c = patch_volume_derivative(chart, Quadrature::tensor({Rule1D::periodic(64, 0.0, 1.0)}), radial);
  o.require(std::abs(c.dvol_dt - 2 * kPi) < 1e-4, "circle dV/dt = " + num(c.dvol_dt));
  o.require(std::abs(c.minus_int_HX - 2 * kPi) < 1e-4, "circle -int<H,X> = " + num(c.minus_int_HX));

  const QuadricConfiguration q = catalog_quadrics("one-quadric:2");
  const NChart n2 = make_n_chart(q, vec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}));
  const Eigen::VectorXd lo = vec({-0.7, 0.0}), hi = vec({0.7, 1.0});
  const Quadrature quad = Quadrature::trapezoid_box(lo, hi, 48);
  std::mt19937_64 rng(202);
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    std::vector<RealPolynomial> parts;
    for (int k = 0; k < 4; ++k) parts.push_back(RealPolynomial::random(2, 2, 4, rng));
    const VariationField x = [&](const Eigen::VectorXd& s, const Eigen::VectorXcd& z) {
      Eigen::VectorXcd v(2);
      v << std::complex<double>(parts[0](z), parts[1](z)), std::complex<double>(parts[2](z), parts[3](z));
      return Eigen::VectorXcd(box_bump(s.head(1), lo.head(1), hi.head(1)) * v);
    };
    const VolumeVariation v = patch_volume_derivative(n2, quad, x);
    worst = std::max(worst, std::abs(v.dvol_dt - v.minus_int_HX) /
                                (std::abs(v.dvol_dt) + std::abs(v.minus_int_HX) + 1e-9));
  }
  o.require(worst < 1e-3, "N(2) relative mismatch " + num(worst));
  o.note("circle " + num(c.dvol_dt) + " / " + num(c.minus_int_HX) + ", N(2) mismatch " + num(worst));
  return o;
}

Outcome hminimal() {
  Outcome o;
  double ratio = 0, residual = 0;
  for (const std::string name : {"one-quadric:2", "one-quadric:3"}) {
    const QuadricConfiguration q = catalog_quadrics(name);
    const auto pts = sample_chart_points(q, 20, 9);
    ratio = std::max(ratio, hamiltonian_variation_check(q, pts[0], 5, 303).max_ratio);
    for (const auto& p : pts) residual = std::max(residual, hminimality_residual(q, p));
  }
  const ExplicitChart ellipse(1, [](const Eigen::VectorXd& s) {
    Eigen::VectorXcd z(1);
    z(0) = {std::cos(s(0)), 0.5 * std::sin(s(0))};
    return z;
  });
  const double control = hminimality_residual(ellipse, vec({0.7}), 1e-4);
  o.require(ratio < 1e-3, "Hamiltonian variation ratio " + num(ratio));
  o.require(residual < 1e-4, "hminimality residual " + num(residual));
  o.require(control > 1e-2, "ellipse control " + num(control));
  o.note("ratio " + num(ratio) + ", residual " + num(residual) + ", ellipse " + num(control));
  return o;
}

Outcome noether() {
  Outcome o;
  double worst = 0;
  for (const std::string name : {"one-quadric:2", "one-quadric:3", "one-quadric:4"}) {
    const QuadricConfiguration q = catalog_quadrics(name);
    const auto fs = detail::invariant_hamiltonians(q.ambient_dimension());
    o.require(fs.size() >= 3, "fewer than three invariant functions");
    for (const auto& p : sample_chart_points(q, 20, 11))
      for (const auto& [fname, f] : fs) worst = std::max(worst, noether_drift(q, f, p.z));
  }
  o.require(worst < 1e-8, "drift " + num(worst));
  const QuadricConfiguration q = catalog_quadrics("one-quadric:3");
  const SmoothFunction re_z1{[](const Eigen::VectorXcd& z) { return z(0).real(); }, {}};
  bool rejected = false;
  try {
    noether_drift(q, re_z1, sample_chart_points(q, 1, 12)[0].z);
  } catch (const PreconditionError&) {
    rejected = true;
  }
  o.require(rejected, "non-invariant function accepted");
  o.note("max drift " + num(worst) + ", Re z_1 rejected");
  return o;
}

Outcome symmetry_and_coarea() {
  Outcome o;
  double sym = 0;
  for (const std::string name : {"one-quadric:2", "one-quadric:3"}) {
    const QuadricConfiguration q = catalog_quadrics(name);
    for (const auto& p : sample_chart_points(q, 100, 13))
      sym = std::max(sym, std::abs(orbit_volume(q, p.z.conjugate()) - orbit_volume(q, p.z)));
  }
  o.require(sym < 1e-12, "Vo asymmetry " + num(sym));

  // N(2): base S^1 / {+-1}; N(3): base S^2 / {+-1}
  const auto n2 = coarea_orbit_volume_check(catalog_quadrics("one-quadric:2"), SphereChart(2, 1.0),
                                            Quadrature::tensor({Rule1D::periodic(64, 0.0, kPi)}));
  const auto n3 = coarea_orbit_volume_check(
      catalog_quadrics("one-quadric:3"), SphereChart(3, 1.0),
      Quadrature::tensor({Rule1D::gauss_legendre(24, 0.0, kPi), Rule1D::periodic(48, 0.0, kPi)}));
  const double r2 = std::abs(n2.upstairs_volume - n2.fiber_integral) / n2.upstairs_volume;
  const double r3 = std::abs(n3.upstairs_volume - n3.fiber_integral) / n3.upstairs_volume;
  o.require(r2 < 1e-3, "N(2) co-area mismatch " + num(r2));
  o.require(r3 < 1e-3, "N(3) co-area mismatch " + num(r3));
  o.require(std::abs(n2.upstairs_volume - 2 * kPi * kPi) < 1e-6, "vol N(2) = " + num(n2.upstairs_volume));
  o.require(std::abs(n3.upstairs_volume - 4 * kPi * kPi) < 1e-6, "vol N(3) = " + num(n3.upstairs_volume));
  o.note("Vo asymmetry " + num(sym) + ", co-area mismatch " + num(r2) + " / " + num(r3));
  return o;
}

bool has_fact(const TopologyDescriptor& t, const std::string& fact) {
  return std::find(t.facts.begin(), t.facts.end(), fact) != t.facts.end();
}

Outcome topology_table() {
  Outcome o;
  const auto two = catalog_quadrics("two-quadrics:2,2");
  const auto t2 = classify_N(catalog_quadrics("one-quadric:2"));
  const auto t3 = classify_N(catalog_quadrics("one-quadric:3"));
  const auto t220 = classify_N(two, 0);
  const auto t221 = classify_N(two, 1);
  o.require(t2.name == "S^1 x S^1", "m=2 gives " + t2.name);
  o.require(t3.name == "K^3", "m=3 gives " + t3.name);
  o.require(t220.name == "T^4" && t220.trivial == true && has_fact(t220, "T^4 = T^2 x T^2 = N_0(2,2)"),
            "(2,2,0) gives " + t220.name);
  o.require(t221.trivial == false && has_fact(t221, "N_1(2,2) -> T^2 is a nontrivial bundle with fiber T^2"),
            "(2,2,1) gives " + t221.name);
  o.note("S^1 x S^1, K^3, T^4, nontrivial T^2-bundle over T^2");
  return o;
}

Outcome double_pipeline() {
  Outcome o;
  const QuadricConfiguration gamma(IntegerMatrix{{1, 1, 1}}, {Rational(2)});
  const QuadricConfiguration delta(IntegerMatrix{{1, 1, 2}}, {Rational(3)});
  const StackResult ok = stack_double(gamma, delta);
  o.require(ok.verdict.valid(), "cp2 torus rejected: " + ok.verdict.failure);
  const StackResult parallel = stack_double(gamma, QuadricConfiguration(IntegerMatrix{{1, 1, 1}}, {Rational(2)}));
  o.require(!parallel.verdict.valid() && parallel.verdict.witness.has_value(), "parallel rows accepted or no witness");
  if (!ok.config) return o;

  const DoubleConfiguration& d = *ok.config;
  double worst = 0;
  const auto pts = sample_ntilde_points(d, 100, 17);
  for (const auto& p : pts) worst = std::max(worst, ntilde_lagrangian_residual(d, p));
  o.require(worst < 1e-8, "ntilde residual " + num(worst));

  const DoubleConfiguration rp2(QuadricConfiguration(IntegerMatrix{{1, 1, 1}}, {Rational(1)}),
                                QuadricConfiguration(IntegerMatrix(0, 3), {}));
  double cp_lag = 0, cp_var = 0;
  for (const DoubleConfiguration* c : {&d, &rp2}) {
    const auto sample = sample_ntilde_points(*c, 1, 19)[0];
    const VerificationReport r = cp_chart_verify(*c, sample, 19);
    cp_lag = std::max(cp_lag, r.records.at(0).residual);
    cp_var = std::max(cp_var, r.records.at(1).residual);
  }
  o.require(cp_lag < 1e-8, "CP Lagrangian residual " + num(cp_lag));
  o.require(cp_var < 1e-3, "CP Hamiltonian stationarity " + num(cp_var));
  o.note("ntilde " + num(worst) + ", CP Lagrangian " + num(cp_lag) + ", CP stationarity " + num(cp_var));
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("toric-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const char* exe = std::getenv("TORIC_CLI");
  for (const std::string name : {"one-quadric:2", "cp2-torus"}) {
    const std::string cfg = (dir / "instance.cfg").string();
    std::ostringstream sink;
    if (emit_catalog(name, cfg, sink) != kExitPass) {
      o.require(false, "cannot emit " + name);
      continue;
    }
    std::string reports[2];
    for (int run = 0; run < 2; ++run) {
      const std::string path = (dir / ("report" + std::to_string(run) + ".tsv")).string();
      if (exe) {
        const std::string cmd = std::string(exe) + " report-all " + cfg + " --seed 5 --report " + path +
                                " >/dev/null 2>&1";
        (void)std::system(cmd.c_str());
      } else {
        CliFlags f;
        f.seed = 5;
        f.report_path = path;
        std::ostringstream out, err;
        run_command_file("report-all", cfg, f, out, err);
      }
      reports[run] = read_file(path);
    }
    o.require(!reports[0].empty(), name + ": empty report");
    o.require(reports[0] == reports[1], name + ": reports differ");
  }
  fs::remove_all(dir);
  o.note(std::string(exe ? "separate processes" : "in process") + ", one-quadric:2 and cp2-torus");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Gale duality exactness", gale_exactness},
      {"triangle pipeline", triangle_pipeline},
      {"Delzant iff free", delzant_equals_freeness},
      {"Lagrangian", lagrangian},
      {"minimal in Z", minimal},
      {"first variation formula", first_variation},
      {"H-minimal", hminimal},
      {"Noether", noether},
      {"conjugation symmetry and co-area", symmetry_and_coarea},
      {"topology table", topology_table},
      {"double configuration pipeline", double_pipeline},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
