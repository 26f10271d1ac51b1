// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "rphl/harness.hpp"
#include "rphl/thermal.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace rphl;
using namespace rphl::harness;
using rphl::testing::random_hermitian;
using rphl::testing::random_matrix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Json hubbard_doc(double u0) {
  Json doc = Json::parse(R"({
    "model": {"d": 1, "ell": 4, "t": 1.0, "e_charge": 0.0, "beta": [0.5, 2.0],
              "coupling": {"onsite": 1.0}, "photon": null},
    "scan": {"momenta": "all", "h_samples": 0, "seed": 1}
  })");
  doc["model"]["coupling"]["onsite"] = u0;
  return doc;
}

Json photon_doc(int samples) {
  Json doc = Json::parse(R"({
    "model": {"d": 1, "ell": 2, "t": 1.0, "e_charge": [0.0, 0.5, 1.0], "beta": [0.5, 2.0],
              "coupling": {"onsite": 2.0, "nn": 1.0},
              "photon": {"L": 2, "kappa": 4.0, "m0": 1.0, "n_max": 4, "modes": [[0, 1, 0, 1]]}},
    "scan": {"momenta": "all", "h_samples": 0, "h_scale": 2.0, "seed": 20240601}
  })");
  doc["scan"]["h_samples"] = samples;
  return doc;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

OperatorMatrix plain(const MatrixXc& m) { return {m, {SpaceKind::Spinless, m.rows()}}; }

// Shared bound-scan runs, reused by the half-filling and decoupling criteria.
std::vector<Section> hubbard_scans;
Section photon_scan;

Outcome kubo_kishi() {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  double worst = 0.0;
  int rows = 0;
  for (double u0 : {1.0, 4.0}) {
    const Section s = cmd_bound_scan(parse_config(hubbard_doc(u0)));
    out.pass = out.pass && s.status == Status::Pass;
    for (const auto& cell : s.body["cells"]) {
      out.pass = out.pass && cell["momenta"].size() == 4;
      for (const auto& row : cell["momenta"]) {
        const double product = row["chi"].get<double>() * u0;
        worst = std::max(worst, product);
        out.pass = out.pass && !row["skipped"].get<bool>() && product <= 1.0 + 1e-9;
        ++rows;
      }
    }
    hubbard_scans.push_back(s);
  }
  const double elapsed = seconds_since(start);
  out.pass = out.pass && rows == 16 && elapsed < 60.0;
  out.detail = fmt("max chi*U0 = %.6f over 16 rows, %.2f s", worst, elapsed);
  return out;
}

Outcome generalized_bound() {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  photon_scan = cmd_bound_scan(parse_config(photon_doc(0)));
  out.pass = photon_scan.status == Status::Pass && photon_scan.body["cells"].size() == 6;
  double worst = 0.0;
  for (const auto& cell : photon_scan.body["cells"]) {
    out.pass = out.pass && cell["momenta"].size() == 2;
    for (const auto& row : cell["momenta"]) {
      const bool skipped = row["skipped"].get<bool>();
      if (!skipped) worst = std::max(worst, row["chi_times_u"].get<double>());
      out.pass = out.pass && (skipped || row["chi_times_u"].get<double>() <= 1.0 + 1e-9);
    }
  }
  const double elapsed = seconds_since(start);
  out.pass = out.pass && elapsed < 120.0;
  out.detail = fmt("max chi*U_hat = %.6f over 6 cells, %.2f s", worst, elapsed);
  return out;
}

Outcome domination() {
  Outcome out;
  const Section s = cmd_domination(parse_config(photon_doc(100)));
  out.pass = s.status == Status::Pass;
  double worst = 0.0;
  for (const auto& cell : s.body["cells"]) {
    worst = std::max(worst, cell["ratio_max"].get<double>());
    out.pass = out.pass && cell["ratio_at_zero"].get<double>() == 1.0 &&
               cell["ratio_max"].get<double>() <= 1.0 + 1e-9 && cell["samples"] == 100;
  }
  out.detail = fmt("max Z(h)/Z(0) = %.6g over 6 cells x 100 sources, exactly 1 at h = 0", worst);
  return out;
}

Outcome corollary() {
  Outcome out;
  const ExperimentConfig c = parse_config(photon_doc(50));
  double worst = -1e300;
  for (double e : c.e_charges) {
    for (double beta : c.betas) {
      const ModelConfig m = c.model(e, beta);
      const ThermalState st = diagonalize(build_transformed(m), beta);
      for (int i = 0; i < 50; ++i) {
        const VectorXc h = complex_source(sample_seed(c.scan.seed, i), 2, c.scan.h_scale);
        const CorollaryResult r = verify_corollary(st, m, h);
        const double excess = r.lhs - r.rhs - 1e-9 * std::max(1.0, r.rhs);
        worst = std::max(worst, excess);
        out.pass = out.pass && r.pass && excess <= 0.0;
      }
    }
  }
  out.detail = fmt("max lhs - rhs - 1e-9*max(1,rhs) = %.3e over 300 complex sources", worst);
  return out;
}

Outcome conjugation() {
  Outcome out;
  double conj = 0.0;
  double spec = 0.0;
  auto absorb = [&](const Json& rec) {
    conj = std::max(conj, rec["conjugation_residual"].get<double>());
    spec = std::max(spec, rec["spectrum_gap"].get<double>());
    out.pass = out.pass && rec["conjugation_residual"].get<double>() <= 1e-11 &&
               rec["spectrum_gap"].get<double>() <= 1e-10;
  };
  const Section photon = cmd_verify_identities(parse_config(photon_doc(0)));
  for (const auto& rec : photon.body["conjugation"]) absorb(rec);
  absorb(photon.body["conjugation_without_photon"]);
  for (double u0 : {1.0, 4.0}) {
    const Section pure = cmd_verify_identities(parse_config(hubbard_doc(u0)));
    for (const auto& rec : pure.body["conjugation"]) absorb(rec);
  }
  out.pass = out.pass && photon.body["conjugation"].size() == 3;
  out.detail = fmt("relative conjugation residual %.3e, spectrum gap %.3e", conj, spec);
  return out;
}

Outcome half_filling() {
  Outcome out;
  double pure = 0.0;
  double coupled = 0.0;
  for (const auto& s : hubbard_scans) {
    for (const auto& cell : s.body["cells"]) {
      pure = std::max(pure, cell["half_filling"]["max_deviation"].get<double>());
    }
  }
  for (const auto& cell : photon_scan.body["cells"]) {
    coupled = std::max(coupled, cell["half_filling"]["max_deviation"].get<double>());
  }
  out.pass = !hubbard_scans.empty() && pure <= 1e-10 && coupled <= 1e-9;
  out.detail = fmt("max |<n_x> - 1|: pure %.3e, photon-coupled %.3e", pure, coupled);
  return out;
}

Outcome photon_sector() {
  Outcome out;
  double planck_excess = -1.0;
  for (int n_max : {2, 8, 30}) {
    // The k = 0 mode has ω = m0 = 1, so β is βω directly.
    const PhotonSector s = testing::single_mode_sector({{0, 0, 0}, 1}, n_max);
    for (double bw : {0.5, 1.0, 2.0}) {
      const PlanckResult r = planck_partition(s, bw);
      const double slack = 64 * std::numeric_limits<double>::epsilon();
      planck_excess = std::max(planck_excess, r.relative_gap - r.gap_bound);
      out.pass = out.pass && r.relative_gap >= -slack && r.relative_gap <= r.gap_bound + slack;
    }
  }
  double euclid = 0.0;
  for (double bw : {1.0, 2.0}) {
    for (double frac : {0.0, 0.25, 0.5, 0.75}) {
      const EuclideanResult r = euclidean_two_point(1.0, 30, bw, frac * bw, 0.0);
      euclid = std::max(euclid, r.gap);
      out.pass = out.pass && r.gap <= 1e-8;
    }
  }
  out.detail = fmt("Planck gap - bound <= %.3e on 9 cells, Euclidean gap %.3e at n_max = 30",
                   planck_excess, euclid);
  return out;
}

Outcome algebra() {
  Outcome out;
  double car = 0.0;
  for (Index n = 1; n <= 4; ++n) car = std::max(car, car_residual(spinful_ops(FermionBasis(n))));
  double hp = 0.0;
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {2, 2}}) {
    const TorusLattice lat(d, ell);
    const FermionBasis basis(lat.num_sites());
    const OperatorMatrix u = hole_particle_unitary(basis, lat);
    hp = std::max({hp, hole_particle_residual(u, basis, lat), unitarity_residual(u.matrix())});
  }
  double unit = 0.0;
  double anti = 0.0;
  const std::vector<ModelConfig> models = {
      testing::photon_model(1.0, 1.0),
      {1.0, 0.7, 1.0, TorusLattice(2, 2), CouplingProfile::onsite_nn(2, 2.0, 0.5),
       build_sector([] {
         PhotonConfig pc;
         pc.kappa = 6.0;
         pc.n_max = 3;
         pc.modes = {{{1, 1, 0}, 1}, {{0, 1, 0}, 1}};
         return pc;
       }())}};
  for (const ModelConfig& m : models) {
    for (const Bond& b : m.lattice.bonds()) {
      const OperatorMatrix fwd = bond_phase_generator(*m.photon, m.lattice, b.from, b.to);
      const OperatorMatrix rev = bond_phase_generator(*m.photon, m.lattice, b.to, b.from);
      anti = std::max(anti, max_abs(fwd.matrix() + rev.matrix()));
      for (double e : {0.5, 1.0, 2.0}) {
        for (int sign : {+1, -1}) {
          unit = std::max(unit, unitarity_residual(peierls_phase(fwd, e, sign).matrix()));
        }
      }
    }
  }
  out.pass = car <= 1e-13 && hp <= 1e-12 && unit <= 1e-12 && anti == 0.0;
  out.detail = fmt("CAR %.3e, hole-particle %.3e, ", car, hp) +
               fmt("Peierls unitarity %.3e, antisymmetry %.1e", unit, anti);
  return out;
}

Outcome decoupling() {
  Outcome out;
  double gap = 0.0;
  int cells = 0;
  for (const auto& cell : photon_scan.body["cells"]) {
    if (cell["e_charge"].get<double>() != 0.0) continue;
    ++cells;
    gap = std::max(gap, cell["decoupling"]["max_gap"].get<double>());
  }
  // Independent route: the pure model built from scratch.
  for (double beta : {0.5, 2.0}) {
    const ModelConfig coupled = testing::photon_model(0.0, beta);
    const ModelConfig pure = testing::hubbard_model(1, 2, 1.0, 2.0, 1.0, beta);
    const ThermalState a = diagonalize(build_total(coupled), beta);
    const ThermalState b = diagonalize(build_hubbard(pure), beta);
    for (const MomentumGrid grid(pure.lattice); const auto& q : grid.points()) {
      gap = std::max(gap, std::abs(susceptibility(a, coupled, q) - susceptibility(b, pure, q)));
    }
  }
  out.pass = cells == 2 && gap <= 1e-10;
  out.detail = fmt("max |chi_coupled - chi_pure| = %.3e at e = 0", gap);
  return out;
}

Outcome duhamel_engine() {
  Outcome out;
  MatrixXc flip(2, 2);
  flip << 0, 1, 1, 0;
  double closed_gap = 0.0;
  for (double eps : {1e-7, 1e-3, 0.7, 3.0}) {
    for (double beta : {0.4, 1.3, 10.0}) {
      const ThermalState two =
          diagonalize(plain(VectorXc((VectorXc(2) << 0.0, eps).finished()).asDiagonal()), beta);
      const double closed = 2.0 * -std::expm1(-beta * eps) / (beta * eps) / (1.0 + std::exp(-beta * eps));
      closed_gap = std::max(closed_gap, std::abs(duhamel(two, plain(flip), plain(flip)).value - closed));
    }
  }

  std::mt19937_64 rng(314);
  double sandwich = -1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 4 + trial % 12;
    const ThermalState st = diagonalize(plain(random_hermitian(rng, n, 1.0 + trial % 4)), 0.1 + 0.15 * trial);
    const MatrixXc a = random_matrix(rng, n);
    const Complex d = duhamel(st, plain(a.adjoint()), plain(a)).value;
    const double upper = 0.5 * thermal_average(st, plain(a.adjoint() * a + a * a.adjoint())).real();
    sandwich = std::max({sandwich, -d.real(), d.real() - upper});
    out.pass = out.pass && d.real() >= -1e-12 && d.real() <= upper + 1e-12 && std::abs(d.imag()) <= 1e-12;
  }

  double sensitivity = 0.0;
  std::vector<std::pair<ModelConfig, OperatorMatrix>> cases;
  for (double u0 : {1.0, 4.0}) {
    for (double beta : {0.5, 2.0}) {
      const ModelConfig m = testing::hubbard_model(1, 4, 1.0, u0, 0.0, beta);
      cases.emplace_back(m, build_hubbard(m));
    }
  }
  for (double e : {0.0, 0.5, 1.0}) {
    for (double beta : {0.5, 2.0}) {
      const ModelConfig m = testing::photon_model(e, beta);
      cases.emplace_back(m, build_total(m));
    }
  }
  for (const auto& [m, h] : cases) {
    const ThermalState st = diagonalize(h, m.beta);
    for (const MomentumGrid grid(m.lattice); const auto& q : grid.points()) {
      double lo = 1e300;
      double hi = -1e300;
      for (double tau : {1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
        const double chi = susceptibility(st, m, q, tau);
        lo = std::min(lo, chi);
        hi = std::max(hi, chi);
      }
      sensitivity = std::max(sensitivity, hi - lo);
    }
  }
  out.pass = out.pass && closed_gap <= 1e-12 && sensitivity <= 1e-8;
  out.detail = fmt("two-level gap %.3e, sandwich excess %.3e, ", closed_gap, sandwich) +
               fmt("threshold sensitivity %.3e", sensitivity);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"susceptibility bound, pure Hubbard", kubo_kishi},
      {"susceptibility bound, photon-coupled", generalized_bound},
      {"Gaussian domination", domination},
      {"Duhamel quadratic form bound", corollary},
      {"hole-particle conjugation of H", conjugation},
      {"half filling", half_filling},
      {"photon sector Planck and Euclidean", photon_sector},
      {"operator algebra", algebra},
      {"decoupling at e = 0", decoupling},
      {"Duhamel engine oracles", duhamel_engine}};

  int failed = 0;
  const auto total = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed,
              criteria.size(), seconds_since(total));
  return failed == 0 ? 0 : 1;
}
