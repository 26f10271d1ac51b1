#include "rphl/harness.hpp"

#include "rphl/thermal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

namespace rphl::harness {

Status worst(Status a, Status b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Violation: return "violation";
    case Status::Refused: return "refused";
    case Status::ResourceGuard: return "resource_guard";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// configuration

namespace {

template <typename T>
T field(const Json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return obj.at(key).get<T>();
}

std::vector<double> number_or_list(const Json& value, const char* what) {
  std::vector<double> out;
  if (value.is_number()) {
    out.push_back(value.get<double>());
  } else if (value.is_array()) {
    for (const auto& v : value) out.push_back(v.get<double>());
  } else {
    throw PreconditionError(std::string(what) + " must be a number or a list of numbers");
  }
  return out;
}

Coord parse_label(const Json& value, int d) {
  Coord label = value.is_number_integer() ? Coord{value.get<int>()} : value.get<Coord>();
  if (static_cast<int>(label.size()) != d) {
    throw PreconditionError("momentum label must have one integer per lattice dimension");
  }
  return label;
}

/// ell^d, refusing before the lattice is ever materialized.
void guard_site_count(int d, int ell) {
  double sites = 1.0;
  for (int k = 0; k < d; ++k) sites *= ell;
  // 4^15 already exceeds the hard limit.
  if (sites > 15.0) {
    throw ResourceGuardError("lattice with " + std::to_string(static_cast<long long>(sites)) +
                             " sites exceeds the dimension guard");
  }
}

Json label_json(const ModeLabel& m) {
  return Json::array({m.n[0], m.n[1], m.n[2], m.lambda});
}

}  // namespace

CouplingProfile parse_coupling(const Json& spec, int d) {
  if (!spec.is_object()) throw PreconditionError("coupling spec must be an object");
  if (spec.contains("table")) {
    std::vector<CouplingEntry> entries;
    for (const auto& row : spec.at("table")) {
      Coord dx = row.at("dx").get<Coord>();
      if (static_cast<int>(dx.size()) != d) {
        throw PreconditionError("coupling displacement must have one entry per lattice dimension");
      }
      entries.push_back({std::move(dx), row.at("u").get<double>()});
    }
    return CouplingProfile(std::move(entries), field<std::string>(spec, "label", "table"));
  }
  if (!spec.contains("onsite")) {
    throw PreconditionError("coupling spec needs \"onsite\" (and optional \"nn\") or \"table\"");
  }
  return CouplingProfile::onsite_nn(d, spec.at("onsite").get<double>(), field(spec, "nn", 0.0));
}

PhotonConfig parse_photon(const Json& spec) {
  if (!spec.is_object()) throw PreconditionError("photon spec must be an object or null");
  PhotonConfig pc;
  pc.L = field(spec, "L", pc.L);
  pc.kappa = field(spec, "kappa", pc.kappa);
  pc.m0 = field(spec, "m0", pc.m0);
  pc.n_max = field(spec, "n_max", pc.n_max);
  pc.include_zero_mode = field(spec, "include_zero_mode", false);
  if (spec.contains("modes") && !spec.at("modes").is_null()) {
    const Json& modes = spec.at("modes");
    if (modes.is_string()) {
      if (modes.get<std::string>() != "auto") {
        throw PreconditionError("photon modes must be \"auto\" or a list of [n1, n2, n3, lambda]");
      }
    } else {
      for (const auto& m : modes) {
        const auto v = m.get<std::vector<int>>();
        if (v.size() != 4) throw PreconditionError("photon mode label must be [n1, n2, n3, lambda]");
        pc.modes.push_back({{v[0], v[1], v[2]}, v[3]});
      }
      if (pc.modes.empty()) throw PreconditionError("explicit photon mode list is empty");
    }
  }
  return pc;
}

ModelConfig ExperimentConfig::model(double e_charge, double beta) const {
  guard_site_count(d, ell);
  TorusLattice lat(d, ell);
  ModelConfig m{t, e_charge, beta, lat, coupling, std::nullopt};
  check_dimension(m.electron_dim(), "electron space");
  if (photon) m.photon = build_sector(*photon, m.electron_dim());
  m.validate();
  return m;
}

ExperimentConfig parse_config(const Json& doc) {
  if (!doc.is_object() || !doc.contains("model")) {
    throw PreconditionError("config must be an object with a \"model\" section");
  }
  const Json& model = doc.at("model");
  ExperimentConfig c;
  c.d = field(model, "d", c.d);
  c.ell = field(model, "ell", c.ell);
  c.t = field(model, "t", c.t);
  if (!(c.t > 0.0)) throw PreconditionError("model.t must be positive");
  if (model.contains("e_charge")) c.e_charges = number_or_list(model.at("e_charge"), "e_charge");
  if (!model.contains("beta")) throw PreconditionError("model.beta is required");
  c.betas = number_or_list(model.at("beta"), "beta");
  if (c.betas.empty()) throw PreconditionError("beta list must be non-empty");
  if (c.e_charges.empty()) throw PreconditionError("e_charge list must be non-empty");
  for (double b : c.betas) {
    if (!(b > 0.0)) throw PreconditionError("every beta must be positive");
  }
  if (!model.contains("coupling")) throw PreconditionError("model.coupling is required");
  c.coupling_spec = model.at("coupling");
  c.coupling = parse_coupling(c.coupling_spec, c.d);
  if (model.contains("photon") && !model.at("photon").is_null()) {
    c.photon = parse_photon(model.at("photon"));
  }

  if (doc.contains("scan")) {
    const Json& scan = doc.at("scan");
    if (scan.contains("momenta")) {
      const Json& momenta = scan.at("momenta");
      if (momenta.is_string()) {
        if (momenta.get<std::string>() != "all") {
          throw PreconditionError("scan.momenta must be \"all\" or a list of labels");
        }
      } else {
        c.scan.all_momenta = false;
        for (const auto& m : momenta) c.scan.momenta.push_back(parse_label(m, c.d));
      }
    }
    c.scan.h_samples = field(scan, "h_samples", 0);
    c.scan.h_scale = field(scan, "h_scale", c.scan.h_scale);
    c.scan.seed = field<std::uint64_t>(scan, "seed", 0);
  }
  if (c.scan.h_samples < 0) throw PreconditionError("h_samples must be non-negative");
  if (!(c.scan.h_scale >= 0.0)) throw PreconditionError("h_scale must be non-negative");
  c.output = field<std::string>(doc, "output", "");

  // Validates lattice, photon sector and the guard for the whole sweep.
  const ModelConfig probe = c.model(c.e_charges.front(), c.betas.front());
  if (!c.scan.all_momenta) {
    for (const auto& label : c.scan.momenta) {
      if (probe.lattice.wrap(label) != label) {
        throw PreconditionError("momentum label outside the lattice's dual grid");
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& err) {
    throw PreconditionError(std::string("config is not valid JSON: ") + err.what());
  }
  return parse_config(doc);
}

Json echo(const ExperimentConfig& c) {
  Json photon = nullptr;
  if (c.photon) {
    Json modes = "auto";
    if (!c.photon->modes.empty()) {
      modes = Json::array();
      for (const auto& m : c.photon->modes) modes.push_back(label_json(m));
    }
    photon = {{"L", c.photon->L},
              {"kappa", c.photon->kappa},
              {"m0", c.photon->m0},
              {"n_max", c.photon->n_max},
              {"modes", modes},
              {"include_zero_mode", c.photon->include_zero_mode}};
  }
  Json momenta = "all";
  if (!c.scan.all_momenta) momenta = c.scan.momenta;
  return {{"model",
           {{"d", c.d},
            {"ell", c.ell},
            {"t", c.t},
            {"e_charge", c.e_charges},
            {"beta", c.betas},
            {"coupling", c.coupling_spec},
            {"photon", photon}}},
          {"scan",
           {{"momenta", momenta},
            {"h_samples", c.scan.h_samples},
            {"h_scale", c.scan.h_scale},
            {"seed", c.scan.seed},
            {"generator", SampleStream::kName}}},
          {"output", c.output}};
}

// ---------------------------------------------------------------------------
// sampling

double SampleStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t sample_seed(std::uint64_t seed, int index) {
  return seed + static_cast<std::uint64_t>(index);
}

VectorXr real_source(std::uint64_t seed, Index sites, double scale) {
  SampleStream rng(seed);
  VectorXr h(sites);
  for (Index x = 0; x < sites; ++x) h(x) = rng.symmetric(scale);
  return h;
}

VectorXc complex_source(std::uint64_t seed, Index sites, double scale) {
  SampleStream rng(seed);
  VectorXc h(sites);
  for (Index x = 0; x < sites; ++x) {
    const double re = rng.symmetric(scale);
    h(x) = Complex(re, rng.symmetric(scale));
  }
  return h;
}

// ---------------------------------------------------------------------------
// commands

namespace {

/// Runs body(i) for i in [0, count) on a small pool; results are written by index so the
/// merge order never depends on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

struct Cell {
  double e;
  double beta;
};

std::vector<Cell> sweep_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (double e : c.e_charges) {
    for (double b : c.betas) cells.push_back({e, b});
  }
  return cells;
}

Json momentum_json(const Momentum& q) {
  std::vector<double> p(q.p.data(), q.p.data() + q.p.size());
  return {{"label", q.label}, {"p", p}};
}

Json refusal(const std::string& reason) {
  return {{"status", to_string(Status::Refused)}, {"reason", reason}};
}

/// Structured refusal if the coupling's Fourier transform is negative somewhere on the grid.
std::optional<Json> positivity_refusal(const ExperimentConfig& c) {
  const ModelConfig m = c.model(c.e_charges.front(), c.betas.front());
  const ConditionReport cond = check_conditions(m.coupling, m.lattice);
  if (cond.a2_holds) return std::nullopt;
  Json body = refusal("coupling Fourier transform is negative at a grid momentum");
  body["condition"] = "fourier_positivity";
  body["momentum"] = momentum_json(cond.argmin);
  body["u_hat"] = cond.min_fourier;
  body["tolerance"] = tol::kConditionA2;
  return body;
}

VectorXr sorted_spectrum(const OperatorMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalCheckError("eigensolver did not converge");
  return solver.eigenvalues();
}

Json identity_record(const ModelConfig& m) {
  const OperatorMatrix h = build_total(m);
  const OperatorMatrix h_hat = build_transformed(m);
  const OperatorMatrix u = model_hole_particle_unitary(m);
  const double scale = max_abs(h.matrix());
  const double conj = max_abs_diff(u.matrix() * h.matrix() * u.matrix().adjoint(), h_hat.matrix()) /
                      (scale > 0.0 ? scale : 1.0);
  const double spec = max_abs_diff(sorted_spectrum(h), sorted_spectrum(h_hat));
  const double herm_scale = std::max(1.0, scale);
  const double herm = std::max(hermiticity_residual(h.matrix()), hermiticity_residual(h_hat.matrix()));

  Json rec = {{"e_charge", m.e_charge},
              {"conjugation_residual", conj},
              {"conjugation_tolerance", tol::kConjugation},
              {"spectrum_gap", spec},
              {"spectrum_tolerance", tol::kSpectrum},
              {"hermiticity_residual", herm},
              {"hermiticity_tolerance", tol::kHermitian * herm_scale}};
  bool pass = conj <= tol::kConjugation && spec <= tol::kSpectrum &&
              herm <= tol::kHermitian * herm_scale;

  if (m.photon) {
    double unitarity = 0.0;
    double antisymmetry = 0.0;
    for (const Bond& b : m.lattice.bonds()) {
      const OperatorMatrix fwd = bond_phase_generator(*m.photon, m.lattice, b.from, b.to);
      const OperatorMatrix rev = bond_phase_generator(*m.photon, m.lattice, b.to, b.from);
      antisymmetry = std::max(antisymmetry, max_abs(fwd.matrix() + rev.matrix()));
      for (int sign : {+1, -1}) {
        unitarity = std::max(unitarity,
                             unitarity_residual(peierls_phase(fwd, m.e_charge, sign).matrix()));
        unitarity = std::max(unitarity,
                             unitarity_residual(peierls_phase(rev, m.e_charge, sign).matrix()));
      }
    }
    rec["peierls_unitarity_residual"] = unitarity;
    rec["peierls_unitarity_tolerance"] = tol::kUnitary;
    rec["peierls_antisymmetry_residual"] = antisymmetry;
    rec["peierls_antisymmetry_tolerance"] = 0.0;
    pass = pass && unitarity <= tol::kUnitary && antisymmetry == 0.0;
  }
  rec["pass"] = pass;
  return rec;
}

}  // namespace

Section cmd_verify_identities(const ExperimentConfig& config) {
  Section out;
  const ModelConfig base = config.model(config.e_charges.front(), config.betas.front());
  const FermionBasis basis = base.basis();

  Json electron;
  if (basis.n_sites <= 4) {
    const double car = car_residual(spinful_ops(basis));
    electron["car_residual"] = car;
    electron["car_tolerance"] = tol::kCar;
    electron["car_pass"] = car <= tol::kCar;
    if (car > tol::kCar) out.status = Status::Violation;
  } else {
    electron["car_residual"] = "skipped";
  }
  const OperatorMatrix u = hole_particle_unitary(basis, base.lattice);
  const double hp = hole_particle_residual(u, basis, base.lattice);
  const double unit = unitarity_residual(u.matrix());
  electron["hole_particle_residual"] = hp;
  electron["hole_particle_tolerance"] = tol::kHoleParticle;
  electron["unitarity_residual"] = unit;
  electron["unitarity_tolerance"] = tol::kUnitary;
  electron["hole_particle_pass"] = hp <= tol::kHoleParticle && unit <= tol::kUnitary;
  if (!electron["hole_particle_pass"].get<bool>()) out.status = Status::Violation;

  std::vector<Json> records(config.e_charges.size());
  parallel_for(records.size(), [&](std::size_t i) {
    records[i] = identity_record(config.model(config.e_charges[i], config.betas.front()));
  });

  // The electron-only conjugation is always checked; with photons it is reported separately.
  Json pure_record = nullptr;
  if (config.photon) {
    ModelConfig pure = base;
    pure.photon.reset();
    pure_record = identity_record(pure);
    if (!pure_record["pass"].get<bool>()) out.status = worst(out.status, Status::Violation);
  }
  for (const auto& r : records) {
    if (!r["pass"].get<bool>()) out.status = worst(out.status, Status::Violation);
  }

  out.body = {{"status", to_string(out.status)},
              {"electron", electron},
              {"conjugation", records},
              {"photon", config.photon ? Json("checked") : Json("skipped")}};
  if (config.photon) out.body["conjugation_without_photon"] = pure_record;
  return out;
}

Section cmd_bound_scan(const ExperimentConfig& config) {
  if (auto refused = positivity_refusal(config)) return {*refused, Status::Refused};

  const std::vector<Cell> cells = sweep_cells(config);
  std::vector<Json> records(cells.size());
  std::vector<char> ok(cells.size(), 1);
  parallel_for(cells.size(), [&](std::size_t i) {
    const ModelConfig m = config.model(cells[i].e, cells[i].beta);
    const MomentumGrid grid(m.lattice);
    std::vector<Momentum> momenta;
    if (config.scan.all_momenta) {
      momenta = grid.points();
    } else {
      for (const auto& label : config.scan.momenta) momenta.push_back(grid.at(label));
    }

    const ThermalState state = diagonalize(build_total(m), m.beta);
    bool cell_ok = true;
    Json rows = Json::array();
    std::vector<double> chis;
    for (const auto& q : momenta) {
      const double u_hat = coupling_fourier(m.coupling, m.lattice, q);
      const double chi = susceptibility(state, m, q);
      const bool skipped = u_hat <= tol::kConditionA2;
      const double product = chi * u_hat;
      const bool pass = skipped || product <= 1.0 + tol::kBound;
      cell_ok = cell_ok && pass;
      chis.push_back(chi);
      Json row = momentum_json(q);
      row["chi"] = chi;
      row["u_hat"] = u_hat;
      row["chi_times_u"] = product;
      row["skipped"] = skipped;
      row["pass"] = pass;
      rows.push_back(row);
    }

    double filling = 0.0;
    for (Index x = 0; x < m.lattice.num_sites(); ++x) {
      filling = std::max(filling, std::abs(thermal_average(state, site_density(m, x)) - 1.0));
    }
    const double filling_tol = m.photon ? tol::kHalfFillingPhoton : tol::kHalfFillingPure;
    cell_ok = cell_ok && filling <= filling_tol;

    Json rec = {{"e_charge", m.e_charge},
                {"beta", m.beta},
                {"bound_tolerance", tol::kBound},
                {"momenta", rows},
                {"half_filling",
                 {{"max_deviation", filling},
                  {"tolerance", filling_tol},
                  {"pass", filling <= filling_tol}}}};

    if (m.photon && m.e_charge == 0.0) {
      ModelConfig pure = m;
      pure.photon.reset();
      const ThermalState pure_state = diagonalize(build_hubbard(pure), pure.beta);
      double gap = 0.0;
      for (std::size_t k = 0; k < momenta.size(); ++k) {
        gap = std::max(gap, std::abs(chis[k] - susceptibility(pure_state, pure, momenta[k])));
      }
      rec["decoupling"] = {
          {"max_gap", gap}, {"tolerance", tol::kDecoupling}, {"pass", gap <= tol::kDecoupling}};
      cell_ok = cell_ok && gap <= tol::kDecoupling;
    }
    rec["pass"] = cell_ok;
    ok[i] = cell_ok;
    records[i] = std::move(rec);
  });

  Section out;
  for (char c : ok) {
    if (!c) out.status = Status::Violation;
  }
  out.body = {{"status", to_string(out.status)}, {"cells", records}};
  return out;
}

Section cmd_domination(const ExperimentConfig& config) {
  if (config.scan.h_samples < 1) return {refusal("domination scan needs h_samples >= 1"), Status::Refused};
  if (auto refused = positivity_refusal(config)) return {*refused, Status::Refused};

  const std::vector<Cell> cells = sweep_cells(config);
  const auto samples = static_cast<std::size_t>(config.scan.h_samples);
  std::vector<std::unique_ptr<DominationScan>> scans(cells.size());
  std::vector<std::unique_ptr<ThermalState>> hat_states(cells.size());
  std::vector<ModelConfig> models;
  for (const auto& cell : cells) models.push_back(config.model(cell.e, cell.beta));
  parallel_for(cells.size(), [&](std::size_t i) {
    scans[i] = std::make_unique<DominationScan>(models[i]);
    hat_states[i] =
        std::make_unique<ThermalState>(diagonalize(build_transformed(models[i]), models[i].beta));
  });

  const Index n = models.front().lattice.num_sites();
  std::vector<double> ratios(cells.size() * samples);
  std::vector<CorollaryResult> corollaries(cells.size() * samples);
  parallel_for(cells.size() * samples, [&](std::size_t k) {
    const std::size_t i = k / samples;
    const std::uint64_t seed = sample_seed(config.scan.seed, static_cast<int>(k % samples));
    ratios[k] = scans[i]->ratio(real_source(seed, n, config.scan.h_scale));
    corollaries[k] =
        verify_corollary(*hat_states[i], models[i], complex_source(seed, n, config.scan.h_scale));
  });

  Section out;
  Json records = Json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double at_zero = scans[i]->ratio(VectorXr::Zero(n));
    double ratio_max = -std::numeric_limits<double>::infinity();
    std::uint64_t argmax = config.scan.seed;
    double margin = -std::numeric_limits<double>::infinity();
    std::uint64_t worst_seed = config.scan.seed;
    bool corollary_ok = true;
    for (std::size_t s = 0; s < samples; ++s) {
      const std::size_t k = i * samples + s;
      const std::uint64_t seed = sample_seed(config.scan.seed, static_cast<int>(s));
      if (ratios[k] > ratio_max) {
        ratio_max = ratios[k];
        argmax = seed;
      }
      const CorollaryResult& c = corollaries[k];
      const double excess = c.lhs - c.rhs - tol::kCorollary * std::max(1.0, c.rhs);
      if (excess > margin) {
        margin = excess;
        worst_seed = seed;
      }
      corollary_ok = corollary_ok && c.pass;
    }
    const bool dom_ok = ratio_max <= 1.0 + tol::kDomination && at_zero == 1.0;
    if (!dom_ok || !corollary_ok) out.status = Status::Violation;
    records.push_back({{"e_charge", cells[i].e},
                       {"beta", cells[i].beta},
                       {"seed", config.scan.seed},
                       {"samples", config.scan.h_samples},
                       {"h_scale", config.scan.h_scale},
                       {"ratio_at_zero", at_zero},
                       {"ratio_max", ratio_max},
                       {"argmax_seed", argmax},
                       {"tolerance", tol::kDomination},
                       {"pass", dom_ok},
                       {"corollary",
                        {{"max_excess", margin},
                         {"worst_seed", worst_seed},
                         {"tolerance", tol::kCorollary},
                         {"pass", corollary_ok}}}});
  }
  out.body = {{"status", to_string(out.status)}, {"generator", SampleStream::kName}, {"cells", records}};
  return out;
}

Section cmd_photon_checks(const ExperimentConfig& config) {
  if (!config.photon) return {refusal("photon sector is absent"), Status::Refused};
  constexpr int kConvergedNmax = 30;
  const PhotonSector sector = build_sector(*config.photon);

  Section out;
  Json planck = Json::array();
  for (double beta : config.betas) {
    const PlanckResult r = planck_partition(sector, beta);
    // Every neglected term of the tail is positive, so 0 ≤ gap ≤ bound up to rounding.
    const double slack = 64 * std::numeric_limits<double>::epsilon();
    const bool pass = r.relative_gap >= -slack && r.relative_gap <= r.gap_bound + slack;
    if (!pass) out.status = Status::Violation;
    planck.push_back({{"beta", beta},
                      {"n_max", sector.n_max()},
                      {"truncated", r.truncated},
                      {"closed_form", r.closed_form},
                      {"planck_gap", r.relative_gap},
                      {"gap_bound", r.gap_bound},
                      {"rounding_slack", slack},
                      {"pass", pass}});
  }

  Json euclidean = Json::array();
  for (const auto& mode : sector.modes()) {
    for (double beta : config.betas) {
      for (int n_max : {sector.n_max(), kConvergedNmax}) {
        const bool gated = n_max >= kConvergedNmax && beta * mode.omega >= 1.0;
        double gap = 0.0;
        Json taus = Json::array();
        for (double frac : {0.0, 0.25, 0.5}) {
          const EuclideanResult r = euclidean_two_point(mode.omega, n_max, beta, frac * beta, 0.0);
          gap = std::max(gap, r.gap);
          taus.push_back({{"tau", frac * beta},
                          {"trace_side", r.trace_side},
                          {"covariance_side", r.covariance_side}});
        }
        const bool pass = !gated || gap <= tol::kEuclidean;
        if (!pass) out.status = Status::Violation;
        euclidean.push_back({{"mode", label_json(mode.label)},
                             {"omega", mode.omega},
                             {"beta", beta},
                             {"beta_omega", beta * mode.omega},
                             {"n_max", n_max},
                             {"times", taus},
                             {"euclidean_gap", gap},
                             {"gated", gated},
                             {"tolerance", tol::kEuclidean},
                             {"pass", pass}});
        if (n_max == kConvergedNmax) break;
      }
    }
  }
  out.body = {{"status", to_string(out.status)},
              {"num_modes", sector.num_modes()},
              {"boson_dim", sector.boson_dim()},
              {"planck", planck},
              {"euclidean", euclidean}};
  return out;
}

// ---------------------------------------------------------------------------
// orchestration

namespace {

using Command = Section (*)(const ExperimentConfig&);

Section guarded(Command cmd, const ExperimentConfig& config) {
  try {
    return cmd(config);
  } catch (const ResourceGuardError& err) {
    return {{{"status", to_string(Status::ResourceGuard)}, {"reason", err.what()}},
            Status::ResourceGuard};
  } catch (const PreconditionError& err) {
    return {refusal(err.what()), Status::Refused};
  } catch (const NumericalCheckError& err) {
    return {{{"status", to_string(Status::Violation)}, {"reason", err.what()}}, Status::Violation};
  }
}

}  // namespace

RunResult run(const std::string& command, const ExperimentConfig& config) {
  const std::vector<std::pair<std::string, Command>> all = {
      {"verify-identities", &cmd_verify_identities},
      {"bound-scan", &cmd_bound_scan},
      {"domination", &cmd_domination},
      {"photon-checks", &cmd_photon_checks}};

  std::vector<std::pair<std::string, Command>> selected;
  for (const auto& entry : all) {
    if (command == "all" || command == entry.first) selected.push_back(entry);
  }
  if (selected.empty()) throw PreconditionError("unknown command " + command);

  Json sections = Json::object();
  Json timing = Json::object();
  Status status = Status::Pass;
  for (const auto& [name, cmd] : selected) {
    Section s;
    const auto start = std::chrono::steady_clock::now();
    if (command == "all" && name == "photon-checks" && !config.photon) {
      s.body = {{"status", "skipped"}, {"reason", "photon sector is absent"}};
    } else if (command == "all" && name == "domination" && config.scan.h_samples < 1) {
      s.body = {{"status", "skipped"}, {"reason", "h_samples is 0"}};
    } else {
      s = guarded(cmd, config);
    }
    timing[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    status = worst(status, s.status);
    sections[name] = std::move(s.body);
  }

  Json report = {{"version", kVersion},
                 {"command", command},
                 {"config", echo(config)},
                 {"conventions",
                  {{"bond_path", "straight unit step from x to its nearest torus image y = x + e_axis"},
                   {"photon_volume", "|V| = L^3 with L taken from config.model.photon.L"},
                   {"sample_seed", "scan.seed + sample index"}}},
                 {"sections", sections},
                 {"status", to_string(status)},
                 {"exit_code", static_cast<int>(status)},
                 {"timing", timing}};
  return {report, status};
}

std::string bound_table_csv(const Json& report) {
  std::ostringstream csv;
  csv.precision(17);
  csv << "e_charge,beta,label,p,chi,u_hat,chi_times_u,skipped,pass\n";
  const auto& sections = report.at("sections");
  if (!sections.contains("bound-scan") || !sections.at("bound-scan").contains("cells")) {
    return csv.str();
  }
  auto join = [](const Json& arr) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < arr.size(); ++i) s << (i ? " " : "") << arr[i].get<double>();
    return s.str();
  };
  for (const auto& cell : sections.at("bound-scan").at("cells")) {
    for (const auto& row : cell.at("momenta")) {
      csv << cell.at("e_charge").get<double>() << ',' << cell.at("beta").get<double>() << ','
          << join(row.at("label")) << ',' << join(row.at("p")) << ','
          << row.at("chi").get<double>() << ',' << row.at("u_hat").get<double>() << ','
          << row.at("chi_times_u").get<double>() << ',' << row.at("skipped").get<bool>() << ','
          << row.at("pass").get<bool>() << '\n';
    }
  }
  return csv.str();
}

std::string canonical_dump(const Json& report) {
  Json copy = report;
  copy.erase("timing");
  return copy.dump(2);
}

}  // namespace rphl::harness
