#include "rphl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

namespace rphl {

namespace {

int floor_mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

TorusLattice::TorusLattice(int d, int ell) : d_(d), ell_(ell) {
  if (d < 1 || d > 3) throw PreconditionError("torus dimension must be 1, 2 or 3");
  if (ell < 2 || ell % 2 != 0) throw PreconditionError("torus side must be even and >= 2");

  Index count = 1;
  for (int k = 0; k < d; ++k) count *= ell;
  sites_.reserve(static_cast<std::size_t>(count));
  for (Index n = 0; n < count; ++n) {
    Coord x(static_cast<std::size_t>(d));
    Index rest = n;
    for (int k = d - 1; k >= 0; --k) {
      x[static_cast<std::size_t>(k)] = static_cast<int>(rest % ell) - ell / 2;
      rest /= ell;
    }
    index_.emplace(x, n);
    sites_.push_back(std::move(x));
  }

  std::set<std::pair<Index, Index>> seen;
  for (Index i = 0; i < count; ++i) {
    for (int axis = 0; axis < d; ++axis) {
      Coord y = sites_[static_cast<std::size_t>(i)];
      y[static_cast<std::size_t>(axis)] += 1;
      const Index j = index_of(wrap(std::move(y)));
      const auto key = std::minmax(i, j);
      if (seen.insert(key).second) bonds_.push_back({i, j, axis});
    }
  }
}

TorusLattice build_torus(int d, int ell) { return TorusLattice(d, ell); }

Coord TorusLattice::wrap(Coord x) const {
  for (auto& c : x) c = floor_mod(c + ell_ / 2, ell_) - ell_ / 2;
  return x;
}

Index TorusLattice::index_of(const Coord& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) throw PreconditionError("coordinate is not a site of the torus");
  return it->second;
}

int TorusLattice::parity(Index i) const {
  int sum = 0;
  for (int c : site(i)) sum += c;
  return floor_mod(sum, 2) == 0 ? 1 : -1;
}

bool TorusLattice::are_neighbors(Index a, Index b) const {
  return std::any_of(bonds_.begin(), bonds_.end(), [&](const Bond& bd) {
    return (bd.from == a && bd.to == b) || (bd.from == b && bd.to == a);
  });
}

std::vector<Index> TorusLattice::neighbors(Index i) const {
  std::vector<Index> out;
  for (const auto& bd : bonds_) {
    if (bd.from == i) out.push_back(bd.to);
    if (bd.to == i) out.push_back(bd.from);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MomentumGrid::MomentumGrid(const TorusLattice& lat) : lat_(lat) {
  const double step = 2.0 * std::numbers::pi / lat.side();
  points_.reserve(lat.sites().size());
  for (const auto& m : lat.sites()) {
    VectorXr p(lat.dimension());
    for (int k = 0; k < lat.dimension(); ++k) p(k) = step * m[static_cast<std::size_t>(k)];
    points_.push_back({m, std::move(p)});
  }
}

const Momentum& MomentumGrid::at(const Coord& label) const {
  if (static_cast<int>(label.size()) != lat_.dimension()) {
    throw PreconditionError("momentum label has wrong dimension");
  }
  return points_[static_cast<std::size_t>(lat_.index_of(lat_.wrap(label)))];
}

const Momentum& MomentumGrid::negate(const Momentum& q) const {
  Coord minus = q.label;
  for (auto& c : minus) c = -c;
  return at(minus);
}

CouplingProfile::CouplingProfile(std::vector<CouplingEntry> entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  for (const auto& e : entries_) {
    if (!std::isfinite(e.u)) throw PreconditionError("coupling values must be finite");
    if (entries_.front().dx.size() != e.dx.size() || e.dx.empty() || e.dx.size() > 3) {
      throw PreconditionError("coupling displacements must share one dimension in 1..3");
    }
  }
}

CouplingProfile CouplingProfile::onsite_nn(int d, double onsite, double nn) {
  std::vector<CouplingEntry> entries;
  entries.push_back({Coord(static_cast<std::size_t>(d), 0), onsite});
  if (nn != 0.0) {
    for (int axis = 0; axis < d; ++axis) {
      for (int s : {1, -1}) {
        Coord dx(static_cast<std::size_t>(d), 0);
        dx[static_cast<std::size_t>(axis)] = s;
        entries.push_back({dx, nn / (2.0 * d)});
      }
    }
  }
  return CouplingProfile(std::move(entries),
                         "onsite=" + std::to_string(onsite) + ",nn=" + std::to_string(nn));
}

VectorXr CouplingProfile::on_torus(const TorusLattice& lat) const {
  VectorXr values = VectorXr::Zero(lat.num_sites());
  for (const auto& e : entries_) {
    if (static_cast<int>(e.dx.size()) != lat.dimension()) {
      throw PreconditionError("coupling profile dimension does not match the lattice");
    }
    values(lat.index_of(lat.wrap(e.dx))) += e.u;
  }
  return values;
}

double CouplingProfile::asymmetry(const TorusLattice& lat) const {
  const VectorXr values = on_torus(lat);
  double worst = 0.0;
  for (Index i = 0; i < lat.num_sites(); ++i) {
    Coord minus = lat.site(i);
    for (auto& c : minus) c = -c;
    const Index j = lat.index_of(lat.wrap(minus));
    worst = std::max(worst, std::abs(values(i) - values(j)));
  }
  return worst;
}

MatrixXr CouplingProfile::matrix(const TorusLattice& lat) const {
  if (asymmetry(lat) > 1e-12 * std::max(1.0, max_abs_value())) {
    throw PreconditionError("coupling profile is not symmetric: U(-x) != U(x) on the torus");
  }
  const VectorXr u = on_torus(lat);
  const Index n = lat.num_sites();
  MatrixXr m(n, n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      Coord diff = lat.site(x);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= lat.site(y)[k];
      m(x, y) = u(lat.index_of(lat.wrap(std::move(diff))));
    }
  }
  return m;
}

double CouplingProfile::max_abs_value() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.u));
  return m;
}

double coupling_fourier(const CouplingProfile& coupling, const TorusLattice& lat,
                        const Momentum& p) {
  const VectorXr u = coupling.on_torus(lat);
  Complex sum = 0.0;
  for (Index i = 0; i < lat.num_sites(); ++i) {
    double phase = 0.0;
    for (int k = 0; k < lat.dimension(); ++k) {
      phase += lat.site(i)[static_cast<std::size_t>(k)] * p.p(k);
    }
    sum += std::polar(1.0, -phase) * u(i);
  }
  if (std::abs(sum.imag()) > tol::kFourierImag) {
    throw NumericalCheckError("Fourier transform of coupling has imaginary part " +
                              std::to_string(sum.imag()));
  }
  return sum.real();
}

ConditionReport check_conditions(const CouplingProfile& coupling, const TorusLattice& lat) {
  const MomentumGrid grid(lat);
  ConditionReport report{true, 0.0, grid.points().front()};
  bool first = true;
  for (const auto& q : grid.points()) {
    const double value = coupling_fourier(coupling, lat, q);
    if (first || value < report.min_fourier) {
      report.min_fourier = value;
      report.argmin = q;
      first = false;
    }
  }
  report.a2_holds = report.min_fourier >= -tol::kConditionA2;
  return report;
}

}  // namespace rphl
