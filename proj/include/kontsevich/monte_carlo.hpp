#pragma once

// Monte Carlo estimates of the weights. Full mode samples every free vertex
// of the gauge-fixed chart and integrates the determinant of the edge-angle
// Jacobian; reduced mode for Gamma samples y only and uses the closed form of
// the integrated wedges.
//
// Runs are split into chunks with derived seeds. Each chunk is a sequential
// stream, chunks are combined in index order, so the result depends only on
// (seed, samples, chunks) and not on how many threads ran them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "kontsevich/exact_weights.hpp"
#include "kontsevich/propagator.hpp"

namespace kontsevich::numeric {

using geom::Complex;
using geom::HPoint;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  WeightQuery family;
  std::uint64_t rejected = 0;  // degenerate draws that were redrawn
  unsigned chunks = 1;
};

/// Orientation of the chart coordinates relative to the orientation in which
/// the weights come out positive: Gamma (Re y, Im y, Re z, Im z, ...),
/// Upsilon (theta, Re z, Im z, ...), Lambda (Re z, Im z, ...). Fixed once
/// against w_Gamma1 = 1/24, w_Upsilon0 = 1 and w_Lambda1 = 1/2; each wedge
/// block (Re z, Im z) is positively oriented, so the constant does not
/// depend on n.
inline constexpr int chart_orientation(Family family) {
  switch (family) {
    case Family::Gamma: return 1;
    case Family::Upsilon: return 1;
    case Family::Lambda: return 1;
  }
  return 1;
}

/// Same for the 2-form dphi(x,y) dphi(y,x) in (Re y, Im y) with x = i.
inline constexpr int kReducedGammaOrientation = 1;

namespace detail {

inline constexpr double kReject = 1e-12;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t seed, unsigned chunk) {
  return splitmix64(seed ^ splitmix64(0x5851f42d4c957f2dULL + chunk));
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }  // [0, 1)

 private:
  std::mt19937_64 rng_;
};

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double tot = na + nb;
    mean += d * nb / tot;
    m2 += o.m2 + d * d * na * nb / tot;
    n += o.n;
  }
};

// Polar proposal around `center`: radius r = s t/(1-t) with t uniform, angle
// uniform. Full-plane components are folded into the upper half plane by
// conjugation; half-plane components need a real center.
struct PolarComponent {
  Complex center;
  double scale = 1.0;
  bool half_plane = false;
};

class Proposal {
 public:
  void add(Complex center, double scale, bool half_plane) { comps_.push_back({center, scale, half_plane}); }

  // false on a degenerate draw (zero radius or a point on the real line)
  bool draw(Uniform& u, Complex& out) const {
    const std::size_t K = comps_.size();
    std::size_t idx = std::min(static_cast<std::size_t>(u() * static_cast<double>(K)), K - 1);
    const PolarComponent& c = comps_[idx];
    const double t = u();
    const double psi = u();
    if (t == 0.0) return false;
    const double r = c.scale * t / (1.0 - t);
    const double ang = (c.half_plane ? 1.0 : 2.0) * std::numbers::pi * psi;
    Complex z = c.center + std::polar(r, ang);
    if (z.imag() < 0.0) z = std::conj(z);
    if (!(z.imag() > 0.0) || !std::isfinite(z.real())) return false;
    out = z;
    return true;
  }

  double density(Complex z) const {
    auto radial = [](double s, double r) { return s / (r * (s + r) * (s + r)); };
    double total = 0.0;
    for (const auto& c : comps_) {
      if (c.half_plane) {
        total += radial(c.scale, std::abs(z - c.center)) / std::numbers::pi;
      } else {
        total += (radial(c.scale, std::abs(z - c.center)) + radial(c.scale, std::abs(std::conj(z) - c.center))) /
                 (2.0 * std::numbers::pi);
      }
    }
    return total / static_cast<double>(comps_.size());
  }

 private:
  std::vector<PolarComponent> comps_;
};

/// Proposal for a wedge vertex whose two edges point at a and b.
inline Proposal wedge_proposal(const HPoint& a, const HPoint& b) {
  Proposal p;
  const double D = std::abs(a.z() - b.z());
  for (const HPoint* t : {&a, &b}) {
    if (t->on_boundary()) {
      p.add(t->z(), D, true);
    } else {
      p.add(t->z(), std::min(t->im, D), false);
      p.add(t->z(), D, false);
    }
  }
  p.add({0.5 * (a.re + b.re), 0.0}, D + std::max(a.im, b.im), true);
  return p;
}

inline Proposal gamma_y_proposal() {
  Proposal p;
  p.add({0.0, 1.0}, 1.0, false);
  p.add({0.0, 1.0}, 0.1, false);
  p.add({0.0, 0.0}, 1.0, true);
  return p;
}

/// Determinant of the matrix whose row e holds the partials of the e-th edge
/// angle with respect to the chart coordinates.
inline double edge_determinant(const geom::GaugeFixedConfig& config) {
  const auto verts = config.vertices();
  const auto edges = geom::family_edges(config.family, config.n);
  const int D = static_cast<int>(config.coords.size());
  if (static_cast<int>(edges.size()) != D)
    throw Error(ErrorCode::DimensionOverflow, "edge count differs from chart dimension");
  if (D == 0) return 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(D, D);
  for (int e = 0; e < D; ++e) {
    const auto& src = verts[edges[e].first];
    const auto& tgt = verts[edges[e].second];
    const auto g = geom::angle_gradient(src.point, tgt.point);
    auto scatter = [&](const geom::VertexChart& v, double d_re, double d_im) {
      for (int c = 0; c < 2; ++c) {
        if (v.coord[c] < 0) continue;
        M(e, v.coord[c]) += d_re * v.jac[0][c] + d_im * v.jac[1][c];
      }
    };
    scatter(src, g.du_re, g.du_im);
    scatter(tgt, g.dv_re, g.dv_im);
  }
  return M.determinant();
}

inline bool separated(const std::vector<geom::VertexChart>& verts) {
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      if (std::abs(verts[i].point.z() - verts[j].point.z()) < kReject) return false;
  return true;
}

/// Runs `chunks` independent streams and folds them in order. `draw` takes
/// (Uniform&, rejected counter&) and returns one importance-weighted value.
/// threads = 0 uses the hardware concurrency.
template <class Draw>
McEstimate run_chunks(std::uint64_t samples, std::uint64_t seed, unsigned chunks, unsigned threads,
                      const Draw& draw) {
  if (samples == 0) throw std::invalid_argument("Monte Carlo needs samples >= 1");
  if (chunks == 0) throw std::invalid_argument("Monte Carlo needs chunks >= 1");
  std::vector<Moments> moments(chunks);
  std::vector<std::uint64_t> rejected(chunks, 0);
  auto work = [&](unsigned c) {
    std::uint64_t count = samples / chunks + (c < samples % chunks ? 1 : 0);
    Uniform u(chunk_seed(seed, c));
    for (std::uint64_t i = 0; i < count; ++i) moments[c].add(draw(u, rejected[c]));
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min(chunks, threads);
  if (workers == 1) {
    for (unsigned c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (unsigned c = w; c < chunks; c += workers) work(c);
      });
    for (auto& t : pool) t.join();
  }
  Moments total;
  McEstimate est;
  for (unsigned c = 0; c < chunks; ++c) {
    total.merge(moments[c]);
    est.rejected += rejected[c];
  }
  est.mean = total.mean;
  const double var = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
  est.std_error = std::sqrt(var / static_cast<double>(total.n));
  est.samples = total.n;
  est.seed = seed;
  est.chunks = chunks;
  return est;
}

// One importance-weighted sample of the full integrand.
inline double full_sample(Family family, unsigned n, Uniform& u, std::uint64_t& rejected) {
  const unsigned D = geom::family_dimension(family, n);
  const double norm = std::pow(geom::kTwoPi, static_cast<double>(D));
  std::vector<double> coords(D);
  static const Proposal y_prop = gamma_y_proposal();
  for (;;) {
    double density = 1.0;
    HPoint a, b;  // wedge targets
    unsigned offset = 0;
    bool ok = true;
    switch (family) {
      case Family::Gamma: {
        Complex y;
        if (!y_prop.draw(u, y)) { ok = false; break; }
        coords[0] = y.real();
        coords[1] = y.imag();
        density = y_prop.density(y);
        a = {0.0, 1.0};
        b = HPoint::from(y);
        offset = 2;
        break;
      }
      case Family::Upsilon: {
        const double v = u();
        if (v == 0.0) { ok = false; break; }
        coords[0] = std::numbers::pi * v;
        density = 1.0 / std::numbers::pi;
        a = {std::cos(coords[0]), std::sin(coords[0])};
        b = {0.0, 0.0};
        offset = 1;
        break;
      }
      case Family::Lambda:
        a = {0.0, 0.0};
        b = {1.0, 0.0};
        break;
    }
    if (ok && n > 0) {
      const Proposal zp = wedge_proposal(a, b);
      for (unsigned k = 0; k < n && ok; ++k) {
        Complex z;
        if (!zp.draw(u, z)) { ok = false; break; }
        coords[offset + 2 * k] = z.real();
        coords[offset + 2 * k + 1] = z.imag();
        density *= zp.density(z);
      }
    }
    if (ok) {
      geom::GaugeFixedConfig config(family, n, coords);
      if (separated(config.vertices()) && std::isfinite(density) && density > 0.0) {
        return chart_orientation(family) * edge_determinant(config) / (norm * density);
      }
    }
    ++rejected;
  }
}

inline double reduced_gamma_sample(unsigned n, Uniform& u, std::uint64_t& rejected) {
  static const Proposal y_prop = gamma_y_proposal();
  const HPoint x{0.0, 1.0};
  for (;;) {
    Complex yz;
    if (y_prop.draw(u, yz) && std::abs(yz - x.z()) >= kReject && std::abs(yz.real() - x.re) >= kReject) {
      const HPoint y = HPoint::from(yz);
      const auto gxy = geom::angle_gradient(x, y);  // phi(x,y), y as target
      const auto gyx = geom::angle_gradient(y, x);  // phi(y,x), y as source
      const double det = gxy.dv_re * gyx.du_im - gxy.dv_im * gyx.du_re;
      const double wedge = std::pow(geom::wedge_factor_bulk(x, y), static_cast<double>(n));
      const double density = y_prop.density(yz);
      return kReducedGammaOrientation * wedge * det / (geom::kTwoPi * geom::kTwoPi * density);
    }
    ++rejected;
  }
}

}  // namespace detail

/// Gamma_n with the wedges integrated in closed form: a 2-dimensional
/// integral over y with x = i.
inline McEstimate reduced_gamma_mc(unsigned n, std::uint64_t samples, std::uint64_t seed, unsigned chunks = 1,
                                   unsigned threads = 0) {
  McEstimate est = detail::run_chunks(samples, seed, chunks, threads, [n](detail::Uniform& u, std::uint64_t& rej) {
    return detail::reduced_gamma_sample(n, u, rej);
  });
  est.family = {Family::Gamma, n};
  return est;
}

inline McEstimate full_mc(const WeightQuery& family, std::uint64_t samples, std::uint64_t seed, unsigned chunks = 1,
                          unsigned threads = 0) {
  McEstimate est = detail::run_chunks(samples, seed, chunks, threads, [family](detail::Uniform& u, std::uint64_t& rej) {
    return detail::full_sample(family.family, family.n, u, rej);
  });
  est.family = family;
  return est;
}

struct ConvergenceRow {
  std::uint64_t samples = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double abs_error = 0.0;
  double z = 0.0;
};

inline std::vector<ConvergenceRow> convergence_report(const WeightQuery& family,
                                                      const std::vector<std::uint64_t>& ladder,
                                                      std::uint64_t seed, unsigned chunks = 1) {
  if (!std::is_sorted(ladder.begin(), ladder.end()))
    throw std::invalid_argument("sample ladder must be ascending");
  const double exact = to_double(exact::evaluate_weight(family).value);
  std::vector<ConvergenceRow> rows;
  for (auto s : ladder) {
    const McEstimate e = full_mc(family, s, seed, chunks);
    const double err = std::abs(e.mean - exact);
    rows.push_back({s, e.mean, e.std_error, err, e.std_error > 0 ? (e.mean - exact) / e.std_error : 0.0});
  }
  return rows;
}

}  // namespace kontsevich::numeric
