#include "rdeval/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rdeval {

namespace {

// Gaussian elimination with partial pivoting on an n x n system, n <= 4.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
    }
    if (a[pivot * n + col] == 0.0) {
      throw RdError(ErrorCode::DuplicateAbscissa, "singular system while fitting");
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i * n + k] * x[k];
    x[i] = s / a[i * n + i];
  }
  return x;
}

// Interpolating polynomial of degree knots.size()-1 in the basis centered at
// x_ref. Centering keeps the Vandermonde solve well conditioned for PSNR-range
// abscissae.
std::array<double, 4> polyfit_exact(std::span<const Knot> knots, double x_ref) {
  const std::size_t n = knots.size();
  std::vector<double> a(n * n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = knots[i].x - x_ref;
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = p;
      p *= t;
    }
    b[i] = knots[i].y;
  }
  std::vector<double> c = solve_dense(std::move(a), std::move(b));
  std::array<double, 4> out{};
  std::copy(c.begin(), c.end(), out.begin());
  return out;
}

// Least-squares cubic via normal equations, centered at x_ref.
std::array<double, 4> polyfit_least_squares(std::span<const Knot> knots, double x_ref) {
  std::vector<double> ata(16, 0.0);
  std::vector<double> atb(4, 0.0);
  for (const Knot& k : knots) {
    const double t = k.x - x_ref;
    std::array<double, 4> row{1.0, t, t * t, t * t * t};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) ata[i * 4 + j] += row[i] * row[j];
      atb[i] += row[i] * k.y;
    }
  }
  std::vector<double> c = solve_dense(std::move(ata), std::move(atb));
  return {c[0], c[1], c[2], c[3]};
}

// Re-expresses c(t), t = x - a, as coefficients in t' = x - b.
std::array<double, 4> shift_basis(const std::array<double, 4>& c, double a, double b) {
  const double d = b - a;  // t = t' + d
  std::array<double, 4> out{};
  out[0] = c[0] + c[1] * d + c[2] * d * d + c[3] * d * d * d;
  out[1] = c[1] + 2.0 * c[2] * d + 3.0 * c[3] * d * d;
  out[2] = c[2] + 3.0 * c[3] * d;
  out[3] = c[3];
  return out;
}

void require_sorted_distinct(std::span<const Knot> knots) {
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].x == knots[i - 1].x) {
      std::ostringstream os;
      os << "two knots share abscissa " << knots[i].x;
      throw RdError(ErrorCode::DuplicateAbscissa, os.str());
    }
    if (knots[i].x < knots[i - 1].x) {
      throw RdError(ErrorCode::InvalidParameter, "knots must be sorted by ascending x");
    }
  }
}

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Fritsch-Carlson knot slopes: weighted harmonic mean in the interior, zero
// across extrema, three-point non-centered formula with clamping at the ends.
std::vector<double> pchip_slopes(std::span<const Knot> knots) {
  const std::size_t n = knots.size();
  std::vector<double> h(n - 1);
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = knots[i + 1].x - knots[i].x;
    d[i] = (knots[i + 1].y - knots[i].y) / h[i];
  }

  std::vector<double> m(n);
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] == 0.0 || d[i] == 0.0 || sgn(d[i - 1]) != sgn(d[i])) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }

  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double m0 = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sgn(m0) != sgn(d0)) {
      m0 = 0.0;
    } else if (sgn(d0) != sgn(d1) && std::abs(m0) > 3.0 * std::abs(d0)) {
      m0 = 3.0 * d0;
    }
    return m0;
  };
  m[0] = endpoint(h[0], h[1], d[0], d[1]);
  m[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

}  // namespace

FittedCurve::FittedCurve(Interpolator kind, std::vector<Knot> knots,
                         std::vector<Segment> segments, bool interpolating, bool fallback_fired,
                         std::optional<std::array<double, 4>> global_coefficients)
    : kind_(kind),
      knots_(std::move(knots)),
      segments_(std::move(segments)),
      interpolating_(interpolating),
      fallback_fired_(fallback_fired),
      global_coefficients_(std::move(global_coefficients)) {}

const FittedCurve::Segment& FittedCurve::segment_at(double x) const {
  if (x < min_x() || x > max_x()) {
    std::ostringstream os;
    os << "x=" << x << " outside fit domain [" << min_x() << ", " << max_x() << "]";
    throw RdError(ErrorCode::OutOfDomain, os.str());
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const Segment& s) { return v < s.lo; });
  if (it != segments_.begin()) --it;
  return *it;
}

double FittedCurve::evaluate(double x) const {
  const Segment& s = segment_at(x);
  const double t = x - s.x_ref;
  return ((s.c[3] * t + s.c[2]) * t + s.c[1]) * t + s.c[0];
}

double FittedCurve::integrate(double lo, double hi) const {
  if (!(lo < hi)) {
    std::ostringstream os;
    os << "integration bounds must satisfy lo < hi, got [" << lo << ", " << hi << "]";
    throw RdError(ErrorCode::OutOfDomain, os.str());
  }
  if (lo < min_x() || hi > max_x()) {
    std::ostringstream os;
    os << "integration bounds [" << lo << ", " << hi << "] exceed fit domain [" << min_x() << ", "
       << max_x() << "]";
    throw RdError(ErrorCode::OutOfDomain, os.str());
  }

  auto antiderivative = [](const Segment& s, double x) {
    const double t = x - s.x_ref;
    return (((s.c[3] * t / 4.0 + s.c[2] / 3.0) * t + s.c[1] / 2.0) * t + s.c[0]) * t;
  };

  double total = 0.0;
  for (const Segment& s : segments_) {
    const double a = std::max(lo, s.lo);
    const double b = std::min(hi, s.hi);
    if (a >= b) continue;
    total += antiderivative(s, b) - antiderivative(s, a);
  }
  return total;
}

std::vector<Knot> to_fit_domain(const RdCurve& curve, FitDomain domain) {
  std::vector<Knot> knots;
  knots.reserve(curve.size());
  for (const RdPoint& p : curve.points()) {
    const double lograte = std::log10(p.rate);
    if (domain == FitDomain::quality_to_lograte) {
      knots.push_back({p.quality, lograte});
    } else {
      knots.push_back({lograte, p.quality});
    }
  }
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].x == knots[i - 1].x) {
      std::ostringstream os;
      os << "two points share " << (domain == FitDomain::quality_to_lograte ? "quality " : "log-rate ")
         << knots[i].x << " in curve " << curve.label() << "/" << curve.sequence();
      throw RdError(ErrorCode::DuplicateAbscissa, os.str());
    }
  }
  return knots;
}

FittedCurve fit_cubic_polyfit(std::span<const Knot> knots, bool allow_fallback) {
  require_sorted_distinct(knots);
  const std::size_t n = knots.size();
  if (n != 4 && !allow_fallback) {
    throw RdError(ErrorCode::WrongKnotCount,
                  "cubic polyfit needs exactly 4 knots, got " + std::to_string(n) +
                      " (enable the fallback policy to fit anyway)");
  }
  if (n < 2) {
    throw RdError(ErrorCode::WrongKnotCount,
                  "cubic polyfit needs at least 2 knots even with fallback, got " + std::to_string(n));
  }

  const double x_ref =
      std::accumulate(knots.begin(), knots.end(), 0.0, [](double s, const Knot& k) { return s + k.x; }) /
      static_cast<double>(n);

  std::array<double, 4> centered{};
  bool interpolating = true;
  if (n <= 4) {
    centered = polyfit_exact(knots, x_ref);
  } else {
    centered = polyfit_least_squares(knots, x_ref);
    interpolating = false;
  }

  FittedCurve::Segment segment;
  segment.lo = knots.front().x;
  segment.hi = knots.back().x;
  segment.x_ref = x_ref;
  segment.c = centered;

  std::array<double, 4> global = shift_basis(centered, x_ref, 0.0);
  return FittedCurve(Interpolator::cubic_polyfit, {knots.begin(), knots.end()}, {segment},
                     interpolating, n != 4, global);
}

FittedCurve fit_pchip(std::span<const Knot> knots) {
  if (knots.size() < 2) {
    throw RdError(ErrorCode::TooFewKnots,
                  "pchip needs at least 2 knots, got " + std::to_string(knots.size()));
  }
  require_sorted_distinct(knots);

  const std::vector<double> m = pchip_slopes(knots);
  std::vector<FittedCurve::Segment> segments;
  segments.reserve(knots.size() - 1);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double h = knots[i + 1].x - knots[i].x;
    const double d = (knots[i + 1].y - knots[i].y) / h;
    FittedCurve::Segment s;
    s.lo = knots[i].x;
    s.hi = knots[i + 1].x;
    s.x_ref = knots[i].x;
    s.c[0] = knots[i].y;
    s.c[1] = m[i];
    s.c[2] = (3.0 * d - 2.0 * m[i] - m[i + 1]) / h;
    s.c[3] = (m[i] + m[i + 1] - 2.0 * d) / (h * h);
    segments.push_back(s);
  }
  return FittedCurve(Interpolator::pchip, {knots.begin(), knots.end()}, std::move(segments), true,
                     false, std::nullopt);
}

}  // namespace rdeval
