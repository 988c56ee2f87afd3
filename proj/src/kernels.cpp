#include "gvlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace gvlab {

namespace {

// 4th-order one-sided closures (layer 0 and 1 from the boundary), and the
// interior central stencil. Coefficients divided by 12h at use site.
//   f'(x0) ~ (-25 f0 + 48 f1 - 36 f2 + 16 f3 - 3 f4) / 12h
//   f'(x1) ~ ( -3 f0 - 10 f1 + 18 f2 -  6 f3 +   f4) / 12h
//   f'(xi) ~ (   f[i-2] - 8 f[i-1] + 8 f[i+1] - f[i+2]) / 12h
struct LineDeriv {
  int n;
  std::ptrdiff_t stride;
  double inv12h;
  bool periodic;

  inline void apply(const double* f, double* out) const {
    auto at = [&](int i) { return f[static_cast<std::ptrdiff_t>(i) * stride]; };
    auto put = [&](int i, double v) {
      out[static_cast<std::ptrdiff_t>(i) * stride] = v;
    };
    if (periodic) {
      for (int i = 0; i < n; ++i) {
        const int im2 = (i - 2 + n) % n, im1 = (i - 1 + n) % n;
        const int ip1 = (i + 1) % n, ip2 = (i + 2) % n;
        put(i, (at(im2) - 8.0 * at(im1) + 8.0 * at(ip1) - at(ip2)) * inv12h);
      }
    } else {
      put(0, (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) -
              3.0 * at(4)) *
                 inv12h);
      put(1, (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) +
              at(4)) *
                 inv12h);
      for (int i = 2; i < n - 2; ++i)
        put(i, (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) *
                   inv12h);
      put(n - 2, (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) +
                  6.0 * at(n - 4) - at(n - 5)) *
                     inv12h);
      put(n - 1, (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) -
                  16.0 * at(n - 4) + 3.0 * at(n - 5)) *
                     inv12h);
    }
  }
};

struct LineLayout {
  std::ptrdiff_t line_stride;   // stride between consecutive points of a line
  std::size_t nlines;           // number of lines transverse to the axis
  // Starting offset of line l.
  std::size_t line_start(const ChartGrid& g, int axis, std::size_t l) const {
    const int n2 = g.n[1], n3 = g.n[2];
    switch (axis) {
      case 0: {  // lines vary in i; l enumerates (j,k)
        const std::size_t j = l / n3, k = l % n3;
        return j * n3 + k;
      }
      case 1: {  // l enumerates (i,k)
        const std::size_t i = l / n3, k = l % n3;
        return (i * static_cast<std::size_t>(n2)) * n3 + k;
      }
      default: {  // l enumerates (i,j)
        const std::size_t i = l / n2, j = l % n2;
        return (i * static_cast<std::size_t>(n2) + j) * n3;
      }
    }
  }
};

LineLayout layout_for(const ChartGrid& g, int axis) {
  const int n2 = g.n[1], n3 = g.n[2];
  LineLayout L{};
  switch (axis) {
    case 0:
      L.line_stride = static_cast<std::ptrdiff_t>(n2) * n3;
      L.nlines = static_cast<std::size_t>(n2) * n3;
      break;
    case 1:
      L.line_stride = n3;
      L.nlines = static_cast<std::size_t>(g.n[0]) * n3;
      break;
    case 2:
      L.line_stride = 1;
      L.nlines = static_cast<std::size_t>(g.n[0]) * n2;
      break;
    default:
      throw std::invalid_argument("derivative_axis: axis out of range");
  }
  return L;
}

void derivative_axis_impl(const ChartGrid& g, const double* in, double* out,
                          int axis, bool parallel) {
  if (axis < 0 || axis > 2)
    throw std::invalid_argument("derivative_axis: axis out of range");
  const LineLayout L = layout_for(g, axis);
  const LineDeriv D{g.n[axis], L.line_stride, 1.0 / (12.0 * g.spacing(axis)),
                    g.topo[axis] == Topology::periodic};
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(L.nlines); ++l) {
      const std::size_t s = L.line_start(g, axis, static_cast<std::size_t>(l));
      D.apply(in + s, out + s);
    }
  } else {
    for (std::size_t l = 0; l < L.nlines; ++l) {
      const std::size_t s = L.line_start(g, axis, l);
      D.apply(in + s, out + s);
    }
  }
}

constexpr std::size_t kBlock = 1024;

double block_pairwise(std::span<const double> v, bool parallel) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb, 0.0);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
      const std::size_t hi = std::min(n, lo + kBlock);
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += v[i];
      partial[static_cast<std::size_t>(b)] = s;
    }
  } else {
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t lo = b * kBlock;
      const std::size_t hi = std::min(n, lo + kBlock);
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += v[i];
      partial[b] = s;
    }
  }
  // Fixed-shape pairwise tree over block sums.
  std::size_t m = nb;
  while (m > 1) {
    const std::size_t half = m / 2;
    for (std::size_t i = 0; i < half; ++i)
      partial[i] = partial[2 * i] + partial[2 * i + 1];
    if (m % 2) {
      partial[half] = partial[m - 1];
      m = half + 1;
    } else {
      m = half;
    }
  }
  return partial[0];
}

}  // namespace

void derivative_axis(const ChartGrid& g, const double* in, double* out,
                     int axis) {
  derivative_axis_impl(g, in, out, axis, true);
}

double deterministic_sum(std::span<const double> v) {
  return block_pairwise(v, true);
}

namespace ref {

void derivative_axis_serial(const ChartGrid& g, const double* in, double* out,
                            int axis) {
  derivative_axis_impl(g, in, out, axis, false);
}

double deterministic_sum_serial(std::span<const double> v) {
  return block_pairwise(v, false);
}

double kahan_sum(std::span<const double> v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace ref

}  // namespace gvlab
