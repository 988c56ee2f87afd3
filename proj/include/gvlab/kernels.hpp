#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gvlab/grid.hpp"

namespace gvlab {

/// 4th-order partial derivative of a flattened grid array along one axis.
/// Periodic axes use the central 5-point stencil everywhere; bounded axes
/// use one-sided 4th-order closures on the two boundary layers.
/// OpenMP-parallel over grid lines; per-point arithmetic is independent of
/// the thread count, so results are bitwise reproducible.
void derivative_axis(const ChartGrid& g, const double* in, double* out,
                     int axis);

/// Deterministic sum: fixed-size blocks accumulated in index order, then a
/// pairwise tree over the block sums. Independent of thread count.
double deterministic_sum(std::span<const double> v);

/// Serial reference implementations kept for testing and benchmarking.
/// They perform the same arithmetic as the parallel kernels (bitwise-equal
/// results) but run single-threaded with plain loops.
namespace ref {

void derivative_axis_serial(const ChartGrid& g, const double* in, double* out,
                            int axis);

double deterministic_sum_serial(std::span<const double> v);

/// Plain left-to-right compensated (Kahan) sum, used as an accuracy oracle
/// for the pairwise reduction.
double kahan_sum(std::span<const double> v);

}  // namespace ref

}  // namespace gvlab
