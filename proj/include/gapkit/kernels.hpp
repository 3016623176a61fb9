#pragma once

#include "gapkit/types.hpp"

#include <span>
#include <vector>

// Data-parallel inner loops. Every kernel ships in two forms: a serial
// reference (`*_serial`) used by the test suite as ground truth, and an
// OpenMP version (`*_parallel`) used by the library. The parallel variants
// are elementwise or max-reductions, so results are bit-identical to the
// serial ones regardless of thread count.
namespace gapkit::kernels {

// sup over the grid {lo + k*step : k = 0..count-1} of |sum_j w_j e^{i x s_j}|.
double ft_scan_max_serial(std::span<const double> supports,
                          std::span<const complex_t> weights,
                          double lo, double step, std::size_t count);
double ft_scan_max_parallel(std::span<const double> supports,
                            std::span<const complex_t> weights,
                            double lo, double step, std::size_t count);

// Row-major symmetric concentration matrix G[k][l] = 2 sin(a(p_k-p_l))/(p_k-p_l),
// diagonal 2a.
void gram_fill_serial(std::span<const double> points, double a,
                      std::vector<double>& out);
void gram_fill_parallel(std::span<const double> points, double a,
                        std::vector<double>& out);

// Transported weights e_k = scale_k * sum_j d_j / (base_j - target_k).
// Inner sums sweep outward from the nearest base point and stop once the
// remaining-mass bound tail_tv * (2/min_dist) drops below `tail_tol`.
void transport_weights_serial(std::span<const double> base,
                              std::span<const complex_t> d,
                              std::span<const double> targets,
                              std::span<const double> scale_re,
                              double min_dist, double tail_tol,
                              std::vector<complex_t>& out);
void transport_weights_parallel(std::span<const double> base,
                                std::span<const complex_t> d,
                                std::span<const double> targets,
                                std::span<const double> scale_re,
                                double min_dist, double tail_tol,
                                std::vector<complex_t>& out);

} // namespace gapkit::kernels
