#include "causalbic/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#include <arm_neon.h>
#define CAUSALBIC_HAVE_NEON_BUILD 1
#endif

namespace causalbic::kernels::neon {

#if CAUSALBIC_HAVE_NEON_BUILD

void accumulate_outer(std::span<double> sum, std::span<const double> x) {
    const std::size_t p = x.size();
    const double* xs = x.data();
    for (std::size_t i = 0; i < p; ++i) {
        const float64x2_t xi = vdupq_n_f64(xs[i]);
        double* row = sum.data() + i * p;
        std::size_t j = 0;
        for (; j + 2 <= p; j += 2) {
            const float64x2_t prod = vmulq_f64(xi, vld1q_f64(xs + j));
            vst1q_f64(row + j, vaddq_f64(vld1q_f64(row + j), prod));
        }
        for (; j < p; ++j) row[j] += xs[i] * xs[j];
    }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const float64x2_t a = vdupq_n_f64(alpha);
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t prod = vmulq_f64(a, vld1q_f64(x.data() + i));
        vst1q_f64(y.data() + i, vaddq_f64(vld1q_f64(y.data() + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

#else

void accumulate_outer(std::span<double> sum, std::span<const double> x) { scalar::accumulate_outer(sum, x); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { scalar::axpy(alpha, x, y); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }

#endif

}  // namespace causalbic::kernels::neon
