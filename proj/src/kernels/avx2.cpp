#include "causalbic/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define CAUSALBIC_HAVE_AVX2_BUILD 1
#endif

namespace causalbic::kernels::avx2 {

#if CAUSALBIC_HAVE_AVX2_BUILD

// Multiply and add stay separate (no FMA) so accumulate_outer and axpy agree
// bit for bit with the scalar kernels.

__attribute__((target("avx2"))) void accumulate_outer(std::span<double> sum,
                                                      std::span<const double> x) {
    const std::size_t p = x.size();
    const double* xs = x.data();
    for (std::size_t i = 0; i < p; ++i) {
        const __m256d xi = _mm256_set1_pd(xs[i]);
        double* row = sum.data() + i * p;
        std::size_t j = 0;
        for (; j + 4 <= p; j += 4) {
            const __m256d prod = _mm256_mul_pd(xi, _mm256_loadu_pd(xs + j));
            _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), prod));
        }
        for (; j < p; ++j) row[j] += xs[i] * xs[j];
    }
}

__attribute__((target("avx2"))) void axpy(double alpha, std::span<const double> x,
                                          std::span<double> y) {
    const __m256d a = _mm256_set1_pd(alpha);
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(a, _mm256_loadu_pd(x.data() + i));
        _mm256_storeu_pd(y.data() + i, _mm256_add_pd(_mm256_loadu_pd(y.data() + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) double dot(std::span<const double> a,
                                               std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    const __m128d half = _mm_add_pd(_mm256_castpd256_pd128(acc0), _mm256_extractf128_pd(acc0, 1));
    double acc = _mm_cvtsd_f64(_mm_add_sd(half, _mm_unpackhi_pd(half, half)));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

#else

void accumulate_outer(std::span<double> sum, std::span<const double> x) { scalar::accumulate_outer(sum, x); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { scalar::axpy(alpha, x, y); }
double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }

#endif

}  // namespace causalbic::kernels::avx2
