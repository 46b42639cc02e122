#include "causalbic/kernels.hpp"

namespace causalbic::kernels::scalar {

void accumulate_outer(std::span<double> sum, std::span<const double> x) {
    const std::size_t p = x.size();
    for (std::size_t i = 0; i < p; ++i) {
        const double xi = x[i];
        double* row = sum.data() + i * p;
        for (std::size_t j = 0; j < p; ++j) row[j] += xi * x[j];
    }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace causalbic::kernels::scalar
