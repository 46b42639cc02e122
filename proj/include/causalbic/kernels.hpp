#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace causalbic::kernels {

// Dense inner loops used by the statistics and likelihood code. Each kernel has
// a scalar reference implementation plus SIMD variants; the variant is picked
// once at startup from the CPU's capabilities.

enum class SimdLevel { Scalar, Avx2, Neon };

std::string_view to_string(SimdLevel level);

/// Best level supported by this CPU and build. Setting the environment
/// variable CAUSALBIC_SIMD=scalar forces the reference kernels.
SimdLevel detected_level();

/// Level currently used by the dispatching entry points below.
SimdLevel active_level();

/// Overrides the dispatch level; throws ParameterError if unsupported here.
void set_active_level(SimdLevel level);

bool supported(SimdLevel level);

/// sum += x xᵀ for a row-major p×p `sum`, p = x.size().
void accumulate_outer(std::span<double> sum, std::span<const double> x);

/// y += alpha * x.
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Σ a_i b_i.
double dot(std::span<const double> a, std::span<const double> b);

// Per-level implementations, exposed for equivalence testing.
namespace scalar {
void accumulate_outer(std::span<double> sum, std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
void accumulate_outer(std::span<double> sum, std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

namespace neon {
void accumulate_outer(std::span<double> sum, std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace neon

}  // namespace causalbic::kernels
