#pragma once

#include <span>
#include <string_view>

// Data-parallel reductions used by the monitor, the performance graph and
// value iteration. Every kernel has a scalar reference implementation and an
// AVX2 variant; the active table is chosen once at startup from CPUID and can
// be forced to the scalar path with ALSTL_SIMD=scalar.
namespace alstl::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  double (*reduce_min)(std::span<const double>);
  double (*reduce_max)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  Isa isa;
};

namespace scalar {
double reduce_min(std::span<const double> xs);
double reduce_max(std::span<const double> xs);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

namespace avx2 {
double reduce_min(std::span<const double> xs);
double reduce_max(std::span<const double> xs);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace avx2

bool cpu_has_avx2();

const KernelTable& scalar_table();
// Null when the build or the host lacks AVX2.
const KernelTable* avx2_table();

const KernelTable& active();
std::string_view isa_name(Isa isa);

// Empty input folds to the identity: +inf for min, -inf for max.
inline double reduce_min(std::span<const double> xs) { return active().reduce_min(xs); }
inline double reduce_max(std::span<const double> xs) { return active().reduce_max(xs); }
inline double dot(std::span<const double> a, std::span<const double> b) { return active().dot(a, b); }

}  // namespace alstl::kernels
