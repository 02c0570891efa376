#include "alstl/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace alstl::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::reduce_min, &scalar::reduce_max, &scalar::dot, Isa::Scalar};

#if defined(ALSTL_HAVE_AVX2_TU)
constexpr KernelTable kAvx2{&avx2::reduce_min, &avx2::reduce_max, &avx2::dot, Isa::Avx2};
#endif

const KernelTable& select() {
  if (const char* env = std::getenv("ALSTL_SIMD"); env != nullptr && std::string_view(env) == "scalar") {
    return kScalar;
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return kScalar;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(ALSTL_HAVE_AVX2_TU)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace alstl::kernels
