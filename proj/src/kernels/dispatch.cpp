#include <cstdlib>
#include <string>

#include "mmw/error.hpp"
#include "mmw/kernels.hpp"

namespace mmw::kernels {

#if defined(MMW_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernel_table();  // avx2.cpp
#endif

bool avx2_supported() {
#if defined(MMW_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported;
#else
  return false;
#endif
}

const KernelTable* avx2_kernels() {
#if defined(MMW_HAVE_AVX2_KERNELS)
  if (avx2_supported()) return &avx2_kernel_table();
#endif
  return nullptr;
}

const KernelTable& select_kernels(const char* request) {
  const std::string want = request ? request : "auto";
  if (want.empty() || want == "auto") {
    const KernelTable* fast = avx2_kernels();
    return fast ? *fast : scalar_kernels();
  }
  if (want == "scalar") return scalar_kernels();
  if (want == "avx2") {
    if (const KernelTable* fast = avx2_kernels()) return *fast;
    throw ParameterError("AVX2 kernels requested but not available on this build or CPU");
  }
  throw ParameterError("unknown kernel selection '" + want + "' (expected scalar, avx2 or auto)");
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels(std::getenv("MMW_ASEP_KERNEL"));
  return table;
}

}  // namespace mmw::kernels
