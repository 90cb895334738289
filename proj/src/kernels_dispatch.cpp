#include "rmcs/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rmcs::kernels {

#ifdef RMCS_HAVE_AVX2
namespace detail {
const KernelTable& avx2_kernel_table();
}
#endif

const KernelTable* avx2_kernels() {
#ifdef RMCS_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) return &detail::avx2_kernel_table();
#endif
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("RMCS_KERNELS");
    const std::string want = env ? env : "";
    if (want == "scalar") return &scalar_kernels();
    const KernelTable* avx2 = avx2_kernels();
    if (want == "avx2") {
      if (!avx2) throw std::runtime_error("RMCS_KERNELS=avx2 requested but AVX2 unavailable");
      return avx2;
    }
    return avx2 ? avx2 : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace rmcs::kernels
