#include <atomic>

#include "qdop/kernels.hpp"

namespace qdop::kernels {

namespace {
std::atomic<int> forced{-1};
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Impl active_impl() {
  int f = forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Impl>(f);
  return avx2_supported() ? Impl::Avx2 : Impl::Scalar;
}

void force_impl(std::optional<Impl> impl) {
  forced.store(impl ? static_cast<int>(*impl) : -1, std::memory_order_relaxed);
}

void submul_mod_scalar(uint32_t* dst, const uint32_t* src, uint32_t f, std::size_t n, uint32_t p) {
  for (std::size_t i = 0; i < n; ++i) {
    uint64_t prod = static_cast<uint64_t>(f) * src[i] % p;
    uint64_t d = dst[i];
    dst[i] = static_cast<uint32_t>(d >= prod ? d - prod : d + p - prod);
  }
}

void scale_mod_scalar(uint32_t* dst, uint32_t f, std::size_t n, uint32_t p) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<uint32_t>(static_cast<uint64_t>(dst[i]) * f % p);
}

void submul_mod(uint32_t* dst, const uint32_t* src, uint32_t f, std::size_t n, uint32_t p) {
  if (p < (1u << 26) && active_impl() == Impl::Avx2) {
    submul_mod_avx2(dst, src, f, n, p);
  } else {
    submul_mod_scalar(dst, src, f, n, p);
  }
}

void scale_mod(uint32_t* dst, uint32_t f, std::size_t n, uint32_t p) {
  if (p < (1u << 26) && active_impl() == Impl::Avx2) {
    scale_mod_avx2(dst, f, n, p);
  } else {
    scale_mod_scalar(dst, f, n, p);
  }
}

}  // namespace qdop::kernels
