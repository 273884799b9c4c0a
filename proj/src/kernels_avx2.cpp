// AVX2+FMA variants of the modular row kernels. Values are below 2^26, so
// products fit exactly in a double mantissa and one floor(x / p) estimate
// (off by at most one) gives the remainder after a single correction step.

#include "qdop/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace qdop::kernels {

namespace {

__attribute__((target("avx2,fma"))) inline __m256d reduce(__m256d x, __m256d P, __m256d invP) {
  __m256d qt = _mm256_floor_pd(_mm256_mul_pd(x, invP));
  __m256d r = _mm256_fnmadd_pd(qt, P, x);
  __m256d zero = _mm256_setzero_pd();
  r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), P));
  r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, P, _CMP_GE_OQ), P));
  return r;
}

}  // namespace

__attribute__((target("avx2,fma"))) void submul_mod_avx2(uint32_t* dst, const uint32_t* src,
                                                          uint32_t f, std::size_t n, uint32_t p) {
  const __m256d P = _mm256_set1_pd(p);
  const __m256d invP = _mm256_set1_pd(1.0 / p);
  const __m256d F = _mm256_set1_pd(f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
    __m256d s = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i)));
    __m256d x = _mm256_fnmadd_pd(F, s, d);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), _mm256_cvtpd_epi32(reduce(x, P, invP)));
  }
  submul_mod_scalar(dst + i, src + i, f, n - i, p);
}

__attribute__((target("avx2,fma"))) void scale_mod_avx2(uint32_t* dst, uint32_t f, std::size_t n,
                                                         uint32_t p) {
  const __m256d P = _mm256_set1_pd(p);
  const __m256d invP = _mm256_set1_pd(1.0 / p);
  const __m256d F = _mm256_set1_pd(f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
    __m256d x = _mm256_mul_pd(F, d);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), _mm256_cvtpd_epi32(reduce(x, P, invP)));
  }
  scale_mod_scalar(dst + i, f, n - i, p);
}

}  // namespace qdop::kernels

#else

namespace qdop::kernels {

void submul_mod_avx2(uint32_t* dst, const uint32_t* src, uint32_t f, std::size_t n, uint32_t p) {
  submul_mod_scalar(dst, src, f, n, p);
}

void scale_mod_avx2(uint32_t* dst, uint32_t f, std::size_t n, uint32_t p) {
  scale_mod_scalar(dst, f, n, p);
}

}  // namespace qdop::kernels

#endif
