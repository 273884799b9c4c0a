#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace qdop::kernels {

// Largest prime below 2^26; keeps f*x exact in a double for the vector path.
inline constexpr uint32_t kPrime = 67108859;

enum class Impl { Scalar, Avx2 };

bool avx2_supported();
// Implementation used by the dispatching entry points. Defaults to the best
// one the CPU supports; force_impl overrides it (nullopt restores the default).
Impl active_impl();
void force_impl(std::optional<Impl> impl);

// dst[i] = (dst[i] - f * src[i]) mod p, for values already reduced mod p.
void submul_mod_scalar(uint32_t* dst, const uint32_t* src, uint32_t f, std::size_t n, uint32_t p);
void submul_mod_avx2(uint32_t* dst, const uint32_t* src, uint32_t f, std::size_t n, uint32_t p);
void submul_mod(uint32_t* dst, const uint32_t* src, uint32_t f, std::size_t n, uint32_t p);

// dst[i] = (dst[i] * f) mod p
void scale_mod_scalar(uint32_t* dst, uint32_t f, std::size_t n, uint32_t p);
void scale_mod_avx2(uint32_t* dst, uint32_t f, std::size_t n, uint32_t p);
void scale_mod(uint32_t* dst, uint32_t f, std::size_t n, uint32_t p);

}  // namespace qdop::kernels
