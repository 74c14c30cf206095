#include <cstdlib>
#include <string_view>

#include "erange/kernels.hpp"

namespace erange::kernels {

#if !(defined(__x86_64__) || defined(_M_X64))
const Table* avx2_table() { return nullptr; }
#endif
#if !defined(__aarch64__)
const Table* neon_table() { return nullptr; }
#endif

namespace {

struct Choice {
  const Table* table;
  Isa isa;
};

Choice choose() {
  const char* env = std::getenv("ERANGE_SIMD");
  if (env && std::string_view(env) == "scalar") return {&scalar_table(), Isa::scalar};
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    if (const Table* t = avx2_table()) return {t, Isa::avx2};
#endif
#if defined(__aarch64__)
  if (const Table* t = neon_table()) return {t, Isa::neon};
#endif
  return {&scalar_table(), Isa::scalar};
}

const Choice& chosen() {
  static const Choice c = choose();
  return c;
}

}  // namespace

const Table& active() { return *chosen().table; }
Isa active_isa() { return chosen().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    case Isa::scalar: break;
  }
  return "scalar";
}

}  // namespace erange::kernels
